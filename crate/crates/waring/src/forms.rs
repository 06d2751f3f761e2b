//! The binary-form data model and Waring decompositions.
//!
//! A degree-d form is stored through its normalized coefficients c_0..c_d,
//! where the raw coefficient of x^i y^(d-i) is binom(d,i) c_i. Every formula
//! downstream (Hankel matrices, node systems, strata polynomials) is written
//! in the c_i, so raw coefficients appear only at I/O boundaries.

use crate::interval::{IntervalF, DEFAULT_PRECISION};
use crate::scalar::{binomial, sign, to_decimal_string, to_rational_string, Rat};
use crate::{Error, Result};
use num::{One, Signed, Zero};

/// Exact-or-interval scalar. Interval values are certified enclosures.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(Rat),
    Interval(IntervalF),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Exact(Rat::zero())
    }

    pub fn one() -> Self {
        Scalar::Exact(Rat::one())
    }

    pub fn from_rat(x: Rat) -> Self {
        Scalar::Exact(x)
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&Rat> {
        match self {
            Scalar::Exact(x) => Some(x),
            Scalar::Interval(_) => None,
        }
    }

    pub fn to_interval(&self, precision: u32) -> IntervalF {
        match self {
            Scalar::Exact(x) => IntervalF::point(x.clone()).with_precision(precision),
            Scalar::Interval(i) => i.clone().with_precision(precision),
        }
    }

    pub fn is_exactly_zero(&self) -> bool {
        matches!(self, Scalar::Exact(x) if x.is_zero())
    }

    pub fn definitely_nonzero(&self) -> bool {
        match self {
            Scalar::Exact(x) => !x.is_zero(),
            Scalar::Interval(i) => !i.contains_zero(),
        }
    }

    fn binary(&self, rhs: &Scalar, f: impl Fn(&Rat, &Rat) -> Rat, g: impl Fn(&IntervalF, &IntervalF) -> IntervalF) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(f(a, b)),
            _ => {
                let p = self.precision().max(rhs.precision());
                Scalar::Interval(g(&self.to_interval(p), &rhs.to_interval(p)))
            }
        }
    }

    fn precision(&self) -> u32 {
        match self {
            Scalar::Exact(_) => DEFAULT_PRECISION,
            Scalar::Interval(i) => i.precision(),
        }
    }

    pub fn add(&self, rhs: &Scalar) -> Scalar {
        self.binary(rhs, |a, b| a + b, |a, b| a.add(b))
    }

    pub fn sub(&self, rhs: &Scalar) -> Scalar {
        self.binary(rhs, |a, b| a - b, |a, b| a.sub(b))
    }

    pub fn mul(&self, rhs: &Scalar) -> Scalar {
        self.binary(rhs, |a, b| a * b, |a, b| a.mul(b))
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Exact(a) => Scalar::Exact(-a.clone()),
            Scalar::Interval(i) => Scalar::Interval(i.neg()),
        }
    }

    pub fn pow(&self, n: usize) -> Scalar {
        match self {
            Scalar::Exact(a) => Scalar::Exact(if n == 0 { Rat::one() } else { a.pow(n as i32) }),
            Scalar::Interval(i) => Scalar::Interval(i.pow(n)),
        }
    }

    /// Upper bound for |self|.
    pub fn mag(&self) -> Rat {
        match self {
            Scalar::Exact(a) => a.abs(),
            Scalar::Interval(i) => i.mag(),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Scalar::Exact(a) => to_rational_string(a),
            Scalar::Interval(i) => format!(
                "[{}, {}]",
                to_decimal_string(i.lo(), 25),
                to_decimal_string(i.hi(), 25)
            ),
        }
    }
}

/// Complex scalar as a pair of real scalars; real values have `im == 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct CScalar {
    pub re: Scalar,
    pub im: Scalar,
}

impl CScalar {
    pub fn real(re: Scalar) -> Self {
        CScalar {
            re,
            im: Scalar::zero(),
        }
    }

    pub fn from_rat(x: Rat) -> Self {
        Self::real(Scalar::Exact(x))
    }

    pub fn is_real(&self) -> bool {
        self.im.is_exactly_zero()
    }

    pub fn add(&self, rhs: &CScalar) -> CScalar {
        CScalar {
            re: self.re.add(&rhs.re),
            im: self.im.add(&rhs.im),
        }
    }

    pub fn mul(&self, rhs: &CScalar) -> CScalar {
        CScalar {
            re: self.re.mul(&rhs.re).sub(&self.im.mul(&rhs.im)),
            im: self.re.mul(&rhs.im).add(&self.im.mul(&rhs.re)),
        }
    }

    pub fn pow(&self, n: usize) -> CScalar {
        let mut acc = CScalar::from_rat(Rat::one());
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }
}

/// One term lambda (alpha x + beta y)^d of a decomposition.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearFormTerm {
    pub lambda: CScalar,
    pub alpha: CScalar,
    pub beta: CScalar,
}

impl LinearFormTerm {
    pub fn real_exact(lambda: Rat, alpha: Rat, beta: Rat) -> Self {
        LinearFormTerm {
            lambda: CScalar::from_rat(lambda),
            alpha: CScalar::from_rat(alpha),
            beta: CScalar::from_rat(beta),
        }
    }

    pub fn real(lambda: Scalar, alpha: Scalar, beta: Scalar) -> Self {
        LinearFormTerm {
            lambda: CScalar::real(lambda),
            alpha: CScalar::real(alpha),
            beta: CScalar::real(beta),
        }
    }

    pub fn is_real(&self) -> bool {
        self.lambda.is_real() && self.alpha.is_real() && self.beta.is_real()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exactness {
    ExactRational,
    CertifiedInterval,
    Float,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Field {
    Real,
    Complex,
}

#[derive(Clone, Debug)]
pub struct WaringDecomposition {
    pub degree: usize,
    pub terms: Vec<LinearFormTerm>,
    pub exactness: Exactness,
    pub field: Field,
}

impl WaringDecomposition {
    pub fn real_exact(degree: usize, terms: Vec<(Rat, Rat, Rat)>) -> Self {
        WaringDecomposition {
            degree,
            terms: terms
                .into_iter()
                .map(|(l, a, b)| LinearFormTerm::real_exact(l, a, b))
                .collect(),
            exactness: Exactness::ExactRational,
            field: Field::Real,
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Pairwise linear independence of the terms: every cross product
    /// alpha_i beta_j - alpha_j beta_i is nonzero (exactly, or certified by
    /// an interval excluding zero).
    pub fn pairwise_independent(&self) -> bool {
        for i in 0..self.terms.len() {
            for j in i + 1..self.terms.len() {
                let (a, b) = (&self.terms[i], &self.terms[j]);
                let cross = a
                    .alpha
                    .mul(&b.beta)
                    .add(&a.beta.mul(&b.alpha).mul(&CScalar::from_rat(-Rat::one())));
                let nz = cross.re.definitely_nonzero() || cross.im.definitely_nonzero();
                if !nz {
                    return false;
                }
            }
        }
        true
    }
}

/// A real binary form via its normalized coefficient vector.
#[derive(Clone, Debug, PartialEq)]
pub struct BinaryForm {
    degree: usize,
    coeffs: Vec<Rat>,
}

impl BinaryForm {
    /// From raw coefficients: `raw[i]` multiplies x^i y^(d-i).
    pub fn from_raw(degree: usize, raw: &[Rat]) -> Result<Self> {
        if raw.len() != degree + 1 {
            return Err(Error::Dimension(format!(
                "degree {degree} needs {} coefficients, got {}",
                degree + 1,
                raw.len()
            )));
        }
        if raw.iter().all(|c| c.is_zero()) {
            return Err(Error::ZeroForm);
        }
        Ok(BinaryForm {
            degree,
            coeffs: raw
                .iter()
                .enumerate()
                .map(|(i, c)| c / binomial(degree, i))
                .collect(),
        })
    }

    /// From normalized coefficients c_0..c_d.
    pub fn from_normalized(degree: usize, coeffs: &[Rat]) -> Result<Self> {
        if coeffs.len() != degree + 1 {
            return Err(Error::Dimension("coefficient count".into()));
        }
        if coeffs.iter().all(|c| c.is_zero()) {
            return Err(Error::ZeroForm);
        }
        Ok(BinaryForm {
            degree,
            coeffs: coeffs.to_vec(),
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Normalized coefficients c_0..c_d.
    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &Rat {
        &self.coeffs[i]
    }

    pub fn to_raw(&self) -> Vec<Rat> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * binomial(self.degree, i))
            .collect()
    }

    pub fn scale(&self, a: &Rat) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::ZeroForm);
        }
        Ok(BinaryForm {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|c| c * a).collect(),
        })
    }

    /// The monomial x^m y^(d-m), normalized.
    pub fn monomial(degree: usize, m: usize) -> Result<Self> {
        if m > degree {
            return Err(Error::Parameter(format!("monomial exponent {m} > {degree}")));
        }
        let mut coeffs = vec![Rat::zero(); degree + 1];
        coeffs[m] = binomial(degree, m).recip();
        Ok(BinaryForm { degree, coeffs })
    }

    /// Projective equality: equal up to a nonzero rational scale.
    pub fn proportional_to(&self, other: &BinaryForm) -> bool {
        if self.degree != other.degree {
            return false;
        }
        let k = match self.coeffs.iter().position(|c| !c.is_zero()) {
            Some(k) => k,
            None => return false,
        };
        if other.coeffs[k].is_zero() {
            return false;
        }
        let scale = &self.coeffs[k] / &other.coeffs[k];
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .all(|(a, b)| *a == b * &scale)
    }

    /// Rank-1 detection: is the form lambda (alpha x + beta y)^d?
    ///
    /// Succeeds iff the full Hankel matrix has rank 1, i.e. all 2x2 minors
    /// c_i c_{j+1} - c_{i+1} c_j vanish. The representative (alpha, beta) has
    /// its first nonzero coordinate positive; lambda absorbs signs.
    pub fn is_power(&self) -> Option<(Rat, Rat, Rat)> {
        let d = self.degree;
        let first = self.coeffs.iter().position(|c| !c.is_zero())?;
        let last = d - self.coeffs.iter().rev().position(|c| !c.is_zero())?;
        let (lambda, alpha, beta) = if first == last {
            // single spike: a pure power only at the ends
            if first == 0 {
                (self.coeffs[0].clone(), Rat::zero(), Rat::one())
            } else if first == d {
                (self.coeffs[d].clone(), Rat::one(), Rat::zero())
            } else {
                return None;
            }
        } else {
            if self.coeffs.iter().any(|c| c.is_zero()) {
                return None; // geometric sequences have full support
            }
            let r = &self.coeffs[1] / &self.coeffs[0];
            for i in 0..d {
                if self.coeffs[i + 1] != &self.coeffs[i] * &r {
                    return None;
                }
            }
            (self.coeffs[0].clone(), r, Rat::one())
        };
        // normalize: first nonzero coordinate of (alpha, beta) positive
        let flip = if !alpha.is_zero() {
            sign(&alpha) < 0
        } else {
            sign(&beta) < 0
        };
        let (alpha, beta, lambda) = if flip {
            let l = if d % 2 == 0 { lambda } else { -lambda };
            (-alpha, -beta, l)
        } else {
            (alpha, beta, lambda)
        };
        Some((lambda, alpha, beta))
    }
}

/// Expanded (normalized) coefficients of a decomposition:
/// c_i = sum_j lambda_j alpha_j^i beta_j^(d-i).
pub fn expand(dec: &WaringDecomposition) -> Vec<CScalar> {
    let d = dec.degree;
    let mut out = vec![CScalar::from_rat(Rat::zero()); d + 1];
    for term in &dec.terms {
        for (i, slot) in out.iter_mut().enumerate() {
            let v = term
                .lambda
                .mul(&term.alpha.pow(i))
                .mul(&term.beta.pow(d - i));
            *slot = slot.add(&v);
        }
    }
    out
}

/// Result of comparing a decomposition's expansion against a target form.
#[derive(Clone, Debug, PartialEq)]
pub enum VerifyOutcome {
    /// Exact rational equality.
    Exact,
    /// All residual enclosures within the tolerance; carries the bound.
    Certified(Rat),
    /// Residual provably exceeds the tolerance (or exact mismatch).
    Failed(Rat),
}

impl VerifyOutcome {
    pub fn passed(&self) -> bool {
        !matches!(self, VerifyOutcome::Failed(_))
    }
}

/// Compare `expand(dec)` to `target` in the max-norm of normalized
/// coefficients, exactly when possible, otherwise by interval enclosure.
/// With `projective`, comparison is up to one global scale fixed at the
/// first nonzero target coefficient.
pub fn verify(
    dec: &WaringDecomposition,
    target: &BinaryForm,
    tol: &Rat,
    projective: bool,
) -> Result<VerifyOutcome> {
    if dec.degree != target.degree() {
        return Err(Error::DegreeMismatch(dec.degree, target.degree()));
    }
    let expanded = expand(dec);
    let scale: CScalar = if projective {
        let k = target
            .coeffs()
            .iter()
            .position(|c| !c.is_zero())
            .expect("nonzero form");
        if !expanded[k].re.definitely_nonzero() && !expanded[k].im.definitely_nonzero() {
            return Ok(VerifyOutcome::Failed(Rat::one()));
        }
        // scale = expanded_k / target_k, applied to the target
        let inv = target.coeff(k).clone().recip();
        expanded[k].mul(&CScalar::from_rat(inv))
    } else {
        CScalar::from_rat(Rat::one())
    };
    let mut all_exact = true;
    let mut bound = Rat::zero();
    for (i, got) in expanded.iter().enumerate() {
        let want = scale.mul(&CScalar::from_rat(target.coeff(i).clone()));
        let dre = got.re.sub(&want.re);
        let dim = got.im.sub(&want.im);
        for diff in [dre, dim] {
            match diff {
                Scalar::Exact(x) => {
                    if !x.is_zero() {
                        return Ok(VerifyOutcome::Failed(x.abs()));
                    }
                }
                Scalar::Interval(iv) => {
                    all_exact = false;
                    bound = bound.max(iv.mag());
                }
            }
        }
    }
    if all_exact {
        Ok(VerifyOutcome::Exact)
    } else if bound <= *tol {
        Ok(VerifyOutcome::Certified(bound))
    } else {
        Ok(VerifyOutcome::Failed(bound))
    }
}

/// The five-term two-parameter family decomposing x^3 y^2; defined for
/// nonzero a, b with a != +-b.
pub fn monomial_family_x3y2(a: &Rat, b: &Rat) -> Result<WaringDecomposition> {
    if a.is_zero() || b.is_zero() || a == b || *a == -b.clone() {
        return Err(Error::Parameter(
            "family needs nonzero a, b with a != +-b".into(),
        ));
    }
    let a2 = a * a;
    let b2 = b * b;
    let twenty = Rat::from_integer(20.into());
    let ten = Rat::from_integer(10.into());
    let lam_a = &b2 / (&twenty * &a2 * (&b2 - &a2));
    let lam_b = &a2 / (&twenty * &b2 * (&a2 - &b2));
    let lam_x = -(&a2 + &b2) / (&ten * &a2 * &b2);
    Ok(WaringDecomposition::real_exact(
        5,
        vec![
            (lam_a.clone(), Rat::one(), a.clone()),
            (lam_a, Rat::one(), -a.clone()),
            (lam_b.clone(), Rat::one(), b.clone()),
            (lam_b, Rat::one(), -b.clone()),
            (lam_x, Rat::one(), Rat::zero()),
        ],
    ))
}

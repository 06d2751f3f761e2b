//! Exact univariate polynomials over Q: arithmetic, gcd and square-free
//! (Yun) decomposition, Sturm sequences, resultants, and certified real-root
//! isolation with rational isolating intervals.
//!
//! Root isolation is the oracle behind both decomposition algorithms and all
//! cross-checks, so everything here stays in exact rational arithmetic; no
//! floating-point filters.

use crate::interval::IntervalF;
use crate::matrix::{det, RatMatrix};
use crate::scalar::{sign, simplest_rational_between, Rat};
use crate::{Error, Result};
use num::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq)]
pub struct UniPoly {
    /// Ascending coefficients; the last entry is nonzero unless empty.
    coeffs: Vec<Rat>,
}

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly { coeffs: vec![] }
    }

    pub fn constant(c: Rat) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn from_coeffs(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| crate::scalar::rat(c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> Rat {
        self.coeffs.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_interval(&self, x: &IntervalF) -> IntervalF {
        let mut acc = IntervalF::point(Rat::zero()).with_precision(x.precision());
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(&IntervalF::point(c.clone()));
        }
        acc
    }

    pub fn derivative(&self) -> UniPoly {
        if self.coeffs.len() <= 1 {
            return UniPoly::zero();
        }
        UniPoly::from_coeffs(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * Rat::from_integer((i + 1).into()))
                .collect(),
        )
    }

    pub fn add(&self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::from_coeffs((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }

    pub fn sub(&self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::from_coeffs((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }

    pub fn neg(&self) -> UniPoly {
        UniPoly::from_coeffs(self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    pub fn scale(&self, c: &Rat) -> UniPoly {
        UniPoly::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::from_coeffs(out)
    }

    /// Exact Euclidean division: `self = q * rhs + r`, `deg r < deg rhs`.
    pub fn divmod(&self, rhs: &UniPoly) -> (UniPoly, UniPoly) {
        assert!(!rhs.is_zero(), "division by zero polynomial");
        let d = rhs.degree().unwrap();
        let lc = rhs.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rat::zero(); self.coeffs.len().saturating_sub(d)];
        while rem.len() > d {
            let k = rem.len() - 1 - d;
            let factor = rem.last().unwrap() / &lc;
            if !factor.is_zero() {
                for (i, b) in rhs.coeffs.iter().enumerate() {
                    let v = &rem[k + i] - &factor * b;
                    rem[k + i] = v;
                }
                quot[k] = factor;
            }
            rem.pop();
        }
        (UniPoly::from_coeffs(quot), UniPoly::from_coeffs(rem))
    }

    pub fn monic(&self) -> UniPoly {
        match self.leading() {
            None => UniPoly::zero(),
            Some(lc) => self.scale(&lc.clone().recip()),
        }
    }

    /// Coefficient reversal at formal degree `n` (projective chart swap).
    pub fn reversed(&self, n: usize) -> UniPoly {
        let mut v = vec![Rat::zero(); n + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[n - i] = c.clone();
        }
        UniPoly::from_coeffs(v)
    }

    /// Divide out the (positive) content so coefficients are coprime
    /// integers. Sign-preserving: Sturm chains depend on it. Controls
    /// coefficient growth in remainder sequences.
    fn primitive(&self) -> UniPoly {
        if self.is_zero() {
            return UniPoly::zero();
        }
        let mut lcm = num::BigInt::one();
        for c in &self.coeffs {
            lcm = num::Integer::lcm(&lcm, c.denom());
        }
        let ints: Vec<num::BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&lcm / c.denom()))
            .collect();
        let mut g = num::BigInt::zero();
        for x in &ints {
            g = num::Integer::gcd(&g, x);
        }
        UniPoly::from_coeffs(
            ints.into_iter()
                .map(|x| Rat::from_integer(x / &g))
                .collect(),
        )
    }
}

/// Monic gcd over Q.
pub fn gcd(a: &UniPoly, b: &UniPoly) -> UniPoly {
    let mut a = a.primitive();
    let mut b = b.primitive();
    while !b.is_zero() {
        let (_, r) = a.divmod(&b);
        a = b;
        b = r.primitive();
    }
    a.monic()
}

/// Extended gcd: returns `(g, s, t)` with `s a + t b = g`, `g` monic.
pub fn ext_gcd(a: &UniPoly, b: &UniPoly) -> (UniPoly, UniPoly, UniPoly) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (UniPoly::constant(Rat::one()), UniPoly::zero());
    let (mut t0, mut t1) = (UniPoly::zero(), UniPoly::constant(Rat::one()));
    while !r1.is_zero() {
        let (q, r) = r0.divmod(&r1);
        let s = s0.sub(&q.mul(&s1));
        let t = t0.sub(&q.mul(&t1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
        t0 = t1;
        t1 = t;
    }
    match r0.leading() {
        None => (r0, s0, t0),
        Some(lc) => {
            let inv = lc.clone().recip();
            (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
        }
    }
}

/// Inverse of `a` modulo `g` (requires `gcd(a, g) = 1`).
pub fn inv_mod(a: &UniPoly, g: &UniPoly) -> Result<UniPoly> {
    let (d, s, _) = ext_gcd(a, g);
    if d.degree() != Some(0) {
        return Err(Error::Internal("polynomial not invertible mod g".into()));
    }
    Ok(s.divmod(g).1)
}

pub fn is_squarefree(q: &UniPoly) -> Result<bool> {
    if q.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if q.degree() == Some(0) {
        return Ok(true);
    }
    Ok(gcd(q, &q.derivative()).degree() == Some(0))
}

pub fn squarefree_part(q: &UniPoly) -> UniPoly {
    if q.degree().unwrap_or(0) == 0 {
        return q.monic();
    }
    let g = gcd(q, &q.derivative());
    q.divmod(&g).0.monic()
}

/// Yun square-free decomposition: pairwise-coprime monic factors with their
/// multiplicities, `q = lc * prod f_i^{m_i}`.
pub fn squarefree_decomposition(q: &UniPoly) -> Result<Vec<(UniPoly, usize)>> {
    if q.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let q = q.monic();
    if q.degree() == Some(0) {
        return Ok(vec![]);
    }
    let dq = q.derivative();
    let mut a = gcd(&q, &dq);
    let mut b = q.divmod(&a).0;
    let mut c = dq.divmod(&a).0;
    let mut d = c.sub(&b.derivative());
    let mut out = Vec::new();
    let mut i = 1usize;
    while b.degree() != Some(0) {
        a = gcd(&b, &d);
        if a.degree() != Some(0) {
            out.push((a.monic(), i));
        }
        b = b.divmod(&a).0;
        c = d.divmod(&a).0;
        d = c.sub(&b.derivative());
        i += 1;
    }
    Ok(out)
}

/// Resultant via the Sylvester determinant at *formal* degrees `(m, n)`.
///
/// Using formal degrees (coefficient slots up to `m`, `n`, zeros allowed at
/// the top) makes this the resultant of the associated binary forms, which
/// correctly accounts for roots at infinity.
pub fn resultant_formal(u: &[Rat], v: &[Rat], m: usize, n: usize) -> Rat {
    if m == 0 && n == 0 {
        return Rat::one();
    }
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    let get = |c: &[Rat], i: usize| c.get(i).cloned().unwrap_or_else(Rat::zero);
    for i in 0..n {
        let mut row = vec![Rat::zero(); size];
        for j in 0..=m {
            row[i + j] = get(u, m - j);
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![Rat::zero(); size];
        for j in 0..=n {
            row[i + j] = get(v, n - j);
        }
        rows.push(row);
    }
    det(&RatMatrix::from_rows(rows).expect("square sylvester")).expect("square")
}

pub fn resultant(u: &UniPoly, v: &UniPoly) -> Rat {
    match (u.degree(), v.degree()) {
        (None, _) | (_, None) => Rat::zero(),
        (Some(m), Some(n)) => resultant_formal(u.coeffs(), v.coeffs(), m, n),
    }
}

/// Discriminant with the standard normalization
/// `disc q = (-1)^(n(n-1)/2) Res(q, q') / lc(q)`.
pub fn discriminant(q: &UniPoly) -> Result<Rat> {
    if q.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let n = q.degree().unwrap();
    if n <= 1 {
        return Ok(Rat::one());
    }
    let r = resultant(q, &q.derivative());
    let s = if (n * (n - 1) / 2) % 2 == 0 { 1 } else { -1 };
    Ok(r * Rat::from_integer(s.into()) / q.leading().unwrap().clone())
}

/// Discriminant of the binary form with ascending coefficients `q`
/// (coefficient of x^i y^(r-i)), as the formal resultant of its partials.
/// Zero iff the form has a repeated projective root.
pub fn binary_form_disc(q: &[Rat]) -> Rat {
    let r = q.len() - 1;
    if r <= 1 {
        return Rat::one();
    }
    let dx: Vec<Rat> = (0..r)
        .map(|j| &q[j + 1] * Rat::from_integer((j + 1).into()))
        .collect();
    let dy: Vec<Rat> = (0..r)
        .map(|j| &q[j] * Rat::from_integer((r - j).into()))
        .collect();
    resultant_formal(&dx, &dy, r - 1, r - 1)
}

// ---------------------------------------------------------------------------
// Sturm sequences and root isolation
// ---------------------------------------------------------------------------

pub struct SturmChain {
    seq: Vec<UniPoly>,
}

impl SturmChain {
    pub fn new(q: &UniPoly) -> Self {
        let mut seq = vec![q.primitive(), q.derivative().primitive()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let (_, r) = seq[n - 2].divmod(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            seq.push(r.neg().primitive());
        }
        SturmChain { seq }
    }

    fn variations<F: Fn(&UniPoly) -> i32>(&self, sgn: F) -> usize {
        let mut count = 0;
        let mut last = 0;
        for p in &self.seq {
            let s = sgn(p);
            if s != 0 {
                if last != 0 && s != last {
                    count += 1;
                }
                last = s;
            }
        }
        count
    }

    pub fn variations_at(&self, x: &Rat) -> usize {
        self.variations(|p| sign(&p.eval(x)))
    }

    pub fn variations_at_neg_inf(&self) -> usize {
        self.variations(|p| match p.degree() {
            None => 0,
            Some(d) => {
                let s = sign(p.leading().unwrap());
                if d % 2 == 0 {
                    s
                } else {
                    -s
                }
            }
        })
    }

    pub fn variations_at_pos_inf(&self) -> usize {
        self.variations(|p| p.leading().map_or(0, sign))
    }

    /// Distinct real roots in the open interval `(a, b)`; endpoints must not
    /// be roots of the underlying polynomial.
    pub fn count_open(&self, a: &Rat, b: &Rat) -> usize {
        self.variations_at(a) - self.variations_at(b)
    }
}

/// Exact count of distinct real roots via Sturm sign variations at -inf/+inf.
pub fn sturm_distinct_real_roots(q: &UniPoly) -> Result<usize> {
    if q.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if q.degree() == Some(0) {
        return Ok(0);
    }
    let chain = SturmChain::new(&squarefree_part(q));
    Ok(chain.variations_at_neg_inf() - chain.variations_at_pos_inf())
}

/// Cauchy root bound: all real roots lie in `(-b, b)`.
pub fn root_bound(q: &UniPoly) -> Rat {
    let lc = q.leading().expect("nonzero polynomial").abs();
    let max = q
        .coeffs()
        .iter()
        .map(|c| c.abs())
        .max()
        .unwrap_or_else(Rat::zero);
    Rat::one() + max / lc
}

/// A certified isolating interval for one distinct real root.
///
/// Either an exact rational point (`lo == hi`) or an open interval with
/// non-root endpoints of opposite sign for the (monic, square-free) defining
/// polynomial.
#[derive(Clone, Debug)]
pub struct IsolatedRoot {
    pub defining: UniPoly,
    pub lo: Rat,
    pub hi: Rat,
    pub multiplicity: usize,
}

impl IsolatedRoot {
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn exact_value(&self) -> Option<&Rat> {
        self.is_exact().then_some(&self.lo)
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn to_interval(&self, precision: u32) -> IntervalF {
        if self.is_exact() {
            IntervalF::point(self.lo.clone()).with_precision(precision)
        } else {
            IntervalF::new(self.lo.clone(), self.hi.clone(), precision)
        }
    }

    /// Shrink the interval below `width` by sign-preserving bisection.
    /// Collapses onto rational roots hit by a midpoint.
    pub fn refine(&mut self, width: &Rat) {
        if self.is_exact() {
            return;
        }
        let two = Rat::from_integer(2.into());
        while self.width() > *width {
            let mid = (&self.lo + &self.hi) / &two;
            let s = sign(&self.defining.eval(&mid));
            if s == 0 {
                self.lo = mid.clone();
                self.hi = mid;
                return;
            }
            if s == sign(&self.defining.eval(&self.lo)) {
                self.lo = mid;
            } else {
                self.hi = mid;
            }
        }
    }

    pub fn refined(mut self, width: &Rat) -> Self {
        self.refine(width);
        self
    }
}

/// Isolate all distinct real roots with multiplicities, sorted ascending.
pub fn isolate_real_roots(q: &UniPoly) -> Result<Vec<IsolatedRoot>> {
    if q.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut out: Vec<IsolatedRoot> = Vec::new();
    for (factor, mult) in squarefree_decomposition(q)? {
        for root in isolate_squarefree(&factor) {
            out.push(IsolatedRoot {
                multiplicity: mult,
                ..root
            });
        }
    }
    // Roots of distinct Yun factors are distinct reals; shrink intervals
    // until the isolating intervals are pairwise disjoint, then sort.
    let narrow = crate::scalar::ratio(1, 1 << 20);
    loop {
        let mut overlapping = false;
        out.sort_by(|a, b| (&a.lo + &a.hi).cmp(&(&b.lo + &b.hi)));
        for i in 1..out.len() {
            if out[i - 1].hi > out[i].lo
                || (out[i - 1].is_exact() && out[i - 1].hi == out[i].lo && !out[i].is_exact())
            {
                let w = out[i].width().min(out[i - 1].width()) / Rat::from_integer(4.into());
                let w = w.min(narrow.clone());
                out[i - 1].refine(&w);
                out[i].refine(&w);
                overlapping = true;
            }
        }
        if !overlapping {
            break;
        }
    }
    Ok(out)
}

fn isolate_squarefree(f: &UniPoly) -> Vec<IsolatedRoot> {
    let f = f.monic();
    if f.degree() == Some(0) {
        return vec![];
    }
    if f.degree() == Some(1) {
        let root = -f.coeff(0) / f.coeff(1);
        return vec![IsolatedRoot {
            defining: f,
            lo: root.clone(),
            hi: root,
            multiplicity: 1,
        }];
    }
    let mut bound = root_bound(&f);
    while f.eval(&bound).is_zero() || f.eval(&-bound.clone()).is_zero() {
        bound += Rat::one();
    }
    let chain = SturmChain::new(&f);
    let mut out = Vec::new();
    let mut stack = vec![(-bound.clone(), bound.clone())];
    while let Some((lo, hi)) = stack.pop() {
        let n = chain.count_open(&lo, &hi);
        match n {
            0 => {}
            1 => out.push(sharpen(&f, lo, hi)),
            _ => {
                let mid = (&lo + &hi) / Rat::from_integer(2.into());
                if f.eval(&mid).is_zero() {
                    // mid is a rational root: split it off and isolate the
                    // cofactor from scratch (partial results are discarded,
                    // the cofactor pass re-finds them)
                    let mut fresh = vec![IsolatedRoot {
                        defining: f.clone(),
                        lo: mid.clone(),
                        hi: mid.clone(),
                        multiplicity: 1,
                    }];
                    let lin = UniPoly::from_coeffs(vec![-mid.clone(), Rat::one()]);
                    let (quot, rem) = f.divmod(&lin);
                    debug_assert!(rem.is_zero());
                    fresh.extend(isolate_squarefree(&quot).into_iter().map(|r| IsolatedRoot {
                        defining: f.clone(),
                        ..r
                    }));
                    return fresh;
                }
                stack.push((lo, mid.clone()));
                stack.push((mid, hi));
            }
        }
    }
    out
}

/// Narrow a one-root interval, then try to collapse it onto a rational root
/// via the simplest rational inside.
fn sharpen(f: &UniPoly, mut lo: Rat, mut hi: Rat) -> IsolatedRoot {
    let two = Rat::from_integer(2.into());
    let target = crate::scalar::ratio(1, 1i64 << 48);
    while &hi - &lo > target {
        let mid = (&lo + &hi) / &two;
        let s = sign(&f.eval(&mid));
        if s == 0 {
            return IsolatedRoot {
                defining: f.clone(),
                lo: mid.clone(),
                hi: mid,
                multiplicity: 1,
            };
        }
        if s == sign(&f.eval(&lo)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let cand = simplest_rational_between(&lo, &hi);
    if f.eval(&cand).is_zero() {
        return IsolatedRoot {
            defining: f.clone(),
            lo: cand.clone(),
            hi: cand,
            multiplicity: 1,
        };
    }
    IsolatedRoot {
        defining: f.clone(),
        lo,
        hi,
        multiplicity: 1,
    }
}

/// Power sums `p_0 .. p_upto` of the roots of a monic polynomial, via
/// Newton's identities (exact).
pub fn power_sums(g: &UniPoly, upto: usize) -> Vec<Rat> {
    let k = g.degree().expect("nonzero");
    debug_assert!(g.leading().unwrap().is_one());
    let a = |i: usize| g.coeff(i); // g = t^k + a_{k-1} t^{k-1} + ... + a_0
    let mut p = vec![Rat::zero(); upto + 1];
    p[0] = Rat::from_integer(k.into());
    for m in 1..=upto {
        let mut s = if m <= k {
            -a(k - m) * Rat::from_integer(m.into())
        } else {
            Rat::zero()
        };
        for i in 1..m {
            if i <= k {
                let term = a(k - i) * &p[m - i];
                s -= term;
            }
        }
        p[m] = s;
    }
    p
}

/// `sum_j B(alpha_j)` over all roots of monic squarefree `g` (the trace form),
/// computed exactly from power sums.
pub fn trace_of(b: &UniPoly, g: &UniPoly) -> Rat {
    let k = g.degree().expect("nonzero");
    let b = b.divmod(g).1;
    let ps = power_sums(g, k.saturating_sub(1));
    b.coeffs()
        .iter()
        .enumerate()
        .fold(Rat::zero(), |acc, (m, c)| acc + c * &ps[m])
}

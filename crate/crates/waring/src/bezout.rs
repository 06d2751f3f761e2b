//! Bezoutian matrices and exact inertia.
//!
//! `B_n(u, v)` is the symmetric matrix of the divided difference
//! `(u(t) v(s) - u(s) v(t)) / (t - s)`. Its signature counts distinct real
//! roots (Borchardt–Jacobi), and positive definiteness certifies that a
//! degree-r polynomial has r distinct real roots, which is the acceptance
//! test at the heart of the minimal-decomposition search.

use crate::matrix::{char_poly, leading_principal_minors, RatMatrix};
use crate::scalar::{sign, Rat};
use crate::univar::UniPoly;
use crate::{Error, Result};
use num::Zero;

#[derive(Clone, Debug, PartialEq)]
pub struct Bezoutian {
    n: usize,
    entries: RatMatrix,
}

impl Bezoutian {
    pub fn size(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.entries
    }
}

/// The n-by-n Bezoutian of `u` and `v`; requires `deg u, deg v <= n`.
pub fn bezoutian(u: &UniPoly, v: &UniPoly, n: usize) -> Result<Bezoutian> {
    if n == 0 {
        return Err(Error::Dimension("bezoutian size must be >= 1".into()));
    }
    let du = u.degree().unwrap_or(0);
    let dv = v.degree().unwrap_or(0);
    if du > n || dv > n {
        return Err(Error::Dimension(format!(
            "bezoutian size {n} below degree {}",
            du.max(dv)
        )));
    }
    let mut m = RatMatrix::zeros(n, n);
    // (t^a s^b - s^a t^b) / (t - s) = sum_e t^(b+e) s^(a-1-e) for a > b
    for a in 0..=n {
        for b in 0..a {
            let w = u.coeff(a) * v.coeff(b) - u.coeff(b) * v.coeff(a);
            if w.is_zero() {
                continue;
            }
            for e in 0..(a - b) {
                let (i, j) = (b + e, a - 1 - e); // zero-based t^i s^j
                let val = m.get(i, j) + &w;
                *m.get_mut(i, j) = val;
            }
        }
    }
    Ok(Bezoutian { n, entries: m })
}

/// Leading principal minors `M_B(1) .. M_B(n)`, exact.
pub fn principal_minors(b: &Bezoutian) -> Vec<Rat> {
    leading_principal_minors(&b.entries).expect("square by construction")
}

/// Positive definiteness by Sylvester's criterion: all leading principal
/// minors strictly positive.
pub fn is_positive_definite(b: &Bezoutian) -> bool {
    principal_minors(b).iter().all(|m| sign(m) > 0)
}

/// Exact signature (eigenvalues are real by symmetry).
///
/// Uses the Jacobi minor-sign rule when every leading principal minor is
/// nonzero; otherwise falls back to counting characteristic-polynomial root
/// signs, which is exact because a real symmetric matrix has a real-rooted
/// characteristic polynomial (Descartes' rule is sharp there).
pub fn signature(b: &Bezoutian) -> i64 {
    let minors = principal_minors(b);
    if minors.iter().all(|m| !m.is_zero()) {
        let mut changes = 0i64;
        let mut last = 1i32;
        for m in &minors {
            let s = sign(m);
            if s != last {
                changes += 1;
            }
            last = s;
        }
        return b.n as i64 - 2 * changes;
    }
    let cp = char_poly(&b.entries).expect("square");
    let zeros = cp.iter().take_while(|c| c.is_zero()).count();
    let nonzero: Vec<&Rat> = cp.iter().skip(zeros).collect();
    let pos = descartes_variations(nonzero.iter().map(|c| sign(c)));
    let neg = descartes_variations(
        nonzero
            .iter()
            .enumerate()
            .map(|(i, c)| if i % 2 == 0 { sign(c) } else { -sign(c) }),
    );
    pos as i64 - neg as i64
}

fn descartes_variations<I: Iterator<Item = i32>>(signs: I) -> usize {
    let mut count = 0;
    let mut last = 0;
    for s in signs {
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

/// Borchardt–Jacobi: the number of distinct real roots of `q` equals the
/// signature of `B_r(q, q')` at `r = deg q`.
pub fn count_distinct_real_roots_bj(q: &UniPoly) -> Result<usize> {
    let r = match q.degree() {
        None => return Err(Error::ZeroPolynomial),
        Some(0) => return Err(Error::Parameter("constant polynomial".into())),
        Some(r) => r,
    };
    let b = bezoutian(q, &q.derivative(), r)?;
    Ok(signature(&b) as usize)
}

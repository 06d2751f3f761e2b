//! Dense exact linear algebra over the rationals.
//!
//! Elimination is fraction-free (Bareiss): each row is first scaled to
//! integers, then the one-step elimination keeps every intermediate entry an
//! exact integer minor of the scaled matrix, which avoids denominator
//! blow-up on the Hankel-type inputs this crate works with.

use crate::scalar::{sign, Rat};
use crate::{Error, Result};
use num::bigint::BigInt;
use num::{Integer, One, Zero};

#[derive(Clone, Debug, PartialEq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            *m.get_mut(i, i) = Rat::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Result<Self> {
        let nr = rows.len();
        let nc = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != nc) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(RatMatrix {
            rows: nr,
            cols: nc,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn mul(&self, rhs: &RatMatrix) -> Result<RatMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = RatMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = out.get(i, j) + a * rhs.get(k, j);
                    *out.get_mut(i, j) = v;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Result<Vec<Rat>> {
        if v.len() != self.cols {
            return Err(Error::Dimension("matrix-vector size".into()));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Rat::zero(), |acc, (a, x)| acc + a * x)
            })
            .collect())
    }

    pub fn trace(&self) -> Rat {
        (0..self.rows.min(self.cols)).fold(Rat::zero(), |acc, i| acc + self.get(i, i))
    }
}

/// Result of the fraction-free forward elimination.
struct Echelon {
    /// Scaled integer matrix after elimination, rows physically swapped.
    m: Vec<Vec<BigInt>>,
    /// (row, col) of each pivot, in elimination order.
    pivots: Vec<(usize, usize)>,
    /// Original index of each physical row.
    row_perm: Vec<usize>,
    /// Parity of row swaps.
    swap_sign: i32,
    /// Product of the per-row integer scale factors.
    scale: Rat,
}

impl Echelon {
    fn rank(&self) -> usize {
        self.pivots.len()
    }

    fn free_cols(&self, cols: usize) -> Vec<usize> {
        let piv: Vec<usize> = self.pivots.iter().map(|&(_, c)| c).collect();
        (0..cols).filter(|c| !piv.contains(c)).collect()
    }
}

/// Clear denominators row by row; `extra` appends one more column (the rhs).
fn to_integer_rows(a: &RatMatrix, extra: Option<&[Rat]>) -> (Vec<Vec<BigInt>>, Rat) {
    let mut scale = Rat::one();
    let mut rows = Vec::with_capacity(a.rows());
    for i in 0..a.rows() {
        let mut lcm = BigInt::one();
        let all = a
            .row(i)
            .iter()
            .chain(extra.map(|e| &e[i]).into_iter())
            .collect::<Vec<_>>();
        for x in &all {
            lcm = lcm.lcm(x.denom());
        }
        scale *= Rat::from_integer(lcm.clone());
        rows.push(
            all.into_iter()
                .map(|x| x.numer() * (&lcm / x.denom()))
                .collect(),
        );
    }
    (rows, scale)
}

fn eliminate(a: &RatMatrix, extra: Option<&[Rat]>) -> Echelon {
    let (mut m, scale) = to_integer_rows(a, extra);
    let nrows = a.rows();
    let ncols = a.cols(); // pivots may only come from the matrix part
    let width = if extra.is_some() { ncols + 1 } else { ncols };
    let mut row_perm: Vec<usize> = (0..nrows).collect();
    let mut pivots = Vec::new();
    let mut swap_sign = 1;
    let mut prev = BigInt::one();
    let mut k = 0usize;
    for c in 0..ncols {
        let Some(p) = (k..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        if p != k {
            m.swap(p, k);
            row_perm.swap(p, k);
            swap_sign = -swap_sign;
        }
        let piv = m[k][c].clone();
        for i in k + 1..nrows {
            let factor = m[i][c].clone();
            for j in 0..width {
                if j == c {
                    continue;
                }
                let num = &piv * &m[i][j] - &factor * &m[k][j];
                let (q, r) = num.div_rem(&prev);
                debug_assert!(r.is_zero(), "Bareiss exact division failed");
                m[i][j] = q;
            }
            m[i][c] = BigInt::zero();
        }
        pivots.push((k, c));
        prev = piv;
        k += 1;
        if k == nrows {
            break;
        }
    }
    Echelon {
        m,
        pivots,
        row_perm,
        swap_sign,
        scale,
    }
}

/// Exact determinant via Bareiss elimination.
///
/// Errors on non-square input.
pub fn det(a: &RatMatrix) -> Result<Rat> {
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "determinant of {}x{} matrix",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.rows();
    if n == 0 {
        return Ok(Rat::one());
    }
    let ech = eliminate(a, None);
    if ech.rank() < n {
        return Ok(Rat::zero());
    }
    let (r, c) = ech.pivots[n - 1];
    let d = Rat::from_integer(ech.m[r][c].clone());
    Ok(d * Rat::from_integer(BigInt::from(ech.swap_sign)) / ech.scale)
}

/// Basis of the right null space, one vector per free column.
///
/// Vectors are normalized so the first nonzero entry is 1 and the count
/// equals `cols - rank`. A zero matrix yields the standard basis.
pub fn kernel_basis(a: &RatMatrix) -> Vec<Vec<Rat>> {
    let ech = eliminate(a, None);
    let free = ech.free_cols(a.cols());
    let mut basis = Vec::with_capacity(free.len());
    for &f in &free {
        let mut x = vec![Rat::zero(); a.cols()];
        x[f] = Rat::one();
        for &(r, c) in ech.pivots.iter().rev() {
            let mut s = Rat::zero();
            for j in c + 1..a.cols() {
                if !x[j].is_zero() && !ech.m[r][j].is_zero() {
                    s += Rat::from_integer(ech.m[r][j].clone()) * &x[j];
                }
            }
            x[c] = -s / Rat::from_integer(ech.m[r][c].clone());
        }
        normalize_first_nonzero(&mut x);
        basis.push(x);
    }
    basis
}

fn normalize_first_nonzero(x: &mut [Rat]) {
    if let Some(p) = x.iter().position(|v| !v.is_zero()) {
        let lead = x[p].clone();
        for v in x.iter_mut() {
            *v = std::mem::take(v) / lead.clone();
        }
    }
}

/// Exact solution of `a x = rhs` for full-column-rank `a`.
///
/// The consistency of overdetermined systems is verified by substitution
/// before returning. Inconsistent input reports the offending original row;
/// rank-deficient input is an error.
pub fn solve(a: &RatMatrix, rhs: &[Rat]) -> Result<Vec<Rat>> {
    if rhs.len() != a.rows() {
        return Err(Error::Dimension("rhs length".into()));
    }
    let ech = eliminate(a, Some(rhs));
    if ech.rank() < a.cols() {
        return Err(Error::Underdetermined {
            rank: ech.rank(),
            cols: a.cols(),
        });
    }
    // rows below the pivot block are identically zero in the matrix part
    for i in ech.rank()..a.rows() {
        if !ech.m[i][a.cols()].is_zero() {
            return Err(Error::NoSolution {
                row: ech.row_perm[i],
            });
        }
    }
    let mut x = vec![Rat::zero(); a.cols()];
    for &(r, c) in ech.pivots.iter().rev() {
        let mut s = Rat::from_integer(ech.m[r][a.cols()].clone());
        for j in c + 1..a.cols() {
            if !x[j].is_zero() && !ech.m[r][j].is_zero() {
                s -= Rat::from_integer(ech.m[r][j].clone()) * &x[j];
            }
        }
        x[c] = s / Rat::from_integer(ech.m[r][c].clone());
    }
    let back = a.mul_vec(&x)?;
    if let Some(i) = (0..a.rows()).find(|&i| back[i] != rhs[i]) {
        return Err(Error::NoSolution { row: i });
    }
    Ok(x)
}

pub fn rank(a: &RatMatrix) -> usize {
    eliminate(a, None).rank()
}

/// Coefficients of `det(tI - A)`, ascending in `t` (Faddeev–LeVerrier).
pub fn char_poly(a: &RatMatrix) -> Result<Vec<Rat>> {
    if !a.is_square() {
        return Err(Error::Dimension("characteristic polynomial".into()));
    }
    let n = a.rows();
    let mut coeffs = vec![Rat::zero(); n + 1];
    coeffs[n] = Rat::one();
    let mut m = RatMatrix::identity(n);
    for k in 1..=n {
        m = a.mul(&m)?;
        let c = -m.trace() / Rat::from_integer(BigInt::from(k));
        coeffs[n - k] = c.clone();
        for i in 0..n {
            let v = m.get(i, i) + &c;
            *m.get_mut(i, i) = v;
        }
    }
    Ok(coeffs)
}

/// Number of sign agreements minus disagreements in a minor sequence is not
/// needed; leading principal minors themselves are, for Sylvester tests.
pub fn leading_principal_minors(a: &RatMatrix) -> Result<Vec<Rat>> {
    if !a.is_square() {
        return Err(Error::Dimension("principal minors".into()));
    }
    let n = a.rows();
    let mut out = Vec::with_capacity(n);
    for k in 1..=n {
        let sub = RatMatrix::from_rows(
            (0..k)
                .map(|i| (0..k).map(|j| a.get(i, j).clone()).collect())
                .collect(),
        )?;
        out.push(det(&sub)?);
    }
    Ok(out)
}

pub fn sign_of(x: &Rat) -> i32 {
    sign(x)
}

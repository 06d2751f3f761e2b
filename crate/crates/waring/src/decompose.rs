//! A real Waring decomposition of length at most d for any form that is not
//! a pure power, via the parameterized node construction.
//!
//! Nodes come in opposite pairs +-s_i (plus one unpaired node s when d is
//! even, which may be zero and contributes an x^d term). The remaining node
//! R is forced by the cofactors of the bordered Vandermonde matrix: R =
//! -Delta_{d-1}/Delta_d (minus s in the even case). When Delta_d vanishes
//! but Delta_{d-1} does not, the extra root escapes to infinity and the last
//! term becomes a multiple of y^d; forms with special symmetry (the worked
//! quintic, for instance) always land in that case.

use crate::forms::{BinaryForm, VerifyOutcome, WaringDecomposition};
use crate::matrix::{det, solve, RatMatrix};
use crate::scalar::{rat, Rat};
use crate::{Error, Result};
use num::{One, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const DEFAULT_RETRY_CAP: usize = 64;

/// Chosen node parameters. For odd d these are s_1..s_l (l = (d-1)/2); for
/// even d an unpaired node s (allowed to be zero) plus s_1..s_{l-1}.
#[derive(Clone, Debug)]
pub struct NodeChoice {
    pub unpaired: Option<Rat>,
    pub pairs: Vec<Rat>,
}

impl NodeChoice {
    /// Validate the distinctness constraints for degree `d`.
    pub fn for_degree(d: usize, unpaired: Option<Rat>, pairs: Vec<Rat>) -> Result<Self> {
        if d < 2 {
            return Err(Error::Parameter("degree must be at least 2".into()));
        }
        let want = if d % 2 == 1 { (d - 1) / 2 } else { d / 2 - 1 };
        if pairs.len() != want {
            return Err(Error::Parameter(format!(
                "degree {d} needs {want} paired values, got {}",
                pairs.len()
            )));
        }
        if d % 2 == 1 && unpaired.is_some() {
            return Err(Error::Parameter(
                "odd degree takes no unpaired node".into(),
            ));
        }
        for (i, s) in pairs.iter().enumerate() {
            if s.is_zero() {
                return Err(Error::Parameter("paired nodes must be nonzero".into()));
            }
            for t in &pairs[..i] {
                if s.abs() == t.abs() {
                    return Err(Error::Parameter(
                        "paired nodes must be distinct in absolute value".into(),
                    ));
                }
            }
        }
        if let Some(s) = &unpaired {
            if pairs.iter().any(|t| s.abs() == t.abs()) {
                return Err(Error::Parameter(
                    "unpaired node must differ from the paired ones".into(),
                ));
            }
        }
        Ok(NodeChoice { unpaired, pairs })
    }

    /// Parse the CLI convention: odd degree lists the pairs; even degree
    /// lists s first, then the pairs.
    pub fn from_values(d: usize, values: &[Rat]) -> Result<Self> {
        if d % 2 == 1 {
            Self::for_degree(d, None, values.to_vec())
        } else {
            if values.is_empty() {
                return Err(Error::Parameter("even degree needs s first".into()));
            }
            Self::for_degree(d, Some(values[0].clone()), values[1..].to_vec())
        }
    }
}

/// The two cofactors of the first-column expansion that determine R.
#[derive(Clone, Debug)]
pub struct CofactorPair {
    pub delta_d: Rat,
    pub delta_d1: Rat,
}

/// Node columns of the bordered matrix, without the X column: for each
/// finite base node nu the column (nu^0 .. nu^d), then the reversed
/// coefficient column (c_d .. c_0).
fn base_nodes(choice: &NodeChoice) -> Vec<Rat> {
    let mut nodes = Vec::new();
    if let Some(s) = &choice.unpaired {
        nodes.push(s.clone());
    }
    for s in &choice.pairs {
        nodes.push(s.clone());
        nodes.push(-s.clone());
    }
    nodes
}

fn bordered_rows(p: &BinaryForm, nodes: &[Rat]) -> Vec<Vec<Rat>> {
    let d = p.degree();
    (0..=d)
        .map(|k| {
            let mut row: Vec<Rat> = nodes.iter().map(|nu| nu.pow(k as i32)).collect();
            row.push(p.coeff(d - k).clone());
            row
        })
        .collect()
}

/// Exact cofactors Delta_d and Delta_{d-1}: Delta_i = (-1)^i times the minor
/// obtained by deleting row i and the X column. Zero Delta_d is a legal
/// output; the caller decides to retry.
pub fn cofactors(p: &BinaryForm, choice: &NodeChoice) -> Result<CofactorPair> {
    let d = p.degree();
    let rows = bordered_rows(p, &base_nodes(choice));
    let minor = |skip: usize| -> Result<Rat> {
        let m: Vec<Vec<Rat>> = rows
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != skip)
            .map(|(_, r)| r.clone())
            .collect();
        det(&RatMatrix::from_rows(m)?)
    };
    let sign_d = if d % 2 == 0 { rat(1) } else { rat(-1) };
    let sign_d1 = -sign_d.clone();
    Ok(CofactorPair {
        delta_d: sign_d * minor(d)?,
        delta_d1: sign_d1 * minor(d - 1)?,
    })
}

/// All cofactors Delta_0..Delta_d of h(X_0..X_d); used by property tests for
/// the root identity of h*(T).
pub fn cofactor_vector(p: &BinaryForm, choice: &NodeChoice) -> Result<Vec<Rat>> {
    let d = p.degree();
    let rows = bordered_rows(p, &base_nodes(choice));
    (0..=d)
        .map(|i| {
            let m: Vec<Vec<Rat>> = rows
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != i)
                .map(|(_, r)| r.clone())
                .collect();
            let s = if i % 2 == 0 { rat(1) } else { rat(-1) };
            Ok(s * det(&RatMatrix::from_rows(m)?)?)
        })
        .collect()
}

/// Outcome details of a successful construction.
#[derive(Clone, Debug)]
pub struct DecomposeInfo {
    pub choice: NodeChoice,
    /// The forced node R when finite; `None` means the last root escaped to
    /// infinity and the decomposition carries a y^d term instead.
    pub r_node: Option<Rat>,
    pub retries: usize,
    /// Finite nodes in column order (the y^d term, if any, is not listed).
    pub nodes: Vec<Rat>,
}

enum Attempt {
    Done(WaringDecomposition, DecomposeInfo),
    Degenerate(String),
}

fn attempt(p: &BinaryForm, choice: &NodeChoice) -> Result<Attempt> {
    let d = p.degree();
    let cf = cofactors(p, choice)?;
    let nodes = base_nodes(choice);
    let (all_nodes, infinity_term, r_node) = if !cf.delta_d.is_zero() {
        let mut r = -&cf.delta_d1 / &cf.delta_d;
        if let Some(s) = &choice.unpaired {
            r -= s;
        }
        if nodes.iter().any(|nu| *nu == r) || choice.pairs.iter().any(|s| -s.clone() == r) {
            return Ok(Attempt::Degenerate(format!(
                "R = {r} collides with a chosen node"
            )));
        }
        let mut all = nodes.clone();
        all.push(r.clone());
        (all, false, Some(r))
    } else if !cf.delta_d1.is_zero() {
        // degree of h* drops: the remaining projective root is at infinity
        (nodes.clone(), true, None)
    } else {
        return Ok(Attempt::Degenerate(
            "Delta_d = Delta_{d-1} = 0 for this choice".into(),
        ));
    };

    // rows k = 0..d: sum_j lambda_j nu_j^k = c_{d-k}; a y^d term only
    // contributes to the last row.
    let mut rows = Vec::with_capacity(d + 1);
    let mut rhs = Vec::with_capacity(d + 1);
    for k in 0..=d {
        let mut row: Vec<Rat> = all_nodes.iter().map(|nu| nu.pow(k as i32)).collect();
        if infinity_term {
            row.push(if k == d { Rat::one() } else { Rat::zero() });
        }
        rows.push(row);
        rhs.push(p.coeff(d - k).clone());
    }
    let m = RatMatrix::from_rows(rows)?;
    let lambdas = match solve(&m, &rhs) {
        Ok(l) => l,
        Err(Error::NoSolution { .. }) | Err(Error::Underdetermined { .. }) => {
            return Ok(Attempt::Degenerate("node system inconsistent".into()))
        }
        Err(e) => return Err(e),
    };

    let mut terms = Vec::new();
    for (j, lam) in lambdas.iter().enumerate() {
        if lam.is_zero() {
            continue; // length may fall below d
        }
        if infinity_term && j == all_nodes.len() {
            terms.push((lam.clone(), Rat::zero(), Rat::one()));
        } else {
            terms.push((lam.clone(), Rat::one(), all_nodes[j].clone()));
        }
    }
    let dec = WaringDecomposition::real_exact(d, terms);
    match crate::forms::verify(&dec, p, &Rat::zero(), false)? {
        VerifyOutcome::Exact => {}
        other => {
            return Err(Error::Internal(format!(
                "constructed decomposition failed exact verification: {other:?}"
            )))
        }
    }
    Ok(Attempt::Done(
        dec,
        DecomposeInfo {
            choice: choice.clone(),
            r_node,
            retries: 0,
            nodes: all_nodes,
        },
    ))
}

/// Produce some real Waring decomposition of `p` with length at most d.
///
/// With `choice` given, a single attempt is made with exactly those nodes.
/// Otherwise node values are sampled from a seeded stream of small rationals
/// and degenerate choices are retried up to a cap.
pub fn decompose_any(
    p: &BinaryForm,
    choice: Option<NodeChoice>,
    seed: u64,
) -> Result<(WaringDecomposition, DecomposeInfo)> {
    let d = p.degree();
    if let Some((lambda, alpha, beta)) = p.is_power() {
        let dec = WaringDecomposition::real_exact(d, vec![(lambda, alpha, beta)]);
        return Ok((
            dec,
            DecomposeInfo {
                choice: NodeChoice {
                    unpaired: None,
                    pairs: vec![],
                },
                r_node: None,
                retries: 0,
                nodes: vec![],
            },
        ));
    }
    if d < 2 {
        return Err(Error::Internal("degree-1 form must be a power".into()));
    }

    if let Some(c) = choice {
        return match attempt(p, &c)? {
            Attempt::Done(dec, info) => Ok((dec, info)),
            Attempt::Degenerate(why) => Err(Error::DegenerateParameters(why)),
        };
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last = String::from("no attempt made");
    for retry in 0..DEFAULT_RETRY_CAP {
        let c = sample_choice(d, retry, &mut rng);
        match attempt(p, &c)? {
            Attempt::Done(dec, mut info) => {
                info.retries = retry;
                return Ok((dec, info));
            }
            Attempt::Degenerate(why) => last = why,
        }
    }
    Err(Error::DegenerateParameters(format!(
        "retry cap {DEFAULT_RETRY_CAP} exhausted; last failure: {last}"
    )))
}

/// Small random rationals, distinct in absolute value. The even case tries
/// s = 0 first (the x^d-term shape) and falls back to nonzero s.
fn sample_choice(d: usize, retry: usize, rng: &mut ChaCha8Rng) -> NodeChoice {
    let l = if d % 2 == 1 { (d - 1) / 2 } else { d / 2 - 1 };
    let mut abs_seen: Vec<Rat> = Vec::new();
    let mut draw = |rng: &mut ChaCha8Rng| loop {
        let num = rng.gen_range(1..=12i64);
        let den = rng.gen_range(1..=4i64);
        let s = crate::scalar::ratio(num, den);
        if !abs_seen.contains(&s) {
            abs_seen.push(s.clone());
            let neg: bool = rng.gen();
            return if neg { -s } else { s };
        }
    };
    let pairs: Vec<Rat> = (0..l).map(|_| draw(rng)).collect();
    let unpaired = if d % 2 == 1 {
        None
    } else if retry < DEFAULT_RETRY_CAP / 2 {
        Some(Rat::zero())
    } else {
        Some(draw(rng))
    };
    NodeChoice { unpaired, pairs }
}

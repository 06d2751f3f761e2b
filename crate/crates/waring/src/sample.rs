//! Rank-distribution sampling over random forms.
//!
//! Draws rationalized coefficient vectors, runs the rank algorithm on each,
//! and tallies a histogram. Items are indexed before the parallel fan-out,
//! so a fixed seed gives identical output regardless of scheduling.

use crate::forms::BinaryForm;
use crate::rank::{real_rank, SearchBudget};
use crate::scalar::{rat, Rat};
use crate::Result;
use num::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Distribution {
    /// Integer coefficients uniform in [-100, 100], rationalized.
    IntegerBox,
    /// A 53-bit rationalized draw from the unit sphere.
    UnitSphere,
}

#[derive(Clone, Debug, Default)]
pub struct RankHistogram {
    pub counts: BTreeMap<usize, usize>,
    /// Samples whose certificate had `search_complete = false` (the rank is
    /// then an upper bound); tallied separately.
    pub incomplete: usize,
}

pub fn sample_ranks(
    degree: usize,
    n: usize,
    seed: u64,
    distribution: Distribution,
    budget: &SearchBudget,
) -> Result<RankHistogram> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut forms = Vec::with_capacity(n);
    while forms.len() < n {
        let raw: Vec<Rat> = match distribution {
            Distribution::IntegerBox => (0..=degree)
                .map(|_| rat(rng.gen_range(-100..=100)))
                .collect(),
            Distribution::UnitSphere => {
                let v: Vec<f64> = (0..=degree)
                    .map(|_| {
                        // Box-Muller from two uniforms
                        let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
                        let u2: f64 = rng.gen();
                        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
                    })
                    .collect();
                let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                if norm == 0.0 {
                    continue;
                }
                v.iter()
                    .map(|x| Rat::from_float(x / norm).unwrap_or_else(Rat::zero))
                    .collect()
            }
        };
        if raw.iter().all(|c| c.is_zero()) {
            continue;
        }
        forms.push(BinaryForm::from_raw(degree, &raw)?);
    }
    let budget = budget.clone();
    let results = crate::par::map_indexed(forms, move |p| real_rank(&p, &budget));
    let mut hist = RankHistogram::default();
    for r in results {
        let cert = r?;
        *hist.counts.entry(cert.rank).or_insert(0) += 1;
        if !cert.search_complete {
            hist.incomplete += 1;
        }
    }
    Ok(hist)
}

//! Simulated annealing over closed tours.
//!
//! Moves exchange `swap_count` disjoint pairs of positions. Worse candidates
//! are accepted with the Metropolis probability `exp(-Δ/T)` and the
//! temperature follows a geometric schedule `t0 · rate^step`, floored at
//! [`MIN_TEMPERATURE`].

use std::fmt::Write as _;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::instance::DistanceMatrix;
use crate::tour::Tour;

pub const MIN_TEMPERATURE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaConfig {
    pub t0: f64,
    pub cooling_rate: f64,
    pub iterations: usize,
    pub swap_count: usize,
    pub seed: u64,
}

impl Default for SaConfig {
    fn default() -> Self {
        SaConfig {
            t0: 1.0,
            cooling_rate: 0.999,
            iterations: 20_000,
            swap_count: 1,
            seed: 0,
        }
    }
}

impl SaConfig {
    pub fn validate(&self, n: usize) -> Result<()> {
        if !(self.t0 > 0.0 && self.t0.is_finite()) {
            return Err(Error::InvalidTemperature(self.t0));
        }
        if !(self.cooling_rate > 0.0 && self.cooling_rate < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "cooling rate must lie in (0, 1), got {}",
                self.cooling_rate
            )));
        }
        if self.iterations == 0 {
            return Err(Error::InvalidArgument(
                "iteration budget must be positive".into(),
            ));
        }
        check_swap_count(self.swap_count, n)
    }
}

fn check_swap_count(k: usize, n: usize) -> Result<()> {
    if k == 0 || k > n / 2 {
        return Err(Error::InvalidArgument(format!(
            "swap count {k} must lie in 1..={} for {n} cities",
            n / 2
        )));
    }
    Ok(())
}

/// Exchanges `k` disjoint, uniformly chosen pairs of positions.
pub fn swap_cities<R: Rng + ?Sized>(t: &Tour, k: usize, rng: &mut R) -> Result<Tour> {
    let n = t.len();
    check_swap_count(k, n)?;
    let picks = sample(rng, n, 2 * k).into_vec();
    let pairs: Vec<(usize, usize)> = picks.chunks(2).map(|p| (p[0], p[1])).collect();
    swap_positions(t, &pairs)
}

/// Exchanges the cities at each given pair of positions, in order.
pub fn swap_positions(t: &Tour, pairs: &[(usize, usize)]) -> Result<Tour> {
    let mut order = t.order().to_vec();
    for &(a, b) in pairs {
        if a >= order.len() || b >= order.len() {
            return Err(Error::InvalidArgument(format!(
                "swap position out of range: ({a}, {b})"
            )));
        }
        order.swap(a, b);
    }
    Ok(Tour::from_order_unchecked(order))
}

/// Metropolis rule: 1 for non-worsening candidates, `exp(-(e_new - e)/t)` otherwise.
pub fn acceptance_probability(e: f64, e_new: f64, t: f64) -> Result<f64> {
    if t.is_nan() || t <= 0.0 {
        return Err(Error::InvalidTemperature(t));
    }
    if e_new <= e {
        Ok(1.0)
    } else {
        Ok((-(e_new - e) / t).exp())
    }
}

pub fn temperature_at(step: usize, cfg: &SaConfig) -> f64 {
    (cfg.t0 * cfg.cooling_rate.powf(step as f64)).max(MIN_TEMPERATURE)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaRecord {
    pub iteration: usize,
    pub temperature: f64,
    pub current: f64,
    pub best: f64,
    pub accepted: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SaTrace {
    pub records: Vec<SaRecord>,
    /// State after the last iteration, as the plain pseudocode would return it.
    pub final_tour: Tour,
    pub final_length: f64,
}

impl SaTrace {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("iteration,temperature,current,best\n");
        for r in &self.records {
            let _ = writeln!(
                out,
                "{},{:e},{},{}",
                r.iteration, r.temperature, r.current, r.best
            );
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnnealOutcome {
    /// Best tour seen over the whole run.
    pub tour: Tour,
    pub length: f64,
    pub trace: SaTrace,
}

/// Runs exactly `cfg.iterations` proposal steps from `start`.
pub fn anneal(m: &DistanceMatrix, start: &Tour, cfg: &SaConfig) -> Result<AnnealOutcome> {
    let n = m.n();
    if start.len() != n {
        return Err(Error::InvalidTour(format!(
            "start tour visits {} cities but the matrix has {n}",
            start.len()
        )));
    }
    cfg.validate(n)?;

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut current = start.clone();
    let mut current_len = m.closed_length(current.order());
    let mut best = current.clone();
    let mut best_len = current_len;
    let mut records = Vec::with_capacity(cfg.iterations);

    for step in 0..cfg.iterations {
        let temperature = temperature_at(step, cfg);
        let candidate = swap_cities(&current, cfg.swap_count, &mut rng)?;
        let candidate_len = m.closed_length(candidate.order());
        let p = acceptance_probability(current_len, candidate_len, temperature)?;
        let accepted = p >= 1.0 || rng.gen::<f64>() < p;
        if accepted {
            current = candidate;
            current_len = candidate_len;
            if current_len < best_len {
                best = current.clone();
                best_len = current_len;
            }
        }
        records.push(SaRecord {
            iteration: step,
            temperature,
            current: current_len,
            best: best_len,
            accepted,
        });
    }

    Ok(AnnealOutcome {
        tour: best,
        length: best_len,
        trace: SaTrace {
            records,
            final_tour: current,
            final_length: current_len,
        },
    })
}

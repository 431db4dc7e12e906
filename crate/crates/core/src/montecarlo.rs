//! Seeded Monte Carlo estimation of `E[τ]`.
//!
//! Trials are split across a fixed number of streams. Stream `s` uses
//! ChaCha8 seeded with `seed` on stream id `s`, so its draws do not depend
//! on how streams are scheduled. Per-stream statistics are merged in stream
//! order, which makes results bit-identical for any thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::Target;
use crate::exec::Exec;
use crate::field::FieldElem;
use crate::linalg::Echelon;
use crate::matrix::{ColumnSet, GenMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimConfig {
    pub trials: u64,
    pub seed: u64,
    pub streams: u32,
    /// Per-trial draw limit; `None` means `10⁶ · n`.
    pub draw_cap: Option<u64>,
}

impl SimConfig {
    pub fn new(trials: u64, seed: u64) -> Self {
        Self {
            trials,
            seed,
            streams: 16,
            draw_cap: None,
        }
    }

    pub fn with_streams(mut self, streams: u32) -> Self {
        self.streams = streams;
        self
    }
}

/// Running mean and sum of squared deviations.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Welford {
    pub count: u64,
    pub mean: f64,
    pub m2: f64,
}

impl Welford {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let d = x - self.mean;
        self.mean += d / self.count as f64;
        self.m2 += d * (x - self.mean);
    }

    /// Combines two summaries (Chan et al.).
    pub fn merge(self, other: Welford) -> Welford {
        if self.count == 0 {
            return other;
        }
        if other.count == 0 {
            return self;
        }
        let count = self.count + other.count;
        let d = other.mean - self.mean;
        let mean = self.mean + d * other.count as f64 / count as f64;
        let m2 = self.m2 + other.m2 + d * d * self.count as f64 * other.count as f64 / count as f64;
        Welford { count, mean, m2 }
    }

    pub fn sample_variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StreamSummary {
    pub stream: u64,
    pub trials: u64,
    pub mean: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub mean: f64,
    pub std_dev: f64,
    pub std_err: f64,
    pub trials: u64,
    pub seed: u64,
    pub streams: Vec<StreamSummary>,
}

/// Draw counts of one simulated trial sequence.
fn run_stream(
    g: &GenMatrix,
    targets: &[Vec<FieldElem>],
    seed: u64,
    stream: u64,
    trials: u64,
    cap: u64,
) -> Result<Welford> {
    let f = g.field();
    let n = g.n() as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut stats = Welford::default();
    let mut basis = Echelon::new(g.k());
    let mut residues: Vec<Vec<FieldElem>> = Vec::with_capacity(targets.len());
    for _ in 0..trials {
        basis.clear();
        residues.clear();
        residues.extend(targets.iter().cloned());
        let mut draws = 0u64;
        while !residues.is_empty() {
            if draws == cap {
                return Err(Error::DrawCapExceeded(cap));
            }
            draws += 1;
            let j = rng.random_range(0..n) as usize;
            if basis.insert(f, g.column(j)) {
                for r in residues.iter_mut() {
                    basis.reduce(f, r);
                }
                residues.retain(|r| r.iter().any(|x| !x.is_zero()));
            }
        }
        stats.push(draws as f64);
    }
    Ok(stats)
}

/// Estimates the expected number of draws until `target` is covered.
pub fn simulate(g: &GenMatrix, target: &Target, cfg: &SimConfig, exec: Exec) -> Result<SimResult> {
    if cfg.trials == 0 || cfg.streams == 0 {
        return Err(Error::InvalidParameter("trials and streams must be positive".into()));
    }
    let targets = target.vectors(g)?;
    if targets.is_empty() {
        return Err(Error::ZeroTarget);
    }
    let all = g.column_basis(&ColumnSet::new((0..g.n()).collect()));
    if !targets.iter().all(|t| all.contains(g.field(), t)) {
        return Err(Error::TargetUnreachable);
    }
    let cap = cfg.draw_cap.unwrap_or(1_000_000 * g.n() as u64);
    let streams = u64::from(cfg.streams);
    let per = cfg.trials / streams;
    let extra = cfg.trials % streams;
    let parts = exec.try_map_range(cfg.streams as usize, |s| {
        let s = s as u64;
        let trials = per + u64::from(s < extra);
        run_stream(g, &targets, cfg.seed, s, trials, cap)
    })?;
    let summaries = parts
        .iter()
        .enumerate()
        .map(|(s, w)| StreamSummary {
            stream: s as u64,
            trials: w.count,
            mean: w.mean,
        })
        .collect();
    let total = parts.into_iter().fold(Welford::default(), Welford::merge);
    let std_dev = total.sample_variance().sqrt();
    Ok(SimResult {
        mean: total.mean,
        std_dev,
        std_err: std_dev / (total.count as f64).sqrt(),
        trials: total.count,
        seed: cfg.seed,
        streams: summaries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes;
    use crate::field::FieldSpec;

    #[test]
    fn welford_merge_matches_direct() {
        let xs: Vec<f64> = (0..100).map(|i| ((i * 37) % 11) as f64).collect();
        let mut all = Welford::default();
        xs.iter().for_each(|&x| all.push(x));
        let (mut a, mut b) = (Welford::default(), Welford::default());
        xs[..40].iter().for_each(|&x| a.push(x));
        xs[40..].iter().for_each(|&x| b.push(x));
        let m = a.merge(b);
        assert_eq!(m.count, 100);
        assert!((m.mean - all.mean).abs() < 1e-12);
        assert!((m.m2 - all.m2).abs() < 1e-9);
    }

    #[test]
    fn identity_is_geometric() {
        let g = GenMatrix::identity(FieldSpec::new(2).unwrap(), 2);
        let r = simulate(&g, &Target::Basis(0), &SimConfig::new(200_000, 7), Exec::Parallel).unwrap();
        assert!((r.mean - 2.0).abs() < 4.0 * r.std_err, "{r:?}");
        assert_eq!(r.trials, 200_000);
        assert!(r.mean >= 1.0);
    }

    #[test]
    fn reproducible_across_modes() {
        let g = codes::hamming(2, 3).unwrap();
        let cfg = SimConfig::new(20_001, 42).with_streams(7);
        let a = simulate(&g, &Target::Basis(2), &cfg, Exec::Parallel).unwrap();
        let b = simulate(&g, &Target::Basis(2), &cfg, Exec::Sequential).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.streams.iter().map(|s| s.trials).sum::<u64>(), 20_001);
        let c = simulate(
            &g,
            &Target::Basis(2),
            &SimConfig::new(20_001, 43).with_streams(7),
            Exec::Parallel,
        )
        .unwrap();
        assert_ne!(a.mean, c.mean);
    }

    #[test]
    fn errors() {
        let f = FieldSpec::new(2).unwrap();
        let def = GenMatrix::from_rows_relaxed(f.clone(), &[vec![1, 1], vec![0, 0]]).unwrap();
        assert_eq!(
            simulate(&def, &Target::Basis(1), &SimConfig::new(10, 1), Exec::Sequential),
            Err(Error::TargetUnreachable)
        );
        let z = GenMatrix::from_rows(f, &[vec![1, 0, 0], vec![0, 1, 0]]).unwrap();
        assert_eq!(
            simulate(&z, &Target::Column(2), &SimConfig::new(10, 1), Exec::Sequential),
            Err(Error::ZeroTarget)
        );
        let mut cfg = SimConfig::new(10, 1);
        cfg.draw_cap = Some(1);
        let g = codes::parity(2, 2).unwrap();
        assert_eq!(
            simulate(&g, &Target::Basis(0), &cfg, Exec::Sequential),
            Err(Error::DrawCapExceeded(1))
        );
    }
}

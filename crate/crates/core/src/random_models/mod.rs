//! Haar and ε-balanced matrix ensembles with seeded, sharded Monte Carlo estimators.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::module_types::{count_sur, Exponent, ModuleType};
use crate::padic::{cokernel_type, MatPk, Modulus, TruncatedModule, XSet};

/// Trials per independently seeded stream.
pub const BATCH: u64 = 1024;

#[derive(Clone, Debug, PartialEq)]
pub enum EnsembleKind {
    Haar,
    /// Residue class mod p drawn from `weights`, then lifted uniformly mod p^K.
    EpsBalanced {
        weights: Vec<f64>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct EnsembleSpec {
    pub kind: EnsembleKind,
    pub modulus: Modulus,
    pub n: usize,
    pub seed: u64,
}

impl EnsembleSpec {
    pub fn haar(p: u64, k: u32, n: usize, seed: u64) -> Result<Self> {
        Ok(Self { kind: EnsembleKind::Haar, modulus: Modulus::new(p, k)?, n, seed })
    }

    pub fn eps_balanced(p: u64, k: u32, n: usize, weights: Vec<f64>, seed: u64) -> Result<Self> {
        let spec =
            Self { kind: EnsembleKind::EpsBalanced { weights }, modulus: Modulus::new(p, k)?, n, seed };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        let EnsembleKind::EpsBalanced { weights } = &self.kind else { return Ok(()) };
        if weights.len() as u64 != self.modulus.p() {
            return Err(Error::Ensemble(format!("{} weights for p={}", weights.len(), self.modulus.p())));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::Ensemble("weights must be finite and nonnegative".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::Ensemble(format!("weights sum to {total}")));
        }
        if self.epsilon().is_none_or(|e| e <= 0.0) {
            return Err(Error::Ensemble("some residue carries all the mass".into()));
        }
        Ok(())
    }

    /// 1 − max weight; None for Haar.
    pub fn epsilon(&self) -> Option<f64> {
        match &self.kind {
            EnsembleKind::Haar => None,
            EnsembleKind::EpsBalanced { weights } => Some(1.0 - weights.iter().copied().fold(0.0, f64::max)),
        }
    }

    /// Generator for one shard: the spec seed on stream `stream`.
    pub fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }

    pub fn sampler(&self) -> Result<MatrixSampler> {
        self.validate()?;
        let classes = match &self.kind {
            EnsembleKind::Haar => None,
            EnsembleKind::EpsBalanced { weights } => {
                Some(WeightedIndex::new(weights).map_err(|e| Error::Ensemble(e.to_string()))?)
            }
        };
        Ok(MatrixSampler { modulus: self.modulus, n: self.n, classes })
    }
}

impl fmt::Display for EnsembleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            EnsembleKind::Haar => "haar".to_string(),
            EnsembleKind::EpsBalanced { .. } => {
                format!("eps_balanced(eps={:.4})", self.epsilon().unwrap_or(0.0))
            }
        };
        write!(
            f,
            "ensemble={kind} p={} K={} n={} seed={}",
            self.modulus.p(),
            self.modulus.precision(),
            self.n,
            self.seed
        )
    }
}

#[derive(Clone, Debug)]
pub struct MatrixSampler {
    modulus: Modulus,
    n: usize,
    classes: Option<WeightedIndex<f64>>,
}

impl MatrixSampler {
    pub fn entry<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        let q = self.modulus.order();
        match &self.classes {
            None => rng.random_range(0..q),
            Some(dist) => {
                let p = self.modulus.p();
                dist.sample(rng) as u64 + p * rng.random_range(0..q / p)
            }
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> MatPk {
        let data = (0..self.n * self.n).map(|_| self.entry(rng)).collect();
        MatPk::from_residues(self.modulus, self.n, self.n, data).expect("n×n data")
    }
}

/// One matrix drawn from the spec's first stream.
pub fn sample_matrix(spec: &EnsembleSpec) -> Result<MatPk> {
    Ok(spec.sampler()?.sample(&mut spec.rng(0)))
}

/// Sample mean with its standard error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
    pub trials: u64,
}

impl Estimate {
    pub fn from_sums(sum: f64, sum_sq: f64, trials: u64) -> Self {
        let n = trials as f64;
        let mean = sum / n;
        let var = if trials > 1 { ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0) } else { 0.0 };
        Self { mean, std_error: (var / n).sqrt(), trials }
    }

    pub fn proportion(hits: u64, trials: u64) -> Self {
        let mean = hits as f64 / trials as f64;
        Self { mean, std_error: (mean * (1.0 - mean) / trials as f64).sqrt(), trials }
    }

    /// |mean − target| ≤ max(sigmas·SE, abs_tol).
    pub fn agrees_with(&self, target: f64, sigmas: f64, abs_tol: f64) -> bool {
        (self.mean - target).abs() <= (sigmas * self.std_error).max(abs_tol)
    }
}

impl fmt::Display for Estimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.6} ± {:.6} (N={})", self.mean, self.std_error, self.trials)
    }
}

pub type Outcome = Vec<TruncatedModule>;

/// Joint cokernel outcomes of a run, with the frequency of one target event.
#[derive(Clone, Debug, PartialEq)]
pub struct EstimateTable {
    pub trials: u64,
    pub counts: BTreeMap<Outcome, u64>,
    pub target: Outcome,
}

impl EstimateTable {
    pub fn frequency(&self, outcome: &[TruncatedModule]) -> Estimate {
        Estimate::proportion(self.counts.get(outcome).copied().unwrap_or(0), self.trials)
    }

    pub fn event(&self) -> Estimate {
        self.frequency(&self.target)
    }

    /// Outcomes by decreasing count.
    pub fn rows(&self) -> Vec<(&Outcome, Estimate)> {
        let mut rows: Vec<_> =
            self.counts.iter().map(|(o, &c)| (o, Estimate::proportion(c, self.trials))).collect();
        rows.sort_by(|a, b| b.1.mean.total_cmp(&a.1.mean).then_with(|| a.0.cmp(b.0)));
        rows
    }
}

pub(crate) fn shards(trials: u64) -> Vec<(u64, u64)> {
    (0..trials.div_ceil(BATCH)).map(|b| (b, BATCH.min(trials - b * BATCH))).collect()
}

/// Tallies (cok(A + c_i·I))_i over `trials` draws; the event is equality with `targets` truncated at K.
pub fn empirical_joint(
    spec: &EnsembleSpec,
    shifts: &[i64],
    targets: &[ModuleType],
    trials: u64,
) -> Result<EstimateTable> {
    if trials == 0 {
        return Err(Error::Ensemble("need at least one trial".into()));
    }
    if shifts.len() != targets.len() {
        return Err(Error::Dimension(format!("{} shifts but {} targets", shifts.len(), targets.len())));
    }
    let sampler = spec.sampler()?;
    let m = spec.modulus;
    let shifts: Vec<u64> = shifts.iter().map(|&c| m.reduce(c)).collect();
    let partial: Vec<BTreeMap<Outcome, u64>> = shards(trials)
        .into_par_iter()
        .map(|(stream, count)| {
            let mut rng = spec.rng(stream);
            let mut counts = BTreeMap::new();
            for _ in 0..count {
                let a = sampler.sample(&mut rng);
                let outcome: Outcome =
                    shifts.iter().map(|&c| cokernel_type(&a.add_scalar(c)).module()).collect();
                *counts.entry(outcome).or_insert(0) += 1;
            }
            counts
        })
        .collect();
    let mut counts = BTreeMap::new();
    for part in partial {
        for (o, c) in part {
            *counts.entry(o).or_insert(0) += c;
        }
    }
    let target = targets.iter().map(|h| h.truncate(m.precision())).collect();
    Ok(EstimateTable { trials, counts, target })
}

/// Monte Carlo estimate of E ∏_i #Sur(cok(A + p·x_i·I), G_i).
pub fn mixed_moment_mc(
    spec: &EnsembleSpec,
    x: &XSet,
    groups: &[ModuleType],
    trials: u64,
) -> Result<Estimate> {
    if trials == 0 {
        return Err(Error::Ensemble("need at least one trial".into()));
    }
    if groups.len() != x.len() {
        return Err(Error::Dimension(format!("{} groups at {} shift points", groups.len(), x.len())));
    }
    let m = spec.modulus;
    let k = m.precision();
    if let Some(g) = groups.iter().find(|g| !g.is_finite() || g.max_finite_exponent() >= k) {
        return Err(Error::Dimension(format!("group {g} needs exponents below K={k}")));
    }
    let sampler = spec.sampler()?;
    let p = m.p();
    let shifts: Vec<u64> = x.values().iter().map(|&v| m.mul(p % m.order(), m.reduce(v as i64))).collect();
    let partial = shards(trials)
        .into_par_iter()
        .map(|(stream, count)| -> Result<(f64, f64)> {
            let mut rng = spec.rng(stream);
            let mut cache: HashMap<(usize, TruncatedModule), f64> = HashMap::new();
            let (mut sum, mut sum_sq) = (0.0, 0.0);
            for _ in 0..count {
                let a = sampler.sample(&mut rng);
                let mut value = 1.0;
                for (i, (&c, g)) in shifts.iter().zip(groups).enumerate() {
                    let cok = cokernel_type(&a.add_scalar(c)).module();
                    let sur = match cache.get(&(i, cok.clone())) {
                        Some(&v) => v,
                        None => {
                            let source =
                                ModuleType::from_exponents(cok.parts().iter().map(|&e| Exponent::Finite(e)));
                            let v = count_sur(p, &source, g)? as f64;
                            cache.insert((i, cok), v);
                            v
                        }
                    };
                    value *= sur;
                    if value == 0.0 {
                        break;
                    }
                }
                sum += value;
                sum_sq += value * value;
            }
            Ok((sum, sum_sq))
        })
        .collect::<Result<Vec<_>>>()?;
    let (sum, sum_sq) = partial.iter().fold((0.0, 0.0), |acc, &(s, q)| (acc.0 + s, acc.1 + q));
    Ok(Estimate::from_sums(sum, sum_sq, trials))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module_types::{formula_probability, FormulaKind};

    #[test]
    fn entry_frequencies() {
        let spec = EnsembleSpec::haar(2, 1, 1, 7).unwrap();
        let sampler = spec.sampler().unwrap();
        let mut rng = spec.rng(0);
        let ones = (0..100_000).filter(|_| sampler.entry(&mut rng) == 1).count();
        assert!((ones as f64 / 1e5 - 0.5).abs() < 0.01);
        let spec = EnsembleSpec::eps_balanced(2, 3, 1, vec![0.6, 0.4], 7).unwrap();
        let sampler = spec.sampler().unwrap();
        let mut rng = spec.rng(0);
        let draws: Vec<u64> = (0..100_000).map(|_| sampler.entry(&mut rng)).collect();
        let odd = draws.iter().filter(|&&v| v % 2 == 1).count();
        assert!((odd as f64 / 1e5 - 0.4).abs() < 0.01);
        assert!(draws.iter().all(|&v| v < 8));
        assert!(draws.contains(&6) && draws.contains(&7));
    }

    #[test]
    fn invalid_weights() {
        assert!(EnsembleSpec::eps_balanced(3, 2, 2, vec![0.5, 0.5], 0).is_err());
        assert!(EnsembleSpec::eps_balanced(2, 2, 2, vec![0.7, 0.7], 0).is_err());
        assert!(EnsembleSpec::eps_balanced(2, 2, 2, vec![1.0, 0.0], 0).is_err());
        assert!(EnsembleSpec::eps_balanced(2, 2, 2, vec![1.5, -0.5], 0).is_err());
    }

    #[test]
    fn seeded_runs_repeat() {
        let spec = EnsembleSpec::haar(3, 2, 4, 11).unwrap();
        assert_eq!(sample_matrix(&spec).unwrap(), sample_matrix(&spec).unwrap());
        let other = EnsembleSpec { seed: 12, ..spec.clone() };
        assert_ne!(sample_matrix(&spec).unwrap(), sample_matrix(&other).unwrap());
        let targets = vec![ModuleType::trivial(); 2];
        let a = empirical_joint(&spec, &[0, 3], &targets, 3000).unwrap();
        let b = empirical_joint(&spec, &[0, 3], &targets, 3000).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.counts.values().sum::<u64>(), 3000);
    }

    #[test]
    fn cohen_lenstra_trivial_event() {
        let spec = EnsembleSpec::haar(2, 3, 10, 1).unwrap();
        let table = empirical_joint(&spec, &[0], &[ModuleType::trivial()], 20_000).unwrap();
        let want = formula_probability(FormulaKind::Fw, 2, &[ModuleType::trivial()]).unwrap();
        assert!(table.event().agrees_with(want, 3.0, 0.02), "{} vs {want}", table.event());
    }

    #[test]
    fn single_moment_is_one() {
        let spec = EnsembleSpec::haar(3, 2, 8, 5).unwrap();
        let x = XSet::new(spec.modulus, &[0]).unwrap();
        let est = mixed_moment_mc(&spec, &x, &[ModuleType::cyclic(1)], 20_000).unwrap();
        assert!(est.agrees_with(1.0, 3.0, 0.0), "{est}");
        assert!(mixed_moment_mc(&spec, &x, &[ModuleType::cyclic(2)], 10).is_err());
    }
}

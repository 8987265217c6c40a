//! Ground-truth scans of small matrix spaces.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::module_types::{Exponent, ModuleType, TupleSpec};
use crate::padic::{cokernel_type, MatPk, Modulus, TruncatedModule, XSet};
use crate::random_models::{shards, EnsembleSpec, Outcome};
use crate::realizability::{member_cxm, rank_check, Violation};
use crate::synthesis::realize_tuple;

/// Largest matrix space enumerated exhaustively.
pub const EXHAUSTIVE_BUDGET: u64 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScanMode {
    Exhaustive,
    Sampled { samples: u64, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanResult {
    pub p: u64,
    pub x: Vec<i64>,
    pub n: usize,
    pub k: u32,
    pub mode: ScanMode,
    pub classes: BTreeMap<Outcome, u64>,
}

impl ScanResult {
    pub fn scanned(&self) -> u64 {
        self.classes.values().sum()
    }

    /// Sorted `class<TAB>count` lines.
    pub fn lines(&self) -> Vec<String> {
        let mut out: Vec<String> =
            self.classes.iter().map(|(c, n)| format!("{}\t{n}", fmt_class(c))).collect();
        out.sort();
        out
    }
}

impl fmt::Display for ScanResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in self.lines() {
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

fn fmt_module(h: &TruncatedModule) -> String {
    if h.s_rank() <= 1 {
        h.to_string()
    } else {
        format!("{{{h}}}")
    }
}

/// "(2+, 1, 1)": one coordinate per shift, multi-part modules in braces.
pub fn fmt_class(class: &[TruncatedModule]) -> String {
    let parts: Vec<String> = class.iter().map(fmt_module).collect();
    format!("({})", parts.join(", "))
}

fn shifts(modulus: Modulus, x: &[i64]) -> Vec<u64> {
    let p = modulus.p() % modulus.order();
    x.iter().map(|&v| modulus.mul(p, modulus.reduce(v))).collect()
}

fn classify(a: &MatPk, shifts: &[u64]) -> Outcome {
    shifts.iter().map(|&c| cokernel_type(&a.add_scalar(c)).module()).collect()
}

fn merge(parts: Vec<BTreeMap<Outcome, u64>>) -> BTreeMap<Outcome, u64> {
    let mut out = BTreeMap::new();
    for part in parts {
        for (c, n) in part {
            *out.entry(c).or_insert(0) += n;
        }
    }
    out
}

/// Size of M_n(Z/p^K), if it fits the exhaustive budget.
pub fn space_size(p: u64, n: usize, k: u32) -> Option<u64> {
    let exp = u32::try_from(n * n).ok()?.checked_mul(k)?;
    p.checked_pow(exp).filter(|&s| s <= EXHAUSTIVE_BUDGET)
}

/// Classes of (cok(A + p·x_i·I))_i over every A in M_n(Z/p^K).
pub fn exhaustive_scan(p: u64, x: &XSet, n: usize, k: u32) -> Result<ScanResult> {
    let modulus = Modulus::new(p, k)?;
    XSet::new(modulus, &signed(x))?;
    let total = space_size(p, n, k).ok_or(Error::ScanBudget((n * n) as u32 * k))?;
    let q = modulus.order();
    let cs = shifts(modulus, &signed(x));
    let chunk = 4096u64;
    let parts: Vec<BTreeMap<Outcome, u64>> = (0..total.div_ceil(chunk))
        .into_par_iter()
        .map(|c| {
            let mut counts = BTreeMap::new();
            for index in c * chunk..total.min((c + 1) * chunk) {
                let mut rest = index;
                let data = (0..n * n)
                    .map(|_| {
                        let d = rest % q;
                        rest /= q;
                        d
                    })
                    .collect();
                let a = MatPk::from_residues(modulus, n, n, data).expect("n×n data");
                *counts.entry(classify(&a, &cs)).or_insert(0) += 1;
            }
            counts
        })
        .collect();
    Ok(ScanResult { p, x: signed(x), n, k, mode: ScanMode::Exhaustive, classes: merge(parts) })
}

/// Same tally over `samples` Haar matrices.
pub fn random_scan(p: u64, x: &XSet, n: usize, k: u32, samples: u64, seed: u64) -> Result<ScanResult> {
    let spec = EnsembleSpec::haar(p, k, n, seed)?;
    let sampler = spec.sampler()?;
    let cs = shifts(spec.modulus, &signed(x));
    let parts: Vec<BTreeMap<Outcome, u64>> = shards(samples)
        .into_par_iter()
        .map(|(stream, count)| {
            let mut rng = spec.rng(stream);
            let mut counts = BTreeMap::new();
            for _ in 0..count {
                *counts.entry(classify(&sampler.sample(&mut rng), &cs)).or_insert(0) += 1;
            }
            counts
        })
        .collect();
    Ok(ScanResult { p, x: signed(x), n, k, mode: ScanMode::Sampled { samples, seed }, classes: merge(parts) })
}

/// Exhaustive when the space fits the budget, otherwise `samples` random draws.
pub fn scan(p: u64, x: &XSet, n: usize, k: u32, samples: Option<u64>, seed: u64) -> Result<ScanResult> {
    match (space_size(p, n, k), samples) {
        (Some(_), None) => exhaustive_scan(p, x, n, k),
        (_, Some(s)) => random_scan(p, x, n, k, s, seed),
        (None, None) => Err(Error::ScanBudget((n * n) as u32 * k)),
    }
}

fn signed(x: &XSet) -> Vec<i64> {
    x.values().iter().map(|&v| v as i64).collect()
}

/// Reads a truncated module back as a type, with K⁺ parts taken as free.
pub fn as_type(h: &TruncatedModule) -> ModuleType {
    let k = h.precision();
    ModuleType::from_exponents(h.parts().iter().map(|&e| {
        if e >= k {
            Exponent::Infinite
        } else {
            Exponent::Finite(e)
        }
    }))
}

/// Necessary inequalities that can be read off a class truncated at K.
pub fn class_violation(class: &[TruncatedModule], k: u32) -> Option<Violation> {
    let types: Vec<ModuleType> = class.iter().map(as_type).collect();
    if let Some(v) = rank_check(&types) {
        return Some(v);
    }
    let m = types.len();
    match (m, k) {
        (3, 2..) | (4, 3..) => member_cxm(&types).ok()?.failed_constraint,
        (4, 2) => {
            let d1: Vec<i64> = types.iter().map(|h| h.count(1) as i64).collect();
            let total: i64 = d1.iter().sum();
            d1.iter().enumerate().find(|(_, &d)| 3 * d > total).map(|(i, &d)| Violation::Inequality {
                label: format!("3*d_{{1,{}}} <= D_1", i + 1),
                lhs: 3 * d,
                rhs: total,
            })
        }
        _ => None,
    }
}

/// Achieved classes that break a necessary inequality; empty when the criterion holds.
pub fn consistency_report(scan: &ScanResult) -> Vec<(Outcome, Violation)> {
    scan.classes.keys().filter_map(|c| class_violation(c, scan.k).map(|v| (c.clone(), v))).collect()
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CompletenessReport {
    pub predicted: usize,
    pub seen_in_scans: usize,
    pub synthesized: usize,
    pub missing: Vec<Outcome>,
}

/// Every member tuple with s ≤ `n_max` and finite exponents below K should show up in a scan
/// at some n ≤ `n_max`, or else be produced by synthesis.
pub fn completeness_check(p: u64, x: &XSet, k: u32, n_max: usize) -> Result<CompletenessReport> {
    let m = x.len();
    let mut seen = BTreeMap::new();
    for n in 1..=n_max {
        if space_size(p, n, k).is_some() {
            seen.extend(exhaustive_scan(p, x, n, k)?.classes);
        }
    }
    let singles = types_below(k, n_max);
    let mut report = CompletenessReport::default();
    let mut pick = vec![0usize; m];
    loop {
        let hs: Vec<ModuleType> = pick.iter().map(|&i| singles[i].clone()).collect();
        if member_cxm(&hs)?.verdict {
            report.predicted += 1;
            let class: Outcome = hs.iter().map(|h| h.truncate(k)).collect();
            if seen.contains_key(&class) {
                report.seen_in_scans += 1;
            } else {
                let spec = TupleSpec::new(p, signed(x), hs, None)?;
                match realize_tuple(&spec, k.max(spec.max_exponent() + 2)) {
                    Ok(_) => report.synthesized += 1,
                    Err(_) => report.missing.push(class),
                }
            }
        }
        let Some(j) = (0..m).find(|&j| pick[j] + 1 < singles.len()) else { break };
        pick[j] += 1;
        pick[..j].iter_mut().for_each(|v| *v = 0);
    }
    Ok(report)
}

fn types_below(k: u32, s_max: usize) -> Vec<ModuleType> {
    let mut out = vec![ModuleType::trivial()];
    let mut frontier = vec![Vec::<u32>::new()];
    for _ in 0..s_max {
        let mut next = Vec::new();
        for parts in &frontier {
            let floor = parts.last().copied().unwrap_or(1);
            for e in floor..k {
                let mut grown = parts.clone();
                grown.push(e);
                out.push(ModuleType::new(&grown, 0));
                next.push(grown);
            }
        }
        frontier = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xs(p: u64, k: u32, x: &[i64]) -> XSet {
        XSet::new(Modulus::new(p, k).unwrap(), x).unwrap()
    }

    #[test]
    fn scalar_scans() {
        let r = exhaustive_scan(3, &xs(3, 2, &[0, 1, 2]), 1, 2).unwrap();
        assert_eq!(r.lines(), vec!["(0, 0, 0)\t6", "(1, 1, 2+)\t1", "(1, 2+, 1)\t1", "(2+, 1, 1)\t1"]);
        let r = exhaustive_scan(2, &xs(2, 2, &[0, 1]), 1, 2).unwrap();
        assert_eq!(r.lines(), vec!["(0, 0)\t2", "(1, 2+)\t1", "(2+, 1)\t1"]);
        let r = exhaustive_scan(5, &xs(5, 2, &[0, 1]), 0, 2).unwrap();
        assert_eq!(r.lines(), vec!["(0, 0)\t1"]);
        assert!(matches!(exhaustive_scan(5, &xs(5, 2, &[0, 1]), 3, 2), Err(Error::ScanBudget(18))));
    }

    #[test]
    fn translation_preserves_multiplicities() {
        let a = exhaustive_scan(3, &xs(3, 2, &[0, 1, 2]), 2, 2).unwrap();
        let b = exhaustive_scan(3, &xs(3, 2, &[4, 5, 6]), 2, 2).unwrap();
        assert_eq!(a.classes, b.classes);
        assert_eq!(a.scanned(), 3u64.pow(8));
    }

    #[test]
    fn injected_violation_is_flagged() {
        let class: Outcome =
            ["1", "2", "2"].iter().map(|h| h.parse::<ModuleType>().unwrap().truncate(3)).collect();
        let v = class_violation(&class, 3).unwrap();
        assert_eq!(v.to_string(), "2*d_{1,1} <= D_1: 2 > 1");
        let mut scan = exhaustive_scan(3, &xs(3, 2, &[0, 1, 2]), 1, 2).unwrap();
        assert!(consistency_report(&scan).is_empty());
        scan.classes.insert(class.iter().map(|h| TruncatedModule::new(2, h.parts().to_vec())).collect(), 1);
        assert_eq!(consistency_report(&scan).len(), 1);
    }

    #[test]
    fn sampled_scan_is_seeded() {
        let x = xs(5, 2, &[0, 1, 2, 3]);
        let a = random_scan(5, &x, 2, 2, 2000, 9).unwrap();
        assert_eq!(a, random_scan(5, &x, 2, 2, 2000, 9).unwrap());
        assert_eq!(a.scanned(), 2000);
        assert!(consistency_report(&a).is_empty());
    }

    #[test]
    fn small_members_are_all_accounted_for() {
        let report = completeness_check(3, &xs(3, 3, &[0, 1, 2]), 3, 2).unwrap();
        assert!(report.missing.is_empty(), "{:?}", report.missing);
        assert!(report.seen_in_scans > 0);
        assert_eq!(report.predicted, report.seen_in_scans + report.synthesized);
    }
}

use crate::error::{Error, Result};
use crate::module_types::TupleSpec;
use crate::realizability::{MembershipReport, Violation};

/// Counts d_{0,i} = n − s(H_i) and d_{1,i} for each target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowData {
    pub d0: Vec<u64>,
    pub d1: Vec<u64>,
}

pub fn low_data(spec: &TupleSpec) -> Result<LowData> {
    let n = spec.n.ok_or_else(|| Error::Dimension("ambient size n required".into()))?;
    Ok(LowData {
        d0: spec.targets.iter().map(|h| (n - h.s_rank()) as u64).collect(),
        d1: spec.targets.iter().map(|h| h.count(1) as u64).collect(),
    })
}

/// Membership of the truncated data in C_{X_m,l,k} for k ∈ {1, 2} (k = 2 needs l = 1).
pub fn member_c_lk(data: &LowData, l: usize, k: u32) -> Result<MembershipReport> {
    let m = data.d0.len();
    if m == 0 {
        return Err(Error::Dimension("empty tuple".into()));
    }
    let sum0: i64 = data.d0.iter().map(|&x| x as i64).sum();
    let max0 = *data.d0.iter().max().unwrap() as i64;
    match k {
        1 => {
            if l > m {
                return Err(Error::Dimension(format!("l={l} exceeds m={m}")));
            }
            let rhs = (m - l) as i64 * max0;
            let mut report = MembershipReport::pass();
            if sum0 >= rhs {
                report.witnesses = Some((max0 as u64, 0));
            } else {
                report = MembershipReport::fail(Violation::Inequality {
                    label: format!("({m}-{l})*max d_0 <= sum d_0"),
                    lhs: rhs,
                    rhs: sum0,
                });
            }
            Ok(report)
        }
        2 if l == 1 => {
            if data.d1.len() != m {
                return Err(Error::Dimension(format!("{} d_1 entries for m={m}", data.d1.len())));
            }
            Ok(match search_alphas(data) {
                Some(w) => MembershipReport { witnesses: Some(w), ..MembershipReport::pass() },
                None => MembershipReport::fail(Violation::NoWitness(
                    "alpha0 >= max d_0, 2alpha0+alpha1 >= max(2d_0+d_1) with both sums nonnegative".into(),
                )),
            })
        }
        _ => Err(Error::Dimension(format!("unsupported (l, k) = ({l}, {k})"))),
    }
}

/// Smallest (α₀, α₁) in lexicographic order satisfying the k = 2 inequalities.
///
/// Past α₀ = ⌈M/2⌉ the lower bound on α₁ is 0 and larger α₀ only lowers the first
/// sum; past α₁ = max(L, max d₁) the α₁ sum is nonincreasing for m ≥ 2.
pub(crate) fn search_alphas(data: &LowData) -> Option<(u64, u64)> {
    let m = data.d0.len() as i64;
    let sum0: i64 = data.d0.iter().map(|&x| x as i64).sum();
    let max0 = *data.d0.iter().max()? as i64;
    let max1 = data.d1.iter().copied().max().unwrap_or(0) as i64;
    let big_m = data.d0.iter().zip(&data.d1).map(|(&a, &b)| 2 * a as i64 + b as i64).max()?;
    let top0 = max0.max((big_m + 1) / 2);
    for a0 in max0..=top0 {
        let first = sum0 - (m - 1) * a0;
        if first < 0 {
            break;
        }
        let lo = (big_m - 2 * a0).max(0);
        let hi = if m >= 2 { lo.max(max1) } else { lo.max(max1) + 1 };
        for a1 in lo..=hi {
            let second: i64 = data.d1.iter().map(|&d| (d as i64).min(a1)).sum::<i64>() - (m - 2) * a1;
            if first + second >= 0 {
                return Some((a0 as u64, a1 as u64));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn data(d0: &[u64], d1: &[u64]) -> LowData {
        LowData { d0: d0.to_vec(), d1: d1.to_vec() }
    }

    #[test]
    fn examples() {
        assert!(!member_c_lk(&data(&[2, 0, 0, 0], &[]), 1, 1).unwrap().verdict);
        let r = member_c_lk(&data(&[1, 1, 1, 0], &[0, 0, 0, 1]), 1, 2).unwrap();
        assert_eq!((r.verdict, r.witnesses), (true, Some((1, 0))));
        let r = member_c_lk(&data(&[1, 1, 1, 1], &[0, 0, 0, 0]), 1, 2).unwrap();
        assert_eq!(r.witnesses, Some((1, 0)));
        assert!(member_c_lk(&data(&[1, 1], &[0]), 1, 2).is_err());
        assert!(member_c_lk(&data(&[1, 1], &[0, 0]), 0, 2).is_err());
    }

    /// Unbounded reference: α₀, α₁ up to a generous cap.
    fn brute(d: &LowData) -> bool {
        let m = d.d0.len() as i64;
        let sum0: i64 = d.d0.iter().map(|&x| x as i64).sum();
        let max0 = *d.d0.iter().max().unwrap() as i64;
        let big_m = d.d0.iter().zip(&d.d1).map(|(&a, &b)| 2 * a as i64 + b as i64).max().unwrap();
        (max0..=20).any(|a0| {
            (0..=20).any(|a1| {
                let first = sum0 - (m - 1) * a0;
                let second: i64 = d.d1.iter().map(|&x| (x as i64).min(a1)).sum::<i64>() - (m - 2) * a1;
                2 * a0 + a1 >= big_m && first >= 0 && first + second >= 0
            })
        })
    }

    fn all_data(m: usize, cap: u64) -> impl Iterator<Item = LowData> {
        let base = cap + 1;
        (0..base.pow(2 * m as u32)).map(move |code| {
            let digit = |k: usize| code / base.pow(k as u32) % base;
            LowData { d0: (0..m).map(digit).collect(), d1: (m..2 * m).map(digit).collect() }
        })
    }

    #[test]
    fn bounded_search_is_exhaustive() {
        for m in 1..=5 {
            let cap = if m <= 3 { 3 } else { 2 };
            for d in all_data(m, cap) {
                assert_eq!(search_alphas(&d).is_some(), brute(&d), "{d:?}");
            }
        }
    }

    #[test]
    fn minimal_alpha0_suffices_up_to_four() {
        for m in 1..=4 {
            let cap = if m <= 3 { 3 } else { 2 };
            for d in all_data(m, cap) {
                if let Some((a0, _)) = search_alphas(&d) {
                    assert_eq!(a0, *d.d0.iter().max().unwrap(), "{d:?}");
                }
            }
        }
    }
}

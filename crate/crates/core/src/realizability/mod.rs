//! Membership predicates for realizable cokernel tuples.

mod rank1;
mod truncated;

use std::fmt;

use crate::error::{Error, Result};
use crate::module_types::ModuleType;

pub(crate) use rank1::level_of;
pub use rank1::{rank1_classify, rank1_level};
pub(crate) use truncated::search_alphas;
pub use truncated::{low_data, member_c_lk, LowData};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// s_first ≠ s_other (1-based indices).
    RankMismatch { first: usize, other: usize, s_first: usize, s_other: usize },
    /// A linear inequality lhs ≤ rhs that fails.
    Inequality { label: String, lhs: i64, rhs: i64 },
    /// No (α₀, α₁) in the bounded search satisfies the inequalities.
    NoWitness(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::RankMismatch { first, other, s_first, s_other } => {
                write!(f, "s_{first}={s_first} != s_{other}={s_other}")
            }
            Violation::Inequality { label, lhs, rhs } => write!(f, "{label}: {lhs} > {rhs}"),
            Violation::NoWitness(what) => write!(f, "no witness: {what}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MembershipReport {
    pub verdict: bool,
    pub failed_constraint: Option<Violation>,
    pub witnesses: Option<(u64, u64)>,
    /// Verdict rests on the open conjectural inequalities (m ≥ 5).
    pub conjectural: bool,
}

impl MembershipReport {
    fn pass() -> Self {
        Self { verdict: true, failed_constraint: None, witnesses: None, conjectural: false }
    }

    fn fail(v: Violation) -> Self {
        Self { verdict: false, failed_constraint: Some(v), witnesses: None, conjectural: false }
    }
}

impl fmt::Display for MembershipReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", if self.verdict { "realizable" } else { "not realizable" })?;
        if self.conjectural {
            write!(f, " (conjectural)")?;
        }
        if let Some(v) = &self.failed_constraint {
            write!(f, "\nviolated: {v}")?;
        }
        if let Some((a0, a1)) = self.witnesses {
            write!(f, "\nwitness: alpha0={a0} alpha1={a1}")?;
        }
        Ok(())
    }
}

pub(crate) fn rank_check(targets: &[ModuleType]) -> Option<Violation> {
    let s0 = targets.first()?.s_rank();
    targets.iter().enumerate().skip(1).find(|(_, h)| h.s_rank() != s0).map(|(j, h)| Violation::RankMismatch {
        first: 1,
        other: j + 1,
        s_first: s0,
        s_other: h.s_rank(),
    })
}

fn d(h: &ModuleType, r: u32) -> i64 {
    h.count(r) as i64
}

fn big_d(targets: &[ModuleType], r: u32) -> i64 {
    targets.iter().map(|h| d(h, r)).sum()
}

/// Exact membership for m ≤ 4; independent of the shift points.
pub fn member_cxm(targets: &[ModuleType]) -> Result<MembershipReport> {
    let m = targets.len();
    if m == 0 || m > 4 {
        return Err(Error::UnsupportedShiftCount(m));
    }
    if let Some(v) = rank_check(targets) {
        return Ok(MembershipReport::fail(v));
    }
    let d1 = big_d(targets, 1);
    let d2 = big_d(targets, 2);
    if m >= 3 {
        let c = m as i64 - 1;
        for (i, h) in targets.iter().enumerate() {
            if c * d(h, 1) > d1 {
                return Ok(MembershipReport::fail(Violation::Inequality {
                    label: format!("{c}*d_{{1,{}}} <= D_1", i + 1),
                    lhs: c * d(h, 1),
                    rhs: d1,
                }));
            }
        }
    }
    if m == 4 {
        for (i, hi) in targets.iter().enumerate() {
            for (j, hj) in targets.iter().enumerate() {
                let lhs = d(hi, 1) + 2 * (d(hj, 1) + d(hj, 2));
                if lhs > d1 + d2 {
                    return Ok(MembershipReport::fail(Violation::Inequality {
                        label: format!(
                            "d_{{1,{}}} + 2(d_{{1,{}}}+d_{{2,{}}}) <= D_1+D_2",
                            i + 1,
                            j + 1,
                            j + 1
                        ),
                        lhs,
                        rhs: d1 + d2,
                    }));
                }
            }
        }
    }
    Ok(MembershipReport::pass())
}

/// The conjectured criterion for any m: equal s_i and, for 1 ≤ r ≤ m−2,
/// Σ_{k<r} S_k(i_k) + (m−r) S_r(i_r) ≤ D_1+…+D_r with S_k(i) = Σ_{l≤k} d_{l,i}.
///
/// Each index i_k enters one summand only, so the worst choice maximizes each term separately.
pub fn conjecture_member(targets: &[ModuleType]) -> Result<MembershipReport> {
    let m = targets.len();
    if m == 0 {
        return Err(Error::UnsupportedShiftCount(0));
    }
    let mut report = match rank_check(targets) {
        Some(v) => MembershipReport::fail(v),
        None => MembershipReport::pass(),
    };
    report.conjectural = m >= 5;
    if !report.verdict {
        return Ok(report);
    }
    let partial = |i: usize, k: u32| -> i64 { (1..=k).map(|l| d(&targets[i], l)).sum() };
    let argmax = |k: u32| -> (usize, i64) {
        (0..m).map(|i| (i, partial(i, k))).fold((0, i64::MIN), |a, b| if b.1 > a.1 { b } else { a })
    };
    for r in 1..=(m.saturating_sub(2)) as u32 {
        let mut lhs = 0;
        let mut picks = Vec::new();
        for k in 1..r {
            let (i, v) = argmax(k);
            lhs += v;
            picks.push(i + 1);
        }
        let (i, v) = argmax(r);
        lhs += (m as i64 - r as i64) * v;
        picks.push(i + 1);
        let rhs: i64 = (1..=r).map(|l| big_d(targets, l)).sum();
        if lhs > rhs {
            let idx: Vec<String> = picks.iter().map(usize::to_string).collect();
            report.verdict = false;
            report.failed_constraint =
                Some(Violation::Inequality { label: format!("r={r}, i=({})", idx.join(",")), lhs, rhs });
            return Ok(report);
        }
    }
    Ok(report)
}

//! Explicit matrices with prescribed shifted cokernels.

mod correction;
mod generators;
mod rank1;
mod zones;

use std::fmt;

use crate::error::{Error, Result};
use crate::module_types::{presentation, Exponent, ModuleType, TupleSpec};
use crate::padic::{
    companion_lift, scalar, shifted_cokernel_type, IntegralPoly, MatPk, Modulus, TruncatedModule, XSet,
};
use crate::realizability::{low_data, member_cxm, search_alphas};

pub use correction::exact_correction;
pub use generators::{realize_d_generator, realize_generator, GeneratorColumn, GeneratorKind, Symbol};
pub use rank1::realize_rank1;
pub use zones::zone_decompose;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftCheck {
    pub shift: i64,
    pub expected: TruncatedModule,
    pub actual: TruncatedModule,
}

impl ShiftCheck {
    pub fn matches(&self) -> bool {
        self.expected == self.actual
    }
}

/// Per-shift comparison of cok(A + p·x_i·I) against H_i at the matrix precision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verification {
    pub checks: Vec<ShiftCheck>,
}

impl Verification {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(ShiftCheck::matches)
    }

    /// Index of the first mismatching shift.
    pub fn first_failure(&self) -> Option<usize> {
        self.checks.iter().position(|c| !c.matches())
    }
}

impl fmt::Display for Verification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.checks.iter().enumerate() {
            let mark = if c.matches() { "ok" } else { "MISMATCH" };
            writeln!(f, "x_{}={}: expected {} got {} {mark}", i + 1, c.shift, c.expected, c.actual)?;
        }
        Ok(())
    }
}

pub fn verify_realization(a: &MatPk, spec: &TupleSpec) -> Result<Verification> {
    let modulus = a.modulus();
    if modulus.p() != spec.p {
        return Err(Error::ModulusMismatch);
    }
    if !a.is_square() {
        return Err(Error::Dimension("matrix must be square".into()));
    }
    let k = modulus.precision();
    let checks = spec
        .x
        .iter()
        .zip(&spec.targets)
        .map(|(&x, h)| {
            let c = modulus.mul(modulus.p() % modulus.order(), modulus.reduce(x));
            ShiftCheck { shift: x, expected: h.truncate(k), actual: shifted_cokernel_type(a, c).module() }
        })
        .collect();
    Ok(Verification { checks })
}

#[derive(Clone, Debug)]
pub struct SynthesisReport {
    pub matrix: MatPk,
    /// First integral P at the normalized shifts x_i − x_1, with cok P(x_i − x_1) ≅ pH_i.
    pub integral: IntegralPoly,
    /// Zone blocks used for four shifts; empty otherwise.
    pub blocks: Vec<GeneratorColumn>,
    pub verification: Verification,
}

/// Smallest precision accepted by [`realize_tuple`].
pub fn minimum_precision(spec: &TupleSpec) -> u32 {
    spec.max_exponent() + 2
}

/// Builds A over Z/p^K with cok(A + p·x_i·I) ≅ H_i for every i, truncated at K.
pub fn realize_tuple(spec: &TupleSpec, k: u32) -> Result<SynthesisReport> {
    let m = spec.m();
    if m == 0 || m > 4 {
        return Err(Error::UnsupportedShiftCount(m));
    }
    let need = minimum_precision(spec);
    if k < need {
        return Err(Error::PrecisionTooSmall { k, need });
    }
    let report = member_cxm(&spec.targets)?;
    if !report.verdict {
        let why = report.failed_constraint.map(|v| v.to_string()).unwrap_or_default();
        return Err(Error::NotRealizable(why));
    }
    let modulus = Modulus::new(spec.p, k)?;
    let x1 = spec.x[0];
    let normalized: Vec<i64> = spec.x.iter().map(|&x| x - x1).collect();
    let xs = XSet::new(modulus, &normalized)?;
    let s = spec.targets.iter().map(ModuleType::s_rank).max().unwrap_or(0);
    if s == 0 {
        let matrix = MatPk::zeros(modulus, 0, 0);
        let verification = verify_realization(&matrix, spec)?;
        return Ok(SynthesisReport {
            matrix,
            integral: IntegralPoly::zero(modulus, 0, Some(1)),
            blocks: Vec::new(),
            verification,
        });
    }
    let reduced: Vec<ModuleType> = spec.targets.iter().map(ModuleType::shift_down).collect();
    let (integral, blocks) = first_integral(spec.p, &reduced, s, &xs)?;
    let lifted = companion_lift(&monic_lift(&integral, &xs)?)?;
    let shift = modulus.mul(spec.p % modulus.order(), modulus.reduce(x1));
    let matrix = lifted.add_scalar(modulus.neg(shift));
    let verification = verify_realization(&matrix, spec)?;
    if let Some(i) = verification.first_failure() {
        return Err(Error::Verification(i + 1));
    }
    Ok(SynthesisReport { matrix, integral, blocks, verification })
}

/// Parts of G padded with zeros to length s, ascending.
fn padded(g: &ModuleType, s: usize) -> Vec<Exponent> {
    let parts = g.parts();
    let mut out = vec![Exponent::Finite(0); s - parts.len()];
    out.extend(parts);
    out
}

fn first_integral(
    p: u64,
    reduced: &[ModuleType],
    s: usize,
    xs: &XSet,
) -> Result<(IntegralPoly, Vec<GeneratorColumn>)> {
    let modulus = xs.modulus();
    let rows: Vec<Vec<Exponent>> = reduced.iter().map(|g| padded(g, s)).collect();
    match rows.len() {
        1 => {
            let mut diag = MatPk::zeros(modulus, s, s);
            for (j, e) in rows[0].iter().enumerate() {
                diag.set(j, j, e.finite().map_or(0, |b| modulus.p_pow(b)));
            }
            Ok((IntegralPoly::constant(diag, Some(1))?, Vec::new()))
        }
        2 => {
            let cols: Vec<Vec<Exponent>> = (0..s).map(|j| vec![rows[0][j], rows[1][j]]).collect();
            Ok((sum_rank1(&cols, xs)?, Vec::new()))
        }
        3 => Ok((sum_rank1(&three_shift_columns(&rows), xs)?, Vec::new())),
        _ => {
            let spec = TupleSpec::new(
                p,
                xs.values().iter().map(|&v| v as i64).collect(),
                reduced.to_vec(),
                Some(s),
            )?;
            let grid = presentation(&spec, 2)?;
            let alphas = search_alphas(&low_data(&spec)?)
                .ok_or_else(|| Error::NotRealizable("no truncated witness".into()))?;
            let blocks = zone_decompose(&grid, alphas)?;
            let mut poly: Option<IntegralPoly> = None;
            for block in &blocks {
                let next = realize_generator(block, xs)?;
                poly = Some(match poly {
                    None => next,
                    Some(acc) => acc.direct_sum(&next)?,
                });
            }
            let poly = poly.expect("s > 0 gives at least one block");
            let deep: Vec<Vec<Exponent>> =
                rows.iter().map(|r| r.iter().copied().filter(|e| e.is_at_least(2)).collect()).collect();
            Ok((exact_correction(&poly, &deep, xs)?, blocks))
        }
    }
}

/// Column patterns for three shifts: the row with the most zeros is matched against
/// zeros of the other two first.
fn three_shift_columns(rows: &[Vec<Exponent>]) -> Vec<Vec<Exponent>> {
    let zero = Exponent::Finite(0);
    let zeros: Vec<usize> = rows.iter().map(|r| r.iter().filter(|&&e| e == zero).count()).collect();
    let s = rows[0].len();
    let top = (0..3).max_by_key(|&i| zeros[i]).unwrap_or(0);
    let (a, b) = ((top + 1) % 3, (top + 2) % 3);
    let mut nonzero: Vec<std::vec::IntoIter<Exponent>> = rows
        .iter()
        .map(|r| r.iter().copied().filter(|&e| e != zero).collect::<Vec<_>>().into_iter())
        .collect();
    let mut cols = Vec::with_capacity(s);
    let mut push = |picks: [bool; 3], nonzero: &mut Vec<std::vec::IntoIter<Exponent>>| {
        let col: Vec<Exponent> = (0..3)
            .map(|i| if picks[i] { nonzero[i].next().expect("part available") } else { zero })
            .collect();
        cols.push(col);
    };
    let only = |i: usize| -> [bool; 3] {
        let mut p = [false; 3];
        p[i] = true;
        p
    };
    for _ in 0..zeros[a] + zeros[b] - zeros[top] {
        push([false; 3], &mut nonzero);
    }
    for _ in 0..zeros[top] - zeros[b] {
        push(only(b), &mut nonzero);
    }
    for _ in 0..zeros[top] - zeros[a] {
        push(only(a), &mut nonzero);
    }
    for _ in 0..s - zeros[top] {
        push([true; 3], &mut nonzero);
    }
    cols
}

fn sum_rank1(cols: &[Vec<Exponent>], xs: &XSet) -> Result<IntegralPoly> {
    let mut acc: Option<IntegralPoly> = None;
    for col in cols {
        let next = realize_rank1(col, 1, xs)?;
        acc = Some(match acc {
            None => next,
            Some(a) => a.direct_sum(&next)?,
        });
    }
    acc.ok_or_else(|| Error::Dimension("no columns".into()))
}

/// Q = p·P + p^{d+m} t^d ∏(t − x_j)·I with d = deg P, monic in the sense of the companion lift.
fn monic_lift(p_poly: &IntegralPoly, xs: &XSet) -> Result<IntegralPoly> {
    let modulus = xs.modulus();
    let n = p_poly.size();
    let d = p_poly.degree();
    let m = xs.len();
    let z = p_poly.scale(modulus.p() % modulus.order());
    let f = scalar::scale(modulus, &scalar::from_roots(modulus, xs.values()), modulus.p_pow((d + m) as u32));
    let coeffs = (0..=d + m)
        .map(|j| {
            let c = z.coeff(j);
            if j < d {
                Ok(c)
            } else {
                c.add(&MatPk::scalar(modulus, n, f[j - d]))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    IntegralPoly::new(modulus, n, coeffs, Some(0))
}

#[cfg(test)]
mod tests;

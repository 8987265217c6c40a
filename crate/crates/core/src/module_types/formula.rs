use std::str::FromStr;

use crate::error::{Error, Result};
use crate::module_types::counting::aut_order_f64;
use crate::module_types::ModuleType;

const TAIL: f64 = 1e-12;

/// ∏_{k=1}^{r} (1 − p^{−k}).
pub fn c_partial(p: u64, r: usize) -> f64 {
    (1..=r).map(|k| 1.0 - (p as f64).powi(-(k as i32))).product()
}

/// ∏_{k≥1} (1 − p^{−k}), stopped once p^{−k} < 1e−12.
pub fn c_infinity(p: u64) -> f64 {
    let inv = 1.0 / p as f64;
    let mut term = inv;
    let mut out = 1.0;
    while term >= TAIL {
        out *= 1.0 - term;
        term *= inv;
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormulaKind {
    /// Single cokernel distribution c_∞(p)/|Aut H|.
    Fw,
    /// Joint law of cok(A) and cok(A + pI) for a pair of groups.
    Lee,
    /// Independent product over distinct shift residues.
    LinearProduct,
}

impl FromStr for FormulaKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fw" => Ok(Self::Fw),
            "lee" => Ok(Self::Lee),
            "linear_product" => Ok(Self::LinearProduct),
            other => Err(Error::FormulaKind(other.to_string())),
        }
    }
}

fn inverse_aut(p: u64, h: &ModuleType) -> Result<f64> {
    Ok(1.0 / aut_order_f64(p, h)?)
}

pub fn formula_probability(kind: FormulaKind, p: u64, groups: &[ModuleType]) -> Result<f64> {
    if let Some(h) = groups.iter().find(|h| !h.is_finite()) {
        return Err(Error::FreePart(h.to_string()));
    }
    let c = c_infinity(p);
    match (kind, groups) {
        (FormulaKind::Fw, [h]) => Ok(c * inverse_aut(p, h)?),
        (FormulaKind::Lee, [h1, h2]) => {
            let r = h1.s_rank();
            if r != h2.s_rank() {
                return Ok(0.0);
            }
            let cr = c_partial(p, r);
            let lead = (p as f64).powi((r * r) as i32);
            Ok(lead * c * cr * cr * inverse_aut(p, h1)? * inverse_aut(p, h2)?)
        }
        (FormulaKind::LinearProduct, hs) if !hs.is_empty() => {
            hs.iter().try_fold(1.0, |acc, h| Ok(acc * c * inverse_aut(p, h)?))
        }
        (_, hs) => Err(Error::Dimension(format!("{kind:?} given {} groups", hs.len()))),
    }
}

use crate::error::{Error, Result};
use crate::module_types::Exponent;
use crate::padic::{scalar, smith_normal_form, IntegralPoly, MatPk, XSet};

/// Adjusts the deep Smith exponents of a first integral at each shift point.
///
/// At x_i the Smith exponents of `poly` that are at least m − 2 are replaced, in sorted order,
/// by `deep_targets[i]`; shallower exponents are untouched. The correction at x_i is
/// L_i(t)·U_i·diag(0, ..., p^a − p^e)·V_i with L_i the Lagrange basis on X.
pub fn exact_correction(
    poly: &IntegralPoly,
    deep_targets: &[Vec<Exponent>],
    x: &XSet,
) -> Result<IntegralPoly> {
    let m = x.len();
    if deep_targets.len() != m {
        return Err(Error::Correction(format!("{} target lists for {m} shift points", deep_targets.len())));
    }
    if !poly.satisfies_order(Some(1)) {
        return Err(Error::Correction("input is not a first integral".into()));
    }
    let modulus = poly.modulus();
    let threshold = m.saturating_sub(2) as u32;
    let n = poly.size();
    let mut out = poly.clone().with_order(Some(1))?;
    for (i, targets) in deep_targets.iter().enumerate() {
        if let Some(t) = targets.iter().find(|t| !t.is_at_least(threshold)) {
            return Err(Error::Correction(format!("target {t} at shift {} is below {threshold}", i + 1)));
        }
        let snf = smith_normal_form(&poly.eval(x.values()[i]));
        let deep: Vec<usize> = (0..n).filter(|&j| snf.exps[j] >= threshold).collect();
        if deep.len() != targets.len() {
            return Err(Error::Correction(format!(
                "shift {} has {} deep exponents but {} targets",
                i + 1,
                deep.len(),
                targets.len()
            )));
        }
        let mut sorted = targets.clone();
        sorted.sort_unstable();
        let mut diag = MatPk::zeros(modulus, n, n);
        for (&j, t) in deep.iter().zip(&sorted) {
            let want = match t {
                Exponent::Finite(a) => modulus.p_pow(*a),
                Exponent::Infinite => 0,
            };
            diag.set(j, j, modulus.sub(want, modulus.p_pow(snf.exps[j])));
        }
        if diag.is_zero() {
            continue;
        }
        let delta = snf.u.mul(&diag)?.mul(&snf.v)?;
        let basis = scalar::lagrange(modulus, x.values(), i);
        let term = IntegralPoly::constant(delta, Some(1))?.mul_scalar_poly(&basis);
        out = out.add(&term)?;
    }
    out.with_order(Some(1))
}

use crate::error::{Error, Result};
use crate::module_types::ModuleType;

fn checked_pow(p: u64, e: u64) -> Result<u128> {
    let e = u32::try_from(e).map_err(|_| Error::Overflow)?;
    (p as u128).checked_pow(e).ok_or(Error::Overflow)
}

fn require_finite(g: &ModuleType, what: &str) -> Result<Vec<u32>> {
    if !g.is_finite() {
        return Err(Error::FreePart(format!("{what} {g}")));
    }
    Ok(g.finite_parts())
}

/// #Hom(H, G); free parts of H map freely.
pub fn count_hom(p: u64, source: &ModuleType, target: &ModuleType) -> Result<u128> {
    let mu = require_finite(target, "target")?;
    let exp: u64 =
        source.parts().iter().map(|&l| mu.iter().map(|&m| u64::from(l.capped(m))).sum::<u64>()).sum();
    checked_pow(p, exp)
}

/// Every subspace of F_p^r as its list of elements.
fn subspaces(p: u64, r: usize) -> Vec<Vec<Vec<u64>>> {
    let mut out = Vec::new();
    for mask in 0u32..(1 << r) {
        let pivots: Vec<usize> = (0..r).filter(|&j| mask >> j & 1 == 1).collect();
        // Reduced echelon: free entries sit right of each pivot, outside pivot columns.
        let free: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(row, &pc)| ((pc + 1)..r).filter(|c| mask >> c & 1 == 0).map(move |c| (row, c)))
            .collect();
        let choices = p.pow(free.len() as u32);
        for idx in 0..choices {
            let mut basis = vec![vec![0u64; r]; pivots.len()];
            for (row, &pc) in pivots.iter().enumerate() {
                basis[row][pc] = 1;
            }
            let mut t = idx;
            for &(row, c) in &free {
                basis[row][c] = t % p;
                t /= p;
            }
            out.push(span(p, &basis, r));
        }
    }
    out
}

fn span(p: u64, basis: &[Vec<u64>], r: usize) -> Vec<Vec<u64>> {
    let d = basis.len() as u32;
    (0..p.pow(d))
        .map(|idx| {
            let mut v = vec![0u64; r];
            let mut t = idx;
            for b in basis {
                let c = t % p;
                t /= p;
                for (x, y) in v.iter_mut().zip(b) {
                    *x = (*x + c * y) % p;
                }
            }
            v
        })
        .collect()
}

/// #Sur(H, G) by Möbius inversion over the maximal-subgroup lattice of G/pG.
///
/// A map H → G is onto iff its image mod pG is all of G/pG. For a subspace W of
/// G/pG, maps landing in the preimage K_W number ∏_i |K_W[p^{λ_i}]|, and the
/// Möbius function of the subspace lattice is (−1)^c p^{c(c−1)/2} in codimension c.
pub fn count_sur(p: u64, source: &ModuleType, target: &ModuleType) -> Result<u128> {
    let mu = require_finite(target, "target")?;
    let r = mu.len();
    let lambdas = source.parts();
    let mut total: i128 = 0;
    for w in subspaces(p, r) {
        let dim = w.len().ilog(p as usize) as usize;
        let c = r - dim;
        let mut term: u128 = 1;
        for &lam in &lambdas {
            let inside =
                w.iter().filter(|v| (0..r).all(|j| v[j] == 0 || lam.is_at_least(mu[j]))).count() as u128;
            let exp: u64 =
                mu.iter().map(|&m| u64::from(if lam.is_at_least(m) { m - 1 } else { lam.capped(m) })).sum();
            term = term
                .checked_mul(inside)
                .and_then(|t| t.checked_mul(checked_pow(p, exp).ok()?))
                .ok_or(Error::Overflow)?;
        }
        let weight = checked_pow(p, (c * c.saturating_sub(1) / 2) as u64)?;
        let signed =
            i128::try_from(term.checked_mul(weight).ok_or(Error::Overflow)?).map_err(|_| Error::Overflow)?;
        total += if c.is_multiple_of(2) { signed } else { -signed };
    }
    u128::try_from(total).map_err(|_| Error::Overflow)
}

/// |Aut(H)| for finite H via the elementary-divisor product formula.
pub fn aut_order(p: u64, h: &ModuleType) -> Result<u128> {
    let e = require_finite(h, "module")?;
    let n = e.len();
    let mut out: u128 = 1;
    for k in 0..n {
        let d = e.iter().rposition(|&x| x == e[k]).unwrap() + 1;
        let c = e.iter().position(|&x| x == e[k]).unwrap() + 1;
        let lead = checked_pow(p, d as u64)? - checked_pow(p, k as u64)?;
        let tail = checked_pow(p, u64::from(e[k]) * (n - d) as u64)?
            .checked_mul(checked_pow(p, u64::from(e[k] - 1) * (n - c + 1) as u64)?)
            .ok_or(Error::Overflow)?;
        out = out.checked_mul(lead).and_then(|x| x.checked_mul(tail)).ok_or(Error::Overflow)?;
    }
    Ok(out)
}

/// Same product in floating point, for orders past 128 bits.
pub(crate) fn aut_order_f64(p: u64, h: &ModuleType) -> Result<f64> {
    let e = require_finite(h, "module")?;
    let n = e.len();
    let p = p as f64;
    let mut out = 1.0;
    for k in 0..n {
        let d = e.iter().rposition(|&x| x == e[k]).unwrap() + 1;
        let c = e.iter().position(|&x| x == e[k]).unwrap() + 1;
        out *= p.powi(d as i32) - p.powi(k as i32);
        out *= p.powi((e[k] as usize * (n - d)) as i32);
        out *= p.powi(((e[k] - 1) as usize * (n - c + 1)) as i32);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> ModuleType {
        s.parse().unwrap()
    }

    #[test]
    fn small_counts() {
        assert_eq!(count_sur(2, &t("2"), &t("1")).unwrap(), 1);
        assert_eq!(count_sur(2, &t("1,1"), &t("1")).unwrap(), 3);
        assert_eq!(count_sur(2, &t("1"), &t("2")).unwrap(), 0);
        assert_eq!(count_hom(2, &t("2"), &t("1")).unwrap(), 2);
        assert_eq!(count_hom(3, &t("inf"), &t("2")).unwrap(), 9);
        assert_eq!(count_sur(3, &t("inf"), &t("2")).unwrap(), 6);
        assert_eq!(count_sur(2, &t("0"), &t("0")).unwrap(), 1);
        assert!(count_sur(2, &t("1"), &t("inf")).is_err());
    }

    #[test]
    fn aut_orders() {
        assert_eq!(aut_order(5, &t("3")).unwrap(), 25 * 4);
        assert_eq!(aut_order(2, &t("1,1")).unwrap(), 6);
        assert_eq!(aut_order(2, &t("1,2")).unwrap(), 8);
        assert_eq!(aut_order(3, &t("0")).unwrap(), 1);
        // GL_3(F_2)
        assert_eq!(aut_order(2, &t("1,1,1")).unwrap(), 168);
    }

    #[test]
    fn self_surjections_are_automorphisms() {
        for s in ["1", "2", "1,1", "1,2", "1,1,2", "2,2", "1,3"] {
            for p in [2, 3] {
                assert_eq!(count_sur(p, &t(s), &t(s)).unwrap(), aut_order(p, &t(s)).unwrap(), "{s} p={p}");
            }
        }
    }
}

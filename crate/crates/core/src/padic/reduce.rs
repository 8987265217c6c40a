//! Matrix-level reductions between shifted matrices and matrix polynomials.

use crate::error::{Error, Result};
use crate::padic::matrix::MatPk;
use crate::padic::poly::{scalar, IntegralPoly};
use crate::padic::snf::{cokernel_type, smith_normal_form};

/// First integral P with cok(A + p·x·I) ≅ cok(p·P(x)) plus d_{0,A} trivial summands.
///
/// Writing A = U·D·V, the shifted matrix is U·(D + p·x·W)·V with W = U⁻¹V⁻¹.
/// Splitting W along the nonunit/unit diagonal blocks and taking the Schur
/// complement of the unit block gives
/// P(t) = A' + t·B1 − Σ_{r≥2} p^{r−1} t^r B2 (−B4)^{r−2} B3, where D's nonunit block is p·A'.
pub fn shift_reduce(a: &MatPk) -> Result<IntegralPoly> {
    if !a.is_square() {
        return Err(Error::Dimension("shift_reduce needs a square matrix".into()));
    }
    let m = a.modulus();
    let k = m.precision();
    if k < 2 {
        return Err(Error::Precision { p: m.p(), k });
    }
    let snf = smith_normal_form(a);
    let w = snf.u_inv.mul(&snf.v_inv)?;
    let units: Vec<usize> = (0..a.rows()).filter(|&i| snf.exps[i] == 0).collect();
    let deep: Vec<usize> = (0..a.rows()).filter(|&i| snf.exps[i] > 0).collect();
    let n1 = deep.len();

    let mut a0 = MatPk::zeros(m, n1, n1);
    for (t, &i) in deep.iter().enumerate() {
        let e = snf.exps[i];
        a0.set(t, t, if e >= k { 0 } else { m.p_pow(e - 1) });
    }
    let b1 = w.select(&deep, &deep);
    let b2 = w.select(&deep, &units);
    let b3 = w.select(&units, &deep);
    let neg_b4 = w.select(&units, &units).neg();

    let mut coeffs = vec![a0, b1];
    // term_r = B2 (−B4)^{r−2} B3
    let mut left = b2;
    for r in 2..=k {
        let term = left.mul(&b3)?;
        coeffs.push(term.neg().scale(m.p_pow(r - 1)));
        left = left.mul(&neg_b4)?;
    }
    Ok(IntegralPoly::from_parts(m, n1, coeffs, Some(1)).trimmed())
}

/// Permutes rows and columns so that a unit entry of P(0) lands in the bottom-right corner.
pub fn move_unit_to_corner(poly: &IntegralPoly) -> Option<IntegralPoly> {
    let n = poly.size();
    let c0 = poly.coeff(0);
    let m = poly.modulus();
    let (r, c) = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).find(|&(i, j)| m.is_unit(c0.get(i, j)))?;
    let perm = |last: usize| -> Vec<usize> {
        let mut idx: Vec<usize> = (0..n).filter(|&i| i != last).collect();
        idx.push(last);
        idx
    };
    let (rows, cols) = (perm(r), perm(c));
    let coeffs = poly.coeffs().iter().map(|a| a.select(&rows, &cols)).collect();
    Some(IntegralPoly::from_parts(m, n, coeffs, poly.order()))
}

/// Removes the last row and column of a zeroth integral whose constant corner entry is a unit.
///
/// With blocks P = [[P1, F], [G, u]] and u(t) = u0·(1 + w(t)), the Schur complement
/// P1 − F·u⁻¹·G agrees mod p^k with the truncation u⁻¹ ≈ u0⁻¹ Σ_{j<k} (−w)^j.
pub fn schur_reduce(poly: &IntegralPoly, k: u32) -> Result<IntegralPoly> {
    let m = poly.modulus();
    if k == 0 || k > m.precision() {
        return Err(Error::Precision { p: m.p(), k });
    }
    if !poly.satisfies_order(Some(0)) {
        return Err(Error::NotIntegral { degree: 0, order: 0 });
    }
    let n = poly.size();
    if n == 0 {
        return Err(Error::Dimension("empty polynomial has no corner".into()));
    }
    let last = n - 1;
    let u0 = poly.coeff(0).get(last, last);
    let u0_inv = m.inverse(u0).ok_or(Error::NotUnit { row: last, col: last })?;
    let head: Vec<usize> = (0..last).collect();
    let tail = [last];

    let corner: Vec<u64> = poly.coeffs().iter().map(|c| c.get(last, last)).collect();
    let mut w = scalar::scale(m, &corner, u0_inv);
    w[0] = 0;
    let neg_w = scalar::scale(m, &w, m.neg(1));
    let mut series = vec![1u64];
    let mut power = vec![1u64];
    for _ in 1..k {
        power = scalar::mul(m, &power, &neg_w);
        series = scalar::add(m, &series, &power);
    }
    let inverse = scalar::scale(m, &series, u0_inv);

    let block = |rows: &[usize], cols: &[usize]| -> Vec<MatPk> {
        poly.coeffs().iter().map(|c| c.select(rows, cols)).collect()
    };
    let p1 = block(&head, &head);
    let f = block(&head, &tail);
    let g = block(&tail, &head);

    let len = (f.len() + g.len() + inverse.len()).saturating_sub(2).max(p1.len());
    let mut coeffs = vec![MatPk::zeros(m, last, last); len];
    for (j, c) in p1.into_iter().enumerate() {
        coeffs[j] = c;
    }
    for (a, fa) in f.iter().enumerate() {
        for (b, gb) in g.iter().enumerate() {
            let outer = fa.mul(gb)?;
            if outer.is_zero() {
                continue;
            }
            for (c, &s) in inverse.iter().enumerate() {
                if s != 0 {
                    let idx = a + b + c;
                    coeffs[idx] = coeffs[idx].sub(&outer.scale(s))?;
                }
            }
        }
    }
    Ok(IntegralPoly::new(m, last, coeffs, Some(0))?.trimmed())
}

/// Block companion matrix of a zeroth integral Z(t) = Σ_j A_j (p t)^j with A_D = I.
/// It satisfies cok(A + p·x·I) ≅ cok(Z(x)) at every x.
pub fn companion_lift(z: &IntegralPoly) -> Result<MatPk> {
    let m = z.modulus();
    let k = m.precision();
    let n = z.size();
    if let Some(j) = (0..z.coeffs().len()).find(|&j| {
        let need = (j as u32).min(k);
        z.coeffs()[j].residues().iter().any(|&x| m.valuation(x) < need)
    }) {
        return Err(Error::NotIntegral { degree: j, order: 0 });
    }
    let deg = z.degree();
    let top = z.coeff(deg);
    if z.coeffs().is_empty() || top != MatPk::scalar(m, n, m.p_pow(deg as u32)) {
        return Err(Error::NotMonic);
    }
    let u_coeff = |j: usize| -> MatPk {
        let c = z.coeff(j);
        if j as u32 >= k {
            return MatPk::zeros(m, n, n);
        }
        let pj = m.p_pow(j as u32);
        let data = c.residues().iter().map(|&x| x / pj).collect();
        MatPk::from_residues(m, n, n, data).expect("shape preserved")
    };
    let size = deg * n;
    let mut out = MatPk::zeros(m, size, size);
    let minus_id = MatPk::identity(m, n).neg();
    for j in 0..deg {
        out.set_block(j * n, (deg - 1) * n, &u_coeff(j));
        if j > 0 {
            out.set_block(j * n, (j - 1) * n, &minus_id);
        }
    }
    Ok(out)
}

/// Outcome of scanning x ↦ A + p^r·x·J over the residues mod p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularityReport {
    pub baseline: usize,
    pub singular_residue: Option<u64>,
    /// d_r at each residue 0..p.
    pub counts: Vec<usize>,
}

pub fn singularity_scan(a: &MatPk, j: &MatPk, r: u32) -> Result<SingularityReport> {
    let m = a.modulus();
    if j.modulus() != m {
        return Err(Error::ModulusMismatch);
    }
    if !a.is_square() || j.rows() != a.rows() || j.cols() != a.cols() {
        return Err(Error::Dimension("A and J must be square of equal size".into()));
    }
    if r == 0 || r >= m.precision() {
        return Err(Error::Precision { p: m.p(), k: r });
    }
    let n = a.rows();
    let nonzero_rows = (0..n).filter(|&i| (0..n).any(|c| j.get(i, c) != 0)).count();
    let nonzero_cols = (0..n).filter(|&c| (0..n).any(|i| j.get(i, c) != 0)).count();
    if nonzero_rows == 0 || (nonzero_rows != 1 && nonzero_cols != 1) {
        return Err(Error::PerturbationShape);
    }
    let step = j.scale(m.p_pow(r));
    let mut lower: Option<Vec<usize>> = None;
    let mut counts = Vec::with_capacity(m.p() as usize);
    for x in 0..m.p() {
        let c = cokernel_type(&a.add(&step.scale(x))?);
        let below: Vec<usize> = (0..r).map(|i| c.count(i)).collect();
        match &lower {
            None => lower = Some(below),
            Some(prev) if *prev != below => {
                return Err(Error::SingularityPattern(format!("lower multiplicities change at x={x}")))
            }
            _ => {}
        }
        counts.push(c.count(r));
    }
    let baseline = *counts.iter().max().expect("p ≥ 2 residues");
    let drops: Vec<u64> = (0..m.p()).filter(|&x| counts[x as usize] != baseline).collect();
    if drops.len() > 1 {
        return Err(Error::SingularityPattern(format!("drops at residues {drops:?}")));
    }
    if let Some(&x) = drops.first() {
        if counts[x as usize] + 1 != baseline {
            return Err(Error::SingularityPattern(format!("drop larger than one at x={x}")));
        }
    }
    Ok(SingularityReport { baseline, singular_residue: drops.first().copied(), counts })
}

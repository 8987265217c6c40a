use std::fmt;

use crate::padic::matrix::MatPk;
use crate::padic::zpk::fmt_exponent;

/// A = U · D · V with U, V invertible and D = diag(p^{e_1}, p^{e_2}, ...), e nondecreasing.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: MatPk,
    pub u_inv: MatPk,
    pub v: MatPk,
    pub v_inv: MatPk,
    /// Exponents along the diagonal; the precision K marks a zero entry.
    pub exps: Vec<u32>,
}

impl SmithForm {
    /// The rows × cols diagonal factor D.
    pub fn diagonal(&self) -> MatPk {
        let m = self.u.modulus();
        let mut d = MatPk::zeros(m, self.u.rows(), self.v.rows());
        for (i, &e) in self.exps.iter().enumerate() {
            d.set(i, i, m.p_pow(e));
        }
        d
    }
}

struct Transforms {
    u: MatPk,
    u_inv: MatPk,
    v: MatPk,
    v_inv: MatPk,
}

fn reduce_diagonal(w: &mut MatPk, mut tr: Option<&mut Transforms>) -> Vec<u32> {
    let m = w.modulus();
    let k = m.precision();
    let (rows, cols) = (w.rows(), w.cols());
    let n = rows.min(cols);
    let mut exps = Vec::with_capacity(n);
    for t in 0..n {
        let mut best = (k, t, t);
        'scan: for i in t..rows {
            for j in t..cols {
                let v = m.valuation(w.get(i, j));
                if v < best.0 {
                    best = (v, i, j);
                    if v == 0 {
                        break 'scan;
                    }
                }
            }
        }
        let (v, pi, pj) = best;
        if v == k {
            exps.resize(n, k);
            break;
        }
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        if let Some(tr) = tr.as_deref_mut() {
            tr.u_inv.swap_rows(t, pi);
            tr.u.swap_cols(t, pi);
            tr.v_inv.swap_cols(t, pj);
            tr.v.swap_rows(t, pj);
        }
        let pv = m.p_pow(v);
        let unit = w.get(t, t) / pv;
        let unit_inv = m.inverse(unit).expect("pivot cofactor is a unit");
        w.scale_row(t, unit_inv);
        if let Some(tr) = tr.as_deref_mut() {
            tr.u_inv.scale_row(t, unit_inv);
            tr.u.scale_col(t, unit);
        }
        for i in t + 1..rows {
            let c = m.neg(w.get(i, t) / pv);
            if c != 0 {
                w.add_row_multiple(i, t, c);
                if let Some(tr) = tr.as_deref_mut() {
                    tr.u_inv.add_row_multiple(i, t, c);
                    tr.u.add_col_multiple(t, i, m.neg(c));
                }
            }
        }
        for j in t + 1..cols {
            let c = m.neg(w.get(t, j) / pv);
            if c != 0 {
                w.add_col_multiple(j, t, c);
                if let Some(tr) = tr.as_deref_mut() {
                    tr.v_inv.add_col_multiple(j, t, c);
                    tr.v.add_row_multiple(t, j, m.neg(c));
                }
            }
        }
        exps.push(v);
    }
    exps
}

/// Smith normal form over Z/p^K with the minimal-valuation pivot rule
/// (ties broken topmost, then leftmost).
pub fn smith_normal_form(a: &MatPk) -> SmithForm {
    let m = a.modulus();
    let mut tr = Transforms {
        u: MatPk::identity(m, a.rows()),
        u_inv: MatPk::identity(m, a.rows()),
        v: MatPk::identity(m, a.cols()),
        v_inv: MatPk::identity(m, a.cols()),
    };
    let mut w = a.clone();
    let exps = reduce_diagonal(&mut w, Some(&mut tr));
    SmithForm { u: tr.u, u_inv: tr.u_inv, v: tr.v, v_inv: tr.v_inv, exps }
}

/// Elementary divisor exponents only, without tracking transforms.
pub fn snf_exponents(a: &MatPk) -> Vec<u32> {
    let mut w = a.clone();
    reduce_diagonal(&mut w, None)
}

/// Exponent multiset of cok(A) = (Z/p^K)^rows / A·(Z/p^K)^cols, zeros included.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CokernelType {
    precision: u32,
    exps: Vec<u32>,
}

impl CokernelType {
    pub fn new(precision: u32, mut exps: Vec<u32>) -> Self {
        for e in &mut exps {
            *e = (*e).min(precision);
        }
        exps.sort_unstable();
        Self { precision, exps }
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    /// Multiplicity of exponent r; r = K counts the saturated bucket.
    pub fn count(&self, r: u32) -> usize {
        self.exps.iter().filter(|&&e| e == r.min(self.precision)).count()
    }

    /// Number of nonzero parts, i.e. the F_p-rank of the cokernel.
    pub fn s_rank(&self) -> usize {
        self.exps.iter().filter(|&&e| e > 0).count()
    }

    pub fn module(&self) -> TruncatedModule {
        TruncatedModule::new(self.precision, self.exps.iter().copied().filter(|&e| e > 0).collect())
    }

    /// Coarsens to a lower precision.
    pub fn coarsen(&self, k: u32) -> Self {
        Self::new(k.min(self.precision), self.exps.clone())
    }
}

impl fmt::Display for CokernelType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps.is_empty() {
            return write!(f, "-");
        }
        let parts: Vec<String> = self.exps.iter().map(|&e| fmt_exponent(e, self.precision)).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Nonzero exponent multiset with values capped at the precision k (k meaning "k or more").
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TruncatedModule {
    precision: u32,
    parts: Vec<u32>,
}

impl TruncatedModule {
    pub fn new(precision: u32, mut parts: Vec<u32>) -> Self {
        parts.retain(|&e| e > 0);
        for e in &mut parts {
            *e = (*e).min(precision);
        }
        parts.sort_unstable();
        Self { precision, parts }
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn count(&self, r: u32) -> usize {
        self.parts.iter().filter(|&&e| e == r.min(self.precision)).count()
    }

    pub fn s_rank(&self) -> usize {
        self.parts.len()
    }
}

impl fmt::Display for TruncatedModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.parts.iter().map(|&e| fmt_exponent(e, self.precision)).collect();
        write!(f, "{}", parts.join(","))
    }
}

pub fn cokernel_type(a: &MatPk) -> CokernelType {
    let k = a.modulus().precision();
    let mut exps = snf_exponents(a);
    exps.resize(a.rows(), k);
    CokernelType::new(k, exps)
}

/// Cokernel type of A + c·I without materializing a second copy by hand.
pub fn shifted_cokernel_type(a: &MatPk, c: u64) -> CokernelType {
    cokernel_type(&a.add_scalar(c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::zpk::Modulus;

    fn m(p: u64, k: u32) -> Modulus {
        Modulus::new(p, k).unwrap()
    }

    #[test]
    fn small_examples() {
        let m53 = m(5, 3);
        let snf = smith_normal_form(&MatPk::identity(m53, 2));
        assert_eq!(snf.exps, vec![0, 0]);
        assert_eq!(snf.u, MatPk::identity(m53, 2));
        assert_eq!(snf.v, MatPk::identity(m53, 2));

        let a = MatPk::from_rows(m53, &[vec![0, 5], vec![25, 0]]).unwrap();
        assert_eq!(smith_normal_form(&a).exps, vec![1, 2]);

        let a = MatPk::from_rows(m53, &[vec![5, 5], vec![5, 5]]).unwrap();
        assert_eq!(smith_normal_form(&a).exps, vec![1, 3]);
    }

    #[test]
    fn cokernel_examples() {
        let c = cokernel_type(&MatPk::diagonal(m(2, 3), &[2, 3]));
        assert_eq!(c.exps(), &[0, 1]);
        assert_eq!(c.module().to_string(), "1");
        let c = cokernel_type(&MatPk::zeros(m(2, 2), 1, 1));
        assert_eq!(c.exps(), &[2]);
        assert_eq!(c.to_string(), "2+");
        let c = cokernel_type(&MatPk::diagonal(m(3, 4), &[3, 9, 1]));
        assert_eq!(c.exps(), &[0, 1, 2]);
        assert_eq!(cokernel_type(&MatPk::zeros(m(3, 2), 0, 0)).exps(), &[] as &[u32]);
    }

    #[test]
    fn decomposition_reassembles() {
        let m = m(3, 3);
        let a = MatPk::from_rows(m, &[vec![6, 3, 9], vec![2, 0, 4], vec![18, 9, 0]]).unwrap();
        let snf = smith_normal_form(&a);
        let back = snf.u.mul(&snf.diagonal()).unwrap().mul(&snf.v).unwrap();
        assert_eq!(back, a);
        assert_eq!(snf.u.mul(&snf.u_inv).unwrap(), MatPk::identity(m, 3));
        assert_eq!(snf.v_inv.mul(&snf.v).unwrap(), MatPk::identity(m, 3));
    }

    #[test]
    fn rectangular_cokernel_has_free_rows() {
        let m = m(5, 2);
        let a = MatPk::from_rows(m, &[vec![5], vec![0]]).unwrap();
        assert_eq!(cokernel_type(&a).exps(), &[1, 2]);
    }
}

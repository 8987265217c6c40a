use std::fmt;

use crate::error::{Error, Result};
use crate::module_types::Exponent;
use crate::padic::{scalar, IntegralPoly, MatPk, XSet};
use crate::synthesis::rank1::realize_rank1;

/// Symbols of a 2-presentation: 0, 1, and 2 standing for "2 or more".
pub type Symbol = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GeneratorKind {
    /// One column realized by a rank-one integral.
    A,
    /// d all-zero columns followed by one column with 2⁺ on the rows in T.
    D1 { d: usize },
    /// One column with 1 on the rows in R, then e_r for each r in R.
    D2 { d: usize },
}

/// A block of the zone decomposition together with the columns it contributes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorColumn {
    pub kind: GeneratorKind,
    /// T for D1, R for D2, empty for A.
    pub rows: Vec<usize>,
    /// Each inner vector is one column of m symbols.
    pub columns: Vec<Vec<Symbol>>,
}

impl GeneratorColumn {
    pub fn single(column: Vec<Symbol>) -> Self {
        Self { kind: GeneratorKind::A, rows: Vec::new(), columns: vec![column] }
    }

    pub fn d1(m: usize, deep_rows: Vec<usize>) -> Result<Self> {
        if deep_rows.len() < 2 || deep_rows.len() > m || deep_rows.iter().any(|&r| r >= m) {
            return Err(Error::Generator(format!("D1 rows {deep_rows:?} with m={m}")));
        }
        let d = deep_rows.len() - 2;
        let mut columns = vec![vec![0; m]; d];
        let mut last = vec![1; m];
        for &r in &deep_rows {
            last[r] = 2;
        }
        columns.push(last);
        Ok(Self { kind: GeneratorKind::D1 { d }, rows: deep_rows, columns })
    }

    pub fn d2(m: usize, one_rows: Vec<usize>) -> Result<Self> {
        if one_rows.len() > m || one_rows.iter().any(|&r| r >= m) {
            return Err(Error::Generator(format!("D2 rows {one_rows:?} with m={m}")));
        }
        let mut head = vec![2; m];
        for &r in &one_rows {
            head[r] = 1;
        }
        let mut columns = vec![head];
        for &r in &one_rows {
            let mut e = vec![0; m];
            e[r] = 1;
            columns.push(e);
        }
        Ok(Self { kind: GeneratorKind::D2 { d: one_rows.len() }, rows: one_rows, columns })
    }

    pub fn width(&self) -> usize {
        self.columns.len()
    }

    /// Sorted symbols of row i.
    pub fn row(&self, i: usize) -> Vec<Symbol> {
        let mut out: Vec<Symbol> = self.columns.iter().map(|c| c[i]).collect();
        out.sort_unstable();
        out
    }
}

impl fmt::Display for GeneratorColumn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cols: Vec<String> = self
            .columns
            .iter()
            .map(|c| {
                let s: Vec<String> =
                    c.iter().map(|&v| if v >= 2 { "2+".into() } else { v.to_string() }).collect();
                format!("({})", s.join(","))
            })
            .collect();
        match self.kind {
            GeneratorKind::A => write!(f, "A {}", cols.join(" ")),
            GeneratorKind::D1 { d } => write!(f, "D1(d={d}) T={:?} {}", self.rows, cols.join(" ")),
            GeneratorKind::D2 { d } => write!(f, "D2(d={d}) R={:?} {}", self.rows, cols.join(" ")),
        }
    }
}

/// First integral realizing a D1 or D2 block.
///
/// D1 with f = ∏_{j∈T}(t − x_j) = Σ a_k t^k is the (d+1)×(d+1) matrix with 1 on the diagonal
/// and −t below it for the first d columns, and p·(a_0 + a_1 t), p·a_{d+1−k} t, ...,
/// p·(a_{d+1} t + a_{d+2} t²) from bottom to top in the last column. Its determinant is p·f.
/// D2 is diag(t − x_r) bordered by p with a zero corner.
pub fn realize_d_generator(kind: GeneratorKind, rows: &[usize], x: &XSet) -> Result<IntegralPoly> {
    let m = x.modulus();
    let p = m.p() % m.order();
    let pts: Vec<u64> = rows.iter().map(|&r| x.values()[r]).collect();
    match kind {
        GeneratorKind::A => Err(Error::Generator("A blocks have no D realization".into())),
        GeneratorKind::D1 { d } => {
            if rows.len() != d + 2 {
                return Err(Error::Generator(format!("D1(d={d}) needs {} rows", d + 2)));
            }
            let a = scalar::from_roots(m, &pts);
            let n = d + 1;
            let mut c = vec![MatPk::zeros(m, n, n); 3];
            if d == 0 {
                for (j, cj) in c.iter_mut().enumerate() {
                    cj.set(0, 0, m.mul(p, a[j]));
                }
            } else {
                c[0].set(0, 0, 1);
                c[1].set(0, d, m.mul(p, a[d + 1]));
                c[2].set(0, d, m.mul(p, a[d + 2]));
                for k in 1..d {
                    c[1].set(k, k - 1, m.neg(1));
                    c[0].set(k, k, 1);
                    c[1].set(k, d, m.mul(p, a[d + 1 - k]));
                }
                c[1].set(d, d - 1, m.neg(1));
                c[0].set(d, d, m.mul(p, a[0]));
                c[1].set(d, d, m.mul(p, a[1]));
            }
            IntegralPoly::new(m, n, c, Some(1))
        }
        GeneratorKind::D2 { d } => {
            if rows.len() != d {
                return Err(Error::Generator(format!("D2(d={d}) needs {d} rows")));
            }
            let n = d + 1;
            let mut c0 = MatPk::zeros(m, n, n);
            let mut c1 = MatPk::zeros(m, n, n);
            for (j, &xr) in pts.iter().enumerate() {
                c0.set(j, j, m.neg(xr));
                c1.set(j, j, 1);
                c0.set(j, d, p);
                c0.set(d, j, p);
            }
            IntegralPoly::new(m, n, vec![c0, c1], Some(1))
        }
    }
}

/// First integral whose values realize the block's columns mod p².
pub fn realize_generator(block: &GeneratorColumn, x: &XSet) -> Result<IntegralPoly> {
    match block.kind {
        GeneratorKind::A => {
            let pattern: Vec<Exponent> = block.columns[0].iter().map(|&s| Exponent::Finite(s)).collect();
            realize_rank1(&pattern, 1, x)
        }
        kind => realize_d_generator(kind, &block.rows, x),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::{cokernel_type, Modulus};

    fn classes(poly: &IntegralPoly, x: &XSet, i: usize) -> Vec<Symbol> {
        let n = poly.size();
        let mut exps: Vec<u32> =
            cokernel_type(&poly.eval(x.values()[i])).exps().iter().map(|&e| e.min(2)).collect();
        exps.resize(n, 0);
        exps.sort_unstable();
        exps
    }

    fn subsets(m: usize, size: usize) -> Vec<Vec<usize>> {
        (0u32..1 << m)
            .filter(|b| b.count_ones() as usize == size)
            .map(|b| (0..m).filter(|&i| b >> i & 1 == 1).collect())
            .collect()
    }

    #[test]
    fn d_blocks_have_their_classes_mod_p_squared() {
        for (p, m) in [(5u64, 4usize), (7, 5), (5, 3)] {
            let modulus = Modulus::new(p, 4).unwrap();
            let xs: Vec<i64> = (0..m as i64).collect();
            let x = XSet::new(modulus, &xs).unwrap();
            for d in 0..=m - 2 {
                for t in subsets(m, d + 2) {
                    let block = GeneratorColumn::d1(m, t.clone()).unwrap();
                    let poly = realize_generator(&block, &x).unwrap();
                    assert!(poly.satisfies_order(Some(1)));
                    for i in 0..m {
                        assert_eq!(classes(&poly, &x, i), block.row(i), "D1 {t:?} row {i}");
                    }
                }
            }
            for d in 0..=m {
                for r in subsets(m, d) {
                    let block = GeneratorColumn::d2(m, r.clone()).unwrap();
                    let poly = realize_generator(&block, &x).unwrap();
                    for i in 0..m {
                        assert_eq!(classes(&poly, &x, i), block.row(i), "D2 {r:?} row {i}");
                    }
                }
            }
        }
    }

    #[test]
    fn single_columns() {
        let modulus = Modulus::new(5, 3).unwrap();
        let x = XSet::new(modulus, &[0, 1, 2, 3]).unwrap();
        for col in [vec![0, 0, 0, 2], vec![1, 1, 2, 2], vec![2, 2, 2, 2], vec![0, 0, 0, 0]] {
            let block = GeneratorColumn::single(col.clone());
            let poly = realize_generator(&block, &x).unwrap();
            for (i, &c) in col.iter().enumerate() {
                assert_eq!(classes(&poly, &x, i), vec![c]);
            }
        }
        let bad = GeneratorColumn::single(vec![1, 2, 2, 2]);
        assert!(matches!(realize_generator(&bad, &x), Err(Error::Unclassifiable)));
    }
}

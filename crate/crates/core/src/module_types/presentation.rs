use std::fmt;

use crate::error::{Error, Result};
use crate::module_types::TupleSpec;
use crate::padic::{fmt_exponent, TruncatedModule};

/// m×n grid over {0, …, k−1, k⁺}; the symbol k stands for k⁺.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Presentation {
    k: u32,
    grid: Vec<Vec<u32>>,
}

impl Presentation {
    /// Rows are sorted ascending; all rows must share one length.
    pub fn from_grid(k: u32, grid: Vec<Vec<u32>>) -> Result<Self> {
        let n = grid.first().map_or(0, Vec::len);
        if grid.iter().any(|row| row.len() != n) {
            return Err(Error::Dimension("ragged presentation grid".into()));
        }
        if grid.iter().flatten().any(|&s| s > k) {
            return Err(Error::Dimension(format!("symbol above {k}+")));
        }
        let mut out = Self { k, grid };
        out.canonicalize();
        Ok(out)
    }

    fn canonicalize(&mut self) {
        for row in &mut self.grid {
            row.sort_unstable();
        }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn m(&self) -> usize {
        self.grid.len()
    }

    pub fn n(&self) -> usize {
        self.grid.first().map_or(0, Vec::len)
    }

    pub fn grid(&self) -> &[Vec<u32>] {
        &self.grid
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.grid[i]
    }

    /// Number of occurrences of `symbol` in row i.
    pub fn row_count(&self, i: usize, symbol: u32) -> usize {
        self.grid[i].iter().filter(|&&s| s == symbol).count()
    }

    /// H_i / p^k H_i as recorded by row i.
    pub fn row_module(&self, i: usize) -> TruncatedModule {
        TruncatedModule::new(self.k, self.grid[i].clone())
    }

    /// Column concatenation, re-sorted per row.
    pub fn concat(&self, other: &Self) -> Result<Self> {
        if self.k != other.k || self.m() != other.m() {
            return Err(Error::Dimension("presentations of different shape".into()));
        }
        let grid =
            self.grid.iter().zip(&other.grid).map(|(a, b)| a.iter().chain(b).copied().collect()).collect();
        Self::from_grid(self.k, grid)
    }
}

pub fn presentation(spec: &TupleSpec, k: u32) -> Result<Presentation> {
    let n = spec.n.ok_or_else(|| Error::Dimension("presentation needs n".into()))?;
    let grid = spec
        .targets
        .iter()
        .map(|h| {
            if h.s_rank() > n {
                return Err(Error::Dimension(format!("n={n} below s({h})")));
            }
            let mut row = vec![0; n - h.s_rank()];
            row.extend(h.parts().into_iter().map(|e| e.capped(k)));
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    Presentation::from_grid(k, grid)
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.grid {
            let cells: Vec<String> = row.iter().map(|&s| fmt_exponent(s, self.k)).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module_types::ModuleType;

    fn spec(n: usize, targets: &[&str]) -> TupleSpec {
        let x = (0..targets.len() as i64).collect();
        let targets = targets.iter().map(|s| s.parse::<ModuleType>().unwrap()).collect();
        TupleSpec::new(5, x, targets, Some(n)).unwrap()
    }

    #[test]
    fn three_presentation_rows() {
        let s = spec(9, &["1,1,1,2,2,2,2", "1,1,1,1,3,3", "inf,inf,inf,inf"]);
        let pres = presentation(&s, 3).unwrap();
        assert_eq!(pres.row(0), &[0, 0, 1, 1, 1, 2, 2, 2, 2]);
        assert_eq!(pres.row(1), &[0, 0, 0, 1, 1, 1, 1, 3, 3]);
        assert_eq!(pres.row(2), &[0, 0, 0, 0, 0, 3, 3, 3, 3]);
        assert_eq!(pres.to_string().lines().nth(2).unwrap(), "0 0 0 0 0 3+ 3+ 3+ 3+");
    }

    #[test]
    fn trivial_and_sum() {
        let pres = presentation(&spec(2, &["0", "0"]), 2).unwrap();
        assert!(pres.grid().iter().flatten().all(|&s| s == 0));
        let a = spec(2, &["1", "2,inf"]);
        let b = spec(3, &["3,1,1", "0"]);
        let lhs = presentation(&a.sum(&b).unwrap(), 2).unwrap();
        let rhs = presentation(&a, 2).unwrap().concat(&presentation(&b, 2).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
        assert!(presentation(&spec(1, &["1", "0"]).sum(&spec(0, &["0", "0"])).unwrap(), 2).is_ok());
        assert!(TupleSpec::new(5, vec![0], vec!["1,1".parse().unwrap()], Some(1)).is_err());
    }
}

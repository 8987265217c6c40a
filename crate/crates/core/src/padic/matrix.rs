use std::fmt;

use crate::error::{Error, Result};
use crate::padic::zpk::Modulus;

/// Dense matrix over Z/p^K, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MatPk {
    modulus: Modulus,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl MatPk {
    pub fn zeros(modulus: Modulus, rows: usize, cols: usize) -> Self {
        Self { modulus, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(modulus: Modulus, n: usize) -> Self {
        Self::scalar(modulus, n, 1)
    }

    pub fn scalar(modulus: Modulus, n: usize, c: u64) -> Self {
        let mut m = Self::zeros(modulus, n, n);
        let c = c % modulus.order();
        for i in 0..n {
            m.data[i * n + i] = c;
        }
        m
    }

    pub fn diagonal(modulus: Modulus, diag: &[i64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(modulus, n, n);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = modulus.reduce(d);
        }
        m
    }

    /// Builds from signed integer rows; entries are reduced mod p^K.
    pub fn from_rows(modulus: Modulus, rows: &[Vec<i64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        let data = rows.iter().flatten().map(|&x| modulus.reduce(x)).collect();
        Ok(Self { modulus, rows: r, cols: c, data })
    }

    pub fn from_residues(modulus: Modulus, rows: usize, cols: usize, data: Vec<u64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!("{} entries for {rows}x{cols}", data.len())));
        }
        let q = modulus.order();
        Ok(Self { modulus, rows, cols, data: data.into_iter().map(|x| x % q).collect() })
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn residues(&self) -> &[u64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v % self.modulus.order();
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch);
        }
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let m = self.modulus;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| m.add(a, b)).collect();
        Ok(Self { data, ..*self })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let m = self.modulus;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| m.sub(a, b)).collect();
        Ok(Self { data, ..*self })
    }

    pub fn scale(&self, c: u64) -> Self {
        let m = self.modulus;
        let c = c % m.order();
        Self { data: self.data.iter().map(|&a| m.mul(a, c)).collect(), ..*self }
    }

    pub fn neg(&self) -> Self {
        let m = self.modulus;
        Self { data: self.data.iter().map(|&a| m.neg(a)).collect(), ..*self }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch);
        }
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let q = self.modulus.order();
        let mut out = vec![0u64; self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == 0 {
                    continue;
                }
                let row = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d = (*d + a * b) % q;
                }
            }
        }
        Ok(Self { modulus: self.modulus, rows: self.rows, cols: other.cols, data: out })
    }

    /// self + c·I.
    pub fn add_scalar(&self, c: u64) -> Self {
        let mut out = self.clone();
        let m = self.modulus;
        for i in 0..self.rows.min(self.cols) {
            let idx = i * self.cols + i;
            out.data[idx] = m.add(out.data[idx], c % m.order());
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.modulus, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.get(i, j);
            }
        }
        out
    }

    /// Submatrix picking the given rows and columns, in order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut out = Self::zeros(self.modulus, rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out.data[a * cols.len() + b] = self.get(i, j);
            }
        }
        out
    }

    /// Writes `block` with its top-left corner at (r0, c0).
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Self) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.data[(r0 + i) * self.cols + c0 + j] = block.get(i, j);
            }
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch);
        }
        let mut out = Self::zeros(self.modulus, self.rows + other.rows, self.cols + other.cols);
        out.set_block(0, 0, self);
        out.set_block(self.rows, self.cols, other);
        Ok(out)
    }

    /// Reinterprets the residues modulo p^k for k ≤ K.
    pub fn reduce_to(&self, modulus: Modulus) -> Result<Self> {
        if modulus.p() != self.modulus.p() || modulus.precision() > self.modulus.precision() {
            return Err(Error::ModulusMismatch);
        }
        let q = modulus.order();
        Ok(Self { modulus, data: self.data.iter().map(|&x| x % q).collect(), ..*self })
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += c · row[src]
    pub(crate) fn add_row_multiple(&mut self, dst: usize, src: usize, c: u64) {
        if c == 0 {
            return;
        }
        let m = self.modulus;
        for j in 0..self.cols {
            let v = m.mul(self.data[src * self.cols + j], c);
            let d = &mut self.data[dst * self.cols + j];
            *d = m.add(*d, v);
        }
    }

    /// col[dst] += c · col[src]
    pub(crate) fn add_col_multiple(&mut self, dst: usize, src: usize, c: u64) {
        if c == 0 {
            return;
        }
        let m = self.modulus;
        for i in 0..self.rows {
            let v = m.mul(self.data[i * self.cols + src], c);
            let d = &mut self.data[i * self.cols + dst];
            *d = m.add(*d, v);
        }
    }

    pub(crate) fn scale_row(&mut self, i: usize, c: u64) {
        let m = self.modulus;
        for j in 0..self.cols {
            let d = &mut self.data[i * self.cols + j];
            *d = m.mul(*d, c);
        }
    }

    pub(crate) fn scale_col(&mut self, j: usize, c: u64) {
        let m = self.modulus;
        for i in 0..self.rows {
            let d = &mut self.data[i * self.cols + j];
            *d = m.mul(*d, c);
        }
    }
}

pub fn direct_sum(a: &MatPk, b: &MatPk) -> Result<MatPk> {
    a.direct_sum(b)
}

/// Writes the plain-text matrix format: a header line followed by the rows.
impl fmt::Display for MatPk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "p={} K={} rows={} cols={}",
            self.modulus.p(),
            self.modulus.precision(),
            self.rows,
            self.cols
        )?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Parses the plain-text matrix format. Blank lines and `#` comments are skipped.
pub fn parse_matrix(text: &str) -> Result<MatPk> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines.next().ok_or_else(|| Error::parse(1, "missing header"))?;
    let mut p = None;
    let mut k = None;
    let mut rows = None;
    let mut cols = None;
    for field in header.split_whitespace() {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| Error::parse(hline, format!("expected key=value, got `{field}`")))?;
        let value: u64 =
            value.parse().map_err(|_| Error::parse(hline, format!("bad number in `{field}`")))?;
        match key {
            "p" => p = Some(value),
            "K" => k = Some(value),
            "rows" => rows = Some(value),
            "cols" => cols = Some(value),
            other => return Err(Error::parse(hline, format!("unknown header key `{other}`"))),
        }
    }
    let missing = |name: &str| Error::parse(hline, format!("header lacks `{name}`"));
    let p = p.ok_or_else(|| missing("p"))?;
    let k = k.ok_or_else(|| missing("K"))?;
    let rows = rows.ok_or_else(|| missing("rows"))? as usize;
    let cols = cols.ok_or_else(|| missing("cols"))? as usize;
    let modulus = Modulus::new(p, k as u32).map_err(|e| Error::parse(hline, e.to_string()))?;
    let mut data = Vec::with_capacity(rows * cols);
    let mut seen = 0;
    for (lineno, line) in lines {
        if seen == rows {
            return Err(Error::parse(lineno, "more rows than declared"));
        }
        let before = data.len();
        for tok in line.split_whitespace() {
            let v: u64 = tok.parse().map_err(|_| Error::parse(lineno, format!("bad residue `{tok}`")))?;
            if v >= modulus.order() {
                return Err(Error::parse(lineno, format!("residue {v} not below p^K")));
            }
            data.push(v);
        }
        if data.len() - before != cols {
            return Err(Error::parse(
                lineno,
                format!("expected {cols} entries, found {}", data.len() - before),
            ));
        }
        seen += 1;
    }
    if seen != rows {
        return Err(Error::parse(hline, format!("declared {rows} rows, found {seen}")));
    }
    MatPk::from_residues(modulus, rows, cols, data)
}

use crate::error::{Error, Result};
use crate::padic::matrix::MatPk;
use crate::padic::zpk::{Modulus, Zpk};

/// Matrix polynomial A_0 + t·A_1 + ... over Z/p^K whose t^j coefficient is
/// divisible by p^{j-l} for j > l, where l is the integral order.
/// `order == None` places no divisibility constraint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralPoly {
    modulus: Modulus,
    size: usize,
    coeffs: Vec<MatPk>,
    order: Option<u32>,
}

fn profile_violation(modulus: Modulus, coeffs: &[MatPk], order: Option<u32>) -> Option<usize> {
    let l = order?;
    let k = modulus.precision();
    coeffs.iter().enumerate().skip(l as usize + 1).find_map(|(j, c)| {
        let need = (j as u32 - l).min(k);
        let ok = c.residues().iter().all(|&x| modulus.valuation(x) >= need);
        (!ok).then_some(j)
    })
}

impl IntegralPoly {
    pub fn new(modulus: Modulus, size: usize, coeffs: Vec<MatPk>, order: Option<u32>) -> Result<Self> {
        for c in &coeffs {
            if c.modulus() != modulus {
                return Err(Error::ModulusMismatch);
            }
            if c.rows() != size || c.cols() != size {
                return Err(Error::Dimension(format!(
                    "coefficient is {}x{}, expected {size}x{size}",
                    c.rows(),
                    c.cols()
                )));
            }
        }
        if let Some(j) = profile_violation(modulus, &coeffs, order) {
            return Err(Error::NotIntegral { degree: j, order: order.unwrap_or(0) });
        }
        Ok(Self { modulus, size, coeffs, order })
    }

    /// Internal constructor for results whose profile holds by construction.
    pub(crate) fn from_parts(modulus: Modulus, size: usize, coeffs: Vec<MatPk>, order: Option<u32>) -> Self {
        debug_assert!(profile_violation(modulus, &coeffs, order).is_none());
        Self { modulus, size, coeffs, order }
    }

    pub fn zero(modulus: Modulus, size: usize, order: Option<u32>) -> Self {
        Self { modulus, size, coeffs: Vec::new(), order }
    }

    pub fn constant(a: MatPk, order: Option<u32>) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::Dimension("constant term must be square".into()));
        }
        Ok(Self { modulus: a.modulus(), size: a.rows(), coeffs: vec![a], order })
    }

    /// Scalar polynomial (1×1) from signed coefficients, lowest degree first.
    pub fn scalar(modulus: Modulus, coeffs: &[i64], order: Option<u32>) -> Result<Self> {
        let cs = coeffs.iter().map(|&c| MatPk::scalar(modulus, 1, modulus.reduce(c))).collect();
        Self::new(modulus, 1, cs, order)
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn coeffs(&self) -> &[MatPk] {
        &self.coeffs
    }

    pub fn order(&self) -> Option<u32> {
        self.order
    }

    /// Index of the last stored coefficient (0 for the empty polynomial).
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, j: usize) -> MatPk {
        self.coeffs.get(j).cloned().unwrap_or_else(|| MatPk::zeros(self.modulus, self.size, self.size))
    }

    /// Horner evaluation at a residue.
    pub fn eval(&self, x: u64) -> MatPk {
        let m = self.modulus;
        let mut acc = MatPk::zeros(m, self.size, self.size);
        for c in self.coeffs.iter().rev() {
            acc = acc.scale(x).add(c).expect("shared shape");
        }
        acc
    }

    pub fn satisfies_order(&self, l: Option<u32>) -> bool {
        profile_violation(self.modulus, &self.coeffs, l).is_none()
    }

    pub fn with_order(self, order: Option<u32>) -> Result<Self> {
        Self::new(self.modulus, self.size, self.coeffs, order)
    }

    /// Drops trailing zero coefficients.
    pub fn trimmed(mut self) -> Self {
        while self.coeffs.last().is_some_and(MatPk::is_zero) {
            self.coeffs.pop();
        }
        self
    }

    pub fn scale(&self, c: u64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|a| a.scale(c)).collect(), ..self.clone() }
    }

    /// Coefficient-wise sum; the order of the result is the weaker of the two.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch);
        }
        if self.size != other.size {
            return Err(Error::Dimension("polynomial sizes differ".into()));
        }
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len).map(|j| self.coeff(j).add(&other.coeff(j))).collect::<Result<Vec<_>>>()?;
        let order = match (self.order, other.order) {
            (Some(a), Some(b)) => Some(a.max(b)),
            _ => None,
        };
        Ok(Self { coeffs, order, ..self.clone() })
    }

    /// Product of matrix polynomials, with the given order asserted for the result.
    pub fn mul(&self, other: &Self, order: Option<u32>) -> Result<Self> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch);
        }
        let m = self.modulus;
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Ok(Self::zero(m, self.size, order));
        }
        let len = self.coeffs.len() + other.coeffs.len() - 1;
        let mut coeffs = vec![MatPk::zeros(m, self.size, other.size); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b)?)?;
            }
        }
        Self::new(m, self.size, coeffs, order)
    }

    /// f(t)·P(t) for a scalar polynomial f.
    pub fn mul_scalar_poly(&self, f: &[u64]) -> Self {
        let m = self.modulus;
        if self.coeffs.is_empty() || f.is_empty() {
            return Self::zero(m, self.size, self.order);
        }
        let len = self.coeffs.len() + f.len() - 1;
        let mut coeffs = vec![MatPk::zeros(m, self.size, self.size); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, &c) in f.iter().enumerate() {
                if c != 0 {
                    coeffs[i + j] = coeffs[i + j].add(&a.scale(c)).expect("shared shape");
                }
            }
        }
        Self { coeffs, ..self.clone() }
    }

    /// Block-diagonal sum of two polynomials of the same order.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch);
        }
        if self.order != other.order {
            return Err(Error::OrderMismatch);
        }
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs =
            (0..len).map(|j| self.coeff(j).direct_sum(&other.coeff(j))).collect::<Result<Vec<_>>>()?;
        Ok(Self { modulus: self.modulus, size: self.size + other.size, coeffs, order: self.order })
    }
}

pub fn poly_eval(poly: &IntegralPoly, x: Zpk) -> Result<MatPk> {
    if poly.modulus() != x.modulus() {
        return Err(Error::ModulusMismatch);
    }
    Ok(poly.eval(x.residue()))
}

pub fn validate_integral(poly: &IntegralPoly, l: Option<u32>) -> bool {
    poly.satisfies_order(l)
}

pub fn poly_direct_sum(a: &IntegralPoly, b: &IntegralPoly) -> Result<IntegralPoly> {
    a.direct_sum(b)
}

/// Scalar polynomial helpers over Z/p^K, coefficients lowest degree first.
pub mod scalar {
    use crate::padic::zpk::Modulus;

    pub fn mul(m: Modulus, a: &[u64], b: &[u64]) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = m.add(out[i + j], m.mul(x, y));
            }
        }
        out
    }

    pub fn add(m: Modulus, a: &[u64], b: &[u64]) -> Vec<u64> {
        (0..a.len().max(b.len()))
            .map(|i| m.add(a.get(i).copied().unwrap_or(0), b.get(i).copied().unwrap_or(0)))
            .collect()
    }

    pub fn scale(m: Modulus, a: &[u64], c: u64) -> Vec<u64> {
        a.iter().map(|&x| m.mul(x, c)).collect()
    }

    pub fn eval(m: Modulus, a: &[u64], x: u64) -> u64 {
        a.iter().rev().fold(0, |acc, &c| m.add(m.mul(acc, x), c))
    }

    /// ∏ (t − r) over the given roots.
    pub fn from_roots(m: Modulus, roots: &[u64]) -> Vec<u64> {
        roots.iter().fold(vec![1], |acc, &r| mul(m, &acc, &[m.neg(r), 1]))
    }

    /// Lagrange basis polynomial equal to 1 at points[i] and 0 at the other points.
    /// The points must be pairwise distinct mod p.
    pub fn lagrange(m: Modulus, points: &[u64], i: usize) -> Vec<u64> {
        let others: Vec<u64> = points.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &x)| x).collect();
        let num = from_roots(m, &others);
        let denom = others.iter().fold(1, |acc, &x| m.mul(acc, m.sub(points[i], x)));
        let inv = m.inverse(denom).expect("points distinct mod p");
        scale(m, &num, inv)
    }
}

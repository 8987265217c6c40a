use std::fmt;

use crate::error::{Error, Result};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// The ring Z/p^K. Residues are kept below 2^32 so products fit in a u64.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Modulus {
    p: u64,
    k: u32,
    q: u64,
}

impl Modulus {
    pub fn new(p: u64, k: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let q =
            p.checked_pow(k).filter(|&q| k >= 1 && q <= u32::MAX as u64).ok_or(Error::Precision { p, k })?;
        Ok(Self { p, k, q })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// The precision exponent K.
    pub fn precision(&self) -> u32 {
        self.k
    }

    /// p^K.
    pub fn order(&self) -> u64 {
        self.q
    }

    pub fn with_precision(&self, k: u32) -> Result<Self> {
        Self::new(self.p, k)
    }

    pub fn reduce(&self, x: i64) -> u64 {
        x.rem_euclid(self.q as i64) as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.q - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.q
    }

    /// p^e reduced mod p^K; zero once e ≥ K.
    pub fn p_pow(&self, e: u32) -> u64 {
        if e >= self.k {
            0
        } else {
            self.p.pow(e)
        }
    }

    /// Valuation of a residue, with K standing for "divisible by p^K".
    #[inline]
    pub fn valuation(&self, mut a: u64) -> u32 {
        if a == 0 {
            return self.k;
        }
        let mut v = 0;
        while a.is_multiple_of(self.p) {
            a /= self.p;
            v += 1;
        }
        v
    }

    pub fn is_unit(&self, a: u64) -> bool {
        !a.is_multiple_of(self.p)
    }

    pub fn inverse(&self, a: u64) -> Option<u64> {
        if !self.is_unit(a) {
            return None;
        }
        let (mut r0, mut r1) = (self.q as i64, a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let quot = r0 / r1;
            (r0, r1) = (r1, r0 - quot * r1);
            (t0, t1) = (t1, t0 - quot * t1);
        }
        Some(self.reduce(t0))
    }

    pub fn zpk(&self, x: i64) -> Zpk {
        Zpk { modulus: *self, residue: self.reduce(x) }
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={} K={}", self.p, self.k)
    }
}

/// An element of Z/p^K.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Zpk {
    modulus: Modulus,
    residue: u64,
}

impl Zpk {
    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    pub fn valuation(&self) -> u32 {
        self.modulus.valuation(self.residue)
    }
}

impl fmt::Display for Zpk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.residue)
    }
}

/// Renders an exponent, marking the saturated value as `K+`.
pub fn fmt_exponent(e: u32, k: u32) -> String {
    if e >= k {
        format!("{k}+")
    } else {
        e.to_string()
    }
}

/// Shift points x_1..x_m with pairwise distinct reductions mod p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XSet {
    modulus: Modulus,
    values: Vec<u64>,
}

impl XSet {
    pub fn new(modulus: Modulus, values: &[i64]) -> Result<Self> {
        let values: Vec<u64> = values.iter().map(|&x| modulus.reduce(x)).collect();
        let mut seen = vec![false; modulus.p() as usize];
        for &x in &values {
            let r = (x % modulus.p()) as usize;
            if seen[r] {
                return Err(Error::ShiftSet(format!(
                    "residue {r} repeats (m must not exceed p={})",
                    modulus.p()
                )));
            }
            seen[r] = true;
        }
        Ok(Self { modulus, values })
    }

    /// The first `m` residues 0, 1, ..., m-1.
    pub fn standard(modulus: Modulus, m: usize) -> Result<Self> {
        let values: Vec<i64> = (0..m as i64).collect();
        Self::new(modulus, &values)
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_normalized(&self) -> bool {
        self.values.first().is_none_or(|&x| x == 0)
    }

    /// X - x0.
    pub fn translate(&self, x0: u64) -> Self {
        let m = self.modulus;
        Self { modulus: m, values: self.values.iter().map(|&x| m.sub(x, x0)).collect() }
    }

    pub fn with_modulus(&self, modulus: Modulus) -> Result<Self> {
        let values: Vec<i64> = self.values.iter().map(|&x| x as i64).collect();
        Self::new(modulus, &values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_valuation() {
        let m = Modulus::new(5, 3).unwrap();
        for a in 0..125u64 {
            match m.inverse(a) {
                Some(b) => assert_eq!(m.mul(a, b), 1),
                None => assert_eq!(a % 5, 0),
            }
        }
        assert_eq!(m.valuation(0), 3);
        assert_eq!(m.valuation(50), 2);
        assert_eq!(m.valuation(7), 0);
    }

    #[test]
    fn rejects_bad_modulus() {
        assert_eq!(Modulus::new(4, 2), Err(Error::NotPrime(4)));
        assert!(Modulus::new(3, 0).is_err());
        assert!(Modulus::new(7, 40).is_err());
    }

    #[test]
    fn xset_needs_distinct_residues() {
        let m = Modulus::new(3, 2).unwrap();
        assert!(XSet::new(m, &[0, 1, 2]).is_ok());
        assert!(XSet::new(m, &[0, 3]).is_err());
        assert!(XSet::standard(m, 4).is_err());
        let x = XSet::new(m, &[4, 2]).unwrap().translate(4);
        assert_eq!(x.values(), &[0, 7]);
        assert!(x.is_normalized());
    }
}

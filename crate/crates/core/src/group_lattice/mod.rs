//! Element-level finite abelian p-groups: subgroup lattices, moment sets and brute-force counts.

mod moments;
mod stats;

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::module_types::ModuleType;

pub use moments::count_s;
pub use stats::{brute_group_stats, GroupStats};

/// Largest group order accepted for element-level enumeration.
pub const ORDER_CAP: u64 = 1 << 14;

/// ⊕_i Z/p^{λ_i} with elements indexed in mixed radix (first part least significant).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinAbGroup {
    p: u64,
    parts: Vec<u32>,
    radices: Vec<u64>,
    order: usize,
}

impl FinAbGroup {
    /// Parts kept in the given order; blocks of a product stay contiguous.
    pub fn with_parts(p: u64, parts: &[u32]) -> Result<Self> {
        let parts: Vec<u32> = parts.iter().copied().filter(|&r| r > 0).collect();
        let log: u32 = parts.iter().sum();
        let order = p
            .checked_pow(log)
            .filter(|&o| o <= ORDER_CAP)
            .ok_or(Error::GroupCap(p.checked_pow(log).unwrap_or(u64::MAX)))?;
        let radices = parts.iter().map(|&r| p.pow(r)).collect();
        Ok(Self { p, parts, radices, order: order as usize })
    }

    /// Group of the given finite type, parts descending.
    pub fn of_type(p: u64, h: &ModuleType) -> Result<Self> {
        if !h.is_finite() {
            return Err(Error::FreePart(h.to_string()));
        }
        let mut parts = h.finite_parts();
        parts.reverse();
        Self::with_parts(p, &parts)
    }

    pub fn product(groups: &[FinAbGroup]) -> Result<Self> {
        let p = groups.first().map_or(2, |g| g.p);
        let parts: Vec<u32> = groups.iter().flat_map(|g| g.parts.iter().copied()).collect();
        Self::with_parts(p, &parts)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn decode(&self, mut a: usize) -> Vec<u64> {
        self.radices
            .iter()
            .map(|&q| {
                let d = a as u64 % q;
                a /= q as usize;
                d
            })
            .collect()
    }

    pub fn encode(&self, digits: &[u64]) -> usize {
        self.radices
            .iter()
            .zip(digits)
            .rev()
            .fold(0usize, |acc, (&q, &d)| acc * q as usize + (d % q) as usize)
    }

    pub fn add(&self, mut a: usize, mut b: usize) -> usize {
        let mut out = 0usize;
        let mut place = 1usize;
        for &q in &self.radices {
            let q = q as usize;
            out += (a % q + b % q) % q * place;
            a /= q;
            b /= q;
            place *= q;
        }
        out
    }

    pub fn scale(&self, c: u64, mut a: usize) -> usize {
        let mut out = 0usize;
        let mut place = 1usize;
        for &q in &self.radices {
            out += ((a as u64 % q) * (c % q) % q) as usize * place;
            a /= q as usize;
            place *= q as usize;
        }
        out
    }

    /// Additive order as a power of p.
    pub fn element_order(&self, a: usize) -> u64 {
        let mut ord = 1;
        let mut x = a;
        while x != 0 {
            x = self.scale(self.p, x);
            ord *= self.p;
        }
        ord
    }
}

/// Subgroup stored as its membership bitset, which is its canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgroup {
    bits: Vec<u64>,
    order: usize,
}

impl Subgroup {
    pub fn trivial(g: &FinAbGroup) -> Self {
        let mut bits = vec![0u64; g.order().div_ceil(64)];
        bits[0] = 1;
        Self { bits, order: 1 }
    }

    pub fn contains(&self, a: usize) -> bool {
        self.bits[a / 64] >> (a % 64) & 1 == 1
    }

    fn insert(&mut self, a: usize) {
        if !self.contains(a) {
            self.bits[a / 64] |= 1 << (a % 64);
            self.order += 1;
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Members in increasing index order.
    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits
            .iter()
            .enumerate()
            .flat_map(|(w, &word)| (0..64).filter(move |b| word >> b & 1 == 1).map(move |b| w * 64 + b))
    }

    /// ⟨self, h⟩ as the union of cosets self + j·h for j below the order of h modulo self.
    pub fn extend(&self, g: &FinAbGroup, h: usize) -> Self {
        let base: Vec<usize> = self.members().collect();
        let mut out = self.clone();
        let mut shift = h;
        while !self.contains(shift) {
            for &s in &base {
                out.insert(g.add(s, shift));
            }
            shift = g.add(shift, h);
        }
        out
    }
}

/// Every subgroup exactly once, grown through index-p extensions from the trivial group.
pub fn enumerate_subgroups(g: &FinAbGroup) -> Vec<Subgroup> {
    let mut all = vec![Subgroup::trivial(g)];
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    seen.insert(all[0].bits.clone());
    let mut level = all.clone();
    while !level.is_empty() {
        let mut next = Vec::new();
        for h in &level {
            let mut covered = h.clone();
            for x in 0..g.order() {
                if covered.contains(x) || !h.contains(g.scale(g.p(), x)) {
                    continue;
                }
                let k = h.extend(g, x);
                for y in k.members() {
                    covered.insert(y);
                }
                if seen.insert(k.bits.clone()) {
                    next.push(k);
                }
            }
        }
        all.extend(next.iter().cloned());
        level = next;
    }
    all
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(p: u64, s: &str) -> FinAbGroup {
        FinAbGroup::of_type(p, &s.parse().unwrap()).unwrap()
    }

    #[test]
    fn arithmetic() {
        let g = group(3, "1,2");
        assert_eq!(g.order(), 27);
        let a = g.encode(&[5, 2]);
        assert_eq!(g.decode(a), vec![5, 2]);
        assert_eq!(g.decode(g.add(a, a)), vec![1, 1]);
        assert_eq!(g.element_order(a), 9);
        assert_eq!(g.decode(g.scale(4, a)), vec![2, 2]);
    }

    #[test]
    fn subgroup_counts() {
        assert_eq!(enumerate_subgroups(&group(2, "1")).len(), 2);
        assert_eq!(enumerate_subgroups(&group(2, "1,1")).len(), 5);
        assert_eq!(enumerate_subgroups(&group(2, "2")).len(), 3);
        // Gaussian binomials at q = 2, n = 3: 1 + 7 + 7 + 1.
        assert_eq!(enumerate_subgroups(&group(2, "1,1,1")).len(), 16);
        // Z/2 × Z/4 has 8 subgroups.
        assert_eq!(enumerate_subgroups(&group(2, "1,2")).len(), 8);
        assert_eq!(enumerate_subgroups(&group(3, "0")).len(), 1);
    }

    #[test]
    fn cap_enforced() {
        assert!(matches!(FinAbGroup::with_parts(2, &[15]), Err(Error::GroupCap(_))));
        assert!(FinAbGroup::with_parts(2, &[14]).is_ok());
    }
}

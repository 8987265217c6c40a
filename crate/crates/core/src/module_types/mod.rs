//! Finitely generated Z_p-module types, presentations and counting formulas.

mod counting;
mod formula;
mod presentation;
mod tuple;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::padic::TruncatedModule;

pub use counting::{aut_order, count_hom, count_sur};
pub use formula::{c_infinity, c_partial, formula_probability, FormulaKind};
pub use presentation::{presentation, Presentation};
pub use tuple::TupleSpec;

/// Exponent of a cyclic summand Z/p^r, or the free summand Z_p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Exponent {
    Finite(u32),
    Infinite,
}

impl Exponent {
    pub fn finite(self) -> Option<u32> {
        match self {
            Exponent::Finite(r) => Some(r),
            Exponent::Infinite => None,
        }
    }

    /// Value at precision k, with k standing for "k or more".
    pub fn capped(self, k: u32) -> u32 {
        match self {
            Exponent::Finite(r) => r.min(k),
            Exponent::Infinite => k,
        }
    }

    pub fn is_at_least(self, r: u32) -> bool {
        match self {
            Exponent::Finite(e) => e >= r,
            Exponent::Infinite => true,
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(r) => write!(f, "{r}"),
            Exponent::Infinite => write!(f, "inf"),
        }
    }
}

impl FromStr for Exponent {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim() {
            "inf" | "∞" => Ok(Exponent::Infinite),
            t => t.parse().map(Exponent::Finite).map_err(|_| format!("bad exponent `{t}`")),
        }
    }
}

/// ∏_r (Z/p^r)^{d_r} × Z_p^{d_∞}.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModuleType {
    finite: BTreeMap<u32, usize>,
    free: usize,
}

impl ModuleType {
    pub fn trivial() -> Self {
        Self::default()
    }

    /// Parts of exponent 0 are ignored.
    pub fn new(finite: &[u32], free: usize) -> Self {
        let mut out = Self { finite: BTreeMap::new(), free };
        for &r in finite {
            if r > 0 {
                *out.finite.entry(r).or_default() += 1;
            }
        }
        out
    }

    pub fn cyclic(r: u32) -> Self {
        Self::new(&[r], 0)
    }

    pub fn from_exponents<I: IntoIterator<Item = Exponent>>(parts: I) -> Self {
        let mut out = Self::trivial();
        for e in parts {
            match e {
                Exponent::Finite(0) => {}
                Exponent::Finite(r) => *out.finite.entry(r).or_default() += 1,
                Exponent::Infinite => out.free += 1,
            }
        }
        out
    }

    /// d_r for finite r ≥ 1.
    pub fn count(&self, r: u32) -> usize {
        self.finite.get(&r).copied().unwrap_or(0)
    }

    pub fn free_count(&self) -> usize {
        self.free
    }

    pub fn s_rank(&self) -> usize {
        self.finite.values().sum::<usize>() + self.free
    }

    pub fn is_finite(&self) -> bool {
        self.free == 0
    }

    pub fn is_trivial(&self) -> bool {
        self.s_rank() == 0
    }

    /// Finite exponents in ascending order, with multiplicity.
    pub fn finite_parts(&self) -> Vec<u32> {
        self.finite.iter().flat_map(|(&r, &c)| std::iter::repeat_n(r, c)).collect()
    }

    /// All parts ascending, free parts last.
    pub fn parts(&self) -> Vec<Exponent> {
        let mut out: Vec<Exponent> = self.finite_parts().into_iter().map(Exponent::Finite).collect();
        out.extend(std::iter::repeat_n(Exponent::Infinite, self.free));
        out
    }

    pub fn max_finite_exponent(&self) -> u32 {
        self.finite.keys().next_back().copied().unwrap_or(0)
    }

    /// log_p of the order; None when free parts are present.
    pub fn log_order(&self) -> Option<u32> {
        self.is_finite().then(|| self.finite.iter().map(|(&r, &c)| r * c as u32).sum())
    }

    pub fn truncate(&self, k: u32) -> TruncatedModule {
        TruncatedModule::new(k, self.parts().into_iter().map(|e| e.capped(k)).collect())
    }

    /// pH: exponents drop by one, cyclic parts of order p vanish.
    pub fn shift_down(&self) -> Self {
        let mut out = Self { finite: BTreeMap::new(), free: self.free };
        for (&r, &c) in &self.finite {
            if r > 1 {
                out.finite.insert(r - 1, c);
            }
        }
        out
    }

    /// Section of [`shift_down`](Self::shift_down) adding `ones` parts of exponent 1.
    pub fn shift_up(&self, ones: usize) -> Self {
        let mut out = Self { finite: BTreeMap::new(), free: self.free };
        for (&r, &c) in &self.finite {
            out.finite.insert(r + 1, c);
        }
        if ones > 0 {
            out.finite.insert(1, ones);
        }
        out
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&r, &c) in &other.finite {
            *out.finite.entry(r).or_default() += c;
        }
        out.free += other.free;
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShiftDirection {
    Down,
    /// Inverse direction, adding this many new parts of exponent 1.
    Up(usize),
}

pub fn p_shift(h: &ModuleType, direction: ShiftDirection) -> ModuleType {
    match direction {
        ShiftDirection::Down => h.shift_down(),
        ShiftDirection::Up(ones) => h.shift_up(ones),
    }
}

pub fn truncate(h: &ModuleType, k: u32) -> TruncatedModule {
    h.truncate(k)
}

pub fn s_rank(h: &ModuleType) -> usize {
    h.s_rank()
}

impl fmt::Display for ModuleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.parts().iter().map(Exponent::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for ModuleType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Self::trivial());
        }
        let parts = s
            .split(',')
            .map(|t| t.parse::<Exponent>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|m| Error::parse(1, m))?;
        Ok(Self::from_exponents(parts))
    }
}

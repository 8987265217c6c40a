use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::module_types::ModuleType;
use crate::padic::{is_prime, Modulus, XSet};

/// A target tuple (H_1, ..., H_m) at shift points x_1, ..., x_m, optionally with an ambient size n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TupleSpec {
    pub p: u64,
    pub x: Vec<i64>,
    pub targets: Vec<ModuleType>,
    pub n: Option<usize>,
}

impl TupleSpec {
    pub fn new(p: u64, x: Vec<i64>, targets: Vec<ModuleType>, n: Option<usize>) -> Result<Self> {
        let spec = Self { p, x, targets, n };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        if !is_prime(self.p) {
            return Err(Error::NotPrime(self.p));
        }
        if self.x.len() != self.targets.len() {
            return Err(Error::Dimension(format!(
                "{} shift points but {} targets",
                self.x.len(),
                self.targets.len()
            )));
        }
        let mut residues: Vec<i64> = self.x.iter().map(|x| x.rem_euclid(self.p as i64)).collect();
        residues.sort_unstable();
        if residues.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::ShiftSet(format!("{:?} mod {}", self.x, self.p)));
        }
        if let Some(n) = self.n {
            if let Some(h) = self.targets.iter().find(|h| h.s_rank() > n) {
                return Err(Error::Dimension(format!("n={n} below s({h})")));
            }
        }
        Ok(())
    }

    pub fn m(&self) -> usize {
        self.targets.len()
    }

    pub fn xset(&self, k: u32) -> Result<XSet> {
        XSet::new(Modulus::new(self.p, k)?, &self.x)
    }

    /// Largest finite exponent among the targets (0 if none).
    pub fn max_exponent(&self) -> u32 {
        self.targets.iter().map(ModuleType::max_finite_exponent).max().unwrap_or(0)
    }

    /// Componentwise direct sum with ambient sizes added.
    pub fn sum(&self, other: &Self) -> Result<Self> {
        if self.p != other.p || self.x != other.x {
            return Err(Error::Dimension("tuples live at different shift points".into()));
        }
        let targets = self.targets.iter().zip(&other.targets).map(|(a, b)| a.direct_sum(b)).collect();
        let n = match (self.n, other.n) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
        Ok(Self { p: self.p, x: self.x.clone(), targets, n })
    }
}

impl FromStr for TupleSpec {
    type Err = Error;

    /// Lines `p=…`, `x=…,…`, `H1=…`, …, optional `n=…`; `#` starts a comment.
    fn from_str(text: &str) -> Result<Self> {
        let mut p = None;
        let mut x: Option<(usize, Vec<i64>)> = None;
        let mut n = None;
        let mut targets: Vec<(usize, usize, ModuleType)> = Vec::new();
        let mut last_line = 0;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            last_line = line;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let (key, value) = body
                .split_once('=')
                .ok_or_else(|| Error::parse(line, format!("expected key=value, got `{body}`")))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "p" => p = Some(value.parse::<u64>().map_err(|_| Error::parse(line, "bad prime"))?),
                "n" => n = Some(value.parse::<usize>().map_err(|_| Error::parse(line, "bad n"))?),
                "x" => {
                    let vals = value
                        .split(',')
                        .map(|t| t.trim().parse::<i64>())
                        .collect::<std::result::Result<Vec<_>, _>>()
                        .map_err(|_| Error::parse(line, format!("bad shift list `{value}`")))?;
                    x = Some((line, vals));
                }
                k if k.starts_with('H') => {
                    let i: usize =
                        k[1..].parse().map_err(|_| Error::parse(line, format!("bad target key `{k}`")))?;
                    let h = value.parse::<ModuleType>().map_err(|e| match e {
                        Error::Parse { message, .. } => Error::parse(line, message),
                        other => other,
                    })?;
                    targets.push((i, line, h));
                }
                other => return Err(Error::parse(line, format!("unknown key `{other}`"))),
            }
        }
        let p = p.ok_or_else(|| Error::parse(last_line.max(1), "missing `p=` line"))?;
        if !is_prime(p) {
            return Err(Error::parse(1, format!("{p} is not prime")));
        }
        let (xline, x) = x.ok_or_else(|| Error::parse(last_line.max(1), "missing `x=` line"))?;
        targets.sort_by_key(|t| t.0);
        for (pos, (i, line, _)) in targets.iter().enumerate() {
            if *i != pos + 1 {
                return Err(Error::parse(*line, format!("expected H{}, found H{i}", pos + 1)));
            }
        }
        if targets.len() != x.len() {
            return Err(Error::parse(
                xline,
                format!("{} shift points but {} targets", x.len(), targets.len()),
            ));
        }
        let spec = Self { p, x, targets: targets.into_iter().map(|t| t.2).collect(), n };
        spec.validate().map_err(|e| Error::parse(xline, e.to_string()))?;
        Ok(spec)
    }
}

impl fmt::Display for TupleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "p={}", self.p)?;
        let xs: Vec<String> = self.x.iter().map(i64::to_string).collect();
        writeln!(f, "x={}", xs.join(","))?;
        if let Some(n) = self.n {
            writeln!(f, "n={n}")?;
        }
        for (i, h) in self.targets.iter().enumerate() {
            writeln!(f, "H{}={}", i + 1, h)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trip() {
        let text = "# example\np=5\nx=0,1,2,3\nH1=1\nH2=1,2\nH3=0\nH4=inf\n";
        let spec: TupleSpec = text.parse().unwrap();
        assert_eq!(spec.m(), 4);
        assert_eq!(spec.targets[1].to_string(), "1,2");
        assert!(spec.targets[2].is_trivial());
        assert_eq!(spec.to_string().parse::<TupleSpec>().unwrap(), spec);
    }

    #[test]
    fn diagnostics_carry_lines() {
        let err = "p=5\nx=0,1\nH1=1\nH2=1,z\n".parse::<TupleSpec>().unwrap_err();
        assert!(matches!(err, Error::Parse { line: 4, .. }), "{err:?}");
        let err = "p=3\nx=0,3\nH1=1\nH2=1\n".parse::<TupleSpec>().unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err:?}");
        let err = "p=5\nx=0,1\nH1=1\nH3=1\n".parse::<TupleSpec>().unwrap_err();
        assert!(matches!(err, Error::Parse { line: 4, .. }), "{err:?}");
        let err = "p=5\nx=0\nH1=1\nfoo=2\n".parse::<TupleSpec>().unwrap_err();
        assert!(matches!(err, Error::Parse { line: 4, .. }), "{err:?}");
    }
}

use crate::error::{Error, Result};
use crate::module_types::{Exponent, ModuleType};

fn cyclic_exponents(targets: &[ModuleType]) -> Result<Vec<Exponent>> {
    targets
        .iter()
        .enumerate()
        .map(|(i, h)| match h.parts().as_slice() {
            [] => Ok(Exponent::Finite(0)),
            [e] => Ok(*e),
            _ => Err(Error::NotCyclic(i + 1)),
        })
        .collect()
}

/// Smallest r ≤ m − l with at least m − (l + r) exponents equal to r and the rest ≥ r.
pub fn rank1_level(targets: &[ModuleType], l: usize) -> Result<Option<u32>> {
    Ok(level_of(&cyclic_exponents(targets)?, l))
}

pub(crate) fn level_of(exps: &[Exponent], l: usize) -> Option<u32> {
    let m = exps.len();
    if l > m {
        return Some(0);
    }
    (0..=(m - l) as u32).find(|&r| {
        let exact = exps.iter().filter(|&&e| e == Exponent::Finite(r)).count();
        exps.iter().all(|e| e.is_at_least(r)) && exact + l + r as usize >= m
    })
}

/// Whether (1; H_1, …, H_m) is the cokernel tuple of a 1×1 l-th integral.
pub fn rank1_classify(targets: &[ModuleType], l: usize) -> Result<bool> {
    Ok(rank1_level(targets, l)?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tuple(items: &[&str]) -> Vec<ModuleType> {
        items.iter().map(|s| s.parse().unwrap()).collect()
    }

    #[test]
    fn examples() {
        assert_eq!(rank1_level(&tuple(&["3", "1", "1", "1"]), 0).unwrap(), Some(1));
        assert!(!rank1_classify(&tuple(&["2", "2", "1", "1"]), 0).unwrap());
        assert_eq!(rank1_level(&tuple(&["2", "2", "1", "1"]), 1).unwrap(), Some(1));
        assert_eq!(rank1_level(&tuple(&["0", "0", "0"]), 0).unwrap(), Some(0));
        assert_eq!(rank1_level(&tuple(&["inf", "inf"]), 0).unwrap(), Some(2));
        assert!(matches!(rank1_classify(&tuple(&["1,1"]), 0), Err(Error::NotCyclic(1))));
    }
}

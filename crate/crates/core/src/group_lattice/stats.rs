use std::collections::HashMap;

use crate::error::Result;
use crate::group_lattice::{FinAbGroup, Subgroup};
use crate::module_types::ModuleType;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GroupStats {
    /// #Sur(source, target)
    pub sur_count: u128,
    /// #Hom(source, target)
    pub hom_count: u128,
    /// #Aut(source)
    pub aut_count: u128,
}

/// Images allowed for a generator of order p^λ: the p^λ-torsion of the target.
fn torsion(t: &FinAbGroup, lambda: u32) -> Vec<usize> {
    let q = t.p().pow(lambda);
    (0..t.order()).filter(|&h| t.scale(q, h) == 0).collect()
}

/// Number of generator images (one per source part) whose span is all of the target.
fn count_spanning(source: &FinAbGroup, target: &FinAbGroup) -> u128 {
    let choices: Vec<Vec<usize>> = source.parts().iter().map(|&l| torsion(target, l)).collect();
    let mut memo: HashMap<(usize, Subgroup), u128> = HashMap::new();
    fn go(
        depth: usize,
        span: Subgroup,
        choices: &[Vec<usize>],
        target: &FinAbGroup,
        memo: &mut HashMap<(usize, Subgroup), u128>,
    ) -> u128 {
        if depth == choices.len() {
            return u128::from(span.order() == target.order());
        }
        if let Some(&v) = memo.get(&(depth, span.clone())) {
            return v;
        }
        let mut total = 0;
        for &h in &choices[depth] {
            total += go(depth + 1, span.extend(target, h), choices, target, memo);
        }
        memo.insert((depth, span), total);
        total
    }
    go(0, Subgroup::trivial(target), &choices, target, &mut memo)
}

/// Surjections and homomorphisms source → target, and automorphisms of source, by enumeration.
pub fn brute_group_stats(p: u64, source: &ModuleType, target: &ModuleType) -> Result<GroupStats> {
    let g = FinAbGroup::of_type(p, source)?;
    let h = FinAbGroup::of_type(p, target)?;
    let hom_count = g.parts().iter().map(|&l| torsion(&h, l).len() as u128).product();
    Ok(GroupStats { sur_count: count_spanning(&g, &h), hom_count, aut_count: count_spanning(&g, &g) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stats(p: u64, a: &str, b: &str) -> GroupStats {
        brute_group_stats(p, &a.parse().unwrap(), &b.parse().unwrap()).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(stats(2, "1,1", "1").sur_count, 3);
        assert_eq!(stats(2, "1,2", "1").aut_count, 8);
        assert_eq!(stats(2, "2", "1").hom_count, 2);
        assert_eq!(stats(2, "1", "2").sur_count, 0);
        assert_eq!(stats(3, "0", "0").sur_count, 1);
        assert_eq!(stats(2, "1,1,1", "0").aut_count, 168);
    }
}

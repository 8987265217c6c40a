use crate::error::{Error, Result};
use crate::group_lattice::{enumerate_subgroups, FinAbGroup};
use crate::module_types::ModuleType;
use crate::padic::XSet;

/// |S_{G_1..G_m}(X)|: subgroups of ∏G_i projecting onto every G_i and stable under p·T_x.
pub fn count_s(groups: &[ModuleType], x: &XSet) -> Result<u64> {
    if groups.len() != x.len() {
        return Err(Error::Dimension(format!("{} groups for {} shifts", groups.len(), x.len())));
    }
    let modulus = x.modulus();
    let p = modulus.p();
    let factors = groups.iter().map(|h| FinAbGroup::of_type(p, h)).collect::<Result<Vec<_>>>()?;
    // p·x·g only sees x modulo p^{λ−1}.
    let need = factors.iter().flat_map(|f| f.parts().iter().copied()).max().unwrap_or(1);
    if modulus.precision() + 1 < need {
        return Err(Error::Precision { p, k: modulus.precision() });
    }
    let g = FinAbGroup::product(&factors)?;
    let blocks: Vec<std::ops::Range<usize>> = factors
        .iter()
        .scan(0, |start, f| {
            let r = *start..*start + f.parts().len();
            *start = r.end;
            Some(r)
        })
        .collect();
    let radices: Vec<u64> = g.parts().iter().map(|&l| p.pow(l)).collect();
    let multipliers: Vec<u64> = blocks
        .iter()
        .zip(x.values())
        .flat_map(|(block, &xi)| block.clone().map(move |j| (j, xi)))
        .map(|(j, xi)| p * (xi % radices[j]) % radices[j])
        .collect();
    let twist = |a: usize| -> usize {
        let digits: Vec<u64> =
            g.decode(a).iter().zip(&multipliers).zip(&radices).map(|((&d, &c), &q)| d * c % q).collect();
        g.encode(&digits)
    };
    let mut count = 0u64;
    for h in enumerate_subgroups(&g) {
        let members: Vec<usize> = h.members().collect();
        let onto = blocks.iter().zip(&factors).all(|(block, f)| {
            let mut hit = vec![false; f.order()];
            for &a in &members {
                hit[f.encode(&g.decode(a)[block.clone()])] = true;
            }
            hit.iter().all(|&b| b)
        });
        if onto && members.iter().all(|&a| h.contains(twist(a))) {
            count += 1;
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::Modulus;

    fn xs(p: u64, k: u32, vals: &[i64]) -> XSet {
        XSet::new(Modulus::new(p, k).unwrap(), vals).unwrap()
    }

    fn types(items: &[&str]) -> Vec<ModuleType> {
        items.iter().map(|s| s.parse().unwrap()).collect()
    }

    #[test]
    fn small_values() {
        assert_eq!(count_s(&types(&["2,1"]), &xs(3, 2, &[1])).unwrap(), 1);
        assert_eq!(count_s(&types(&["1", "1"]), &xs(3, 2, &[0, 1])).unwrap(), 3);
        let v = count_s(&types(&["1", "1", "1"]), &xs(3, 2, &[0, 1, 2])).unwrap();
        assert!(v as f64 > crate::module_types::c_infinity(3) * 9.0, "{v}");
    }

    #[test]
    fn invariant_under_permutation_and_translation() {
        let g = types(&["2", "1", "2"]);
        let base = count_s(&g, &xs(3, 3, &[0, 1, 2])).unwrap();
        let perm = types(&["1", "2", "2"]);
        assert_eq!(count_s(&perm, &xs(3, 3, &[1, 0, 2])).unwrap(), base);
        assert_eq!(count_s(&g, &xs(3, 3, &[4, 5, 6])).unwrap(), base);
        let g2 = types(&["2", "1"]);
        assert_eq!(count_s(&g2, &xs(2, 3, &[0, 1])).unwrap(), count_s(&g2, &xs(2, 3, &[3, 2])).unwrap());
    }
}

use crate::error::{Error, Result};
use crate::module_types::Exponent;
use crate::padic::{scalar, IntegralPoly, MatPk, XSet};
use crate::realizability::level_of;

/// 1×1 integral of order l whose value at x_i has valuation `pattern[i]`.
///
/// With r the rank-one level and S the rows whose exponent exceeds r, the
/// polynomial is p^r ∏_{S}(t − x_j) + Σ_{i∈S} p^{b_i} L_i(t) with L_i the
/// Lagrange basis on S.
pub fn realize_rank1(pattern: &[Exponent], l: u32, x: &XSet) -> Result<IntegralPoly> {
    if pattern.len() != x.len() {
        return Err(Error::Dimension(format!(
            "pattern of length {} at {} shift points",
            pattern.len(),
            x.len()
        )));
    }
    let m = x.modulus();
    let r = level_of(pattern, l as usize).ok_or(Error::Unclassifiable)?;
    let deep: Vec<usize> = (0..pattern.len()).filter(|&i| pattern[i] != Exponent::Finite(r)).collect();
    let points: Vec<u64> = deep.iter().map(|&i| x.values()[i]).collect();
    let mut f = scalar::scale(m, &scalar::from_roots(m, &points), m.p_pow(r));
    for (pos, &i) in deep.iter().enumerate() {
        let weight = match pattern[i] {
            Exponent::Finite(b) => m.p_pow(b),
            Exponent::Infinite => 0,
        };
        if weight != 0 {
            f = scalar::add(m, &f, &scalar::scale(m, &scalar::lagrange(m, &points, pos), weight));
        }
    }
    let coeffs = f.iter().map(|&c| MatPk::scalar(m, 1, c)).collect();
    IntegralPoly::new(m, 1, coeffs, Some(l))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::{cokernel_type, Modulus};

    fn exps(v: &[Option<u32>]) -> Vec<Exponent> {
        v.iter().map(|e| e.map_or(Exponent::Infinite, Exponent::Finite)).collect()
    }

    fn valuations(poly: &IntegralPoly, x: &XSet) -> Vec<u32> {
        x.values()
            .iter()
            .map(|&v| cokernel_type(&poly.eval(v)).exps().first().copied().unwrap_or(0))
            .collect()
    }

    #[test]
    fn four_point_example() {
        let m = Modulus::new(5, 4).unwrap();
        let x = XSet::new(m, &[0, 1, 2, 3]).unwrap();
        let poly = realize_rank1(&exps(&[Some(2), Some(0), Some(0), Some(0)]), 1, &x).unwrap();
        assert_eq!(valuations(&poly, &x), vec![2, 0, 0, 0]);
        let expected = IntegralPoly::scalar(m, &[25, 1], Some(1)).unwrap();
        assert_eq!(poly.trimmed(), expected);
    }

    #[test]
    fn every_classified_pattern_is_hit() {
        let m = Modulus::new(5, 5).unwrap();
        let x = XSet::new(m, &[0, 1, 2, 3]).unwrap();
        let alphabet = [Some(0), Some(1), Some(2), Some(3), None];
        for l in 0..=3u32 {
            for code in 0..alphabet.len().pow(4) {
                let mut c = code;
                let pat: Vec<Option<u32>> = (0..4)
                    .map(|_| {
                        let e = alphabet[c % alphabet.len()];
                        c /= alphabet.len();
                        e
                    })
                    .collect();
                let pattern = exps(&pat);
                match realize_rank1(&pattern, l, &x) {
                    Ok(poly) => {
                        assert!(poly.satisfies_order(Some(l)));
                        let want: Vec<u32> = pattern.iter().map(|e| e.capped(5)).collect();
                        assert_eq!(valuations(&poly, &x), want, "{pat:?} l={l}");
                    }
                    Err(Error::Unclassifiable) => assert!(level_of(&pattern, l as usize).is_none()),
                    Err(e) => panic!("{e}"),
                }
            }
        }
    }
}

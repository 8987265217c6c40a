use super::*;
use crate::realizability::member_cxm;

fn spec(p: u64, x: &[i64], hs: &[&str]) -> TupleSpec {
    TupleSpec::new(p, x.to_vec(), hs.iter().map(|h| h.parse().unwrap()).collect(), None).unwrap()
}

fn small_types() -> Vec<ModuleType> {
    let mut out = vec![ModuleType::trivial()];
    for a in ["1", "2", "3", "inf"] {
        out.push(a.parse().unwrap());
        for b in ["1", "2", "3", "inf"] {
            let h: ModuleType = format!("{a},{b}").parse().unwrap();
            if !out.contains(&h) {
                out.push(h);
            }
        }
    }
    out
}

#[test]
fn single_and_pairs() {
    let r = realize_tuple(&spec(3, &[1], &["1,2,inf"]), 4).unwrap();
    assert!(r.verification.passed());
    let r = realize_tuple(&spec(5, &[0, 1], &["1,3", "2,2"]), 5).unwrap();
    assert!(r.verification.passed());
    let err = realize_tuple(&spec(5, &[0, 1], &["1", "1,1"]), 4).unwrap_err();
    assert!(matches!(err, Error::NotRealizable(_)), "{err}");
    let err = realize_tuple(&spec(5, &[0, 1], &["1,3", "2,2"]), 4).unwrap_err();
    assert_eq!(err, Error::PrecisionTooSmall { k: 4, need: 5 });
}

#[test]
fn trivial_tuple_gives_empty_matrix() {
    let r = realize_tuple(&spec(5, &[0, 1, 2], &["0", "0", "0"]), 2).unwrap();
    assert_eq!(r.matrix.rows(), 0);
    assert!(r.verification.passed());
}

#[test]
fn all_small_members_are_realized() {
    let types = small_types();
    for m in 1..=4usize {
        let x: Vec<i64> = (0..m as i64).map(|i| 2 * i + 1).collect();
        let mut realized = 0;
        for code in 0..types.len().pow(m as u32) {
            let pick: Vec<usize> = (0..m).map(|j| code / types.len().pow(j as u32) % types.len()).collect();
            if m == 4 && pick.windows(2).any(|w| w[0] > w[1]) {
                continue;
            }
            let hs: Vec<ModuleType> = pick.iter().map(|&i| types[i].clone()).collect();
            let member = member_cxm(&hs).unwrap().verdict;
            let spec = TupleSpec::new(11, x.clone(), hs.clone(), None).unwrap();
            let k = minimum_precision(&spec);
            match realize_tuple(&spec, k) {
                Ok(r) => {
                    assert!(member, "{hs:?}");
                    assert!(r.verification.passed(), "{hs:?}\n{}", r.verification);
                    realized += 1;
                }
                Err(Error::NotRealizable(_)) => assert!(!member, "{hs:?}"),
                Err(e) => panic!("{hs:?}: {e}"),
            }
        }
        assert!(realized > 0, "m={m}");
    }
}

#[test]
fn deeper_four_shift_tuples() {
    for hs in [
        ["1,1,2", "1,1,3", "2,2,inf", "1,2,2"],
        ["1,1,1", "1,1,2", "1,2,2", "2,3,4"],
        ["1,2,3", "1,2,3", "1,2,3", "1,2,3"],
        ["1,1,1,2", "1,1,2,2", "1,1,1,3", "2,2,2,2"],
    ] {
        let s = spec(5, &[0, 1, 2, 3], &hs);
        if !member_cxm(&s.targets).unwrap().verdict {
            continue;
        }
        let r = realize_tuple(&s, minimum_precision(&s) + 1).unwrap();
        assert!(r.verification.passed(), "{hs:?}");
        assert!(!r.blocks.is_empty());
    }
}

#[test]
fn shifts_translate() {
    let base = spec(5, &[0, 1, 2, 3], &["1,2", "1,2", "2,2", "1,inf"]);
    let moved = spec(5, &[7, 8, 9, 10], &["1,2", "1,2", "2,2", "1,inf"]);
    let k = minimum_precision(&base);
    let a = realize_tuple(&base, k).unwrap();
    let b = realize_tuple(&moved, k).unwrap();
    assert_eq!(a.integral, b.integral);
    let m = a.matrix.modulus();
    let c = m.mul(5, m.reduce(-7));
    assert_eq!(b.matrix, a.matrix.add_scalar(c));
}

#[test]
fn verification_catches_corruption() {
    let s = spec(5, &[0, 1, 2], &["1,2", "2,2", "1,3"]);
    let r = realize_tuple(&s, minimum_precision(&s)).unwrap();
    let mut caught = false;
    for i in 0..r.matrix.rows() {
        for j in 0..r.matrix.cols() {
            let mut bad = r.matrix.clone();
            let m = bad.modulus();
            bad.set(i, j, m.add(bad.get(i, j), 1));
            let v = verify_realization(&bad, &s).unwrap();
            caught |= !v.passed();
        }
    }
    assert!(caught);
    let text = r.verification.to_string();
    assert_eq!(text.lines().count(), 3);
    assert!(text.lines().all(|l| l.ends_with("ok")));
}

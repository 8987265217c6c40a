use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::module_types::Presentation;
use crate::synthesis::generators::{GeneratorColumn, Symbol};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Zone {
    Zero,
    One,
    TwoPlus,
}

/// Per-row counts of the symbols 0, 1, 2⁺.
type Counts = Vec<[usize; 3]>;

fn row_counts(grid: &Presentation) -> Result<Counts> {
    if grid.k() != 2 {
        return Err(Error::Infeasible(format!("expected a 2-presentation, got K={}", grid.k())));
    }
    Ok((0..grid.m())
        .map(|i| {
            let mut c = [0; 3];
            for &s in grid.row(i) {
                c[s.min(2) as usize] += 1;
            }
            c
        })
        .collect())
}

/// Splits a 2-presentation into generator blocks whose columns re-concatenate to it.
///
/// The greedy zone layout is tried first; an exhaustive search over the generator
/// alphabet covers the layouts it cannot repair.
pub fn zone_decompose(grid: &Presentation, alphas: (u64, u64)) -> Result<Vec<GeneratorColumn>> {
    let counts = row_counts(grid)?;
    if let Some(blocks) = greedy(&counts, alphas) {
        return Ok(blocks);
    }
    exhaustive(&counts).ok_or_else(|| Error::Infeasible(format!("no decomposition of {grid}")))
}

#[cfg(test)]
fn zone_decompose_greedy(grid: &Presentation, alphas: (u64, u64)) -> Result<Option<Vec<GeneratorColumn>>> {
    Ok(greedy(&row_counts(grid)?, alphas))
}

#[cfg(test)]
fn zone_decompose_exhaustive(grid: &Presentation) -> Result<Option<Vec<GeneratorColumn>>> {
    Ok(exhaustive(&row_counts(grid)?))
}

fn greedy(counts: &Counts, (alpha0, alpha1): (u64, u64)) -> Option<Vec<GeneratorColumn>> {
    let m = counts.len();
    let (a0, a1) = (alpha0 as usize, alpha1 as usize);
    if counts.iter().any(|c| c[0] > a0) {
        return None;
    }
    let mut zones: Vec<Zone> = [vec![Zone::Zero; a0], vec![Zone::One; a1]].concat();
    let mut layout: Vec<Vec<Option<Symbol>>> = vec![vec![None; a0 + a1]; m];

    let mut cum = 0;
    for (i, c) in counts.iter().enumerate() {
        for a in cum..cum + c[0] {
            layout[i][a % a0] = Some(0);
        }
        cum += c[0];
    }
    let mut spare_ones = vec![0; m];
    let mut cum = 0;
    for (i, c) in counts.iter().enumerate() {
        let q = c[1].min(a1);
        for j in 0..q {
            layout[i][a0 + (cum + j) % a1] = Some(1);
        }
        cum += q;
        spare_ones[i] = c[1] - q;
    }
    for i in 0..m {
        for slot in layout[i].iter_mut().take(a0) {
            if spare_ones[i] > 0 && slot.is_none() {
                *slot = Some(1);
                spare_ones[i] -= 1;
            }
        }
    }
    let extra = spare_ones.iter().copied().max().unwrap_or(0);
    grow(&mut layout, &mut zones, extra);
    let start = a0 + a1;
    for i in 0..m {
        for j in 0..spare_ones[i] {
            layout[i][start + j] = Some(1);
        }
    }
    let mut spare_twos: Vec<usize> = counts.iter().map(|c| c[2]).collect();
    for i in 0..m {
        for cell in layout[i].iter_mut() {
            if spare_twos[i] > 0 && cell.is_none() {
                *cell = Some(2);
                spare_twos[i] -= 1;
            }
        }
    }
    let extra = spare_twos.iter().copied().max().unwrap_or(0);
    let start = zones.len();
    grow(&mut layout, &mut zones, extra);
    for i in 0..m {
        for j in 0..spare_twos[i] {
            layout[i][start + j] = Some(2);
        }
    }

    for row in layout.iter_mut() {
        compact(row);
    }
    let keep: Vec<usize> = (0..zones.len()).filter(|&j| layout.iter().any(|r| r[j].is_some())).collect();
    let mut columns = Vec::with_capacity(keep.len());
    for &j in &keep {
        let col: Option<Vec<Symbol>> = layout.iter().map(|r| r[j]).collect();
        columns.push((zones[j], col?));
    }
    classify(m, columns)
}

fn grow(layout: &mut [Vec<Option<Symbol>>], zones: &mut Vec<Zone>, extra: usize) {
    zones.extend(std::iter::repeat_n(Zone::TwoPlus, extra));
    for row in layout.iter_mut() {
        row.extend(std::iter::repeat_n(None, extra));
    }
}

/// Moves every gap to the right end, each time swapping with the rightmost filled cell.
fn compact(row: &mut [Option<Symbol>]) {
    loop {
        let Some(gap) = row.iter().position(Option::is_none) else { return };
        let Some(last) = row.iter().rposition(Option::is_some) else { return };
        if last < gap {
            return;
        }
        row.swap(gap, last);
    }
}

enum Pending {
    D1(Vec<usize>),
    D2(Vec<usize>),
}

fn classify(m: usize, columns: Vec<(Zone, Vec<Symbol>)>) -> Option<Vec<GeneratorColumn>> {
    let mut blocks = Vec::new();
    let mut all_zero = 0usize;
    let mut unit = vec![0usize; m];
    let mut pending = Vec::new();
    for (zone, col) in columns {
        let zeros = col.iter().filter(|&&s| s == 0).count();
        let ones = col.iter().filter(|&&s| s == 1).count();
        if zone == Zone::Zero {
            if zeros + 1 < m {
                return None;
            }
            match col.iter().position(|&s| s != 0) {
                None => all_zero += 1,
                Some(i) if col[i] == 1 => unit[i] += 1,
                Some(_) => blocks.push(GeneratorColumn::single(col)),
            }
            continue;
        }
        if zeros > 0 {
            return None;
        }
        if ones == 0 || ones + 2 >= m {
            blocks.push(GeneratorColumn::single(col));
            continue;
        }
        let rows_with = |s: Symbol| (0..m).filter(|&i| col[i] == s).collect::<Vec<_>>();
        pending.push(match zone {
            Zone::One => Pending::D1(rows_with(2)),
            _ => Pending::D2(rows_with(1)),
        });
    }
    for p in pending {
        match p {
            Pending::D1(t) => {
                let d = t.len() - 2;
                if all_zero < d {
                    return None;
                }
                all_zero -= d;
                blocks.push(GeneratorColumn::d1(m, t).ok()?);
            }
            Pending::D2(r) => {
                for &i in &r {
                    if unit[i] == 0 {
                        return None;
                    }
                    unit[i] -= 1;
                }
                blocks.push(GeneratorColumn::d2(m, r).ok()?);
            }
        }
    }
    blocks.extend(std::iter::repeat_n(GeneratorColumn::single(vec![0; m]), all_zero));
    for (i, &c) in unit.iter().enumerate() {
        let mut col = vec![0; m];
        col[i] = 1;
        blocks.extend(std::iter::repeat_n(GeneratorColumn::single(col), c));
    }
    Some(blocks)
}

fn alphabet(m: usize) -> Vec<GeneratorColumn> {
    let mut out = Vec::new();
    for code in 0..3usize.pow(m as u32) {
        let col: Vec<Symbol> = (0..m).map(|i| (code / 3usize.pow(i as u32) % 3) as Symbol).collect();
        let zeros = col.iter().filter(|&&s| s == 0).count();
        let ones = col.iter().filter(|&&s| s == 1).count();
        if zeros + 1 >= m || (zeros == 0 && (ones == 0 || ones + 2 >= m)) {
            out.push(GeneratorColumn::single(col));
        }
    }
    for mask in 0u32..1 << m {
        let rows: Vec<usize> = (0..m).filter(|&i| mask >> i & 1 == 1).collect();
        if rows.len() >= 3 {
            out.push(GeneratorColumn::d1(m, rows.clone()).expect("valid rows"));
        }
        if !rows.is_empty() && rows.len() + 2 < m {
            out.push(GeneratorColumn::d2(m, rows).expect("valid rows"));
        }
    }
    out
}

fn exhaustive(counts: &Counts) -> Option<Vec<GeneratorColumn>> {
    let m = counts.len();
    let gens: Vec<(GeneratorColumn, Counts)> = alphabet(m)
        .into_iter()
        .map(|g| {
            let c = (0..m)
                .map(|i| {
                    let mut c = [0; 3];
                    for s in g.row(i) {
                        c[s as usize] += 1;
                    }
                    c
                })
                .collect();
            (g, c)
        })
        .collect();
    let mut dead = HashSet::new();
    let mut chosen = Vec::new();
    search(counts.clone(), &gens, &mut dead, &mut chosen).then_some(chosen)
}

fn search(
    rest: Counts,
    gens: &[(GeneratorColumn, Counts)],
    dead: &mut HashSet<Counts>,
    chosen: &mut Vec<GeneratorColumn>,
) -> bool {
    if rest.iter().all(|c| c == &[0, 0, 0]) {
        return true;
    }
    if dead.contains(&rest) {
        return false;
    }
    for (g, used) in gens {
        let fits = rest.iter().zip(used).all(|(r, u)| (0..3).all(|s| r[s] >= u[s]));
        if !fits {
            continue;
        }
        let next: Counts =
            rest.iter().zip(used).map(|(r, u)| [r[0] - u[0], r[1] - u[1], r[2] - u[2]]).collect();
        chosen.push(g.clone());
        if search(next, gens, dead, chosen) {
            return true;
        }
        chosen.pop();
    }
    dead.insert(rest);
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module_types::{presentation, ModuleType, TupleSpec};
    use crate::realizability::{low_data, member_cxm, search_alphas};

    fn recombine(m: usize, blocks: &[GeneratorColumn]) -> Vec<Vec<Symbol>> {
        (0..m)
            .map(|i| {
                let mut row: Vec<Symbol> = blocks.iter().flat_map(|b| b.row(i)).collect();
                row.sort_unstable();
                row
            })
            .collect()
    }

    fn small_types() -> Vec<ModuleType> {
        let mut out = vec![
            ModuleType::trivial(),
            ModuleType::cyclic(1),
            ModuleType::cyclic(3),
            ModuleType::new(&[1, 2], 0),
        ];
        for a in [1u32, 2, 3] {
            for b in [a, 3] {
                for c in [b, 3] {
                    let h = ModuleType::new(&[a, b, c], 0);
                    if !out.contains(&h) {
                        out.push(h);
                    }
                }
            }
        }
        out
    }

    #[test]
    fn decompositions_recombine_and_greedy_mostly_suffices() {
        let types = small_types();
        let (mut greedy_hits, mut total) = (0usize, 0usize);
        let idx = |c: usize, k: usize| -> Vec<usize> { (0..4).map(|j| c / k.pow(j) % k).collect() };
        for code in 0..types.len().pow(4) {
            let pick = idx(code, types.len());
            if pick.windows(2).any(|w| w[0] > w[1]) {
                continue;
            }
            let hs: Vec<ModuleType> = pick.iter().map(|&i| types[i].clone()).collect();
            let s = hs.iter().map(ModuleType::s_rank).max().unwrap();
            let gs: Vec<ModuleType> = hs.iter().map(ModuleType::shift_down).collect();
            if !member_cxm(&hs).unwrap().verdict || s == 0 {
                continue;
            }
            let spec = TupleSpec::new(5, vec![0, 1, 2, 3], gs, Some(s)).unwrap();
            let grid = presentation(&spec, 2).unwrap();
            let alphas = search_alphas(&low_data(&spec).unwrap()).expect("witness");
            let blocks = zone_decompose(&grid, alphas).unwrap();
            let want: Vec<Vec<Symbol>> = (0..4).map(|i| grid.row(i).to_vec()).collect();
            assert_eq!(recombine(4, &blocks), want, "{hs:?}");
            total += 1;
            if zone_decompose_greedy(&grid, alphas).unwrap().is_some() {
                greedy_hits += 1;
            }
        }
        assert!(total > 20, "{total}");
        eprintln!("greedy layout succeeded on {greedy_hits}/{total} tuples");
        assert!(greedy_hits * 2 >= total);
    }

    #[test]
    fn exhaustive_rejects_bad_grids() {
        let spec = TupleSpec::new(
            5,
            vec![0, 1, 2, 3],
            ["1,1", "1,1", "1,1", "2,2"].iter().map(|s| s.parse().unwrap()).collect(),
            Some(2),
        )
        .unwrap();
        let grid = presentation(&spec, 2).unwrap();
        let blocks = zone_decompose_exhaustive(&grid).unwrap().unwrap();
        assert_eq!(recombine(4, &blocks), (0..4).map(|i| grid.row(i).to_vec()).collect::<Vec<_>>());
        let spec = TupleSpec::new(
            5,
            vec![0, 1, 2, 3],
            ["0", "2", "2", "2"].iter().map(|s| s.parse().unwrap()).collect(),
            Some(1),
        )
        .unwrap();
        assert!(zone_decompose_exhaustive(&presentation(&spec, 2).unwrap()).unwrap().is_none());
    }
}

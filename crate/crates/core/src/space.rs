//! Exhaustive enumeration of small presentations.

use crate::error::{Error, Result};
use crate::pair::PairPresentation;
use crate::presentation::Presentation;
use crate::words::Theta;

pub fn node_names(count: usize) -> Vec<String> {
    (0..count).map(|k| format!("v{k}")).collect()
}

/// Every edge set on `count` nodes with `labels` labels in which each node
/// has in-degree at most one: for each target, the source slot feeding it (or
/// none), all slots distinct.
pub fn injective_edge_sets(count: usize, labels: usize) -> Vec<Vec<(usize, usize, usize)>> {
    let slots: Vec<(usize, usize)> = (0..count).flat_map(|b| (1..=labels).map(move |i| (b, i))).collect();
    let mut out = Vec::new();
    let mut used = vec![false; slots.len()];
    let mut cur = Vec::new();
    fn rec(
        target: usize,
        count: usize,
        slots: &[(usize, usize)],
        used: &mut [bool],
        cur: &mut Vec<(usize, usize, usize)>,
        out: &mut Vec<Vec<(usize, usize, usize)>>,
    ) {
        if target == count {
            let mut e = cur.clone();
            e.sort_unstable();
            out.push(e);
            return;
        }
        rec(target + 1, count, slots, used, cur, out);
        for k in 0..slots.len() {
            if !used[k] {
                used[k] = true;
                cur.push((slots[k].0, slots[k].1, target));
                rec(target + 1, count, slots, used, cur, out);
                cur.pop();
                used[k] = false;
            }
        }
    }
    rec(0, count, &slots, &mut used, &mut cur, &mut out);
    out
}

/// All valid single-family presentations with exactly `count` nodes.
pub fn single_presentations(count: usize, m: usize) -> Vec<Presentation> {
    injective_edge_sets(count, m)
        .into_iter()
        .map(|e| Presentation::new(m, node_names(count), &e).expect("well-formed"))
        .collect()
}

pub const SEARCH_BUDGET: u128 = 10_000_000;

/// All pairs with per-family in-degree at most one, over every base size up
/// to `max_base` and every given θ.
pub fn pair_presentations(max_base: usize, thetas: &[Theta]) -> Result<Vec<PairPresentation>> {
    let Some(first) = thetas.first() else {
        return Ok(Vec::new());
    };
    let (m, n) = (first.m(), first.n());
    if thetas.iter().any(|t| t.m() != m || t.n() != n) {
        return Err(Error::Validation("all thetas must share m and n".into()));
    }
    let mut per_size = Vec::new();
    let mut total: u128 = 0;
    for count in 0..=max_base {
        let s_sets = injective_edge_sets(count, m);
        let t_sets = injective_edge_sets(count, n);
        total += (s_sets.len() * t_sets.len()) as u128 * thetas.len() as u128;
        if total > SEARCH_BUDGET {
            return Err(Error::Resource {
                what: "pair search space",
                needed: total,
                budget: SEARCH_BUDGET,
            });
        }
        per_size.push((count, s_sets, t_sets));
    }
    let mut out = Vec::with_capacity(total as usize);
    for (count, s_sets, t_sets) in per_size {
        for th in thetas {
            for se in &s_sets {
                for te in &t_sets {
                    out.push(PairPresentation::new(th.clone(), node_names(count), se, te).expect("well-formed"));
                }
            }
        }
    }
    Ok(out)
}

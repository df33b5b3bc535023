//! The node-level shortcuts behind the joint decompositions, checked against
//! long explicit predecessor chains on every small commuting pair.

use permwold::pair::{CommutingPair, PairElem};
use permwold::slocinski::{joint_wold, slocinski, verify_theorem_implications, Order};
use permwold::space::pair_presentations;
use permwold::words::{Family, Theta};

fn small_space() -> Vec<CommutingPair> {
    let mut out = Vec::new();
    for (m, n, base) in [(1, 1, 3), (1, 2, 2), (2, 1, 2), (2, 2, 2)] {
        let thetas = Theta::all(m, n).unwrap();
        for pp in pair_presentations(base, &thetas).unwrap() {
            if let Ok(cp) = CommutingPair::new(pp) {
                out.push(cp);
            }
        }
    }
    out
}

fn chain_is_long(cp: &CommutingPair, f: Family, x: &PairElem) -> bool {
    let mut cur = x.clone();
    for _ in 0..60 {
        match cp.pred(f, &cur) {
            Some((_, y)) => cur = y,
            None => return false,
        }
    }
    true
}

fn own(f: Family, x: &PairElem) -> &[usize] {
    match f {
        Family::S => &x.s,
        Family::T => &x.t,
    }
}

#[test]
fn predecessor_node_depends_on_node_only() {
    for cp in small_space() {
        let depth = if cp.node_count() == 3 { 5 } else { 4 };
        for f in [Family::S, Family::T] {
            let jw = joint_wold(&cp, f);
            for x in cp.enumerate(depth) {
                assert_eq!(chain_is_long(&cp, f, &x), jw.is_unitary(&x), "{f:?} {}", cp.display(&x));
                if own(f, &x).is_empty() {
                    let p = cp.pred(f, &x);
                    assert_eq!(p.as_ref().map(|(_, y)| y.node), jw.pred_node[x.node]);
                    if let Some((_, y)) = p {
                        assert!(y.len() >= x.len());
                    }
                }
            }
        }
    }
}

#[test]
fn parts_are_closed_under_actions_and_predecessors() {
    let mut missing = 0;
    for cp in small_space() {
        for order in [Order::St, Order::Ts] {
            let r = slocinski(&cp, order);
            if !r.exists {
                missing += 1;
                assert!(r.parts().iter().all(|(_, p)| p.is_empty()));
                assert!(r.failure_witness.is_some());
                continue;
            }
            for x in cp.enumerate(4) {
                let part = r.part_of(&x).expect("every element is assigned");
                for f in [Family::S, Family::T] {
                    for l in 1..=cp.labels(f) {
                        assert_eq!(r.part_of(&cp.apply(f, l, &x).unwrap()), Some(part));
                    }
                    if let Some((_, y)) = cp.pred(f, &x) {
                        assert_eq!(r.part_of(&y), Some(part));
                    }
                }
            }
        }
        assert!(verify_theorem_implications(&cp).is_clean());
    }
    // the three-node (1,1) space and all two-node spaces always decompose
    assert_eq!(missing, 0);
}

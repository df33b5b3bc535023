use std::collections::HashSet;

use permwold::oracle::{materialize_pair, verify_relations};
use permwold::pair::{
    check_doubly_commute, check_theta_commute, CommutingPair, FailureKind, PairElem, PairPresentation,
};
use permwold::space::pair_presentations;
use permwold::words::Theta;
use proptest::prelude::*;

fn flip() -> Theta {
    Theta::from_fn(2, 2, |i, j| (j, i)).unwrap()
}

fn pair(theta: Theta, nodes: &[&str], s: &[(&str, usize, &str)], t: &[(&str, usize, &str)]) -> PairPresentation {
    PairPresentation::from_names(theta, nodes, s, t).unwrap()
}

#[test]
fn reduce_free_is_identity() {
    let cp = CommutingPair::new(PairPresentation::free(flip(), &["b"]).unwrap()).unwrap();
    assert_eq!(
        cp.reduce_elem(&[1], &[2], 0).unwrap(),
        PairElem::new(vec![1], vec![2], 0)
    );
}

#[test]
fn reduce_double_loop_absorbs_both() {
    let cp = CommutingPair::new(pair(Theta::identity(1, 1), &["b"], &[("b", 1, "b")], &[("b", 1, "b")])).unwrap();
    assert_eq!(cp.reduce_elem(&[1], &[1], 0).unwrap(), PairElem::base(0));
}

#[test]
fn reduce_through_flip_has_unique_normal_form() {
    // T2 S1 e_b: S1 absorbs into the loop first, leaving T2 e_b with no T-edge
    let pp = pair(flip(), &["b"], &[("b", 1, "b")], &[]);
    let all = pp.all_normal_forms(&[2], &[1], 0);
    assert_eq!(
        all.into_iter().collect::<Vec<_>>(),
        vec![PairElem::new(vec![2], vec![], 0)]
    );
    let cp = CommutingPair::new(pp).unwrap();
    assert_eq!(
        cp.reduce_elem(&[2], &[1], 0).unwrap(),
        PairElem::new(vec![2], vec![], 0)
    );
}

#[test]
fn reduce_refuses_non_commuting() {
    let pp = pair(Theta::identity(1, 1), &["a", "b"], &[("a", 1, "b")], &[("a", 1, "a")]);
    assert!(matches!(
        CommutingPair::new(pp),
        Err(permwold::Error::ContractViolation(_))
    ));
}

#[test]
fn s_apply_on_free_pair_rewrites_once() {
    for theta in Theta::all(2, 2).unwrap() {
        let cp = CommutingPair::new(PairPresentation::free(theta.clone(), &["b"]).unwrap()).unwrap();
        let (i2, j2) = theta.apply(1, 2);
        let got = cp.s_apply(1, &PairElem::new(vec![2], vec![], 0)).unwrap();
        assert_eq!(got, PairElem::new(vec![j2], vec![i2], 0));
    }
    let cp = CommutingPair::new(PairPresentation::free(Theta::identity(2, 3), &["b"]).unwrap()).unwrap();
    let x = PairElem::new(vec![3, 1], vec![2], 0);
    assert_eq!(cp.s_apply(1, &x).unwrap(), PairElem::new(vec![3, 1], vec![1, 2], 0));
    assert!(cp.s_apply(3, &x).is_err());
}

fn letters(max: usize, len: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(1..=max, 0..=len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    // S_i T_j x = T_{j'} S_{i'} x on the joint left-regular pair
    #[test]
    fn left_regular_relation(rank in 0u128..720, t in letters(3, 3), s in letters(2, 3), i in 1usize..=2, j in 1usize..=3) {
        let theta = Theta::nth(2, 3, rank).unwrap();
        let cp = CommutingPair::new(PairPresentation::free(theta.clone(), &["b"]).unwrap()).unwrap();
        let x = cp.reduce_elem(&t, &s, 0).unwrap();
        let (i2, j2) = theta.apply(i, j);
        let lhs = cp.s_apply(i, &cp.t_apply(j, &x).unwrap()).unwrap();
        let rhs = cp.t_apply(j2, &cp.s_apply(i2, &x).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn free_pair_commutes_for_small_theta() {
    for (m, n) in [(1, 1), (1, 2), (2, 1), (2, 2), (1, 3), (3, 1), (2, 3), (3, 2)] {
        for theta in Theta::all(m, n).unwrap() {
            let pp = PairPresentation::free(theta, &["b"]).unwrap();
            assert!(check_theta_commute(&pp).unwrap().is_empty());
        }
    }
}

#[test]
fn free_pair_commutes_for_every_three_by_three_theta() {
    let pp = PairPresentation::free(Theta::identity(3, 3), &["b"]).unwrap();
    let (s, t) = (pp.s_family().clone(), pp.t_family().clone());
    for rank in 0..Theta::count(3, 3) {
        let theta = Theta::nth(3, 3, rank).unwrap();
        let pp = PairPresentation::from_families(theta, s.clone(), t.clone()).unwrap();
        assert!(check_theta_commute(&pp).unwrap().is_empty(), "rank {rank}");
    }
}

#[test]
fn cycle_with_fixed_points_commutes() {
    let pp = pair(
        Theta::identity(1, 1),
        &["a", "b"],
        &[("a", 1, "b"), ("b", 1, "a")],
        &[("a", 1, "a"), ("b", 1, "b")],
    );
    assert!(check_theta_commute(&pp).unwrap().is_empty());
}

#[test]
fn partial_edge_fails_to_commute() {
    // T S e_a = T e_b, a fresh vector, while S T e_a = S e_a = e_b
    let pp = pair(Theta::identity(1, 1), &["a", "b"], &[("a", 1, "b")], &[("a", 1, "a")]);
    let report = check_theta_commute(&pp).unwrap();
    assert!(!report.is_empty());
    // the first stage already sees the two sides as competing normal forms
    let rel = &report.failures[0];
    assert_eq!((rel.kind, &rel.at), (FailureKind::NonConfluent, &PairElem::base(0)));
    let mut sides = vec![rel.lhs.clone().unwrap(), rel.rhs.clone().unwrap()];
    sides.sort();
    assert_eq!(sides, vec![PairElem::base(1), PairElem::new(vec![1], vec![], 1)]);
}

#[test]
fn doubly_commute_examples() {
    for m in 1..=2 {
        for n in 1..=2 {
            for theta in Theta::all(m, n).unwrap() {
                let cp = CommutingPair::new(PairPresentation::free(theta, &["b"]).unwrap()).unwrap();
                assert!(check_doubly_commute(&cp, 4).is_empty());
                assert!(verify_relations(&materialize_pair(cp.presentation(), 4).unwrap()).doubly_holds());
            }
        }
    }
    let loops = CommutingPair::new(pair(Theta::identity(1, 1), &["b"], &[("b", 1, "b")], &[("b", 1, "b")])).unwrap();
    assert!(check_doubly_commute(&loops, 3).is_empty());
    // S is the identity on every T_1^k e_b, so it doubly commutes with T
    let s_loop = CommutingPair::new(pair(Theta::identity(1, 1), &["b"], &[("b", 1, "b")], &[])).unwrap();
    assert!(check_doubly_commute(&s_loop, 3).is_empty());
    assert!(verify_relations(&materialize_pair(s_loop.presentation(), 3).unwrap()).doubly_holds());
}

#[test]
fn doubly_check_matches_oracle() {
    for (m, n) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
        let thetas = Theta::all(m, n).unwrap();
        for pp in pair_presentations(2, &thetas).unwrap() {
            let Ok(cp) = CommutingPair::new(pp) else { continue };
            let symbolic = check_doubly_commute(&cp, 4).is_empty();
            let model = materialize_pair(cp.presentation(), 6).unwrap();
            assert_eq!(
                symbolic,
                verify_relations(&model).doubly_holds(),
                "{:?}",
                cp.presentation()
            );
        }
    }
}

#[test]
fn families_restrict_to_row_isometries() {
    for (m, n) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
        let thetas = Theta::all(m, n).unwrap();
        for pp in pair_presentations(2, &thetas).unwrap() {
            let Ok(cp) = CommutingPair::new(pp) else { continue };
            let elems = cp.enumerate(3);
            let mut s_images = HashSet::new();
            let mut t_images = HashSet::new();
            for x in &elems {
                assert!(cp.is_canonical(x));
                for i in 1..=m {
                    let y = cp.s_apply(i, x).unwrap();
                    assert!(cp.is_canonical(&y));
                    assert!(s_images.insert(y.clone()), "S-collision at {}", cp.display(&y));
                    assert_eq!(cp.s_pred(&y), Some((i, x.clone())));
                }
                for j in 1..=n {
                    let y = cp.t_apply(j, x).unwrap();
                    assert!(t_images.insert(y.clone()), "T-collision at {}", cp.display(&y));
                    assert_eq!(cp.t_pred(&y), Some((j, x.clone())));
                }
            }
        }
    }
}

#[test]
fn free_pair_grading_is_exact() {
    let cp = CommutingPair::new(PairPresentation::free(flip(), &["b"]).unwrap()).unwrap();
    for x in cp.enumerate(3) {
        for i in 1..=2 {
            let y = cp.s_apply(i, &x).unwrap();
            assert_eq!((y.s.len(), y.t.len()), (x.s.len() + 1, x.t.len()));
            let z = cp.t_apply(i, &x).unwrap();
            assert_eq!((z.s.len(), z.t.len()), (x.s.len(), x.t.len() + 1));
        }
    }
}

#[test]
fn reduction_order_is_irrelevant() {
    for (m, n) in [(1, 2), (2, 1), (2, 2)] {
        let thetas = Theta::all(m, n).unwrap();
        for pp in pair_presentations(1, &thetas).unwrap() {
            let Ok(cp) = CommutingPair::new(pp) else { continue };
            for t in [vec![], vec![1], vec![n, 1]] {
                for s in [vec![], vec![1], vec![m, 1]] {
                    for b in 0..cp.node_count() {
                        let all = cp.all_normal_forms(&t, &s, b);
                        assert_eq!(all.len(), 1);
                        assert!(all.contains(&cp.reduce_elem(&t, &s, b).unwrap()));
                    }
                }
            }
        }
    }
}

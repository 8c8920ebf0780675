use std::collections::{BTreeSet, HashSet};

use proptest::prelude::*;

use super::*;

fn sys(matrix: Vec<Vec<u32>>) -> CoxeterSystem {
    let labels = (0..matrix.len()).map(default_label).collect();
    CoxeterSystem::new(labels, matrix).unwrap()
}

fn a2() -> CoxeterSystem {
    CoxeterSystem::dihedral(3)
}

fn a3() -> CoxeterSystem {
    sys(vec![vec![1, 3, 2], vec![3, 1, 3], vec![2, 3, 1]])
}

fn h3() -> CoxeterSystem {
    sys(vec![vec![1, 5, 2], vec![5, 1, 3], vec![2, 3, 1]])
}

fn affine_a2() -> CoxeterSystem {
    sys(vec![vec![1, 3, 3], vec![3, 1, 3], vec![3, 3, 1]])
}

fn triangle_237() -> CoxeterSystem {
    sys(vec![vec![1, 2, 3], vec![2, 1, 7], vec![3, 7, 1]])
}

fn corpus() -> Vec<CoxeterSystem> {
    vec![
        CoxeterSystem::infinite_dihedral(),
        a2(),
        CoxeterSystem::dihedral(4),
        CoxeterSystem::dihedral(5),
        CoxeterSystem::dihedral(6),
        a3(),
        h3(),
        affine_a2(),
        CoxeterSystem::right_angled_cycle(4),
        CoxeterSystem::right_angled_cycle(5),
        CoxeterSystem::right_angled(3, &[]).unwrap(),
        triangle_237(),
    ]
}

/// Reduced form by closure under braid relations and `ss → ε` deletions
/// (Tits' solution of the word problem), taking the ShortLex least word.
fn rewriting_oracle(sys: &CoxeterSystem, word: &[u8]) -> Vec<u8> {
    let mut seen: HashSet<Vec<u8>> = HashSet::new();
    let mut stack = vec![word.to_vec()];
    seen.insert(word.to_vec());
    while let Some(w) = stack.pop() {
        let mut push = |v: Vec<u8>| {
            if seen.insert(v.clone()) {
                stack.push(v);
            }
        };
        for i in 0..w.len().saturating_sub(1) {
            if w[i] == w[i + 1] {
                let mut v = w.clone();
                v.drain(i..i + 2);
                push(v);
            }
        }
        for i in 0..w.len().saturating_sub(1) {
            let (s, t) = (w[i], w[i + 1]);
            let m = sys.m(s as usize, t as usize) as usize;
            if s == t || m == INFINITY as usize || i + m > w.len() {
                continue;
            }
            if (0..m).all(|k| w[i + k] == if k % 2 == 0 { s } else { t }) {
                let mut v = w.clone();
                for k in 0..m {
                    v[i + k] = if k % 2 == 0 { t } else { s };
                }
                push(v);
            }
        }
    }
    let min_len = seen.iter().map(Vec::len).min().unwrap();
    seen.into_iter().filter(|w| w.len() == min_len).min().unwrap()
}

fn all_words(rank: usize, max_len: usize) -> Vec<Vec<u8>> {
    let mut out = vec![vec![]];
    let mut layer = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for s in 0..rank as u8 {
                let mut v: Vec<u8> = w.clone();
                v.push(s);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

fn nf(sys: &CoxeterSystem, w: &[usize]) -> Vec<u8> {
    sys.normal_form(w).unwrap().word().to_vec()
}

#[test]
fn parse_examples() {
    let z2 = CoxeterSystem::parse(r#"{"generators":["s"],"matrix":[[1]]}"#).unwrap();
    assert_eq!(z2.rank(), 1);
    let dinf = CoxeterSystem::parse(r#"{"generators":["s","u"],"matrix":[[1,"inf"],[0,1]]}"#).unwrap();
    assert_eq!(dinf.m(0, 1), INFINITY);
    let sq = CoxeterSystem::parse(
        r#"{"generators":["a","b","c","d"],"matrix":[[1,2,0,2],[2,1,2,0],[0,2,1,2],[2,0,2,1]]}"#,
    )
    .unwrap();
    assert_eq!(sq.matrix(), CoxeterSystem::right_angled_cycle(4).matrix());
    assert!(sq.is_right_angled());
    assert_eq!(sq.mode(), ArithmeticMode::Exact);
    let round = CoxeterSystem::parse(&sq.to_json()).unwrap();
    assert_eq!(round.matrix(), sq.matrix());
    assert_eq!(round.content_hash(), sq.content_hash());
}

#[test]
fn parse_rejects_invalid() {
    for text in [
        r#"{"generators":["s","u"],"matrix":[[1,3],[2,1]]}"#,
        r#"{"generators":["s","u"],"matrix":[[2,3],[3,1]]}"#,
        r#"{"generators":["s","u"],"matrix":[[1,1],[1,1]]}"#,
        r#"{"generators":["s"],"matrix":[[1,2]]}"#,
        r#"{"generators":["s"]}"#,
        r#"not json"#,
        r#"{"generators":["s","u"],"matrix":[[1,-3],[-3,1]]}"#,
    ] {
        assert!(CoxeterSystem::parse(text).is_err(), "{text}");
    }
}

#[test]
fn approximate_mode_is_flagged() {
    assert_eq!(triangle_237().mode(), ArithmeticMode::Approximate);
    assert_eq!(h3().mode(), ArithmeticMode::Exact);
}

#[test]
fn normal_form_examples() {
    let dinf = CoxeterSystem::infinite_dihedral();
    assert!(nf(&dinf, &[0, 0]).is_empty());
    assert_eq!(nf(&dinf, &[0, 1, 0, 1, 0]), vec![0, 1, 0, 1, 0]);
    let sq = CoxeterSystem::right_angled_cycle(4);
    assert_eq!(nf(&sq, &[1, 0]), vec![0, 1]);
    assert_eq!(nf(&a2(), &[1, 0, 1]), vec![0, 1, 0]);
    assert!(matches!(dinf.normal_form(&[2]), Err(Error::GeneratorOutOfRange { .. })));
}

#[test]
fn normal_form_matches_rewriting_oracle() {
    for sys in corpus() {
        let max_len = if sys.rank() > 2 { 5 } else { 6 };
        for w in all_words(sys.rank(), max_len) {
            let word: Vec<usize> = w.iter().map(|&c| c as usize).collect();
            let got = nf(&sys, &word);
            assert_eq!(got, rewriting_oracle(&sys, &w), "{:?} on {:?}", w, sys.matrix());
            let again: Vec<usize> = got.iter().map(|&c| c as usize).collect();
            assert_eq!(nf(&sys, &again), got, "idempotence");
        }
    }
}

#[test]
fn ball_examples() {
    let dinf = CoxeterSystem::infinite_dihedral();
    assert_eq!(dinf.enumerate_ball(0).unwrap().len(), 1);
    assert_eq!(dinf.enumerate_ball(3).unwrap().profile(), vec![1, 2, 2, 2]);
    assert_eq!(CoxeterSystem::right_angled_cycle(4).enumerate_ball(2).unwrap().profile(), vec![1, 4, 8]);
    assert_eq!(a2().enumerate_ball(10).unwrap().profile(), vec![1, 2, 2, 1]);
    assert!(matches!(
        CoxeterSystem::right_angled(3, &[]).unwrap().enumerate_ball_capped(10, 100),
        Err(Error::ResourceCap(_))
    ));
}

#[test]
fn ball_is_sorted_and_indexed() {
    let sys = CoxeterSystem::right_angled_cycle(5);
    let ball = sys.enumerate_ball(4).unwrap();
    let all: Vec<_> = ball.iter().cloned().collect();
    assert!(all.windows(2).all(|p| p[0] < p[1]));
    for (i, w) in all.iter().enumerate() {
        assert_eq!(ball.index_of(w), Some(i));
    }
    let mut sizes = Vec::new();
    for r in 0..5 {
        sizes.push(sys.enumerate_ball(r).unwrap().len());
    }
    assert!(sizes.windows(2).all(|p| p[0] <= p[1]));
}

#[test]
fn spherical_subset_examples() {
    let dinf = CoxeterSystem::infinite_dihedral();
    let f = dinf.spherical_subsets().unwrap();
    assert_eq!(f.iter().map(|t| t.set).collect::<Vec<_>>(), vec![GenSet(0), GenSet(1), GenSet(2)]);
    assert_eq!(f[1].growth, crate::poly::Poly::from_ints(&[1, 1]));
    assert_eq!(CoxeterSystem::right_angled_cycle(4).spherical_subsets().unwrap().len(), 9);
    let f = a2().spherical_subsets().unwrap();
    assert_eq!(f.len(), 4);
    assert_eq!(f[3].growth, crate::poly::Poly::from_ints(&[1, 2, 2, 1]));
    assert_eq!(f[3].longest_length(), 3);
}

#[test]
fn classification_orders() {
    let orders = [
        (a3(), 24),
        (h3(), 120),
        (sys(vec![vec![1, 4, 2], vec![4, 1, 3], vec![2, 3, 1]]), 48),
        (CoxeterSystem::dihedral(6), 12),
    ];
    for (s, order) in orders {
        let t = s.all_generators();
        let sub = SphericalSubset { set: t, components: s.finite_type(t).unwrap(), growth: s.parabolic_growth(t).unwrap() };
        assert_eq!(sub.order(), order);
        assert!(sub.growth.is_palindromic());
    }
    // D4: central node joined to three leaves.
    let mut d4 = vec![vec![2u32; 4]; 4];
    for (i, row) in d4.iter_mut().enumerate() {
        row[i] = 1;
    }
    for leaf in 1..4 {
        d4[0][leaf] = 3;
        d4[leaf][0] = 3;
    }
    let d4 = sys(d4);
    assert_eq!(d4.finite_type(d4.all_generators()), Some(vec![FiniteType::D(4)]));
    assert_eq!(d4.parabolic_growth(d4.all_generators()).unwrap().eval_f64(1.0), 192.0);
    assert!(!affine_a2().is_spherical(affine_a2().all_generators()));
    assert!(!triangle_237().is_spherical(triangle_237().all_generators()));
}

#[test]
fn spherical_subsets_closed_under_subsets() {
    for sys in corpus() {
        let sets: BTreeSet<GenSet> = sys.spherical_subsets().unwrap().iter().map(|t| t.set).collect();
        for &t in &sets {
            for s in t.iter() {
                assert!(sets.contains(&t.remove(s)));
            }
        }
    }
}

#[test]
fn min_coset_rep_examples() {
    let dinf = CoxeterSystem::infinite_dihedral();
    let su = dinf.normal_form(&[0, 1]).unwrap();
    assert_eq!(dinf.min_coset_rep(&su, GenSet::singleton(1)).unwrap().word(), &[0]);
    assert!(dinf.min_coset_rep(&GroupElement::identity(), GenSet(3)).unwrap().is_identity());
    let sq = CoxeterSystem::right_angled_cycle(4);
    let ab = sq.normal_form(&[0, 1]).unwrap();
    assert!(sq.min_coset_rep(&ab, GenSet::from_indices(&[0, 1])).unwrap().is_identity());
}

#[test]
fn coset_decomposition_is_length_additive() {
    for sys in corpus() {
        let ball = sys.enumerate_ball(4).unwrap();
        for sub in sys.spherical_subsets().unwrap() {
            for w in ball.iter() {
                let (rep, u) = sys.coset_decompose(w, sub.set).unwrap();
                assert!(rep.len() <= w.len());
                assert_eq!(rep.len() + u.len(), w.len());
                assert!(u.letters().all(|s| sub.set.contains(s)));
                assert_eq!(&sys.multiply(&rep, &u).unwrap(), w);
                for s in sub.set.iter() {
                    assert!(!sys.is_right_descent(&rep, s).unwrap());
                }
            }
        }
    }
}

proptest! {
    #[test]
    fn right_angled_fast_path_agrees_with_reflection_route(
        word in proptest::collection::vec(0usize..5, 0..14)
    ) {
        let sys = CoxeterSystem::right_angled_cycle(5);
        prop_assert_eq!(sys.normal_form(&word).unwrap(), sys.reflection_normal_form(&word).unwrap());
    }

    #[test]
    fn inverse_and_multiply_are_consistent(
        a in proptest::collection::vec(0usize..3, 0..10),
        b in proptest::collection::vec(0usize..3, 0..10),
    ) {
        let sys = affine_a2();
        let x = sys.normal_form(&a).unwrap();
        let y = sys.normal_form(&b).unwrap();
        let xy = sys.multiply(&x, &y).unwrap();
        let back = sys.multiply(&xy, &sys.inverse(&y).unwrap()).unwrap();
        prop_assert_eq!(back, x.clone());
        prop_assert!(sys.multiply(&x, &sys.inverse(&x).unwrap()).unwrap().is_identity());
    }
}

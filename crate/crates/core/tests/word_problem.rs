use std::collections::HashMap;

use chamberlab::geometric::{GeometricRepresentation, Matrix};
use chamberlab::{CoxeterGroup, CoxeterMatrix, Elem, SubsetJ};
use proptest::prelude::*;

fn group(p: u64, q: u64, r: u64) -> CoxeterGroup {
    CoxeterGroup::new(CoxeterMatrix::triangle(p, q, r).unwrap())
}

fn all_words(rank: u8, max_len: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for s in 0..rank {
                let mut v = w.clone();
                v.push(s);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Canonical forms and matrices must induce the same partition of words, and
/// canonical lengths must be Cayley-graph distances.
fn check_against_matrices(g: &CoxeterGroup, max_len: usize) {
    let rep = GeometricRepresentation::new(g.matrix()).unwrap();
    let distances = rep.cayley_ball(max_len);
    let mut by_elem: HashMap<Elem, Matrix> = HashMap::new();
    let mut by_matrix: HashMap<Matrix, Elem> = HashMap::new();
    for w in all_words(g.rank() as u8, max_len) {
        let e = g.canonical(&w);
        let m = rep.word(&w);
        assert_eq!(e.len(), distances[&m], "length of {w:?}");
        assert_eq!(by_elem.entry(e.clone()).or_insert_with(|| m.clone()), &m, "{w:?}");
        assert_eq!(by_matrix.entry(m).or_insert(e.clone()), &e, "{w:?}");
    }
    assert_eq!(by_elem.len(), distances.len());
}

#[test]
fn canonical_forms_match_matrix_identification() {
    check_against_matrices(&group(4, 4, 4), 6);
    check_against_matrices(&group(3, 4, 5), 6);
    check_against_matrices(&group(3, 3, 3), 6);
    check_against_matrices(&group(2, 3, 5), 6);
}

#[test]
fn ball_sizes_of_444() {
    // sizes frozen from the matrix BFS
    let g = group(4, 4, 4);
    let rep = GeometricRepresentation::new(g.matrix()).unwrap();
    for r in 0..=5 {
        assert_eq!(g.ball(r).unwrap().len(), rep.cayley_ball(r).len(), "radius {r}");
    }
    assert_eq!(g.ball(2).unwrap().len(), 10);
    assert_eq!(g.ball(4).unwrap().len(), 43);
}

#[test]
fn documented_examples() {
    let g = group(4, 4, 4);
    let e = |s: &str| g.parse_elem(s).unwrap();
    assert_eq!(g.mul(&e("a"), &e("a")), Elem::identity());
    assert_eq!(g.mul(&e("a.b.a.b"), &Elem::identity()), g.mul(&e("b.a.b.a"), &Elem::identity()));
    assert_eq!(e("a.b.a").len(), 3);
    assert_eq!(g.mul(&e("a.b"), &e("b.a")).len(), 0);
    assert_eq!(g.format(&Elem::identity()), "");
    let b1: Vec<String> = g.ball(1).unwrap().iter().map(|w| g.format(w)).collect();
    assert_eq!(b1, ["", "a", "b", "c"]);
    assert_eq!(g.longest_element(SubsetJ::pair(0, 1)).unwrap(), e("a.b.a.b"));
    assert_eq!(group(3, 4, 4).longest_element(SubsetJ::pair(0, 1)).unwrap().len(), 3);
}

/// The cosine Gram matrix of a rank-3 diagram is positive definite exactly
/// for finite groups.
#[test]
fn sphericity_agrees_with_gram_determinant() {
    for (p, q, r) in [(4, 4, 4), (3, 4, 5), (2, 3, 5), (2, 3, 4), (2, 3, 3), (2, 2, 7), (3, 3, 3), (2, 4, 4), (2, 3, 6)] {
        let m = CoxeterMatrix::triangle(p, q, r).unwrap();
        let gram = GeometricRepresentation::gram_f64(&m);
        let det = gram[0][0] * (gram[1][1] * gram[2][2] - gram[1][2] * gram[2][1])
            - gram[0][1] * (gram[1][0] * gram[2][2] - gram[1][2] * gram[2][0])
            + gram[0][2] * (gram[1][0] * gram[2][1] - gram[1][1] * gram[2][0]);
        let finite = det > 1e-9;
        assert_eq!(m.is_spherical(SubsetJ::full(3)), finite, "({p},{q},{r}) det {det}");
    }
}

#[test]
fn exchange_condition_and_growth_past_rank_two_residues() {
    for (p, q, r) in [(4, 4, 4), (3, 4, 5)] {
        let g = group(p, q, r);
        for w in g.ball(6).unwrap() {
            for s in 0..3 {
                assert_eq!(g.right_mul_gen(&w, s).len().abs_diff(w.len()), 1);
            }
            for s in 0..3 {
                for t in 0..3 {
                    if s == t || g.is_right_descent(&w, s) || g.is_right_descent(&w, t) {
                        continue;
                    }
                    let rr = 3 - s - t;
                    for v in g.parabolic_elements(SubsetJ::pair(s, t)).unwrap() {
                        if v.len() >= 2 {
                            let x = g.right_mul_gen(&g.mul(&w, &v), rr);
                            assert_eq!(x.len(), w.len() + v.len() + 1);
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn longest_elements_of_dihedral_subgroups() {
    for (p, q, r) in [(4, 4, 4), (3, 4, 5), (2, 3, 6)] {
        let g = group(p, q, r);
        for (s, t) in [(0, 1), (0, 2), (1, 2)] {
            let j = SubsetJ::pair(s, t);
            let w0 = g.longest_element(j).unwrap();
            assert!(!j.iter().any(|x| !g.is_right_descent(&w0, x)));
            assert_eq!(w0.len() as u32, g.matrix().order(s, t).finite().unwrap());
        }
    }
}

fn word_strategy() -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0u8..3, 0..14)
}

proptest! {
    #[test]
    fn canonical_words_are_reduced_and_stable(w in word_strategy()) {
        let g = group(4, 4, 4);
        let rep = GeometricRepresentation::new(g.matrix()).unwrap();
        let e = g.canonical(&w);
        prop_assert!(e.len() <= w.len());
        prop_assert_eq!(e.len() % 2, w.len() % 2);
        prop_assert_eq!(g.canonical(e.word()), e.clone());
        prop_assert_eq!(rep.word(e.word()), rep.word(&w));
        prop_assert_eq!(g.parse_elem(&g.format(&e)).unwrap(), e);
    }

    #[test]
    fn group_laws(a in word_strategy(), b in word_strategy(), c in word_strategy()) {
        let g = group(3, 4, 5);
        let (x, y, z) = (g.canonical(&a), g.canonical(&b), g.canonical(&c));
        prop_assert_eq!(g.mul(&g.mul(&x, &y), &z), g.mul(&x, &g.mul(&y, &z)));
        prop_assert!(g.mul(&x, &g.inverse(&x)).is_identity());
        prop_assert_eq!(g.inverse(&x).len(), x.len());
        prop_assert!(g.mul(&x, &y).len() <= x.len() + y.len());
    }

    #[test]
    fn equal_matrices_iff_equal_canonical_forms(a in word_strategy(), b in word_strategy()) {
        let g = group(4, 4, 4);
        let rep = GeometricRepresentation::new(g.matrix()).unwrap();
        prop_assert_eq!(g.canonical(&a) == g.canonical(&b), rep.word(&a) == rep.word(&b));
    }
}

use std::collections::BTreeSet;

use chamberlab::building::{are_parallel, proj_image};
use chamberlab::{Building, CoxeterComplex, CoxeterMatrix, Elem, Residue, Root, Sign, SubsetJ};
use proptest::prelude::*;

fn complex(p: u64, q: u64, r: u64) -> CoxeterComplex {
    CoxeterComplex::from_matrix(CoxeterMatrix::triangle(p, q, r).unwrap())
}

fn e(cx: &CoxeterComplex, w: &str) -> Elem {
    cx.group().parse_elem(w).unwrap()
}

#[test]
fn residue_representatives_are_minimal_in_their_coset() {
    let cx = complex(4, 4, 4);
    let g = cx.group();
    let w = e(&cx, "a.b.c");
    let coset: Vec<Elem> = g
        .parabolic_elements(SubsetJ::pair(0, 1))
        .unwrap()
        .iter()
        .map(|u| g.mul(&w, u))
        .collect();
    assert_eq!(coset.len(), 8);
    let least = coset.iter().min().unwrap().clone();
    let r = cx.residue(SubsetJ::pair(0, 1), &w);
    assert_eq!(r.rep, least);
    assert_eq!(cx.format_residue(&r), "{a,b}@a.b.c");
    for u in g.parabolic_elements(SubsetJ::pair(0, 1)).unwrap() {
        assert_eq!(g.mul(&r.rep, &u).len(), r.rep.len() + u.len());
    }
}

#[test]
fn projection_of_one_rank_two_residue_onto_another() {
    let cx = complex(4, 4, 4);
    let rbc = cx.residue(SubsetJ::pair(1, 2), &Elem::identity());
    let rab = cx.residue(SubsetJ::pair(0, 1), &Elem::identity());
    let image = proj_image(&cx, &rbc, &rab).unwrap();
    assert_eq!(image, cx.residue(SubsetJ::singleton(1), &Elem::identity()));
    assert_eq!(cx.proj(&cx.residue(SubsetJ::singleton(0), &Elem::identity()), &e(&cx, "b")), Elem::identity());
}

#[test]
fn roots_from_chambers() {
    let cx = complex(4, 4, 4);
    assert_eq!(cx.root_from(&e(&cx, "a"), 0), Root::new(e(&cx, "a"), Sign::Minus));
    assert_eq!(cx.format_root(&cx.root_from(&e(&cx, "b"), 0)), "+:b.a.b");
    let alpha = cx.root_from(&e(&cx, "b"), 0);
    assert!(cx.wall_contains_panel(&alpha, &cx.residue(SubsetJ::singleton(0), &e(&cx, "b"))).unwrap());
    assert_eq!(cx.parse_root("+:b.a.b").unwrap(), alpha);
}

#[test]
fn interval_through_a_dihedral_residue() {
    let cx = complex(4, 4, 4);
    let (a, b) = (cx.simple_root(0), cx.simple_root(1));
    let interval = cx.interval(&a, &b, 4).unwrap();
    assert_eq!(interval.len(), 4);
    assert!(interval.contains(&a) && interval.contains(&b));
    // brute force over the eight roots through R_ab(1)
    let r = cx.residue(SubsetJ::pair(0, 1), &Elem::identity());
    let chambers = cx.chambers(&r).unwrap();
    let mut brute = Vec::new();
    for t in cx.residue_reflections(&r).unwrap() {
        for sign in [Sign::Plus, Sign::Minus] {
            let gamma = Root::new(t.clone(), sign);
            let meet: Vec<&Elem> = chambers.iter().filter(|c| cx.root_contains(&a, c) && cx.root_contains(&b, c)).collect();
            let neg: Vec<&Elem> = chambers.iter().filter(|c| !cx.root_contains(&a, c) && !cx.root_contains(&b, c)).collect();
            if meet.iter().all(|c| cx.root_contains(&gamma, c)) && neg.iter().all(|c| !cx.root_contains(&gamma, c)) {
                brute.push(gamma);
            }
        }
    }
    brute.sort();
    let mut got = interval.clone();
    got.sort();
    assert_eq!(got, brute);
    let open = cx.open_interval(&a, &b, 4).unwrap();
    assert_eq!(open.len(), 2);
    assert!(!open.contains(&a) && !open.contains(&b));
}

#[test]
fn walls_of_rank_two_residues_ignore_sign() {
    let cx = complex(4, 4, 4);
    for w in cx.ball(5).unwrap().iter() {
        for j in [SubsetJ::pair(0, 1), SubsetJ::pair(0, 2), SubsetJ::pair(1, 2)] {
            let r = cx.residue(j, w);
            for s in 0..3 {
                let alpha = cx.root_from(w, s);
                assert_eq!(
                    cx.wall2_contains_residue(&alpha, &r).unwrap(),
                    cx.wall2_contains_residue(&alpha.opposite(), &r).unwrap()
                );
            }
        }
    }
    let a = cx.simple_root(0);
    assert!(!cx.wall2_contains_residue(&a, &cx.residue(SubsetJ::pair(1, 2), &Elem::identity())).unwrap());
}

#[test]
fn parallel_criteria_agree_exhaustively_in_a_small_ball() {
    let cx = complex(4, 4, 4);
    let subsets: Vec<SubsetJ> = cx.matrix().spherical_subsets(2);
    let mut residues = BTreeSet::new();
    for w in cx.ball(3).unwrap().iter() {
        for &j in &subsets {
            residues.insert(cx.residue(j, w));
        }
    }
    let residues: Vec<Residue> = residues.into_iter().collect();
    let mut parallel_pairs = 0;
    for r in &residues {
        for t in &residues {
            if r.rank() != t.rank() || r.rank() == 0 {
                continue;
            }
            let by_projection = are_parallel(&cx, r, t).unwrap();
            assert_eq!(by_projection, cx.parallel_residues(r, t).unwrap(), "{r:?} {t:?}");
            if by_projection && r != t {
                parallel_pairs += 1;
                assert_eq!(r.rank(), 1, "distinct parallel rank-2 residues");
            }
        }
    }
    assert!(parallel_pairs > 0);
}

fn elem_strategy() -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0u8..3, 0..7)
}

proptest! {
    /// Root membership through the reflection agrees with the coset
    /// definition `v α_s = { v u : ℓ(s u) > ℓ(u) }`.
    #[test]
    fn roots_match_translated_simple_roots(v in elem_strategy(), u in elem_strategy(), s in 0usize..3) {
        let cx = complex(3, 4, 5);
        let g = cx.group();
        let (v, u) = (g.canonical(&v), g.canonical(&u));
        let alpha = cx.root_from(&v, s);
        let in_simple = g.left_mul_gen(s, &u).len() > u.len();
        prop_assert_eq!(cx.root_contains(&alpha, &g.mul(&v, &u)), in_simple);
        prop_assert_eq!(cx.root_contains(&alpha.opposite(), &g.mul(&v, &u)), !in_simple);
    }

    #[test]
    fn gate_property(c in elem_strategy(), w in elem_strategy(), bits in 0u32..8) {
        let cx = complex(4, 4, 4);
        let g = cx.group();
        let (c, w) = (g.canonical(&c), g.canonical(&w));
        let j = SubsetJ::from_bits(bits);
        prop_assume!(cx.matrix().is_spherical(j));
        let r = cx.residue(j, &w);
        let z = cx.proj(&r, &c);
        prop_assert!(cx.contains(&r, &z));
        for y in cx.chambers(&r).unwrap() {
            prop_assert_eq!(cx.length(&c, &y), cx.length(&c, &z) + cx.length(&z, &y));
        }
    }

    /// Minimal galleries cross each wall at most once.
    #[test]
    fn minimal_galleries_cross_walls_once(x in elem_strategy(), y in elem_strategy()) {
        let cx = complex(4, 4, 4);
        let g = cx.group();
        let (x, y) = (g.canonical(&x), g.canonical(&y));
        let gallery = cx.minimal_gallery(&x, &y);
        prop_assert_eq!(gallery.len(), cx.length(&x, &y) + 1);
        let mut walls = BTreeSet::new();
        for pair in gallery.windows(2) {
            let d = cx.delta(&pair[0], &pair[1]);
            prop_assert_eq!(d.len(), 1);
            let wall = cx.root_from(&pair[0], d.word()[0] as usize).reflection;
            prop_assert!(walls.insert(wall));
        }
    }

    #[test]
    fn roots_are_convex(v in elem_strategy(), s in 0usize..3, x in elem_strategy(), y in elem_strategy()) {
        let cx = complex(3, 4, 5);
        let g = cx.group();
        let alpha = cx.root_from(&g.canonical(&v), s);
        let (x, y) = (g.canonical(&x), g.canonical(&y));
        prop_assume!(cx.root_contains(&alpha, &x) && cx.root_contains(&alpha, &y));
        for z in cx.minimal_gallery(&x, &y) {
            prop_assert!(cx.root_contains(&alpha, &z));
        }
    }

    /// A panel lies on the wall of a root exactly when the reflection swaps
    /// its two chambers.
    #[test]
    fn walls_are_swapped_panels(v in elem_strategy(), s in 0usize..3, w in elem_strategy(), t in 0usize..3) {
        let cx = complex(4, 4, 4);
        let g = cx.group();
        let alpha = cx.root_from(&g.canonical(&v), s);
        let p = cx.residue(SubsetJ::singleton(t), &g.canonical(&w));
        let chambers: BTreeSet<Elem> = cx.chambers(&p).unwrap().into_iter().collect();
        let image: BTreeSet<Elem> = chambers.iter().map(|c| g.mul(&alpha.reflection, c)).collect();
        let swapped = image == chambers && chambers.iter().all(|c| g.mul(&alpha.reflection, c) != *c);
        prop_assert_eq!(cx.wall_contains_panel(&alpha, &p).unwrap(), swapped);
    }

    /// `c ∈ proj_R T` gives `proj_R(proj_T c) = c`, and the two images are
    /// parallel.
    #[test]
    fn projections_between_residues(w1 in elem_strategy(), w2 in elem_strategy(), j1 in 0usize..3, j2 in 0usize..3) {
        let cx = complex(3, 4, 5);
        let g = cx.group();
        let pairs = [SubsetJ::pair(0, 1), SubsetJ::pair(0, 2), SubsetJ::pair(1, 2)];
        let r = cx.residue(pairs[j1], &g.canonical(&w1));
        let t = cx.residue(pairs[j2], &g.canonical(&w2));
        let rt = proj_image(&cx, &t, &r).unwrap();
        for c in cx.chambers(&rt).unwrap() {
            prop_assert_eq!(cx.proj(&r, &cx.proj(&t, &c)), c);
        }
        let tr = proj_image(&cx, &r, &t).unwrap();
        prop_assert!(are_parallel(&cx, &rt, &tr).unwrap());
        prop_assert_eq!(cx.proj_residue_onto(&t, &r).unwrap(), rt);
    }
}

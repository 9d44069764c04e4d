use std::collections::BTreeSet;

use chamberlab::building::{are_parallel, proj_image};
use chamberlab::triangles::{
    combinatorial_triangle_check, concat_compatible, enumerate_reflection_triangles, find_compatible_path,
    is_compatible_path, is_reflection_triangle, is_triangle, orient_reflection_triangle, pairwise_projection_chamber,
    panel_graph_adjacent, panel_neighbors, reflections_of_triangle, sigma_triangle_from_reflection_triangle,
    triangle_from_combinatorial, triangle_intersection, Triangle, WallIndex,
};
use chamberlab::{Building, CoxeterComplex, CoxeterMatrix, Elem, Error, Residue, SubsetJ};

fn complex(p: u64, q: u64, r: u64) -> CoxeterComplex {
    CoxeterComplex::from_matrix(CoxeterMatrix::triangle(p, q, r).unwrap())
}

fn e(cx: &CoxeterComplex, w: &str) -> Elem {
    cx.group().parse_elem(w).unwrap()
}

fn panel(cx: &CoxeterComplex, s: usize, w: &str) -> Residue {
    cx.residue(SubsetJ::singleton(s), &e(cx, w))
}

fn rank2(cx: &CoxeterComplex, s: usize, t: usize, w: &str) -> Residue {
    cx.residue(SubsetJ::pair(s, t), &e(cx, w))
}

#[test]
fn panel_graph_adjacency() {
    let cx = complex(4, 4, 4);
    let pa = panel(&cx, 0, "");
    assert_eq!(panel_graph_adjacent(&cx, &pa, &pa).unwrap(), None);
    assert_eq!(panel_graph_adjacent(&cx, &pa, &panel(&cx, 1, "")).unwrap(), None);
    // the longest element of <a, b> is abab, so P_a(1) is opposite P_a(bab)
    let opposite = panel(&cx, 0, "b.a.b");
    assert_eq!(panel_graph_adjacent(&cx, &pa, &opposite).unwrap(), Some(rank2(&cx, 0, 1, "")));
    let neighbors: Vec<Residue> = panel_neighbors(&cx, &pa).unwrap().into_iter().map(|(q, _)| q).collect();
    assert_eq!(neighbors, vec![panel(&cx, 0, "b.a.b"), panel(&cx, 0, "c.a.c")]);
}

#[test]
fn compatibility_of_short_paths() {
    let cx = complex(4, 4, 4);
    let p0 = panel(&cx, 0, "");
    let p1 = panel(&cx, 0, "b.a.b");
    assert!(is_compatible_path(&cx, std::slice::from_ref(&p0)).unwrap());
    assert!(is_compatible_path(&cx, &[p0.clone(), p1.clone()]).unwrap());
    // a path that returns through the residue it came from
    let mut doubling_back = 0;
    for (q, _) in panel_neighbors(&cx, &p1).unwrap() {
        if !is_compatible_path(&cx, &[p0.clone(), p1.clone(), q.clone()]).unwrap() {
            doubling_back += 1;
            assert_eq!(panel_graph_adjacent(&cx, &p1, &q).unwrap(), Some(rank2(&cx, 0, 1, "")));
        }
    }
    assert_eq!(doubling_back, 1);
    let far = panel(&cx, 2, "a.b.c");
    assert!(matches!(is_compatible_path(&cx, &[p0, far]), Err(Error::NotAdjacent(_))));
}

/// Panels stabilized by the same reflection, found by scanning a ball.
fn parallel_partners(cx: &CoxeterComplex, p: &Residue, radius: usize) -> Vec<Residue> {
    let mut out = BTreeSet::new();
    for w in cx.ball(radius).unwrap().iter() {
        for s in 0..cx.group().rank() {
            let q = cx.residue(SubsetJ::singleton(s), w);
            if q != *p && cx.parallel_residues(p, &q).unwrap() {
                out.insert(q);
            }
        }
    }
    out.into_iter().collect()
}

#[test]
fn compatible_paths_join_exactly_the_parallel_panels() {
    let cx = complex(4, 4, 4);
    let p = panel(&cx, 0, "");
    assert_eq!(find_compatible_path(&cx, &p, &p, 0).unwrap(), Some(vec![p.clone()]));
    assert_eq!(find_compatible_path(&cx, &p, &panel(&cx, 1, ""), 10).unwrap(), None);
    let partners = parallel_partners(&cx, &p, 6);
    assert!(partners.len() >= 4);
    for q in &partners {
        let path = find_compatible_path(&cx, &p, q, 8).unwrap().expect("parallel panels are joined");
        assert_eq!((path.first(), path.last()), (Some(&p), Some(q)));
        assert!(is_compatible_path(&cx, &path).unwrap());
        let mut rev = path.clone();
        rev.reverse();
        assert!(is_compatible_path(&cx, &rev).unwrap());
        for k in 1..=path.len() {
            assert!(is_compatible_path(&cx, &path[..k]).unwrap());
        }
        let image: BTreeSet<Elem> = cx.chambers(&p).unwrap().iter().map(|x| cx.proj(q, x)).collect();
        assert_eq!(image.len(), 2);
    }
    assert!(matches!(
        find_compatible_path(&cx, &p, partners.last().unwrap(), 0),
        Err(Error::BudgetExceeded(0))
    ));
}

#[test]
fn concatenation_of_compatible_paths() {
    let cx = complex(4, 4, 4);
    let p = panel(&cx, 0, "");
    let q = parallel_partners(&cx, &p, 6).pop().unwrap();
    let path = find_compatible_path(&cx, &p, &q, 8).unwrap().unwrap();
    assert_eq!(concat_compatible(&cx, &path, &[]).unwrap(), path);
    assert_eq!(concat_compatible(&cx, &[], &path).unwrap(), path);

    // extend by one panel opposite the last one in a residue onto which the
    // first panel projects to the last
    let last = path.last().unwrap();
    let mut extensions = 0;
    for (next, r) in panel_neighbors(&cx, last).unwrap() {
        if proj_image(&cx, &p, &r).unwrap() != *last {
            continue;
        }
        extensions += 1;
        let joined = concat_compatible(&cx, &path, std::slice::from_ref(&next)).unwrap();
        assert!(is_compatible_path(&cx, &joined).unwrap());

        // a second path that turns straight back inside the junction residue
        let back = vec![next.clone(), last.clone()];
        assert!(is_compatible_path(&cx, &back).unwrap());
        assert!(matches!(concat_compatible(&cx, &path, &back), Err(Error::PreconditionFailed(_))));
        let raw: Vec<Residue> = path.iter().chain(&back).cloned().collect();
        assert!(!is_compatible_path(&cx, &raw).unwrap());

        // a second path that leaves the junction residue
        for (after, r2) in panel_neighbors(&cx, &next).unwrap() {
            if r2 != r {
                let joined = concat_compatible(&cx, &path, &[next.clone(), after]).unwrap();
                assert!(is_compatible_path(&cx, &joined).unwrap());
            }
        }
    }
    assert!(extensions > 0);
}

/// `P_r(1) ∥ P_u(st)` with `r ≠ s ≠ t ≠ u` forces `r = t`, `u = s` and
/// `m_st = 3`.
#[test]
fn parallel_panels_in_affine_a2_position() {
    let orders = [3u64, 4, 5, 6];
    let mut forced = 0;
    for &p in &orders {
        for &q in &orders {
            for &o in &orders {
                let cx = complex(p, q, o);
                let g = cx.group();
                for r in 0..3 {
                    for s in (0..3).filter(|&s| s != r) {
                        for t in (0..3).filter(|&t| t != s) {
                            for u in (0..3).filter(|&u| u != t) {
                                let pr = cx.residue(SubsetJ::singleton(r), &Elem::identity());
                                let st = g.mul(&g.generator(s), &g.generator(t));
                                let pu = cx.residue(SubsetJ::singleton(u), &st);
                                if are_parallel(&cx, &pr, &pu).unwrap() {
                                    assert!(r == t && u == s, "({p},{q},{o}) r={r} s={s} t={t} u={u}");
                                    assert_eq!(g.matrix().order(s, t).finite(), Some(3));
                                    forced += 1;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    assert!(forced > 0);
}

#[test]
fn the_simple_reflection_triangle() {
    let cx = complex(4, 4, 4);
    let idx = WallIndex::build(&cx, 4).unwrap();
    let rs = [e(&cx, "a"), e(&cx, "b"), e(&cx, "c")];
    assert!(is_reflection_triangle(&idx, &rs).unwrap());
    let roots = orient_reflection_triangle(&idx, &rs).unwrap();
    assert_eq!(roots.to_vec(), vec![cx.simple_root(0), cx.simple_root(1), cx.simple_root(2)]);
    assert!(combinatorial_triangle_check(&idx, &roots).unwrap());
    let flipped = [cx.simple_root(0), cx.simple_root(1), cx.simple_root(2).opposite()];
    assert!(!combinatorial_triangle_check(&idx, &flipped).unwrap());
    let degenerate = [cx.simple_root(0), cx.simple_root(0).opposite(), cx.simple_root(1)];
    assert!(!combinatorial_triangle_check(&idx, &degenerate).unwrap());

    let t = triangle_from_combinatorial(&idx, &roots).unwrap();
    let expected = Triangle::new([rank2(&cx, 0, 1, ""), rank2(&cx, 1, 2, ""), rank2(&cx, 0, 2, "")]);
    assert_eq!(t, expected);
    assert!(is_triangle(&cx, &t.residues).unwrap());
    assert_eq!(proj_image(&cx, &rank2(&cx, 1, 2, ""), &rank2(&cx, 0, 1, "")).unwrap(), panel(&cx, 1, ""));
    assert!(triangle_intersection(&cx, &t).unwrap().is_identity());
    for r in &t.residues {
        assert!(pairwise_projection_chamber(&cx, &t, r).unwrap().is_identity());
    }
    assert_eq!(sigma_triangle_from_reflection_triangle(&idx, &rs).unwrap(), t);
    assert_eq!(reflections_of_triangle(&cx, &t).unwrap(), rs.iter().cloned().collect());
}

#[test]
fn non_triangles_are_rejected() {
    let cx = complex(4, 4, 4);
    let (rab, rbc) = (rank2(&cx, 0, 1, ""), rank2(&cx, 1, 2, ""));
    assert!(!is_triangle(&cx, &[rab.clone(), rab.clone(), rbc.clone()]).unwrap());
    assert!(matches!(
        is_triangle(&cx, &[panel(&cx, 0, ""), rab.clone(), rbc.clone()]),
        Err(Error::Rank(_))
    ));

    // triples whose pairwise projections are panels but two of those panels
    // are parallel inside one member
    let mut residues = BTreeSet::new();
    for w in cx.ball(3).unwrap().iter() {
        for j in [SubsetJ::pair(0, 1), SubsetJ::pair(0, 2), SubsetJ::pair(1, 2)] {
            residues.insert(cx.residue(j, w));
        }
    }
    let residues: Vec<Residue> = residues.into_iter().collect();
    let rab_pos = residues.iter().position(|r| *r == rab).unwrap();
    let mut failing_t2 = 0;
    for j in 0..residues.len() {
        for k in j + 1..residues.len() {
            let trio = [residues[rab_pos].clone(), residues[j].clone(), residues[k].clone()];
            if j == rab_pos || k == rab_pos {
                continue;
            }
            let all_panels = (0..3).all(|x| {
                (0..3).filter(|&y| y != x).all(|y| proj_image(&cx, &trio[y], &trio[x]).unwrap().is_panel())
            });
            if all_panels && !is_triangle(&cx, &trio).unwrap() {
                failing_t2 += 1;
            }
        }
    }
    assert!(failing_t2 > 0);
}

#[test]
fn enumerated_triangles_meet_in_one_chamber() {
    for (p, q, r) in [(4, 4, 4), (3, 4, 5)] {
        let cx = complex(p, q, r);
        let idx = WallIndex::build(&cx, 4).unwrap();
        let found = enumerate_reflection_triangles(&idx).unwrap();
        assert!(found.len() > 1);
        for rs in &found {
            let t = sigma_triangle_from_reflection_triangle(&idx, rs).unwrap();
            let c = triangle_intersection(&cx, &t).unwrap();
            assert!(t.residues.iter().all(|r| cx.contains(r, &c)));
            for r in &t.residues {
                assert_eq!(pairwise_projection_chamber(&cx, &t, r).unwrap(), c);
            }
            let rebuilt: BTreeSet<Elem> = rs.iter().cloned().collect();
            assert_eq!(reflections_of_triangle(&cx, &t).unwrap(), rebuilt);
            // residue order does not matter
            let [x, y, z] = t.residues.clone();
            assert_eq!(triangle_intersection(&cx, &Triangle::new([z, x, y])).unwrap(), c);
        }
    }
}

#[test]
fn affine_a2_triples_are_refused() {
    let cx = complex(3, 3, 3);
    let t = Triangle::new([rank2(&cx, 0, 1, ""), rank2(&cx, 1, 2, ""), rank2(&cx, 0, 2, "")]);
    assert!(matches!(triangle_intersection(&cx, &t), Err(Error::Hypothesis(_))));
    let rank4 = CoxeterMatrix::from_orders(
        &["a", "b", "c", "d"],
        &[&[1, 3, 3, 4], &[3, 1, 3, 4], &[3, 3, 1, 4], &[4, 4, 4, 1]],
    )
    .unwrap();
    assert!(!rank4.is_a2tilde_free());
}

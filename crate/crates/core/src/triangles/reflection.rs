//! Reflection triangles and combinatorial triangles in the Coxeter complex.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde_json::json;

use super::{is_triangle, Triangle};
use crate::building::{self, Building, Residue};
use crate::coxeter::{Elem, SubsetJ};
use crate::error::{Error, Result};
use crate::thin::{CoxeterComplex, Root, Sign};

/// All spherical rank-2 residues with representative in a ball, indexed by
/// the reflections that stabilize them.
pub struct WallIndex<'a> {
    cx: &'a CoxeterComplex,
    radius: usize,
    residues: Vec<Residue>,
    by_reflection: HashMap<Elem, Vec<usize>>,
}

impl<'a> WallIndex<'a> {
    pub fn build(cx: &'a CoxeterComplex, radius: usize) -> Result<Self> {
        if !cx.matrix().is_two_dimensional() {
            return Err(Error::Hypothesis(
                "some standard subgroup of rank 3 is finite, so shared rank-2 walls need not be unique"
                    .into(),
            ));
        }
        let pairs: Vec<SubsetJ> = cx
            .matrix()
            .spherical_subsets(2)
            .into_iter()
            .filter(|j| j.len() == 2)
            .collect();
        let g = cx.group();
        let mut residues = Vec::new();
        let mut by_reflection: HashMap<Elem, Vec<usize>> = HashMap::new();
        for w in cx.ball(radius)?.iter() {
            let descents = g.right_descents(w);
            for &j in &pairs {
                if descents.bits() & j.bits() != 0 {
                    continue;
                }
                let r = Residue { typeset: j, rep: w.clone() };
                for t in cx.residue_reflections(&r)? {
                    by_reflection.entry(t).or_default().push(residues.len());
                }
                residues.push(r);
            }
        }
        Ok(WallIndex {
            cx,
            radius,
            residues,
            by_reflection,
        })
    }

    pub fn complex(&self) -> &CoxeterComplex {
        self.cx
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn residues(&self) -> &[Residue] {
        &self.residues
    }

    /// The residue stabilized by both reflections, if one lies in the ball.
    pub fn shared(&self, t1: &Elem, t2: &Elem) -> Result<Option<Residue>> {
        if t1 == t2 {
            let g = self.cx.group();
            return Err(Error::SameWall(g.format(t1), g.format(t2)));
        }
        let empty = Vec::new();
        let a = self.by_reflection.get(t1).unwrap_or(&empty);
        let b: BTreeSet<usize> = self.by_reflection.get(t2).unwrap_or(&empty).iter().copied().collect();
        let common: Vec<&Residue> = a.iter().filter(|i| b.contains(i)).map(|&i| &self.residues[i]).collect();
        match common.as_slice() {
            [] => Ok(None),
            [r] => Ok(Some((*r).clone())),
            _ => Err(Error::lemma(
                "at most one shared rank-2 wall residue",
                json!({
                    "reflections": [self.cx.group().format(t1), self.cx.group().format(t2)],
                    "residues": common.iter().map(|r| self.cx.format_residue(r)).collect::<Vec<_>>(),
                }),
            )),
        }
    }

    fn shared_or_inconclusive(&self, t1: &Elem, t2: &Elem) -> Result<Residue> {
        self.shared(t1, t2)?.ok_or_else(|| Error::BallInconclusive {
            radius: self.radius,
            detail: format!(
                "no shared rank-2 residue for {} and {}",
                self.cx.group().format(t1),
                self.cx.group().format(t2)
            ),
        })
    }
}

fn check_reflections(cx: &CoxeterComplex, rs: &[Elem]) -> Result<()> {
    for t in rs {
        if !cx.group().is_reflection(t) {
            return Err(Error::NotReflection(cx.group().format(t)));
        }
    }
    Ok(())
}

/// Pairwise shared residues `σ_k` of the other two reflections, in input order.
fn shared_residues(idx: &WallIndex, rs: &[Elem; 3]) -> Result<[Residue; 3]> {
    Ok([
        idx.shared_or_inconclusive(&rs[1], &rs[2])?,
        idx.shared_or_inconclusive(&rs[0], &rs[2])?,
        idx.shared_or_inconclusive(&rs[0], &rs[1])?,
    ])
}

fn as_triple(rs: &[Elem]) -> Option<[Elem; 3]> {
    let set: BTreeSet<&Elem> = rs.iter().collect();
    if rs.len() != 3 || set.len() != 3 {
        return None;
    }
    let v: Vec<Elem> = set.into_iter().cloned().collect();
    Some([v[0].clone(), v[1].clone(), v[2].clone()])
}

/// Three reflections whose walls pairwise meet in a rank-2 residue, with no
/// residue common to all three walls.
pub fn is_reflection_triangle(idx: &WallIndex, rs: &[Elem]) -> Result<bool> {
    check_reflections(idx.cx, rs)?;
    let Some(rs) = as_triple(rs) else {
        return Ok(false);
    };
    let [s0, s1, s2] = shared_residues(idx, &rs)?;
    Ok(!(s0 == s1 && s1 == s2))
}

/// Chooses for each reflection the side containing the residue shared by the
/// other two.
pub fn orient_reflection_triangle(idx: &WallIndex, rs: &[Elem]) -> Result<[Root; 3]> {
    if !is_reflection_triangle(idx, rs)? {
        return Err(Error::PreconditionFailed("not a reflection triangle".into()));
    }
    let rs = as_triple(rs).unwrap();
    let sigma = shared_residues(idx, &rs)?;
    let mut out = Vec::with_capacity(3);
    for k in 0..3 {
        let plus = Root::new(rs[k].clone(), Sign::Plus);
        let root = if idx.cx.residue_inside_root(&sigma[k], &plus)? {
            plus
        } else if idx.cx.residue_inside_root(&sigma[k], &plus.opposite())? {
            plus.opposite()
        } else {
            return Err(Error::lemma(
                "a residue off a wall lies on one side",
                json!({
                    "residue": idx.cx.format_residue(&sigma[k]),
                    "reflection": idx.cx.group().format(&rs[k]),
                }),
            ));
        };
        out.push(root);
    }
    Ok([out[0].clone(), out[1].clone(), out[2].clone()])
}

fn root_triple(roots: &[Root]) -> Option<[Root; 3]> {
    let walls: BTreeSet<&Elem> = roots.iter().map(|r| &r.reflection).collect();
    if roots.len() != 3 || walls.len() != 3 {
        return None;
    }
    Some([roots[0].clone(), roots[1].clone(), roots[2].clone()])
}

/// (CT1) the reflections form a reflection triangle and (CT2) each root
/// contains the residue shared by the other two walls.
pub fn combinatorial_triangle_check(idx: &WallIndex, roots: &[Root]) -> Result<bool> {
    let Some(roots) = root_triple(roots) else {
        return Ok(false);
    };
    let rs: Vec<Elem> = roots.iter().map(|r| r.reflection.clone()).collect();
    if !is_reflection_triangle(idx, &rs)? {
        return Ok(false);
    }
    for k in 0..3 {
        let (i, j) = ((k + 1) % 3, (k + 2) % 3);
        let sigma = idx.shared_or_inconclusive(&roots[i].reflection, &roots[j].reflection)?;
        if !idx.cx.residue_inside_root(&sigma, &roots[k])? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The triangle of pairwise shared residues of a combinatorial triangle.
/// The projection properties it must have are re-verified.
pub fn triangle_from_combinatorial(idx: &WallIndex, roots: &[Root]) -> Result<Triangle<Elem>> {
    if !combinatorial_triangle_check(idx, roots)? {
        return Err(Error::PreconditionFailed("not a combinatorial triangle".into()));
    }
    let cx = idx.cx;
    let roots = root_triple(roots).unwrap();
    let mut r = Vec::with_capacity(3);
    for k in 0..3 {
        let (i, j) = ((k + 1) % 3, (k + 2) % 3);
        r.push(idx.shared_or_inconclusive(&roots[i].reflection, &roots[j].reflection)?);
    }
    let fail = |what: &str| {
        Error::lemma(
            "combinatorial triangle yields triangle",
            json!({
                "roots": roots.iter().map(|a| cx.format_root(a)).collect::<Vec<_>>(),
                "residues": r.iter().map(|x| cx.format_residue(x)).collect::<Vec<_>>(),
                "failure": what,
            }),
        )
    };
    for i in 0..3 {
        for j in 0..3 {
            if i == j {
                continue;
            }
            let k = 3 - i - j;
            let p = building::proj_image(cx, &r[j], &r[i])?;
            if !p.is_panel() {
                return Err(fail("a pairwise projection is not a panel"));
            }
            if !cx.wall_contains_panel(&roots[k], &p)? {
                return Err(fail("a projection panel is off the third wall"));
            }
        }
    }
    for k in 0..3 {
        let (i, j) = ((k + 1) % 3, (k + 2) % 3);
        let pi = building::proj_image(cx, &r[i], &r[k])?;
        let pj = building::proj_image(cx, &r[j], &r[k])?;
        if cx.parallel_residues(&pi, &pj)? {
            return Err(fail("projection panels inside one residue are parallel"));
        }
    }
    Ok(Triangle::new([r[0].clone(), r[1].clone(), r[2].clone()]))
}

/// Orients a reflection triangle and returns its triangle of residues, which
/// is checked to satisfy (T1) and (T2).
pub fn sigma_triangle_from_reflection_triangle(idx: &WallIndex, rs: &[Elem]) -> Result<Triangle<Elem>> {
    let roots = orient_reflection_triangle(idx, rs)?;
    let t = triangle_from_combinatorial(idx, &roots)?;
    if !is_triangle(idx.cx, &t.residues)? {
        return Err(Error::lemma(
            "construction of triangles",
            json!({
                "reflections": rs.iter().map(|x| idx.cx.group().format(x)).collect::<Vec<_>>(),
                "residues": t.residues.iter().map(|x| idx.cx.format_residue(x)).collect::<Vec<_>>(),
            }),
        ));
    }
    Ok(t)
}

/// The reflections stabilizing the pairwise projection panels of a triangle.
/// Both panels `proj_Ri Rj` and `proj_Rj Ri` must give the same reflection.
pub fn reflections_of_triangle(cx: &CoxeterComplex, t: &Triangle<Elem>) -> Result<BTreeSet<Elem>> {
    let g = cx.group();
    let panel_reflection = |p: &Residue| -> Result<Elem> {
        let s = p
            .panel_type()
            .ok_or_else(|| Error::Rank(format!("{} is not a panel", cx.format_residue(p))))?;
        Ok(g.conjugate(&g.generator(s), &p.rep))
    };
    let mut out = BTreeSet::new();
    for i in 0..3 {
        for j in i + 1..3 {
            let a = panel_reflection(&building::proj_image(cx, &t.residues[j], &t.residues[i])?)?;
            let b = panel_reflection(&building::proj_image(cx, &t.residues[i], &t.residues[j])?)?;
            if a != b {
                return Err(Error::lemma(
                    "parallel projection panels share their wall",
                    json!({ "left": g.format(&a), "right": g.format(&b) }),
                ));
            }
            out.insert(a);
        }
    }
    Ok(out)
}

/// Every reflection triangle whose three shared residues lie in the index.
///
/// Residues are joined when they share a reflection; under the uniqueness
/// of shared residues that reflection is unique, and reflection triangles are
/// exactly the triangles of this graph with three distinct edge labels.
pub fn enumerate_reflection_triangles(idx: &WallIndex) -> Result<Vec<[Elem; 3]>> {
    let n = idx.residues.len();
    let mut edges: Vec<BTreeMap<usize, Elem>> = vec![BTreeMap::new(); n];
    for (t, list) in &idx.by_reflection {
        for (a, &i) in list.iter().enumerate() {
            for &j in &list[a + 1..] {
                if let Some(prev) = edges[i].insert(j, t.clone()) {
                    if prev != *t {
                        return Err(Error::lemma(
                            "at most one shared rank-2 wall residue",
                            json!({
                                "residues": [
                                    idx.cx.format_residue(&idx.residues[i]),
                                    idx.cx.format_residue(&idx.residues[j]),
                                ],
                            }),
                        ));
                    }
                }
                edges[j].insert(i, t.clone());
            }
        }
    }
    let mut out = BTreeSet::new();
    for i in 0..n {
        let higher: Vec<(&usize, &Elem)> = edges[i].range(i + 1..).collect();
        for (a, &(&j, tij)) in higher.iter().enumerate() {
            for &(&k, tik) in &higher[a + 1..] {
                if let Some(tjk) = edges[j].get(&k) {
                    if tij != tik && tij != tjk && tik != tjk {
                        let mut triple = [tij.clone(), tik.clone(), tjk.clone()];
                        triple.sort();
                        out.insert(triple);
                    }
                }
            }
        }
    }
    Ok(out.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::CoxeterMatrix;
    use crate::triangles::{pairwise_projection_chamber, triangle_intersection};

    fn sigma(p: u64, q: u64, r: u64) -> CoxeterComplex {
        CoxeterComplex::from_matrix(CoxeterMatrix::triangle(p, q, r).unwrap())
    }

    #[test]
    fn simple_triangle() {
        let cx = sigma(4, 4, 4);
        let idx = WallIndex::build(&cx, 2).unwrap();
        let g = cx.group();
        let abc: Vec<Elem> = (0..3).map(|s| g.generator(s)).collect();
        assert!(is_reflection_triangle(&idx, &abc).unwrap());
        let bab = g.parse_elem("b.a.b").unwrap();
        let degenerate = vec![g.generator(0), g.generator(1), bab];
        assert!(!is_reflection_triangle(&idx, &degenerate).unwrap());
        let repeated = vec![g.generator(0), g.generator(0), g.generator(1)];
        assert!(!is_reflection_triangle(&idx, &repeated).unwrap());
        assert!(matches!(
            is_reflection_triangle(&idx, &[g.generator(0), g.generator(1), g.parse_elem("a.b").unwrap()]),
            Err(Error::NotReflection(_))
        ));

        let roots = orient_reflection_triangle(&idx, &abc).unwrap();
        assert!(roots.iter().all(|r| r.sign == Sign::Plus));
        assert!(combinatorial_triangle_check(&idx, &roots).unwrap());
        let flipped = [roots[0].clone(), roots[1].clone(), roots[2].opposite()];
        assert!(!combinatorial_triangle_check(&idx, &flipped).unwrap());
        let same = [roots[0].clone(), roots[0].opposite(), roots[1].clone()];
        assert!(!combinatorial_triangle_check(&idx, &same).unwrap());

        let t = triangle_from_combinatorial(&idx, &roots).unwrap();
        let labels: Vec<String> = t.residues.iter().map(|r| cx.format_residue(r)).collect();
        assert_eq!(labels, vec!["{a,b}@", "{a,c}@", "{b,c}@"]);
        assert!(is_triangle(&cx, &t.residues).unwrap());
        assert!(triangle_intersection(&cx, &t).unwrap().is_identity());
        for r in &t.residues {
            assert!(pairwise_projection_chamber(&cx, &t, r).unwrap().is_identity());
        }
        let back = reflections_of_triangle(&cx, &t).unwrap();
        assert_eq!(back, abc.iter().cloned().collect());
        assert_eq!(sigma_triangle_from_reflection_triangle(&idx, &abc).unwrap(), t);
    }

    #[test]
    fn inconclusive_ball() {
        let cx = sigma(4, 4, 4);
        let idx = WallIndex::build(&cx, 0).unwrap();
        let g = cx.group();
        let far = g.parse_elem("c.b.a.b.c").unwrap();
        assert!(g.is_reflection(&far));
        let rs = vec![g.generator(0), g.generator(1), far];
        assert!(matches!(
            is_reflection_triangle(&idx, &rs),
            Err(Error::BallInconclusive { .. })
        ));
    }

    #[test]
    fn enumeration_finds_simple_triangle() {
        let cx = sigma(4, 4, 4);
        let idx = WallIndex::build(&cx, 2).unwrap();
        let found = enumerate_reflection_triangles(&idx).unwrap();
        let g = cx.group();
        let abc = [g.generator(0), g.generator(1), g.generator(2)];
        assert!(found.contains(&abc));
        for rs in &found {
            assert!(is_reflection_triangle(&idx, rs).unwrap());
        }
    }

    #[test]
    fn affine_a2_is_refused() {
        let cx = sigma(3, 3, 3);
        let idx = WallIndex::build(&cx, 2).unwrap();
        let g = cx.group();
        let abc = [g.generator(0), g.generator(1), g.generator(2)];
        let t = sigma_triangle_from_reflection_triangle(&idx, &abc).unwrap();
        assert!(matches!(triangle_intersection(&cx, &t), Err(Error::Hypothesis(_))));
    }
}

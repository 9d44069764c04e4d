//! Compatible paths of panels and triangles of rank-2 residues, over any
//! [`Building`].

mod reflection;

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde_json::{json, Value};

use crate::building::{self, Building, Residue};
use crate::error::{Error, Result};

pub use reflection::{
    combinatorial_triangle_check, enumerate_reflection_triangles, is_reflection_triangle,
    orient_reflection_triangle, reflections_of_triangle, sigma_triangle_from_reflection_triangle,
    triangle_from_combinatorial, WallIndex,
};

/// Panels `(Q, R(P, Q))` adjacent to `p` in the panel graph.
pub fn panel_neighbors<B: Building>(
    b: &B,
    p: &Residue<B::Chamber>,
) -> Result<Vec<(Residue<B::Chamber>, Residue<B::Chamber>)>> {
    let s = panel_type(b, p)?;
    let g = b.group();
    let mut out = BTreeSet::new();
    for t in 0..g.rank() {
        if t == s {
            continue;
        }
        let j = crate::SubsetJ::pair(s, t);
        if !g.matrix().is_spherical(j) {
            continue;
        }
        let r = b.residue(j, &p.rep);
        let longest = g.longest_element(j)?;
        // The panel opposite to an s-panel has type r_J s r_J.
        let opposite_type = g.conjugate(&g.generator(s), &longest).word()[0] as usize;
        let r_chambers = b.chambers(&r)?;
        let mut candidates = BTreeSet::new();
        for x in b.chambers(p)? {
            for y in &r_chambers {
                if b.delta(&x, y) == longest {
                    candidates.insert(b.residue(crate::SubsetJ::singleton(opposite_type), y));
                }
            }
        }
        for q in candidates {
            if building::opposite_in(b, p, &q, &r)? {
                out.insert((q, r.clone()));
            }
        }
    }
    Ok(out.into_iter().collect())
}

fn panel_type<B: Building>(b: &B, p: &Residue<B::Chamber>) -> Result<usize> {
    p.panel_type()
        .ok_or_else(|| Error::Rank(format!("{} is not a panel", b.residue_label(p))))
}

/// `R(P, Q)`: the rank-2 residue in which `p` and `q` are opposite.
pub fn panel_graph_adjacent<B: Building>(
    b: &B,
    p: &Residue<B::Chamber>,
    q: &Residue<B::Chamber>,
) -> Result<Option<Residue<B::Chamber>>> {
    panel_type(b, q)?;
    if p == q {
        return Ok(None);
    }
    Ok(panel_neighbors(b, p)?
        .into_iter()
        .find(|(x, _)| x == q)
        .map(|(_, r)| r))
}

/// Whether `proj_{R(P_{i-1}, P_i)} P_0 = P_{i-1}` along the whole path.
pub fn is_compatible_path<B: Building>(b: &B, path: &[Residue<B::Chamber>]) -> Result<bool> {
    let Some(first) = path.first() else {
        return Ok(true);
    };
    for pair in path.windows(2) {
        let r = panel_graph_adjacent(b, &pair[0], &pair[1])?.ok_or_else(|| {
            Error::NotAdjacent(format!(
                "{} and {}",
                b.residue_label(&pair[0]),
                b.residue_label(&pair[1])
            ))
        })?;
        if building::proj_image(b, first, &r)? != pair[0] {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Breadth-first search for a compatible path from `p` to `q` with at most
/// `budget` steps. Returns `None` when the panels are not parallel.
pub fn find_compatible_path<B: Building>(
    b: &B,
    p: &Residue<B::Chamber>,
    q: &Residue<B::Chamber>,
    budget: usize,
) -> Result<Option<Vec<Residue<B::Chamber>>>> {
    panel_type(b, p)?;
    panel_type(b, q)?;
    if p == q {
        return Ok(Some(vec![p.clone()]));
    }
    if !building::are_parallel(b, p, q)? {
        return Ok(None);
    }
    // Compatibility of the next step depends only on the first and last
    // panels, so searching over last panels is enough.
    let mut parent: HashMap<Residue<B::Chamber>, Residue<B::Chamber>> = HashMap::new();
    let mut frontier = VecDeque::from([p.clone()]);
    let mut seen = BTreeSet::from([p.clone()]);
    for _ in 0..budget {
        let mut next = VecDeque::new();
        for x in &frontier {
            for (y, r) in panel_neighbors(b, x)? {
                if seen.contains(&y) || building::proj_image(b, p, &r)? != *x {
                    continue;
                }
                seen.insert(y.clone());
                parent.insert(y.clone(), x.clone());
                if y == *q {
                    let mut path = vec![y];
                    while let Some(prev) = parent.get(path.last().unwrap()) {
                        path.push(prev.clone());
                    }
                    path.reverse();
                    return Ok(Some(path));
                }
                next.push_back(y);
            }
        }
        if next.is_empty() {
            return Err(Error::lemma(
                "parallel panels are joined by a compatible path",
                json!({ "from": b.residue_label(p), "to": b.residue_label(q) }),
            ));
        }
        frontier = next;
    }
    Err(Error::BudgetExceeded(budget))
}

/// Concatenates two compatible paths whose junction panels are opposite in a
/// rank-2 residue onto which the first panel projects to the junction. The
/// second path must leave that residue with its first step.
pub fn concat_compatible<B: Building>(
    b: &B,
    first: &[Residue<B::Chamber>],
    second: &[Residue<B::Chamber>],
) -> Result<Vec<Residue<B::Chamber>>> {
    if second.is_empty() {
        return Ok(first.to_vec());
    }
    if first.is_empty() {
        return Ok(second.to_vec());
    }
    if !b.group().matrix().is_two_complete() {
        return Err(Error::PreconditionFailed("the type is not 2-complete".into()));
    }
    if !is_compatible_path(b, first)? || !is_compatible_path(b, second)? {
        return Err(Error::PreconditionFailed("inputs must be compatible paths".into()));
    }
    let last = first.last().unwrap();
    let r = panel_graph_adjacent(b, last, &second[0])?.ok_or_else(|| {
        Error::PreconditionFailed(format!(
            "{} and {} are not opposite in a rank-2 residue",
            b.residue_label(last),
            b.residue_label(&second[0])
        ))
    })?;
    if building::proj_image(b, &first[0], &r)? != *last {
        return Err(Error::PreconditionFailed(format!(
            "the first panel does not project onto {}",
            b.residue_label(last)
        )));
    }
    // A second path whose first step stays inside `r` turns back at the
    // junction, and the concatenation is never compatible.
    if let Some(next) = second.get(1) {
        if panel_graph_adjacent(b, &second[0], next)?.as_ref() == Some(&r) {
            return Err(Error::PreconditionFailed(format!(
                "the second path turns back inside {}",
                b.residue_label(&r)
            )));
        }
    }
    let joined: Vec<_> = first.iter().chain(second).cloned().collect();
    if !is_compatible_path(b, &joined)? {
        return Err(Error::lemma(
            "concatenation of compatible paths",
            json!({ "path": joined.iter().map(|p| b.residue_label(p)).collect::<Vec<_>>() }),
        ));
    }
    Ok(joined)
}

/// Three rank-2 residues, kept sorted so that the triangle is a set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triangle<C> {
    pub residues: [Residue<C>; 3],
}

impl<C: Ord + Clone> Triangle<C> {
    pub fn new(mut residues: [Residue<C>; 3]) -> Self {
        residues.sort();
        Triangle { residues }
    }

    pub fn others(&self, r: &Residue<C>) -> Option<(&Residue<C>, &Residue<C>)> {
        let i = self.residues.iter().position(|x| x == r)?;
        let rest: Vec<&Residue<C>> = (0..3).filter(|&k| k != i).map(|k| &self.residues[k]).collect();
        Some((rest[0], rest[1]))
    }
}

pub fn triangle_labels<B: Building>(b: &B, t: &Triangle<B::Chamber>) -> Vec<String> {
    t.residues.iter().map(|r| b.residue_label(r)).collect()
}

/// (T1) pairwise projections are panels and (T2) the two projection panels
/// inside each member are not parallel.
pub fn is_triangle<B: Building>(b: &B, residues: &[Residue<B::Chamber>]) -> Result<bool> {
    for r in residues {
        if r.rank() != 2 {
            return Err(Error::Rank(format!("{} does not have rank 2", b.residue_label(r))));
        }
        if !b.group().matrix().is_spherical(r.typeset) {
            return Err(Error::NotSpherical(b.group().matrix().format_subset(r.typeset)));
        }
    }
    let distinct: BTreeSet<_> = residues.iter().collect();
    if residues.len() != 3 || distinct.len() != 3 {
        return Ok(false);
    }
    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        let pj = building::proj_image(b, &residues[j], &residues[i])?;
        let pk = building::proj_image(b, &residues[k], &residues[i])?;
        if !pj.is_panel() || !pk.is_panel() {
            return Ok(false);
        }
        if building::are_parallel(b, &pj, &pk)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn witness<B: Building>(b: &B, t: &Triangle<B::Chamber>) -> Value {
    let mut residues = Vec::new();
    for r in &t.residues {
        let chambers: Vec<String> = b
            .chambers(r)
            .map(|cs| cs.iter().map(|c| b.chamber_label(c)).collect())
            .unwrap_or_default();
        residues.push(json!({ "residue": b.residue_label(r), "chambers": chambers }));
    }
    let mut projections = Vec::new();
    for r in &t.residues {
        for q in &t.residues {
            if r == q {
                continue;
            }
            let image = match building::proj_image(b, q, r) {
                Ok(p) => {
                    let chambers: Vec<String> = b
                        .chambers(&p)
                        .map(|cs| cs.iter().map(|c| b.chamber_label(c)).collect())
                        .unwrap_or_default();
                    json!({ "residue": b.residue_label(&p), "chambers": chambers })
                }
                Err(e) => json!({ "error": e.to_string() }),
            };
            projections.push(json!({
                "onto": b.residue_label(r),
                "from": b.residue_label(q),
                "image": image,
            }));
        }
    }
    json!({ "residues": residues, "projections": projections })
}

fn require_hypotheses<B: Building>(b: &B, need_a2tilde_free: bool) -> Result<()> {
    let m = b.group().matrix();
    if !m.is_two_complete() {
        return Err(Error::Hypothesis("the type is not 2-complete".into()));
    }
    if need_a2tilde_free && !m.is_a2tilde_free() {
        return Err(Error::Hypothesis("the type contains an affine A2 triple".into()));
    }
    Ok(())
}

/// The unique chamber of `proj_R P ∩ proj_R Q`, where `{P, Q}` are the other
/// two members of the triangle.
pub fn pairwise_projection_chamber<B: Building>(
    b: &B,
    t: &Triangle<B::Chamber>,
    r: &Residue<B::Chamber>,
) -> Result<B::Chamber> {
    require_hypotheses(b, false)?;
    let (p, q) = t.others(r).ok_or_else(|| {
        Error::PreconditionFailed(format!("{} is not in the triangle", b.residue_label(r)))
    })?;
    let pp = building::proj_image(b, p, r)?;
    let pq = building::proj_image(b, q, r)?;
    let common = building::intersection(b, &pp, &pq)?;
    match common.as_slice() {
        [c] => Ok(c.clone()),
        _ => {
            let mut w = witness(b, t);
            w["residue"] = json!(b.residue_label(r));
            w["intersection"] = json!(common.iter().map(|c| b.chamber_label(c)).collect::<Vec<_>>());
            Err(Error::theorem("intersection of two projections is a chamber", w))
        }
    }
}

/// The unique chamber of `R1 ∩ R2 ∩ R3`.
pub fn triangle_intersection<B: Building>(b: &B, t: &Triangle<B::Chamber>) -> Result<B::Chamber> {
    require_hypotheses(b, true)?;
    if !is_triangle(b, &t.residues)? {
        return Err(Error::PreconditionFailed(format!(
            "{:?} is not a triangle",
            triangle_labels(b, t)
        )));
    }
    let sizes: Vec<usize> = t
        .residues
        .iter()
        .map(|r| b.chambers(r).map(|c| c.len()))
        .collect::<Result<_>>()?;
    let smallest = (0..3).min_by_key(|&i| sizes[i]).unwrap();
    let common: Vec<B::Chamber> = b
        .chambers(&t.residues[smallest])?
        .into_iter()
        .filter(|c| t.residues.iter().all(|r| b.contains(r, c)))
        .collect();
    match common.as_slice() {
        [c] => Ok(c.clone()),
        _ => {
            let mut w = witness(b, t);
            w["intersection"] = json!(common.iter().map(|c| b.chamber_label(c)).collect::<Vec<_>>());
            Err(Error::theorem("triangle contains a unique chamber", w))
        }
    }
}

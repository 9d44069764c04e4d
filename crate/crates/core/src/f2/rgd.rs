//! Root group data of `A2(2)` and `B2(2)` acting on flags, and the axiom
//! checker.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::flag::FlagBuilding;
use super::geometry::{duads, IncidenceGeometry};
use super::perm::{Perm, PermGroup};
use crate::building::Building;
use crate::coxeter::{Elem, SubsetJ};
use crate::error::{Error, Result};
use crate::thin::{CoxeterComplex, Root, Sign};

/// A linear map of `GF(2)^n` given by the images of the basis vectors.
/// Vectors are bitmasks.
#[derive(Clone, Debug, PartialEq, Eq)]
struct F2Map(Vec<u8>);

impl F2Map {
    /// `x ↦ x + N x` where `N` sends basis vector `from` to `to` for each
    /// pair and kills the others.
    fn unipotent(n: usize, pairs: &[(usize, usize)]) -> Self {
        let mut cols: Vec<u8> = (0..n).map(|i| 1 << i).collect();
        for &(from, to) in pairs {
            cols[from] ^= 1 << to;
        }
        F2Map(cols)
    }

    fn apply(&self, v: u8) -> u8 {
        self.0
            .iter()
            .enumerate()
            .filter(|(i, _)| v >> i & 1 == 1)
            .fold(0, |acc, (_, c)| acc ^ c)
    }
}

/// Chamber permutation induced by a point permutation, mapping each line to
/// the line through the image points.
fn flag_permutation(g: &IncidenceGeometry, point_map: &[usize]) -> Result<Perm> {
    let line_points: Vec<BTreeSet<usize>> = (0..g.num_lines())
        .map(|l| g.points_on(l).into_iter().collect())
        .collect();
    let by_points: BTreeMap<&BTreeSet<usize>, usize> =
        line_points.iter().enumerate().map(|(l, pts)| (pts, l)).collect();
    let mut line_map = Vec::with_capacity(g.num_lines());
    for pts in &line_points {
        let image: BTreeSet<usize> = pts.iter().map(|&p| point_map[p]).collect();
        let l = by_points.get(&image).ok_or_else(|| {
            Error::Construction("point map does not preserve lines".into())
        })?;
        line_map.push(*l);
    }
    let images = g
        .flags()
        .iter()
        .map(|&(p, l)| {
            g.flag_index((point_map[p], line_map[l]))
                .map(|i| i as u32)
                .ok_or_else(|| Error::Construction("image of a flag is not a flag".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    Perm::from_images(images).ok_or_else(|| Error::Construction("flag map is not a bijection".into()))
}

/// Which rank-2 group a datum realizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DatumKind {
    A2,
    B2,
}

/// A building with a fundamental apartment, its two fundamental opposite
/// chambers, and one root group per root of the apartment.
#[derive(Debug)]
pub struct RootGroupDatum {
    kind: DatumKind,
    building: FlagBuilding,
    complex: CoxeterComplex,
    apartment: Vec<usize>,
    chamber_of: BTreeMap<Elem, usize>,
    c_plus: usize,
    c_minus: usize,
    roots: Vec<Root>,
    root_groups: Vec<PermGroup>,
}

/// `A2(2)`: the Fano plane with the six elementary matrices `I + E_ij`.
/// The fundamental chambers are `(<e1>, <e1,e2>)` and `(<e3>, <e2,e3>)`.
pub fn root_group_datum_a2(b: FlagBuilding) -> Result<RootGroupDatum> {
    let g = b.geometry();
    if b.gonality() != 3 || g.num_points() != 7 || g.num_lines() != 7 {
        return Err(Error::PreconditionFailed("expected the Fano plane with gonality 3".into()));
    }
    // point id v - 1 for the vector v, line id u - 1 for the dual vector u
    let mut generators = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            if i != j {
                let f = F2Map::unipotent(3, &[(j, i)]);
                let point_map: Vec<usize> = (1..8u8).map(|v| f.apply(v) as usize - 1).collect();
                generators.push(flag_permutation(g, &point_map)?);
            }
        }
    }
    let flag = |v: usize, u: usize| {
        g.flag_index((v - 1, u - 1))
            .ok_or_else(|| Error::Construction("fundamental flag missing".into()))
    };
    let c_plus = flag(0b001, 0b100)?;
    let c_minus = flag(0b100, 0b001)?;
    RootGroupDatum::assemble(DatumKind::A2, b, c_plus, c_minus, generators)
}

/// Basis order for `B2(2)`: `e1, e2, f1, f2`, with form
/// `x1 y3 + x3 y1 + x2 y4 + x4 y2`.
const E1: usize = 0;
const E2: usize = 1;
const F1: usize = 2;
const F2: usize = 3;

fn symplectic_form(x: u8, y: u8) -> u8 {
    let bit = |v: u8, i: usize| v >> i & 1;
    (bit(x, E1) & bit(y, F1)) ^ (bit(x, F1) & bit(y, E1)) ^ (bit(x, E2) & bit(y, F2)) ^ (bit(x, F2) & bit(y, E2))
}

/// Nonzero vectors of the symplectic space as duads: even subsets of six
/// letters modulo the full set. The basis is `e1 = {0,1}`, `e2 = {3,4}`,
/// `f1 = {0,2}`, `f2 = {3,5}`; orthogonality is even intersection.
fn duad_of_vector(v: u8) -> usize {
    let basis: [u8; 4] = [0b000011, 0b011000, 0b000101, 0b101000];
    let mut set = basis
        .iter()
        .enumerate()
        .filter(|(i, _)| v >> i & 1 == 1)
        .fold(0u8, |acc, (_, m)| acc ^ m);
    if set.count_ones() == 4 {
        set ^= 0b111111;
    }
    let letters: Vec<usize> = (0..6).filter(|i| set >> i & 1 == 1).collect();
    duads()
        .iter()
        .position(|&(a, b)| letters == [a, b])
        .expect("nonzero vectors correspond to duads")
}

/// `B2(2)`: the doily with long and short root elements of `Sp4(2)`.
/// The fundamental chambers are `(<e1>, <e1,e2>)` and `(<f1>, <f1,f2>)`.
pub fn root_group_datum_b2(b: FlagBuilding) -> Result<RootGroupDatum> {
    let g = b.geometry();
    if b.gonality() != 4 || g.num_points() != 15 || g.num_lines() != 15 {
        return Err(Error::PreconditionFailed("expected the doily with gonality 4".into()));
    }
    let vector_of: BTreeMap<usize, u8> = (1..16u8).map(|v| (duad_of_vector(v), v)).collect();
    if vector_of.len() != 15 {
        return Err(Error::Construction("vectors and duads do not match up".into()));
    }
    let maps: Vec<F2Map> = [
        &[(F1, E1)][..],
        &[(F2, E2)],
        &[(E1, F1)],
        &[(E2, F2)],
        &[(E2, E1), (F1, F2)],
        &[(E1, E2), (F2, F1)],
        &[(F2, E1), (F1, E2)],
        &[(E1, F2), (E2, F1)],
    ]
    .iter()
    .map(|pairs| F2Map::unipotent(4, pairs))
    .collect();
    let mut generators = Vec::new();
    for f in &maps {
        let preserves = (1..16u8).all(|x| (1..16u8).all(|y| symplectic_form(f.apply(x), f.apply(y)) == symplectic_form(x, y)));
        if !preserves {
            return Err(Error::Construction(format!("{f:?} does not preserve the form")));
        }
        let point_map: Vec<usize> = (0..15)
            .map(|p| duad_of_vector(f.apply(vector_of[&p])))
            .collect();
        generators.push(flag_permutation(g, &point_map)?);
    }
    let line_through = |x: u8, y: u8| -> Result<usize> {
        let (px, py) = (duad_of_vector(x), duad_of_vector(y));
        let lx: BTreeSet<usize> = g.lines_through(px).into_iter().collect();
        g.lines_through(py)
            .into_iter()
            .find(|l| lx.contains(l))
            .ok_or_else(|| Error::Construction("basis vectors are not collinear".into()))
    };
    let flag = |x: u8, y: u8| -> Result<usize> {
        g.flag_index((duad_of_vector(x), line_through(x, y)?))
            .ok_or_else(|| Error::Construction("fundamental flag missing".into()))
    };
    let c_plus = flag(1 << E1, 1 << E2)?;
    let c_minus = flag(1 << F1, 1 << F2)?;
    RootGroupDatum::assemble(DatumKind::B2, b, c_plus, c_minus, generators)
}

impl RootGroupDatum {
    fn assemble(
        kind: DatumKind,
        building: FlagBuilding,
        c_plus: usize,
        c_minus: usize,
        candidates: Vec<Perm>,
    ) -> Result<Self> {
        let m = building.gonality();
        let group = building.group().clone();
        let longest = group.longest_element(SubsetJ::full(2))?;
        if building.delta(&c_plus, &c_minus) != longest {
            return Err(Error::Construction("fundamental chambers are not opposite".into()));
        }
        let mut chamber_of = BTreeMap::new();
        for x in 0..building.num_chambers() {
            let (a, b) = (building.distance(c_plus, x), building.distance(x, c_minus));
            if a.zip(b).is_some_and(|(a, b)| a + b == m) {
                let w = building.delta(&c_plus, &x);
                if chamber_of.insert(w, x).is_some() {
                    return Err(Error::Construction("convex hull of c+ and c- is not thin".into()));
                }
            }
        }
        if chamber_of.len() != 2 * m {
            return Err(Error::Construction(format!(
                "convex hull of c+ and c- has {} chambers, expected {}",
                chamber_of.len(),
                2 * m
            )));
        }
        let mut apartment = vec![c_plus];
        let mut w = Elem::identity();
        for i in 0..2 * m - 1 {
            w = group.right_mul_gen(&w, i % 2);
            apartment.push(chamber_of[&w]);
        }

        let complex = CoxeterComplex::new(group.clone());
        let mut roots: Vec<Root> = group
            .parabolic_reflections(SubsetJ::full(2))?
            .into_iter()
            .flat_map(|t| [Root::new(t.clone(), Sign::Plus), Root::new(t, Sign::Minus)])
            .collect();
        roots.sort();

        let mut datum = RootGroupDatum {
            kind,
            building,
            complex,
            apartment,
            chamber_of,
            c_plus,
            c_minus,
            roots,
            root_groups: Vec::new(),
        };
        let n = datum.building.num_chambers();
        let ambient = PermGroup::new(n, candidates.clone());
        let mut used = BTreeSet::new();
        for alpha in datum.roots.clone() {
            let fixed = datum.interior_chambers(&alpha);
            let matching: Vec<usize> = (0..candidates.len())
                .filter(|&i| fixed.iter().all(|&x| candidates[i].fixes(x)))
                .collect();
            let [i] = matching[..] else {
                return Err(Error::Construction(format!(
                    "{} candidate root elements fix the interior of {}",
                    matching.len(),
                    datum.complex.format_root(&alpha)
                )));
            };
            if !used.insert(i) || candidates[i].order() != 2 {
                return Err(Error::Construction(format!(
                    "root element for {} is reused or not an involution",
                    datum.complex.format_root(&alpha)
                )));
            }
            // the whole pointwise stabilizer in the ambient group must be {1, u}
            let stabilizer = ambient
                .elements()
                .iter()
                .filter(|g| fixed.iter().all(|&x| g.fixes(x)))
                .count();
            if stabilizer != 2 {
                return Err(Error::Construction(format!(
                    "pointwise stabilizer of the interior of {} has order {stabilizer}",
                    datum.complex.format_root(&alpha)
                )));
            }
            datum
                .root_groups
                .push(PermGroup::new(n, vec![candidates[i].clone()]));
        }
        Ok(datum)
    }

    pub fn kind(&self) -> DatumKind {
        self.kind
    }

    pub fn building(&self) -> &FlagBuilding {
        &self.building
    }

    pub fn complex(&self) -> &CoxeterComplex {
        &self.complex
    }

    /// The fundamental apartment as a cycle starting at `c+`, then its
    /// `s`-neighbour.
    pub fn apartment(&self) -> &[usize] {
        &self.apartment
    }

    pub fn c_plus(&self) -> usize {
        self.c_plus
    }

    pub fn c_minus(&self) -> usize {
        self.c_minus
    }

    /// Roots of the apartment, sorted; positive roots contain `c+`.
    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn root_group(&self, alpha: &Root) -> &PermGroup {
        let i = self
            .roots
            .binary_search(alpha)
            .expect("root of the fundamental apartment");
        &self.root_groups[i]
    }

    /// The chamber of the apartment at Weyl distance `w` from `c+`.
    pub fn chamber_at(&self, w: &Elem) -> usize {
        self.chamber_of[w]
    }

    /// Chambers of the apartment lying in `alpha`.
    pub fn root_chambers(&self, alpha: &Root) -> BTreeSet<usize> {
        self.chamber_of
            .iter()
            .filter(|(w, _)| self.complex.root_contains(alpha, w))
            .map(|(_, &x)| x)
            .collect()
    }

    /// All chambers of panels meeting `alpha` in two chambers.
    pub fn interior_chambers(&self, alpha: &Root) -> BTreeSet<usize> {
        let inside = self.root_chambers(alpha);
        let mut out = BTreeSet::new();
        for &x in &inside {
            for s in 0..2 {
                let panel = self.building.panel(s, x);
                if panel.iter().filter(|z| inside.contains(z)).count() == 2 {
                    out.extend(panel.iter().copied());
                }
            }
        }
        out
    }

    /// Replaces one root group, for mutation tests.
    pub fn with_root_group(mut self, alpha: &Root, group: PermGroup) -> Self {
        let i = self
            .roots
            .binary_search(alpha)
            .expect("root of the fundamental apartment");
        self.root_groups[i] = group;
        self
    }

    /// `<U_α : α ∈ roots>`.
    pub fn generated(&self, roots: impl IntoIterator<Item = Root>) -> PermGroup {
        let gens = roots
            .into_iter()
            .flat_map(|a| self.root_group(&a).generators().to_vec())
            .collect();
        PermGroup::new(self.building.num_chambers(), gens)
    }

    /// `<U_α ∪ U_-α>`.
    pub fn rank_one_group(&self, alpha: &Root) -> PermGroup {
        self.generated([alpha.clone(), alpha.opposite()])
    }

    pub fn full_group(&self) -> PermGroup {
        self.generated(self.roots.clone())
    }

    fn root_elems(&self, alpha: &Root) -> BTreeSet<Elem> {
        self.chamber_of
            .keys()
            .filter(|w| self.complex.root_contains(alpha, w))
            .cloned()
            .collect()
    }

    /// The closed interval `[α, β]`: roots containing `α ∩ β` whose
    /// opposite contains `(-α) ∩ (-β)`.
    pub fn interval(&self, alpha: &Root, beta: &Root) -> Vec<Root> {
        let (a, b) = (self.root_elems(alpha), self.root_elems(beta));
        let (na, nb) = (
            self.root_elems(&alpha.opposite()),
            self.root_elems(&beta.opposite()),
        );
        let inner: BTreeSet<Elem> = a.intersection(&b).cloned().collect();
        let outer: BTreeSet<Elem> = na.intersection(&nb).cloned().collect();
        self.roots
            .iter()
            .filter(|g| {
                let gs = self.root_elems(g);
                inner.is_subset(&gs) && outer.is_disjoint(&gs)
            })
            .cloned()
            .collect()
    }

    /// `α ∩ β` and `(-α) ∩ (-β)` both nonempty.
    pub fn prenilpotent(&self, alpha: &Root, beta: &Root) -> bool {
        let meet = |x: &Root, y: &Root| !self.root_elems(x).is_disjoint(&self.root_elems(y));
        meet(alpha, beta) && meet(&alpha.opposite(), &beta.opposite())
    }

    /// An element `m(u) = u' u u''` with `u', u'' ∈ U_{-α_s}` conjugating
    /// every `U_β` onto `U_{sβ}`, if one exists.
    pub fn m_element(&self, s: usize, u: &Perm) -> Option<Perm> {
        let simple = self.complex.simple_root(s);
        let minus = self.root_group(&simple.opposite()).elements();
        let gen = self.building.group().generator(s);
        for u1 in minus {
            for u2 in minus {
                let m = u1.compose(u).compose(u2);
                let ok = self.roots.iter().all(|beta| {
                    let image = self.root_group(&self.complex.root_act(&gen, beta));
                    self.root_group(beta).conjugate_by(&m).same_elements(image)
                });
                if ok {
                    return Some(m);
                }
            }
        }
        None
    }
}

/// Per-axiom verdicts for a root group datum.
#[derive(Clone, Debug, Serialize)]
pub struct RgdReport {
    pub rgd0: bool,
    pub rgd1: bool,
    pub rgd2: bool,
    pub rgd3: bool,
    pub rgd4: bool,
    pub group_order: usize,
    pub torus_order: usize,
    pub torus: Vec<String>,
    pub failures: Vec<String>,
}

impl RgdReport {
    pub fn all_pass(&self) -> bool {
        self.rgd0 && self.rgd1 && self.rgd2 && self.rgd3 && self.rgd4
    }
}

/// Checks the five axioms by enumeration. `G` is taken to be the group
/// generated by all root groups.
pub fn check_rgd(d: &RootGroupDatum) -> RgdReport {
    let cx = d.complex();
    let mut failures = Vec::new();

    let mut rgd0 = true;
    for alpha in d.roots() {
        if d.root_group(alpha).order() == 1 {
            rgd0 = false;
            failures.push(format!("(RGD0) U_{} is trivial", cx.format_root(alpha)));
        }
    }

    let mut rgd1 = true;
    for (i, alpha) in d.roots().iter().enumerate() {
        for beta in &d.roots()[i + 1..] {
            if !d.prenilpotent(alpha, beta) {
                continue;
            }
            let open: Vec<Root> = d
                .interval(alpha, beta)
                .into_iter()
                .filter(|g| g != alpha && g != beta)
                .collect();
            let target = d.generated(open);
            let ok = d.root_group(alpha).elements().iter().all(|u| {
                d.root_group(beta)
                    .elements()
                    .iter()
                    .all(|v| target.contains(&u.commutator(v)))
            });
            if !ok {
                rgd1 = false;
                failures.push(format!(
                    "(RGD1) [U_{}, U_{}] is not in the interval group",
                    cx.format_root(alpha),
                    cx.format_root(beta)
                ));
            }
        }
    }

    let mut rgd2 = true;
    for s in 0..2 {
        let simple = cx.simple_root(s);
        for u in d.root_group(&simple).elements() {
            if u.is_identity() {
                continue;
            }
            if d.m_element(s, u).is_none() {
                rgd2 = false;
                failures.push(format!("(RGD2) no m(u) for u = {u:?} in U_{}", cx.format_root(&simple)));
            }
        }
    }

    let positive = d.generated(d.roots().iter().filter(|a| a.sign == Sign::Plus).cloned());
    let mut rgd3 = true;
    for s in 0..2 {
        let minus = cx.simple_root(s).opposite();
        if d.root_group(&minus).elements().iter().all(|u| positive.contains(u)) {
            rgd3 = false;
            failures.push(format!("(RGD3) U_{} lies in U+", cx.format_root(&minus)));
        }
    }

    let g = d.full_group();
    let torus: Vec<&Perm> = g
        .elements()
        .iter()
        .filter(|h| {
            d.roots().iter().all(|a| {
                let u = d.root_group(a);
                u.conjugate_by(h).same_elements(u)
            })
        })
        .collect();
    let with_torus = PermGroup::new(
        g.degree(),
        g.generators()
            .iter()
            .cloned()
            .chain(torus.iter().map(|h| (*h).clone()))
            .collect(),
    );
    let rgd4 = with_torus.order() == g.order();
    if !rgd4 {
        failures.push("(RGD4) G differs from H<U_α>".into());
    }

    RgdReport {
        rgd0,
        rgd1,
        rgd2,
        rgd3,
        rgd4,
        group_order: g.order(),
        torus_order: torus.len(),
        torus: torus.iter().map(|h| format!("{h:?}")).collect(),
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::f2::geometry::{doily, fano_plane};

    #[test]
    fn duad_model_is_symplectic() {
        // orthogonal vectors are disjoint duads or equal ones
        let d = duads();
        for x in 1..16u8 {
            for y in 1..16u8 {
                let (a, b) = (d[duad_of_vector(x)], d[duad_of_vector(y)]);
                let meet = [a.0, a.1].iter().filter(|z| **z == b.0 || **z == b.1).count();
                assert_eq!(symplectic_form(x, y) as usize, meet % 2, "{x} {y}");
            }
        }
    }

    #[test]
    fn a2_root_groups() {
        let d = root_group_datum_a2(FlagBuilding::new(fano_plane(), 3).unwrap()).unwrap();
        assert_eq!(d.roots().len(), 6);
        assert_eq!(d.apartment().len(), 6);
        assert_eq!(d.full_group().order(), 168);
    }

    #[test]
    fn b2_root_groups() {
        let d = root_group_datum_b2(FlagBuilding::new(doily(), 4).unwrap()).unwrap();
        assert_eq!(d.roots().len(), 8);
        assert_eq!(d.full_group().order(), 720);
    }
}

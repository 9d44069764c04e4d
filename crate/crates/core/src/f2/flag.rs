//! Rank-2 buildings as flag systems of incidence geometries.
//!
//! Chambers are flag indices. Generator `s` (index 0) moves along the point
//! of a flag, i.e. `s`-adjacent flags share their point; generator `t`
//! (index 1) keeps the line.

use std::collections::{BTreeSet, HashMap, VecDeque};

use fixedbitset::FixedBitSet;
use serde::Serialize;

use super::geometry::IncidenceGeometry;
use crate::building::{Building, Residue};
use crate::coxeter::{CoxeterGroup, CoxeterMatrix, Elem, SubsetJ};
use crate::error::{Error, Result};

const UNDEFINED: u16 = u16::MAX;

/// A generalized polygon viewed as a chamber system of type `I2(m)`.
#[derive(Debug, Clone)]
pub struct FlagBuilding {
    geometry: IncidenceGeometry,
    gonality: usize,
    group: CoxeterGroup,
    elems: Vec<Elem>,
    elem_index: HashMap<Elem, u16>,
    right_mul: Vec<[u16; 2]>,
    by_point: Vec<Vec<usize>>,
    by_line: Vec<Vec<usize>>,
    component: Vec<usize>,
    delta: Vec<u16>,
    delta_issues: Vec<String>,
    delta_issue_count: usize,
}

const MAX_LISTED: usize = 100;

fn note(list: &mut Vec<String>, count: &mut usize, msg: impl FnOnce() -> String) {
    *count += 1;
    if list.len() < MAX_LISTED {
        list.push(msg());
    }
}

impl FlagBuilding {
    /// Builds the chamber system and its Weyl-distance table. Building axioms
    /// are not checked here; see [`validate_building`]. Where the table is
    /// ill-defined `delta` falls back to the longest element.
    pub fn new(geometry: IncidenceGeometry, gonality: usize) -> Result<Self> {
        if gonality < 2 {
            return Err(Error::Validation(format!("gonality must be at least 2, got {gonality}")));
        }
        if geometry.flags().is_empty() {
            return Err(Error::Validation("geometry has no flags".into()));
        }
        let m = gonality as u64;
        let group = CoxeterGroup::new(CoxeterMatrix::from_orders(&["s", "t"], &[&[1, m], &[m, 1]])?);
        let elems = group.ball(gonality)?;
        let elem_index: HashMap<Elem, u16> = elems
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i as u16))
            .collect();
        let right_mul = elems
            .iter()
            .map(|w| [0, 1].map(|s| elem_index[&group.right_mul_gen(w, s)]))
            .collect();
        let mut by_point = vec![Vec::new(); geometry.num_points()];
        let mut by_line = vec![Vec::new(); geometry.num_lines()];
        for (i, &(p, l)) in geometry.flags().iter().enumerate() {
            by_point[p].push(i);
            by_line[l].push(i);
        }
        let mut b = FlagBuilding {
            geometry,
            gonality,
            group,
            elems,
            elem_index,
            right_mul,
            by_point,
            by_line,
            component: Vec::new(),
            delta: Vec::new(),
            delta_issues: Vec::new(),
            delta_issue_count: 0,
        };
        b.fill_components();
        b.fill_delta();
        Ok(b)
    }

    /// [`FlagBuilding::new`] followed by [`validate_building`]; fails unless
    /// the result is a thick generalized polygon.
    pub fn validated(geometry: IncidenceGeometry, gonality: usize) -> Result<Self> {
        let b = Self::new(geometry, gonality)?;
        let report = validate_building(&b);
        if !report.passed() {
            return Err(Error::Validation(format!(
                "not a thick generalized {gonality}-gon: {}",
                report.violations.first().cloned().unwrap_or_default()
            )));
        }
        Ok(b)
    }

    pub fn geometry(&self) -> &IncidenceGeometry {
        &self.geometry
    }

    pub fn gonality(&self) -> usize {
        self.gonality
    }

    pub fn num_chambers(&self) -> usize {
        self.geometry.flags().len()
    }

    /// The flag `(point, line)` of a chamber.
    pub fn flag(&self, c: usize) -> (usize, usize) {
        self.geometry.flags()[c]
    }

    /// Chambers of the `s`-panel (type 0) or `t`-panel (type 1) of `c`.
    pub fn panel(&self, s: usize, c: usize) -> &[usize] {
        let (p, l) = self.flag(c);
        match s {
            0 => &self.by_point[p],
            1 => &self.by_line[l],
            _ => panic!("rank-2 building has generators 0 and 1, got {s}"),
        }
    }

    /// All panels as `(type, chambers)`, `s`-panels first.
    pub fn panels(&self) -> Vec<(usize, &[usize])> {
        let s = self.by_point.iter().map(|v| (0, v.as_slice()));
        let t = self.by_line.iter().map(|v| (1, v.as_slice()));
        s.chain(t).filter(|(_, v)| !v.is_empty()).collect()
    }

    /// Gallery distance, if the Weyl distance is defined.
    pub fn distance(&self, x: usize, y: usize) -> Option<usize> {
        self.delta_index(x, y).map(|i| self.elems[i as usize].len())
    }

    fn delta_index(&self, x: usize, y: usize) -> Option<u16> {
        let d = self.delta[x * self.num_chambers() + y];
        (d != UNDEFINED).then_some(d)
    }

    fn fill_components(&mut self) {
        let n = self.num_chambers();
        let mut comp = vec![usize::MAX; n];
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            comp[start] = start;
            let mut queue = vec![start];
            while let Some(y) = queue.pop() {
                for s in 0..2 {
                    for &z in self.panel(s, y) {
                        if comp[z] == usize::MAX {
                            comp[z] = start;
                            queue.push(z);
                        }
                    }
                }
            }
        }
        self.component = comp;
    }

    fn fill_delta(&mut self) {
        let n = self.num_chambers();
        let mut table = vec![UNDEFINED; n * n];
        let mut issues = Vec::new();
        let mut count = 0;
        for x in 0..n {
            let row = &mut table[x * n..(x + 1) * n];
            let mut dist = vec![usize::MAX; n];
            dist[x] = 0;
            row[x] = self.elem_index[&Elem::identity()];
            let mut queue = VecDeque::from([x]);
            while let Some(y) = queue.pop_front() {
                let dy = dist[y];
                for s in 0..2 {
                    for &z in self.panel(s, y) {
                        if z == y || dist[z] < dy + 1 {
                            continue;
                        }
                        if row[y] == UNDEFINED {
                            if dist[z] == usize::MAX {
                                dist[z] = dy + 1;
                                queue.push_back(z);
                            }
                            continue;
                        }
                        let cand = self.right_mul[row[y] as usize][s];
                        let cand_len = self.elems[cand as usize].len();
                        if dist[z] == usize::MAX {
                            dist[z] = dy + 1;
                            queue.push_back(z);
                            if cand_len == dy + 1 {
                                row[z] = cand;
                                continue;
                            }
                            note(&mut issues, &mut count, || {
                                format!(
                                    "gallery distance from {} to {} exceeds the gonality",
                                    self.label(x),
                                    self.label(z)
                                )
                            });
                        } else if row[z] != UNDEFINED && row[z] != cand {
                            note(&mut issues, &mut count, || {
                                format!(
                                    "minimal galleries from {} to {} have different types",
                                    self.label(x),
                                    self.label(z)
                                )
                            });
                        }
                    }
                }
            }
        }
        self.delta = table;
        self.delta_issues = issues;
        self.delta_issue_count = count;
    }

    fn label(&self, c: usize) -> String {
        let (p, l) = self.flag(c);
        format!("p{p}l{l}")
    }
}

impl Building for FlagBuilding {
    type Chamber = usize;

    fn group(&self) -> &CoxeterGroup {
        &self.group
    }

    fn delta(&self, x: &usize, y: &usize) -> Elem {
        match self.delta_index(*x, *y) {
            Some(i) => self.elems[i as usize].clone(),
            None => self.elems.last().expect("dihedral group is nonempty").clone(),
        }
    }

    fn residue(&self, j: SubsetJ, c: &usize) -> Residue<usize> {
        let rep = match (j.contains(0), j.contains(1)) {
            (false, false) => *c,
            (true, false) => self.panel(0, *c)[0],
            (false, true) => self.panel(1, *c)[0],
            (true, true) => self.component[*c],
        };
        Residue { typeset: j, rep }
    }

    fn chambers(&self, r: &Residue<usize>) -> Result<Vec<usize>> {
        Ok(match (r.typeset.contains(0), r.typeset.contains(1)) {
            (false, false) => vec![r.rep],
            (true, false) => self.panel(0, r.rep).to_vec(),
            (false, true) => self.panel(1, r.rep).to_vec(),
            (true, true) => (0..self.num_chambers())
                .filter(|&x| self.component[x] == self.component[r.rep])
                .collect(),
        })
    }

    fn chamber_label(&self, c: &usize) -> String {
        self.label(*c)
    }

    fn contains(&self, r: &Residue<usize>, c: &usize) -> bool {
        self.residue(r.typeset, c) == *r
    }
}

/// Outcome of [`validate_building`].
#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub gonality: usize,
    pub chambers: usize,
    pub points: usize,
    pub lines: usize,
    pub connected: bool,
    pub girth: Option<usize>,
    pub diameter: Option<usize>,
    pub girth_ok: bool,
    pub diameter_ok: bool,
    pub delta_well_defined: bool,
    pub bu1: bool,
    pub bu2: bool,
    pub bu3: bool,
    pub thick: bool,
    pub min_panel_size: usize,
    pub max_panel_size: usize,
    pub panels: usize,
    /// Total number of violations; only the first hundred are listed.
    pub violation_count: usize,
    pub violations: Vec<String>,
}

impl ValidationReport {
    /// Whether this is a thick generalized polygon of the declared gonality.
    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }
}

/// Checks the building axioms exhaustively over all chamber pairs, the
/// girth and diameter of the incidence graph, and thickness.
pub fn validate_building(b: &FlagBuilding) -> ValidationReport {
    let g = b.geometry();
    let m = b.gonality();
    let n = b.num_chambers();
    let mut violations = Vec::new();
    let mut count = 0;

    for p in 0..g.num_points() {
        if b.by_point[p].is_empty() {
            note(&mut violations, &mut count, || format!("point p{p} lies on no line"));
        }
    }
    for l in 0..g.num_lines() {
        if b.by_line[l].is_empty() {
            note(&mut violations, &mut count, || format!("line l{l} has no point"));
        }
    }

    let (girth, diameter, connected) = incidence_graph_metrics(g);
    if !connected {
        note(&mut violations, &mut count, || "incidence graph is disconnected".into());
    }
    let girth_ok = girth == Some(2 * m);
    if !girth_ok {
        note(&mut violations, &mut count, || {
            format!("incidence graph has girth {girth:?}, expected {}", 2 * m)
        });
    }
    let diameter_ok = connected && diameter == Some(m);
    if !diameter_ok {
        note(&mut violations, &mut count, || {
            format!("incidence graph has diameter {diameter:?}, expected {m}")
        });
    }

    let delta_well_defined = b.delta_issue_count == 0 && !b.delta.contains(&UNDEFINED);
    for issue in &b.delta_issues {
        note(&mut violations, &mut count, || issue.clone());
    }
    count += b.delta_issue_count - b.delta_issues.len();

    let mut bu = [true; 3];
    let identity = b.elem_index[&Elem::identity()];
    for x in 0..n {
        for y in 0..n {
            let Some(w) = b.delta_index(x, y) else {
                if b.component[x] != b.component[y] {
                    bu[0] = false;
                    note(&mut violations, &mut count, || {
                        format!("no gallery from {} to {}", b.label(x), b.label(y))
                    });
                }
                continue;
            };
            if (w == identity) != (x == y) {
                bu[0] = false;
                note(&mut violations, &mut count, || {
                    format!("(Bu1) fails for {} and {}", b.label(x), b.label(y))
                });
            }
            let wlen = b.elems[w as usize].len();
            for s in 0..2 {
                let ws = b.right_mul[w as usize][s];
                let up = b.elems[ws as usize].len() > wlen;
                let mut hit = false;
                for &z in b.panel(s, y) {
                    let dz = b.delta_index(x, z);
                    hit |= dz == Some(ws);
                    if z == y {
                        continue;
                    }
                    let ok = match dz {
                        Some(d) if up => d == ws,
                        Some(d) => d == ws || d == w,
                        None => false,
                    };
                    if !ok {
                        bu[1] = false;
                        note(&mut violations, &mut count, || {
                            format!(
                                "(Bu2) fails for {}, {}, {}",
                                b.label(x),
                                b.label(y),
                                b.label(z)
                            )
                        });
                    }
                }
                if !hit {
                    bu[2] = false;
                    note(&mut violations, &mut count, || {
                        format!(
                            "(Bu3) fails: no chamber of the {}-panel of {} at distance {} from {}",
                            b.group.matrix().name(s),
                            b.label(y),
                            b.group.format(&b.elems[ws as usize]),
                            b.label(x)
                        )
                    });
                }
            }
        }
    }

    let panels = b.panels();
    let min_panel_size = panels.iter().map(|p| p.1.len()).min().unwrap_or(0);
    let max_panel_size = panels.iter().map(|p| p.1.len()).max().unwrap_or(0);
    let thick = min_panel_size >= 3;
    if !thick {
        note(&mut violations, &mut count, || {
            format!("not thick: smallest panel has {min_panel_size} chambers")
        });
    }

    ValidationReport {
        gonality: m,
        chambers: n,
        points: g.num_points(),
        lines: g.num_lines(),
        connected,
        girth,
        diameter,
        girth_ok,
        diameter_ok,
        delta_well_defined,
        bu1: bu[0],
        bu2: bu[1],
        bu3: bu[2],
        thick,
        min_panel_size,
        max_panel_size,
        panels: panels.len(),
        violation_count: count,
        violations,
    }
}

/// Girth, diameter and connectivity of the bipartite point-line graph.
/// Diameter is `None` when disconnected, girth `None` for a forest.
pub fn incidence_graph_metrics(g: &IncidenceGeometry) -> (Option<usize>, Option<usize>, bool) {
    let np = g.num_points();
    let nv = np + g.num_lines();
    let mut adj = vec![Vec::new(); nv];
    for &(p, l) in g.flags() {
        adj[p].push(np + l);
        adj[np + l].push(p);
    }
    let mut girth: Option<usize> = None;
    let mut diameter = 0;
    let mut connected = true;
    for start in 0..nv {
        let mut dist = vec![usize::MAX; nv];
        let mut parent = vec![usize::MAX; nv];
        dist[start] = 0;
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    parent[v] = u;
                    queue.push_back(v);
                } else if parent[u] != v {
                    let cycle = dist[u] + dist[v] + 1;
                    girth = Some(girth.map_or(cycle, |g| g.min(cycle)));
                }
            }
        }
        match dist.iter().max() {
            Some(&usize::MAX) => connected = false,
            Some(&d) => diameter = diameter.max(d),
            None => {}
        }
    }
    (girth, connected.then_some(diameter), connected)
}

/// Whether `set` is thin (meets every panel in 0 or 2 chambers) and convex
/// (contains every minimal gallery between its members).
pub fn is_apartment(b: &FlagBuilding, set: &BTreeSet<usize>) -> bool {
    let thin = set.iter().all(|&x| {
        (0..2).all(|s| b.panel(s, x).iter().filter(|z| set.contains(z)).count() == 2)
    });
    if !thin || set.is_empty() {
        return false;
    }
    set.iter().all(|&x| {
        set.iter().all(|&y| {
            let Some(dxy) = b.distance(x, y) else {
                return false;
            };
            (0..b.num_chambers()).all(|z| {
                set.contains(&z)
                    || match (b.distance(x, z), b.distance(z, y)) {
                        (Some(a), Some(c)) => a + c != dxy,
                        _ => true,
                    }
            })
        })
    })
}

/// All apartments as ordered cycles of `2m` chambers alternating between
/// `s`- and `t`-adjacency. Each cycle starts at its smallest chamber and
/// runs towards the smaller of that chamber's two cycle neighbours; the
/// list is sorted. Every returned cycle passes [`is_apartment`].
pub fn apartments_of(b: &FlagBuilding) -> Vec<Vec<usize>> {
    let len = 2 * b.gonality();
    let mut out = Vec::new();
    let mut path = Vec::with_capacity(len);
    let mut on_path = vec![false; b.num_chambers()];
    for start in 0..b.num_chambers() {
        for first in 0..2 {
            path.clear();
            path.push(start);
            on_path[start] = true;
            extend_cycle(b, len, first, &mut path, &mut on_path, &mut out);
            on_path[start] = false;
        }
    }
    out.retain(|cycle: &Vec<usize>| is_apartment(b, &cycle.iter().copied().collect()));
    out.sort();
    out
}

fn extend_cycle(
    b: &FlagBuilding,
    len: usize,
    first: usize,
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    out: &mut Vec<Vec<usize>>,
) {
    let start = path[0];
    let last = *path.last().unwrap();
    let s = (first + path.len() - 1) % 2;
    if path.len() == len {
        // closing step has the type opposite to the first one
        if b.panel(s, last).contains(&start) && path[1] < path[len - 1] {
            out.push(path.clone());
        }
        return;
    }
    for &z in b.panel(s, last) {
        if z > start && !on_path[z] {
            path.push(z);
            on_path[z] = true;
            extend_cycle(b, len, first, path, on_path, out);
            on_path[z] = false;
            path.pop();
        }
    }
}

/// Independent apartment count: every apartment has `2m` chambers, each
/// with exactly one opposite chamber in it, and two opposite chambers lie
/// in exactly one apartment.
pub fn apartment_census(b: &FlagBuilding) -> usize {
    let m = b.gonality();
    let n = b.num_chambers();
    let opposite_pairs: usize = (0..n)
        .map(|x| (0..n).filter(|&y| b.distance(x, y) == Some(m)).count())
        .sum();
    opposite_pairs / (2 * m)
}

/// Apartments with a per-chamber membership bitset, for "which apartments
/// contain all of these chambers" queries.
#[derive(Debug, Clone)]
pub struct ApartmentIndex {
    apartments: Vec<Vec<usize>>,
    members: Vec<BTreeSet<usize>>,
    by_chamber: Vec<FixedBitSet>,
}

impl ApartmentIndex {
    pub fn new(b: &FlagBuilding) -> Self {
        let apartments = apartments_of(b);
        let mut by_chamber = vec![FixedBitSet::with_capacity(apartments.len()); b.num_chambers()];
        for (i, a) in apartments.iter().enumerate() {
            for &c in a {
                by_chamber[c].insert(i);
            }
        }
        let members = apartments.iter().map(|a| a.iter().copied().collect()).collect();
        ApartmentIndex {
            apartments,
            members,
            by_chamber,
        }
    }

    pub fn apartments(&self) -> &[Vec<usize>] {
        &self.apartments
    }

    pub fn members(&self, i: usize) -> &BTreeSet<usize> {
        &self.members[i]
    }

    /// Indices of the apartments containing every chamber of `chambers`.
    pub fn containing(&self, chambers: &[usize]) -> FixedBitSet {
        let mut acc = FixedBitSet::with_capacity(self.apartments.len());
        acc.insert_range(..);
        for &c in chambers {
            acc.intersect_with(&self.by_chamber[c]);
        }
        acc
    }
}

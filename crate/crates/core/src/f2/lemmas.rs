//! Stabilizer and apartment lemmas, checked by enumeration on flag
//! buildings.

use std::collections::BTreeSet;

use serde::Serialize;
use serde_json::{json, Value};

use super::flag::{ApartmentIndex, FlagBuilding};
use super::perm::PermGroup;
use super::rgd::RootGroupDatum;
use crate::building::{are_parallel, opposite_in, proj_image, Building, Residue};
use crate::coxeter::SubsetJ;
use crate::error::{Error, Result};

/// Chambers whose panels are stabilized by every rank-one group, compared
/// with the expected `{c+, c-}`.
#[derive(Clone, Debug, Serialize)]
pub struct StabilizedPanels {
    pub chambers: BTreeSet<usize>,
    pub expected: BTreeSet<usize>,
    pub matches: bool,
}

fn panel_set(b: &FlagBuilding, s: usize, c: usize) -> BTreeSet<usize> {
    b.panel(s, c).iter().copied().collect()
}

/// `{ c : for all s there is s' with <U_{α_s} ∪ U_{-α_s}> ≤ Stab(P_{s'}(c)) }`.
pub fn stabilized_panels_set(d: &RootGroupDatum) -> StabilizedPanels {
    let b = d.building();
    let groups: Vec<PermGroup> = (0..2)
        .map(|s| d.rank_one_group(&d.complex().simple_root(s)))
        .collect();
    let chambers: BTreeSet<usize> = (0..b.num_chambers())
        .filter(|&c| {
            groups
                .iter()
                .all(|h| (0..2).any(|s2| h.stabilizes(&panel_set(b, s2, c))))
        })
        .collect();
    let expected = BTreeSet::from([d.c_plus(), d.c_minus()]);
    StabilizedPanels {
        matches: chambers == expected,
        chambers,
        expected,
    }
}

/// Outcome of an exhaustive lemma scan.
#[derive(Clone, Debug, Default, Serialize)]
pub struct ScanReport {
    pub instances: usize,
    pub counterexamples: Vec<Value>,
}

impl ScanReport {
    pub fn holds(&self) -> bool {
        self.counterexamples.is_empty()
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> Value) {
        self.instances += 1;
        if !ok {
            self.counterexamples.push(witness());
        }
    }
}

/// All panels of the building as residues.
fn all_panels(b: &FlagBuilding) -> Vec<Residue<usize>> {
    b.panels()
        .into_iter()
        .map(|(s, chambers)| b.residue(SubsetJ::singleton(s), &chambers[0]))
        .collect()
}

fn stabilized_by(b: &FlagBuilding, h: &PermGroup) -> Vec<Residue<usize>> {
    all_panels(b)
        .into_iter()
        .filter(|p| h.stabilizes(&b.chambers(p).unwrap().into_iter().collect()))
        .collect()
}

/// For panels `Q_s`, `Q_t` stabilized by `<U_{±α_s}>` and `<U_{±α_t}>`:
/// `Q_s ≠ Q_t`, and parallel ones are opposite.
pub fn distinct_stabilized_panels_check(d: &RootGroupDatum) -> ScanReport {
    let b = d.building();
    let whole = b.residue(SubsetJ::full(2), &d.c_plus());
    let stabilized: Vec<Vec<Residue<usize>>> = (0..2)
        .map(|s| stabilized_by(b, &d.rank_one_group(&d.complex().simple_root(s))))
        .collect();
    let mut report = ScanReport::default();
    for qs in &stabilized[0] {
        for qt in &stabilized[1] {
            let ok = qs != qt
                && (!are_parallel(b, qs, qt).unwrap_or(false)
                    || opposite_in(b, qs, qt, &whole).unwrap_or(false));
            report.record(ok, || {
                json!({ "q_s": b.residue_label(qs), "q_t": b.residue_label(qt) })
            });
        }
    }
    report
}

/// If `H` stabilizes the panels `p` and `q` and fixes no chamber of `p`,
/// then `p ∥ q` with `|proj_q p| ≥ 2`, and for every residue `R ⊇ q`,
/// `proj_R p` is a panel stabilized by `H`. Returns whether all of that
/// holds.
pub fn stabilized_implies_parallel_check(
    b: &FlagBuilding,
    h: &PermGroup,
    p: &Residue<usize>,
    q: &Residue<usize>,
) -> Result<bool> {
    if !p.is_panel() || !q.is_panel() {
        return Err(Error::PreconditionFailed("both residues must be panels".into()));
    }
    let pc: BTreeSet<usize> = b.chambers(p)?.into_iter().collect();
    let qc: BTreeSet<usize> = b.chambers(q)?.into_iter().collect();
    if !h.stabilizes(&pc) || !h.stabilizes(&qc) {
        return Err(Error::PreconditionFailed(format!(
            "group does not stabilize {} and {}",
            b.residue_label(p),
            b.residue_label(q)
        )));
    }
    if let Some(x) = pc.iter().find(|&&x| h.fixes(x)) {
        return Err(Error::PreconditionFailed(format!(
            "group fixes the chamber {} of {}",
            b.chamber_label(x),
            b.residue_label(p)
        )));
    }
    let image: BTreeSet<usize> = pc.iter().map(|x| b.proj(q, x)).collect();
    if image.len() < 2 || !are_parallel(b, p, q)? {
        return Ok(false);
    }
    let containing = [q.typeset, SubsetJ::full(2)].map(|j| b.residue(j, &q.rep));
    for r in &containing {
        let pr = proj_image(b, p, r)?;
        if !pr.is_panel() || !h.stabilizes(&b.chambers(&pr)?.into_iter().collect()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Runs [`stabilized_implies_parallel_check`] for `H = <U_α ∪ U_-α>` over
/// every root `α` of the fundamental apartment and every pair of panels
/// meeting the preconditions.
pub fn stabilized_implies_parallel_scan(d: &RootGroupDatum) -> ScanReport {
    let b = d.building();
    let mut report = ScanReport::default();
    for alpha in d.roots() {
        let h = d.rank_one_group(alpha);
        let stabilized = stabilized_by(b, &h);
        for p in &stabilized {
            if b.chambers(p).unwrap().iter().any(|&x| h.fixes(x)) {
                continue;
            }
            for q in &stabilized {
                let ok = matches!(stabilized_implies_parallel_check(b, &h, p, q), Ok(true));
                report.record(ok, || {
                    json!({
                        "root": d.complex().format_root(alpha),
                        "p": b.residue_label(p),
                        "q": b.residue_label(q),
                    })
                });
            }
        }
    }
    report
}

/// Exhaustive check of the root lemma for apartments: for a minimal gallery
/// `(d_0, .., d_k)` and a chamber `c`, if an apartment `Σ` contains
/// `c, d_0, .., d_{k-1}` but none contains `c, d_0, .., d_k`, then `c` is
/// outside the root of `Σ` that contains `d_{k-1}` but not the chamber
/// `e ∈ Σ` with `δ(d_{k-1}, e) = δ(d_{k-1}, d_k)`. Galleries of every length
/// up to the gonality are scanned.
pub fn no_apartment_scan(b: &FlagBuilding, index: &ApartmentIndex) -> ScanReport {
    let mut report = ScanReport::default();
    let mut galleries: Vec<Vec<usize>> = (0..b.num_chambers()).map(|x| vec![x]).collect();
    for k in 1..=b.gonality() {
        let mut next = Vec::new();
        for g in &galleries {
            let last = *g.last().unwrap();
            for s in 0..2 {
                for &z in b.panel(s, last) {
                    if b.distance(g[0], z) == Some(k) {
                        let mut h = g.clone();
                        h.push(z);
                        next.push(h);
                    }
                }
            }
        }
        galleries = next;
        for g in &galleries {
            let (prefix, dk) = (&g[..k], g[k]);
            let prev = g[k - 1];
            let s = b.delta(&prev, &dk).word()[0] as usize;
            for c in 0..b.num_chambers() {
                let mut with_c = prefix.to_vec();
                with_c.push(c);
                let candidates = index.containing(&with_c);
                if candidates.is_clear() {
                    continue;
                }
                with_c.push(dk);
                if !index.containing(&with_c).is_clear() {
                    continue;
                }
                for i in candidates.ones() {
                    let sigma = index.members(i);
                    let e = *b
                        .panel(s, prev)
                        .iter()
                        .find(|&&z| z != prev && sigma.contains(&z))
                        .expect("apartments are thin");
                    let in_root = |x: usize| b.distance(x, prev) < b.distance(x, e);
                    report.record(!in_root(c), || {
                        json!({
                            "gallery": g.iter().map(|x| b.chamber_label(x)).collect::<Vec<_>>(),
                            "c": b.chamber_label(&c),
                            "apartment": i,
                        })
                    });
                }
            }
        }
    }
    report
}

/// Every pair of opposite chambers lies in an apartment.
pub fn opposite_pairs_covered(b: &FlagBuilding, index: &ApartmentIndex) -> bool {
    let m = b.gonality();
    (0..b.num_chambers()).all(|x| {
        (0..b.num_chambers())
            .filter(|&y| b.distance(x, y) == Some(m))
            .all(|y| !index.containing(&[x, y]).is_clear())
    })
}

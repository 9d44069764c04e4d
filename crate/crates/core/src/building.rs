//! Buildings as chamber systems with a Weyl-distance, and the operations that
//! only need that interface: projection images, parallelism, opposition.

use std::collections::BTreeSet;
use std::fmt::Debug;
use std::hash::Hash;

use serde_json::json;

use crate::coxeter::{CoxeterGroup, Elem, SubsetJ};
use crate::error::{Error, Result};

/// A `J`-residue, identified by its type and a canonical chamber.
///
/// In the Coxeter complex `rep` is the minimal-length coset representative;
/// in flag buildings it is the smallest chamber id.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Residue<C = Elem> {
    pub typeset: SubsetJ,
    pub rep: C,
}

impl<C> Residue<C> {
    pub fn rank(&self) -> usize {
        self.typeset.len()
    }

    pub fn is_panel(&self) -> bool {
        self.typeset.len() == 1
    }

    /// The generator of a panel.
    pub fn panel_type(&self) -> Option<usize> {
        if self.is_panel() {
            self.typeset.iter().next()
        } else {
            None
        }
    }
}

/// A building of type `(W, S)`.
pub trait Building {
    type Chamber: Clone + Eq + Ord + Hash + Debug;

    fn group(&self) -> &CoxeterGroup;

    /// Weyl distance.
    fn delta(&self, x: &Self::Chamber, y: &Self::Chamber) -> Elem;

    /// The `J`-residue containing `c`, canonically identified.
    fn residue(&self, j: SubsetJ, c: &Self::Chamber) -> Residue<Self::Chamber>;

    /// Chambers of a spherical residue, sorted.
    fn chambers(&self, r: &Residue<Self::Chamber>) -> Result<Vec<Self::Chamber>>;

    fn chamber_label(&self, c: &Self::Chamber) -> String;

    fn contains(&self, r: &Residue<Self::Chamber>, c: &Self::Chamber) -> bool {
        self.group()
            .in_parabolic(&self.delta(&r.rep, c), r.typeset)
    }

    /// Gate projection of `c` onto `r`. The default enumerates `r`, so it
    /// needs `r` spherical.
    fn proj(&self, r: &Residue<Self::Chamber>, c: &Self::Chamber) -> Self::Chamber {
        let chambers = self
            .chambers(r)
            .expect("default projection needs a spherical residue");
        chambers
            .into_iter()
            .min_by_key(|x| (self.delta(c, x).len(), x.clone()))
            .expect("residues are nonempty")
    }

    fn length(&self, x: &Self::Chamber, y: &Self::Chamber) -> usize {
        self.delta(x, y).len()
    }

    fn residue_label(&self, r: &Residue<Self::Chamber>) -> String {
        format!(
            "{}@{}",
            self.group().matrix().format_subset(r.typeset),
            self.chamber_label(&r.rep)
        )
    }
}

/// `{ proj_onto x : x in from }` as a residue. `from` must be spherical.
pub fn proj_image<B: Building>(
    b: &B,
    from: &Residue<B::Chamber>,
    onto: &Residue<B::Chamber>,
) -> Result<Residue<B::Chamber>> {
    let image: BTreeSet<B::Chamber> = b
        .chambers(from)?
        .iter()
        .map(|x| b.proj(onto, x))
        .collect();
    residue_from_chambers(b, &image).ok_or_else(|| {
        Error::lemma(
            "projection image is a residue",
            json!({
                "from": b.residue_label(from),
                "onto": b.residue_label(onto),
                "image": image.iter().map(|c| b.chamber_label(c)).collect::<Vec<_>>(),
            }),
        )
    })
}

/// The residue whose chamber set is exactly `set`, if there is one.
pub fn residue_from_chambers<B: Building>(
    b: &B,
    set: &BTreeSet<B::Chamber>,
) -> Option<Residue<B::Chamber>> {
    let x = set.iter().next()?;
    let typeset: SubsetJ = set
        .iter()
        .filter_map(|y| {
            let d = b.delta(x, y);
            (d.len() == 1).then(|| d.word()[0] as usize)
        })
        .collect();
    let r = b.residue(typeset, x);
    let chambers: BTreeSet<B::Chamber> = b.chambers(&r).ok()?.into_iter().collect();
    (chambers == *set).then_some(r)
}

/// Parallelism: `proj_T R = T` and `proj_R T = R`.
pub fn are_parallel<B: Building>(
    b: &B,
    r: &Residue<B::Chamber>,
    t: &Residue<B::Chamber>,
) -> Result<bool> {
    Ok(proj_image(b, r, t)? == *t && proj_image(b, t, r)? == *r)
}

/// Whether `p` and `q` are opposite in the spherical residue `r`.
pub fn opposite_in<B: Building>(
    b: &B,
    p: &Residue<B::Chamber>,
    q: &Residue<B::Chamber>,
    r: &Residue<B::Chamber>,
) -> Result<bool> {
    if !b.contains(r, &p.rep) || !b.contains(r, &q.rep) {
        return Ok(false);
    }
    if !p.typeset.is_subset(r.typeset) || !q.typeset.is_subset(r.typeset) {
        return Ok(false);
    }
    let longest = b.group().longest_element(r.typeset)?;
    let qs = b.chambers(q)?;
    for x in b.chambers(p)? {
        if !qs.iter().any(|y| b.delta(&x, y) == longest) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Chambers of `r` that also lie in `t`.
pub fn intersection<B: Building>(
    b: &B,
    r: &Residue<B::Chamber>,
    t: &Residue<B::Chamber>,
) -> Result<Vec<B::Chamber>> {
    Ok(b.chambers(r)?
        .into_iter()
        .filter(|x| b.contains(t, x))
        .collect())
}

//! The Coxeter complex: chambers are group elements, `delta(x, y) = x^-1 y`.
//!
//! Roots are stored as a reflection plus a side; walls and rank-2 walls are
//! decided by conjugating the reflection into a standard subgroup.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

use serde_json::json;

use crate::building::{self, Building, Residue};
use crate::coxeter::{CoxeterGroup, CoxeterMatrix, Elem, SubsetJ};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// A half-space of the Coxeter complex. `(t, +)` is the side of `t`'s wall
/// containing the identity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Root {
    pub reflection: Elem,
    pub sign: Sign,
}

impl Root {
    pub fn new(reflection: Elem, sign: Sign) -> Self {
        Root { reflection, sign }
    }

    pub fn opposite(&self) -> Root {
        Root::new(self.reflection.clone(), self.sign.flip())
    }

    /// `alpha = ±beta`.
    pub fn same_wall(&self, other: &Root) -> bool {
        self.reflection == other.reflection
    }
}

/// `Σ(W, S)` with a cache of balls.
pub struct CoxeterComplex {
    group: CoxeterGroup,
    balls: RwLock<HashMap<usize, Arc<Vec<Elem>>>>,
}

impl fmt::Debug for CoxeterComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoxeterComplex")
            .field("group", &self.group)
            .finish()
    }
}

impl CoxeterComplex {
    pub fn new(group: CoxeterGroup) -> Self {
        CoxeterComplex {
            group,
            balls: RwLock::new(HashMap::new()),
        }
    }

    pub fn from_matrix(matrix: CoxeterMatrix) -> Self {
        Self::new(CoxeterGroup::new(matrix))
    }

    pub fn matrix(&self) -> &CoxeterMatrix {
        self.group.matrix()
    }

    /// `ball(radius)`, memoized.
    pub fn ball(&self, radius: usize) -> Result<Arc<Vec<Elem>>> {
        if let Some(b) = self.balls.read().unwrap().get(&radius) {
            return Ok(b.clone());
        }
        let ball = Arc::new(self.group.ball(radius)?);
        self.balls
            .write()
            .unwrap()
            .insert(radius, ball.clone());
        Ok(ball)
    }

    pub fn format_root(&self, alpha: &Root) -> String {
        format!("{}:{}", alpha.sign, self.group.format(&alpha.reflection))
    }

    pub fn parse_root(&self, text: &str) -> Result<Root> {
        let (sign, word) = text
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("root {text:?} lacks a sign")))?;
        let sign = match sign {
            "+" => Sign::Plus,
            "-" => Sign::Minus,
            _ => return Err(Error::Parse(format!("bad root sign {sign:?}"))),
        };
        let t = self.group.parse_elem(word)?;
        if !self.group.is_reflection(&t) {
            return Err(Error::NotReflection(word.to_string()));
        }
        Ok(Root::new(t, sign))
    }

    pub fn format_residue(&self, r: &Residue) -> String {
        self.residue_label(r)
    }

    /// `v α_s`: the root with reflection `v s v^-1` that contains `v`.
    pub fn root_from(&self, v: &Elem, s: usize) -> Root {
        let t = self.group.conjugate(&self.group.generator(s), v);
        let mut root = Root::new(t, Sign::Plus);
        if !self.root_contains(&root, v) {
            root.sign = Sign::Minus;
        }
        root
    }

    pub fn simple_root(&self, s: usize) -> Root {
        Root::new(self.group.generator(s), Sign::Plus)
    }

    pub fn root_contains(&self, alpha: &Root, w: &Elem) -> bool {
        let longer = self.group.mul(&alpha.reflection, w).len() > w.len();
        match alpha.sign {
            Sign::Plus => longer,
            Sign::Minus => !longer,
        }
    }

    /// Image of a root under left multiplication by `v`.
    pub fn root_act(&self, v: &Elem, alpha: &Root) -> Root {
        let inside = match alpha.sign {
            Sign::Plus => Elem::identity(),
            Sign::Minus => alpha.reflection.clone(),
        };
        let t = self.group.conjugate(&alpha.reflection, v);
        let mut root = Root::new(t, Sign::Plus);
        if !self.root_contains(&root, &self.group.mul(v, &inside)) {
            root.sign = Sign::Minus;
        }
        root
    }

    /// `rep^-1 t rep`, the reflection seen from the residue's base chamber.
    fn local_reflection(&self, t: &Elem, rep: &Elem) -> Elem {
        self.group.conjugate(t, &self.group.inverse(rep))
    }

    /// Whether `r_α` swaps the two chambers of the panel `p`.
    pub fn wall_contains_panel(&self, alpha: &Root, p: &Residue) -> Result<bool> {
        let s = p
            .panel_type()
            .ok_or_else(|| Error::Rank(format!("{} is not a panel", self.format_residue(p))))?;
        let local = self.local_reflection(&alpha.reflection, &p.rep);
        Ok(local.word() == [s as u8])
    }

    /// Whether `r_α` stabilizes the spherical rank-2 residue `r`.
    pub fn wall2_contains_residue(&self, alpha: &Root, r: &Residue) -> Result<bool> {
        if r.rank() != 2 {
            return Err(Error::Rank(format!(
                "{} does not have rank 2",
                self.format_residue(r)
            )));
        }
        if !self.matrix().is_spherical(r.typeset) {
            return Err(Error::NotSpherical(self.matrix().format_subset(r.typeset)));
        }
        Ok(self.stabilizes(&alpha.reflection, r))
    }

    /// Whether the reflection `t` stabilizes the residue `r`.
    pub fn stabilizes(&self, t: &Elem, r: &Residue) -> bool {
        self.group
            .in_parabolic(&self.local_reflection(t, &r.rep), r.typeset)
    }

    /// The reflections stabilizing a spherical residue.
    pub fn residue_reflections(&self, r: &Residue) -> Result<Vec<Elem>> {
        let mut out: Vec<Elem> = self
            .group
            .parabolic_reflections(r.typeset)?
            .iter()
            .map(|t| self.group.conjugate(t, &r.rep))
            .collect();
        out.sort();
        Ok(out)
    }

    /// Parallelism of spherical residues, decided by their reflections.
    pub fn parallel_residues(&self, r: &Residue, t: &Residue) -> Result<bool> {
        Ok(self.residue_reflections(r)? == self.residue_reflections(t)?)
    }

    /// `proj_T R` for spherical `R`.
    pub fn proj_residue_onto(&self, r: &Residue, t: &Residue) -> Result<Residue> {
        building::proj_image(self, r, t)
    }

    /// Follows the canonical word of `δ(x, y)`.
    pub fn minimal_gallery(&self, x: &Elem, y: &Elem) -> Vec<Elem> {
        let d = self.delta(x, y);
        let mut out = vec![x.clone()];
        for &s in d.word() {
            let next = self.group.right_mul_gen(out.last().unwrap(), s as usize);
            out.push(next);
        }
        out
    }

    /// All roots whose wall passes through the spherical residue `r`.
    pub fn roots_through(&self, r: &Residue) -> Result<Vec<Root>> {
        Ok(self
            .residue_reflections(r)?
            .into_iter()
            .flat_map(|t| [Root::new(t.clone(), Sign::Plus), Root::new(t, Sign::Minus)])
            .collect())
    }

    fn require_two_dimensional(&self) -> Result<()> {
        if self.matrix().is_two_dimensional() {
            Ok(())
        } else {
            Err(Error::Hypothesis(
                "some standard subgroup of rank 3 is finite, so shared rank-2 walls need not be unique"
                    .into(),
            ))
        }
    }

    /// The rank-2 residue whose reflections include both `r_α` and `r_β`,
    /// searched among residues with representative in `ball(radius)`.
    pub fn shared_wall2(&self, alpha: &Root, beta: &Root, radius: usize) -> Result<Option<Residue>> {
        if alpha.same_wall(beta) {
            return Err(Error::SameWall(self.format_root(alpha), self.format_root(beta)));
        }
        self.require_two_dimensional()?;
        let pairs = self.matrix().spherical_subsets(2);
        let pairs: Vec<SubsetJ> = pairs.into_iter().filter(|j| j.len() == 2).collect();
        let mut found: Vec<Residue> = Vec::new();
        for w in self.ball(radius)?.iter() {
            let descents = self.group.right_descents(w);
            for &j in &pairs {
                if descents.bits() & j.bits() != 0 {
                    continue;
                }
                let r = Residue { typeset: j, rep: w.clone() };
                if self.stabilizes(&alpha.reflection, &r) && self.stabilizes(&beta.reflection, &r) {
                    found.push(r);
                }
            }
        }
        match found.len() {
            0 => Ok(None),
            1 => Ok(found.pop()),
            _ => Err(Error::lemma(
                "at most one shared rank-2 wall residue",
                json!({
                    "alpha": self.format_root(alpha),
                    "beta": self.format_root(beta),
                    "residues": found.iter().map(|r| self.format_residue(r)).collect::<Vec<_>>(),
                }),
            )),
        }
    }

    /// `[α, β]` for crossing walls, read off inside the shared residue.
    pub fn interval(&self, alpha: &Root, beta: &Root, radius: usize) -> Result<Vec<Root>> {
        let r = self.shared_wall2(alpha, beta, radius)?.ok_or_else(|| {
            Error::NoSharedResidue(format!(
                "{} and {} within radius {radius}",
                self.format_root(alpha),
                self.format_root(beta)
            ))
        })?;
        self.interval_in(alpha, beta, &r)
    }

    /// `[α, β]` computed inside a given residue of `∂²α ∩ ∂²β`.
    pub fn interval_in(&self, alpha: &Root, beta: &Root, r: &Residue) -> Result<Vec<Root>> {
        let chambers = self.chambers(r)?;
        let both: Vec<&Elem> = chambers
            .iter()
            .filter(|x| self.root_contains(alpha, x) && self.root_contains(beta, x))
            .collect();
        let neither: Vec<&Elem> = chambers
            .iter()
            .filter(|x| !self.root_contains(alpha, x) && !self.root_contains(beta, x))
            .collect();
        let mut out: Vec<Root> = self
            .roots_through(r)?
            .into_iter()
            .filter(|g| {
                both.iter().all(|x| self.root_contains(g, x))
                    && neither.iter().all(|x| !self.root_contains(g, x))
            })
            .collect();
        out.sort();
        Ok(out)
    }

    /// `(α, β)`: the interval without its endpoints.
    pub fn open_interval(&self, alpha: &Root, beta: &Root, radius: usize) -> Result<Vec<Root>> {
        Ok(self
            .interval(alpha, beta, radius)?
            .into_iter()
            .filter(|g| g != alpha && g != beta)
            .collect())
    }

    /// Whether every chamber of the spherical residue lies in `alpha`.
    pub fn residue_inside_root(&self, r: &Residue, alpha: &Root) -> Result<bool> {
        Ok(self
            .chambers(r)?
            .iter()
            .all(|x| self.root_contains(alpha, x)))
    }

    pub fn residue_set(&self, r: &Residue) -> Result<BTreeSet<Elem>> {
        Ok(self.chambers(r)?.into_iter().collect())
    }
}

impl Building for CoxeterComplex {
    type Chamber = Elem;

    fn group(&self) -> &CoxeterGroup {
        &self.group
    }

    fn delta(&self, x: &Elem, y: &Elem) -> Elem {
        self.group.mul(&self.group.inverse(x), y)
    }

    fn residue(&self, j: SubsetJ, c: &Elem) -> Residue {
        Residue {
            typeset: j,
            rep: self.group.min_coset_rep(c, j),
        }
    }

    fn chambers(&self, r: &Residue) -> Result<Vec<Elem>> {
        let mut out: Vec<Elem> = self
            .group
            .parabolic_elements(r.typeset)?
            .iter()
            .map(|u| self.group.mul(&r.rep, u))
            .collect();
        out.sort();
        Ok(out)
    }

    fn chamber_label(&self, c: &Elem) -> String {
        self.group.format(c)
    }

    fn proj(&self, r: &Residue, c: &Elem) -> Elem {
        let u = self.group.mul(&self.group.inverse(c), &r.rep);
        self.group.mul(c, &self.group.min_coset_rep(&u, r.typeset))
    }
}

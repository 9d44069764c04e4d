//! Permutations of chamber ids and the groups they generate.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::sync::OnceLock;

/// A bijection of `0..n`, stored as its image list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<u32>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n as u32).collect())
    }

    /// `None` unless `images` is a permutation of `0..images.len()`.
    pub fn from_images(images: Vec<u32>) -> Option<Self> {
        let mut seen = vec![false; images.len()];
        for &x in &images {
            let slot = seen.get_mut(x as usize)?;
            if *slot {
                return None;
            }
            *slot = true;
        }
        Some(Perm(images))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.0[x] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&x| self.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Perm(inv)
    }

    /// `g self g⁻¹`.
    pub fn conjugate_by(&self, g: &Perm) -> Perm {
        g.compose(self).compose(&g.inverse())
    }

    /// `self⁻¹ other⁻¹ self other`.
    pub fn commutator(&self, other: &Perm) -> Perm {
        self.inverse()
            .compose(&other.inverse())
            .compose(self)
            .compose(other)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    pub fn fixes(&self, x: usize) -> bool {
        self.apply(x) == x
    }

    pub fn stabilizes(&self, set: &BTreeSet<usize>) -> bool {
        set.iter().all(|&x| set.contains(&self.apply(x)))
    }

    pub fn order(&self) -> usize {
        let mut p = self.clone();
        let mut k = 1;
        while !p.is_identity() {
            p = p.compose(self);
            k += 1;
        }
        k
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // cycle notation, fixed points omitted
        let mut seen = vec![false; self.0.len()];
        let mut any = false;
        for start in 0..self.0.len() {
            if seen[start] || self.fixes(start) {
                continue;
            }
            any = true;
            write!(f, "(")?;
            let mut x = start;
            let mut first = true;
            while !seen[x] {
                seen[x] = true;
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{x}")?;
                first = false;
                x = self.apply(x);
            }
            write!(f, ")")?;
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

/// The group generated by a list of permutations. The element list is
/// computed on first use.
#[derive(Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    closure: OnceLock<(Vec<Perm>, HashSet<Perm>)>,
}

impl Clone for PermGroup {
    fn clone(&self) -> Self {
        PermGroup::new(self.degree, self.generators.clone())
    }
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Perm>) -> Self {
        assert!(
            generators.iter().all(|g| g.degree() == degree),
            "generators must act on {degree} points"
        );
        PermGroup {
            degree,
            generators,
            closure: OnceLock::new(),
        }
    }

    pub fn trivial(degree: usize) -> Self {
        PermGroup::new(degree, Vec::new())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    fn closure(&self) -> &(Vec<Perm>, HashSet<Perm>) {
        self.closure.get_or_init(|| {
            let id = Perm::identity(self.degree);
            let mut seen: HashSet<Perm> = HashSet::from([id.clone()]);
            let mut queue = vec![id];
            while let Some(x) = queue.pop() {
                for g in &self.generators {
                    let y = g.compose(&x);
                    if seen.insert(y.clone()) {
                        queue.push(y);
                    }
                }
            }
            let mut elements: Vec<Perm> = seen.iter().cloned().collect();
            elements.sort();
            (elements, seen)
        })
    }

    /// All elements, sorted.
    pub fn elements(&self) -> &[Perm] {
        &self.closure().0
    }

    pub fn order(&self) -> usize {
        self.elements().len()
    }

    pub fn contains(&self, p: &Perm) -> bool {
        self.closure().1.contains(p)
    }

    /// Whether every generator maps `set` onto itself.
    pub fn stabilizes(&self, set: &BTreeSet<usize>) -> bool {
        self.generators.iter().all(|g| g.stabilizes(set))
    }

    /// Whether the whole group fixes `x`.
    pub fn fixes(&self, x: usize) -> bool {
        self.generators.iter().all(|g| g.fixes(x))
    }

    pub fn orbit(&self, x: usize) -> BTreeSet<usize> {
        let mut orbit = BTreeSet::from([x]);
        let mut queue = vec![x];
        while let Some(y) = queue.pop() {
            for g in &self.generators {
                let z = g.apply(y);
                if orbit.insert(z) {
                    queue.push(z);
                }
            }
        }
        orbit
    }

    /// The group generated by both generator lists.
    pub fn join(&self, other: &PermGroup) -> PermGroup {
        let mut gens = self.generators.clone();
        gens.extend(other.generators.iter().cloned());
        PermGroup::new(self.degree, gens)
    }

    /// Equality as subsets of the symmetric group.
    pub fn same_elements(&self, other: &PermGroup) -> bool {
        self.order() == other.order() && self.elements().iter().all(|p| other.contains(p))
    }

    /// `g H g⁻¹`, with conjugated generators.
    pub fn conjugate_by(&self, g: &Perm) -> PermGroup {
        PermGroup::new(
            self.degree,
            self.generators.iter().map(|x| x.conjugate_by(g)).collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize, points: &[usize]) -> Perm {
        let mut images: Vec<u32> = (0..n as u32).collect();
        for (i, &x) in points.iter().enumerate() {
            images[x] = points[(i + 1) % points.len()] as u32;
        }
        Perm::from_images(images).unwrap()
    }

    #[test]
    fn symmetric_group_orders() {
        let g = PermGroup::new(4, vec![cycle(4, &[0, 1]), cycle(4, &[0, 1, 2, 3])]);
        assert_eq!(g.order(), 24);
        let a = PermGroup::new(5, vec![cycle(5, &[0, 1, 2]), cycle(5, &[2, 3, 4])]);
        assert_eq!(a.order(), 60);
        assert_eq!(PermGroup::trivial(3).order(), 1);
    }

    #[test]
    fn compose_order() {
        let a = cycle(3, &[0, 1]);
        let b = cycle(3, &[1, 2]);
        // apply b then a: 1 -> 2 -> 2
        assert_eq!(a.compose(&b).apply(1), 2);
        assert_eq!(a.compose(&b).order(), 3);
        assert!(a.compose(&a.inverse()).is_identity());
        assert_eq!(format!("{:?}", a.compose(&b)), "(0 1 2)");
        assert!(Perm::from_images(vec![0, 0]).is_none());
    }

    #[test]
    fn orbits_and_stabilizers() {
        let g = PermGroup::new(5, vec![cycle(5, &[0, 1]), cycle(5, &[1, 2])]);
        assert_eq!(g.orbit(0), BTreeSet::from([0, 1, 2]));
        assert!(g.stabilizes(&BTreeSet::from([0, 1, 2])));
        assert!(!g.stabilizes(&BTreeSet::from([0, 1])));
        assert!(g.fixes(4));
    }
}

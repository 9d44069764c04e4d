//! Point-line incidence geometries: the Fano plane, the doily, and a loader
//! for flag lists.

use std::collections::{BTreeSet, HashMap};

use itertools::Itertools;

use crate::error::{Error, Result};

/// Points and lines with a set of incident pairs. Flags are kept sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceGeometry {
    num_points: usize,
    num_lines: usize,
    flags: Vec<(usize, usize)>,
}

impl IncidenceGeometry {
    pub fn new(num_points: usize, num_lines: usize, flags: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let flags: BTreeSet<(usize, usize)> = flags.into_iter().collect();
        if let Some(&(p, l)) = flags.iter().find(|&&(p, l)| p >= num_points || l >= num_lines) {
            return Err(Error::Validation(format!("flag (p{p}, l{l}) is out of range")));
        }
        Ok(IncidenceGeometry {
            num_points,
            num_lines,
            flags: flags.into_iter().collect(),
        })
    }

    pub fn num_points(&self) -> usize {
        self.num_points
    }

    pub fn num_lines(&self) -> usize {
        self.num_lines
    }

    pub fn flags(&self) -> &[(usize, usize)] {
        &self.flags
    }

    pub fn flag_index(&self, flag: (usize, usize)) -> Option<usize> {
        self.flags.binary_search(&flag).ok()
    }

    pub fn points_on(&self, line: usize) -> Vec<usize> {
        self.flags.iter().filter(|f| f.1 == line).map(|f| f.0).collect()
    }

    pub fn lines_through(&self, point: usize) -> Vec<usize> {
        self.flags.iter().filter(|f| f.0 == point).map(|f| f.1).collect()
    }

    /// The geometry with one flag removed; ids are kept.
    pub fn without_flag(&self, index: usize) -> Self {
        let mut flags = self.flags.clone();
        flags.remove(index);
        IncidenceGeometry { flags, ..*self }
    }

    /// Flag-list serialization with dense ids.
    pub fn to_incidence_text(&self) -> String {
        self.flags
            .iter()
            .map(|(p, l)| format!("p{p} l{l}\n"))
            .collect()
    }
}

/// Points are the nonzero vectors of `GF(2)^3` (id `v - 1`), lines the
/// nonzero dual vectors `u` with `{ v : v.u = 0 }` (id `u - 1`).
pub fn fano_plane() -> IncidenceGeometry {
    let flags = (1u32..8)
        .cartesian_product(1u32..8)
        .filter(|&(v, u)| (v & u).count_ones() % 2 == 0)
        .map(|(v, u)| (v as usize - 1, u as usize - 1));
    IncidenceGeometry::new(7, 7, flags).expect("fano construction is in range")
}

/// The 15 two-element subsets of `{0, .., 5}`, in lexicographic order.
pub fn duads() -> Vec<(usize, usize)> {
    (0..6).tuple_combinations().collect()
}

/// The 15 partitions of `{0, .., 5}` into three duads, each sorted, in
/// lexicographic order.
pub fn synthemes() -> Vec<[(usize, usize); 3]> {
    let d = duads();
    let mut out = Vec::new();
    for (i, a) in d.iter().enumerate() {
        for (j, b) in d.iter().enumerate().skip(i + 1) {
            for c in d.iter().skip(j + 1) {
                let mut seen = [false; 6];
                let disjoint = [a, b, c].iter().all(|&&(x, y)| {
                    let fresh = !seen[x] && !seen[y];
                    seen[x] = true;
                    seen[y] = true;
                    fresh
                });
                if disjoint {
                    out.push([*a, *b, *c]);
                }
            }
        }
    }
    out
}

/// The generalized quadrangle of order (2, 2): duads and synthemes.
pub fn doily() -> IncidenceGeometry {
    let d = duads();
    let flags = synthemes()
        .into_iter()
        .enumerate()
        .flat_map(|(l, syn)| {
            syn.into_iter()
                .map(|duad| d.iter().position(|&x| x == duad).unwrap())
                .map(move |p| (p, l))
                .collect::<Vec<_>>()
        });
    IncidenceGeometry::new(15, 15, flags).expect("doily construction is in range")
}

/// Parses `p<uint> l<uint>` lines; `#` starts a comment line. Ids are
/// renumbered densely in order of first appearance.
pub fn load_incidence(text: &str) -> Result<IncidenceGeometry> {
    let mut points: HashMap<u64, usize> = HashMap::new();
    let mut lines: HashMap<u64, usize> = HashMap::new();
    let mut flags = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let [pt, lt] = tokens.as_slice() else {
            return Err(Error::Parse(format!("line {}: expected two tokens", no + 1)));
        };
        let id = |tok: &str, prefix: char| -> Result<u64> {
            tok.strip_prefix(prefix)
                .filter(|rest| !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()))
                .and_then(|rest| rest.parse().ok())
                .ok_or_else(|| Error::Parse(format!("line {}: bad token {tok:?}", no + 1)))
        };
        let (p, l) = (id(pt, 'p')?, id(lt, 'l')?);
        let n = points.len();
        let p = *points.entry(p).or_insert(n);
        let n = lines.len();
        let l = *lines.entry(l).or_insert(n);
        flags.push((p, l));
    }
    if flags.is_empty() {
        return Err(Error::Parse("no flags".into()));
    }
    IncidenceGeometry::new(points.len(), lines.len(), flags)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fano_counts() {
        let g = fano_plane();
        assert_eq!((g.num_points(), g.num_lines(), g.flags().len()), (7, 7, 21));
        for x in 0..7 {
            assert_eq!(g.points_on(x).len(), 3);
            assert_eq!(g.lines_through(x).len(), 3);
        }
    }

    #[test]
    fn doily_counts() {
        let g = doily();
        assert_eq!((g.num_points(), g.num_lines(), g.flags().len()), (15, 15, 45));
        for x in 0..15 {
            assert_eq!(g.points_on(x).len(), 3);
            assert_eq!(g.lines_through(x).len(), 3);
        }
    }

    #[test]
    fn loader() {
        let g = load_incidence("p1 l1\np2 l1").unwrap();
        assert_eq!((g.num_points(), g.num_lines(), g.flags().len()), (2, 1, 2));
        let g = load_incidence("# comment\np7 l3\n\np2 l3\np7 l9\n").unwrap();
        assert_eq!(g.flags(), &[(0, 0), (0, 1), (1, 0)]);
        assert!(matches!(load_incidence("x1 l1"), Err(Error::Parse(_))));
        assert!(matches!(load_incidence("p1"), Err(Error::Parse(_))));
        assert!(matches!(load_incidence("p1 l1 l2"), Err(Error::Parse(_))));
        assert!(matches!(load_incidence("p l1"), Err(Error::Parse(_))));
        assert!(matches!(load_incidence(""), Err(Error::Parse(_))));
        let round = load_incidence(&fano_plane().to_incidence_text()).unwrap();
        assert_eq!(round.flags().len(), 21);
    }
}

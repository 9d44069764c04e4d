//! Coxeter matrices and exact arithmetic in the corresponding Coxeter groups.
//!
//! Group elements are stored as canonical words: the ShortLex-least reduced
//! word among all reduced words of the element. Reduced words of one element
//! are connected by braid moves (Matsumoto), so the canonical word is found by
//! exploring the braid-move class of any reduced word. Right multiplication by
//! a generator is memoized.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::RwLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on the number of elements any enumeration may produce.
pub const DEFAULT_MAX_ELEMENTS: usize = 500_000;

/// Maximal supported rank (subsets are stored as bitmasks).
pub const MAX_RANK: usize = 16;

/// The order `m_st` of a product of two generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Order {
    Finite(u32),
    Infinite,
}

impl Order {
    pub fn finite(self) -> Option<u32> {
        match self {
            Order::Finite(m) => Some(m),
            Order::Infinite => None,
        }
    }

    /// File encoding: `0` stands for infinity.
    pub fn from_file(value: u64) -> Result<Self> {
        match value {
            0 => Ok(Order::Infinite),
            v if v <= u32::MAX as u64 => Ok(Order::Finite(v as u32)),
            v => Err(Error::Validation(format!("order {v} out of range"))),
        }
    }

    pub fn to_file(self) -> u64 {
        match self {
            Order::Finite(m) => m as u64,
            Order::Infinite => 0,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(m) => write!(f, "{m}"),
            Order::Infinite => write!(f, "inf"),
        }
    }
}

/// A set of generator indices.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetJ(u32);

impl SubsetJ {
    pub const EMPTY: SubsetJ = SubsetJ(0);

    pub fn from_bits(bits: u32) -> Self {
        SubsetJ(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn singleton(s: usize) -> Self {
        SubsetJ(1 << s)
    }

    pub fn pair(s: usize, t: usize) -> Self {
        SubsetJ((1 << s) | (1 << t))
    }

    pub fn full(rank: usize) -> Self {
        SubsetJ(((1u64 << rank) - 1) as u32)
    }

    pub fn contains(self, s: usize) -> bool {
        self.0 & (1 << s) != 0
    }

    pub fn insert(&mut self, s: usize) {
        self.0 |= 1 << s;
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: SubsetJ) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: SubsetJ) -> SubsetJ {
        SubsetJ(self.0 | other.0)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |&s| self.0 & (1 << s) != 0)
    }
}

impl FromIterator<usize> for SubsetJ {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut j = SubsetJ::EMPTY;
        for s in iter {
            j.insert(s);
        }
        j
    }
}

/// Irreducible finite Coxeter types.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FiniteType {
    A(usize),
    B(usize),
    D(usize),
    E(usize),
    F4,
    H(usize),
    I2(u32),
}

impl fmt::Display for FiniteType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiniteType::A(n) => write!(f, "A{n}"),
            FiniteType::B(n) => write!(f, "B{n}"),
            FiniteType::D(n) => write!(f, "D{n}"),
            FiniteType::E(n) => write!(f, "E{n}"),
            FiniteType::F4 => write!(f, "F4"),
            FiniteType::H(n) => write!(f, "H{n}"),
            FiniteType::I2(m) => write!(f, "I2({m})"),
        }
    }
}

#[derive(Deserialize, Serialize)]
struct DiagramFile {
    generators: Vec<String>,
    m: Vec<Vec<u64>>,
}

/// The type `(W, S)` given by a symmetric matrix of orders.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoxeterMatrix {
    names: Vec<String>,
    m: Vec<Vec<Order>>,
}

impl CoxeterMatrix {
    pub fn new(names: Vec<String>, m: Vec<Vec<Order>>) -> Result<Self> {
        let rank = names.len();
        if rank == 0 {
            return Err(Error::Validation("at least one generator is required".into()));
        }
        if rank > MAX_RANK {
            return Err(Error::Validation(format!("rank {rank} exceeds {MAX_RANK}")));
        }
        let mut seen = HashSet::new();
        for name in &names {
            if name.is_empty() || name.contains('.') {
                return Err(Error::Validation(format!("invalid generator name {name:?}")));
            }
            if !seen.insert(name.as_str()) {
                return Err(Error::Validation(format!("duplicate generator name {name:?}")));
            }
        }
        if m.len() != rank || m.iter().any(|row| row.len() != rank) {
            return Err(Error::Validation(format!("matrix must be {rank}x{rank}")));
        }
        for s in 0..rank {
            if m[s][s] != Order::Finite(1) {
                return Err(Error::Validation(format!("diagonal entry m[{s}][{s}] must be 1")));
            }
            for t in 0..rank {
                if m[s][t] != m[t][s] {
                    return Err(Error::Validation(format!("matrix is not symmetric at ({s},{t})")));
                }
                if s != t {
                    if let Order::Finite(v) = m[s][t] {
                        if v < 2 {
                            return Err(Error::Validation(format!(
                                "off-diagonal entry m[{s}][{t}] = {v} must be at least 2"
                            )));
                        }
                    }
                }
            }
        }
        Ok(CoxeterMatrix { names, m })
    }

    /// Builds a matrix from names and integer orders, `0` meaning infinity.
    pub fn from_orders(names: &[&str], rows: &[&[u64]]) -> Result<Self> {
        let m = rows
            .iter()
            .map(|row| row.iter().map(|&v| Order::from_file(v)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::new(names.iter().map(|s| s.to_string()).collect(), m)
    }

    /// Rank-3 matrix on generators `a, b, c` with `m_ab = p`, `m_bc = q`, `m_ac = r`.
    pub fn triangle(p: u64, q: u64, r: u64) -> Result<Self> {
        Self::from_orders(&["a", "b", "c"], &[&[1, p, r], &[p, 1, q], &[r, q, 1]])
    }

    /// Parses the JSON diagram format: `{"generators": [...], "m": [[...], ...]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: DiagramFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let m = file
            .m
            .iter()
            .map(|row| row.iter().map(|&v| Order::from_file(v)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::new(file.generators, m)
    }

    pub fn to_json(&self) -> String {
        let file = DiagramFile {
            generators: self.names.clone(),
            m: self
                .m
                .iter()
                .map(|row| row.iter().map(|o| o.to_file()).collect())
                .collect(),
        };
        serde_json::to_string(&file).expect("diagram serialization cannot fail")
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, s: usize) -> &str {
        &self.names[s]
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn order(&self, s: usize, t: usize) -> Order {
        self.m[s][t]
    }

    pub fn is_two_spherical(&self) -> bool {
        self.off_diagonal().all(|(_, _, o)| o != Order::Infinite)
    }

    /// Every off-diagonal entry is finite and at least 3.
    pub fn is_two_complete(&self) -> bool {
        self.off_diagonal()
            .all(|(_, _, o)| matches!(o, Order::Finite(v) if v >= 3))
    }

    /// No three generators pairwise joined by label 3.
    pub fn is_a2tilde_free(&self) -> bool {
        let three = |s: usize, t: usize| self.m[s][t] == Order::Finite(3);
        let n = self.rank();
        for r in 0..n {
            for s in r + 1..n {
                for t in s + 1..n {
                    if three(r, s) && three(s, t) && three(r, t) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Every standard subgroup on three or more generators is infinite.
    pub fn is_two_dimensional(&self) -> bool {
        let n = self.rank();
        (0..n).all(|r| {
            (r + 1..n).all(|s| {
                (s + 1..n).all(|t| {
                    let j = SubsetJ::from_bits((1 << r) | (1 << s) | (1 << t));
                    !self.is_spherical(j)
                })
            })
        })
    }

    fn off_diagonal(&self) -> impl Iterator<Item = (usize, usize, Order)> + '_ {
        let n = self.rank();
        (0..n).flat_map(move |s| (s + 1..n).map(move |t| (s, t, self.m[s][t])))
    }

    pub fn format_subset(&self, j: SubsetJ) -> String {
        let names: Vec<&str> = j.iter().map(|s| self.name(s)).collect();
        format!("{{{}}}", names.join(","))
    }

    /// Finite irreducible components of the diagram induced on `j`, or `None`
    /// if the standard subgroup is infinite.
    pub fn classify(&self, j: SubsetJ) -> Option<Vec<FiniteType>> {
        let members: Vec<usize> = j.iter().collect();
        let mut component = vec![usize::MAX; self.rank()];
        let mut types = Vec::new();
        for &start in &members {
            if component[start] != usize::MAX {
                continue;
            }
            let mut nodes = vec![start];
            component[start] = start;
            let mut i = 0;
            while i < nodes.len() {
                let u = nodes[i];
                i += 1;
                for &v in &members {
                    if v != u && component[v] == usize::MAX && self.m[u][v] != Order::Finite(2) {
                        component[v] = start;
                        nodes.push(v);
                    }
                }
            }
            nodes.sort_unstable();
            types.push(self.classify_connected(&nodes)?);
        }
        types.sort();
        Some(types)
    }

    fn classify_connected(&self, nodes: &[usize]) -> Option<FiniteType> {
        let n = nodes.len();
        if n == 1 {
            return Some(FiniteType::A(1));
        }
        let mut edges = Vec::new();
        for (i, &u) in nodes.iter().enumerate() {
            for &v in &nodes[i + 1..] {
                match self.m[u][v] {
                    Order::Finite(2) => {}
                    Order::Infinite => return None,
                    Order::Finite(label) => edges.push((u, v, label)),
                }
            }
        }
        if n == 2 {
            return Some(FiniteType::I2(edges[0].2));
        }
        // Finite connected diagrams are trees.
        if edges.len() != n - 1 {
            return None;
        }
        let degree = |x: usize| edges.iter().filter(|e| e.0 == x || e.1 == x).count();
        let big: Vec<&(usize, usize, u32)> = edges.iter().filter(|e| e.2 > 3).collect();
        let branch: Vec<usize> = nodes.iter().copied().filter(|&x| degree(x) >= 3).collect();
        if big.is_empty() {
            if branch.is_empty() {
                return Some(FiniteType::A(n));
            }
            if branch.len() > 1 || degree(branch[0]) > 3 {
                return None;
            }
            let center = branch[0];
            let mut arms: Vec<usize> = edges
                .iter()
                .filter(|e| e.0 == center || e.1 == center)
                .map(|e| {
                    let first = if e.0 == center { e.1 } else { e.0 };
                    arm_length(&edges, center, first)
                })
                .collect();
            arms.sort_unstable();
            return match (arms[0], arms[1], arms[2]) {
                (1, 1, _) => Some(FiniteType::D(n)),
                (1, 2, 2) => Some(FiniteType::E(6)),
                (1, 2, 3) => Some(FiniteType::E(7)),
                (1, 2, 4) => Some(FiniteType::E(8)),
                _ => None,
            };
        }
        if big.len() > 1 || !branch.is_empty() {
            return None;
        }
        let (u, v, label) = *big[0];
        let at_end = degree(u) == 1 || degree(v) == 1;
        match label {
            4 if at_end => Some(FiniteType::B(n)),
            4 if n == 4 => Some(FiniteType::F4),
            5 if at_end && n <= 4 => Some(FiniteType::H(n)),
            _ => None,
        }
    }

    /// Whether the standard subgroup generated by `j` is finite.
    pub fn is_spherical(&self, j: SubsetJ) -> bool {
        self.classify(j).is_some()
    }

    /// All spherical subsets of size at most `max_size`, ordered by size then bits.
    pub fn spherical_subsets(&self, max_size: usize) -> Vec<SubsetJ> {
        let mut out: Vec<SubsetJ> = (0..(1u32 << self.rank()))
            .map(SubsetJ)
            .filter(|j| j.len() <= max_size && self.is_spherical(*j))
            .collect();
        out.sort_by_key(|j| (j.len(), j.0));
        out
    }
}

fn arm_length(edges: &[(usize, usize, u32)], from: usize, first: usize) -> usize {
    let (mut prev, mut cur, mut len) = (from, first, 1);
    loop {
        let next = edges.iter().find_map(|e| {
            if e.0 == cur && e.1 != prev {
                Some(e.1)
            } else if e.1 == cur && e.0 != prev {
                Some(e.0)
            } else {
                None
            }
        });
        match next {
            Some(n) => {
                prev = cur;
                cur = n;
                len += 1;
            }
            None => return len,
        }
    }
}

/// An element of a Coxeter group, held as its canonical (ShortLex-least
/// reduced) word of generator indices. Only a [`CoxeterGroup`] creates them.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Elem {
    word: Vec<u8>,
}

impl Elem {
    pub fn identity() -> Self {
        Elem { word: Vec::new() }
    }

    pub fn word(&self) -> &[u8] {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    /// Letters of the canonical word as a subset of generators.
    pub fn support(&self) -> SubsetJ {
        self.word.iter().map(|&s| s as usize).collect()
    }
}

impl Ord for Elem {
    fn cmp(&self, other: &Self) -> Ordering {
        self.word
            .len()
            .cmp(&other.word.len())
            .then_with(|| self.word.cmp(&other.word))
    }
}

impl PartialOrd for Elem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone)]
struct Info {
    descents: u32,
    down: Vec<Option<Elem>>,
}

#[derive(Default)]
struct Cache {
    up: HashMap<(Elem, u8), Elem>,
    info: HashMap<Elem, Info>,
    parabolic: HashMap<SubsetJ, Vec<Elem>>,
    reflections: HashMap<SubsetJ, Vec<Elem>>,
}

/// A Coxeter group with memoized word arithmetic.
///
/// All caches sit behind a lock and only ever receive values that are pure
/// functions of their keys, so concurrent use gives the same results as
/// sequential use.
pub struct CoxeterGroup {
    matrix: CoxeterMatrix,
    max_elements: usize,
    braids: Vec<(u8, u8, usize)>,
    cache: RwLock<Cache>,
}

impl fmt::Debug for CoxeterGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoxeterGroup")
            .field("matrix", &self.matrix)
            .field("max_elements", &self.max_elements)
            .finish()
    }
}

/// Clones start with an empty cache.
impl Clone for CoxeterGroup {
    fn clone(&self) -> Self {
        CoxeterGroup::new(self.matrix.clone()).with_max_elements(self.max_elements)
    }
}

impl CoxeterGroup {
    pub fn new(matrix: CoxeterMatrix) -> Self {
        let n = matrix.rank();
        let mut braids = Vec::new();
        for s in 0..n {
            for t in 0..n {
                if s != t {
                    if let Order::Finite(m) = matrix.order(s, t) {
                        braids.push((s as u8, t as u8, m as usize));
                    }
                }
            }
        }
        CoxeterGroup {
            matrix,
            max_elements: DEFAULT_MAX_ELEMENTS,
            braids,
            cache: RwLock::new(Cache::default()),
        }
    }

    pub fn with_max_elements(mut self, cap: usize) -> Self {
        self.max_elements = cap;
        self
    }

    pub fn max_elements(&self) -> usize {
        self.max_elements
    }

    pub fn matrix(&self) -> &CoxeterMatrix {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn identity(&self) -> Elem {
        Elem::identity()
    }

    pub fn generator(&self, s: usize) -> Elem {
        Elem { word: vec![s as u8] }
    }

    pub fn generators(&self) -> Vec<Elem> {
        (0..self.rank()).map(|s| self.generator(s)).collect()
    }

    /// Explores the braid-move class of a reduced word. Returns the canonical
    /// element and, for every right descent `s`, the canonical form of `w s`.
    fn analyze(&self, word: Vec<u8>) -> (Elem, Info) {
        let mut seen: HashSet<Vec<u8>> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(word.clone());
        queue.push_back(word);
        while let Some(w) = queue.pop_front() {
            for &(s, t, m) in &self.braids {
                if m > w.len() {
                    continue;
                }
                for i in 0..=w.len() - m {
                    let alternating = (0..m).all(|k| w[i + k] == if k % 2 == 0 { s } else { t });
                    if alternating {
                        let mut v = w.clone();
                        for k in 0..m {
                            v[i + k] = if k % 2 == 0 { t } else { s };
                        }
                        if seen.insert(v.clone()) {
                            queue.push_back(v);
                        }
                    }
                }
            }
        }
        let rank = self.rank();
        let mut descents = 0u32;
        let mut down: Vec<Option<Vec<u8>>> = vec![None; rank];
        let mut canonical: Option<&Vec<u8>> = None;
        for w in &seen {
            if canonical.is_none_or(|c| w < c) {
                canonical = Some(w);
            }
            if let Some((&last, prefix)) = w.split_last() {
                let s = last as usize;
                descents |= 1 << s;
                if down[s].as_ref().is_none_or(|d| prefix < d.as_slice()) {
                    down[s] = Some(prefix.to_vec());
                }
            }
        }
        let canonical = Elem {
            word: canonical.cloned().unwrap_or_default(),
        };
        let info = Info {
            descents,
            down: down.into_iter().map(|d| d.map(|word| Elem { word })).collect(),
        };
        (canonical, info)
    }

    fn info(&self, w: &Elem) -> Info {
        if let Some(info) = self.cache.read().unwrap().info.get(w) {
            return info.clone();
        }
        let (canonical, info) = self.analyze(w.word.clone());
        debug_assert_eq!(&canonical, w, "element is not in canonical form");
        self.cache
            .write()
            .unwrap()
            .info
            .entry(canonical)
            .or_insert_with(|| info.clone());
        info
    }

    /// Bitmask of right descents of `w`.
    pub fn right_descents(&self, w: &Elem) -> SubsetJ {
        SubsetJ(self.info(w).descents)
    }

    pub fn is_right_descent(&self, w: &Elem, s: usize) -> bool {
        self.right_descents(w).contains(s)
    }

    pub fn is_left_descent(&self, w: &Elem, s: usize) -> bool {
        self.left_mul_gen(s, w).len() < w.len()
    }

    /// `w * s` for a generator `s`.
    pub fn right_mul_gen(&self, w: &Elem, s: usize) -> Elem {
        let key = (w.clone(), s as u8);
        if let Some(v) = self.cache.read().unwrap().up.get(&key) {
            return v.clone();
        }
        let info = self.info(w);
        let result = if info.descents & (1 << s) != 0 {
            info.down[s].clone().expect("descent without recorded prefix")
        } else {
            let mut word = w.word.clone();
            word.push(s as u8);
            let (product, product_info) = self.analyze(word);
            let mut cache = self.cache.write().unwrap();
            cache.info.entry(product.clone()).or_insert(product_info);
            cache.up.insert((product.clone(), s as u8), w.clone());
            product
        };
        self.cache.write().unwrap().up.insert(key, result.clone());
        result
    }

    /// `s * w` for a generator `s`.
    pub fn left_mul_gen(&self, s: usize, w: &Elem) -> Elem {
        self.mul(&self.generator(s), w)
    }

    pub fn mul(&self, w: &Elem, v: &Elem) -> Elem {
        v.word
            .iter()
            .fold(w.clone(), |acc, &s| self.right_mul_gen(&acc, s as usize))
    }

    pub fn inverse(&self, w: &Elem) -> Elem {
        self.canonical(&w.word.iter().rev().copied().collect::<Vec<_>>())
    }

    /// `v * t * v^-1`.
    pub fn conjugate(&self, t: &Elem, v: &Elem) -> Elem {
        self.mul(&self.mul(v, t), &self.inverse(v))
    }

    pub fn length(&self, w: &Elem) -> usize {
        w.len()
    }

    /// Canonical form of an arbitrary (not necessarily reduced) word.
    pub fn canonical(&self, word: &[u8]) -> Elem {
        word.iter()
            .fold(Elem::identity(), |acc, &s| self.right_mul_gen(&acc, s as usize))
    }

    /// Parses `a.b.c` (empty string is the identity).
    pub fn parse_elem(&self, text: &str) -> Result<Elem> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Elem::identity());
        }
        let word = text
            .split('.')
            .map(|name| {
                self.matrix
                    .generator_index(name)
                    .map(|s| s as u8)
                    .ok_or_else(|| Error::Parse(format!("unknown generator {name:?}")))
            })
            .collect::<Result<Vec<u8>>>()?;
        Ok(self.canonical(&word))
    }

    /// Canonical serialization: generator names joined by `.`.
    pub fn format(&self, w: &Elem) -> String {
        w.word
            .iter()
            .map(|&s| self.matrix.name(s as usize))
            .collect::<Vec<_>>()
            .join(".")
    }

    /// All elements of length at most `radius`, in ShortLex order.
    pub fn ball(&self, radius: usize) -> Result<Vec<Elem>> {
        let mut all = vec![Elem::identity()];
        let mut level = vec![Elem::identity()];
        for _ in 0..radius {
            let mut next = HashSet::new();
            for w in &level {
                let descents = self.right_descents(w);
                for s in 0..self.rank() {
                    if !descents.contains(s) {
                        next.insert(self.right_mul_gen(w, s));
                    }
                }
            }
            if all.len() + next.len() > self.max_elements {
                return Err(Error::ResourceLimit(format!(
                    "ball of radius {radius} exceeds the element cap of {}",
                    self.max_elements
                )));
            }
            let mut next: Vec<Elem> = next.into_iter().collect();
            next.sort();
            all.extend(next.iter().cloned());
            level = next;
        }
        Ok(all)
    }

    /// Elements of the standard subgroup generated by `j`, in ShortLex order.
    pub fn parabolic_elements(&self, j: SubsetJ) -> Result<Vec<Elem>> {
        if let Some(v) = self.cache.read().unwrap().parabolic.get(&j) {
            return Ok(v.clone());
        }
        if !self.matrix.is_spherical(j) {
            return Err(Error::NotSpherical(self.matrix.format_subset(j)));
        }
        let mut all = vec![Elem::identity()];
        let mut level = vec![Elem::identity()];
        while !level.is_empty() {
            let mut next = HashSet::new();
            for w in &level {
                for s in j.iter() {
                    if !self.is_right_descent(w, s) {
                        next.insert(self.right_mul_gen(w, s));
                    }
                }
            }
            if all.len() + next.len() > self.max_elements {
                return Err(Error::ResourceLimit(format!(
                    "standard subgroup {} exceeds the element cap",
                    self.matrix.format_subset(j)
                )));
            }
            let mut next: Vec<Elem> = next.into_iter().collect();
            next.sort();
            all.extend(next.iter().cloned());
            level = next;
        }
        self.cache
            .write()
            .unwrap()
            .parabolic
            .insert(j, all.clone());
        Ok(all)
    }

    /// Reflections of the (finite) standard subgroup generated by `j`.
    pub fn parabolic_reflections(&self, j: SubsetJ) -> Result<Vec<Elem>> {
        if let Some(v) = self.cache.read().unwrap().reflections.get(&j) {
            return Ok(v.clone());
        }
        let elements = self.parabolic_elements(j)?;
        let mut refl: Vec<Elem> = elements
            .iter()
            .flat_map(|v| j.iter().map(move |s| (v, s)))
            .map(|(v, s)| self.conjugate(&self.generator(s), v))
            .collect::<HashSet<_>>()
            .into_iter()
            .collect();
        refl.sort();
        self.cache
            .write()
            .unwrap()
            .reflections
            .insert(j, refl.clone());
        Ok(refl)
    }

    /// The longest element `r_J` of a spherical standard subgroup.
    pub fn longest_element(&self, j: SubsetJ) -> Result<Elem> {
        if !self.matrix.is_spherical(j) {
            return Err(Error::NotSpherical(self.matrix.format_subset(j)));
        }
        let mut w = Elem::identity();
        while let Some(s) = j.iter().find(|&s| !self.is_right_descent(&w, s)) {
            w = self.right_mul_gen(&w, s);
        }
        Ok(w)
    }

    /// The unique minimal-length element of the coset `w <J>`.
    pub fn min_coset_rep(&self, w: &Elem, j: SubsetJ) -> Elem {
        let mut w = w.clone();
        while let Some(s) = j.iter().find(|&s| self.is_right_descent(&w, s)) {
            w = self.right_mul_gen(&w, s);
        }
        w
    }

    /// Membership in the standard subgroup `<J>`.
    pub fn in_parabolic(&self, w: &Elem, j: SubsetJ) -> bool {
        w.support().is_subset(j)
    }

    /// Whether `t` is conjugate to a generator.
    pub fn is_reflection(&self, t: &Elem) -> bool {
        if t.len() % 2 == 0 || !self.mul(t, t).is_identity() {
            return false;
        }
        let mut t = t.clone();
        'outer: while t.len() > 1 {
            for s in 0..self.rank() {
                if self.is_right_descent(&t, s) {
                    let shorter = self.left_mul_gen(s, &self.right_mul_gen(&t, s));
                    if shorter.len() + 2 == t.len() {
                        t = shorter;
                        continue 'outer;
                    }
                }
            }
            return false;
        }
        true
    }
}

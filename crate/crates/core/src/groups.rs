//! Finite permutation groups, their actions, orbits and the induced action on
//! nonempty proper subsets.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("permutation is not a bijection on {degree} points")]
    NotBijective { degree: usize },
    #[error("group closure exceeded the cap of {cap} elements")]
    CapExceeded { cap: usize },
    #[error("generator acts on {found} points, expected {expected}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("alphabet letter `{0}` appears twice")]
    DuplicateLetter(String),
    #[error("alphabet must contain at least one letter")]
    EmptyAlphabet,
    #[error("alphabet of size {0} is too large for subset bitmasks")]
    TooLarge(usize),
}

/// Ordered list of distinct letter labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    letters: Vec<String>,
}

impl Alphabet {
    pub fn new(letters: Vec<String>) -> Result<Self, GroupError> {
        if letters.is_empty() {
            return Err(GroupError::EmptyAlphabet);
        }
        let mut seen = BTreeSet::new();
        for l in &letters {
            if !seen.insert(l.as_str()) {
                return Err(GroupError::DuplicateLetter(l.clone()));
            }
        }
        Ok(Self { letters })
    }

    /// The alphabet `{0, 1, ..., m-1}`.
    pub fn indexed(m: usize) -> Self {
        assert!(m >= 1, "alphabet must be nonempty");
        Self { letters: (0..m).map(|i| i.to_string()).collect() }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[String] {
        &self.letters
    }

    pub fn index_of(&self, letter: &str) -> Option<usize> {
        self.letters.iter().position(|l| l == letter)
    }
}

/// A bijection on `{0, ..., n-1}`, stored as the image of each point.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self, GroupError> {
        let n = images.len();
        let mut hit = vec![false; n];
        for &i in &images {
            if i >= n || hit[i] {
                return Err(GroupError::NotBijective { degree: n });
            }
            hit[i] = true;
        }
        Ok(Self(images))
    }

    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    /// The cycle `(c0 c1 ... ck)` on `n` points.
    pub fn cycle(n: usize, points: &[usize]) -> Result<Self, GroupError> {
        let mut img: Vec<usize> = (0..n).collect();
        for (i, &p) in points.iter().enumerate() {
            if p >= n {
                return Err(GroupError::NotBijective { degree: n });
            }
            img[p] = points[(i + 1) % points.len()];
        }
        Self::new(img)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.0[x]
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Permutation(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// A materialized finite permutation group.
///
/// Element 0 is always the identity. Every other element records the
/// generator and the earlier element it was reached from, so that actions on
/// other carriers can be induced from generator images.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
    /// `(generator, parent)` with `elements[i] = generators[gen] ∘ elements[parent]`.
    words: Vec<Option<(usize, usize)>>,
    index: BTreeMap<Permutation, usize>,
}

impl PermGroup {
    /// Closure of `generators` under composition, failing past `cap` elements.
    pub fn generate(degree: usize, generators: Vec<Permutation>, cap: usize) -> Result<Self, GroupError> {
        for g in &generators {
            if g.degree() != degree {
                return Err(GroupError::DegreeMismatch { expected: degree, found: g.degree() });
            }
        }
        let id = Permutation::identity(degree);
        let mut elements = vec![id.clone()];
        let mut words = vec![None];
        let mut index = BTreeMap::new();
        index.insert(id, 0);
        let mut head = 0;
        while head < elements.len() {
            for (gi, g) in generators.iter().enumerate() {
                let next = g.compose(&elements[head]);
                if index.contains_key(&next) {
                    continue;
                }
                if elements.len() >= cap {
                    return Err(GroupError::CapExceeded { cap });
                }
                index.insert(next.clone(), elements.len());
                elements.push(next);
                words.push(Some((gi, head)));
            }
            head += 1;
        }
        Ok(Self { degree, generators, elements, words, index })
    }

    pub fn trivial(degree: usize) -> Self {
        Self::generate(degree, Vec::new(), 1).expect("trivial group fits any cap")
    }

    /// `Z_n` acting by `x ↦ x + 1 mod n`.
    pub fn cyclic(n: usize) -> Self {
        let shift = Permutation((0..n).map(|i| (i + 1) % n).collect());
        Self::generate(n, vec![shift], n.max(1)).expect("cyclic group has order n")
    }

    /// `Sym(n)` generated by a transposition and an n-cycle.
    pub fn symmetric(n: usize, cap: usize) -> Result<Self, GroupError> {
        let mut gens = Vec::new();
        if n >= 2 {
            gens.push(Permutation::cycle(n, &[0, 1])?);
        }
        if n >= 3 {
            gens.push(Permutation((0..n).map(|i| (i + 1) % n).collect()));
        }
        Self::generate(n, gens, cap)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Permutation {
        &self.elements[i]
    }

    pub fn index_of(&self, p: &Permutation) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// Index of `elements[g] ∘ elements[h]`.
    pub fn product(&self, g: usize, h: usize) -> usize {
        self.index[&self.elements[g].compose(&self.elements[h])]
    }

    pub fn inverse(&self, g: usize) -> usize {
        self.index[&self.elements[g].inverse()]
    }

    /// The natural action on `{0, ..., degree-1}`.
    pub fn natural_action(&self) -> GroupAction {
        GroupAction { carrier: self.degree, perms: self.elements.clone() }
    }

    /// Induces an action on another carrier from one image per generator.
    /// The result is only a genuine action if the generator images respect
    /// the group relations; [`GroupAction::satisfies_laws`] checks that.
    pub fn induced_action(&self, carrier: usize, generator_images: &[Permutation]) -> Result<GroupAction, GroupError> {
        if generator_images.len() != self.generators.len() {
            return Err(GroupError::DegreeMismatch { expected: self.generators.len(), found: generator_images.len() });
        }
        for p in generator_images {
            if p.degree() != carrier {
                return Err(GroupError::DegreeMismatch { expected: carrier, found: p.degree() });
            }
        }
        let mut perms: Vec<Permutation> = Vec::with_capacity(self.order());
        for w in &self.words {
            let p = match w {
                None => Permutation::identity(carrier),
                Some((gi, parent)) => generator_images[*gi].compose(&perms[*parent]),
            };
            perms.push(p);
        }
        Ok(GroupAction { carrier, perms })
    }

    /// The induced action `g·y = {g x : x ∈ y}` on nonempty proper subsets,
    /// indexed by [`Subset::index`].
    pub fn subset_action(&self) -> GroupAction {
        let m = self.degree;
        assert!((2..64).contains(&m), "subset action needs 2 <= m < 64");
        let subsets: Vec<Subset> = Subset::proper_nonempty(m).collect();
        let perms = self
            .elements
            .iter()
            .map(|g| Permutation(subsets.iter().map(|y| y.image(g).index()).collect()))
            .collect();
        GroupAction { carrier: subsets.len(), perms }
    }
}

/// An action of a [`PermGroup`] on a finite carrier `{0, ..., n-1}`:
/// `perms[i]` is the permutation of the carrier induced by group element `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAction {
    carrier: usize,
    perms: Vec<Permutation>,
}

impl GroupAction {
    /// The action in which every element fixes every point.
    pub fn trivial(group: &PermGroup, carrier: usize) -> Self {
        Self { carrier, perms: vec![Permutation::identity(carrier); group.order()] }
    }

    pub fn carrier_size(&self) -> usize {
        self.carrier
    }

    /// Number of group elements the action is tabulated for.
    pub fn group_order(&self) -> usize {
        self.perms.len()
    }

    /// Permutation of the carrier induced by group element `g`.
    pub fn perm(&self, g: usize) -> &Permutation {
        &self.perms[g]
    }

    pub fn apply(&self, g: usize, x: usize) -> usize {
        self.perms[g].apply(x)
    }

    /// Orbits as sorted point lists, ordered by smallest member.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.carrier];
        let mut out = Vec::new();
        for x in 0..self.carrier {
            if seen[x] {
                continue;
            }
            // breadth-first closure
            let mut orbit = vec![x];
            seen[x] = true;
            let mut head = 0;
            while head < orbit.len() {
                let y = orbit[head];
                for p in &self.perms {
                    let z = p.apply(y);
                    if !seen[z] {
                        seen[z] = true;
                        orbit.push(z);
                    }
                }
                head += 1;
            }
            orbit.sort_unstable();
            out.push(orbit);
        }
        out
    }

    pub fn is_transitive(&self) -> bool {
        self.orbits().len() == 1
    }

    /// Identity and compatibility laws, checked exhaustively.
    pub fn satisfies_laws(&self, group: &PermGroup) -> bool {
        if self.perms.len() != group.order() || !self.perms[0].is_identity() {
            return false;
        }
        (0..group.order()).all(|g| {
            (0..group.order()).all(|h| {
                let gh = group.product(g, h);
                self.perms[g].compose(&self.perms[h]) == self.perms[gh]
            })
        })
    }
}

/// A subset of an alphabet with at most 63 letters, as a bitmask over the
/// letter ordering.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subset(pub u64);

impl Subset {
    pub fn from_letters(letters: &[usize]) -> Self {
        Subset(letters.iter().fold(0u64, |m, &x| m | (1 << x)))
    }

    pub fn mask(self) -> u64 {
        self.0
    }

    /// Position among nonempty proper subsets ordered by bitmask.
    pub fn index(self) -> usize {
        (self.0 - 1) as usize
    }

    pub fn from_index(i: usize) -> Self {
        Subset(i as u64 + 1)
    }

    pub fn contains(self, x: usize) -> bool {
        self.0 >> x & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn letters(self) -> impl Iterator<Item = usize> {
        let mask = self.0;
        (0..64).filter(move |&i| mask >> i & 1 == 1)
    }

    pub fn image(self, g: &Permutation) -> Subset {
        Subset(self.letters().fold(0, |m, x| m | (1 << g.apply(x))))
    }

    /// All nonempty proper subsets of an `m`-letter alphabet, by bitmask.
    pub fn proper_nonempty(m: usize) -> impl Iterator<Item = Subset> {
        assert!(m < 64, "alphabet too large for subset enumeration");
        (1..(1u64 << m) - 1).map(Subset)
    }

    /// Number of nonempty proper subsets, `2^m - 2`.
    pub fn count(m: usize) -> usize {
        (1usize << m) - 2
    }

    /// Label such as `{0,2}` using alphabet indices.
    pub fn label(self) -> String {
        let mut s = String::from("{");
        for (i, x) in self.letters().enumerate() {
            if i > 0 {
                s.push(',');
            }
            s.push_str(&x.to_string());
        }
        s.push('}');
        s
    }
}

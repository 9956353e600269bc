use std::cmp::Ordering;
use std::fmt;

/// A phase-space coordinate: `Q(i)` or `P(i)`, zero-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variable {
    Q(usize),
    P(usize),
}

impl Variable {
    pub fn index(self) -> usize {
        match self {
            Variable::Q(i) | Variable::P(i) => i,
        }
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variable::Q(i) => write!(f, "q{}", i + 1),
            Variable::P(i) => write!(f, "p{}", i + 1),
        }
    }
}

/// Exponent vector of a single term: powers of every `Q_i`, every `P_i`
/// and of the formal `hbar`.
///
/// Ordering is the canonical term order: `hbar` power first, then total
/// phase-space degree, then lexicographic over `(q..., p...)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    q: Vec<u32>,
    p: Vec<u32>,
    hbar: u32,
}

impl MultiIndex {
    pub fn one(dimension: usize) -> Self {
        MultiIndex {
            q: vec![0; dimension],
            p: vec![0; dimension],
            hbar: 0,
        }
    }

    /// Panics if the two exponent vectors differ in length.
    pub fn new(q: Vec<u32>, p: Vec<u32>, hbar: u32) -> Self {
        assert_eq!(q.len(), p.len(), "q and p exponent vectors differ in length");
        MultiIndex { q, p, hbar }
    }

    pub fn variable(dimension: usize, var: Variable) -> Self {
        let mut m = MultiIndex::one(dimension);
        match var {
            Variable::Q(i) => m.q[i] = 1,
            Variable::P(i) => m.p[i] = 1,
        }
        m
    }

    pub fn dimension(&self) -> usize {
        self.q.len()
    }

    pub fn q_exponents(&self) -> &[u32] {
        &self.q
    }

    pub fn p_exponents(&self) -> &[u32] {
        &self.p
    }

    pub fn hbar_power(&self) -> u32 {
        self.hbar
    }

    pub fn exponent(&self, var: Variable) -> u32 {
        match var {
            Variable::Q(i) => self.q[i],
            Variable::P(i) => self.p[i],
        }
    }

    /// Total degree in the phase-space variables (`hbar` excluded).
    pub fn degree(&self) -> u32 {
        self.q.iter().chain(&self.p).sum()
    }

    pub fn with_hbar_power(mut self, hbar: u32) -> Self {
        self.hbar = hbar;
        self
    }

    pub(crate) fn set_exponent(&mut self, var: Variable, e: u32) {
        match var {
            Variable::Q(i) => self.q[i] = e,
            Variable::P(i) => self.p[i] = e,
        }
    }

    pub fn product(&self, other: &MultiIndex) -> MultiIndex {
        debug_assert_eq!(self.dimension(), other.dimension());
        MultiIndex {
            q: self.q.iter().zip(&other.q).map(|(a, b)| a + b).collect(),
            p: self.p.iter().zip(&other.p).map(|(a, b)| a + b).collect(),
            hbar: self.hbar + other.hbar,
        }
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.hbar
            .cmp(&other.hbar)
            .then_with(|| self.degree().cmp(&other.degree()))
            .then_with(|| self.q.iter().chain(&self.p).cmp(other.q.iter().chain(&other.p)))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

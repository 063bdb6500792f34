//! Presburger-definable subsets of `Z^n`, represented by minimal digit automata.
//!
//! A vector `z` is written as a word over the alphabet `{0,1}^n`, least
//! significant digit first, in two's complement: a word `b_0 … b_{l-1}` of
//! length `l >= 1` encodes, per component, `sum_{i<l-1} b_i 2^i - b_{l-1} 2^{l-1}`.
//! The last digit-vector is the sign and may be repeated freely, so every
//! vector has infinitely many encodings. Automata are kept *saturated*: a word
//! is accepted iff the word extended by its own last letter is accepted. With
//! that invariant, the minimal complete DFA numbered in breadth-first order is
//! a canonical form and structural equality coincides with set equality.
//!
//! Letters are indexed so that the lexicographic order on digit-vectors is the
//! numeric order on indices: component 0 is the most significant bit of the
//! letter index.

mod build;
mod minimize;
mod ops;

use std::collections::VecDeque;
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub use build::{LinearConstraintZ, ZRel};
pub(crate) use ops::check_permutation;
pub use ops::invert_permutation;

/// Default number of integer coordinates an automaton may carry.
pub const DEFAULT_VAR_LIMIT: usize = 12;

/// Absolute ceiling for [`set_var_limit`]; dense transition tables beyond
/// this are not addressable in reasonable memory.
pub const MAX_VAR_LIMIT: usize = 20;

static VAR_LIMIT: AtomicUsize = AtomicUsize::new(DEFAULT_VAR_LIMIT);

/// Current backend capacity, in integer coordinates.
pub fn var_limit() -> usize {
    VAR_LIMIT.load(Ordering::Relaxed)
}

/// Override the backend capacity. Values are clamped to `1..=MAX_VAR_LIMIT`.
pub fn set_var_limit(limit: usize) {
    VAR_LIMIT.store(limit.clamp(1, MAX_VAR_LIMIT), Ordering::Relaxed);
}

pub(crate) fn check_capacity(dim: usize) -> Result<()> {
    let limit = var_limit();
    if dim > limit {
        Err(Error::Capacity {
            requested: dim,
            limit,
        })
    } else {
        Ok(())
    }
}

/// A Presburger set: a complete deterministic automaton over `{0,1}^dim`.
///
/// Values produced by the public operations are always canonical (minimal,
/// breadth-first numbered, initial state 0), so `==` is set equality.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntegerSet {
    dim: usize,
    initial: u32,
    accepting: Vec<bool>,
    /// Row-major `state * alphabet_size + letter`.
    trans: Vec<u32>,
    canonical: bool,
}

impl fmt::Debug for IntegerSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IntegerSet")
            .field("dim", &self.dim)
            .field("states", &self.num_states())
            .field("accepting", &self.accepting_states())
            .finish()
    }
}

impl IntegerSet {
    /// Assemble an automaton from raw parts and canonicalize it.
    ///
    /// The input must be complete and deterministic; it is trusted to respect
    /// the saturation invariant (this is checked by the test-suite, not here).
    pub fn from_parts(dim: usize, initial: u32, accepting: Vec<bool>, trans: Vec<u32>) -> Result<Self> {
        check_capacity(dim)?;
        let k = 1usize << dim;
        let n = accepting.len();
        if n == 0 || trans.len() != n * k || initial as usize >= n {
            return Err(Error::Malformed("automaton shape does not match its dimension".into()));
        }
        if trans.iter().any(|&t| t as usize >= n) {
            return Err(Error::Malformed("transition target out of range".into()));
        }
        Ok(Self::raw(dim, initial, accepting, trans).minimized())
    }

    pub(crate) fn raw(dim: usize, initial: u32, accepting: Vec<bool>, trans: Vec<u32>) -> Self {
        IntegerSet {
            dim,
            initial,
            accepting,
            trans,
            canonical: false,
        }
    }

    /// The empty subset of `Z^dim`.
    pub fn empty(dim: usize) -> Result<Self> {
        check_capacity(dim)?;
        let k = 1usize << dim;
        Ok(IntegerSet {
            dim,
            initial: 0,
            accepting: vec![false],
            trans: vec![0; k],
            canonical: true,
        })
    }

    /// All of `Z^dim`.
    pub fn universe(dim: usize) -> Result<Self> {
        check_capacity(dim)?;
        let k = 1usize << dim;
        Ok(IntegerSet {
            dim,
            initial: 0,
            accepting: vec![false, true],
            trans: vec![1; 2 * k],
            canonical: true,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn alphabet_size(&self) -> usize {
        1 << self.dim
    }

    pub fn num_states(&self) -> usize {
        self.accepting.len()
    }

    pub fn initial(&self) -> u32 {
        self.initial
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    pub fn is_accepting(&self, state: u32) -> bool {
        self.accepting[state as usize]
    }

    pub fn accepting_states(&self) -> Vec<u32> {
        (0..self.num_states() as u32).filter(|&q| self.is_accepting(q)).collect()
    }

    #[inline]
    pub fn next(&self, state: u32, letter: usize) -> u32 {
        self.trans[state as usize * self.alphabet_size() + letter]
    }

    /// Transition table row of `state`, one entry per letter.
    pub fn row(&self, state: u32) -> &[u32] {
        let k = self.alphabet_size();
        &self.trans[state as usize * k..(state as usize + 1) * k]
    }

    /// Letter index of a digit-vector given component by component.
    pub fn letter(bits: &[bool]) -> usize {
        bits.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
    }

    /// Digit of component `i` in letter `letter` of a `dim`-track alphabet.
    #[inline]
    pub fn digit(dim: usize, letter: usize, i: usize) -> bool {
        (letter >> (dim - 1 - i)) & 1 == 1
    }

    /// Run the automaton on a word of letter indices.
    pub fn accepts_word(&self, word: &[usize]) -> bool {
        if word.is_empty() {
            return false;
        }
        let q = word.iter().fold(self.initial, |q, &a| self.next(q, a));
        self.is_accepting(q)
    }

    /// Minimal-length encoding of a vector as a word of letter indices.
    pub fn encode(z: &[BigInt]) -> Vec<usize> {
        let len = z.iter().map(encoding_len).max().unwrap_or(1).max(1);
        (0..len as u64)
            .map(|k| z.iter().fold(0usize, |acc, v| (acc << 1) | v.bit(k) as usize))
            .collect()
    }

    /// Decode a nonempty word over a `dim`-track alphabet.
    pub fn decode(dim: usize, word: &[usize]) -> Vec<BigInt> {
        let last = word.len() - 1;
        (0..dim)
            .map(|i| {
                let mut v = BigInt::zero();
                for (k, &a) in word.iter().enumerate() {
                    if Self::digit(dim, a, i) {
                        let p = BigInt::one() << k;
                        if k == last {
                            v -= p;
                        } else {
                            v += p;
                        }
                    }
                }
                v
            })
            .collect()
    }

    pub fn contains(&self, z: &[BigInt]) -> Result<bool> {
        Error::check_dim(self.dim, z.len())?;
        Ok(self.accepts_word(&Self::encode(z)))
    }

    /// Membership for machine-sized vectors; avoids big-integer encoding.
    pub fn contains_i64(&self, z: &[i64]) -> Result<bool> {
        Error::check_dim(self.dim, z.len())?;
        let len = z
            .iter()
            .map(|&v| {
                let m = if v < 0 { !v } else { v };
                65 - m.leading_zeros() as usize
            })
            .max()
            .unwrap_or(1)
            .max(1);
        let mut q = self.initial;
        for k in 0..len {
            let shift = k.min(63);
            let a = z.iter().fold(0usize, |acc, &v| (acc << 1) | ((v >> shift) & 1) as usize);
            q = self.next(q, a);
        }
        Ok(self.is_accepting(q))
    }

    pub fn is_empty(&self) -> bool {
        // Canonical automata: empty iff no accepting state is reachable, and
        // every state of a canonical automaton is reachable.
        if self.canonical {
            return !self.accepting.iter().any(|&a| a);
        }
        self.shortest_accepted().is_none()
    }

    pub fn is_universe(&self) -> bool {
        match IntegerSet::universe(self.dim) {
            Ok(u) => self.canonicalize() == u,
            Err(_) => false,
        }
    }

    /// Structural equality of canonical forms.
    pub fn equals(&self, other: &IntegerSet) -> Result<bool> {
        Error::check_dim(self.dim, other.dim)?;
        if self.canonical && other.canonical {
            Ok(self == other)
        } else {
            Ok(self.canonicalize() == other.canonicalize())
        }
    }

    pub fn is_subset(&self, other: &IntegerSet) -> Result<bool> {
        Ok(self.difference(other)?.is_empty())
    }

    /// States from which some accepting state is reachable by a nonempty word.
    pub(crate) fn coaccessible(&self) -> Vec<bool> {
        let n = self.num_states();
        let mut preds: Vec<Vec<u32>> = vec![Vec::new(); n];
        for q in 0..n {
            for &t in self.row(q as u32) {
                preds[t as usize].push(q as u32);
            }
        }
        let mut live = vec![false; n];
        let mut stack: Vec<u32> = Vec::new();
        for q in 0..n as u32 {
            if self.is_accepting(q) {
                for &p in &preds[q as usize] {
                    if !live[p as usize] {
                        live[p as usize] = true;
                        stack.push(p);
                    }
                }
            }
        }
        while let Some(q) = stack.pop() {
            for &p in &preds[q as usize] {
                if !live[p as usize] {
                    live[p as usize] = true;
                    stack.push(p);
                }
            }
        }
        // accepting states are live for the purpose of pruning transitions
        for q in 0..n as u32 {
            live[q as usize] |= self.is_accepting(q);
        }
        live
    }

    /// Shortest accepted word, if any.
    pub fn shortest_accepted(&self) -> Option<Vec<usize>> {
        let n = self.num_states();
        let mut parent: Vec<Option<(u32, usize)>> = vec![None; n];
        let mut seen = vec![false; n];
        let mut queue = VecDeque::new();
        // The empty word is never accepted, so search over words of length >= 1.
        seen[self.initial as usize] = true;
        queue.push_back(self.initial);
        let mut hit = None;
        'bfs: while let Some(q) = queue.pop_front() {
            for a in 0..self.alphabet_size() {
                let t = self.next(q, a);
                if self.is_accepting(t) {
                    hit = Some((q, a));
                    break 'bfs;
                }
                if !seen[t as usize] {
                    seen[t as usize] = true;
                    parent[t as usize] = Some((q, a));
                    queue.push_back(t);
                }
            }
        }
        let (mut q, a) = hit?;
        let mut word = vec![a];
        while let Some((p, b)) = parent[q as usize] {
            if q == self.initial {
                break;
            }
            word.push(b);
            q = p;
        }
        word.reverse();
        Some(word)
    }

    /// Some member of the set, if nonempty.
    pub fn witness(&self) -> Option<Vec<BigInt>> {
        self.shortest_accepted().map(|w| Self::decode(self.dim, &w))
    }

    /// Every member whose max-norm is at most `bound`, in lexicographic order.
    pub fn enumerate(&self, bound: i64) -> Vec<Vec<i64>> {
        let mut out = Vec::new();
        let mut z = vec![-bound; self.dim];
        loop {
            if self.contains_i64(&z).unwrap_or(false) {
                out.push(z.clone());
            }
            let mut i = self.dim;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if z[i] < bound {
                    z[i] += 1;
                    break;
                }
                z[i] = -bound;
            }
        }
    }

    /// Canonical copy (identity on canonical inputs).
    pub fn canonicalize(&self) -> IntegerSet {
        if self.canonical {
            self.clone()
        } else {
            self.clone().minimized()
        }
    }
}

fn encoding_len(v: &BigInt) -> usize {
    let m = if v.is_negative() { -v - 1 } else { v.clone() };
    m.bits() as usize + 1
}

#[cfg(test)]
mod tests;

use std::collections::HashMap;

use super::{check_capacity, IntegerSet};
use crate::error::{Error, Result};

#[derive(Clone, Copy)]
enum BoolOp {
    And,
    Or,
    AndNot,
}

impl BoolOp {
    fn apply(self, a: bool, b: bool) -> bool {
        match self {
            BoolOp::And => a && b,
            BoolOp::Or => a || b,
            BoolOp::AndNot => a && !b,
        }
    }
}

impl IntegerSet {
    /// Complement relative to `Z^n`.
    ///
    /// Flipping every flag would make the empty word accepted, so the result
    /// gets a fresh non-accepting initial state with the old initial row.
    pub fn complement(&self) -> IntegerSet {
        let k = self.alphabet_size();
        let n = self.num_states();
        let mut trans = Vec::with_capacity((n + 1) * k);
        trans.extend_from_slice(&self.trans);
        trans.extend_from_slice(self.row(self.initial));
        let mut accepting: Vec<bool> = self.accepting.iter().map(|a| !a).collect();
        accepting.push(false);
        IntegerSet::raw(self.dim, n as u32, accepting, trans).minimized()
    }

    pub fn intersect(&self, other: &IntegerSet) -> Result<IntegerSet> {
        self.combine(other, BoolOp::And)
    }

    pub fn union(&self, other: &IntegerSet) -> Result<IntegerSet> {
        self.combine(other, BoolOp::Or)
    }

    pub fn difference(&self, other: &IntegerSet) -> Result<IntegerSet> {
        self.combine(other, BoolOp::AndNot)
    }

    fn combine(&self, other: &IntegerSet, op: BoolOp) -> Result<IntegerSet> {
        Error::check_dim(self.dim, other.dim)?;
        let k = self.alphabet_size();
        let mut index: HashMap<(u32, u32), u32> = HashMap::new();
        let mut pairs = vec![(self.initial, other.initial)];
        index.insert(pairs[0], 0);
        let mut trans = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let (p, q) = pairs[i];
            let (rp, rq) = (self.row(p), other.row(q));
            for a in 0..k {
                let t = (rp[a], rq[a]);
                let id = *index.entry(t).or_insert_with(|| {
                    pairs.push(t);
                    (pairs.len() - 1) as u32
                });
                trans.push(id);
            }
            i += 1;
        }
        let accepting = pairs
            .iter()
            .map(|&(p, q)| op.apply(self.is_accepting(p), other.is_accepting(q)))
            .collect();
        Ok(IntegerSet::raw(self.dim, 0, accepting, trans).minimized())
    }

    /// Whether the intersection is nonempty, explored lazily.
    pub fn intersects(&self, other: &IntegerSet) -> Result<bool> {
        Error::check_dim(self.dim, other.dim)?;
        let k = self.alphabet_size();
        let mut seen: HashMap<(u32, u32), ()> = HashMap::new();
        let mut stack = vec![(self.initial, other.initial)];
        seen.insert(stack[0], ());
        while let Some((p, q)) = stack.pop() {
            let (rp, rq) = (self.row(p), other.row(q));
            for a in 0..k {
                let t = (rp[a], rq[a]);
                if self.is_accepting(t.0) && other.is_accepting(t.1) {
                    return Ok(true);
                }
                if seen.insert(t, ()).is_none() {
                    stack.push(t);
                }
            }
        }
        Ok(false)
    }

    /// Cartesian product; the tracks of `self` come first.
    pub fn product(&self, other: &IntegerSet) -> Result<IntegerSet> {
        let dim = self.dim + other.dim;
        check_capacity(dim)?;
        let (k1, k2) = (self.alphabet_size(), other.alphabet_size());
        let mut index: HashMap<(u32, u32), u32> = HashMap::new();
        let mut pairs = vec![(self.initial, other.initial)];
        index.insert(pairs[0], 0);
        let mut trans = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let (p, q) = pairs[i];
            for a in 0..k1 {
                let tp = self.next(p, a);
                for b in 0..k2 {
                    let t = (tp, other.next(q, b));
                    let id = *index.entry(t).or_insert_with(|| {
                        pairs.push(t);
                        (pairs.len() - 1) as u32
                    });
                    trans.push(id);
                }
            }
            i += 1;
        }
        let accepting = pairs
            .iter()
            .map(|&(p, q)| self.is_accepting(p) && other.is_accepting(q))
            .collect();
        Ok(IntegerSet::raw(dim, 0, accepting, trans).minimized())
    }

    /// Existential projection of coordinate `i`.
    pub fn project(&self, i: usize) -> Result<IntegerSet> {
        self.project_many(&[i])
    }

    /// Existential projection of several coordinates at once.
    ///
    /// Dropping tracks gives a nondeterministic automaton that is determinized
    /// by subsets. A projected word must also be accepted when the witness
    /// for the dropped coordinates needs a longer encoding than the word
    /// itself; this is re-saturation. For every kept letter `s`, `reach[s]`
    /// marks the original states from which an accepting state is reachable
    /// by reading letters that agree with `s` on the kept tracks (that is,
    /// by sign-extending the kept components). A projected word ending in `s`
    /// is accepted iff its subset meets `reach[s]`. The flag therefore
    /// depends on the last letter; it is stored in the target state.
    pub fn project_many(&self, drop: &[usize]) -> Result<IntegerSet> {
        let n = self.dim;
        let mut dropped = vec![false; n];
        for &i in drop {
            if i >= n {
                return Err(Error::IndexOutOfRange { index: i, dim: n });
            }
            dropped[i] = true;
        }
        let kept: Vec<usize> = (0..n).filter(|&i| !dropped[i]).collect();
        let nd = n - kept.len();
        if nd == 0 {
            return Ok(self.canonicalize());
        }
        let new_dim = kept.len();
        let kk = 1usize << new_dim;
        let kd = 1usize << nd;
        let dropped_idx: Vec<usize> = (0..n).filter(|&i| dropped[i]).collect();

        // Full letters matching each kept letter.
        let expand: Vec<Vec<usize>> = (0..kk)
            .map(|s| {
                (0..kd)
                    .map(|u| {
                        let mut bits = vec![false; n];
                        for (j, &c) in kept.iter().enumerate() {
                            bits[c] = IntegerSet::digit(new_dim, s, j);
                        }
                        for (j, &c) in dropped_idx.iter().enumerate() {
                            bits[c] = IntegerSet::digit(nd, u, j);
                        }
                        IntegerSet::letter(&bits)
                    })
                    .collect()
            })
            .collect();

        let ns = self.num_states();
        let reach: Vec<Vec<bool>> = expand
            .iter()
            .map(|letters| {
                let mut rev: Vec<Vec<u32>> = vec![Vec::new(); ns];
                for q in 0..ns as u32 {
                    for &a in letters {
                        rev[self.next(q, a) as usize].push(q);
                    }
                }
                let mut mark = self.accepting.clone();
                let mut stack: Vec<u32> = (0..ns as u32).filter(|&q| mark[q as usize]).collect();
                while let Some(t) = stack.pop() {
                    for &p in &rev[t as usize] {
                        if !mark[p as usize] {
                            mark[p as usize] = true;
                            stack.push(p);
                        }
                    }
                }
                mark
            })
            .collect();

        let mut index: HashMap<(Vec<u32>, bool), u32> = HashMap::new();
        let mut states: Vec<(Vec<u32>, bool)> = vec![(vec![self.initial], false)];
        // The initial state is kept out of the index: it must not be merged
        // with a later state carrying the same subset.
        let mut trans = Vec::new();
        let mut stamp = vec![u32::MAX; ns];
        let mut round = 0u32;
        let mut i = 0;
        while i < states.len() {
            let subset = states[i].0.clone();
            for s in 0..kk {
                let mut target: Vec<u32> = Vec::new();
                for &p in &subset {
                    for &a in &expand[s] {
                        let t = self.next(p, a);
                        if stamp[t as usize] != round {
                            stamp[t as usize] = round;
                            target.push(t);
                        }
                    }
                }
                round = round.wrapping_add(1);
                if round == u32::MAX {
                    stamp.iter_mut().for_each(|x| *x = u32::MAX);
                    round = 0;
                }
                target.sort_unstable();
                let flag = target.iter().any(|&t| reach[s][t as usize]);
                let key = (target, flag);
                let id = match index.get(&key) {
                    Some(&id) => id,
                    None => {
                        let id = states.len() as u32;
                        index.insert(key.clone(), id);
                        states.push(key);
                        id
                    }
                };
                trans.push(id);
            }
            i += 1;
        }
        let mut accepting: Vec<bool> = states.iter().map(|(_, f)| *f).collect();
        accepting[0] = false;
        Ok(IntegerSet::raw(new_dim, 0, accepting, trans).minimized())
    }

    /// Reordering: component `k` of a result vector is component `perm[k]`
    /// of a member of `self`.
    pub fn reorder(&self, perm: &[usize]) -> Result<IntegerSet> {
        let n = self.dim;
        check_permutation(perm, n)?;
        let k = self.alphabet_size();
        // new letter b' corresponds to old letter b with b[perm[j]] = b'[j]
        let map: Vec<usize> = (0..k)
            .map(|new| {
                let mut bits = vec![false; n];
                for (j, &p) in perm.iter().enumerate() {
                    bits[p] = IntegerSet::digit(n, new, j);
                }
                IntegerSet::letter(&bits)
            })
            .collect();
        let mut trans = Vec::with_capacity(self.trans.len());
        for q in 0..self.num_states() as u32 {
            let row = self.row(q);
            trans.extend(map.iter().map(|&old| row[old]));
        }
        Ok(IntegerSet::raw(n, self.initial, self.accepting.clone(), trans).minimized())
    }
}

pub(crate) fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if perm.len() != n {
        return Err(Error::InvalidPermutation(perm.to_vec()));
    }
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::InvalidPermutation(perm.to_vec()));
        }
        seen[p] = true;
    }
    Ok(())
}

/// Inverse of a permutation given as `perm[new] = old`.
pub fn invert_permutation(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    inv
}

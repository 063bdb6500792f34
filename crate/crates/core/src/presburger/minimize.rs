//! Hopcroft partition refinement and breadth-first canonical numbering.

use std::collections::VecDeque;

use super::IntegerSet;

impl IntegerSet {
    /// Trim, minimize and renumber; the result is the canonical form.
    pub(crate) fn minimized(self) -> IntegerSet {
        let k = self.alphabet_size();
        let trimmed = self.reachable();
        let n = trimmed.accepting.len();
        let block = hopcroft(n, k, &trimmed.trans, &trimmed.accepting);

        // Renumber blocks breadth-first from the initial block, letters in
        // increasing (lexicographic) order.
        let nblocks = block.iter().map(|&b| b as usize + 1).max().unwrap_or(0);
        let mut repr = vec![u32::MAX; nblocks];
        for q in 0..n {
            let b = block[q] as usize;
            if repr[b] == u32::MAX {
                repr[b] = q as u32;
            }
        }
        let mut order = vec![u32::MAX; nblocks];
        let mut queue = VecDeque::new();
        let b0 = block[trimmed.initial as usize];
        order[b0 as usize] = 0;
        queue.push_back(b0);
        let mut count = 1u32;
        let mut trans = Vec::with_capacity(nblocks * k);
        let mut accepting = Vec::with_capacity(nblocks);
        while let Some(b) = queue.pop_front() {
            let q = repr[b as usize] as usize;
            accepting.push(trimmed.accepting[q]);
            for a in 0..k {
                let tb = block[trimmed.trans[q * k + a] as usize];
                if order[tb as usize] == u32::MAX {
                    order[tb as usize] = count;
                    count += 1;
                    queue.push_back(tb);
                }
                trans.push(order[tb as usize]);
            }
        }
        IntegerSet {
            dim: trimmed.dim,
            initial: 0,
            accepting,
            trans,
            canonical: true,
        }
    }

    /// Restriction to states reachable from the initial state.
    fn reachable(self) -> IntegerSet {
        let k = self.alphabet_size();
        let n = self.accepting.len();
        let mut id = vec![u32::MAX; n];
        let mut order = Vec::new();
        id[self.initial as usize] = 0;
        order.push(self.initial);
        let mut i = 0;
        while i < order.len() {
            let q = order[i] as usize;
            for a in 0..k {
                let t = self.trans[q * k + a] as usize;
                if id[t] == u32::MAX {
                    id[t] = order.len() as u32;
                    order.push(t as u32);
                }
            }
            i += 1;
        }
        if order.len() == n && self.initial == 0 {
            return self;
        }
        let mut trans = Vec::with_capacity(order.len() * k);
        let mut accepting = Vec::with_capacity(order.len());
        for &q in &order {
            accepting.push(self.accepting[q as usize]);
            for a in 0..k {
                trans.push(id[self.trans[q as usize * k + a] as usize]);
            }
        }
        IntegerSet::raw(self.dim, 0, accepting, trans)
    }
}

/// Coarsest partition of `0..n` compatible with acceptance and transitions.
/// Returns the block index of every state.
fn hopcroft(n: usize, k: usize, trans: &[u32], accepting: &[bool]) -> Vec<u32> {
    // Predecessor lists, per letter, in CSR layout indexed by `a * n + target`.
    let mut offsets = vec![0u32; k * n + 1];
    for q in 0..n {
        for a in 0..k {
            offsets[a * n + trans[q * k + a] as usize + 1] += 1;
        }
    }
    for i in 0..k * n {
        offsets[i + 1] += offsets[i];
    }
    let mut fill = offsets.clone();
    let mut preds = vec![0u32; n * k];
    for q in 0..n {
        for a in 0..k {
            let slot = a * n + trans[q * k + a] as usize;
            preds[fill[slot] as usize] = q as u32;
            fill[slot] += 1;
        }
    }

    // Partition: `elems[start[b]..end[b]]` are the states of block `b`.
    let mut elems: Vec<u32> = Vec::with_capacity(n);
    elems.extend((0..n as u32).filter(|&q| accepting[q as usize]));
    let split = elems.len();
    elems.extend((0..n as u32).filter(|&q| !accepting[q as usize]));
    let mut loc = vec![0u32; n];
    for (i, &q) in elems.iter().enumerate() {
        loc[q as usize] = i as u32;
    }
    let mut block = vec![0u32; n];
    let mut start = Vec::new();
    let mut end = Vec::new();
    let mut worklist: Vec<(u32, u32)> = Vec::new();
    if split == 0 || split == n {
        start.push(0);
        end.push(n as u32);
    } else {
        start.extend([0, split as u32]);
        end.extend([split as u32, n as u32]);
        for &q in &elems[split..] {
            block[q as usize] = 1;
        }
        let smaller = if split <= n - split { 0 } else { 1 };
        worklist.extend((0..k as u32).map(|a| (smaller, a)));
    }
    let mut marked = vec![0u32; start.len()];
    let mut touched: Vec<u32> = Vec::new();
    let mut splitter: Vec<u32> = Vec::new();

    while let Some((b, a)) = worklist.pop() {
        splitter.clear();
        for i in start[b as usize]..end[b as usize] {
            let t = elems[i as usize] as usize;
            let slot = a as usize * n + t;
            splitter.extend_from_slice(&preds[offsets[slot] as usize..offsets[slot + 1] as usize]);
        }
        for &q in &splitter {
            let qb = block[q as usize] as usize;
            if marked[qb] == 0 {
                touched.push(qb as u32);
            }
            // Move q into the marked prefix of its block.
            let pos = loc[q as usize];
            let dest = start[qb] + marked[qb];
            let other = elems[dest as usize];
            elems.swap(pos as usize, dest as usize);
            loc[other as usize] = pos;
            loc[q as usize] = dest;
            marked[qb] += 1;
        }
        for &tb in &touched {
            let tb = tb as usize;
            let m = marked[tb];
            marked[tb] = 0;
            let size = end[tb] - start[tb];
            if m == size {
                continue;
            }
            // The smaller half becomes the new block; the old id keeps the
            // rest, so any pending (tb, c) entry stays valid.
            let new_id = start.len() as u32;
            let mid = start[tb] + m;
            if m <= size - m {
                start.push(start[tb]);
                end.push(mid);
                start[tb] = mid;
            } else {
                start.push(mid);
                end.push(end[tb]);
                end[tb] = mid;
            }
            marked.push(0);
            for i in start[new_id as usize]..end[new_id as usize] {
                block[elems[i as usize] as usize] = new_id;
            }
            worklist.extend((0..k as u32).map(|c| (new_id, c)));
        }
        touched.clear();
    }
    block
}

//! Deletion channel: patterns, their application, subsequence tests and the
//! naive supersequence list decoder.

use std::collections::BTreeSet;

use rand::Rng;

use crate::{Error, Result};

/// Sorted, distinct, 1-indexed positions removed by the channel.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DeletionPattern {
    positions: Vec<usize>,
}

impl DeletionPattern {
    pub fn new(positions: Vec<usize>) -> Result<Self> {
        if positions.first() == Some(&0) {
            return Err(Error::InvalidParams("deletion positions are 1-indexed".into()));
        }
        if positions.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParams(
                "deletion positions must be strictly increasing".into(),
            ));
        }
        Ok(Self { positions })
    }

    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn apply(&self, x: &[u8]) -> Result<Vec<u8>> {
        if let Some(&last) = self.positions.last() {
            if last > x.len() {
                return Err(Error::PositionOutOfRange {
                    position: last,
                    len: x.len(),
                });
            }
        }
        let mut out = Vec::with_capacity(x.len() - self.positions.len());
        let mut next = self.positions.iter().peekable();
        for (i, &bit) in x.iter().enumerate() {
            if next.peek() == Some(&&(i + 1)) {
                next.next();
            } else {
                out.push(bit);
            }
        }
        Ok(out)
    }
}

/// Uniform draw over all C(n, δ) position sets.
pub fn sample_uniform<R: Rng + ?Sized>(n: usize, delta: usize, rng: &mut R) -> Result<DeletionPattern> {
    if delta > n {
        return Err(Error::InvalidParams(format!(
            "cannot delete {delta} bits from a string of length {n}"
        )));
    }
    let mut positions: Vec<usize> = rand::seq::index::sample(rng, n, delta)
        .into_iter()
        .map(|p| p + 1)
        .collect();
    positions.sort_unstable();
    Ok(DeletionPattern { positions })
}

/// All C(n, δ) patterns in lexicographic order.
pub fn enumerate_patterns(n: usize, delta: usize) -> Patterns {
    Patterns {
        n,
        current: if delta <= n {
            Some((1..=delta).collect())
        } else {
            None
        },
    }
}

pub struct Patterns {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Iterator for Patterns {
    type Item = DeletionPattern;

    fn next(&mut self) -> Option<DeletionPattern> {
        let cur = self.current.take()?;
        let d = cur.len();
        let mut succ = cur.clone();
        // rightmost position that can still move right
        if let Some(i) = (0..d).rev().find(|&i| succ[i] < self.n - (d - 1 - i)) {
            succ[i] += 1;
            for j in i + 1..d {
                succ[j] = succ[j - 1] + 1;
            }
            self.current = Some(succ);
        }
        Some(DeletionPattern { positions: cur })
    }
}

/// True iff `y` is obtained from `x` by deletions only.
pub fn is_subsequence(y: &[u8], x: &[u8]) -> bool {
    if y.len() > x.len() {
        return false;
    }
    let mut it = x.iter();
    y.iter().all(|b| it.any(|c| c == b))
}

/// Calls `f` once for every distinct binary string of length `target_len`
/// that contains `y` as a subsequence.
///
/// Each supersequence has a unique leftmost embedding of `y`; before the
/// embedding has consumed all of `y`, an inserted bit must differ from the
/// next unmatched bit of `y`, after that any bit may follow. Generating only
/// such canonical insertions visits every string exactly once.
pub fn for_each_supersequence<F: FnMut(&[u8])>(y: &[u8], target_len: usize, mut f: F) {
    if target_len < y.len() {
        return;
    }
    let mut buf = Vec::with_capacity(target_len);
    walk(y, 0, target_len - y.len(), &mut buf, &mut f);
}

fn walk<F: FnMut(&[u8])>(y: &[u8], i: usize, extra: usize, buf: &mut Vec<u8>, f: &mut F) {
    if i == y.len() {
        tails(extra, buf, f);
        return;
    }
    if extra == 0 {
        let mark = buf.len();
        buf.extend_from_slice(&y[i..]);
        f(buf);
        buf.truncate(mark);
        return;
    }
    buf.push(y[i]);
    walk(y, i + 1, extra, buf, f);
    buf.pop();
    buf.push(1 - y[i]);
    walk(y, i, extra - 1, buf, f);
    buf.pop();
}

fn tails<F: FnMut(&[u8])>(extra: usize, buf: &mut Vec<u8>, f: &mut F) {
    if extra == 0 {
        f(buf);
        return;
    }
    for b in 0..2 {
        buf.push(b);
        tails(extra - 1, buf, f);
        buf.pop();
    }
}

/// The naive list decoder: every length-`target_len` supersequence of `y`.
pub fn enumerate_supersequences(y: &[u8], target_len: usize) -> BTreeSet<Vec<u8>> {
    let mut out = BTreeSet::new();
    for_each_supersequence(y, target_len, |s| {
        out.insert(s.to_vec());
    });
    out
}

/// `Σ_{i=0}^{extra} C(len, i)`, the number of distinct supersequences of
/// any string of length `len - extra`. Saturates at `u128::MAX`.
pub fn supersequence_count(len: usize, extra: usize) -> u128 {
    let mut total: u128 = 0;
    let mut binom: u128 = 1;
    for i in 0..=extra.min(len) {
        total = total.saturating_add(binom);
        binom = binom.saturating_mul((len - i) as u128) / (i as u128 + 1);
    }
    total
}

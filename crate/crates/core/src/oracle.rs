//! Brute-force ground truth at toy sizes.
//!
//! Nothing here shares the decoder's guess logic: the list oracle sweeps the
//! whole codebook, and subsequence tests and deletion patterns are
//! reimplemented. Only the encoder is shared, since it defines the code.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use crate::codec::GcCode;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBudget {
    /// Largest message length for sweeps over all `2^k` messages.
    pub max_k: usize,
    /// Largest code length for sweeps over all deletion patterns.
    pub max_n: usize,
}

impl Default for OracleBudget {
    fn default() -> Self {
        Self { max_k: 10, max_n: 24 }
    }
}

#[derive(Debug)]
pub struct Oracle {
    code: GcCode,
    budget: OracleBudget,
    codebook: OnceLock<Vec<Vec<u8>>>,
}

impl Oracle {
    pub fn new(code: GcCode, budget: OracleBudget) -> Self {
        Self {
            code,
            budget,
            codebook: OnceLock::new(),
        }
    }

    pub fn code(&self) -> &GcCode {
        &self.code
    }

    fn require_k(&self) -> Result<()> {
        let k = self.code.params().k();
        if k > self.budget.max_k {
            return Err(Error::BudgetExceeded(format!(
                "k = {k} exceeds the oracle limit {}",
                self.budget.max_k
            )));
        }
        Ok(())
    }

    fn require_n(&self) -> Result<()> {
        let n = self.code.params().n();
        if n > self.budget.max_n {
            return Err(Error::BudgetExceeded(format!(
                "n = {n} exceeds the oracle limit {}",
                self.budget.max_n
            )));
        }
        Ok(())
    }

    /// All `2^k` messages in increasing binary order.
    pub fn messages(&self) -> Result<impl Iterator<Item = Vec<u8>>> {
        self.require_k()?;
        let k = self.code.params().k();
        Ok((0u64..1 << k).map(move |v| (0..k).map(|i| (v >> (k - 1 - i) & 1) as u8).collect()))
    }

    fn codebook(&self) -> Result<&[Vec<u8>]> {
        self.require_k()?;
        Ok(self.codebook.get_or_init(|| {
            self.messages()
                .expect("budget checked")
                .map(|u| self.code.encode(&u).expect("valid message").into_bits())
                .collect()
        }))
    }

    /// Every codeword that contains `y` as a subsequence.
    pub fn exhaustive_list(&self, y: &[u8]) -> Result<BTreeSet<Vec<u8>>> {
        Ok(self
            .codebook()?
            .iter()
            .filter(|x| embeds(y, x))
            .cloned()
            .collect())
    }

    /// `max_d |list_decode(apply(encode(u), d))|` over all `C(n, δ)` patterns.
    pub fn exact_worst_case_list(&self, message: &[u8]) -> Result<usize> {
        self.require_n()?;
        let x = self.code.encode(message)?.into_bits();
        let mut worst = 0;
        for_each_subset(x.len(), self.code.params().delta(), &mut |removed| {
            let y: Vec<u8> = x
                .iter()
                .enumerate()
                .filter(|(i, _)| !removed.contains(i))
                .map(|(_, &b)| b)
                .collect();
            let size = self.code.list_decode(&y).map_or(0, |l| l.len());
            worst = worst.max(size);
        });
        Ok(worst)
    }

    /// `max_u L(u)` over every message.
    pub fn exact_max_list(&self) -> Result<usize> {
        self.require_n()?;
        let mut worst = 0;
        for u in self.messages()? {
            worst = worst.max(self.exact_worst_case_list(&u)?);
        }
        Ok(worst)
    }
}

/// Subsequence test by matching from the right end.
fn embeds(y: &[u8], x: &[u8]) -> bool {
    let mut j = x.len();
    for &b in y.iter().rev() {
        loop {
            if j == 0 {
                return false;
            }
            j -= 1;
            if x[j] == b {
                break;
            }
        }
    }
    true
}

/// Calls `f` with every `size`-subset of `0..n` (0-indexed, ascending).
fn for_each_subset<F: FnMut(&[usize])>(n: usize, size: usize, f: &mut F) {
    fn rec<F: FnMut(&[usize])>(n: usize, size: usize, from: usize, cur: &mut Vec<usize>, f: &mut F) {
        if cur.len() == size {
            f(cur);
            return;
        }
        for i in from..n {
            cur.push(i);
            rec(n, size, i + 1, cur, f);
            cur.pop();
        }
    }
    rec(n, size, 0, &mut Vec::with_capacity(size), f);
}

//! Varshamov–Tenengolts baseline.
//!
//! A systematic VT code places its redundancy at the power-of-two positions
//! (1-indexed) and the message everywhere else, with the parity bits chosen
//! so that the checksum `Σ i·xᵢ mod (n+1)` equals `a`. Multiple deletions are
//! list decoded by padding `y` to every length-`(n−1)` supersequence and
//! running the single-deletion decoder on each.

use std::collections::BTreeSet;

use crate::channel::{for_each_supersequence, is_subsequence};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VtParams {
    n: usize,
    a: usize,
}

impl VtParams {
    pub fn new(n: usize, a: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidParams(format!("VT length {n} leaves no message bits")));
        }
        if a > n {
            return Err(Error::InvalidParams(format!("residue {a} exceeds n = {n}")));
        }
        Ok(Self { n, a })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn a(&self) -> usize {
        self.a
    }

    /// `⌈log₂(n+1)⌉`, the number of power-of-two positions in `1..=n`.
    pub fn redundancy(&self) -> usize {
        (usize::BITS - self.n.leading_zeros()) as usize
    }

    pub fn message_len(&self) -> usize {
        self.n - self.redundancy()
    }
}

/// `Σ i·xᵢ mod (n+1)` with 1-indexed positions.
pub fn vt_syndrome(x: &[u8]) -> usize {
    let modulus = x.len() + 1;
    x.iter()
        .enumerate()
        .filter(|&(_, &b)| b == 1)
        .fold(0, |acc, (i, _)| (acc + i + 1) % modulus)
}

#[derive(Debug, Clone)]
pub struct VtCode {
    params: VtParams,
}

impl VtCode {
    pub fn new(params: VtParams) -> Self {
        Self { params }
    }

    /// The shortest systematic code with residue 0 carrying `k` message bits.
    pub fn for_message_len(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParams("message length must be positive".into()));
        }
        let mut n = k + 2;
        while VtParams::new(n, 0)?.message_len() < k {
            n += 1;
        }
        Ok(Self::new(VtParams::new(n, 0)?))
    }

    pub fn params(&self) -> &VtParams {
        &self.params
    }

    pub fn encode(&self, message: &[u8]) -> Result<Vec<u8>> {
        let VtParams { n, a } = self.params;
        if message.len() != self.params.message_len() {
            return Err(Error::LengthMismatch {
                expected: self.params.message_len(),
                actual: message.len(),
            });
        }
        if message.iter().any(|&b| b > 1) {
            return Err(Error::InvalidBits("bits must be 0 or 1".into()));
        }
        let mut x = vec![0u8; n];
        let mut bits = message.iter();
        for (i, slot) in x.iter_mut().enumerate() {
            if !(i + 1).is_power_of_two() {
                *slot = *bits.next().expect("message length checked");
            }
        }
        let need = (a + (n + 1) - vt_syndrome(&x)) % (n + 1);
        for t in 0..self.params.redundancy() {
            x[(1 << t) - 1] = (need >> t & 1) as u8;
        }
        assert_eq!(vt_syndrome(&x), a, "parity positions cover every residue");
        Ok(x)
    }

    pub fn extract_message(&self, x: &[u8]) -> Vec<u8> {
        x.iter()
            .enumerate()
            .filter(|&(i, _)| !(i + 1).is_power_of_two())
            .map(|(_, &b)| b)
            .collect()
    }

    /// Membership in the systematic code: the parity bits are the ones the
    /// encoder would choose for the embedded message.
    pub fn is_codeword(&self, x: &[u8]) -> bool {
        x.len() == self.params.n
            && self
                .encode(&self.extract_message(x))
                .is_ok_and(|enc| enc == x)
    }

    /// For a word whose checksum is already `a`, membership reduces to the
    /// parity bits reading as a value the encoder could have chosen.
    fn parity_in_range(&self, x: &[u8]) -> bool {
        let value: usize = (0..self.params.redundancy())
            .map(|t| usize::from(x[(1 << t) - 1]) << t)
            .sum();
        value <= self.params.n
    }

    /// Classical reinsertion: with `D = (a − Σ i·yᵢ) mod (n+1)` and `w` the
    /// weight of `y`, a 0 goes in with `D` ones to its right when `D ≤ w`,
    /// otherwise a 1 goes in with `D − w − 1` zeros to its left.
    pub fn decode_single_deletion(&self, y: &[u8]) -> Result<Vec<u8>> {
        let VtParams { n, a } = self.params;
        if y.len() + 1 != n {
            return Err(Error::LengthMismatch {
                expected: n - 1,
                actual: y.len(),
            });
        }
        if y.iter().any(|&b| b > 1) {
            return Err(Error::InvalidBits("bits must be 0 or 1".into()));
        }
        let x = reinsert(y, a);
        debug_assert_eq!(vt_syndrome(&x), a);
        if !self.parity_in_range(&x) {
            return Err(Error::DecodeFailure(
                "reinsertion does not give a codeword".into(),
            ));
        }
        Ok(x)
    }

    /// List decoding of `delta` deletions. Returns the sorted, distinct
    /// codewords that contain `y` as a subsequence and are reached by
    /// decoding some length-`(n−1)` supersequence of `y`.
    pub fn a17_list_decode(&self, y: &[u8], delta: usize) -> Result<Vec<Vec<u8>>> {
        let n = self.params.n;
        if delta == 0 || delta >= n {
            return Err(Error::InvalidParams(format!("cannot decode {delta} deletions")));
        }
        if y.len() + delta != n {
            return Err(Error::LengthMismatch {
                expected: n - delta,
                actual: y.len(),
            });
        }
        if y.iter().any(|&b| b > 1) {
            return Err(Error::InvalidBits("bits must be 0 or 1".into()));
        }
        let mut found = BTreeSet::new();
        for_each_supersequence(y, n - 1, |s| {
            let x = reinsert(s, self.params.a);
            if self.parity_in_range(&x) && !found.contains(&x) && is_subsequence(y, &x) {
                found.insert(x);
            }
        });
        if found.is_empty() {
            return Err(Error::DecodeFailure("no codeword within the deletion radius".into()));
        }
        Ok(found.into_iter().collect())
    }
}

fn reinsert(y: &[u8], a: usize) -> Vec<u8> {
    let n = y.len() + 1;
    let (w, s) = y
        .iter()
        .enumerate()
        .fold((0, 0), |(w, s), (i, &b)| if b == 1 { (w + 1, s + i + 1) } else { (w, s) });
    let d = (a + (n + 1) - s % (n + 1)) % (n + 1);
    let mut x = Vec::with_capacity(n);
    if d <= w {
        // insert 0 with exactly d ones to its right: after the (w−d)-th one
        let mut ones = 0;
        let mut placed = false;
        for &b in y {
            if !placed && ones == w - d {
                x.push(0);
                placed = true;
            }
            x.push(b);
            ones += usize::from(b);
        }
        if !placed {
            x.push(0);
        }
    } else {
        // insert 1 with exactly d − w − 1 zeros to its left
        let zeros_left = d - w - 1;
        let mut zeros = 0;
        let mut placed = false;
        for &b in y {
            if !placed && zeros == zeros_left {
                x.push(1);
                placed = true;
            }
            x.push(b);
            zeros += usize::from(b == 0);
        }
        if !placed {
            x.push(1);
        }
    }
    x
}

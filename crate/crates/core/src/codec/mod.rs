//! Guess & Check encoder and list decoder.
//!
//! Codeword layout: the `k` message bits, then the `cℓ` bits of the MDS
//! parity symbols with every bit repeated `δ + 1` times.
//!
//! Decoding a received string `y` of length `n - δ`:
//!
//! 1. recover the parity bits from the repetition-coded tail;
//! 2. for every split `δ₁ ∈ 0..=δ` of the deletions into the message region,
//!    and every distribution of those `δ₁` deletions over the `m` blocks,
//!    treat the affected blocks as erasures and fill them from the first
//!    parities;
//! 3. keep the candidates whose data agree with parities `δ..c` and that
//!    contain `y` as a subsequence.
//!
//! [`GcCode::decode_guess`] and [`GcCode::check_candidate`] implement one
//! guess and one check literally; [`GcCode::list_decode`] produces the same
//! list through an incremental search over all guesses.

mod checks;
mod search;

use std::sync::{Arc, OnceLock};

use crate::channel::is_subsequence;
use crate::gf2e::{Field, FieldElement, FieldParams};
use crate::mds::{MdsParams, ParityMatrix};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GcParams {
    k: usize,
    ell: usize,
    c: usize,
    delta: usize,
    m: usize,
    n: usize,
}

impl GcParams {
    pub fn new(k: usize, ell: usize, c: usize, delta: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParams("message length must be positive".into()));
        }
        if !(1..=16).contains(&ell) {
            return Err(Error::InvalidParams(format!("chunk length {ell} outside 1..=16")));
        }
        if delta == 0 {
            return Err(Error::InvalidParams("number of deletions must be at least 1".into()));
        }
        if c <= delta {
            return Err(Error::InvalidParams(format!(
                "need more parity symbols than deletions (c={c}, delta={delta})"
            )));
        }
        let m = k.div_ceil(ell);
        if m + c > 1 << ell {
            return Err(Error::InvalidParams(format!(
                "m + c = {} exceeds the field size 2^{ell}",
                m + c
            )));
        }
        Ok(Self {
            k,
            ell,
            c,
            delta,
            m,
            n: k + c * (delta + 1) * ell,
        })
    }

    /// Parameters with ℓ = ⌈log₂ k⌉ and c = δ + 1.
    pub fn with_defaults(k: usize, delta: usize) -> Result<Self> {
        Self::new(k, ceil_log2(k).max(1), delta + 1, delta)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn c(&self) -> usize {
        self.c
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    /// Number of message blocks, ⌈k/ℓ⌉.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Codeword length k + c(δ+1)ℓ.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn redundancy(&self) -> usize {
        self.n - self.k
    }

    pub fn parity_bits(&self) -> usize {
        self.c * self.ell
    }

    pub fn block_len(&self, block: usize) -> usize {
        if block + 1 == self.m {
            self.k - (self.m - 1) * self.ell
        } else {
            self.ell
        }
    }

    /// Total number of guesses, C(m + δ, δ).
    pub fn guess_count(&self) -> u128 {
        binomial(self.m + self.delta, self.delta)
    }

    pub fn guesses(&self) -> Guesses {
        enumerate_guesses(self.m, self.delta)
    }
}

pub(crate) fn ceil_log2(x: usize) -> usize {
    if x <= 1 {
        0
    } else {
        (usize::BITS - (x - 1).leading_zeros()) as usize
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1))
}

/// One hypothesis on where the deletions fell: `delta1` of them inside the
/// message region, `g[i]` inside block `i`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Guess {
    pub delta1: usize,
    pub g: Vec<usize>,
}

impl Guess {
    pub fn erased_blocks(&self) -> impl Iterator<Item = usize> + '_ {
        self.g.iter().enumerate().filter(|(_, &g)| g > 0).map(|(i, _)| i)
    }
}

/// Every `(δ₁, g)` with `δ₁ ∈ 0..=δ` and `g` a weak composition of `δ₁`
/// into `m` parts, ordered by `δ₁` and then lexicographically by `g`.
pub fn enumerate_guesses(m: usize, delta: usize) -> Guesses {
    Guesses {
        delta,
        delta1: 0,
        next: (m > 0).then(|| vec![0; m]),
    }
}

pub struct Guesses {
    delta: usize,
    delta1: usize,
    next: Option<Vec<usize>>,
}

impl Iterator for Guesses {
    type Item = Guess;

    fn next(&mut self) -> Option<Guess> {
        let g = self.next.take()?;
        let m = g.len();
        // lexicographic successor with the same sum: bump the rightmost
        // position that has mass after it, move the remaining mass to the end
        let mut succ = g.clone();
        let mut tail = 0;
        let mut found = false;
        for i in (0..m.saturating_sub(1)).rev() {
            tail += succ[i + 1];
            if tail > 0 {
                succ[i] += 1;
                for s in &mut succ[i + 1..] {
                    *s = 0;
                }
                succ[m - 1] = tail - 1;
                found = true;
                break;
            }
        }
        let out = Guess {
            delta1: self.delta1,
            g,
        };
        if found {
            self.next = Some(succ);
        } else if self.delta1 < self.delta {
            self.delta1 += 1;
            let mut first = vec![0; m];
            first[m - 1] = self.delta1;
            self.next = Some(first);
        }
        Some(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Codeword(Vec<u8>);

impl Codeword {
    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn into_bits(self) -> Vec<u8> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Candidate {
    pub message: Vec<u8>,
    pub codeword: Codeword,
}

/// Final decoder output: distinct candidates in ascending message order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CandidateList {
    candidates: Vec<Candidate>,
}

impl CandidateList {
    pub fn len(&self) -> usize {
        self.candidates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.candidates.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Candidate> {
        self.candidates.iter()
    }

    pub fn candidates(&self) -> &[Candidate] {
        &self.candidates
    }

    pub fn contains_codeword(&self, codeword: &[u8]) -> bool {
        self.candidates.iter().any(|c| c.codeword.bits() == codeword)
    }
}

impl<'a> IntoIterator for &'a CandidateList {
    type Item = &'a Candidate;
    type IntoIter = std::slice::Iter<'a, Candidate>;

    fn into_iter(self) -> Self::IntoIter {
        self.candidates.iter()
    }
}

/// A GC code instance: parameters plus the MDS parity matrix.
#[derive(Debug, Clone)]
pub struct GcCode {
    params: GcParams,
    parity: ParityMatrix,
    checks: Arc<OnceLock<Option<checks::CheckTable>>>,
}

impl GcCode {
    pub fn new(params: GcParams) -> Result<Self> {
        let field = FieldParams::standard(params.ell as u32)?;
        let parity = ParityMatrix::build(MdsParams::new(params.m, params.c, field)?)?;
        Ok(Self {
            params,
            parity,
            checks: Arc::default(),
        })
    }

    fn check_table(&self) -> Option<&checks::CheckTable> {
        self.checks
            .get_or_init(|| checks::CheckTable::build(&self.parity, self.params.delta))
            .as_ref()
    }

    pub fn params(&self) -> &GcParams {
        &self.params
    }

    pub fn parity_matrix(&self) -> &ParityMatrix {
        &self.parity
    }

    pub fn field(&self) -> &Arc<Field> {
        self.parity.field()
    }

    /// Block symbols of a message (the short last block zero-padded).
    pub fn message_symbols(&self, message: &[u8]) -> Result<Vec<FieldElement>> {
        self.check_message(message)?;
        let ell = self.params.ell;
        message
            .chunks(ell)
            .map(|block| self.field().symbol_from_bits(block))
            .collect()
    }

    fn check_message(&self, message: &[u8]) -> Result<()> {
        if message.len() != self.params.k {
            return Err(Error::LengthMismatch {
                expected: self.params.k,
                actual: message.len(),
            });
        }
        if message.iter().any(|&b| b > 1) {
            return Err(Error::InvalidBits("bits must be 0 or 1".into()));
        }
        Ok(())
    }

    pub fn encode(&self, message: &[u8]) -> Result<Codeword> {
        let symbols = self.message_symbols(message)?;
        let parities = self.parity.encode_parities(&symbols)?;
        let reps = self.params.delta + 1;
        let mut bits = Vec::with_capacity(self.params.n);
        bits.extend_from_slice(message);
        for p in parities {
            for bit in self.field().bits_from_symbol(p) {
                bits.extend(std::iter::repeat_n(bit, reps));
            }
        }
        debug_assert_eq!(bits.len(), self.params.n);
        Ok(Codeword(bits))
    }

    /// Recovers the `cℓ` parity bits from the repetition-coded tail of `y`.
    ///
    /// Runs are read right to left; a run of length `r` stands for
    /// `⌈r/(δ+1)⌉` parity bits, and the total is clamped at `cℓ` so that a
    /// message run merged into the leftmost parity run is harmless.
    pub fn recover_parities(&self, y: &[u8]) -> Result<Vec<u8>> {
        let n = self.params.n;
        if y.len() > n || y.len() + self.params.delta < n {
            return Err(Error::LengthMismatch {
                expected: n - self.params.delta,
                actual: y.len(),
            });
        }
        recover_repeated(y, self.params.parity_bits(), self.params.delta + 1).ok_or_else(|| {
            Error::DecodeFailure("received string too short to hold the parity bits".into())
        })
    }

    /// Parity symbols from recovered parity bits, in parity order.
    pub fn parity_symbols(&self, parity_bits: &[u8]) -> Result<Vec<FieldElement>> {
        if parity_bits.len() != self.params.parity_bits() {
            return Err(Error::LengthMismatch {
                expected: self.params.parity_bits(),
                actual: parity_bits.len(),
            });
        }
        parity_bits
            .chunks(self.params.ell)
            .map(|b| self.field().symbol_from_bits(b))
            .collect()
    }

    /// Decodes `y` under a single guess. Returns `None` when the guess cannot
    /// be realised (a block would lose more bits than it has).
    pub fn decode_guess(&self, y: &[u8], guess: &Guess, parity_bits: &[u8]) -> Option<Candidate> {
        let p = &self.params;
        if guess.g.len() != p.m
            || guess.g.iter().sum::<usize>() != guess.delta1
            || guess.delta1 > p.delta
            || y.len() + guess.delta1 < p.k
            || guess.g.iter().enumerate().any(|(i, &g)| g > p.block_len(i))
        {
            return None;
        }
        let parities = self.parity_symbols(parity_bits).ok()?;
        let remnant = &y[..p.k - guess.delta1];
        let field = self.field();

        let mut received = Vec::with_capacity(p.m);
        let mut erased = Vec::new();
        let mut pos = 0;
        for (i, &g) in guess.g.iter().enumerate() {
            let kept = p.block_len(i) - g;
            if g > 0 {
                erased.push(i);
                received.push(FieldElement::ZERO);
            } else {
                received.push(field.symbol_from_bits(&remnant[pos..pos + kept]).ok()?);
            }
            pos += kept;
        }
        debug_assert_eq!(pos, remnant.len());

        let data = self
            .parity
            .erasure_decode(&received, &parities[..erased.len()], &erased)
            .ok()?;
        let mut message = Vec::with_capacity(p.k);
        for (i, &sym) in data.iter().enumerate() {
            let bits = field.bits_from_symbol(sym);
            message.extend_from_slice(&bits[..p.block_len(i)]);
        }
        let codeword = self.encode(&message).ok()?;
        Some(Candidate { message, codeword })
    }

    /// The checking phase: agreement with parities `δ..c` and `y` being a
    /// subsequence of the candidate codeword. With the length gap fixed at
    /// δ the latter is the same as deletion distance exactly δ.
    pub fn check_candidate(&self, candidate: &Candidate, y: &[u8], parity_bits: &[u8]) -> bool {
        let p = &self.params;
        if candidate.codeword.len() != p.n {
            return false;
        }
        let (Ok(data), Ok(parities)) = (
            self.message_symbols(&candidate.message),
            self.parity_symbols(parity_bits),
        ) else {
            return false;
        };
        let remaining: Vec<_> = (p.delta..p.c).map(|j| (j, parities[j])).collect();
        self.parity.check_parities(&data, &remaining) && is_subsequence(y, candidate.codeword.bits())
    }

    fn check_received(&self, y: &[u8]) -> Result<()> {
        let expected = self.params.n - self.params.delta;
        if y.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                actual: y.len(),
            });
        }
        if y.iter().any(|&b| b > 1) {
            return Err(Error::InvalidBits("bits must be 0 or 1".into()));
        }
        Ok(())
    }

    /// Full list decoder. An empty list means `y` did not come from this
    /// code through δ deletions and is reported as an error.
    pub fn list_decode(&self, y: &[u8]) -> Result<CandidateList> {
        self.check_received(y)?;
        let parity_bits = self.recover_parities(y)?;
        let parities = self.parity_symbols(&parity_bits)?;
        let found = search::GuessSearch::new(self, y, &parities).run();
        self.finish(found.into_iter().map(|(message, codeword)| Candidate {
            message,
            codeword: Codeword(codeword),
        }))
    }

    /// The same list as [`list_decode`](Self::list_decode), computed by
    /// running [`decode_guess`](Self::decode_guess) and
    /// [`check_candidate`](Self::check_candidate) on every guess.
    pub fn list_decode_direct(&self, y: &[u8]) -> Result<CandidateList> {
        self.check_received(y)?;
        let parity_bits = self.recover_parities(y)?;
        let mut initial: Vec<Candidate> = self
            .params
            .guesses()
            .filter_map(|g| self.decode_guess(y, &g, &parity_bits))
            .collect();
        initial.sort();
        initial.dedup_by(|a, b| a.codeword == b.codeword);
        self.finish(
            initial
                .into_iter()
                .filter(|c| self.check_candidate(c, y, &parity_bits)),
        )
    }

    fn finish(&self, candidates: impl Iterator<Item = Candidate>) -> Result<CandidateList> {
        let mut candidates: Vec<Candidate> = candidates.collect();
        candidates.sort_by(|a, b| a.message.cmp(&b.message));
        if candidates.is_empty() {
            return Err(Error::DecodeFailure(
                "no guess survived the checking phase".into(),
            ));
        }
        Ok(CandidateList { candidates })
    }
}

/// Run-length decoding of a `reps`-fold repetition code, anchored at the
/// right end of `y`. Returns `None` if fewer than `total` bits are found.
pub(crate) fn recover_repeated(y: &[u8], total: usize, reps: usize) -> Option<Vec<u8>> {
    let mut out = Vec::with_capacity(total);
    let mut end = y.len();
    while out.len() < total && end > 0 {
        let bit = y[end - 1];
        let mut start = end - 1;
        while start > 0 && y[start - 1] == bit {
            start -= 1;
        }
        let copies = (end - start).div_ceil(reps).min(total - out.len());
        out.extend(std::iter::repeat_n(bit, copies));
        end = start;
    }
    if out.len() < total {
        return None;
    }
    out.reverse();
    Some(out)
}

#[cfg(test)]
mod tests;

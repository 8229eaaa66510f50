//! Incremental evaluation of all guesses for one received string.
//!
//! Under a guess, an unerased block `i` is read from `y` at offset
//! `iℓ - s`, where the shift `s` is the number of deletions guessed in
//! earlier blocks. Its contribution to every parity is therefore one of
//! `δ + 1` precomputable values, and the contribution of a run of unerased
//! blocks with a common shift is a difference of prefix sums. A depth-first
//! walk over the erased blocks (left to right) accumulates these sums so
//! each guess costs one small erasure solve plus the remaining-parity check.
//! When the code has a [`CheckTable`], the solve is replaced by one dot
//! product per remaining parity and only run for guesses that pass. Only
//! those guesses are materialised and tested for the subsequence property.

use std::collections::BTreeMap;

use super::checks::CheckTable;
use super::GcCode;
use crate::channel::is_subsequence;
use crate::gf2e::FieldElement;
use crate::mds::solve_in_place;

pub(super) struct GuessSearch<'a> {
    code: &'a GcCode,
    checks: Option<&'a CheckTable>,
    y: &'a [u8],
    parities: &'a [FieldElement],
    m: usize,
    c: usize,
    delta: usize,
    ell: usize,
    last_mask: u16,
    /// the last block is shorter than ℓ, so its solved value is masked
    last_partial: bool,
    /// `prefix[(s * (m + 1) + i) * c + j]` = Σ_{b<i} sym(s, b)·P[b][j]
    prefix: Vec<FieldElement>,
    /// accumulated known contributions, one row of `c` per search depth
    acc: Vec<FieldElement>,
    erased: Vec<(usize, usize)>,
    residual: Vec<FieldElement>,
    system: Vec<FieldElement>,
    solution: Vec<FieldElement>,
    found: BTreeMap<Vec<u8>, Vec<u8>>,
}

impl<'a> GuessSearch<'a> {
    pub(super) fn new(code: &'a GcCode, y: &'a [u8], parities: &'a [FieldElement]) -> Self {
        let p = code.params();
        let (m, c, delta, ell) = (p.m(), p.c(), p.delta(), p.ell());
        let field = code.field();
        let pm = code.parity_matrix();

        let mut prefix = vec![FieldElement::ZERO; (delta + 1) * (m + 1) * c];
        for s in 0..=delta {
            for i in 0..m {
                let len = p.block_len(i);
                let sym = match (i * ell).checked_sub(s) {
                    Some(start) if start + len <= y.len() => {
                        let v = y[start..start + len]
                            .iter()
                            .fold(0u16, |acc, &b| acc << 1 | u16::from(b));
                        FieldElement::from_raw(v << (ell - len))
                    }
                    _ => FieldElement::ZERO,
                };
                let row = (s * (m + 1) + i) * c;
                for j in 0..c {
                    prefix[row + c + j] = field.add(prefix[row + j], field.mul(sym, pm.entry(i, j)));
                }
            }
        }

        let last_len = p.block_len(m - 1);
        let full = ((1u32 << ell) - 1) as u16;
        let last_mask = full & !(((1u32 << (ell - last_len)) - 1) as u16);

        Self {
            code,
            checks: code.check_table(),
            y,
            parities,
            m,
            c,
            delta,
            ell,
            last_mask,
            last_partial: last_len < ell,
            prefix,
            acc: vec![FieldElement::ZERO; (delta + 1) * c],
            erased: Vec::with_capacity(delta),
            residual: vec![FieldElement::ZERO; c],
            system: vec![FieldElement::ZERO; delta * delta],
            solution: vec![FieldElement::ZERO; delta],
            found: BTreeMap::new(),
        }
    }

    /// Returns the surviving candidates keyed by message bits.
    pub(super) fn run(mut self) -> BTreeMap<Vec<u8>, Vec<u8>> {
        self.descend(0, 0, 0, 0);
        self.found
    }

    #[inline]
    fn prefix_row(&self, shift: usize, block: usize) -> usize {
        (shift * (self.m + 1) + block) * self.c
    }

    /// `rank` is the combinatorial rank of the erased block set so far.
    fn descend(&mut self, depth: usize, start: usize, shift: usize, rank: usize) {
        self.leaf(depth, start, shift, rank);
        if shift == self.delta {
            return;
        }
        let c = self.c;
        let params = *self.code.params();
        for b in start..self.m {
            let from = self.prefix_row(shift, start);
            let to = self.prefix_row(shift, b);
            for j in 0..c {
                self.acc[(depth + 1) * c + j] = FieldElement::from_raw(
                    self.acc[depth * c + j].value()
                        ^ self.prefix[from + j].value()
                        ^ self.prefix[to + j].value(),
                );
            }
            let next_rank = rank + self.checks.map_or(0, |t| t.rank_step(b, depth));
            let max_g = (self.delta - shift).min(params.block_len(b));
            for g in 1..=max_g {
                self.erased.push((b, g));
                self.descend(depth + 1, b + 1, shift + g, next_rank);
                self.erased.pop();
            }
        }
    }

    fn leaf(&mut self, depth: usize, start: usize, shift: usize, rank: usize) {
        let c = self.c;
        let from = self.prefix_row(shift, start);
        let to = self.prefix_row(shift, self.m);
        for j in 0..c {
            self.residual[j] = FieldElement::from_raw(
                self.parities[j].value()
                    ^ self.acc[depth * c + j].value()
                    ^ self.prefix[from + j].value()
                    ^ self.prefix[to + j].value(),
            );
        }

        let e = self.erased.len();
        let field = self.code.field();
        let pm = self.code.parity_matrix();
        let masked = self.last_partial && self.erased.last().is_some_and(|&(b, _)| b == self.m - 1);
        if let (Some(table), false) = (self.checks, masked) {
            let at = table.offset(e, rank);
            for r in 0..c - self.delta {
                let w = table.row(at, e, r);
                let mut sum = FieldElement::ZERO;
                for (&wt, &rt) in w.iter().zip(&self.residual[..e]) {
                    sum = field.add(sum, field.mul(wt, rt));
                }
                if sum != self.residual[self.delta + r] {
                    return;
                }
            }
        }
        if e > 0 {
            for j in 0..e {
                for (t, &(b, _)) in self.erased.iter().enumerate() {
                    self.system[j * e + t] = pm.entry(b, j);
                }
                self.solution[j] = self.residual[j];
            }
            let solved = solve_in_place(
                field,
                &mut self.system[..e * e],
                &mut self.solution[..e],
                e,
            );
            assert!(solved, "Cauchy submatrix is singular");
            if masked {
                self.solution[e - 1] = FieldElement::from_raw(self.solution[e - 1].value() & self.last_mask);
            }
        }
        for j in self.delta..c {
            let mut sum = FieldElement::ZERO;
            for (t, &(b, _)) in self.erased.iter().enumerate() {
                sum = field.add(sum, field.mul(self.solution[t], pm.entry(b, j)));
            }
            if sum != self.residual[j] {
                return;
            }
        }
        self.accept();
    }

    fn accept(&mut self) {
        let params = self.code.params();
        let ell = self.ell;
        let mut message = Vec::with_capacity(params.k());
        let mut shift = 0;
        let mut next = 0;
        for i in 0..self.m {
            let len = params.block_len(i);
            match self.erased.get(next) {
                Some(&(b, g)) if b == i => {
                    let v = self.solution[next].value();
                    message.extend((0..len).map(|bit| (v >> (ell - 1 - bit) & 1) as u8));
                    shift += g;
                    next += 1;
                }
                _ => {
                    let start = i * ell - shift;
                    message.extend_from_slice(&self.y[start..start + len]);
                }
            }
        }
        if self.found.contains_key(&message) {
            return;
        }
        let codeword = self
            .code
            .encode(&message)
            .expect("candidate message has length k")
            .into_bits();
        if is_subsequence(self.y, &codeword) {
            self.found.insert(message, codeword);
        }
    }
}

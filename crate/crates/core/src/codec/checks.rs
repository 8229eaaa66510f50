//! Per-erasure-set check vectors.
//!
//! For an erased block set `E` (|E| = e ≤ δ) the erasure solution is
//! `A⁻¹ r` with `A[j][t] = P[E_t][j]`, `j < e`. Parity `j ≥ δ` is then
//! satisfied iff `wⱼ · r[0..e] = r[j]` where `Aᵀ wⱼ = P[E, j]`. Storing
//! `wⱼ` for every `E` turns most guesses into `e` multiplications.

use crate::channel::enumerate_patterns;
use crate::gf2e::FieldElement;
use crate::mds::{solve_in_place, ParityMatrix};

/// Tables larger than this many field elements are not built.
const MAX_ENTRIES: usize = 1 << 24;

#[derive(Debug)]
pub(super) struct CheckTable {
    delta: usize,
    rows: usize,
    /// `binom[b * (δ + 1) + t]` = C(b, t)
    binom: Vec<usize>,
    base: Vec<usize>,
    w: Vec<FieldElement>,
}

impl CheckTable {
    pub(super) fn build(pm: &ParityMatrix, delta: usize) -> Option<Self> {
        let (m, c) = (pm.data_len(), pm.parity_len());
        let rows = c - delta;
        let mut binom = vec![0usize; (m + 1) * (delta + 1)];
        for b in 0..=m {
            binom[b * (delta + 1)] = 1;
            for t in 1..=delta.min(b) {
                binom[b * (delta + 1) + t] =
                    binom[(b - 1) * (delta + 1) + t - 1] + binom[(b - 1) * (delta + 1) + t];
            }
        }
        let mut base = vec![0usize; delta + 2];
        for e in 0..=delta {
            let sets = if e <= m { binom[m * (delta + 1) + e] } else { 0 };
            base[e + 1] = base[e].checked_add(sets.checked_mul(e * rows)?)?;
        }
        if base[delta + 1] > MAX_ENTRIES {
            return None;
        }

        let field = pm.field();
        let mut w = vec![FieldElement::ZERO; base[delta + 1]];
        let mut a = vec![FieldElement::ZERO; delta * delta];
        let mut rhs = vec![FieldElement::ZERO; delta];
        let mut table = Self {
            delta,
            rows,
            binom,
            base,
            w: Vec::new(),
        };
        for e in 1..=delta.min(m) {
            for set in enumerate_patterns(m, e) {
                let blocks: Vec<usize> = set.positions().iter().map(|p| p - 1).collect();
                let at = table.offset(e, table.rank(&blocks));
                for r in 0..rows {
                    // transpose of A, so row t holds P[E_t][0..e]
                    for (t, &b) in blocks.iter().enumerate() {
                        for j in 0..e {
                            a[t * e + j] = pm.entry(b, j);
                        }
                        rhs[t] = pm.entry(b, delta + r);
                    }
                    let solved = solve_in_place(field, &mut a[..e * e], &mut rhs[..e], e);
                    assert!(solved, "Cauchy submatrix is singular");
                    w[at + r * e..at + (r + 1) * e].copy_from_slice(&rhs[..e]);
                }
            }
        }
        table.w = w;
        Some(table)
    }

    /// Rank increment for placing block `b` at index `t` of a sorted set.
    #[inline]
    pub(super) fn rank_step(&self, b: usize, t: usize) -> usize {
        self.binom[b * (self.delta + 1) + t + 1]
    }

    fn rank(&self, blocks: &[usize]) -> usize {
        blocks.iter().enumerate().map(|(t, &b)| self.rank_step(b, t)).sum()
    }

    #[inline]
    pub(super) fn offset(&self, e: usize, rank: usize) -> usize {
        self.base[e] + rank * e * self.rows
    }

    /// Check vector for remaining parity `δ + r` of the set at `offset`.
    #[inline]
    pub(super) fn row(&self, offset: usize, e: usize, r: usize) -> &[FieldElement] {
        &self.w[offset + r * e..offset + (r + 1) * e]
    }
}

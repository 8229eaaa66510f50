//! Systematic (m + c, m) MDS code over GF(2^ℓ) with a Cauchy parity part.
//!
//! The generator is `[I | P]` with `P[i][j] = 1 / (x_i + y_j)`, where
//! `x_i = i` and `y_j = m + j` are distinct field elements. Every square
//! submatrix of a Cauchy matrix is nonsingular, which is exactly the MDS
//! property. Parity `j` is the `j`-th column; "first e parities" always
//! means columns `0..e`.

use std::sync::Arc;

use crate::gf2e::{Field, FieldElement, FieldParams, STANDARD_POLYS};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MdsParams {
    pub m: usize,
    pub c: usize,
    pub field: FieldParams,
}

impl MdsParams {
    pub fn new(m: usize, c: usize, field: FieldParams) -> Result<Self> {
        if m == 0 || c == 0 {
            return Err(Error::InvalidParams(format!(
                "MDS code needs m >= 1 and c >= 1 (got m={m}, c={c})"
            )));
        }
        if m + c > field.order() {
            return Err(Error::InvalidParams(format!(
                "m + c = {} exceeds the field size {}",
                m + c,
                field.order()
            )));
        }
        Ok(Self { m, c, field })
    }
}

fn field_for(params: FieldParams) -> Arc<Field> {
    if params.poly() == STANDARD_POLYS[params.ell() as usize - 1] {
        Field::standard(params.ell()).expect("validated field params")
    } else {
        Arc::new(Field::new(params))
    }
}

/// Solves the `n × n` system `a · x = rhs` in place by Gauss–Jordan
/// elimination. `a` is row-major; on success `rhs` holds `x`.
/// Returns `false` when `a` is singular.
pub(crate) fn solve_in_place(
    field: &Field,
    a: &mut [FieldElement],
    rhs: &mut [FieldElement],
    n: usize,
) -> bool {
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !a[r * n + col].is_zero()) else {
            return false;
        };
        if pivot != col {
            for k in 0..n {
                a.swap(pivot * n + k, col * n + k);
            }
            rhs.swap(pivot, col);
        }
        let inv = field.inv(a[col * n + col]).expect("nonzero pivot");
        for k in col..n {
            a[col * n + k] = field.mul(a[col * n + k], inv);
        }
        rhs[col] = field.mul(rhs[col], inv);
        for r in 0..n {
            let factor = a[r * n + col];
            if r == col || factor.is_zero() {
                continue;
            }
            for k in col..n {
                a[r * n + k] = field.add(a[r * n + k], field.mul(factor, a[col * n + k]));
            }
            rhs[r] = field.add(rhs[r], field.mul(factor, rhs[col]));
        }
    }
    true
}

/// The `m × c` parity part of the systematic generator.
#[derive(Debug, Clone)]
pub struct ParityMatrix {
    field: Arc<Field>,
    m: usize,
    c: usize,
    entries: Vec<FieldElement>,
}

impl ParityMatrix {
    pub fn build(params: MdsParams) -> Result<Self> {
        let params = MdsParams::new(params.m, params.c, params.field)?;
        let field = field_for(params.field);
        let (m, c) = (params.m, params.c);
        let mut entries = Vec::with_capacity(m * c);
        for i in 0..m {
            let x = field.element(i as u32)?;
            for j in 0..c {
                let y = field.element((m + j) as u32)?;
                entries.push(field.inv(field.add(x, y))?);
            }
        }
        Ok(Self {
            field,
            m,
            c,
            entries,
        })
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn data_len(&self) -> usize {
        self.m
    }

    pub fn parity_len(&self) -> usize {
        self.c
    }

    #[inline]
    pub fn entry(&self, row: usize, col: usize) -> FieldElement {
        self.entries[row * self.c + col]
    }

    /// `data · P`.
    pub fn encode_parities(&self, data: &[FieldElement]) -> Result<Vec<FieldElement>> {
        if data.len() != self.m {
            return Err(Error::LengthMismatch {
                expected: self.m,
                actual: data.len(),
            });
        }
        let f = &self.field;
        Ok((0..self.c)
            .map(|j| {
                data.iter()
                    .enumerate()
                    .fold(FieldElement::ZERO, |acc, (i, &d)| {
                        f.add(acc, f.mul(d, self.entry(i, j)))
                    })
            })
            .collect())
    }

    /// Fills the erased data positions from the first `erased.len()` parity
    /// symbols. Values at erased positions of `received` are ignored.
    pub fn erasure_decode(
        &self,
        received: &[FieldElement],
        parities: &[FieldElement],
        erased: &[usize],
    ) -> Result<Vec<FieldElement>> {
        if received.len() != self.m {
            return Err(Error::LengthMismatch {
                expected: self.m,
                actual: received.len(),
            });
        }
        let e = erased.len();
        if e > self.c {
            return Err(Error::InvalidParams(format!(
                "{e} erasures exceed the {} parity symbols",
                self.c
            )));
        }
        if parities.len() != e {
            return Err(Error::LengthMismatch {
                expected: e,
                actual: parities.len(),
            });
        }
        let mut is_erased = vec![false; self.m];
        for &p in erased {
            if p >= self.m || std::mem::replace(&mut is_erased[p], true) {
                return Err(Error::InvalidParams(format!(
                    "erasure position {p} out of range or repeated"
                )));
            }
        }
        let mut out = received.to_vec();
        if e == 0 {
            return Ok(out);
        }
        let f = &self.field;
        // rhs_j = p_j - Σ_{known i} d_i P[i][j]
        let mut rhs: Vec<FieldElement> = (0..e)
            .map(|j| {
                (0..self.m)
                    .filter(|&i| !is_erased[i])
                    .fold(parities[j], |acc, i| {
                        f.add(acc, f.mul(received[i], self.entry(i, j)))
                    })
            })
            .collect();
        // row j, column t: coefficient P[erased[t]][j]
        let mut a: Vec<FieldElement> = (0..e)
            .flat_map(|j| erased.iter().map(move |&p| (p, j)))
            .map(|(p, j)| self.entry(p, j))
            .collect();
        assert!(
            solve_in_place(f, &mut a, &mut rhs, e),
            "Cauchy submatrix is singular"
        );
        for (t, &p) in erased.iter().enumerate() {
            out[p] = rhs[t];
        }
        Ok(out)
    }

    /// True iff `data · P` agrees with every `(index, value)` pair given.
    pub fn check_parities(&self, data: &[FieldElement], subset: &[(usize, FieldElement)]) -> bool {
        if data.len() != self.m {
            return false;
        }
        let f = &self.field;
        subset.iter().all(|&(j, value)| {
            j < self.c
                && data
                    .iter()
                    .enumerate()
                    .fold(FieldElement::ZERO, |acc, (i, &d)| {
                        f.add(acc, f.mul(d, self.entry(i, j)))
                    })
                    == value
        })
    }
}

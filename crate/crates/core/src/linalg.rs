//! Incremental row-echelon bases over GF(q).

use crate::field::{FieldElem, FieldSpec};

/// A basis of a subspace of GF(q)^dim kept in echelon form.
///
/// Each stored vector has a 1 at its pivot and 0 at the pivots of all
/// earlier vectors, so reducing a vector against the rows in insertion
/// order leaves it zero iff it lies in the span.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Echelon {
    dim: usize,
    rows: Vec<FieldElem>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            rows: Vec::with_capacity(dim * dim),
            pivots: Vec::with_capacity(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_full(&self) -> bool {
        self.pivots.len() == self.dim
    }

    pub fn clear(&mut self) {
        self.rows.clear();
        self.pivots.clear();
    }

    /// Reduces `v` in place against the basis.
    #[inline]
    pub fn reduce(&self, field: &FieldSpec, v: &mut [FieldElem]) {
        debug_assert_eq!(v.len(), self.dim);
        for (r, &piv) in self.pivots.iter().enumerate() {
            let c = v[piv];
            if c.is_zero() {
                continue;
            }
            let row = &self.rows[r * self.dim..(r + 1) * self.dim];
            let c = field.neg(c);
            for (x, &y) in v.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x = field.add(*x, field.mul(c, y));
                }
            }
        }
    }

    pub fn contains(&self, field: &FieldSpec, v: &[FieldElem]) -> bool {
        if self.is_full() {
            return true;
        }
        let mut w = v.to_vec();
        self.reduce(field, &mut w);
        w.iter().all(|x| x.is_zero())
    }

    /// Like [`Echelon::contains`] but reuses `scratch` to avoid allocating.
    #[inline]
    pub fn contains_with(&self, field: &FieldSpec, v: &[FieldElem], scratch: &mut Vec<FieldElem>) -> bool {
        if self.is_full() {
            return true;
        }
        scratch.clear();
        scratch.extend_from_slice(v);
        self.reduce(field, scratch);
        scratch.iter().all(|x| x.is_zero())
    }

    /// Adds `v` to the basis; returns whether the rank increased.
    pub fn insert(&mut self, field: &FieldSpec, v: &[FieldElem]) -> bool {
        if self.is_full() {
            return false;
        }
        let mut w = v.to_vec();
        self.reduce(field, &mut w);
        let Some(piv) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let s = field.inv_nonzero(w[piv]);
        for x in w.iter_mut() {
            *x = field.mul(*x, s);
        }
        self.rows.extend_from_slice(&w);
        self.pivots.push(piv);
        true
    }
}

/// Reduced row echelon form of a row-major `rows × cols` matrix, in place.
/// Returns the pivot columns.
pub fn rref_in_place(field: &FieldSpec, data: &mut [FieldElem], rows: usize, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !data[i * cols + c].is_zero()) else {
            continue;
        };
        if pr != r {
            for j in 0..cols {
                data.swap(pr * cols + j, r * cols + j);
            }
        }
        let s = field.inv_nonzero(data[r * cols + c]);
        for j in 0..cols {
            data[r * cols + j] = field.mul(data[r * cols + j], s);
        }
        for i in 0..rows {
            if i == r {
                continue;
            }
            let f = data[i * cols + c];
            if f.is_zero() {
                continue;
            }
            let f = field.neg(f);
            for j in 0..cols {
                let y = data[r * cols + j];
                data[i * cols + j] = field.add(data[i * cols + j], field.mul(f, y));
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

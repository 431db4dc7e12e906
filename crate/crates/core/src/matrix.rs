//! Generator matrices over GF(q) and the linear algebra the engines need.
//!
//! Columns carry positional identity: two equal columns are still two
//! distinct draw targets. Indices are 0-based in this API; reports and the
//! command line translate to 1-based.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldElem, FieldSpec};
use crate::linalg::{rref_in_place, Echelon};

/// A sorted, duplicate-free set of column indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ColumnSet(Vec<usize>);

impl ColumnSet {
    pub fn new(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        Self(indices)
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn from_mask(mask: u64) -> Self {
        Self((0..64).filter(|&j| mask >> j & 1 == 1).collect())
    }

    /// Bitmask form; all indices must be below 64.
    pub fn mask(&self) -> u64 {
        self.0.iter().fold(0, |m, &j| m | 1 << j)
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, j: usize) -> bool {
        self.0.binary_search(&j).is_ok()
    }

    pub fn is_subset(&self, other: &ColumnSet) -> bool {
        self.0.iter().all(|&j| other.contains(j))
    }
}

impl fmt::Display for ColumnSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, j) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", j + 1)?;
        }
        write!(f, "}}")
    }
}

/// A `k × n` matrix over GF(q), usually of full row rank.
#[derive(Clone, PartialEq, Eq)]
pub struct GenMatrix {
    field: FieldSpec,
    k: usize,
    n: usize,
    /// row-major entries
    data: Vec<FieldElem>,
    /// column-major copy for column access in the engines
    cols: Vec<FieldElem>,
    rank: usize,
}

impl fmt::Debug for GenMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "GenMatrix {:?} {}x{} rank {}", self.field, self.k, self.n, self.rank)?;
        for r in 0..self.k {
            let row: Vec<String> = self.row(r).iter().map(|e| e.to_string()).collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        Ok(())
    }
}

impl GenMatrix {
    /// A matrix of full row rank `k ≥ 1`.
    pub fn new(field: FieldSpec, k: usize, n: usize, data: Vec<FieldElem>) -> Result<Self> {
        let g = Self::relaxed(field, k, n, data)?;
        if g.k == 0 {
            return Err(Error::InvalidDimensions(
                "a generator matrix needs at least one row".into(),
            ));
        }
        if g.rank != g.k {
            return Err(Error::RankDeficient {
                rank: g.rank,
                rows: g.k,
            });
        }
        Ok(g)
    }

    /// Any `k × n` matrix, including rank-deficient or empty ones.
    pub fn relaxed(field: FieldSpec, k: usize, n: usize, data: Vec<FieldElem>) -> Result<Self> {
        if data.len() != k * n {
            return Err(Error::NotRectangular);
        }
        if let Some(bad) = data.iter().find(|e| e.value() >= field.q()) {
            return Err(Error::InvalidEntry {
                value: u64::from(bad.value()),
                q: field.q(),
            });
        }
        let mut cols = vec![FieldElem::ZERO; k * n];
        for r in 0..k {
            for c in 0..n {
                cols[c * k + r] = data[r * n + c];
            }
        }
        let mut scratch = data.clone();
        let rank = rref_in_place(&field, &mut scratch, k, n).len();
        Ok(Self {
            field,
            k,
            n,
            data,
            cols,
            rank,
        })
    }

    /// Full-rank matrix from integer rows.
    pub fn from_rows(field: FieldSpec, rows: &[Vec<u64>]) -> Result<Self> {
        let (k, n, data) = Self::flatten(&field, rows)?;
        Self::new(field, k, n, data)
    }

    pub fn from_rows_relaxed(field: FieldSpec, rows: &[Vec<u64>]) -> Result<Self> {
        let (k, n, data) = Self::flatten(&field, rows)?;
        Self::relaxed(field, k, n, data)
    }

    fn flatten(field: &FieldSpec, rows: &[Vec<u64>]) -> Result<(usize, usize, Vec<FieldElem>)> {
        let k = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::NotRectangular);
        }
        let data = rows
            .iter()
            .flatten()
            .map(|&v| field.elem(v))
            .collect::<Result<Vec<_>>>()?;
        Ok((k, n, data))
    }

    /// Matrix whose `j`-th column is `columns[j]` (each of length `k`).
    pub fn from_columns(field: FieldSpec, k: usize, columns: &[Vec<FieldElem>]) -> Result<Self> {
        let n = columns.len();
        if columns.iter().any(|c| c.len() != k) {
            return Err(Error::NotRectangular);
        }
        let mut data = vec![FieldElem::ZERO; k * n];
        for (c, col) in columns.iter().enumerate() {
            for (r, &v) in col.iter().enumerate() {
                data[r * n + c] = v;
            }
        }
        Self::relaxed(field, k, n, data)
    }

    pub fn identity(field: FieldSpec, k: usize) -> Self {
        let mut data = vec![FieldElem::ZERO; k * k];
        for i in 0..k {
            data[i * k + i] = FieldElem::ONE;
        }
        Self::relaxed(field, k, k, data).expect("identity is well formed")
    }

    /// The `0 × n` matrix generating the zero code.
    pub fn zero_code(field: FieldSpec, n: usize) -> Self {
        Self::relaxed(field, 0, n, Vec::new()).expect("empty matrix is well formed")
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank == self.k
    }

    pub fn entry(&self, r: usize, c: usize) -> FieldElem {
        self.data[r * self.n + c]
    }

    pub fn row(&self, r: usize) -> &[FieldElem] {
        &self.data[r * self.n..(r + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[FieldElem]> {
        (0..self.k).map(move |r| self.row(r))
    }

    pub fn column(&self, j: usize) -> &[FieldElem] {
        &self.cols[j * self.k..(j + 1) * self.k]
    }

    pub fn columns(&self) -> impl Iterator<Item = &[FieldElem]> {
        (0..self.n).map(move |j| self.column(j))
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[FieldElem] {
        &self.data
    }

    /// Standard basis vector `e_i` of GF(q)^k.
    pub fn unit(&self, i: usize) -> Vec<FieldElem> {
        let mut v = vec![FieldElem::ZERO; self.k];
        v[i] = FieldElem::ONE;
        v
    }

    fn check_field(&self, other: &GenMatrix) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch {
                left: self.field.q(),
                right: other.field.q(),
            });
        }
        Ok(())
    }

    /// Whether `v` lies in the span of the columns indexed by `set`.
    pub fn span_contains(&self, set: &ColumnSet, v: &[FieldElem]) -> Result<bool> {
        if v.len() != self.k {
            return Err(Error::InvalidDimensions(format!(
                "vector has length {}, matrix has {} rows",
                v.len(),
                self.k
            )));
        }
        if let Some(&j) = set.indices().iter().find(|&&j| j >= self.n) {
            return Err(Error::IndexOutOfRange {
                what: "column",
                index: j,
                size: self.n,
            });
        }
        let mut basis = Echelon::new(self.k);
        for &j in set.indices() {
            basis.insert(&self.field, self.column(j));
        }
        Ok(basis.contains(&self.field, v))
    }

    /// Echelon basis of the columns in `set`.
    pub fn column_basis(&self, set: &ColumnSet) -> Echelon {
        let mut basis = Echelon::new(self.k);
        for &j in set.indices() {
            basis.insert(&self.field, self.column(j));
        }
        basis
    }

    /// Reduced row echelon form with zero rows dropped, plus its pivot columns.
    pub fn rref(&self) -> (GenMatrix, Vec<usize>) {
        let mut d = self.data.clone();
        let pivots = rref_in_place(&self.field, &mut d, self.k, self.n);
        d.truncate(pivots.len() * self.n);
        let m = Self::relaxed(self.field.clone(), pivots.len(), self.n, d).expect("rref keeps shape");
        (m, pivots)
    }

    /// Whether the first `k` columns form the identity.
    pub fn is_systematic(&self) -> bool {
        (0..self.k).all(|c| {
            let col = self.column(c);
            col.iter()
                .enumerate()
                .all(|(r, &x)| x == if r == c { FieldElem::ONE } else { FieldElem::ZERO })
        })
    }

    /// Row-reduces to `(I_k | R)`; never permutes columns.
    pub fn systematic_form(&self) -> Result<GenMatrix> {
        if !self.is_full_rank() || self.k > self.n {
            return Err(Error::RankDeficient {
                rank: self.rank,
                rows: self.k,
            });
        }
        let (r, pivots) = self.rref();
        if pivots.iter().enumerate().any(|(i, &p)| p != i) {
            return Err(Error::NotSystematizable(self.k));
        }
        Ok(r)
    }

    /// Moves the lexicographically first information set to the front, then
    /// row-reduces. Returns the systematic matrix and the permutation
    /// (new column `j` is old column `perm[j]`).
    pub fn systematic_with_permutation(&self) -> Result<(GenMatrix, Vec<usize>)> {
        if !self.is_full_rank() {
            return Err(Error::RankDeficient {
                rank: self.rank,
                rows: self.k,
            });
        }
        let (_, pivots) = self.rref();
        let mut perm = pivots.clone();
        perm.extend((0..self.n).filter(|j| !pivots.contains(j)));
        let g = self.permute_columns(&perm)?.systematic_form()?;
        Ok((g, perm))
    }

    /// New column `j` is old column `perm[j]`.
    pub fn permute_columns(&self, perm: &[usize]) -> Result<GenMatrix> {
        let mut seen = vec![false; self.n];
        if perm.len() != self.n
            || perm
                .iter()
                .any(|&p| p >= self.n || std::mem::replace(&mut seen[p], true))
        {
            return Err(Error::InvalidParameter("not a permutation of the columns".into()));
        }
        let cols: Vec<Vec<FieldElem>> = perm.iter().map(|&p| self.column(p).to_vec()).collect();
        GenMatrix::from_columns(self.field.clone(), self.k, &cols)
    }

    /// Generator of the dual code, `(n - rank) × n`.
    pub fn dual_generator(&self) -> GenMatrix {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.n).filter(|j| !pivots.contains(j)).collect();
        let mut data = vec![FieldElem::ZERO; free.len() * self.n];
        for (row, &f) in free.iter().enumerate() {
            data[row * self.n + f] = FieldElem::ONE;
            for (i, &p) in pivots.iter().enumerate() {
                data[row * self.n + p] = self.field.neg(r.entry(i, f));
            }
        }
        GenMatrix::relaxed(self.field.clone(), free.len(), self.n, data).expect("dual is well formed")
    }

    /// Whether every row of `self` is orthogonal to every row of `other`.
    pub fn annihilates(&self, other: &GenMatrix) -> Result<bool> {
        self.check_field(other)?;
        if self.n != other.n {
            return Ok(false);
        }
        let f = &self.field;
        Ok(self.rows().all(|a| {
            other.rows().all(|b| {
                a.iter()
                    .zip(b)
                    .fold(FieldElem::ZERO, |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
                    .is_zero()
            })
        }))
    }

    pub fn same_row_space(&self, other: &GenMatrix) -> Result<bool> {
        self.check_field(other)?;
        if self.n != other.n {
            return Ok(false);
        }
        Ok(self.rref().0.data == other.rref().0.data)
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn stack(&self, other: &GenMatrix) -> Result<GenMatrix> {
        self.check_field(other)?;
        if self.n != other.n {
            return Err(Error::InvalidDimensions("stacked matrices need equal lengths".into()));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        GenMatrix::relaxed(self.field.clone(), self.k + other.k, self.n, data)
    }

    /// Generator (in reduced echelon form) of the sum of the two row spaces.
    pub fn code_sum(&self, other: &GenMatrix) -> Result<GenMatrix> {
        Ok(self.stack(other)?.rref().0)
    }

    /// `(I_k | I_k | ... | I_k | R)` with `x` identity blocks in total.
    pub fn append_identities(&self, x: usize) -> Result<GenMatrix> {
        if x == 0 {
            return Err(Error::InvalidParameter("x must be at least 1".into()));
        }
        if !self.is_systematic() {
            return Err(Error::NotSystematic);
        }
        let k = self.k;
        let mut cols: Vec<Vec<FieldElem>> = Vec::with_capacity(x * k + self.n - k);
        for _ in 0..x {
            cols.extend((0..k).map(|j| self.column(j).to_vec()));
        }
        cols.extend((k..self.n).map(|j| self.column(j).to_vec()));
        GenMatrix::from_columns(self.field.clone(), k, &cols)
    }

    /// Block-diagonal generator of the Cartesian product of the two codes.
    pub fn cartesian_product(&self, other: &GenMatrix) -> Result<GenMatrix> {
        self.check_field(other)?;
        let (k, n) = (self.k + other.k, self.n + other.n);
        let mut data = vec![FieldElem::ZERO; k * n];
        for r in 0..self.k {
            data[r * n..r * n + self.n].copy_from_slice(self.row(r));
        }
        for r in 0..other.k {
            let rr = self.k + r;
            data[rr * n + self.n..(rr + 1) * n].copy_from_slice(other.row(r));
        }
        GenMatrix::relaxed(self.field.clone(), k, n, data)
    }

    /// All `q^k` codewords; refuses when `q^k` exceeds `limit`.
    pub fn codewords(&self, limit: u64) -> Result<Vec<Vec<FieldElem>>> {
        let q = u64::from(self.field.q());
        let count = q
            .checked_pow(self.k as u32)
            .filter(|&c| c <= limit)
            .ok_or(Error::TooLarge {
                guard: "codeword-enumeration",
                required: q.saturating_pow(self.k as u32),
                limit,
            })?;
        let f = &self.field;
        let mut out = Vec::with_capacity(count as usize);
        let mut coeffs = vec![0u32; self.k];
        for _ in 0..count {
            let mut word = vec![FieldElem::ZERO; self.n];
            for (r, &c) in coeffs.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                let c = FieldElem(c as u16);
                for (w, &g) in word.iter_mut().zip(self.row(r)) {
                    *w = f.add(*w, f.mul(c, g));
                }
            }
            out.push(word);
            for c in coeffs.iter_mut() {
                *c += 1;
                if *c < f.q() {
                    break;
                }
                *c = 0;
            }
        }
        Ok(out)
    }

    /// Number of codewords of each Hamming weight `0..=n`.
    pub fn weight_distribution(&self, limit: u64) -> Result<Vec<u64>> {
        let mut dist = vec![0u64; self.n + 1];
        for w in self.codewords(limit)? {
            dist[w.iter().filter(|x| !x.is_zero()).count()] += 1;
        }
        Ok(dist)
    }

    pub fn min_distance(&self, limit: u64) -> Result<usize> {
        let dist = self.weight_distribution(limit)?;
        Ok(dist.iter().skip(1).position(|&c| c > 0).map_or(0, |d| d + 1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(q: u64) -> FieldSpec {
        FieldSpec::new(q).unwrap()
    }

    fn example1() -> GenMatrix {
        GenMatrix::from_rows(gf(2), &[vec![1, 0, 1, 0, 1], vec![0, 1, 0, 1, 1]]).unwrap()
    }

    fn parity() -> GenMatrix {
        GenMatrix::from_rows(gf(2), &[vec![1, 0, 1], vec![0, 1, 1]]).unwrap()
    }

    #[test]
    fn ranks() {
        assert_eq!(GenMatrix::identity(gf(2), 3).rank(), 3);
        assert_eq!(example1().rank(), 2);
        let z = GenMatrix::from_rows_relaxed(gf(2), &[vec![1, 0, 1, 0, 1], vec![0, 1, 0, 1, 1], vec![0; 5]]).unwrap();
        assert_eq!(z.rank(), 2);
        assert!(matches!(
            GenMatrix::from_rows(gf(2), &[vec![1, 1], vec![1, 1]]),
            Err(Error::RankDeficient { rank: 1, rows: 2 })
        ));
        assert!(matches!(
            GenMatrix::from_rows(gf(3), &[vec![1, 3]]),
            Err(Error::InvalidEntry { value: 3, q: 3 })
        ));
        assert!(matches!(
            GenMatrix::from_rows(gf(3), &[vec![1, 2], vec![1]]),
            Err(Error::NotRectangular)
        ));
    }

    #[test]
    fn span_membership() {
        let g = example1();
        let e1 = g.unit(0);
        assert!(g.span_contains(&ColumnSet::new(vec![3, 4]), &e1).unwrap());
        assert!(g.span_contains(&ColumnSet::empty(), &[FieldElem::ZERO; 2]).unwrap());
        assert!(!g.span_contains(&ColumnSet::empty(), &e1).unwrap());
        assert!(!g.span_contains(&ColumnSet::new(vec![1, 3]), &e1).unwrap());
        assert!(g.span_contains(&ColumnSet::new(vec![9]), &e1).is_err());
    }

    #[test]
    fn systematic_forms() {
        let p = parity();
        assert_eq!(p.systematic_form().unwrap(), p);
        let scrambled = GenMatrix::from_rows(gf(2), &[vec![1, 1, 0], vec![1, 0, 1]]).unwrap();
        let s = scrambled.systematic_form().unwrap();
        assert!(s.is_systematic());
        assert!(s.same_row_space(&scrambled).unwrap());
        let dup = GenMatrix::from_rows(gf(2), &[vec![1, 1, 0], vec![0, 0, 1]]).unwrap();
        assert_eq!(dup.systematic_form(), Err(Error::NotSystematizable(2)));
        let (s, perm) = dup.systematic_with_permutation().unwrap();
        assert!(s.is_systematic());
        assert_eq!(perm, vec![0, 2, 1]);
    }

    #[test]
    fn duals() {
        let d = parity().dual_generator();
        assert_eq!(d.k(), 1);
        assert_eq!(d.row(0), &[FieldElem::ONE; 3]);
        assert!(parity().annihilates(&d).unwrap());
        let i3 = GenMatrix::identity(gf(5), 3);
        let d = i3.dual_generator();
        assert_eq!((d.k(), d.n()), (0, 3));
        let g = GenMatrix::from_rows(gf(3), &[vec![1, 0, 1, 1], vec![0, 1, 1, 2]]).unwrap();
        assert!(g.dual_generator().dual_generator().same_row_space(&g).unwrap());
    }

    #[test]
    fn identities_and_products() {
        let p = parity();
        assert_eq!(p.append_identities(1).unwrap(), p);
        let p2 = p.append_identities(2).unwrap();
        assert_eq!(p2.n(), 5);
        let mut a: Vec<_> = p2.columns().map(<[_]>::to_vec).collect();
        let mut b: Vec<_> = example1().columns().map(<[_]>::to_vec).collect();
        a.sort();
        b.sort();
        assert_eq!(a, b);
        let g = GenMatrix::from_rows(gf(3), &[vec![1, 0, 1, 1], vec![0, 1, 1, 2]]).unwrap();
        assert_eq!(g.append_identities(3).unwrap().n(), 8);
        let scrambled = GenMatrix::from_rows(gf(2), &[vec![1, 1, 0], vec![1, 0, 1]]).unwrap();
        assert_eq!(scrambled.append_identities(2), Err(Error::NotSystematic));

        let i2 = GenMatrix::identity(gf(2), 2);
        assert_eq!(i2.cartesian_product(&i2).unwrap(), GenMatrix::identity(gf(2), 4));
        let pp = p.cartesian_product(&p).unwrap();
        assert_eq!((pp.k(), pp.n(), pp.rank()), (4, 6, 4));
        let z = GenMatrix::zero_code(gf(2), 0);
        assert_eq!(p.cartesian_product(&z).unwrap(), p);
        assert!(matches!(
            p.cartesian_product(&GenMatrix::identity(gf(3), 2)),
            Err(Error::FieldMismatch { .. })
        ));
    }

    #[test]
    fn weights() {
        // [7,4] Hamming code in cyclic form, generator 1 + x + x^3
        let rows: Vec<Vec<u64>> = (0..4)
            .map(|s| {
                let mut r = vec![0; 7];
                for t in [0, 1, 3] {
                    r[s + t] = 1;
                }
                r
            })
            .collect();
        let h = GenMatrix::from_rows(gf(2), &rows).unwrap();
        assert_eq!(h.min_distance(1 << 20).unwrap(), 3);
        assert_eq!(h.weight_distribution(1 << 20).unwrap(), vec![1, 0, 0, 7, 7, 0, 0, 1]);
    }
}

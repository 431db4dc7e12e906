//! Constructors for the code families used throughout the crate.
//!
//! Projective points are listed with their first nonzero coordinate equal to
//! 1, in lexicographic order of the coefficient vector (first coordinate most
//! significant, elements compared by encoding). Where a construction needs a
//! systematic generator, the unit vectors are moved to the front and the
//! remaining points keep that order.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::field::{FieldElem, FieldSpec};
use crate::matrix::GenMatrix;

/// All projective points of PG(k−1, q) in canonical order.
pub fn projective_points(field: &FieldSpec, k: usize) -> Vec<Vec<FieldElem>> {
    let q = field.q();
    let mut out = Vec::new();
    let mut v = vec![0u32; k];
    loop {
        if v.iter().find(|&&x| x != 0) == Some(&1) {
            out.push(v.iter().map(|&x| FieldElem(x as u16)).collect());
        }
        // odometer with the last coordinate least significant
        let mut pos = k;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            v[pos] += 1;
            if v[pos] < q {
                break;
            }
            v[pos] = 0;
        }
    }
}

fn unit_index(v: &[FieldElem]) -> Option<usize> {
    let mut nz = v.iter().enumerate().filter(|(_, x)| !x.is_zero());
    match (nz.next(), nz.next()) {
        (Some((i, &x)), None) if x == FieldElem::ONE => Some(i),
        _ => None,
    }
}

fn split_units(points: Vec<Vec<FieldElem>>) -> Vec<Vec<FieldElem>> {
    points.into_iter().filter(|p| unit_index(p).is_none()).collect()
}

fn field(q: u64) -> Result<FieldSpec> {
    FieldSpec::new(q)
}

pub fn identity(q: u64, k: usize) -> Result<GenMatrix> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    Ok(GenMatrix::identity(field(q)?, k))
}

/// The `[k+1, k]` single parity check code `(I_k | −1)`.
pub fn parity(q: u64, k: usize) -> Result<GenMatrix> {
    let f = field(q)?;
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let m1 = f.neg(FieldElem::ONE);
    let mut cols: Vec<Vec<FieldElem>> = (0..k)
        .map(|i| GenMatrix::identity(f.clone(), k).column(i).to_vec())
        .collect();
    cols.push(vec![m1; k]);
    GenMatrix::from_columns(f, k, &cols)
}

/// Systematic generator of a Reed–Solomon `[n, k]` code evaluated at the
/// first `n` field elements (plus the point at infinity when `n = q + 1`).
pub fn mds_rs(q: u64, k: usize, n: usize) -> Result<GenMatrix> {
    let f = field(q)?;
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!("need 1 <= k <= n, got k={k}, n={n}")));
    }
    let qq = f.q() as usize;
    if n > qq + 1 {
        return Err(Error::LengthExceedsField { n, q: f.q() });
    }
    let finite = n.min(qq);
    let mut cols: Vec<Vec<FieldElem>> = (0..finite)
        .map(|a| (0..k).map(|r| f.pow(FieldElem(a as u16), r as u64)).collect())
        .collect();
    if n == qq + 1 {
        let mut inf = vec![FieldElem::ZERO; k];
        inf[k - 1] = FieldElem::ONE;
        cols.push(inf);
    }
    GenMatrix::from_columns(f, k, &cols)?.systematic_form()
}

/// Parity-check matrix `(A | I_r)` of the q-ary Hamming code, where `A`
/// lists the non-unit projective points in canonical order.
pub fn hamming_parity_check(q: u64, r: usize) -> Result<GenMatrix> {
    let f = field(q)?;
    if r < 2 {
        return Err(Error::InvalidParameter("Hamming redundancy must be at least 2".into()));
    }
    let mut cols = split_units(projective_points(&f, r));
    let id = GenMatrix::identity(f.clone(), r);
    cols.extend(id.columns().map(<[_]>::to_vec));
    GenMatrix::from_columns(f, r, &cols)
}

/// Systematic generator `(I_{n−r} | −Aᵀ)` of the q-ary Hamming code.
pub fn hamming(q: u64, r: usize) -> Result<GenMatrix> {
    let h = hamming_parity_check(q, r)?;
    let f = h.field().clone();
    let n = h.n();
    let k = n - r;
    let mut data = vec![FieldElem::ZERO; k * n];
    for i in 0..k {
        data[i * n + i] = FieldElem::ONE;
        for j in 0..r {
            data[i * n + k + j] = f.neg(h.entry(j, i));
        }
    }
    GenMatrix::new(f, k, n, data)
}

/// Binary extended Hamming code: the Hamming code plus an overall parity
/// column.
pub fn extended_hamming(r: usize) -> Result<GenMatrix> {
    extend_by_parity(&hamming(2, r)?)
}

/// Appends the column `−(sum of each row)`, making every codeword sum to 0.
pub fn extend_by_parity(g: &GenMatrix) -> Result<GenMatrix> {
    let f = g.field();
    let mut cols: Vec<Vec<FieldElem>> = g.columns().map(<[_]>::to_vec).collect();
    cols.push(
        g.rows()
            .map(|row| f.neg(row.iter().fold(FieldElem::ZERO, |a, &b| f.add(a, b))))
            .collect(),
    );
    GenMatrix::from_columns(f.clone(), g.k(), &cols)
}

/// Systematic simplex generator `(I_k | A)` whose columns are all
/// projective points.
pub fn simplex(q: u64, k: usize) -> Result<GenMatrix> {
    let f = field(q)?;
    if k < 2 {
        return Err(Error::InvalidParameter("simplex dimension must be at least 2".into()));
    }
    let id = GenMatrix::identity(f.clone(), k);
    let mut cols: Vec<Vec<FieldElem>> = id.columns().map(<[_]>::to_vec).collect();
    cols.extend(split_units(projective_points(&f, k)));
    GenMatrix::new(f.clone(), k, cols.len(), transpose(&cols, k))
}

fn transpose(cols: &[Vec<FieldElem>], k: usize) -> Vec<FieldElem> {
    let n = cols.len();
    let mut data = vec![FieldElem::ZERO; k * n];
    for (c, col) in cols.iter().enumerate() {
        for r in 0..k {
            data[r * n + c] = col[r];
        }
    }
    data
}

/// Binary Reed–Muller code RM(r, m) as evaluations of monomials.
///
/// Rows are monomials ordered by degree, then lexicographically by variable
/// indices. Column `p` is the point whose coordinate `x_{i+1}` is bit `i` of
/// `p`. This generator is not systematic.
pub fn reed_muller_binary(order: usize, m: usize) -> Result<GenMatrix> {
    if order > m || m > 16 {
        return Err(Error::InvalidParameter(format!(
            "need 0 <= r <= m <= 16, got r={order}, m={m}"
        )));
    }
    let f = field(2)?;
    let n = 1usize << m;
    let mut monomials: Vec<Vec<usize>> = Vec::new();
    for d in 0..=order {
        let mut combo: Vec<usize> = (0..d).collect();
        loop {
            monomials.push(combo.clone());
            // next d-combination of 0..m in lexicographic order
            let Some(i) = (0..d).rev().find(|&i| combo[i] < m - d + i) else {
                break;
            };
            combo[i] += 1;
            for j in i + 1..d {
                combo[j] = combo[j - 1] + 1;
            }
        }
    }
    let k = monomials.len();
    let mut data = vec![FieldElem::ZERO; k * n];
    for (r, mono) in monomials.iter().enumerate() {
        for p in 0..n {
            if mono.iter().all(|&i| p >> i & 1 == 1) {
                data[r * n + p] = FieldElem::ONE;
            }
        }
    }
    GenMatrix::new(f, k, n, data)
}

/// Binary Golay code of length 23 (`[23,12,7]`) or 24 (`[24,12,8]`), in
/// systematic form. The length-23 code is cyclic with generator polynomial
/// `1 + x² + x⁴ + x⁵ + x⁶ + x¹⁰ + x¹¹`; length 24 adds a parity column.
pub fn golay_binary(length: usize) -> Result<GenMatrix> {
    const GEN: [usize; 7] = [0, 2, 4, 5, 6, 10, 11];
    if length != 23 && length != 24 {
        return Err(Error::InvalidParameter(format!(
            "Golay length must be 23 or 24, got {length}"
        )));
    }
    let f = field(2)?;
    let (k, n) = (12, 23);
    let mut data = vec![FieldElem::ZERO; k * n];
    for r in 0..k {
        for &t in &GEN {
            data[r * n + r + t] = FieldElem::ONE;
        }
    }
    let g = GenMatrix::new(f, k, n, data)?;
    let g = if length == 24 { extend_by_parity(&g)? } else { g };
    g.systematic_form()
}

/// An optimal `[9,4]` locally recoverable code over GF(13).
pub fn lrc_example_f13() -> Result<GenMatrix> {
    GenMatrix::from_rows(
        field(13)?,
        &[
            vec![1, 1, 1, 1, 1, 1, 1, 1, 1],
            vec![1, 3, 9, 2, 6, 5, 4, 12, 10],
            vec![1, 1, 1, 8, 8, 8, 12, 12, 12],
            vec![1, 3, 9, 3, 9, 1, 9, 1, 3],
        ],
    )
}

/// Row-reduced generator of the sum of [`lrc_example_f13`] and the `[9,4]`
/// Reed–Solomon code evaluated at `0, 1, …, 8`.
pub fn sum_code_f13() -> Result<GenMatrix> {
    let f = field(13)?;
    let rs: Vec<Vec<u64>> = (0..4u32).map(|r| (0..9u64).map(|a| a.pow(r) % 13).collect()).collect();
    let rs = GenMatrix::from_rows(f, &rs)?;
    lrc_example_f13()?.code_sum(&rs)
}

/// A `[4,2]` MDS code over GF(3) whose permutation automorphism group is
/// not transitive, although the code is recovery balanced.
pub fn mds_example_f3() -> Result<GenMatrix> {
    GenMatrix::from_rows(field(3)?, &[vec![1, 0, 1, 1], vec![0, 1, 1, 2]])
}

/// A named code family with its parameters, e.g. `simplex:q=2,k=3`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CodeFamily {
    Identity { q: u64, k: usize },
    Parity { q: u64, k: usize },
    MdsRs { q: u64, k: usize, n: usize },
    Hamming { q: u64, r: usize },
    ExtendedHamming { r: usize },
    Simplex { q: u64, k: usize },
    ReedMuller { r: usize, m: usize },
    Golay { n: usize },
    LrcF13,
    SumCodeF13,
    MdsF3,
}

impl CodeFamily {
    pub fn build(&self) -> Result<GenMatrix> {
        match *self {
            CodeFamily::Identity { q, k } => identity(q, k),
            CodeFamily::Parity { q, k } => parity(q, k),
            CodeFamily::MdsRs { q, k, n } => mds_rs(q, k, n),
            CodeFamily::Hamming { q, r } => hamming(q, r),
            CodeFamily::ExtendedHamming { r } => extended_hamming(r),
            CodeFamily::Simplex { q, k } => simplex(q, k),
            CodeFamily::ReedMuller { r, m } => reed_muller_binary(r, m),
            CodeFamily::Golay { n } => golay_binary(n),
            CodeFamily::LrcF13 => lrc_example_f13(),
            CodeFamily::SumCodeF13 => sum_code_f13(),
            CodeFamily::MdsF3 => mds_example_f3(),
        }
    }
}

/// Parses `key=value` pairs separated by commas.
pub fn parse_params(s: &str) -> Result<Vec<(String, u64)>> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| {
            let (k, v) = p
                .split_once('=')
                .ok_or_else(|| Error::InvalidParameter(format!("expected key=value, got `{p}`")))?;
            let v = v
                .trim()
                .parse::<u64>()
                .map_err(|_| Error::InvalidParameter(format!("`{v}` is not a non-negative integer")))?;
            Ok((k.trim().to_string(), v))
        })
        .collect()
}

/// Looks up `key` in parsed parameters, falling back to `default`.
pub fn param(params: &[(String, u64)], key: &str, default: Option<u64>) -> Result<u64> {
    params
        .iter()
        .rev()
        .find(|(k, _)| k == key)
        .map(|&(_, v)| v)
        .or(default)
        .ok_or_else(|| Error::InvalidParameter(format!("missing parameter `{key}`")))
}

impl FromStr for CodeFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, rest) = s.split_once(':').unwrap_or((s, ""));
        let p = parse_params(rest)?;
        let get = |key: &str, default: Option<u64>| param(&p, key, default);
        let us = |key: &str, default: Option<u64>| get(key, default).map(|v| v as usize);
        Ok(match name.trim() {
            "identity" => CodeFamily::Identity {
                q: get("q", Some(2))?,
                k: us("k", None)?,
            },
            "parity" => CodeFamily::Parity {
                q: get("q", Some(2))?,
                k: us("k", None)?,
            },
            "mds" | "rs" => CodeFamily::MdsRs {
                q: get("q", None)?,
                k: us("k", None)?,
                n: us("n", None)?,
            },
            "hamming" => CodeFamily::Hamming {
                q: get("q", Some(2))?,
                r: us("r", None)?,
            },
            "ext-hamming" => CodeFamily::ExtendedHamming { r: us("r", None)? },
            "simplex" => CodeFamily::Simplex {
                q: get("q", Some(2))?,
                k: us("k", None)?,
            },
            "rm" | "reed-muller" => CodeFamily::ReedMuller {
                r: us("r", None)?,
                m: us("m", None)?,
            },
            "golay" => CodeFamily::Golay { n: us("n", Some(24))? },
            "lrc13" => CodeFamily::LrcF13,
            "sum13" => CodeFamily::SumCodeF13,
            "mds3" => CodeFamily::MdsF3,
            other => return Err(Error::InvalidParameter(format!("unknown code family `{other}`"))),
        })
    }
}

impl fmt::Display for CodeFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CodeFamily::Identity { q, k } => write!(f, "identity:q={q},k={k}"),
            CodeFamily::Parity { q, k } => write!(f, "parity:q={q},k={k}"),
            CodeFamily::MdsRs { q, k, n } => write!(f, "mds:q={q},k={k},n={n}"),
            CodeFamily::Hamming { q, r } => write!(f, "hamming:q={q},r={r}"),
            CodeFamily::ExtendedHamming { r } => write!(f, "ext-hamming:r={r}"),
            CodeFamily::Simplex { q, k } => write!(f, "simplex:q={q},k={k}"),
            CodeFamily::ReedMuller { r, m } => write!(f, "rm:r={r},m={m}"),
            CodeFamily::Golay { n } => write!(f, "golay:n={n}"),
            CodeFamily::LrcF13 => write!(f, "lrc13"),
            CodeFamily::SumCodeF13 => write!(f, "sum13"),
            CodeFamily::MdsF3 => write!(f, "mds3"),
        }
    }
}

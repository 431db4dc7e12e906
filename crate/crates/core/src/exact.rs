//! Exact expectation engines.
//!
//! Three independent routes to `E[τ]` for a target, all in exact rational
//! arithmetic:
//!
//! * **alpha**: count, for every size `s`, the column subsets whose span
//!   covers the target, then apply the harmonic-binomial formula;
//! * **beta**: inclusion-exclusion over the minimal recovery sets;
//! * **dp**: the absorbing Markov chain on subsets of drawn columns.
//!
//! A target is covered once every one of its vectors lies in the span of the
//! drawn columns. Basis targets `e_i`, column targets `g_i` and index-set
//! targets `{e_i : i ∈ I}` are all handled the same way.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::field::{FieldElem, FieldSpec};
use crate::linalg::Echelon;
use crate::matrix::{ColumnSet, GenMatrix};

/// A recovery target. Indices are 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Target {
    /// The standard basis vector `e_i`.
    Basis(usize),
    /// The `i`-th column of the generator matrix.
    Column(usize),
    /// Every `e_i` with `i` in the set.
    Set(Vec<usize>),
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Basis(i) => write!(f, "e{}", i + 1),
            Target::Column(i) => write!(f, "g{}", i + 1),
            Target::Set(s) => write!(f, "{}", ColumnSet::new(s.clone())),
        }
    }
}

impl Target {
    /// The vectors that must all enter the span. Zero vectors are dropped.
    pub fn vectors(&self, g: &GenMatrix) -> Result<Vec<Vec<FieldElem>>> {
        let basis = |i: usize| {
            if i >= g.k() {
                return Err(Error::IndexOutOfRange {
                    what: "basis target",
                    index: i,
                    size: g.k(),
                });
            }
            Ok(g.unit(i))
        };
        let vs = match self {
            Target::Basis(i) => vec![basis(*i)?],
            Target::Column(i) => {
                if *i >= g.n() {
                    return Err(Error::IndexOutOfRange {
                        what: "column target",
                        index: *i,
                        size: g.n(),
                    });
                }
                vec![g.column(*i).to_vec()]
            }
            Target::Set(set) => {
                let set = ColumnSet::new(set.clone());
                set.indices().iter().map(|&i| basis(i)).collect::<Result<_>>()?
            }
        };
        Ok(vs.into_iter().filter(|v| v.iter().any(|x| !x.is_zero())).collect())
    }
}

/// Which exact engine to run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Engine {
    #[default]
    Alpha,
    Beta,
    Dp,
}

/// Where a reported value came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EngineTag {
    Alpha,
    Beta,
    DpOracle,
    ClosedForm,
    MonteCarlo,
}

impl From<Engine> for EngineTag {
    fn from(e: Engine) -> Self {
        match e {
            Engine::Alpha => EngineTag::Alpha,
            Engine::Beta => EngineTag::Beta,
            Engine::Dp => EngineTag::DpOracle,
        }
    }
}

impl fmt::Display for EngineTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EngineTag::Alpha => "alpha",
            EngineTag::Beta => "beta",
            EngineTag::DpOracle => "dp-oracle",
            EngineTag::ClosedForm => "closed-form",
            EngineTag::MonteCarlo => "monte-carlo",
        })
    }
}

/// Size limits for the exponential computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Guards {
    /// Subset enumeration is allowed for `n` up to this many columns.
    pub max_enum_bits: u32,
    /// Dual enumeration is allowed while `q^(n-k)` stays below `2^max_dual_bits`.
    pub max_dual_bits: u32,
    /// Largest number of minimal recovery sets for the beta engine (at most 127).
    pub max_family: usize,
    /// Largest `n` for the dynamic-programming oracle.
    pub max_dp_n: usize,
}

impl Default for Guards {
    fn default() -> Self {
        Self {
            max_enum_bits: 24,
            max_dual_bits: 20,
            max_family: 120,
            max_dp_n: 20,
        }
    }
}

impl Guards {
    /// Guards with every limit lifted (bounded only by 64-bit masks).
    pub fn unlimited() -> Self {
        Self {
            max_enum_bits: 63,
            max_dual_bits: 63,
            max_family: 127,
            max_dp_n: 30,
        }
    }

    fn check_enum(&self, n: usize) -> Result<()> {
        if n as u64 > u64::from(self.max_enum_bits) {
            return Err(Error::TooLarge {
                guard: "subset-enumeration",
                required: n as u64,
                limit: u64::from(self.max_enum_bits),
            });
        }
        Ok(())
    }
}

/// Guards plus the execution mode.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Options {
    pub guards: Guards,
    pub exec: Exec,
}

impl Options {
    pub fn sequential() -> Self {
        Self {
            exec: Exec::Sequential,
            ..Self::default()
        }
    }
}

// ---------------------------------------------------------------------------
// numbers

/// `H_n = 1 + 1/2 + … + 1/n`, with `H_0 = 0`.
pub fn harmonic(n: usize) -> BigRational {
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for i in 1..=n {
        // num/den + 1/i
        let i = BigInt::from(i);
        num = num * &i + &den;
        den *= i;
    }
    BigRational::new(num, den)
}

/// Binomial coefficient, zero when `k < 0`, `n < 0` or `k > n`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

fn pascal_u64(n: usize) -> Vec<Vec<u64>> {
    let mut t = vec![vec![0u64; n + 1]; n + 1];
    for a in 0..=n {
        t[a][0] = 1;
        for b in 1..=a {
            t[a][b] = t[a - 1][b - 1] + if b < a { t[a - 1][b] } else { 0 };
        }
    }
    t
}

/// Renders `r` with `sig` significant digits, trailing zeros removed.
pub fn to_decimal(r: &BigRational, sig: usize) -> String {
    if r.is_zero() {
        return "0".into();
    }
    let neg = r.is_negative();
    let a = r.abs();
    let (num, den) = (a.numer().clone(), a.denom().clone());
    // exponent e with 10^e <= a < 10^(e+1)
    let ten = BigInt::from(10);
    let mut e: i64 = num.to_string().len() as i64 - den.to_string().len() as i64;
    let pow10 = |p: i64| ten.pow(p.unsigned_abs() as u32);
    let ge = |e: i64| {
        if e >= 0 {
            num >= den.clone() * pow10(e)
        } else {
            num.clone() * pow10(e) >= den
        }
    };
    while !ge(e) {
        e -= 1;
    }
    while ge(e + 1) {
        e += 1;
    }
    // scaled = round(a * 10^(sig-1-e))
    let shift = sig as i64 - 1 - e;
    let (sn, sd) = if shift >= 0 {
        (num * pow10(shift), den)
    } else {
        (num, den * pow10(shift))
    };
    let two = BigInt::from(2);
    let mut digits = (sn * &two + &sd) / (sd * two);
    if digits >= pow10(sig as i64) {
        digits /= 10;
        e += 1;
    }
    let ds = digits.to_string();
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    if e < 0 {
        out.push_str("0.");
        out.push_str(&"0".repeat((-e - 1) as usize));
        out.push_str(&ds);
    } else if (e as usize) + 1 >= ds.len() {
        out.push_str(&ds);
        out.push_str(&"0".repeat(e as usize + 1 - ds.len()));
    } else {
        let (int, frac) = ds.split_at(e as usize + 1);
        out.push_str(int);
        out.push('.');
        out.push_str(frac);
    }
    if out.contains('.') {
        while out.ends_with('0') {
            out.pop();
        }
        if out.ends_with('.') {
            out.pop();
        }
    }
    out
}

/// Closest `f64` to `r`.
pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

// ---------------------------------------------------------------------------
// span tracking

/// Incremental span of drawn columns plus the residues of the target
/// vectors; the target is covered when every residue is zero.
#[derive(Clone)]
struct Cover {
    basis: Echelon,
    residues: Vec<Vec<FieldElem>>,
}

impl Cover {
    fn new(k: usize, targets: &[Vec<FieldElem>]) -> Self {
        Self {
            basis: Echelon::new(k),
            residues: targets.to_vec(),
        }
    }

    fn covered(&self) -> bool {
        self.residues.iter().all(|r| r.iter().all(|x| x.is_zero()))
    }

    /// The cover after adding `col`, or `None` when the span is unchanged.
    fn with_column(&self, f: &FieldSpec, col: &[FieldElem]) -> Option<Cover> {
        let mut next = self.clone();
        if !next.basis.insert(f, col) {
            return None;
        }
        for r in next.residues.iter_mut() {
            next.basis.reduce(f, r);
        }
        next.residues.retain(|r| r.iter().any(|x| !x.is_zero()));
        Some(next)
    }
}

fn check_reachable(g: &GenMatrix, targets: &[Vec<FieldElem>]) -> Result<()> {
    let all = ColumnSet::new((0..g.n()).collect());
    let basis = g.column_basis(&all);
    if targets.iter().all(|t| basis.contains(g.field(), t)) {
        Ok(())
    } else {
        Err(Error::TargetUnreachable)
    }
}

// ---------------------------------------------------------------------------
// alpha engine

/// `counts[s]` = number of `s`-subsets of columns whose span covers the target.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaProfile {
    pub target: Target,
    pub counts: Vec<u64>,
}

struct AlphaWalk<'a> {
    g: &'a GenMatrix,
    binom: Vec<Vec<u64>>,
}

impl AlphaWalk<'_> {
    fn walk(&self, j: usize, c: usize, cover: &Cover, counts: &mut [u64]) {
        let n = self.g.n();
        if cover.covered() {
            let rest = n - j;
            for t in 0..=rest {
                counts[c + t] += self.binom[rest][t];
            }
            return;
        }
        if j == n {
            return;
        }
        match cover.with_column(self.g.field(), self.g.column(j)) {
            Some(next) => self.walk(j + 1, c + 1, &next, counts),
            None => self.walk(j + 1, c + 1, cover, counts),
        }
        self.walk(j + 1, c, cover, counts);
    }

    /// Uncovered states after fixing the first `depth` columns; covered
    /// prefixes are counted directly.
    fn split(&self, j: usize, c: usize, cover: Cover, depth: usize, counts: &mut [u64], out: &mut Vec<(usize, Cover)>) {
        if cover.covered() || j == self.g.n() {
            self.walk(j, c, &cover, counts);
            return;
        }
        if j == depth {
            out.push((c, cover));
            return;
        }
        let next = cover.with_column(self.g.field(), self.g.column(j));
        match next {
            Some(next) => self.split(j + 1, c + 1, next, depth, counts, out),
            None => self.split(j + 1, c + 1, cover.clone(), depth, counts, out),
        }
        self.split(j + 1, c, cover, depth, counts, out);
    }
}

const PREFIX_DEPTH: usize = 10;

/// Coverage counts by size over all `2^n` column subsets.
pub fn alpha_counts(g: &GenMatrix, target: &Target, opts: &Options) -> Result<AlphaProfile> {
    let n = g.n();
    opts.guards.check_enum(n)?;
    let targets = target.vectors(g)?;
    check_reachable(g, &targets)?;
    let walk = AlphaWalk {
        g,
        binom: pascal_u64(n),
    };
    let mut counts = vec![0u64; n + 1];
    let root = Cover::new(g.k(), &targets);
    match opts.exec {
        Exec::Sequential => walk.walk(0, 0, &root, &mut counts),
        Exec::Parallel => {
            let depth = PREFIX_DEPTH.min(n);
            let mut tasks = Vec::new();
            walk.split(0, 0, root, depth, &mut counts, &mut tasks);
            let parts = opts.exec.map_slice(&tasks, |(c, cover)| {
                let mut part = vec![0u64; n + 1];
                walk.walk(depth, *c, cover, &mut part);
                part
            });
            for part in parts {
                for (a, b) in counts.iter_mut().zip(part) {
                    *a += b;
                }
            }
        }
    }
    Ok(AlphaProfile {
        target: target.clone(),
        counts,
    })
}

/// `E = Σ_{s=0}^{n-1} (C(n,s) − α(s)) / C(n−1,s)`.
pub fn expectation_from_alpha<T: Clone + Into<BigInt>>(n: usize, counts: &[T]) -> BigRational {
    let n = n as i64;
    let mut acc = BigRational::zero();
    for s in 0..n {
        let a: BigInt = counts[s as usize].clone().into();
        let num = binomial(n, s) - a;
        if !num.is_zero() {
            acc += BigRational::new(num, binomial(n - 1, s));
        }
    }
    acc
}

// ---------------------------------------------------------------------------
// beta engine

/// `beta[s][j]` = number of `s`-subfamilies of recovery sets whose union has size `j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BetaTable {
    pub rows: Vec<Vec<u128>>,
}

impl BetaTable {
    pub fn get(&self, s: usize, j: usize) -> u128 {
        self.rows.get(s).and_then(|r| r.get(j)).copied().unwrap_or(0)
    }
}

/// Inclusion-minimal recovery sets of a target, sorted by size then indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecoveryFamily {
    pub target: Target,
    pub n: usize,
    pub sets: Vec<ColumnSet>,
    pub beta: Option<BetaTable>,
}

fn minimal_only(mut masks: Vec<u64>) -> Vec<u64> {
    masks.sort_unstable_by_key(|m| (m.count_ones(), *m));
    masks.dedup();
    let mut kept: Vec<u64> = Vec::new();
    for m in masks {
        if !kept.iter().any(|&k| k & !m == 0) {
            kept.push(m);
        }
    }
    kept.sort_unstable_by_key(|&m| (m.count_ones(), ColumnSet::from_mask(m)));
    kept
}

/// Recovery sets from the dual of `(G | v)`: a dual codeword with a nonzero
/// last coordinate is a dependency writing `v` in terms of its support.
fn dual_recovery_masks(g: &GenMatrix, v: &[FieldElem], max_bits: u32) -> Result<Option<Vec<u64>>> {
    let f = g.field();
    let (k, n) = (g.k(), g.n());
    let mut cols: Vec<Vec<FieldElem>> = g.columns().map(<[_]>::to_vec).collect();
    cols.push(v.to_vec());
    let aug = GenMatrix::from_columns(f.clone(), k, &cols)?;
    let d = aug.dual_generator();
    let dim = d.k();
    // codewords with last coordinate 1 form a coset of dimension dim - 1
    let Some(r0) = (0..dim).find(|&r| !d.entry(r, n).is_zero()) else {
        return Ok(Some(Vec::new()));
    };
    let q = f.q() as u64;
    let free = dim - 1;
    let budget = (free as f64) * (q as f64).log2();
    if budget > f64::from(max_bits) {
        return Ok(None);
    }
    let s = f.inv_nonzero(d.entry(r0, n));
    let base: Vec<FieldElem> = d.row(r0).iter().map(|&x| f.mul(x, s)).collect();
    let others: Vec<Vec<FieldElem>> = (0..dim)
        .filter(|&r| r != r0)
        .map(|r| {
            let c = f.neg(d.entry(r, n));
            d.row(r)
                .iter()
                .zip(&base)
                .map(|(&x, &b)| f.add(x, f.mul(c, b)))
                .collect()
        })
        .collect();
    let total = q.pow(free as u32);
    let mut masks = Vec::with_capacity(total as usize);
    let mut coeffs = vec![0u32; free];
    let mut word = base.clone();
    for _ in 0..total {
        word.copy_from_slice(&base);
        for (row, &c) in others.iter().zip(&coeffs) {
            if c != 0 {
                let c = FieldElem(c as u16);
                for (w, &x) in word.iter_mut().zip(row) {
                    *w = f.add(*w, f.mul(c, x));
                }
            }
        }
        masks.push((0..n).filter(|&j| !word[j].is_zero()).fold(0u64, |m, j| m | 1 << j));
        for c in coeffs.iter_mut() {
            *c += 1;
            if *c < f.q() {
                break;
            }
            *c = 0;
        }
    }
    Ok(Some(minimal_only(masks)))
}

/// Recovery sets by subset search: every subset reached at the moment it
/// first covers the target is a candidate.
fn subset_recovery_masks(g: &GenMatrix, targets: &[Vec<FieldElem>]) -> Vec<u64> {
    fn walk(g: &GenMatrix, j: usize, mask: u64, cover: &Cover, out: &mut Vec<u64>) {
        if cover.covered() {
            out.push(mask);
            return;
        }
        if j == g.n() {
            return;
        }
        if let Some(next) = cover.with_column(g.field(), g.column(j)) {
            walk(g, j + 1, mask | 1 << j, &next, out);
        }
        walk(g, j + 1, mask, cover, out);
    }
    let mut out = Vec::new();
    walk(g, 0, 0, &Cover::new(g.k(), targets), &mut out);
    minimal_only(out)
}

/// Inclusion-minimal column sets whose span covers the target.
pub fn minimal_recovery_sets(g: &GenMatrix, target: &Target, opts: &Options) -> Result<RecoveryFamily> {
    let n = g.n();
    if n > 63 {
        return Err(Error::TooLarge {
            guard: "column-mask",
            required: n as u64,
            limit: 63,
        });
    }
    let targets = target.vectors(g)?;
    if targets.is_empty() {
        return Err(Error::ZeroTarget);
    }
    check_reachable(g, &targets)?;
    let dual = match targets.as_slice() {
        [v] => dual_recovery_masks(g, v, opts.guards.max_dual_bits)?,
        _ => None,
    };
    let masks = match dual {
        Some(m) => m,
        None => {
            opts.guards.check_enum(n)?;
            subset_recovery_masks(g, &targets)
        }
    };
    Ok(RecoveryFamily {
        target: target.clone(),
        n,
        sets: masks.into_iter().map(ColumnSet::from_mask).collect(),
        beta: None,
    })
}

/// Fills `beta` with a dynamic program over unions of recovery sets.
pub fn beta_counts(mut family: RecoveryFamily, opts: &Options) -> Result<RecoveryFamily> {
    let l = family.sets.len();
    // counts are bounded by C(L, s) < 2^L, so u128 is exact here
    let cap = opts.guards.max_family.min(127);
    if l > cap {
        return Err(Error::TooLarge {
            guard: "recovery-family",
            required: l as u64,
            limit: cap as u64,
        });
    }
    let state_limit = 1u64 << opts.guards.max_enum_bits.min(40);
    // by_union[U][s] = number of s-subfamilies whose union is exactly U
    let mut by_union: HashMap<u64, Vec<u128>> = HashMap::new();
    let mut start = vec![0u128; l + 1];
    start[0] = 1;
    by_union.insert(0, start);
    for (done, set) in family.sets.iter().enumerate() {
        let m = set.mask();
        let snapshot: Vec<(u64, Vec<u128>)> = by_union.iter().map(|(&u, c)| (u, c.clone())).collect();
        for (u, counts) in snapshot {
            let slot = by_union.entry(u | m).or_insert_with(|| vec![0; l + 1]);
            for s in 0..=done {
                slot[s + 1] += counts[s];
            }
        }
        let states = by_union.len() as u64 * (l as u64 + 1);
        if states > state_limit {
            return Err(Error::TooLarge {
                guard: "beta-states",
                required: states,
                limit: state_limit,
            });
        }
    }
    let mut rows = vec![vec![0u128; family.n + 1]; l + 1];
    for (u, counts) in by_union {
        let j = u.count_ones() as usize;
        for (s, c) in counts.into_iter().enumerate() {
            rows[s][j] += c;
        }
    }
    family.beta = Some(BetaTable { rows });
    Ok(family)
}

/// `E = n Σ_j H_j Σ_s (−1)^{s+1} β(s,j)`.
pub fn expectation_from_beta(n: usize, beta: &BetaTable) -> BigRational {
    let mut acc = BigRational::zero();
    let mut h = BigRational::zero();
    for j in 1..=n {
        h += BigRational::new(BigInt::one(), BigInt::from(j));
        let mut c = BigInt::zero();
        for (s, row) in beta.rows.iter().enumerate().skip(1) {
            let b = BigInt::from(row.get(j).copied().unwrap_or(0));
            if s % 2 == 1 {
                c += b;
            } else {
                c -= b;
            }
        }
        if !c.is_zero() {
            acc += &h * BigRational::from_integer(c);
        }
    }
    acc * BigRational::from_integer(BigInt::from(n))
}

// ---------------------------------------------------------------------------
// dynamic-programming oracle

/// Expectation from the absorbing chain on sets of distinct drawn columns.
pub fn expectation_dp_oracle(g: &GenMatrix, target: &Target, opts: &Options) -> Result<BigRational> {
    let n = g.n();
    if n > opts.guards.max_dp_n {
        return Err(Error::TooLarge {
            guard: "dp-oracle",
            required: n as u64,
            limit: opts.guards.max_dp_n as u64,
        });
    }
    let targets = target.vectors(g)?;
    check_reachable(g, &targets)?;
    let f = g.field();
    let full = 1usize << n;
    let covered: Vec<bool> = opts.exec.map_range(full, |m| {
        let set = ColumnSet::from_mask(m as u64);
        let b = g.column_basis(&set);
        targets.iter().all(|t| b.contains(f, t))
    });
    let nn = BigRational::from_integer(BigInt::from(n));
    let mut e: Vec<Option<BigRational>> = vec![None; full];
    for m in (0..full).rev() {
        if covered[m] {
            continue;
        }
        let mut acc = nn.clone();
        for j in 0..n {
            if m >> j & 1 == 0 {
                if let Some(v) = &e[m | 1 << j] {
                    acc += v;
                }
            }
        }
        let free = n - (m as u64).count_ones() as usize;
        e[m] = Some(acc / BigRational::from_integer(BigInt::from(free)));
    }
    Ok(e[0].take().unwrap_or_else(BigRational::zero))
}

// ---------------------------------------------------------------------------
// reports

/// Exact expectation for a single target.
pub fn expectation(g: &GenMatrix, target: &Target, engine: Engine, opts: &Options) -> Result<BigRational> {
    if target.vectors(g)?.is_empty() {
        return Ok(BigRational::zero());
    }
    match engine {
        Engine::Alpha => {
            let p = alpha_counts(g, target, opts)?;
            Ok(expectation_from_alpha(g.n(), &p.counts))
        }
        Engine::Beta => {
            let fam = beta_counts(minimal_recovery_sets(g, target, opts)?, opts)?;
            Ok(expectation_from_beta(g.n(), fam.beta.as_ref().expect("beta filled")))
        }
        Engine::Dp => expectation_dp_oracle(g, target, opts),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TargetValue {
    pub target: Target,
    pub value: BigRational,
    /// The target vector is zero, so it is recovered before any draw.
    pub zero_target: bool,
}

/// Per-target expectations with their maximum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpectationReport {
    pub engine: EngineTag,
    pub per_target: Vec<TargetValue>,
    pub t_max: BigRational,
    /// Positions in `per_target` attaining `t_max`, ascending.
    pub argmax: Vec<usize>,
}

impl ExpectationReport {
    pub fn from_values(engine: EngineTag, per_target: Vec<TargetValue>) -> Self {
        let t_max = per_target
            .iter()
            .map(|t| &t.value)
            .max()
            .cloned()
            .unwrap_or_else(BigRational::zero);
        let argmax = per_target
            .iter()
            .enumerate()
            .filter(|(_, t)| t.value == t_max)
            .map(|(i, _)| i)
            .collect();
        Self {
            engine,
            per_target,
            t_max,
            argmax,
        }
    }

    pub fn values(&self) -> Vec<BigRational> {
        self.per_target.iter().map(|t| t.value.clone()).collect()
    }

    pub fn sum(&self) -> BigRational {
        self.per_target.iter().map(|t| &t.value).sum()
    }
}

fn report(g: &GenMatrix, targets: Vec<Target>, engine: Engine, opts: &Options) -> Result<ExpectationReport> {
    let per_target = targets
        .into_iter()
        .map(|t| {
            let zero_target = t.vectors(g)?.is_empty();
            let value = expectation(g, &t, engine, opts)?;
            Ok(TargetValue {
                target: t,
                value,
                zero_target,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ExpectationReport::from_values(engine.into(), per_target))
}

/// `E[τ_i]` for every `i ∈ [k]` and their maximum.
pub fn t_max(g: &GenMatrix, engine: Engine, opts: &Options) -> Result<ExpectationReport> {
    report(g, (0..g.k()).map(Target::Basis).collect(), engine, opts)
}

/// `E[τ̃_i]`, the expected draws until column `i` itself is recovered, for all `i ∈ [n]`.
pub fn tilde_expectations(g: &GenMatrix, opts: &Options) -> Result<ExpectationReport> {
    report(g, (0..g.n()).map(Target::Column).collect(), Engine::Alpha, opts)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BalanceReport {
    pub balanced: bool,
    pub tilde: ExpectationReport,
    /// Two columns with different values when unbalanced.
    pub witness: Option<(usize, usize)>,
}

/// Whether all column-recovery expectations coincide.
pub fn is_recovery_balanced(g: &GenMatrix, opts: &Options) -> Result<BalanceReport> {
    let tilde = tilde_expectations(g, opts)?;
    let vals = tilde.values();
    let witness = vals.iter().position(|v| *v != vals[0]).map(|j| (0, j));
    Ok(BalanceReport {
        balanced: witness.is_none(),
        tilde,
        witness,
    })
}

/// Checks `Σ_j C(s,j)(−1)^j n/(n−s+j) = 1/C(n−1,s)` for one `(n, s)`.
pub fn binomial_identity_holds(n: usize, s: usize) -> bool {
    let (n, s) = (n as i64, s as i64);
    let mut lhs = BigRational::zero();
    for j in 0..=s {
        let term = BigRational::new(binomial(s, j) * BigInt::from(n), BigInt::from(n - s + j));
        if j % 2 == 0 {
            lhs += term;
        } else {
            lhs -= term;
        }
    }
    lhs == BigRational::new(BigInt::one(), binomial(n - 1, s))
}

//! Sweeps, bounds and searches over generator matrices.

use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::closedform::{ext_mds_tmax, ext_simplex_tmax, QBinomialContext};
use crate::error::{Error, Result};
use crate::exact::{harmonic, is_recovery_balanced, t_max, Engine, EngineTag, Options, Target};
use crate::field::{FieldElem, FieldSpec};
use crate::matrix::GenMatrix;
use crate::montecarlo::{simulate, SimConfig};

fn int(v: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

// ---------------------------------------------------------------------------
// sweeps over the number of identity blocks

/// How each row of a sweep is evaluated.
#[derive(Clone, Debug, PartialEq)]
pub enum SweepEngine {
    Exact(Engine),
    /// Closed form; assumes the base matrix is a systematic MDS generator.
    ExtMds,
    /// Closed form; assumes the base matrix is the q-ary simplex generator.
    ExtSimplex,
    MonteCarlo(SimConfig),
}

#[derive(Clone, Debug, PartialEq)]
pub enum SweepValue {
    Exact(BigRational),
    Estimate { mean: f64, std_err: f64 },
}

impl SweepValue {
    pub fn as_f64(&self) -> f64 {
        match self {
            SweepValue::Exact(r) => crate::exact::to_f64(r),
            SweepValue::Estimate { mean, .. } => *mean,
        }
    }

    fn less_than(&self, other: &SweepValue) -> bool {
        match (self, other) {
            (SweepValue::Exact(a), SweepValue::Exact(b)) => a < b,
            _ => self.as_f64() < other.as_f64(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub x: usize,
    /// Number of columns of `Gˣ`, `xk + n − k`.
    pub n_cols: usize,
    pub t_max: SweepValue,
    /// `t_max / k`.
    pub normalized: SweepValue,
    pub engine: EngineTag,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Sweep {
    pub rows: Vec<SweepRow>,
    /// Smallest `x` attaining the minimum.
    pub argmin: usize,
}

/// `T_max(Gˣ)` for each `x` in the range.
pub fn sweep_x(base: &GenMatrix, xs: RangeInclusive<usize>, engine: &SweepEngine, opts: &Options) -> Result<Sweep> {
    if *xs.start() == 0 || xs.is_empty() {
        return Err(Error::InvalidParameter(
            "x range must be nonempty and start at 1 or more".into(),
        ));
    }
    if !base.is_systematic() {
        return Err(Error::NotSystematic);
    }
    let (k, n) = (base.k(), base.n());
    let ctx =
        matches!(engine, SweepEngine::ExtSimplex).then(|| QBinomialContext::new(u64::from(base.field().q()), k + 1));
    let mut rows = Vec::new();
    for x in xs {
        let (value, tag) = match engine {
            SweepEngine::Exact(e) => (
                SweepValue::Exact(t_max(&base.append_identities(x)?, *e, opts)?.t_max),
                (*e).into(),
            ),
            SweepEngine::ExtMds => (SweepValue::Exact(ext_mds_tmax(k, n, x)?), EngineTag::ClosedForm),
            SweepEngine::ExtSimplex => (
                SweepValue::Exact(ext_simplex_tmax(ctx.as_ref().expect("context built"), k, x)?),
                EngineTag::ClosedForm,
            ),
            SweepEngine::MonteCarlo(cfg) => {
                let gx = base.append_identities(x)?;
                let mut best: Option<(f64, f64)> = None;
                for i in 0..k {
                    let r = simulate(&gx, &Target::Basis(i), cfg, opts.exec)?;
                    if best.is_none_or(|(m, _)| r.mean > m) {
                        best = Some((r.mean, r.std_err));
                    }
                }
                let (mean, std_err) = best.expect("k >= 1");
                (SweepValue::Estimate { mean, std_err }, EngineTag::MonteCarlo)
            }
        };
        let normalized = match &value {
            SweepValue::Exact(r) => SweepValue::Exact(r / int(k)),
            SweepValue::Estimate { mean, std_err } => SweepValue::Estimate {
                mean: mean / k as f64,
                std_err: std_err / k as f64,
            },
        };
        rows.push(SweepRow {
            x,
            n_cols: x * k + n - k,
            t_max: value,
            normalized,
            engine: tag,
        });
    }
    let mut argmin = 0;
    for (i, r) in rows.iter().enumerate() {
        if r.t_max.less_than(&rows[argmin].t_max) {
            argmin = i;
        }
    }
    Ok(Sweep {
        argmin: rows[argmin].x,
        rows,
    })
}

// ---------------------------------------------------------------------------
// bounds and random search

#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub q: u64,
    pub n: usize,
    pub k: usize,
    /// `n − n(n−k)/k · (H_n − H_{n−k})`, valid for every rank-`k` `k × n` matrix.
    pub bound1: BigRational,
    /// `(k+1)/2`, valid for every length.
    pub bound2: BigRational,
    pub best: Option<BigRational>,
    pub witness: Option<GenMatrix>,
}

pub fn lower_bound(n: usize, k: usize) -> BigRational {
    int(n) - int(n * (n - k)) / int(k) * (harmonic(n) - harmonic(n - k))
}

pub fn bounds(q: u64, n: usize, k: usize) -> Result<BoundReport> {
    if k < 1 || k > n {
        return Err(Error::InvalidParameter(format!("need 1 <= k <= n, got k={k}, n={n}")));
    }
    FieldSpec::new(q)?;
    Ok(BoundReport {
        q,
        n,
        k,
        bound1: lower_bound(n, k),
        bound2: BigRational::new(BigInt::from(k + 1), BigInt::from(2)),
        best: None,
        witness: None,
    })
}

/// A uniformly random rank-`k` matrix, or a uniformly random `(I_k | R)`.
pub fn random_generator(field: &FieldSpec, k: usize, n: usize, systematic: bool, rng: &mut impl Rng) -> GenMatrix {
    let q = field.q();
    loop {
        let mut data: Vec<FieldElem> = (0..k * n).map(|_| FieldElem(rng.random_range(0..q) as u16)).collect();
        if systematic {
            for r in 0..k {
                for c in 0..k {
                    data[r * n + c] = if r == c { FieldElem::ONE } else { FieldElem::ZERO };
                }
            }
        }
        if let Ok(g) = GenMatrix::new(field.clone(), k, n, data) {
            return g;
        }
    }
}

/// Per-iteration generator: stream `i` of the seeded ChaCha8.
pub fn iteration_rng(seed: u64, i: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i);
    rng
}

/// Samples `iterations` matrices and reports the smallest `T_max`. Every
/// sample is checked against `bound1`.
pub fn random_search(
    q: u64,
    k: usize,
    n: usize,
    iterations: u64,
    seed: u64,
    systematic_only: bool,
    opts: &Options,
) -> Result<BoundReport> {
    let mut report = bounds(q, n, k)?;
    let field = FieldSpec::new(q)?;
    if n as u64 > u64::from(opts.guards.max_enum_bits) {
        return Err(Error::TooLarge {
            guard: "subset-enumeration",
            required: n as u64,
            limit: u64::from(opts.guards.max_enum_bits),
        });
    }
    let inner = Options {
        exec: crate::exec::Exec::Sequential,
        ..*opts
    };
    let results = opts.exec.try_map_range(iterations as usize, |i| {
        let g = random_generator(&field, k, n, systematic_only, &mut iteration_rng(seed, i as u64));
        let t = t_max(&g, Engine::Alpha, &inner)?.t_max;
        if t < report.bound1 {
            return Err(Error::InvariantViolation(format!(
                "T_max {t} below the lower bound {}",
                report.bound1
            )));
        }
        Ok((t, g))
    })?;
    // first minimum in iteration order
    let mut best: Option<(BigRational, GenMatrix)> = None;
    for (t, g) in results {
        if best.as_ref().is_none_or(|(b, _)| t < *b) {
            best = Some((t, g));
        }
    }
    if let Some((t, g)) = best {
        report.best = Some(t);
        report.witness = Some(g);
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// permutation automorphisms

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Transitivity {
    Transitive,
    NotTransitive,
    /// The scan was refused by the size guard.
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PAutReport {
    pub status: Transitivity,
    /// Orbits of `[n]` under the permutation automorphism group.
    pub orbits: Option<Vec<Vec<usize>>>,
    /// Number of automorphisms found.
    pub group_order: Option<u64>,
}

impl PAutReport {
    /// Whether some automorphism sends coordinate `i` to `j`.
    pub fn maps(&self, i: usize, j: usize) -> Option<bool> {
        self.orbits
            .as_ref()
            .map(|o| o.iter().any(|orb| orb.contains(&i) && orb.contains(&j)))
    }
}

/// Projective class label of every column, and the multiplicity of that class.
fn column_classes(g: &GenMatrix) -> Vec<(Option<usize>, usize)> {
    let f = g.field();
    let normal: Vec<Option<Vec<FieldElem>>> = g
        .columns()
        .map(|c| {
            let lead = c.iter().find(|x| !x.is_zero())?;
            let s = f.inv_nonzero(*lead);
            Some(c.iter().map(|&x| f.mul(x, s)).collect())
        })
        .collect();
    let mut labels: Vec<Option<Vec<FieldElem>>> = Vec::new();
    let ids: Vec<Option<usize>> = normal
        .iter()
        .map(|v| {
            v.as_ref().map(|v| {
                labels.iter().position(|l| l.as_ref() == Some(v)).unwrap_or_else(|| {
                    labels.push(Some(v.clone()));
                    labels.len() - 1
                })
            })
        })
        .collect();
    ids.iter()
        .map(|id| (*id, ids.iter().filter(|o| *o == id).count()))
        .collect()
}

/// Scans all of `S_n` (with multiplicity pruning) for permutations fixing the
/// row space. Returns `Unknown` when `n > max_n`.
pub fn paut_transitive(g: &GenMatrix, max_n: usize) -> PAutReport {
    let n = g.n();
    if n > max_n {
        return PAutReport {
            status: Transitivity::Unknown,
            orbits: None,
            group_order: None,
        };
    }
    let reference = g.rref().0;
    let classes = column_classes(g);
    let mult: Vec<(bool, usize)> = classes.iter().map(|(id, m)| (id.is_some(), *m)).collect();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let mut perm = Vec::with_capacity(n);
    let mut used = vec![false; n];
    let mut order = 0u64;
    #[allow(clippy::too_many_arguments)]
    fn rec(
        g: &GenMatrix,
        reference: &GenMatrix,
        mult: &[(bool, usize)],
        perm: &mut Vec<usize>,
        used: &mut [bool],
        parent: &mut [usize],
        order: &mut u64,
    ) {
        let n = g.n();
        let j = perm.len();
        if j == n {
            let h = g.permute_columns(perm).expect("valid permutation");
            if h.rref().0 == *reference {
                *order += 1;
                for (i, &s) in perm.iter().enumerate() {
                    let (a, b) = (find(parent, i), find(parent, s));
                    parent[a.max(b)] = a.min(b);
                }
            }
            return;
        }
        for cand in 0..n {
            if !used[cand] && mult[cand] == mult[j] {
                used[cand] = true;
                perm.push(cand);
                rec(g, reference, mult, perm, used, parent, order);
                perm.pop();
                used[cand] = false;
            }
        }
    }
    rec(g, &reference, &mult, &mut perm, &mut used, &mut parent, &mut order);
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    let mut root_of: Vec<usize> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        match root_of.iter().position(|&x| x == r) {
            Some(p) => orbits[p].push(i),
            None => {
                root_of.push(r);
                orbits.push(vec![i]);
            }
        }
    }
    PAutReport {
        status: if orbits.len() <= 1 {
            Transitivity::Transitive
        } else {
            Transitivity::NotTransitive
        },
        orbits: Some(orbits),
        group_order: Some(order),
    }
}

// ---------------------------------------------------------------------------
// balance of duals and products

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualityRow {
    pub name: String,
    pub k: usize,
    pub n: usize,
    pub balanced: bool,
    pub dual_balanced: bool,
}

impl DualityRow {
    /// Exactly one of the code and its dual is balanced.
    pub fn counterexample_candidate(&self) -> bool {
        self.balanced != self.dual_balanced
    }
}

/// Balance of each code and of its dual.
pub fn duality_balance_report(codes: &[(String, GenMatrix)], opts: &Options) -> Result<Vec<DualityRow>> {
    codes
        .iter()
        .map(|(name, g)| {
            Ok(DualityRow {
                name: name.clone(),
                k: g.k(),
                n: g.n(),
                balanced: is_recovery_balanced(g, opts)?.balanced,
                dual_balanced: is_recovery_balanced(&g.dual_generator(), opts)?.balanced,
            })
        })
        .collect()
}

/// Duality rows for `count` random rank-`k` codes with `2 ≤ k < n ≤ n_max`.
pub fn random_duality_probe(q: u64, n_max: usize, count: u64, seed: u64, opts: &Options) -> Result<Vec<DualityRow>> {
    let field = FieldSpec::new(q)?;
    let codes: Vec<(String, GenMatrix)> = (0..count)
        .map(|i| {
            let mut rng = iteration_rng(seed, i);
            let n = rng.random_range(3..=n_max.max(3));
            let k = rng.random_range(2..n);
            (format!("random-{i}"), random_generator(&field, k, n, false, &mut rng))
        })
        .collect();
    duality_balance_report(&codes, opts)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductReport {
    pub left_balanced: bool,
    pub right_balanced: bool,
    pub product_balanced: bool,
    /// Common value of every column expectation when balanced.
    pub value: Option<BigRational>,
}

/// Checks that the Cartesian product of two balanced codes of equal rate is
/// balanced.
pub fn product_balance_check(g1: &GenMatrix, g2: &GenMatrix, opts: &Options) -> Result<ProductReport> {
    let (k1, n1, k2, n2) = (g1.k(), g1.n(), g2.k(), g2.n());
    if k1 * n2 != k2 * n1 {
        return Err(Error::RateMismatch { k1, n1, k2, n2 });
    }
    let left = is_recovery_balanced(g1, opts)?.balanced;
    let right = is_recovery_balanced(g2, opts)?.balanced;
    let prod = is_recovery_balanced(&g1.cartesian_product(g2)?, opts)?;
    if left && right && !prod.balanced {
        return Err(Error::InvariantViolation(
            "product of balanced codes of equal rate is unbalanced".into(),
        ));
    }
    Ok(ProductReport {
        left_balanced: left,
        right_balanced: right,
        product_balanced: prod.balanced,
        value: prod.balanced.then(|| prod.tilde.per_target[0].value.clone()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes;

    fn rat(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn bound_values() {
        assert_eq!(bounds(2, 2, 2).unwrap().bound2, rat(3, 2));
        assert_eq!(bounds(2, 5, 5).unwrap().bound1, rat(5, 1));
        // 4 - 4*2/2 * (H4 - H2) = 4 - 4 * 7/12
        assert_eq!(bounds(2, 4, 2).unwrap().bound1, rat(5, 3));
        assert!(bounds(2, 2, 3).is_err());
    }

    #[test]
    fn sweeps() {
        let opts = Options::default();
        let p4 = codes::parity(2, 4).unwrap();
        let s = sweep_x(&p4, 1..=6, &SweepEngine::ExtMds, &opts).unwrap();
        assert_eq!(s.rows[0].t_max, SweepValue::Exact(rat(4, 1)));
        assert_eq!(s.rows[2].n_cols, 13);
        let p2 = codes::parity(2, 2).unwrap();
        let closed = sweep_x(&p2, 1..=4, &SweepEngine::ExtMds, &opts).unwrap();
        let exact = sweep_x(&p2, 1..=4, &SweepEngine::Exact(Engine::Alpha), &opts).unwrap();
        assert_eq!(
            closed.rows.iter().map(|r| &r.t_max).collect::<Vec<_>>(),
            exact.rows.iter().map(|r| &r.t_max).collect::<Vec<_>>()
        );
        assert_eq!(closed.rows[1].t_max, SweepValue::Exact(rat(23, 12)));
        let sim = codes::simplex(2, 3).unwrap();
        let a = sweep_x(&sim, 1..=2, &SweepEngine::ExtSimplex, &opts).unwrap();
        let b = sweep_x(&sim, 1..=2, &SweepEngine::Exact(Engine::Alpha), &opts).unwrap();
        assert_eq!(a.rows[1].t_max, b.rows[1].t_max);
        let mc = sweep_x(&p2, 2..=2, &SweepEngine::MonteCarlo(SimConfig::new(50_000, 3)), &opts).unwrap();
        let SweepValue::Estimate { mean, std_err } = mc.rows[0].t_max else {
            panic!()
        };
        assert!((mean - 23.0 / 12.0).abs() < 5.0 * std_err);
    }

    #[test]
    fn search_small() {
        let opts = Options::default();
        let r = random_search(2, 2, 5, 200, 11, false, &opts).unwrap();
        assert!(r.best.clone().unwrap() <= rat(23, 12));
        let again = random_search(2, 2, 5, 200, 11, false, &Options::sequential()).unwrap();
        assert_eq!(r, again);
        let r = random_search(2, 2, 2, 20, 1, false, &opts).unwrap();
        assert_eq!(r.best, Some(rat(2, 1)));
        let r = random_search(3, 2, 4, 30, 5, true, &opts).unwrap();
        assert!(r.witness.unwrap().is_systematic());
    }

    #[test]
    fn automorphisms() {
        let p = paut_transitive(&codes::parity(2, 2).unwrap(), 8);
        assert_eq!(p.status, Transitivity::Transitive);
        assert_eq!(p.group_order, Some(6));
        let m = paut_transitive(&codes::mds_example_f3().unwrap(), 8);
        assert_eq!(m.maps(0, 1), Some(false));
        assert_eq!(m.status, Transitivity::NotTransitive);
        let id = paut_transitive(&GenMatrix::identity(FieldSpec::new(3).unwrap(), 3), 8);
        assert_eq!((id.status, id.group_order), (Transitivity::Transitive, Some(6)));
        let h = paut_transitive(&codes::hamming(2, 3).unwrap(), 8);
        assert_eq!((h.status, h.group_order), (Transitivity::Transitive, Some(168)));
        assert_eq!(
            paut_transitive(&codes::simplex(2, 4).unwrap(), 8).status,
            Transitivity::Unknown
        );
    }

    #[test]
    fn duality_and_products() {
        let opts = Options::default();
        let codes = vec![
            ("hamming".to_string(), codes::hamming(2, 3).unwrap()),
            ("rm13".to_string(), codes::reed_muller_binary(1, 3).unwrap()),
        ];
        for row in duality_balance_report(&codes, &opts).unwrap() {
            assert!(row.balanced && row.dual_balanced, "{row:?}");
        }
        let p = codes::parity(2, 2).unwrap();
        let r = product_balance_check(&p, &p, &opts).unwrap();
        assert!(r.product_balanced);
        assert_eq!(r.value, Some(rat(4, 1)));
        let s = codes::simplex(2, 2).unwrap();
        assert!(product_balance_check(&s, &s, &opts).unwrap().product_balanced);
        assert!(matches!(
            product_balance_check(&p, &codes::hamming(2, 3).unwrap(), &opts),
            Err(Error::RateMismatch { .. })
        ));
    }
}

//! Closed-form counts and expectations for structured codes.
//!
//! Out-of-range binomials and Gaussian binomials evaluate to zero, so every
//! sum below can run over its natural index box without trimming bounds.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{binomial, harmonic};

/// Gaussian binomials `[a b]_q` with a precomputed q-Pascal table.
#[derive(Clone, Debug)]
pub struct QBinomialContext {
    q: u64,
    table: Vec<Vec<BigInt>>,
}

impl QBinomialContext {
    /// Precomputes `[a b]_q` for `a ≤ max_a`; larger arguments are computed
    /// on demand without memoisation.
    pub fn new(q: u64, max_a: usize) -> Self {
        let mut table: Vec<Vec<BigInt>> = Vec::with_capacity(max_a + 1);
        for a in 0..=max_a {
            let mut row = vec![BigInt::zero(); a + 1];
            row[0] = BigInt::one();
            for b in 1..=a {
                // [a b] = [a-1 b-1] + q^b [a-1 b]
                let upper = if b < a { table[a - 1][b].clone() } else { BigInt::zero() };
                row[b] = &table[a - 1][b - 1] + upper * BigInt::from(q).pow(b as u32);
            }
            table.push(row);
        }
        Self { q, table }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    fn qpow(&self, e: i64) -> BigInt {
        BigInt::from(self.q).pow(e as u32)
    }

    /// Number of `b`-dimensional subspaces of GF(q)^a.
    pub fn q_binomial(&self, a: i64, b: i64) -> BigInt {
        if a < 0 || b < 0 || b > a {
            return BigInt::zero();
        }
        if let Some(v) = self.table.get(a as usize).and_then(|r| r.get(b as usize)) {
            return v.clone();
        }
        let (mut num, mut den) = (BigInt::one(), BigInt::one());
        for i in 0..b {
            num *= self.qpow(a - i) - 1;
            den *= self.qpow(i + 1) - 1;
        }
        num / den
    }

    /// Möbius function of the subspace lattice across `d` dimensions:
    /// `(−1)^d q^{C(d,2)}`.
    pub fn mobius(&self, d: i64) -> BigInt {
        let m = self.qpow(d * (d - 1) / 2);
        if d % 2 == 0 {
            m
        } else {
            -m
        }
    }

    /// `(q^z − 1)/(q − 1)`, the number of projective points of a `z`-space.
    pub fn points(&self, z: i64) -> i64 {
        ((self.q.pow(z as u32) - 1) / (self.q - 1)) as i64
    }
}

fn sign(e: i64) -> BigInt {
    if e.rem_euclid(2) == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

fn ratio(num: BigInt, den: BigInt) -> BigRational {
    BigRational::new(num, den)
}

// ---------------------------------------------------------------------------
// MDS

/// Coverage count of a column target in a systematic `[n,k]` MDS code.
pub fn mds_alpha(k: usize, n: usize, s: usize) -> BigInt {
    let (k, n, s) = (k as i64, n as i64, s as i64);
    if s < k {
        binomial(n - 1, s - 1)
    } else {
        binomial(n, s)
    }
}

// ---------------------------------------------------------------------------
// Hamming

/// Inner count `γ(s,v)` for the q-ary Hamming code of redundancy `r`.
pub fn hamming_gamma(ctx: &QBinomialContext, r: usize, s: usize, v: usize) -> BigInt {
    let (r, s, v) = (r as i64, s as i64, v as i64);
    let q = ctx.q as i64;
    let mut acc = BigInt::zero();
    for u in v..r {
        let c = binomial(q.pow((r - u - 1) as u32), s);
        if c.is_zero() {
            continue;
        }
        acc += ctx.qpow(u) * ctx.q_binomial(r - v - 1, u - v) * c * ctx.mobius(u - v);
    }
    ctx.q_binomial(r - 1, v) * acc
}

/// Number of `s`-subfamilies of minimal recovery sets of an information
/// coordinate whose union has `j` elements, for the q-ary Hamming code of
/// redundancy `r`. Independent of the coordinate `i`.
pub fn hamming_beta(ctx: &QBinomialContext, r: usize, i: usize, s: usize, j: usize) -> Result<BigInt> {
    let q = ctx.q as i64;
    let n = ctx.points(r as i64) as usize;
    let k = n - r;
    let smax = q.pow(r as u32 - 1) as usize + 1;
    for (what, index, lo, hi) in [
        ("information index", i, 0, k - 1),
        ("family size", s, 1, smax),
        ("union size", j, 1, n),
    ] {
        if index < lo || index > hi {
            return Err(Error::IndexOutOfRange {
                what,
                index,
                size: hi + 1,
            });
        }
    }
    let mut acc = BigInt::zero();
    for v in 0..r {
        let a = (q.pow(r as u32) - q.pow(v as u32)) as usize / (q as usize - 1);
        if j + 1 == a {
            acc += hamming_gamma(ctx, r, s, v);
        }
        if j == a && s >= 2 {
            acc += hamming_gamma(ctx, r, s - 1, v);
        }
    }
    // the singleton {i} on its own
    if s == 1 && j == 1 {
        acc += 1;
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// simplex

/// Coverage count of any column target in the q-ary simplex code of dimension `k`.
pub fn simplex_alpha(ctx: &QBinomialContext, k: usize, s: usize) -> BigInt {
    let (k, s) = (k as i64, s as i64);
    let mut acc = BigInt::zero();
    for d in 1..=s.min(k) {
        let mut inner = BigInt::zero();
        for r in 1..=d {
            let c = binomial(ctx.points(r), s);
            if !c.is_zero() {
                inner += ctx.q_binomial(d, r) * c * ctx.mobius(d - r);
            }
        }
        acc += ctx.q_binomial(k - 1, d - 1) * inner;
    }
    acc
}

// ---------------------------------------------------------------------------
// codes with repeated identity blocks

/// `T_max` of `Gˣ` for a systematic `[n,k]` MDS generator `G`.
pub fn ext_mds_tmax(k: usize, n: usize, x: usize) -> Result<BigRational> {
    if k == 0 || k > n || x == 0 {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= k <= n and x >= 1, got k={k}, n={n}, x={x}"
        )));
    }
    let (k, n, x) = (k as i64, n as i64, x as i64);
    let big_n = x * k + n - k;
    let mut acc = BigRational::one();
    for s in 1..big_n {
        acc += ratio(binomial(big_n - x, s), binomial(big_n - 1, s));
    }
    for s in k..big_n {
        let mut num = BigInt::zero();
        for a in 0..k {
            let mut inner = BigInt::zero();
            for m in 0..=s - k {
                let c = binomial(n - k, s - a - m);
                if c.is_zero() {
                    continue;
                }
                let mut alt = BigInt::zero();
                for t in 0..=a {
                    alt += sign(t) * binomial(a, t) * binomial((a - t) * x, m + a);
                }
                inner += c * alt;
            }
            num += binomial(k - 1, a) * inner;
        }
        acc -= ratio(num, binomial(big_n - 1, s));
    }
    Ok(acc)
}

/// Number of `z`-dimensional subspaces of GF(q)^k containing exactly `ω`
/// of the standard basis vectors.
pub fn eta(ctx: &QBinomialContext, k: usize, z: usize, w: usize) -> BigInt {
    let (k, z, w) = (k as i64, z as i64, w as i64);
    let mut acc = BigInt::zero();
    for r in w..=k {
        acc += sign(r - w) * binomial(k - w, r - w) * ctx.q_binomial(k - r, z - r);
    }
    binomial(k, w) * acc
}

/// Companion of [`eta`] attached to a fixed coordinate `i`; the value does
/// not depend on `i`.
pub fn eta_i(ctx: &QBinomialContext, k: usize, z: usize, w: usize) -> BigInt {
    let (k, z, w) = (k as i64, z as i64, w as i64);
    let mut t1 = BigInt::zero();
    for r in w..=k {
        t1 += binomial(k - w, r - w) * ctx.q_binomial(k - r, z - r) * sign(r - w);
    }
    let mut t2 = BigInt::zero();
    for r in w + 1..=k {
        t2 += binomial(k - w - 1, r - w - 1) * ctx.q_binomial(k - r, z - r) * sign(r - w);
    }
    let mut t3 = BigInt::zero();
    for r in w..k {
        t3 += binomial(k - 1 - w, r - w) * ctx.q_binomial(k - r - 1, z - r - 1) * sign(r - w);
    }
    binomial(k - 1, w - 1) * t1 + binomial(k - 1, w) * (t2 + t3)
}

/// Möbius-weighted count of the subspaces above a `z`-space `U` (with
/// `e_i ∉ U`): `v¹` over all of them, `v²` over those also containing `e_i`.
pub fn v1(ctx: &QBinomialContext, k: usize, z: usize) -> BigInt {
    let (k, z) = (k as i64, z as i64);
    (z..=k).map(|h| ctx.mobius(h - z) * ctx.q_binomial(k - z, h - z)).sum()
}

pub fn v2(ctx: &QBinomialContext, k: usize, z: usize) -> BigInt {
    let (k, z) = (k as i64, z as i64);
    (z + 1..=k)
        .map(|h| ctx.mobius(h - z) * ctx.q_binomial(k - z - 1, h - z - 1))
        .sum()
}

/// `T_max` of `Gˣ` for the systematic q-ary simplex generator of dimension `k`.
pub fn ext_simplex_tmax(ctx: &QBinomialContext, k: usize, x: usize) -> Result<BigRational> {
    if k < 2 || x == 0 {
        return Err(Error::InvalidParameter(format!(
            "need k >= 2 and x >= 1, got k={k}, x={x}"
        )));
    }
    let n = ctx.points(k as i64);
    let big_n = x as i64 * k as i64 + n - k as i64;
    // Σ_s c·C(M,s)/C(N−1,s) = Σ_s c·M^(s)·(N−1−s)! / (N−1)!, with M^(s) falling
    let mut fact = vec![BigInt::one(); big_n as usize];
    for i in 1..big_n as usize {
        fact[i] = &fact[i - 1] * BigInt::from(i);
    }
    let mut num = BigInt::zero();
    for z in 0..=k {
        let (a1, a2) = (v1(ctx, k, z), v2(ctx, k, z));
        for w in 0..=k {
            let c = eta(ctx, k, z, w) * &a2 + eta_i(ctx, k, z, w) * (&a1 - &a2);
            if c.is_zero() {
                continue;
            }
            let m = ctx.points(z as i64) + (x as i64 - 1) * w as i64;
            let mut falling = BigInt::one();
            let mut sum = BigInt::zero();
            for s in 1..big_n {
                falling *= BigInt::from(m - s + 1);
                if falling.is_zero() {
                    break;
                }
                sum += &falling * &fact[(big_n - 1 - s) as usize];
            }
            num += c * sum;
        }
    }
    let nn = BigRational::from_integer(BigInt::from(big_n));
    Ok(nn * harmonic(big_n as usize) - ratio(num, fact[big_n as usize - 1].clone()))
}

// ---------------------------------------------------------------------------
// averages over generator matrices

/// Number of `ℓ × t` matrices of rank `ℓ`, by Möbius inversion:
/// `φ(ℓ,t) = Σ_d [ℓ d]_q (−1)^{ℓ−d} q^{C(ℓ−d,2)} q^{dt}`.
pub fn phi(ctx: &QBinomialContext, ell: usize, t: usize) -> BigInt {
    let (ell, t) = (ell as i64, t as i64);
    (0..=ell)
        .map(|d| ctx.q_binomial(ell, d) * ctx.mobius(ell - d) * ctx.qpow(d * t))
        .sum()
}

fn check_kn(k: usize, n: usize) -> Result<()> {
    if k < 1 || k > n {
        return Err(Error::InvalidParameter(format!("need 1 <= k <= n, got k={k}, n={n}")));
    }
    Ok(())
}

/// Mean of `E[τ_1(G)]` over all rank-`k` matrices `G ∈ GF(q)^{k×n}`.
pub fn avg_general(ctx: &QBinomialContext, k: usize, n: usize) -> Result<BigRational> {
    check_kn(k, n)?;
    let q = BigInt::from(ctx.q);
    let den: BigInt = (0..k).map(|j| q.pow(n as u32) - q.pow(j as u32)).product();
    let (ki, ni) = (k as i64, n as i64);
    let mut acc = BigRational::zero();
    for s in 0..ni {
        let mut inner = BigInt::zero();
        for u in 0..=s {
            let a = (ctx.q_binomial(ki, u) - ctx.q_binomial(ki - 1, u - 1)) * phi(ctx, u as usize, s as usize);
            if a.is_zero() {
                continue;
            }
            let mut b = BigInt::zero();
            for l in u..=ki {
                let lw = ctx.q_binomial(ki - u, l - u) * ctx.mobius(ki - l);
                for v in (ki - u).max(0)..=l {
                    b += &lw * ctx.q_binomial(l, v) * phi(ctx, v as usize, (ni - s) as usize);
                }
            }
            inner += a * b;
        }
        acc += ratio(binomial(ni, s) * inner, &den * binomial(ni - 1, s));
    }
    Ok(acc)
}

/// Mean of `E[τ_1(G)]` over all systematic `G = (I_k | R)`.
pub fn avg_systematic(ctx: &QBinomialContext, k: usize, n: usize) -> Result<BigRational> {
    check_kn(k, n)?;
    let (ki, ni) = (k as i64, n as i64);
    let total = ctx.qpow(ki * (ni - ki));
    let mut acc = BigRational::zero();
    for s in 0..ni {
        let mut inner = BigInt::zero();
        for a in 0..ki {
            let e = ni - ki - s + a;
            if e < 0 {
                continue;
            }
            let w0 = binomial(ki - 1, a) * binomial(ni - ki, s - a) * ctx.qpow(ki * e);
            if w0.is_zero() {
                continue;
            }
            let mut part = BigInt::zero();
            for u in 0..ki {
                let ph = if s - a >= 0 {
                    phi(ctx, u as usize, (s - a) as usize)
                } else {
                    BigInt::zero()
                };
                if ph.is_zero() {
                    continue;
                }
                for v in 0..ki {
                    let c = ctx.q_binomial(ki - a, v - a) - ctx.q_binomial(ki - a - 1, v - a - 1);
                    if c.is_zero() {
                        continue;
                    }
                    let m: BigInt = (a..=v)
                        .map(|w| ctx.q_binomial(v - a, w - a) * ctx.mobius(v - w) * ctx.q_binomial(w, u))
                        .sum();
                    part += c * m * &ph;
                }
            }
            inner += w0 * part;
        }
        acc += ratio(inner, &total * binomial(ni - 1, s));
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes;
    use crate::exact::{
        alpha_counts, beta_counts, expectation_from_alpha, expectation_from_beta, minimal_recovery_sets, t_max, Engine,
        Options, Target,
    };

    fn rat(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn q_binomials() {
        let c = QBinomialContext::new(2, 8);
        assert_eq!(c.q_binomial(4, 2), 35.into());
        for a in 0..12 {
            assert_eq!(c.q_binomial(a, a), 1.into());
            assert_eq!(c.q_binomial(a, 0), 1.into());
        }
        assert_eq!(
            c.q_binomial(3, 2) - c.q_binomial(2, 1),
            BigInt::from(4) * c.q_binomial(2, 2)
        );
        assert_eq!(c.q_binomial(2, 3), 0.into());
        // beyond the table
        let small = QBinomialContext::new(3, 2);
        assert_eq!(small.q_binomial(6, 3), QBinomialContext::new(3, 6).q_binomial(6, 3));
    }

    #[test]
    fn mds_closed_form() {
        let g = codes::mds_rs(7, 3, 6).unwrap();
        let p = alpha_counts(&g, &Target::Column(0), &Options::default()).unwrap();
        let f: Vec<BigInt> = (0..=6).map(|s| mds_alpha(3, 6, s)).collect();
        assert_eq!(p.counts.iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>(), f);
        assert_eq!(mds_alpha(3, 6, 6), 1.into());
    }

    #[test]
    fn hamming_closed_form() {
        for (q, r) in [(2u64, 3usize), (3, 2), (2, 2)] {
            let ctx = QBinomialContext::new(q, 8);
            let g = codes::hamming(q, r).unwrap();
            let n = g.n();
            let fam = beta_counts(
                minimal_recovery_sets(&g, &Target::Basis(0), &Options::default()).unwrap(),
                &Options::default(),
            )
            .unwrap();
            let b = fam.beta.as_ref().unwrap();
            let smax = q.pow(r as u32 - 1) as usize + 1;
            for s in 1..=smax {
                for j in 1..=n {
                    assert_eq!(
                        hamming_beta(&ctx, r, 0, s, j).unwrap(),
                        BigInt::from(b.get(s, j)),
                        "q={q} r={r} s={s} j={j}"
                    );
                }
            }
            assert_eq!(
                expectation_from_beta(n, b),
                BigRational::from_integer(BigInt::from(g.k()))
            );
        }
        let ctx = QBinomialContext::new(2, 8);
        assert!(hamming_beta(&ctx, 3, 0, 0, 1).is_err());
        assert!(hamming_beta(&ctx, 3, 0, 1, 8).is_err());
    }

    #[test]
    fn simplex_closed_form() {
        for (q, k) in [(2u64, 3usize), (3, 2), (2, 4)] {
            let ctx = QBinomialContext::new(q, 8);
            let g = codes::simplex(q, k).unwrap();
            let f: Vec<BigInt> = (0..=g.n()).map(|s| simplex_alpha(&ctx, k, s)).collect();
            for i in [0, g.n() - 1] {
                let p = alpha_counts(&g, &Target::Column(i), &Options::default()).unwrap();
                assert_eq!(p.counts.iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>(), f);
            }
            assert_eq!(f[1], 1.into());
            assert_eq!(
                expectation_from_alpha(g.n(), &f),
                BigRational::from_integer(BigInt::from(k))
            );
        }
    }

    #[test]
    fn extended_mds() {
        assert_eq!(ext_mds_tmax(2, 3, 2).unwrap(), rat(23, 12));
        assert_eq!(ext_mds_tmax(3, 5, 1).unwrap(), rat(3, 1));
        assert_eq!(ext_mds_tmax(4, 5, 3).unwrap(), rat(134, 35));
        let g = codes::mds_rs(7, 3, 5).unwrap().append_identities(3).unwrap();
        let dp = t_max(&g, Engine::Dp, &Options::default()).unwrap();
        assert_eq!(ext_mds_tmax(3, 5, 3).unwrap(), dp.t_max);
        assert_eq!(dp.t_max, rat(1769, 630));
    }

    #[test]
    fn extended_simplex() {
        let c2 = QBinomialContext::new(2, 8);
        assert_eq!(ext_simplex_tmax(&c2, 3, 1).unwrap(), rat(3, 1));
        let g = codes::simplex(2, 3).unwrap().append_identities(2).unwrap();
        assert_eq!(
            ext_simplex_tmax(&c2, 3, 2).unwrap(),
            t_max(&g, Engine::Alpha, &Options::default()).unwrap().t_max
        );
        assert_eq!(ext_simplex_tmax(&c2, 4, 2).unwrap() / rat(4, 1), rat(708649, 753984));
        assert_eq!(ext_simplex_tmax(&c2, 4, 3).unwrap() / rat(4, 1), rat(3083, 3360));
        let c3 = QBinomialContext::new(3, 8);
        assert_eq!(ext_simplex_tmax(&c3, 4, 10).unwrap() / rat(4, 1), rat(61991, 69300));
    }

    #[test]
    fn eta_totals() {
        for q in [2, 3] {
            let ctx = QBinomialContext::new(q, 8);
            for k in 1..=5usize {
                for z in 0..=k {
                    let total: BigInt = (0..=k).map(|w| eta(&ctx, k, z, w)).sum();
                    assert_eq!(total, ctx.q_binomial(k as i64, z as i64));
                }
            }
        }
    }

    #[test]
    fn phi_values() {
        let ctx = QBinomialContext::new(3, 6);
        for t in 0..6 {
            assert_eq!(phi(&ctx, 1, t), BigInt::from(3u64.pow(t as u32) - 1));
        }
        // 2x2 invertible matrices over GF(3)
        assert_eq!(phi(&ctx, 2, 2), 48.into());
        assert_eq!(phi(&ctx, 3, 2), 0.into());
    }

    #[test]
    fn averages() {
        let c2 = QBinomialContext::new(2, 8);
        assert_eq!(avg_general(&c2, 2, 3).unwrap(), rat(41, 14));
        assert_eq!(avg_systematic(&c2, 2, 3).unwrap(), rat(19, 8));
        assert_eq!(avg_general(&c2, 2, 4).unwrap(), rat(205, 63));
        assert_eq!(avg_systematic(&c2, 2, 4).unwrap(), rat(41, 16));
        assert_eq!(avg_general(&c2, 3, 4).unwrap(), rat(1411, 315));
        assert_eq!(avg_systematic(&c2, 3, 4).unwrap(), rat(79, 24));
        let c3 = QBinomialContext::new(3, 8);
        assert_eq!(avg_general(&c3, 2, 3).unwrap(), rat(37, 13));
        assert_eq!(avg_systematic(&c3, 2, 3).unwrap(), rat(20, 9));
    }
}

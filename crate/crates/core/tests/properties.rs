use covdepth::closedform::{eta, QBinomialContext};
use covdepth::exact::{
    alpha_counts, expectation, is_recovery_balanced, t_max, tilde_expectations, Engine, Options, Target,
};
use covdepth::exec::Exec;
use covdepth::format::{parse_matrix, print_matrix, RationalJson};
use covdepth::montecarlo::{simulate, SimConfig};
use covdepth::search::{iteration_rng, paut_transitive, random_generator, Transitivity};
use covdepth::{ColumnSet, FieldElem, FieldSpec, GenMatrix};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::Rng;

fn matrix(q: u64, k: usize, n: usize, seed: u64, systematic: bool) -> GenMatrix {
    let f = FieldSpec::new(q).unwrap();
    random_generator(&f, k, n, systematic, &mut iteration_rng(seed, 0))
}

fn small_code() -> impl Strategy<Value = GenMatrix> {
    (
        prop::sample::select(vec![2u64, 3, 4, 5]),
        1usize..=3,
        0usize..=5,
        any::<u64>(),
    )
        .prop_map(|(q, k, extra, seed)| matrix(q, k, k + extra, seed, false))
}

fn int(v: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_inverses_and_orders(q in prop::sample::select(vec![2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27, 49, 64, 81, 125, 243, 256, 343, 1024, 65536]), raw in any::<u32>()) {
        let f = FieldSpec::new(q).unwrap();
        let a = FieldElem((u64::from(raw) % (q - 1) + 1) as u16);
        let inv = f.inv(a).unwrap();
        prop_assert_eq!(f.inv(inv).unwrap(), a);
        prop_assert_eq!(f.mul(a, inv), FieldElem::ONE);
        prop_assert_eq!(f.pow(a, q - 1), FieldElem::ONE);
    }

    #[test]
    fn span_is_monotone(g in small_code(), a in any::<u64>(), b in any::<u64>(), i in 0usize..3) {
        let n = g.n();
        let small = ColumnSet::from_mask(a & ((1 << n) - 1));
        let large = ColumnSet::from_mask((a | b) & ((1 << n) - 1));
        let v = g.unit(i % g.k());
        if g.span_contains(&small, &v).unwrap() {
            prop_assert!(g.span_contains(&large, &v).unwrap());
        }
    }

    #[test]
    fn dual_of_dual(g in small_code()) {
        let d = g.dual_generator();
        prop_assert_eq!(d.k(), g.n() - g.k());
        prop_assert!(g.annihilates(&d).unwrap());
        prop_assert!(d.dual_generator().same_row_space(&g).unwrap());
    }

    #[test]
    fn identity_blocks(q in prop::sample::select(vec![2u64, 3, 4]), k in 1usize..4, extra in 0usize..4, x in 1usize..4, seed in any::<u64>()) {
        let g = matrix(q, k, k + extra, seed, true);
        let gx = g.append_identities(x).unwrap();
        prop_assert_eq!(gx.n(), x * k + extra);
        prop_assert_eq!(gx.rank(), k);
        let mut got: Vec<Vec<FieldElem>> = gx.columns().map(<[_]>::to_vec).collect();
        let mut want: Vec<Vec<FieldElem>> = Vec::new();
        for _ in 0..x {
            want.extend((0..k).map(|i| g.unit(i)));
        }
        want.extend((k..g.n()).map(|j| g.column(j).to_vec()));
        got.sort();
        want.sort();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn matrix_file_round_trip(g in small_code()) {
        prop_assert_eq!(parse_matrix(&print_matrix(&g)).unwrap(), g);
    }

    #[test]
    fn rational_strings_round_trip(a in -10_000i64..10_000, b in 1i64..10_000) {
        let r = BigRational::new(a.into(), b.into());
        prop_assert_eq!(RationalJson::from(&r).parse().unwrap(), r);
    }

    #[test]
    fn q_pascal(q in prop::sample::select(vec![2u64, 3, 4, 5, 7]), a in 1i64..12, b in 1i64..12) {
        prop_assume!(b <= a);
        let c = QBinomialContext::new(q, 6);
        let lhs = c.q_binomial(a, b) - c.q_binomial(a - 1, b - 1);
        prop_assert_eq!(lhs, BigInt::from(q).pow(b as u32) * c.q_binomial(a - 1, b));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn engines_agree(g in small_code(), i in 0usize..3) {
        let opts = Options::default();
        let t = Target::Basis(i % g.k());
        let a = expectation(&g, &t, Engine::Alpha, &opts).unwrap();
        prop_assert_eq!(&a, &expectation(&g, &t, Engine::Beta, &opts).unwrap());
        prop_assert_eq!(&a, &expectation(&g, &t, Engine::Dp, &opts).unwrap());
        prop_assert!(a >= int(1));
    }

    #[test]
    fn conservation(g in small_code()) {
        let r = tilde_expectations(&g, &Options::default()).unwrap();
        prop_assert_eq!(r.sum(), int(g.k() * g.n()));
    }

    #[test]
    fn row_operations_keep_tilde_values(g in small_code(), seed in any::<u64>()) {
        // left-multiply by a random invertible matrix
        let f = g.field().clone();
        let k = g.k();
        let a = random_generator(&f, k, k, false, &mut iteration_rng(seed, 1));
        let mut data = vec![FieldElem::ZERO; k * g.n()];
        for r in 0..k {
            for c in 0..g.n() {
                data[r * g.n() + c] = (0..k).fold(FieldElem::ZERO, |acc, t| f.add(acc, f.mul(a.entry(r, t), g.entry(t, c))));
            }
        }
        let h = GenMatrix::new(f, k, g.n(), data).unwrap();
        let opts = Options::default();
        prop_assert_eq!(tilde_expectations(&g, &opts).unwrap().values(), tilde_expectations(&h, &opts).unwrap().values());
    }

    #[test]
    fn set_targets_generalise_basis_targets(g in small_code(), i in 0usize..3) {
        let opts = Options::default();
        let i = i % g.k();
        prop_assert_eq!(
            alpha_counts(&g, &Target::Set(vec![i]), &opts).unwrap().counts,
            alpha_counts(&g, &Target::Basis(i), &opts).unwrap().counts
        );
        let all = Target::Set((0..g.k()).collect());
        prop_assert_eq!(expectation(&g, &all, Engine::Alpha, &opts).unwrap(), expectation(&g, &all, Engine::Dp, &opts).unwrap());
    }

    #[test]
    fn sequential_and_parallel_counts_match(q in prop::sample::select(vec![2u64, 3]), k in 2usize..4, extra in 6usize..10, seed in any::<u64>()) {
        let g = matrix(q, k, k + extra, seed, false);
        let t = Target::Basis(0);
        prop_assert_eq!(
            alpha_counts(&g, &t, &Options::sequential()).unwrap(),
            alpha_counts(&g, &t, &Options::default()).unwrap()
        );
    }

    #[test]
    fn balanced_systematic_codes_have_tmax_k(q in prop::sample::select(vec![2u64, 3]), k in 2usize..4, extra in 1usize..4, seed in any::<u64>()) {
        let g = matrix(q, k, k + extra, seed, true);
        let opts = Options::default();
        if is_recovery_balanced(&g, &opts).unwrap().balanced {
            let r = t_max(&g, Engine::Alpha, &opts).unwrap();
            prop_assert!(r.values().iter().all(|v| *v == int(k)));
        }
    }

    #[test]
    fn transitive_codes_are_balanced(g in small_code()) {
        if paut_transitive(&g, 8).status == Transitivity::Transitive {
            prop_assert!(is_recovery_balanced(&g, &Options::default()).unwrap().balanced);
        }
    }
}

#[test]
fn eta_sums_to_subspace_count() {
    for q in [2, 3] {
        let ctx = QBinomialContext::new(q, 6);
        for k in 1..=5usize {
            for z in 0..=k {
                let total: BigInt = (0..=k).map(|w| eta(&ctx, k, z, w)).sum();
                assert_eq!(total, ctx.q_binomial(k as i64, z as i64), "q={q} k={k} z={z}");
            }
        }
    }
}

#[test]
fn simulation_is_reproducible() {
    let mut rng = iteration_rng(99, 0);
    for _ in 0..5 {
        let seed: u64 = rng.random();
        let g = matrix(3, 2, 5, seed, false);
        let cfg = SimConfig::new(5_000, seed).with_streams(5);
        let a = simulate(&g, &Target::Basis(1), &cfg, Exec::Parallel).unwrap();
        let b = simulate(&g, &Target::Basis(1), &cfg, Exec::Sequential).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}

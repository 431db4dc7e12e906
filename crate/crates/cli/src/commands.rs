use std::fmt::Write as _;
use std::time::Instant;

use covdepth::closedform::{
    avg_general, avg_systematic, ext_mds_tmax, ext_simplex_tmax, hamming_beta, mds_alpha, simplex_alpha,
    QBinomialContext,
};
use covdepth::codes::{param, parse_params, CodeFamily};
use covdepth::exact::{
    expectation, expectation_from_alpha, expectation_from_beta, is_recovery_balanced, to_decimal, BetaTable, Guards,
    TargetValue,
};
use covdepth::format::{parse_matrix, MatrixJson, RationalJson, ReportJson, DECIMAL_DIGITS};
use covdepth::montecarlo::{simulate, SimConfig};
use covdepth::search::{
    bounds, duality_balance_report, paut_transitive, product_balance_check, random_duality_probe, random_search,
    sweep_x, SweepEngine, SweepValue, Transitivity,
};
use covdepth::{BigInt, BigRational, Engine, ExpectationReport, GenMatrix, Options, Target};
use serde_json::{json, Value};

use crate::{CliError, ClosedFamily, Command, EngineArg, Format, Global, Source, SweepEngineArg, TargetArgs};

/// A command result in both renderings.
pub struct Output {
    json: Value,
    csv: String,
    default: Format,
}

impl Output {
    fn json_default(json: Value, csv: String) -> Self {
        Output {
            json,
            csv,
            default: Format::Json,
        }
    }

    fn csv_default(json: Value, csv: String) -> Self {
        Output {
            json,
            csv,
            default: Format::Csv,
        }
    }
}

pub fn write(global: &Global, out: &Output) -> Result<(), CliError> {
    let text = match global.format.unwrap_or(out.default) {
        Format::Json => format!(
            "{}\n",
            serde_json::to_string_pretty(&out.json).expect("json values serialise")
        ),
        Format::Csv => out.csv.clone(),
    };
    match &global.output {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn options(global: &Global) -> Options {
    let mut guards = if global.force {
        Guards::unlimited()
    } else {
        Guards::default()
    };
    if let Some(bits) = global.max_enum_bits {
        guards.max_enum_bits = bits;
    }
    Options {
        guards,
        ..Options::default()
    }
}

fn load(source: &Source) -> Result<GenMatrix, CliError> {
    match (&source.matrix, &source.family) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
            Ok(parse_matrix(&text)?)
        }
        (None, Some(spec)) => Ok(spec.parse::<CodeFamily>()?.build()?),
        (None, None) => Err(CliError::Usage("one of --matrix or --family is required".into())),
    }
}

fn one_based(i: usize, what: &str) -> Result<usize, CliError> {
    i.checked_sub(1)
        .ok_or_else(|| CliError::Usage(format!("{what} indices start at 1")))
}

fn targets(args: &TargetArgs, g: &GenMatrix) -> Result<Vec<Target>, CliError> {
    if let Some(i) = args.target {
        return Ok(vec![Target::Basis(one_based(i, "--target")?)]);
    }
    if let Some(i) = args.column {
        return Ok(vec![Target::Column(one_based(i, "--column")?)]);
    }
    if let Some(set) = &args.set {
        let idx = set
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| {
                let v = s
                    .parse::<usize>()
                    .map_err(|_| CliError::Usage(format!("`{s}` is not an index")))?;
                one_based(v, "--set")
            })
            .collect::<Result<Vec<_>, _>>()?;
        if idx.is_empty() {
            return Err(CliError::Usage("--set needs at least one index".into()));
        }
        return Ok(vec![Target::Set(idx)]);
    }
    Ok((0..g.k()).map(Target::Basis).collect())
}

fn rational(r: &BigRational) -> Value {
    serde_json::to_value(RationalJson::from(r)).expect("rationals serialise")
}

fn int(v: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

pub fn run(global: &Global, command: Command) -> Result<Output, CliError> {
    let opts = options(global);
    let start = Instant::now();
    let mut out = match command {
        Command::Exact { source, target, engine } => exact(&source, &target, engine, &opts)?,
        Command::Simulate {
            source,
            target,
            trials,
            seed,
            streams,
            draw_cap,
        } => {
            let mut cfg = SimConfig::new(trials, seed).with_streams(streams);
            cfg.draw_cap = draw_cap;
            simulate_cmd(&source, &target, &cfg, &opts)?
        }
        Command::ClosedForm {
            family,
            params,
            x_min,
            x_max,
        } => closed_form(family, &params, x_min, x_max)?,
        Command::Sweep {
            source,
            x_min,
            x_max,
            engine,
            trials,
            seed,
        } => sweep(&source, x_min, x_max, engine, &SimConfig::new(trials, seed), &opts)?,
        Command::Balance { source, product, paut } => balance(&source, product.as_deref(), paut, &opts)?,
        Command::Bounds { q, n, k } => bounds_cmd(q, n, k)?,
        Command::Search {
            q,
            k,
            n,
            iters,
            seed,
            systematic,
        } => search(q, k, n, iters, seed, systematic, &opts)?,
        Command::Duality {
            family,
            matrix,
            random,
            q,
            n_max,
            seed,
        } => duality(&family, &matrix, random, q, n_max, seed, &opts)?,
    };
    if !global.no_timing {
        if let Value::Object(map) = &mut out.json {
            map.insert("timing_secs".into(), json!(start.elapsed().as_secs_f64()));
        }
    }
    Ok(out)
}

fn exact(source: &Source, target: &TargetArgs, engine: EngineArg, opts: &Options) -> Result<Output, CliError> {
    let g = load(source)?;
    let engine = match engine {
        EngineArg::Alpha => Engine::Alpha,
        EngineArg::Beta => Engine::Beta,
        EngineArg::Dp => Engine::Dp,
    };
    let per_target = targets(target, &g)?
        .into_iter()
        .map(|t| {
            let zero_target = t.vectors(&g)?.is_empty();
            let value = expectation(&g, &t, engine, opts)?;
            Ok(TargetValue {
                target: t,
                value,
                zero_target,
            })
        })
        .collect::<covdepth::Result<Vec<_>>>()?;
    let report = ExpectationReport::from_values(engine.into(), per_target);
    let json = serde_json::to_value(ReportJson::new(&g, &report, None)).expect("reports serialise");
    Ok(Output::json_default(json, covdepth::format::report_csv(&report)))
}

fn simulate_cmd(source: &Source, target: &TargetArgs, cfg: &SimConfig, opts: &Options) -> Result<Output, CliError> {
    let g = load(source)?;
    let mut rows = Vec::new();
    let mut csv = String::from("target,mean,std_dev,std_err\n");
    let mut best: Option<(f64, String)> = None;
    for t in targets(target, &g)? {
        let r = simulate(&g, &t, cfg, opts.exec)?;
        let label = t.to_string();
        let _ = writeln!(csv, "\"{label}\",{},{},{}", r.mean, r.std_dev, r.std_err);
        if best.as_ref().is_none_or(|(m, _)| r.mean > *m) {
            best = Some((r.mean, label.clone()));
        }
        rows.push(json!({
            "target": label,
            "mean": r.mean,
            "std_dev": r.std_dev,
            "std_err": r.std_err,
            "stream_means": r.streams.iter().map(|s| s.mean).collect::<Vec<_>>(),
        }));
    }
    let (max_mean, argmax) = best.expect("at least one target");
    let json = json!({
        "matrix": MatrixJson::from(&g),
        "engine": "monte-carlo",
        "trials": cfg.trials,
        "seed": cfg.seed,
        "streams": cfg.streams,
        "per_target": rows,
        "t_max": max_mean,
        "argmax": [argmax],
    });
    Ok(Output::json_default(json, csv))
}

fn closed_form(family: ClosedFamily, params: &str, x_min: usize, x_max: Option<usize>) -> Result<Output, CliError> {
    let p = parse_params(params)?;
    let get = |key: &str, default: Option<u64>| param(&p, key, default).map(|v| v as usize);
    let q = param(&p, "q", Some(2))?;
    covdepth::FieldSpec::new(q)?;
    match family {
        ClosedFamily::ExtMds | ClosedFamily::ExtSimplex => {
            let x_max = x_max.unwrap_or(x_min);
            if x_min == 0 || x_max < x_min {
                return Err(CliError::Usage("need 1 <= --x-min <= --x-max".into()));
            }
            let k = get("k", None)?;
            let (n, ctx) = match family {
                ClosedFamily::ExtMds => (get("n", None)?, None),
                _ => {
                    let ctx = QBinomialContext::new(q, k + 1);
                    (ctx.points(k as i64) as usize, Some(ctx))
                }
            };
            let mut csv = String::from("x,n_cols,num,den,t_max,normalized\n");
            let mut rows = Vec::new();
            for x in x_min..=x_max {
                let t = match &ctx {
                    None => ext_mds_tmax(k, n, x)?,
                    Some(ctx) => ext_simplex_tmax(ctx, k, x)?,
                };
                let norm = &t / int(k);
                let n_cols = x * k + n - k;
                let _ = writeln!(
                    csv,
                    "{x},{n_cols},{},{},{},{}",
                    t.numer(),
                    t.denom(),
                    to_decimal(&t, DECIMAL_DIGITS),
                    to_decimal(&norm, DECIMAL_DIGITS)
                );
                rows.push(json!({"x": x, "n_cols": n_cols, "t_max": rational(&t), "normalized": rational(&norm)}));
            }
            let name = if ctx.is_some() { "ext-simplex" } else { "ext-mds" };
            let json = json!({"family": name, "q": q, "k": k, "n": n, "rows": rows});
            Ok(Output::csv_default(json, csv))
        }
        ClosedFamily::Mds | ClosedFamily::Simplex => {
            let k = get("k", None)?;
            let (name, n, counts): (&str, usize, Vec<BigInt>) = if let ClosedFamily::Mds = family {
                let n = get("n", None)?;
                if k == 0 || k > n {
                    return Err(CliError::Usage(format!("need 1 <= k <= n, got k={k}, n={n}")));
                }
                ("mds", n, (0..=n).map(|s| mds_alpha(k, n, s)).collect())
            } else {
                let ctx = QBinomialContext::new(q, k + 1);
                let n = ctx.points(k as i64) as usize;
                ("simplex", n, (0..=n).map(|s| simplex_alpha(&ctx, k, s)).collect())
            };
            let e = expectation_from_alpha(n, &counts);
            let mut csv = String::from("s,count\n");
            for (s, c) in counts.iter().enumerate() {
                let _ = writeln!(csv, "{s},{c}");
            }
            let json = json!({
                "family": name,
                "q": q,
                "k": k,
                "n": n,
                "target": "column",
                "counts": counts.iter().map(ToString::to_string).collect::<Vec<_>>(),
                "expectation": rational(&e),
            });
            Ok(Output::csv_default(json, csv))
        }
        ClosedFamily::Hamming => {
            let r = get("r", None)?;
            if r < 2 {
                return Err(CliError::Usage("hamming needs r >= 2".into()));
            }
            let i = one_based(get("i", Some(1))?, "i")?;
            let ctx = QBinomialContext::new(q, r + 1);
            let n = ctx.points(r as i64) as usize;
            let smax = (q as usize).pow(r as u32 - 1) + 1;
            let mut rows = vec![vec![0u128; n + 1]; smax + 1];
            let mut csv = String::from("s,j,beta\n");
            let mut entries = Vec::new();
            for (s, row) in rows.iter_mut().enumerate().skip(1) {
                for (j, slot) in row.iter_mut().enumerate().skip(1) {
                    let b = hamming_beta(&ctx, r, i, s, j)?;
                    if b != BigInt::from(0) {
                        let _ = writeln!(csv, "{s},{j},{b}");
                        entries.push(json!({"s": s, "j": j, "beta": b.to_string()}));
                        *slot = u128::try_from(&b)
                            .map_err(|_| CliError::Usage(format!("beta({s},{j}) does not fit in 128 bits")))?;
                    }
                }
            }
            let e = expectation_from_beta(n, &BetaTable { rows });
            let json = json!({
                "family": "hamming",
                "q": q,
                "r": r,
                "n": n,
                "target": format!("e{}", i + 1),
                "beta": entries,
                "expectation": rational(&e),
            });
            Ok(Output::csv_default(json, csv))
        }
        ClosedFamily::AvgGeneral | ClosedFamily::AvgSystematic => {
            let (k, n) = (get("k", None)?, get("n", None)?);
            let ctx = QBinomialContext::new(q, n + 1);
            let (name, v) = match family {
                ClosedFamily::AvgGeneral => ("avg-general", avg_general(&ctx, k, n)?),
                _ => ("avg-systematic", avg_systematic(&ctx, k, n)?),
            };
            let csv = format!(
                "q,k,n,num,den,decimal\n{q},{k},{n},{},{},{}\n",
                v.numer(),
                v.denom(),
                to_decimal(&v, DECIMAL_DIGITS)
            );
            let json = json!({"family": name, "q": q, "k": k, "n": n, "value": rational(&v)});
            Ok(Output::csv_default(json, csv))
        }
    }
}

fn sweep(
    source: &Source,
    x_min: usize,
    x_max: usize,
    engine: SweepEngineArg,
    sim: &SimConfig,
    opts: &Options,
) -> Result<Output, CliError> {
    let g = load(source)?;
    let engine = match engine {
        SweepEngineArg::Alpha => SweepEngine::Exact(Engine::Alpha),
        SweepEngineArg::Beta => SweepEngine::Exact(Engine::Beta),
        SweepEngineArg::Dp => SweepEngine::Exact(Engine::Dp),
        SweepEngineArg::ExtMds => SweepEngine::ExtMds,
        SweepEngineArg::ExtSimplex => SweepEngine::ExtSimplex,
        SweepEngineArg::MonteCarlo => SweepEngine::MonteCarlo(*sim),
    };
    let s = sweep_x(&g, x_min..=x_max, &engine, opts)?;
    let mut csv = String::from("x,n_cols,num,den,t_max,normalized,std_err,engine\n");
    let mut rows = Vec::new();
    for r in &s.rows {
        match (&r.t_max, &r.normalized) {
            (SweepValue::Exact(t), SweepValue::Exact(norm)) => {
                let _ = writeln!(
                    csv,
                    "{},{},{},{},{},{},,{}",
                    r.x,
                    r.n_cols,
                    t.numer(),
                    t.denom(),
                    to_decimal(t, DECIMAL_DIGITS),
                    to_decimal(norm, DECIMAL_DIGITS),
                    r.engine
                );
                rows.push(json!({"x": r.x, "n_cols": r.n_cols, "t_max": rational(t), "normalized": rational(norm), "engine": r.engine}));
            }
            (t, norm) => {
                let std_err = match t {
                    SweepValue::Estimate { std_err, .. } => *std_err,
                    SweepValue::Exact(_) => 0.0,
                };
                let _ = writeln!(
                    csv,
                    "{},{},,,{},{},{},{}",
                    r.x,
                    r.n_cols,
                    t.as_f64(),
                    norm.as_f64(),
                    std_err,
                    r.engine
                );
                rows.push(json!({
                    "x": r.x,
                    "n_cols": r.n_cols,
                    "t_max": t.as_f64(),
                    "normalized": norm.as_f64(),
                    "std_err": std_err,
                    "engine": r.engine,
                }));
            }
        }
    }
    let json = json!({"matrix": MatrixJson::from(&g), "rows": rows, "argmin": s.argmin});
    Ok(Output::csv_default(json, csv))
}

fn balance(source: &Source, product: Option<&str>, paut: bool, opts: &Options) -> Result<Output, CliError> {
    let g = load(source)?;
    let b = is_recovery_balanced(&g, opts)?;
    let mut json = json!({
        "matrix": MatrixJson::from(&g),
        "balanced": b.balanced,
        "tilde": b.tilde.per_target.iter().map(|t| {
            let mut v = rational(&t.value);
            v["target"] = json!(t.target.to_string());
            v
        }).collect::<Vec<_>>(),
        "witness": b.witness.map(|(i, j)| [i + 1, j + 1]),
    });
    if let Some(spec) = product {
        let h = spec.parse::<CodeFamily>()?.build()?;
        let p = product_balance_check(&g, &h, opts)?;
        json["product"] = json!({
            "with": spec,
            "left_balanced": p.left_balanced,
            "right_balanced": p.right_balanced,
            "product_balanced": p.product_balanced,
            "value": p.value.as_ref().map(rational),
        });
    }
    if paut {
        let r = paut_transitive(&g, 8);
        let status = match r.status {
            Transitivity::Transitive => "transitive",
            Transitivity::NotTransitive => "not-transitive",
            Transitivity::Unknown => "unknown",
        };
        json["paut"] = json!({
            "status": status,
            "group_order": r.group_order,
            "orbits": r.orbits.map(|o| o.into_iter().map(|orb| orb.into_iter().map(|i| i + 1).collect::<Vec<_>>()).collect::<Vec<_>>()),
        });
    }
    Ok(Output::json_default(json, covdepth::format::report_csv(&b.tilde)))
}

fn bound_csv(rows: &[(&str, &BigRational)]) -> String {
    let mut csv = String::from("bound,num,den,decimal\n");
    for (name, r) in rows {
        let _ = writeln!(
            csv,
            "{name},{},{},{}",
            r.numer(),
            r.denom(),
            to_decimal(r, DECIMAL_DIGITS)
        );
    }
    csv
}

fn bounds_cmd(q: u64, n: usize, k: usize) -> Result<Output, CliError> {
    let b = bounds(q, n, k)?;
    let json = json!({"q": q, "n": n, "k": k, "bound1": rational(&b.bound1), "bound2": rational(&b.bound2)});
    Ok(Output::json_default(
        json,
        bound_csv(&[("bound1", &b.bound1), ("bound2", &b.bound2)]),
    ))
}

fn search(
    q: u64,
    k: usize,
    n: usize,
    iters: u64,
    seed: u64,
    systematic: bool,
    opts: &Options,
) -> Result<Output, CliError> {
    if iters == 0 {
        return Err(CliError::Usage("--iters must be positive".into()));
    }
    let r = random_search(q, k, n, iters, seed, systematic, opts)?;
    let best = r.best.clone().expect("at least one iteration");
    let json = json!({
        "q": q,
        "n": n,
        "k": k,
        "iters": iters,
        "seed": seed,
        "systematic": systematic,
        "bound1": rational(&r.bound1),
        "bound2": rational(&r.bound2),
        "best": rational(&best),
        "witness": r.witness.as_ref().map(MatrixJson::from),
    });
    let csv = bound_csv(&[("bound1", &r.bound1), ("bound2", &r.bound2), ("best", &best)]);
    Ok(Output::json_default(json, csv))
}

fn duality(
    families: &[String],
    matrices: &[std::path::PathBuf],
    random: u64,
    q: u64,
    n_max: usize,
    seed: u64,
    opts: &Options,
) -> Result<Output, CliError> {
    let mut codes = Vec::new();
    for spec in families {
        codes.push((spec.clone(), spec.parse::<CodeFamily>()?.build()?));
    }
    for path in matrices {
        let source = Source {
            matrix: Some(path.clone()),
            family: None,
        };
        codes.push((path.display().to_string(), load(&source)?));
    }
    if codes.is_empty() && random == 0 {
        return Err(CliError::Usage(
            "give at least one --family, --matrix or --random".into(),
        ));
    }
    let mut rows = duality_balance_report(&codes, opts)?;
    if random > 0 {
        rows.extend(random_duality_probe(q, n_max, random, seed, opts)?);
    }
    let mut csv = String::from("name,k,n,balanced,dual_balanced,counterexample_candidate\n");
    let mut out = Vec::new();
    for r in &rows {
        let flag = r.counterexample_candidate();
        if flag {
            eprintln!(
                "COUNTEREXAMPLE CANDIDATE: {} (balanced={}, dual balanced={})",
                r.name, r.balanced, r.dual_balanced
            );
        }
        let _ = writeln!(
            csv,
            "\"{}\",{},{},{},{},{flag}",
            r.name, r.k, r.n, r.balanced, r.dual_balanced
        );
        out.push(json!({
            "name": r.name,
            "k": r.k,
            "n": r.n,
            "balanced": r.balanced,
            "dual_balanced": r.dual_balanced,
            "counterexample_candidate": flag,
        }));
    }
    Ok(Output::json_default(json!({"codes": out}), csv))
}

//! Experiment execution: one entry point shared by the CLI subcommands and
//! the config-file runner. Each experiment kind maps onto module operations,
//! emits deterministic CSV, and contributes checks and measured constants to
//! the report.

use crate::accept::CONVOLUTION_CONSTANT;
use crate::config::{parse_f64_list, parse_i64_grid};
use crate::csvout::{fmt_f, Csv};
use crate::report::{CheckResult, ExperimentReport};
use latspec_core::cartan::{sl2_diag, xi_bounds, xi_p_montecarlo};
use latspec_core::counting::{
    count_bruteforce, count_divisor_fast, radius_profile, LengthKind, ProfileMethod,
};
use latspec_core::graphs::{
    build_cayley_sl2, build_lps, from_edge_list, random_regular, GeneratorFamily, Graph,
};
use latspec_core::lifting::{almost_diameter, coverage_curve, lifting_exponent};
use latspec_core::matgroups::{
    enumerate_quotient, Ambient, IntMatrix, SubgroupKind, SubgroupSpec, DEFAULT_COSET_CAP,
};
use latspec_core::spectral::{
    adjacency_spectrum, density_profile, nonbacktracking_from_adjacency, ramanujan_certificate,
};
use latspec_core::trees::{check_convolution_lemma, convolution_table};
use latspec_core::{Error, Result};
use std::collections::BTreeMap;
use std::time::Instant;

pub struct Ctx {
    pub seed: u64,
    pub quick: bool,
}

pub type Params = BTreeMap<String, String>;

fn get<'a>(params: &'a Params, key: &str) -> Option<&'a str> {
    params.get(key).map(|s| s.as_str())
}

fn get_or<'a>(params: &'a Params, key: &str, default: &'a str) -> &'a str {
    get(params, key).unwrap_or(default)
}

fn get_u32(params: &Params, key: &str, default: u32) -> Result<u32> {
    match get(params, key) {
        None => Ok(default),
        Some(s) => s
            .parse()
            .map_err(|_| Error::input(format!("{key}: expected an integer, got '{s}'"))),
    }
}

fn get_u64(params: &Params, key: &str, default: u64) -> Result<u64> {
    match get(params, key) {
        None => Ok(default),
        Some(s) => s
            .parse()
            .map_err(|_| Error::input(format!("{key}: expected an integer, got '{s}'"))),
    }
}

fn get_bool(params: &Params, key: &str) -> Result<bool> {
    match get(params, key) {
        None => Ok(false),
        Some("true") | Some("1") | Some("yes") | Some("") => Ok(true),
        Some("false") | Some("0") | Some("no") => Ok(false),
        Some(s) => Err(Error::input(format!(
            "{key}: expected a boolean, got '{s}'"
        ))),
    }
}

fn parse_spec(params: &Params) -> Result<SubgroupSpec> {
    let ambient = match get_or(params, "group", "sl2") {
        "sl2" => Ambient::Sl2,
        "sl3" => Ambient::Sl3,
        other => return Err(Error::input(format!("group: unknown '{other}'"))),
    };
    let kind = match get_or(params, "kind", "principal") {
        "principal" => SubgroupKind::Principal,
        "gamma0" => SubgroupKind::Gamma0,
        "gamma2" => SubgroupKind::Gamma2,
        other => return Err(Error::input(format!("kind: unknown '{other}'"))),
    };
    SubgroupSpec::new(ambient, kind, get_u32(params, "level", 1)?)
}

fn canonical_params(kind: &str, params: &Params) -> String {
    let mut s = format!("[{kind}]");
    for (k, v) in params {
        s.push_str(&format!("{k}={v};"));
    }
    s
}

/// Runs one experiment; returns the report and named CSV outputs.
pub fn exec_experiment(
    kind: &str,
    params: &Params,
    ctx: &Ctx,
) -> Result<(ExperimentReport, Vec<(String, String)>)> {
    let t0 = Instant::now();
    let mut report = ExperimentReport::new(kind, params.clone());
    let canon = canonical_params(kind, params);
    let mut outputs = Vec::new();
    match kind {
        "count" => exec_count(params, ctx, &canon, &mut report, &mut outputs)?,
        "quotient" => exec_quotient(params, ctx, &canon, &mut report, &mut outputs)?,
        "lift" => exec_lift(params, ctx, &canon, &mut report, &mut outputs)?,
        "diameter" => exec_diameter(params, ctx, &canon, &mut report, &mut outputs)?,
        "tree" => exec_tree(params, ctx, &canon, &mut report, &mut outputs)?,
        "spectra" => exec_spectra(params, ctx, &canon, &mut report, &mut outputs)?,
        "xi" => exec_xi(params, ctx, &canon, &mut report, &mut outputs)?,
        other => return Err(Error::input(format!("unknown experiment kind '{other}'"))),
    }
    report.wall_ms = t0.elapsed().as_millis();
    Ok((report, outputs))
}

fn exec_count(
    params: &Params,
    ctx: &Ctx,
    canon: &str,
    report: &mut ExperimentReport,
    outputs: &mut Vec<(String, String)>,
) -> Result<()> {
    let spec = parse_spec(params)?;
    let method = get_or(params, "method", "brute");
    let conjugator = match get(params, "conjugator") {
        None => None,
        Some(s) => {
            let entries: Vec<i64> = s
                .split(',')
                .map(|x| {
                    x.trim()
                        .parse()
                        .map_err(|_| Error::input(format!("conjugator: bad entry '{x}'")))
                })
                .collect::<Result<_>>()?;
            Some(IntMatrix::from_i64(spec.dimension(), &entries)?)
        }
    };

    if let Some(grid_str) = get(params, "length-bound") {
        let grid = parse_f64_list(grid_str)?;
        let mut csv = Csv::new("bound,count,reference,ratio");
        let run = |m: ProfileMethod| radius_profile(&spec, &grid, LengthKind::Cartan, m);
        let (profile, partner) = match method {
            "brute" | "direct" => (run(ProfileMethod::DirectConjugation)?, None),
            "fixed-point" => (run(ProfileMethod::FixedPointSum)?, None),
            "both" => (
                run(ProfileMethod::DirectConjugation)?,
                Some(run(ProfileMethod::FixedPointSum)?),
            ),
            other => {
                return Err(Error::input(format!(
                    "method: '{other}' not valid for length bounds"
                )))
            }
        };
        if let Some(other) = partner {
            let agree = profile
                .rows
                .iter()
                .zip(&other.rows)
                .all(|(a, b)| a.total == b.total);
            report.checks.push(CheckResult {
                name: "direct == fixed-point".into(),
                pass: agree,
                detail: if agree {
                    "both averaging routes agree exactly".into()
                } else {
                    "route totals differ".into()
                },
            });
        }
        for row in &profile.rows {
            csv.row(&[
                fmt_f(row.d0),
                fmt_f(row.average),
                fmt_f(row.reference),
                fmt_f(row.ratio),
            ]);
        }
        csv.meta("index", profile.index);
        csv.stamp(canon, ctx.seed);
        report.measured.insert("index".into(), profile.index as f64);
        outputs.push(("count.csv".into(), csv.render()));
        return Ok(());
    }

    let grid = parse_i64_grid(
        get(params, "norm-bound")
            .ok_or_else(|| Error::input("count: need norm-bound or length-bound"))?,
    )?;
    let mut csv = Csv::new("bound,count,reference,ratio");
    let level = spec.level as f64;
    let mut all_equal = true;
    for &t in &grid {
        let count = match method {
            "brute" | "both" => count_bruteforce(&spec, t, conjugator.as_ref())?.count,
            "fast" => count_divisor_fast(spec.level, t)?.count,
            other => return Err(Error::input(format!("method: unknown '{other}'"))),
        };
        if method == "both" {
            let fast = count_divisor_fast(spec.level, t)?.count;
            if fast != count {
                all_equal = false;
            }
        }
        let tf = t as f64;
        let reference = (tf * tf / level.powi(3) + tf / level).max(1.0);
        csv.row(&[
            t.to_string(),
            count.to_string(),
            fmt_f(reference),
            fmt_f(count as f64 / reference),
        ]);
        report.measured.insert(format!("count@{t}"), count as f64);
    }
    if method == "both" {
        report.checks.push(CheckResult {
            name: "fast == brute".into(),
            pass: all_equal,
            detail: format!("fast == brute: {all_equal}"),
        });
    }
    csv.stamp(canon, ctx.seed);
    outputs.push(("count.csv".into(), csv.render()));

    if get_bool(params, "export-table")? {
        exec_quotient(params, ctx, canon, report, outputs)?;
    }
    Ok(())
}

fn exec_quotient(
    params: &Params,
    ctx: &Ctx,
    canon: &str,
    report: &mut ExperimentReport,
    outputs: &mut Vec<(String, String)>,
) -> Result<()> {
    let spec = parse_spec(params)?;
    let quotient = enumerate_quotient(&spec, DEFAULT_COSET_CAP)?;
    let mut csv = Csv::new("coset_id,generator_id,image_coset_id");
    for (c, g, img) in quotient.table_rows() {
        csv.row(&[c.to_string(), g.to_string(), img.to_string()]);
    }
    let labels: Vec<String> = quotient
        .generators()
        .iter()
        .map(|(l, _)| l.clone())
        .collect();
    csv.meta("index", quotient.index());
    csv.meta("generators", labels.join(";"));
    csv.stamp(canon, ctx.seed);
    report
        .measured
        .insert("index".into(), quotient.index() as f64);
    outputs.push(("quotient.csv".into(), csv.render()));
    Ok(())
}

fn exec_lift(
    params: &Params,
    ctx: &Ctx,
    canon: &str,
    report: &mut ExperimentReport,
    outputs: &mut Vec<(String, String)>,
) -> Result<()> {
    let mut spec_params = params.clone();
    if let Some(s) = get(params, "spec") {
        spec_params.insert("kind".into(), s.to_string());
    }
    let spec = parse_spec(&spec_params)?;
    let grid = parse_i64_grid(get_or(params, "t-grid", "1:64"))?;
    let annulus = get_bool(params, "annulus")?;
    let curve = coverage_curve(&spec, &grid, annulus)?;
    let mut csv = Csv::new("T,ball_size,covered,fraction");
    for row in &curve.rows {
        csv.row(&[
            row.t.to_string(),
            row.ball_size.to_string(),
            row.covered.to_string(),
            fmt_f(row.fraction),
        ]);
    }
    for f in [0.5, 0.99] {
        let k = lifting_exponent(&curve, f);
        if k.reached {
            csv.meta(&format!("kappa({f})"), format!("{:.6}", k.kappa));
            report.measured.insert(format!("kappa({f})"), k.kappa);
        }
    }
    csv.meta("index", curve.index);
    csv.stamp(canon, ctx.seed);
    report.measured.insert(
        "final_fraction".into(),
        curve.rows.last().map(|r| r.fraction).unwrap_or(0.0),
    );
    outputs.push(("lift.csv".into(), csv.render()));
    Ok(())
}

fn exec_diameter(
    params: &Params,
    ctx: &Ctx,
    canon: &str,
    report: &mut ExperimentReport,
    outputs: &mut Vec<(String, String)>,
) -> Result<()> {
    let path = get(params, "graph-file")
        .ok_or_else(|| Error::input("diameter: graph-file is required"))?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::input(format!("graph-file {path}: {e}")))?;
    let graph = from_edge_list(&text)?;
    let stats = almost_diameter(&graph, ctx.seed)?;
    let mut csv = Csv::new("distance,pairs");
    for (d, &c) in stats.histogram.iter().enumerate() {
        if c > 0 {
            csv.row(&[d.to_string(), c.to_string()]);
        }
    }
    csv.meta("mean", format!("{:.9}", stats.mean));
    for (eps, frac) in &stats.within {
        csv.meta(&format!("within({eps})"), format!("{frac:.9}"));
    }
    if let Some(info) = &stats.sampled {
        csv.meta("sampled-sources", info.sources);
        csv.meta("sample-seed", info.seed);
    }
    csv.stamp(canon, ctx.seed);
    report.measured.insert("mean_distance".into(), stats.mean);
    for (eps, frac) in &stats.within {
        report.measured.insert(format!("within({eps})"), *frac);
    }
    outputs.push(("diameter.csv".into(), csv.render()));
    Ok(())
}

fn exec_tree(
    params: &Params,
    ctx: &Ctx,
    canon: &str,
    report: &mut ExperimentReport,
    outputs: &mut Vec<(String, String)>,
) -> Result<()> {
    let q = get_u64(params, "q", 2)?;
    let r1 = get_u32(params, "radius", 8)?;
    let r2 = get_u32(params, "radius2", r1)?;
    let table = convolution_table(q, r1, r2)?;
    let mut csv = Csv::new("d,count,bound,ratio");
    for (d, &count) in table.values.iter().enumerate() {
        let bound = (q as f64).powf((r1 + r2 - d as u32) as f64 / 2.0);
        csv.row(&[
            d.to_string(),
            count.to_string(),
            fmt_f(bound),
            fmt_f(count as f64 / bound),
        ]);
    }
    if get_bool(params, "check-convolution")? {
        let r = r1.max(r2);
        let rep = check_convolution_lemma(q, r, CONVOLUTION_CONSTANT)?;
        csv.meta("max-ratio", format!("{:.6}", rep.max_ratio));
        csv.meta("constant", CONVOLUTION_CONSTANT);
        report
            .measured
            .insert("convolution_constant".into(), rep.max_ratio);
        report.checks.push(CheckResult {
            name: "convolution-decay".into(),
            pass: rep.within_slack,
            detail: if rep.degenerate {
                format!("q = 1 degenerate case flagged; ratio {:.4}", rep.max_ratio)
            } else {
                format!(
                    "max ratio {:.4} {} {CONVOLUTION_CONSTANT}",
                    rep.max_ratio,
                    if rep.within_slack { "<=" } else { ">" }
                )
            },
        });
    }
    csv.stamp(canon, ctx.seed);
    outputs.push(("tree.csv".into(), csv.render()));
    Ok(())
}

fn build_graph(params: &Params, ctx: &Ctx) -> Result<Graph> {
    let family = get_or(params, "family", "random");
    let args: Vec<&str> = get_or(params, "params", "")
        .split(',')
        .map(|s| s.trim())
        .filter(|s| !s.is_empty())
        .collect();
    let need = |n: usize| -> Result<Vec<u64>> {
        if args.len() != n {
            return Err(Error::input(format!(
                "family {family}: expected {n} comma-separated params"
            )));
        }
        args.iter()
            .map(|s| {
                s.parse()
                    .map_err(|_| Error::input(format!("bad parameter '{s}'")))
            })
            .collect()
    };
    match family {
        "lps" => {
            let v = need(2)?;
            build_lps(v[0] as u32, v[1] as u32, get_bool(params, "bipartite")?)
        }
        "cayley" => {
            let v = need(1)?;
            let fam = match get_or(params, "gen-family", "elementary") {
                "elementary" => GeneratorFamily::Elementary,
                "shear2" => GeneratorFamily::Shear2,
                other => return Err(Error::input(format!("gen-family: unknown '{other}'"))),
            };
            build_cayley_sl2(v[0] as u32, fam)
        }
        "random" => {
            let v = need(2)?;
            random_regular(v[0] as usize, v[1] as usize, ctx.seed)
        }
        "file" => {
            let path = get(params, "graph-file")
                .ok_or_else(|| Error::input("family file: graph-file is required"))?;
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::input(format!("graph-file {path}: {e}")))?;
            from_edge_list(&text)
        }
        other => Err(Error::input(format!("family: unknown '{other}'"))),
    }
}

fn exec_spectra(
    params: &Params,
    ctx: &Ctx,
    canon: &str,
    report: &mut ExperimentReport,
    outputs: &mut Vec<(String, String)>,
) -> Result<()> {
    let graph = build_graph(params, ctx)?;
    let spectrum = adjacency_spectrum::<f64>(&graph)?;
    let mut csv = Csv::new("kind,index,re,im");
    for (i, &l) in spectrum.values.iter().enumerate() {
        csv.row(&["adjacency".into(), i.to_string(), fmt_f(l), fmt_f(0.0)]);
    }
    if get_bool(params, "nb")? {
        let nb = nonbacktracking_from_adjacency(&spectrum, &graph)?;
        for (i, mu) in nb.values.iter().enumerate() {
            csv.row(&[
                "nonbacktracking".into(),
                i.to_string(),
                fmt_f(mu.re),
                fmt_f(mu.im),
            ]);
        }
    }
    let cert = ramanujan_certificate::<f64>(&graph)?;
    csv.meta("n", graph.vertex_count());
    csv.meta("degree", graph.degree());
    csv.meta("provenance", &graph.provenance);
    csv.meta(
        "max-nontrivial-lambda",
        format!("{:.9}", cert.max_nontrivial_adjacency),
    );
    csv.meta("ramanujan", cert.adjacency_ok);
    csv.stamp(canon, ctx.seed);
    report.measured.insert(
        "max_nontrivial_lambda".into(),
        cert.max_nontrivial_adjacency,
    );
    report.checks.push(CheckResult {
        name: "certificate-consistency".into(),
        pass: cert.consistent,
        detail: format!(
            "adjacency {} nb {} (thresholds {:.6}/{:.6})",
            cert.adjacency_ok, cert.nb_ok, cert.adjacency_threshold, cert.nb_threshold
        ),
    });
    outputs.push(("spectra.csv".into(), csv.render()));

    if get_bool(params, "profile")? {
        let grid = parse_f64_list(get_or(params, "p-grid", "2.1,2.5,3,4,6,10"))?;
        let profile = density_profile(&spectrum, graph.q() as u64, &grid)?;
        let mut pcsv = Csv::new("p,M,bound");
        let n = graph.vertex_count() as f64;
        for &(p, m) in &profile.samples {
            let bound = n.powf(2.0 / p);
            pcsv.row(&[fmt_f(p), m.to_string(), fmt_f(bound)]);
        }
        pcsv.meta("n", graph.vertex_count());
        pcsv.meta("q", graph.q());
        pcsv.stamp(canon, ctx.seed);
        outputs.push(("profile.csv".into(), pcsv.render()));
    }
    Ok(())
}

fn exec_xi(
    params: &Params,
    ctx: &Ctx,
    canon: &str,
    report: &mut ExperimentReport,
    outputs: &mut Vec<(String, String)>,
) -> Result<()> {
    let t_grid: Vec<f64> = {
        let s = get_or(params, "t-grid", "1:10");
        if s.contains(':') {
            parse_i64_grid(s)?.into_iter().map(|t| t as f64).collect()
        } else {
            parse_f64_list(s)?
        }
    };
    let ps = parse_f64_list(get_or(params, "p", "2"))?;
    let samples = get_u64(
        params,
        "samples",
        if ctx.quick { 100_000 } else { 1_000_000 },
    )?;
    let mut csv = Csv::new("t,p,estimate,std_error,upper_bound,lower_bound");
    let mut in_bracket = true;
    for &t in &t_grid {
        for &p in &ps {
            let est = xi_p_montecarlo(&sl2_diag::<f64>(t), p, samples, ctx.seed)?;
            let (lo, hi) = xi_bounds(t, p);
            if est.estimate < lo - 3.0 * est.std_error || est.estimate > hi + 3.0 * est.std_error {
                in_bracket = false;
            }
            csv.row(&[
                fmt_f(t),
                fmt_f(p),
                fmt_f(est.estimate),
                fmt_f(est.std_error),
                fmt_f(hi),
                fmt_f(lo),
            ]);
        }
    }
    csv.meta("samples", samples);
    csv.stamp(canon, ctx.seed);
    report.checks.push(CheckResult {
        name: "xi-bracket".into(),
        pass: in_bracket,
        detail: format!("estimates within [lower - 3SE, upper + 3SE]: {in_bracket}"),
    });
    outputs.push(("xi.csv".into(), csv.render()));
    Ok(())
}

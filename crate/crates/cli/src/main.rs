use clap::{Parser, Subcommand};
use latspec_cli::accept;
use latspec_cli::config::{canonical, parse_config, Experiment};
use latspec_cli::csvout::fnv1a;
use latspec_cli::report::{ExperimentReport, RunReport};
use latspec_cli::runner::{exec_experiment, Ctx, Params};
use latspec_core::Error;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Numerical laboratory for congruence lattice counts, optimal lifting,
/// regular-tree convolutions, and graph-spectral density profiles.
#[derive(Parser)]
#[command(name = "latspec", version, about)]
struct Cli {
    /// Worker threads for the data-parallel loops (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for every randomized stage.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Reduced grids and sample counts.
    #[arg(long, global = true)]
    quick: bool,
    /// Write outputs into this directory instead of stdout.
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Lattice-point counts in a congruence subgroup.
    Count {
        /// sl2 or sl3
        #[arg(long, default_value = "sl2")]
        group: String,
        /// principal, gamma0, gamma2
        #[arg(long, default_value = "principal")]
        kind: String,
        #[arg(long, default_value_t = 1)]
        level: u32,
        /// Max-entry bounds: "10,50,200" or "10:200:10".
        #[arg(long)]
        norm_bound: Option<String>,
        /// Length bounds (base-e); switches to the averaged radius profile.
        #[arg(long)]
        length_bound: Option<String>,
        /// brute, fast, fixed-point, or both
        #[arg(long, default_value = "brute")]
        method: String,
        /// Conjugator entries, row-major ("a,b,c,d").
        #[arg(long)]
        conjugator: Option<String>,
        /// Also export the coset action table CSV.
        #[arg(long)]
        export_table: bool,
    },
    /// Coverage of the finite quotient by reductions of norm balls.
    Lift {
        #[arg(long)]
        level: u32,
        /// principal or gamma0
        #[arg(long, default_value = "principal")]
        spec: String,
        #[arg(long, default_value = "1:64")]
        t_grid: String,
        /// Count only the annulus T/2 < norm <= T per row.
        #[arg(long)]
        annulus: bool,
    },
    /// All-pairs distance histogram of an edge-list graph.
    Diameter {
        /// Edge list: one "u v" pair per line, 0-indexed.
        #[arg(long)]
        graph_file: PathBuf,
    },
    /// Regular-tree ball intersections and the decay comparison.
    Tree {
        #[arg(long, default_value_t = 2)]
        q: u64,
        #[arg(long, default_value_t = 8)]
        radius: u32,
        /// Second radius (defaults to --radius).
        #[arg(long)]
        radius2: Option<u32>,
        /// Verify the decay bound against the recorded constant.
        #[arg(long)]
        check_convolution: bool,
    },
    /// Graph spectra, certificates, and multiplicity profiles.
    Spectra {
        /// lps, cayley, random, file
        #[arg(long)]
        family: String,
        /// Family parameters: "5,13" (lps), "7" (cayley), "200,6" (random).
        #[arg(long, default_value = "")]
        params: String,
        /// Build the bipartite PGL2 variant (lps, non-residue case).
        #[arg(long)]
        bipartite: bool,
        /// Generator family for cayley: elementary or shear2.
        #[arg(long, default_value = "elementary")]
        gen_family: String,
        #[arg(long)]
        graph_file: Option<PathBuf>,
        /// Include the non-backtracking spectrum.
        #[arg(long)]
        nb: bool,
        /// Emit the M(p) profile CSV.
        #[arg(long)]
        profile: bool,
        #[arg(long, default_value = "2.1,2.5,3,4,6,10")]
        p_grid: String,
    },
    /// Monte-Carlo Harish-Chandra estimates along the SL2 Cartan ray.
    Xi {
        #[arg(long, default_value = "1:10")]
        t_grid: String,
        /// Exponents p >= 2 ("2,4" or "inf").
        #[arg(long, default_value = "2")]
        p: String,
        #[arg(long)]
        samples: Option<u64>,
    },
    /// Run the acceptance suite; one pass/fail line per criterion.
    Accept,
    /// Execute an experiment config file and emit a JSON report.
    Run { config: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .ok();
    }
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn deliver(out_dir: &Option<PathBuf>, outputs: Vec<(String, String)>) -> Result<(), Error> {
    match out_dir {
        None => {
            for (_, content) in outputs {
                print!("{content}");
            }
        }
        Some(dir) => {
            std::fs::create_dir_all(dir)
                .map_err(|e| Error::input(format!("out-dir {}: {e}", dir.display())))?;
            for (name, content) in outputs {
                let path = dir.join(&name);
                std::fs::write(&path, content)
                    .map_err(|e| Error::input(format!("writing {}: {e}", path.display())))?;
                eprintln!("wrote {}", path.display());
            }
        }
    }
    Ok(())
}

fn run_single(
    kind: &str,
    params: Params,
    ctx: &Ctx,
    out_dir: &Option<PathBuf>,
) -> Result<u8, Error> {
    let (report, outputs) = exec_experiment(kind, &params, ctx)?;
    deliver(out_dir, outputs)?;
    for check in &report.checks {
        eprintln!(
            "{} {}: {}",
            if check.pass { "ok" } else { "FAILED" },
            check.name,
            check.detail
        );
    }
    Ok(if report.pass() { 0 } else { 1 })
}

fn opt_insert(params: &mut Params, key: &str, value: Option<String>) {
    if let Some(v) = value {
        params.insert(key.into(), v);
    }
}

fn dispatch(cli: Cli) -> Result<u8, Error> {
    let ctx = Ctx {
        seed: cli.seed,
        quick: cli.quick,
    };
    match cli.cmd {
        Cmd::Count {
            group,
            kind,
            level,
            norm_bound,
            length_bound,
            method,
            conjugator,
            export_table,
        } => {
            let mut p: Params = BTreeMap::new();
            p.insert("group".into(), group);
            p.insert("kind".into(), kind);
            p.insert("level".into(), level.to_string());
            p.insert("method".into(), method);
            opt_insert(&mut p, "norm-bound", norm_bound);
            opt_insert(&mut p, "length-bound", length_bound);
            opt_insert(&mut p, "conjugator", conjugator);
            if export_table {
                p.insert("export-table".into(), "true".into());
            }
            run_single("count", p, &ctx, &cli.out_dir)
        }
        Cmd::Lift {
            level,
            spec,
            t_grid,
            annulus,
        } => {
            let mut p: Params = BTreeMap::new();
            p.insert("level".into(), level.to_string());
            p.insert("spec".into(), spec);
            p.insert("t-grid".into(), t_grid);
            if annulus {
                p.insert("annulus".into(), "true".into());
            }
            run_single("lift", p, &ctx, &cli.out_dir)
        }
        Cmd::Diameter { graph_file } => {
            let mut p: Params = BTreeMap::new();
            p.insert("graph-file".into(), graph_file.display().to_string());
            run_single("diameter", p, &ctx, &cli.out_dir)
        }
        Cmd::Tree {
            q,
            radius,
            radius2,
            check_convolution,
        } => {
            let mut p: Params = BTreeMap::new();
            p.insert("q".into(), q.to_string());
            p.insert("radius".into(), radius.to_string());
            opt_insert(&mut p, "radius2", radius2.map(|r| r.to_string()));
            if check_convolution {
                p.insert("check-convolution".into(), "true".into());
            }
            run_single("tree", p, &ctx, &cli.out_dir)
        }
        Cmd::Spectra {
            family,
            params,
            bipartite,
            gen_family,
            graph_file,
            nb,
            profile,
            p_grid,
        } => {
            let mut p: Params = BTreeMap::new();
            p.insert("family".into(), family);
            p.insert("params".into(), params);
            p.insert("gen-family".into(), gen_family);
            p.insert("p-grid".into(), p_grid);
            opt_insert(
                &mut p,
                "graph-file",
                graph_file.map(|f| f.display().to_string()),
            );
            if bipartite {
                p.insert("bipartite".into(), "true".into());
            }
            if nb {
                p.insert("nb".into(), "true".into());
            }
            if profile {
                p.insert("profile".into(), "true".into());
            }
            run_single("spectra", p, &ctx, &cli.out_dir)
        }
        Cmd::Xi { t_grid, p, samples } => {
            let mut params: Params = BTreeMap::new();
            params.insert("t-grid".into(), t_grid);
            params.insert("p".into(), p);
            opt_insert(&mut params, "samples", samples.map(|s| s.to_string()));
            run_single("xi", params, &ctx, &cli.out_dir)
        }
        Cmd::Accept => {
            let reports = accept::run_all(cli.quick);
            for r in &reports {
                println!("{}", r.line());
            }
            let pass = reports.iter().all(|r| r.pass);
            if let Some(dir) = &cli.out_dir {
                std::fs::create_dir_all(dir).map_err(|e| Error::input(format!("out-dir: {e}")))?;
                let path = dir.join("acceptance.json");
                std::fs::write(&path, serde_json::to_string_pretty(&reports).unwrap())
                    .map_err(|e| Error::input(format!("writing {}: {e}", path.display())))?;
                eprintln!("wrote {}", path.display());
            }
            Ok(if pass { 0 } else { 1 })
        }
        Cmd::Run { config } => run_config(&config, &ctx, &cli.out_dir),
    }
}

fn run_config(path: &Path, ctx: &Ctx, out_dir: &Option<PathBuf>) -> Result<u8, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::input(format!("config {}: {e}", path.display())))?;
    let experiments: Vec<Experiment> = parse_config(&text)?;
    let config_hash = format!("{:016x}", fnv1a(&canonical(&experiments)));
    let dir = out_dir.clone().unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir).map_err(|e| Error::input(format!("out-dir: {e}")))?;
    let mut reports: Vec<ExperimentReport> = Vec::new();
    for (i, exp) in experiments.iter().enumerate() {
        let (report, outputs) =
            exec_experiment(&exp.kind, &exp.params, ctx).map_err(|e| match e {
                Error::Input(m) => {
                    Error::Input(format!("experiment {} [{}]: {m}", i + 1, exp.kind))
                }
                Error::Resource(m) => {
                    Error::Resource(format!("experiment {} [{}]: {m}", i + 1, exp.kind))
                }
                Error::Numerical(m) => {
                    Error::Numerical(format!("experiment {} [{}]: {m}", i + 1, exp.kind))
                }
                Error::Check(m) => {
                    Error::Check(format!("experiment {} [{}]: {m}", i + 1, exp.kind))
                }
            })?;
        for (name, content) in outputs {
            let fname = format!("{:02}-{name}", i + 1);
            let fpath = dir.join(&fname);
            std::fs::write(&fpath, content)
                .map_err(|e| Error::input(format!("writing {}: {e}", fpath.display())))?;
        }
        reports.push(report);
    }
    let pass = reports.iter().all(|r| r.pass());
    let run_report = RunReport {
        config_hash,
        seed: ctx.seed,
        experiments: reports,
        pass,
    };
    let json = serde_json::to_string_pretty(&run_report).unwrap();
    println!("{json}");
    std::fs::write(dir.join("report.json"), &json)
        .map_err(|e| Error::input(format!("writing report.json: {e}")))?;
    Ok(if pass { 0 } else { 1 })
}

//! Command-line driver: cycle enumeration, linear-system reports on scenario
//! files, threefold elimination reports, branch-quadric validation, the
//! family dimension table, and the full verification suite.
//!
//! Exit codes: 0 on success, 1 when a verification check fails, 2 on usage
//! or input errors.  All randomness derives from one seed (`ANTICANON_SEED`,
//! default 0) and every report prints it, so reruns are byte-identical.

use std::path::PathBuf;
use std::process;

use clap::{Parser, Subcommand};

use anticanon::branch;
use anticanon::check;
use anticanon::cycles::{enumerate, string_text};
use anticanon::error::{Error, Result};
use anticanon::linsys::{classify_map, h0_full};
use anticanon::moduli;
use anticanon::poly::Poly;
use anticanon::scenario;
use anticanon::threefold::{self, DsType};

#[derive(Parser)]
#[command(
    name = "anticanon",
    version,
    about = "Exact verification engine for anticanonical-cycle surfaces and their threefolds"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Enumerate cycle configurations up to a search depth
    Enumerate {
        /// Maximum number of blowup events
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
    /// Analyze a divisor class on the surface of a scenario file
    Surface {
        /// Scenario file (.acs)
        file: PathBuf,
        /// Divisor class expression, e.g. "-2*K" or "f1 + f2 - e1"
        #[arg(long, allow_hyphen_values = true)]
        class: String,
    },
    /// Print the staged base-locus elimination report for a subtype (I-IV)
    Threefold {
        /// Subtype name: I, II, III, or IV
        subtype: String,
    },
    /// Validate a branch quadric against the frozen constraint data
    Branch {
        /// Subtype name: I, II, III, or IV
        subtype: String,
        /// Polynomial file with a candidate quadric; defaults to the
        /// built-in fixture
        #[arg(long)]
        q: Option<PathBuf>,
    },
    /// Print the family dimension table
    Moduli,
    /// Run the full verification suite
    PaperCheck {
        /// Emit JSON instead of Markdown
        #[arg(long, conflicts_with = "md")]
        json: bool,
        /// Emit Markdown (the default)
        #[arg(long)]
        md: bool,
        /// Keep only checks whose id or subject contains this string
        #[arg(long)]
        filter: Option<String>,
    },
}

fn main() {
    let cli = Cli::parse();
    let seed = anticanon::seed_from_env();
    match run(cli.cmd, seed) {
        Ok(code) => process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::Branch(_) => 1,
                _ => 2,
            };
            process::exit(code);
        }
    }
}

fn run(cmd: Cmd, seed: u64) -> Result<i32> {
    match cmd {
        Cmd::Enumerate { depth } => {
            println!("# cycle enumeration (depth {depth})");
            let entries = enumerate(depth);
            for e in &entries {
                let mut flags = Vec::new();
                if e.all_node {
                    flags.push("node-only");
                }
                if e.obstructed {
                    flags.push("obstructed");
                }
                println!(
                    "{}  length={} depth={}{}{}",
                    string_text(&e.canonical),
                    e.length,
                    e.depth,
                    if flags.is_empty() { "" } else { " " },
                    flags.join(" ")
                );
            }
            println!("{} configurations", entries.len());
            Ok(0)
        }
        Cmd::Surface { file, class } => {
            let sc = scenario::load(&file)?;
            let cfg = sc.realize()?;
            let lat = cfg.lattice();
            let d = lat.parse_class(&class)?;
            let r = h0_full(&cfg, &d, seed)?;
            println!("# linear system report: {}", sc.name);
            println!("string: {}", string_text(&cfg.string()));
            println!("canonical: {}", string_text(&cfg.canonical_string()));
            println!("class: {d}");
            println!("seed: {seed}");
            let names = cfg.component_names();
            let fixed: Vec<String> = r
                .fixed
                .iter()
                .zip(names.iter())
                .filter(|(&k, _)| k != 0)
                .map(|(&k, n)| {
                    if k == 1 {
                        n.clone()
                    } else {
                        format!("{k}*{n}")
                    }
                })
                .collect();
            println!(
                "fixed part: {}",
                if fixed.is_empty() {
                    "none".to_string()
                } else {
                    fixed.join(" + ")
                }
            );
            println!("mobile part: {}", r.mobile);
            println!("h0: {} (route {})", r.value, r.route);
            println!("map: {}", classify_map(&r, &lat));
            Ok(0)
        }
        Cmd::Threefold { subtype } => {
            let ds = DsType::parse(&subtype)?;
            print!("{}", threefold::eliminate(ds)?.to_markdown());
            Ok(0)
        }
        Cmd::Branch { subtype, q } => {
            let ds = DsType::parse(&subtype)?;
            let (source, quadric) = match &q {
                Some(path) => {
                    let text = std::fs::read_to_string(path)?;
                    (path.display().to_string(), Poly::parse(text.trim())?)
                }
                None => ("fixture".to_string(), branch::fixture_quadric(ds)),
            };
            let params = branch::fixture_params(ds);
            let rep = branch::check_quartic(ds, &quadric, &params, seed)?;
            let rows = branch::satisfies_constraints(ds, &quadric)?;
            let curves = branch::certify_double_curves(ds, &quadric, &params)?;
            let pass =
                rep.ok() && rows.iter().all(|c| c.ok) && curves.iter().all(|c| c.ok);
            let to_json = |cs: &[branch::BranchCheck]| -> Vec<serde_json::Value> {
                cs.iter()
                    .map(|c| serde_json::json!({"label": c.label, "ok": c.ok}))
                    .collect()
            };
            let value = serde_json::json!({
                "subtype": ds.name(),
                "source": source,
                "seed": seed,
                "mid_rank": rep.mid_rank,
                "assembly": to_json(&rep.checks),
                "constraint_rows": {
                    "total": rows.len(),
                    "satisfied": rows.iter().filter(|c| c.ok).count(),
                },
                "double_curves": to_json(&curves),
                "pass": pass,
            });
            println!("{}", serde_json::to_string_pretty(&value).expect("serializes"));
            Ok(if pass { 0 } else { 1 })
        }
        Cmd::Moduli => {
            print!("{}", moduli::moduli_table_markdown()?);
            Ok(0)
        }
        Cmd::PaperCheck { json, md: _, filter } => {
            let full = check::run_all(seed)?;
            let report = match &filter {
                Some(f) => {
                    let g = full.filtered(f);
                    if g.total() == 0 {
                        eprintln!("warning: no checks match filter '{f}'");
                    }
                    g
                }
                None => full,
            };
            if json {
                print!("{}", report.to_json());
            } else {
                print!("{}", report.to_markdown());
            }
            Ok(if report.all_pass() { 0 } else { 1 })
        }
    }
}

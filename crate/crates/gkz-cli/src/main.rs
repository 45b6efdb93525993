//! `gkz`: exact combinatorics and truncated series solutions of GKZ
//! hypergeometric systems from the command line.
//!
//! Column indices are 1-based everywhere in the interface. Output is a
//! plain-text table by default or deterministic JSON with `--json`; exit
//! codes are 0 on success, 1 on domain errors, 2 on usage errors.

mod input;
mod suite;

use clap::{Args, Parser, Subcommand};
use gkz::exact::{format_rat, parse_rat, Int, Rat};
use gkz::geometry::WeightVector;
use gkz::irregularity::{self, SValue};
use gkz::series::{self};
use gkz::{geometry, slopes};

use input::{invalid, parse_indices, parse_problem, parse_rats, parse_shift};

#[derive(Parser)]
#[command(
    name = "gkz",
    version,
    about = "exact GKZ hypergeometric combinatorics"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalOpts {
    /// Matrix as 'FILE' or inline JSON '[[1,0,3],[0,2,1]]' (or an object
    /// with "matrix" and optional "beta")
    #[arg(long, global = true)]
    matrix: Option<String>,
    /// Parameter vector, e.g. --beta 1/2,1/3
    #[arg(long, global = true)]
    beta: Option<String>,
    /// Series truncation: total degree of the shift
    #[arg(long = "N", default_value_t = 20, global = true)]
    n_trunc: u32,
    /// Search bound for shift enumeration
    #[arg(long, default_value_t = 50, global = true)]
    bound: u32,
    /// Seed for the triangulation perturbation retries
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    /// Emit JSON instead of a table
    #[arg(long, global = true, conflicts_with = "table")]
    json: bool,
    /// Emit a table (the default)
    #[arg(long, global = true)]
    table: bool,
    /// Thread count for the parallel enumeration paths
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Canonical Z-basis of the kernel lattice of A
    Kernel,
    /// Normalized volume vol_ZA of the subconfiguration tau
    Volume {
        /// Columns, e.g. --tau 1,2,3 (default: all)
        #[arg(long)]
        tau: Option<String>,
    },
    /// The weighted umbrella: all origin-free faces with covectors
    Umbrella {
        /// Explicit weight list, e.g. --weight 1,1,7/2
        #[arg(long, conflicts_with_all = ["tau", "s"])]
        weight: Option<String>,
        /// Pattern form: weight 1 on tau ...
        #[arg(long, requires = "s")]
        tau: Option<String>,
        /// ... and s elsewhere
        #[arg(long, requires = "tau")]
        s: Option<String>,
    },
    /// Weight values where the pattern umbrella jumps
    Breakpoints {
        /// Columns carrying weight 1
        #[arg(long)]
        tau: String,
    },
    /// Regular triangulation: by explicit weight, or volume-respecting
    Triangulate {
        /// Explicit weight for the full configuration
        #[arg(long, conflicts_with = "tau")]
        omega: Option<String>,
        /// Columns to triangulate volume-respectingly (default: all)
        #[arg(long)]
        tau: Option<String>,
    },
    /// Truncated Gamma-series attached to a simplex
    Series {
        /// The simplex, e.g. --sigma 1,2
        #[arg(long)]
        sigma: String,
        /// Shift vector (default: zero)
        #[arg(long)]
        k: Option<String>,
        /// Replace the shift by the bounded minimal-negative-support one
        #[arg(long)]
        min_support: bool,
        /// Print at most this many terms in the table form
        #[arg(long, default_value_t = 8)]
        show: usize,
    },
    /// Slopes along a coordinate hyperplane (or candidates along a subspace)
    Slopes {
        /// The hyperplane {x_i = 0}
        #[arg(long, conflicts_with = "subspace")]
        hyperplane: Option<usize>,
        /// Columns of tau for a higher-codimension subspace report
        #[arg(long)]
        subspace: Option<String>,
    },
    /// Candidate indices along the subspace Y_tau, with the realization gap
    Subspace {
        /// Columns of tau, e.g. --tau 1
        #[arg(long)]
        tau: String,
    },
    /// Volume lower bound for the Gevrey solution space along Y_tau
    Dim {
        #[arg(long)]
        tau: String,
        /// Gevrey order: a rational or 'inf' (default)
        #[arg(long, default_value = "inf")]
        s: String,
    },
    /// Irregularity dimension along a hyperplane at order s
    Irr {
        /// The hyperplane {x_i = 0}
        #[arg(long)]
        hyperplane: usize,
        #[arg(long)]
        s: String,
    },
    /// Run the bundled reproduction suite and print a pass/fail table
    PaperSuite,
}

fn main() -> std::process::ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.global.threads {
        if let Err(e) = gkz::configure_threads(threads) {
            eprintln!("error: {e}");
            return std::process::ExitCode::from(1);
        }
    }
    match run(&cli) {
        Ok((json, table)) => {
            if cli.global.json {
                println!("{}", serde_json::to_string_pretty(&json).unwrap());
            } else {
                println!("{table}");
            }
            std::process::ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::ExitCode::from(1)
        }
    }
}

fn require_matrix(cli: &Cli) -> gkz::Result<input::ProblemInput> {
    let Some(matrix) = &cli.global.matrix else {
        return Err(invalid("matrix", "--matrix is required for this command"));
    };
    parse_problem(matrix, cli.global.beta.as_deref())
}

fn require_beta(problem: &input::ProblemInput) -> gkz::Result<Vec<Rat>> {
    problem
        .beta
        .clone()
        .ok_or_else(|| invalid("beta", "--beta (or a \"beta\" key) is required"))
}

fn indices_one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|i| i + 1).collect()
}

fn run(cli: &Cli) -> gkz::Result<(serde_json::Value, String)> {
    match &cli.command {
        Command::Kernel => {
            let problem = require_matrix(cli)?;
            let basis = gkz::exact::kernel_basis(&problem.matrix)?;
            let json = serde_json::json!({
                "command": "kernel",
                "kernel": basis.iter()
                    .map(|u| u.iter().map(|x| x.to_string()).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
            });
            let mut table = format!("kernel basis ({} vectors)\n", basis.len());
            for u in &basis {
                let row: Vec<String> = u.iter().map(|x| x.to_string()).collect();
                table.push_str(&format!("  ({})\n", row.join(", ")));
            }
            Ok((json, table))
        }
        Command::Volume { tau } => {
            let problem = require_matrix(cli)?;
            let a = &problem.matrix;
            let cols = match tau {
                Some(t) => parse_indices(t, a.cols(), "tau")?,
                None => (0..a.cols()).collect(),
            };
            let vol = geometry::normalized_volume(a, &cols)?;
            let json = serde_json::json!({
                "command": "volume",
                "tau": indices_one_based(&cols),
                "volume": format_rat(&vol),
            });
            let table = format!(
                "vol_ZA(Delta_tau) for tau = {:?}: {}\n",
                indices_one_based(&cols),
                format_rat(&vol)
            );
            Ok((json, table))
        }
        Command::Umbrella { weight, tau, s } => {
            let problem = require_matrix(cli)?;
            let a = &problem.matrix;
            let w = match (weight, tau, s) {
                (Some(list), _, _) => WeightVector::explicit(parse_rats(list, "weight")?)?,
                (None, Some(t), Some(sv)) => {
                    let tau = parse_indices(t, a.cols(), "tau")?;
                    WeightVector::pattern(a.cols(), &tau, &parse_rat(sv)?)?
                }
                _ => WeightVector::ones(a.cols()),
            };
            let u = geometry::umbrella(a, &w)?;
            let mut json = u.to_json();
            json["command"] = "umbrella".into();
            let mut table = format!(
                "umbrella at weight ({})\n",
                w.values()
                    .iter()
                    .map(format_rat)
                    .collect::<Vec<_>>()
                    .join(", ")
            );
            for face in &u.faces {
                table.push_str(&format!(
                    "  dim {}: {:?}  covector ({})\n",
                    face.dim,
                    indices_one_based(&face.indices),
                    face.covector
                        .iter()
                        .map(format_rat)
                        .collect::<Vec<_>>()
                        .join(", ")
                ));
            }
            Ok((json, table))
        }
        Command::Breakpoints { tau } => {
            let problem = require_matrix(cli)?;
            let a = &problem.matrix;
            let cols = parse_indices(tau, a.cols(), "tau")?;
            let bps = geometry::umbrella_breakpoints(a, &cols)?;
            let json = serde_json::json!({
                "command": "breakpoints",
                "tau": indices_one_based(&cols),
                "breakpoints": bps.iter().map(format_rat).collect::<Vec<_>>(),
            });
            let table = format!(
                "umbrella breakpoints for tau = {:?}: [{}]\n",
                indices_one_based(&cols),
                bps.iter().map(format_rat).collect::<Vec<_>>().join(", ")
            );
            Ok((json, table))
        }
        Command::Triangulate { omega, tau } => {
            let problem = require_matrix(cli)?;
            let a = &problem.matrix;
            let t = match (omega, tau) {
                (Some(list), _) => {
                    let w = parse_rats(list, "omega")?;
                    geometry::regular_triangulation(a, &w)?
                }
                (None, Some(list)) => {
                    let cols = parse_indices(list, a.cols(), "tau")?;
                    geometry::volume_respecting_triangulation(a, &cols, cli.global.seed)?
                }
                (None, None) => {
                    let cols: Vec<usize> = (0..a.cols()).collect();
                    geometry::volume_respecting_triangulation(a, &cols, cli.global.seed)?
                }
            };
            let mut json = t.to_json();
            json["command"] = "triangulate".into();
            let mut table = String::from("maximal simplices\n");
            for s in &t.maximal_simplices {
                table.push_str(&format!("  {:?}\n", indices_one_based(s)));
            }
            table.push_str(&format!("certified generic: {}\n", t.certified_generic));
            Ok((json, table))
        }
        Command::Series {
            sigma,
            k,
            min_support,
            show,
        } => {
            let problem = require_matrix(cli)?;
            let a = &problem.matrix;
            let beta = require_beta(&problem)?;
            let sig = parse_indices(sigma, a.cols(), "sigma")?;
            let m = a.cols() - a.rows();
            let shift = match k {
                Some(list) => {
                    let v = parse_shift(list, "k")?;
                    if v.len() != m {
                        return Err(invalid(
                            "k",
                            format!("expected {m} shift coordinates, got {}", v.len()),
                        ));
                    }
                    v
                }
                None => vec![Int::from(0); m],
            };
            let (shift, note) = if *min_support {
                let rep =
                    series::minimal_negative_support_rep(a, &sig, &beta, &shift, cli.global.bound)?;
                let note = format!(
                    "minimal-support shift k = ({}){}",
                    rep.k
                        .iter()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                        .join(","),
                    if rep.certified { "" } else { " [uncertified]" }
                );
                (rep.k, Some(note))
            } else {
                (shift, None)
            };
            let s = series::gamma_series_truncated(a, &sig, &beta, &shift, cli.global.n_trunc)?;
            let mut json = s.to_json();
            json["command"] = "series".into();
            let mut table = String::new();
            if let Some(note) = note {
                table.push_str(&note);
                table.push('\n');
            }
            table.push_str(&format!(
                "{} terms up to degree {} (order {} along Y_sigma)\n",
                s.terms.len(),
                s.truncation_degree,
                format_rat(&s.gevrey.order)
            ));
            table.push_str(&s.pretty(*show));
            table.push('\n');
            Ok((json, table))
        }
        Command::Slopes {
            hyperplane,
            subspace,
        } => {
            let problem = require_matrix(cli)?;
            let a = &problem.matrix;
            match (hyperplane, subspace) {
                (_, Some(list)) => {
                    let tau = parse_indices(list, a.cols(), "subspace")?;
                    let report = slopes::candidate_indices_along_subspace(a, &tau)?;
                    subspace_output(report)
                }
                (Some(i), None) => {
                    if *i == 0 || *i > a.cols() {
                        return Err(invalid("hyperplane", "index out of range"));
                    }
                    let report = slopes::slopes_along_hyperplane(a, i - 1)?;
                    let mut json = report.to_json();
                    json["command"] = "slopes".into();
                    Ok((json, slope_table(&report)))
                }
                (None, None) => {
                    let mut reports = Vec::new();
                    let mut table = String::new();
                    for i in 0..a.cols() {
                        let report = slopes::slopes_along_hyperplane(a, i)?;
                        table.push_str(&slope_table(&report));
                        reports.push(report.to_json());
                    }
                    let json = serde_json::json!({
                        "command": "slopes",
                        "reports": reports,
                    });
                    Ok((json, table))
                }
            }
        }
        Command::Subspace { tau } => {
            let problem = require_matrix(cli)?;
            let a = &problem.matrix;
            let cols = parse_indices(tau, a.cols(), "tau")?;
            let report = slopes::candidate_indices_along_subspace(a, &cols)?;
            subspace_output(report)
        }
        Command::Dim { tau, s } => {
            let problem = require_matrix(cli)?;
            let a = &problem.matrix;
            let cols = parse_indices(tau, a.cols(), "tau")?;
            let order = parse_svalue(s)?;
            let report = irregularity::gevrey_dim_lower_bound(a, &cols, &order, cli.global.seed)?;
            let mut json = report.to_json();
            json["command"] = "dim".into();
            let table = format!(
                "Gevrey dimension bound along Y_tau, tau = {:?}, s = {}\n\
                 lower bound: {}\nregime: {}\nwitness pairs: {}\n",
                indices_one_based(&report.tau),
                report.s.render(),
                format_rat(&report.lower_bound),
                match report.equality_regime {
                    irregularity::EqualityRegime::VeryGenericEquality =>
                        "equality for very generic parameters",
                    irregularity::EqualityRegime::LowerBoundOnly => "lower bound only",
                    irregularity::EqualityRegime::ZeroByRank =>
                        "zero for very generic parameters (rank-deficient tau)",
                },
                report
                    .witness_pairs
                    .iter()
                    .map(|(sig, ks)| format!("sigma {:?} x{}", indices_one_based(sig), ks.len()))
                    .collect::<Vec<_>>()
                    .join(", ")
            );
            Ok((json, table))
        }
        Command::Irr { hyperplane, s } => {
            let problem = require_matrix(cli)?;
            let a = &problem.matrix;
            if *hyperplane == 0 || *hyperplane > a.cols() {
                return Err(invalid("hyperplane", "index out of range"));
            }
            let i = hyperplane - 1;
            let order = parse_rat(s)?;
            let dim = irregularity::irregularity_dimension_hyperplane(a, i, &order)?;
            let mu_empty = irregularity::sw_multiplicity_empty(a, i, &order)?;
            let mu_hyper = irregularity::sw_multiplicity_hyperplane(a, &order, i)?;
            let json = serde_json::json!({
                "command": "irr",
                "hyperplane": i + 1,
                "s": format_rat(&order),
                "dimension": format_rat(&dim),
                "multiplicity_empty": format_rat(&mu_empty),
                "multiplicity_hyperplane": format_rat(&mu_hyper),
                "caveat": irregularity::RANK_JUMP_CAVEAT,
            });
            let table = format!(
                "irregularity dimension along {{x{} = 0}} at s = {}: {}\n\
                 multiplicities just above s: empty face {}, hyperplane {}\n\
                 note: {}\n",
                i + 1,
                format_rat(&order),
                format_rat(&dim),
                format_rat(&mu_empty),
                format_rat(&mu_hyper),
                irregularity::RANK_JUMP_CAVEAT
            );
            Ok((json, table))
        }
        Command::PaperSuite => {
            let checks = suite::run()?;
            let all_pass = checks.iter().all(|c| c.pass);
            let json = serde_json::json!({
                "command": "paper-suite",
                "checks": checks.iter().map(|c| serde_json::json!({
                    "name": c.name,
                    "expected": c.expected,
                    "got": c.got,
                    "pass": c.pass,
                })).collect::<Vec<_>>(),
                "all_pass": all_pass,
            });
            let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
            let mut table = String::new();
            for c in &checks {
                table.push_str(&format!(
                    "{:<width$}  {}  (expected {}, got {})\n",
                    c.name,
                    if c.pass { "PASS" } else { "FAIL" },
                    c.expected,
                    c.got,
                    width = width
                ));
            }
            table.push_str(&format!(
                "{}: {} checks\n",
                if all_pass { "ALL PASS" } else { "FAILURES" },
                checks.len()
            ));
            if !all_pass {
                return Err(gkz::Error::Internal(
                    "reproduction suite failed; see table output".into(),
                ));
            }
            Ok((json, table))
        }
    }
}

fn parse_svalue(s: &str) -> gkz::Result<SValue> {
    match s.trim() {
        "inf" | "infinity" | "oo" => Ok(SValue::Infinite),
        other => Ok(SValue::finite(parse_rat(other)?)),
    }
}

fn slope_table(report: &slopes::SlopeReport) -> String {
    let mut table = format!(
        "slopes along {{x{} = 0}}: [{}]  cross-check: {}\n",
        report.hyperplane + 1,
        report
            .slopes
            .iter()
            .map(format_rat)
            .collect::<Vec<_>>()
            .join(", "),
        if report.cross_check { "pass" } else { "fail" }
    );
    for w in &report.witnesses {
        table.push_str(&format!(
            "  s = {} witnessed by {}\n",
            format_rat(&w.s0),
            w.simplices
                .iter()
                .map(|s| format!("{:?}", indices_one_based(s)))
                .collect::<Vec<_>>()
                .join(" ")
        ));
    }
    table.push_str(&format!(
        "  umbrella breakpoints: [{}]\n",
        report
            .umbrella_breakpoints
            .iter()
            .map(format_rat)
            .collect::<Vec<_>>()
            .join(", ")
    ));
    table
}

fn subspace_output(report: slopes::SubspaceReport) -> gkz::Result<(serde_json::Value, String)> {
    let mut json = report.to_json();
    json["command"] = "subspace".into();
    let table = format!(
        "subspace Y_tau, tau = {:?}\n\
         algebraic-slope candidates (umbrella jumps > 1): [{}]\n\
         realized as Gevrey indices: [{}]\n\
         unrealized candidates (gap): [{}]\n",
        indices_one_based(&report.tau),
        report
            .candidates
            .iter()
            .map(format_rat)
            .collect::<Vec<_>>()
            .join(", "),
        report
            .realized
            .iter()
            .map(|w| format_rat(&w.s0))
            .collect::<Vec<_>>()
            .join(", "),
        report
            .gaps
            .iter()
            .map(format_rat)
            .collect::<Vec<_>>()
            .join(", ")
    );
    Ok((json, table))
}

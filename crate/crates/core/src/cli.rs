//! Command-line front end. `run` is the whole program minus process setup,
//! so it can be driven from tests with in-memory writers.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::asymptotics::{convergence_table, rows_to_csv, rows_to_json, Ratio};
use crate::error::{Result, ZonolatError};
use crate::extremal::{brute_force_delta_z, special_delta_z, SearchCaps};
use crate::primitive_points::{
    count_primitive_enumeration, count_primitive_sieve, enumerate_primitive, CountReport,
    EnumerationCaps, LatticeVector, QNorm, Region, DEFAULT_MAX_CANDIDATES,
};
use crate::verify::{self, Suite, SuiteReport};
use crate::zonotope::{build_h, build_h_plus, metrics, primitive_zonotope_metrics, GeneratorSet};
use crate::zonotope_graph::{build_graph, graph_diameter, GraphCaps};

#[derive(Debug, Parser)]
#[command(
    name = "zonolat",
    version,
    about = "Exact counts and checks for primitive lattice zonotopes"
)]
struct Cli {
    /// Output format for tabular results.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write output to this file instead of stdout.
    #[arg(long, short = 'o', global = true)]
    output: Option<PathBuf>,
    /// Cap on lattice candidates visited by any enumeration.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_CANDIDATES)]
    max_candidates: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Enumeration,
    Sieve,
    Both,
}

#[derive(Debug, Args)]
struct Ball {
    #[arg(short = 'd', long)]
    dim: usize,
    #[arg(short = 'p', long)]
    radius: u64,
    /// Norm: 1, 2, inf, or any positive integer.
    #[arg(short = 'q', long, default_value = "1", value_parser = parse_norm)]
    norm: QNorm,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List primitive points of a region of B_q(d,p).
    Enumerate {
        #[command(flatten)]
        ball: Ball,
        #[arg(long, default_value = "canonical_half", value_parser = parse_region)]
        region: Region,
    },
    /// Count primitive points of a region of B_q(d,p).
    Count {
        #[command(flatten)]
        ball: Ball,
        #[arg(long, default_value = "canonical_half", value_parser = parse_region)]
        region: Region,
        #[arg(long, value_enum, default_value_t = Method::Sieve)]
        method: Method,
    },
    /// Metrics (diameter, widths, k) of H_q(d,p), H_q⁺(d,p), or explicit generators.
    Zonotope {
        #[arg(short = 'd', long)]
        dim: Option<usize>,
        #[arg(short = 'p', long)]
        radius: Option<u64>,
        #[arg(short = 'q', long, default_value = "1", value_parser = parse_norm)]
        norm: QNorm,
        /// Use the non-negative orthant family.
        #[arg(long)]
        plus: bool,
        /// JSON array of integer vectors, e.g. '[[1,0],[0,1]]'.
        #[arg(long)]
        generators: Option<String>,
        /// Include the generator list in the output.
        #[arg(long)]
        list: bool,
    },
    /// Build the vertex–edge graph and check diameter = number of generators.
    GraphCheck {
        #[arg(short = 'd', long)]
        dim: Option<usize>,
        #[arg(short = 'p', long)]
        radius: Option<u64>,
        #[arg(short = 'q', long, default_value = "1", value_parser = parse_norm)]
        norm: QNorm,
        #[arg(long)]
        plus: bool,
        #[arg(long)]
        generators: Option<String>,
        #[arg(long, default_value_t = GraphCaps::default().max_generators)]
        max_generators: usize,
        /// Print the full graph instead of the summary.
        #[arg(long)]
        full: bool,
    },
    /// Run an exact identity suite over p = 1..=p-max.
    Verify {
        /// lemma41, eq23, eq24, base-case, or dominance.
        #[arg(value_parser = parse_suite)]
        suite: Suite,
        #[arg(short = 'd', long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 10)]
        p_max: u64,
        #[arg(short = 'q', long, default_value = "1", value_parser = parse_norm)]
        norm: QNorm,
        /// Random sets per dimension (dominance only).
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// 1-norm bound on sampled generators (dominance only).
        #[arg(long, default_value_t = 5)]
        max_l1: u64,
        /// Largest sampled generator count (dominance only).
        #[arg(long, default_value_t = 30)]
        max_generators: usize,
    },
    /// Empirical ratio versus its limit constant for a list of radii.
    Converge {
        #[arg(short = 'd', long)]
        dim: usize,
        #[arg(short = 'q', long, default_value = "1", value_parser = parse_norm)]
        norm: QNorm,
        /// Comma-separated radii.
        #[arg(long, value_delimiter = ',', required = true)]
        p_list: Vec<u64>,
        /// thm21 (half_ball), thm22 (orthant), thm42 (cube_growth),
        /// cor44 (diameter_cube_power), thm11 (diameter_scaling), density.
        #[arg(long, value_parser = parse_ratio)]
        which: Ratio,
    },
    /// Largest zonotope diameter in [0,k]^d, by brute force or at a special radius.
    Extremal {
        #[arg(short = 'd', long)]
        dim: usize,
        #[arg(short = 'k', long)]
        cube: Option<u64>,
        #[arg(short = 'p', long)]
        radius: Option<u64>,
        #[arg(long)]
        brute_force: bool,
        #[arg(long, default_value_t = SearchCaps::default().node_cap)]
        node_cap: u64,
        #[arg(long, default_value_t = SearchCaps::default().max_k)]
        max_k: u64,
        #[arg(long, default_value_t = SearchCaps::default().max_d)]
        max_d: usize,
    },
    /// (p, k, δ) rows for H_1(d,p), p = 1..=p-max.
    Table {
        #[arg(short = 'd', long)]
        dim: usize,
        #[arg(long)]
        p_max: u64,
    },
}

fn parse_norm(s: &str) -> std::result::Result<QNorm, String> {
    s.parse().map_err(|e: ZonolatError| e.to_string())
}

fn parse_region(s: &str) -> std::result::Result<Region, String> {
    s.parse().map_err(|e: ZonolatError| e.to_string())
}

fn parse_suite(s: &str) -> std::result::Result<Suite, String> {
    s.parse().map_err(|e: ZonolatError| e.to_string())
}

fn parse_ratio(s: &str) -> std::result::Result<Ratio, String> {
    s.parse().map_err(|e: ZonolatError| e.to_string())
}

/// Text to print plus the exit code it implies.
struct Outcome {
    text: String,
    code: i32,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Self { text, code: 0 }
    }

    fn json(v: &Value) -> Self {
        Self::ok(render(v))
    }
}

fn render(v: &Value) -> String {
    let mut s = serde_json::to_string(v).expect("json");
    s.push('\n');
    s
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn parse_generators(raw: &str) -> Result<GeneratorSet> {
    let vecs: Vec<Vec<i64>> = serde_json::from_str(raw)
        .map_err(|e| ZonolatError::domain(format!("bad --generators JSON: {e}")))?;
    let d = vecs
        .first()
        .map(Vec::len)
        .ok_or_else(|| ZonolatError::domain("--generators must list at least one vector"))?;
    GeneratorSet::from_vectors(d, vecs.into_iter().map(LatticeVector::new).collect())
}

fn select_zonotope(
    dim: Option<usize>,
    radius: Option<u64>,
    norm: QNorm,
    plus: bool,
    generators: Option<&str>,
    caps: EnumerationCaps,
) -> Result<GeneratorSet> {
    match (generators, dim, radius) {
        (Some(raw), _, _) => parse_generators(raw),
        (None, Some(d), Some(p)) if plus => build_h_plus(d, p, norm, caps),
        (None, Some(d), Some(p)) => build_h(d, p, norm, caps),
        _ => Err(ZonolatError::domain(
            "give either --generators or both -d and -p",
        )),
    }
}

fn count_csv(reports: &[CountReport]) -> String {
    let mut out = String::from("d,p,q,region,count,method\n");
    for r in reports {
        let method = match r.method {
            crate::primitive_points::CountMethod::Enumeration => "enumeration",
            crate::primitive_points::CountMethod::Sieve => "sieve",
        };
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.d, r.p, r.q, r.region, r.count, method
        ));
    }
    out
}

fn suite_outcome(rep: &SuiteReport, extra: Option<Value>) -> Outcome {
    let mut v = json!({
        "suite": rep.suite,
        "checked": rep.checked,
        "holding": rep.holding,
        "summary": rep.summary(),
        "failures": rep.failures,
    });
    if let Some(extra) = extra {
        v["details"] = extra;
    }
    Outcome {
        text: render(&v),
        code: if rep.all_hold() { 0 } else { 3 },
    }
}

fn execute(cli: Cli) -> Result<Outcome> {
    let caps = EnumerationCaps {
        max_candidates: cli.max_candidates,
    };
    let csv = cli.format == Format::Csv;
    match cli.command {
        Command::Enumerate { ball, region } => {
            let pts = enumerate_primitive(ball.dim, ball.radius, ball.norm, region, caps)?;
            if csv {
                let header: Vec<String> = (1..=ball.dim).map(|i| format!("x{i}")).collect();
                let mut out = header.join(",") + "\n";
                for v in &pts {
                    let row: Vec<String> = v.coords().iter().map(i64::to_string).collect();
                    out.push_str(&row.join(","));
                    out.push('\n');
                }
                Ok(Outcome::ok(out))
            } else {
                Ok(Outcome::ok(
                    serde_json::to_string(&pts).expect("json") + "\n",
                ))
            }
        }
        Command::Count {
            ball,
            region,
            method,
        } => {
            let (d, p, q) = (ball.dim, ball.radius, ball.norm);
            let reports = match method {
                Method::Sieve => vec![count_primitive_sieve(d, p, q, region)?],
                Method::Enumeration => vec![count_primitive_enumeration(d, p, q, region, caps)?],
                Method::Both => {
                    let s = count_primitive_sieve(d, p, q, region)?;
                    let e = count_primitive_enumeration(d, p, q, region, caps)?;
                    if s.count != e.count {
                        return Err(ZonolatError::invariant(format!(
                            "sieve count {} ≠ enumeration count {}",
                            s.count, e.count
                        )));
                    }
                    vec![e, s]
                }
            };
            if csv {
                Ok(Outcome::ok(count_csv(&reports)))
            } else if reports.len() == 1 {
                Ok(Outcome::json(&to_value(&reports[0])))
            } else {
                Ok(Outcome::json(&to_value(&reports)))
            }
        }
        Command::Zonotope {
            dim,
            radius,
            norm,
            plus,
            generators,
            list,
        } => {
            let m = match (&generators, dim, radius, list) {
                (None, Some(d), Some(p), false) => {
                    primitive_zonotope_metrics(d, p, norm, plus, caps)?
                }
                _ => {
                    let z = select_zonotope(dim, radius, norm, plus, generators.as_deref(), caps)?;
                    let m = metrics(&z);
                    if list {
                        let mut v = to_value(&z);
                        v["metrics"] = to_value(&m);
                        return Ok(Outcome::json(&v));
                    }
                    m
                }
            };
            if csv {
                let widths: Vec<String> = m.widths.iter().map(ToString::to_string).collect();
                Ok(Outcome::ok(format!(
                    "diameter,widths,k\n{},{},{}\n",
                    m.diameter,
                    widths.join(" "),
                    m.k
                )))
            } else {
                Ok(Outcome::json(&to_value(&m)))
            }
        }
        Command::GraphCheck {
            dim,
            radius,
            norm,
            plus,
            generators,
            max_generators,
            full,
        } => {
            let z = select_zonotope(dim, radius, norm, plus, generators.as_deref(), caps)?;
            let gcaps = GraphCaps {
                max_generators,
                ..GraphCaps::default()
            };
            let g = build_graph(&z, gcaps)?;
            let diameter = graph_diameter(&g)?;
            if full {
                return Ok(Outcome::json(&to_value(&g)));
            }
            let holds = diameter == z.len();
            let v = json!({
                "generators": z.len(),
                "vertices": g.vertices.len(),
                "edges": g.edges.len(),
                "diameter": diameter,
                "diameter_equals_generators": holds,
            });
            Ok(Outcome {
                text: render(&v),
                code: if holds { 0 } else { 3 },
            })
        }
        Command::Verify {
            suite,
            dim,
            p_max,
            norm,
            samples,
            seed,
            max_l1,
            max_generators,
        } => match suite {
            Suite::Lemma41 => Ok(suite_outcome(
                &verify::k_delta_suite(dim, p_max, caps)?,
                None,
            )),
            Suite::Eq23 => Ok(suite_outcome(
                &verify::orthant_generator_suite(dim, p_max, norm, caps)?,
                None,
            )),
            Suite::Eq24 => Ok(suite_outcome(
                &verify::orthant_subdivision_suite(dim, p_max, norm, caps)?,
                None,
            )),
            Suite::BaseCase => {
                if dim != 2 {
                    return Err(ZonolatError::domain(
                        "the base-case suite is planar; use -d 2",
                    ));
                }
                Ok(suite_outcome(
                    &verify::planar_base_case_suite(p_max, norm, caps)?,
                    None,
                ))
            }
            Suite::Dominance => {
                let (rep, tally) = verify::dominance_suite(
                    &[dim],
                    samples,
                    p_max,
                    max_l1,
                    max_generators,
                    seed,
                    caps,
                )?;
                Ok(suite_outcome(&rep, Some(to_value(&tally))))
            }
        },
        Command::Converge {
            dim,
            norm,
            p_list,
            which,
        } => {
            let rows = convergence_table(dim, norm, &p_list, which, caps)?;
            if csv {
                Ok(Outcome::ok(rows_to_csv(&rows)))
            } else {
                Ok(Outcome::json(&rows_to_json(&rows)))
            }
        }
        Command::Extremal {
            dim,
            cube,
            radius,
            brute_force,
            node_cap,
            max_k,
            max_d,
        } => {
            if brute_force {
                let k = cube.ok_or_else(|| ZonolatError::domain("--brute-force needs -k"))?;
                let r = brute_force_delta_z(
                    dim,
                    k,
                    SearchCaps {
                        max_d,
                        max_k,
                        node_cap,
                    },
                )?;
                let mut v = to_value(&r);
                v["unique"] = Value::Bool(r.is_unique());
                Ok(Outcome {
                    text: render(&v),
                    code: if r.search_exhaustive { 0 } else { 2 },
                })
            } else {
                let p = radius.ok_or_else(|| {
                    ZonolatError::domain("give -p for a special radius or --brute-force -k")
                })?;
                Ok(Outcome::json(&to_value(&special_delta_z(dim, p, caps)?)))
            }
        }
        Command::Table { dim, p_max } => {
            let rows = (1..=p_max)
                .map(|p| special_delta_z(dim, p, caps))
                .collect::<Result<Vec<_>>>()?;
            if csv {
                let mut out = String::from("p,k,delta\n");
                for r in &rows {
                    out.push_str(&format!("{},{},{}\n", r.p, r.k, r.delta_z));
                }
                Ok(Outcome::ok(out))
            } else {
                let v: Vec<Value> = rows
                    .iter()
                    .map(|r| json!({"p": r.p, "k": r.k, "delta": r.delta_z}))
                    .collect();
                Ok(Outcome::json(&Value::Array(v)))
            }
        }
    }
}

/// Parses `argv` (including the program name), runs the command, and
/// returns the exit code: 0 success, 1 domain or usage error, 2 resource
/// limit, 3 invariant violation.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{rendered}");
            } else {
                let _ = write!(err, "{rendered}");
            }
            return code;
        }
    };
    let output = cli.output.clone();
    match execute(cli) {
        Ok(outcome) => {
            let written = match output {
                Some(path) => std::fs::write(&path, &outcome.text).map_err(|e| e.to_string()),
                None => out
                    .write_all(outcome.text.as_bytes())
                    .map_err(|e| e.to_string()),
            };
            if let Err(e) = written {
                let _ = writeln!(err, "error: cannot write output: {e}");
                return 1;
            }
            outcome.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut argv = vec!["zonolat"];
        argv.extend_from_slice(args);
        let code = run(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn zonotope_metrics_output() {
        let (code, out, _) = run_str(&["zonotope", "-d", "2", "-p", "2", "-q", "1"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v, json!({"diameter": 4, "widths": [3, 3], "k": 3}));
    }

    #[test]
    fn unknown_flag_is_usage_error() {
        let (code, _, err) = run_str(&["zonotope", "--bogus"]);
        assert_eq!(code, 1);
        assert!(err.contains("Usage"));
        let (code, out, _) = run_str(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("Usage"));
    }

    #[test]
    fn error_codes() {
        let (code, _, _) = run_str(&[
            "count",
            "-d",
            "2",
            "-p",
            "3",
            "--region",
            "orthant_interior",
        ]);
        assert_eq!(code, 1);
        let (code, _, _) = run_str(&["--max-candidates", "10", "enumerate", "-d", "3", "-p", "9"]);
        assert_eq!(code, 2);
        let (code, _, _) = run_str(&[
            "extremal",
            "-d",
            "2",
            "-k",
            "5",
            "--brute-force",
            "--node-cap",
            "5",
        ]);
        assert_eq!(code, 2);
    }

    #[test]
    fn count_both_methods_agree() {
        let (code, out, _) = run_str(&[
            "count",
            "-d",
            "3",
            "-p",
            "6",
            "-q",
            "inf",
            "--region",
            "full_ball",
            "--method",
            "both",
            "--format",
            "csv",
        ]);
        assert_eq!(code, 0);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], "d,p,q,region,count,method");
        let c1 = lines[1].split(',').nth(4).unwrap();
        let c2 = lines[2].split(',').nth(4).unwrap();
        assert_eq!(c1, c2);
    }

    #[test]
    fn graph_check_reports() {
        let (code, out, _) = run_str(&["graph-check", "--generators", "[[1,0],[0,1],[1,1]]"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["diameter"], 3);
        assert_eq!(v["vertices"], 6);
        let (code, _, _) = run_str(&["graph-check", "--generators", "[[1,0],[2,0]]"]);
        assert_eq!(code, 1);
    }

    #[test]
    fn table_csv() {
        let (code, out, _) = run_str(&["table", "-d", "2", "--p-max", "3", "--format", "csv"]);
        assert_eq!(code, 0);
        assert_eq!(out, "p,k,delta\n1,1,2\n2,3,4\n3,9,8\n");
    }

    #[test]
    fn enumerate_json() {
        let (code, out, _) = run_str(&["enumerate", "-d", "2", "-p", "2"]);
        assert_eq!(code, 0);
        assert_eq!(out.trim(), "[[0,1],[1,-1],[1,0],[1,1]]");
    }
}

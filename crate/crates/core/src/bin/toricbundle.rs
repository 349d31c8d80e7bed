use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;
use toricbundle::bundles::{
    check_adapted, diagram_from_pl, f_psi, plucker_presentation, plucker_tropical, row_is_tropical, skeleton_bundle, Diagram,
};
use toricbundle::coxrees::{build_ib, strong_khovanskii_verdict, subduction_extend, MdsVerdict, VerdictOptions};
use toricbundle::error::{Error, Result};
use toricbundle::exactalg::{rat, Rational};
use toricbundle::fans::CartierData;
use toricbundle::plsemifield::linearity_fan;
use toricbundle::polyring::GroebnerBudget;
use toricbundle::troplinear::DEFAULT_MATROID_BUDGET;

#[derive(Parser, Debug)]
#[command(name = "toricbundle", version, about = "Diagrams of toric vector bundles and flat toric families")]
struct Cli {
    #[command(flatten)]
    opts: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct GlobalOpts {
    /// Largest Gröbner basis size before giving up.
    #[arg(long, global = true, default_value_t = GroebnerBudget::default().max_basis)]
    budget_groebner: usize,
    /// Largest degree of an element the basis extension may adjoin.
    #[arg(long, global = true, default_value_t = 4)]
    degree_cap: usize,
    /// Largest number of basis elements for matroid enumeration (at most the library limit).
    #[arg(long, global = true, default_value_t = DEFAULT_MATROID_BUDGET)]
    matroid_cap: usize,
    /// Seed for commands that draw random matrices.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Include wall-clock timings in the report.
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Adaptedness of a diagram to its fan (exit 2 when not adapted).
    Check { diagram: PathBuf },
    /// Mori dream space verdict for the projectivized bundle.
    Mds {
        diagram: PathBuf,
        /// Do not try to extend a basis that is not strong.
        #[arg(long)]
        no_extend: bool,
        /// Most elements the extension may adjoin.
        #[arg(long, default_value_t = 6)]
        max_adjoined: usize,
    },
    /// Presentation of the Cox (total section) ring.
    Cox { diagram: PathBuf },
    /// Extend the basis by subduction and print the new diagram.
    Extend {
        diagram: PathBuf,
        /// Most elements the extension may adjoin.
        #[arg(long, default_value_t = 6)]
        max_adjoined: usize,
    },
    /// PL functions of the faces of a point configuration, with their fan and diagram.
    Skeleton {
        /// JSON file: {"points": [[..], ..], "m": 2} or a bare list of points.
        points: PathBuf,
        #[arg(long)]
        m: Option<usize>,
    },
    /// Klyachko space F_psi for ray values psi (comma separated).
    Klyachko {
        diagram: PathBuf,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        psi: Vec<i64>,
    },
    /// Tropical membership of the diagram rows, or of one weight.
    Tropcheck {
        diagram: PathBuf,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        weight: Option<Vec<i64>>,
    },
}

struct Outcome {
    report: Value,
    summary: String,
    code: u8,
}

fn read_diagram(path: &Path, opts: &GlobalOpts) -> Result<Diagram> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
    let d = Diagram::from_json(&text)?;
    if opts.matroid_cap > DEFAULT_MATROID_BUDGET {
        return Err(Error::Invalid(format!("matroid cap above the limit {DEFAULT_MATROID_BUDGET}")));
    }
    if d.presentation().as_linear().is_some() && d.n_cols() > opts.matroid_cap {
        return Err(Error::Budget(format!("{} basis elements exceed the matroid cap {}", d.n_cols(), opts.matroid_cap)));
    }
    Ok(d)
}

fn budget(opts: &GlobalOpts) -> GroebnerBudget {
    GroebnerBudget { max_basis: opts.budget_groebner, ..GroebnerBudget::default() }
}

fn budgets_json(opts: &GlobalOpts) -> Value {
    json!({
        "groebner": opts.budget_groebner,
        "degree_cap": opts.degree_cap,
        "matroid_cap": opts.matroid_cap,
        "seed": opts.seed,
    })
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report serializes")
}

fn rat_strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

fn run(cmd: &Command, opts: &GlobalOpts) -> Result<Outcome> {
    let b = budget(opts);
    match cmd {
        Command::Check { diagram } => {
            let d = read_diagram(diagram, opts)?;
            let rep = check_adapted(&d, &b)?;
            let summary = if rep.adapted {
                "adapted".to_string()
            } else {
                let bad: Vec<String> = rep.failing_cones().iter().map(|c| format!("{:?}", c.rays)).collect();
                format!("not adapted; failing cones {}", bad.join(", "))
            };
            let code = if rep.adapted { 0 } else { 2 };
            Ok(Outcome { report: to_value(&rep), summary, code })
        }
        Command::Mds { diagram, no_extend, max_adjoined } => {
            let d = read_diagram(diagram, opts)?;
            let vo = VerdictOptions { budget: b, degree_cap: opts.degree_cap, max_adjoined: *max_adjoined, extend: !no_extend };
            let rep = strong_khovanskii_verdict(&d, &vo)?;
            let mut summary = format!("verdict {}", to_value(&rep.verdict).as_str().unwrap_or("?"));
            if rep.strong_basis == Some(false) {
                summary.push_str("; strong basis fails");
            }
            if let Some(p) = rep.hypersurface_failing_pairs.as_ref().filter(|p| !p.is_empty()) {
                let pairs: Vec<String> = p.iter().map(|(a, c)| format!("({a},{c})")).collect();
                summary.push_str(&format!("; failing pairs {}", pairs.join(",")));
            }
            let witnesses: Vec<String> = rep.prime_checks.iter().filter(|c| c.verdict.is_not_prime()).map(|c| format!("X{}", c.ray)).collect();
            if !witnesses.is_empty() {
                summary.push_str(&format!("; witnesses {}", witnesses.join(",")));
            }
            let code = if rep.adaptedness.adapted { 0 } else { 2 };
            debug_assert!(rep.verdict != MdsVerdict::NotMoriDream);
            Ok(Outcome { report: to_value(&rep), summary, code })
        }
        Command::Cox { diagram } => {
            let d = read_diagram(diagram, opts)?;
            let ib = build_ib(&d, &b)?;
            let summary = format!("{} generators", ib.generators().len());
            Ok(Outcome { report: Value::String(ib.to_string()), summary, code: 0 })
        }
        Command::Extend { diagram, max_adjoined } => {
            let d = read_diagram(diagram, opts)?;
            let ext = subduction_extend(&d, opts.degree_cap, *max_adjoined, &b)?;
            let presentation = match &ext.diagram {
                Some(ed) => Some(to_value(&build_ib(ed, &b)?)),
                None => None,
            };
            let summary = format!("adjoined {} elements; {}", ext.adjoined.len(), ext.reason);
            Ok(Outcome { report: json!({ "extension": to_value(&ext), "presentation": presentation }), summary, code: 0 })
        }
        Command::Skeleton { points, m } => {
            let seed = opts.seed.ok_or_else(|| Error::Invalid("skeleton needs --seed".into()))?;
            let text = std::fs::read_to_string(points).map_err(|e| Error::Invalid(format!("{}: {e}", points.display())))?;
            let v: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
            let (pts, file_m) = match &v {
                Value::Array(_) => (v.clone(), None),
                Value::Object(o) => (o.get("points").cloned().unwrap_or(Value::Null), o.get("m").and_then(Value::as_u64)),
                _ => (Value::Null, None),
            };
            let pts: Vec<Vec<i64>> = serde_json::from_value(pts).map_err(|e| Error::Parse(format!("points: {e}")))?;
            let m = m.or(file_m.map(|x| x as usize)).unwrap_or(2);
            let s = skeleton_bundle(&pts, m, seed)?;
            let fan = linearity_fan(&s.functions)?;
            let d = diagram_from_pl(&fan, &s.functions, plucker_presentation(m, pts.len()))?;
            let tropical = plucker_tropical(&s.functions, m, pts.len())?;
            let subsets: Vec<Vec<usize>> = s.subsets.iter().map(|x| x.iter().map(|i| i + 1).collect()).collect();
            let report = json!({
                "m": m,
                "subsets": subsets,
                "functions": to_value(&s.functions),
                "fan": to_value(&fan),
                "diagram": d.to_json_value(),
                "plucker_tropical": tropical,
                "draws": s.draws,
            });
            let summary = format!("{} functions, fan with {} rays, tropical Plücker {}", s.functions.len(), fan.n_rays(), tropical);
            Ok(Outcome { report, summary, code: 0 })
        }
        Command::Klyachko { diagram, psi } => {
            let d = read_diagram(diagram, opts)?;
            let f = f_psi(&d, &CartierData::new(d.fan(), psi.clone())?)?;
            let basis: Vec<Vec<String>> = f.basis_vectors().iter().map(|v| rat_strings(v)).collect();
            let members: Vec<usize> = match d.presentation().as_linear() {
                Some(p) => (0..p.d()).filter(|&j| f.contains(p.column(j))).map(|j| j + 1).collect(),
                None => Vec::new(),
            };
            let summary = format!("dimension {}; contains basis elements {:?}", f.dim(), members);
            Ok(Outcome { report: json!({ "psi": psi, "dimension": f.dim(), "basis": basis, "basis_elements": members }), summary, code: 0 })
        }
        Command::Tropcheck { diagram, weight } => {
            let d = read_diagram(diagram, opts)?;
            let weights: Vec<(String, Vec<i64>)> = match weight {
                Some(w) => vec![("weight".into(), w.clone())],
                None => (0..d.n_rows()).map(|i| (format!("row {}", i + 1), d.row(i).to_vec())).collect(),
            };
            let mut results = Vec::new();
            let mut all = true;
            for (name, w) in weights {
                if w.len() != d.n_cols() {
                    return Err(Error::DimensionMismatch(format!("weight of length {} for {} columns", w.len(), d.n_cols())));
                }
                let wr: Vec<Rational> = w.iter().map(|&x| rat(x)).collect();
                let r = row_is_tropical(&d, &wr, &b)?;
                all &= r.is_ok();
                results.push(json!({ "name": name, "weight": w, "tropical": r.is_ok(), "detail": r.err() }));
            }
            let summary = if all { "tropical".to_string() } else { "not tropical".to_string() };
            Ok(Outcome { report: json!({ "results": results, "tropical": all }), summary, code: if all { 0 } else { 2 } })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let (text, summary, code) = match run(&cli.command, &cli.opts) {
        Ok(Outcome { report, summary, code }) => {
            let text = match report {
                Value::String(s) => s,
                other => {
                    let mut full = json!({ "report": other, "budgets": budgets_json(&cli.opts) });
                    if cli.opts.timings {
                        full["timings"] = json!({ "total_ms": start.elapsed().as_millis() as u64 });
                    }
                    serde_json::to_string_pretty(&full).expect("json")
                }
            };
            (Some(text), summary, code)
        }
        Err(e) => (None, format!("error: {e}"), 1),
    };
    if let Some(text) = text {
        match &cli.opts.out {
            Some(path) => {
                if let Err(e) = std::fs::write(path, format!("{text}\n")) {
                    eprintln!("error: {}: {e}", path.display());
                    return ExitCode::from(1);
                }
            }
            None => {
                // a closed pipe downstream is not our failure
                let _ = writeln!(std::io::stdout().lock(), "{text}");
            }
        }
    }
    eprintln!("{summary}");
    ExitCode::from(code)
}

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use impasse::algebra::{AlgebraicReal, Num, Rational};
use impasse::classify::classify_origin;
use impasse::io::export::{algebraic_json, dot_statements, tree_json, AlgebraicJson, TreeJson};
use impasse::io::parse::parse_system;
use impasse::io::plot::{plot_data, polygon_report, PlotBox};
use impasse::io::print::print_system;
use impasse::newton::{polygon, support_aux};
use impasse::resolve::{find_singular_points, resolve_local, recenter, termination_certificate, Budget, PlanePoint, ResolveError, SearchBox};
use impasse::system::ConstrainedSystem;

const EXIT_DIAGNOSTICS: u8 = 1;
const EXIT_BUDGET: u8 = 2;
const EXIT_PARSE: u8 = 3;

#[derive(Parser)]
#[command(name = "impasse-resolve", version, about = "Resolve singular points of constrained planar systems")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Find every singular point and resolve it.
    Resolve {
        file: PathBuf,
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long, default_value_t = Budget::default().max_depth)]
        max_depth: usize,
        #[arg(long, default_value_t = Budget::default().max_field_degree)]
        max_field_degree: usize,
    },
    /// Newton polygon of the origin, as JSON.
    Polygon { file: PathBuf },
    /// Classify the origin, or the rational point given with --at.
    Classify {
        file: PathBuf,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        at: Option<(Rational, Rational)>,
    },
    /// CSV with polygon points and samples of the impasse curve.
    Plot {
        file: PathBuf,
        #[arg(long = "box", value_parser = parse_box, default_value = "-1,1,-1,1", allow_hyphen_values = true)]
        area: PlotBox,
        #[arg(long, default_value_t = 200)]
        grid: usize,
    },
}

fn parse_point(s: &str) -> Result<(Rational, Rational), String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [x, y] => Ok((x.parse().map_err(|_| format!("bad rational {x:?}"))?, y.parse().map_err(|_| format!("bad rational {y:?}"))?)),
        _ => Err("expected x,y".into()),
    }
}

fn parse_box(s: &str) -> Result<PlotBox, String> {
    let v: Vec<f64> = s.split(',').map(|t| t.trim().parse::<f64>().map_err(|e| e.to_string())).collect::<Result<_, _>>()?;
    match v.as_slice() {
        [a, b, c, d] if a < b && c < d => Ok(PlotBox { x: (*a, *b), y: (*c, *d) }),
        _ => Err("expected a,b,c,d with a < b and c < d".into()),
    }
}

enum Failure {
    Parse(String),
    Diagnostics(Vec<String>),
}

fn load(path: &Path) -> Result<ConstrainedSystem, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
    let src = parse_system(&text).map_err(|e| Failure::Parse(format!("{}:{e}", path.display())))?;
    let (sys, warnings) = src.to_system().map_err(|e| Failure::Diagnostics(vec![e.to_string()]))?;
    for w in warnings {
        log::warn!("{w:?}");
    }
    let diags = sys.validate();
    if !diags.is_empty() {
        return Err(Failure::Diagnostics(diags.iter().map(ToString::to_string).collect()));
    }
    Ok(sys)
}

#[derive(Serialize)]
struct PointJson {
    x: AlgebraicJson,
    y: AlgebraicJson,
    tree: TreeJson,
    error: Option<String>,
}

fn resolve(sys: &ConstrainedSystem, budget: Budget, json: Option<&Path>, dot: Option<&Path>) -> Result<u8, Failure> {
    let points = find_singular_points(sys, &SearchBox::default(), budget.max_field_degree)
        .map_err(|e| Failure::Diagnostics(vec![e.to_string()]))?;
    println!("{}", print_system(sys));
    println!("{} singular point(s)", points.len());
    let mut code = 0;
    let mut entries = Vec::new();
    let mut graph = String::from("digraph resolution {\n");
    for (i, pt) in points.iter().enumerate() {
        let result = resolve_local(&recenter(sys, pt), budget);
        let (tree, error) = match &result {
            Ok(t) => (t, None),
            Err(e) => {
                code = EXIT_BUDGET;
                (e.partial(), Some(e.to_string()))
            }
        };
        let s = &tree.stats;
        print!("{pt}: {} nodes, {} leaves, {} blow-up level(s), {} admissible", s.nodes, s.leaves, s.blowup_levels, s.admissible);
        match (&result, termination_certificate(tree)) {
            (Err(ResolveError::BudgetExceeded { kind, .. }), _) => println!(", {kind} budget exceeded"),
            (Err(e), _) => println!(", {e}"),
            (Ok(_), Ok(_)) => println!(", resolved"),
            (Ok(_), Err(e)) => println!(", certificate failed: {e}"),
        }
        entries.push(PointJson { x: algebraic_json(&pt.x), y: algebraic_json(&pt.y), tree: tree_json(tree), error });
        graph.push_str(&format!("  subgraph cluster_{i} {{\n    label=\"{pt}\";\n"));
        graph.push_str(&dot_statements(tree, &format!("p{i}")));
        graph.push_str("  }\n");
    }
    graph.push_str("}\n");
    if let Some(p) = json {
        let bytes = serde_json::to_vec_pretty(&entries).expect("serializable");
        std::fs::write(p, bytes).map_err(|e| Failure::Parse(format!("{}: {e}", p.display())))?;
    }
    if let Some(p) = dot {
        std::fs::write(p, graph).map_err(|e| Failure::Parse(format!("{}: {e}", p.display())))?;
    }
    Ok(code)
}

fn classify(sys: &ConstrainedSystem, at: Option<(Rational, Rational)>) {
    let local = match at {
        Some((x, y)) => {
            let pt = PlanePoint {
                x: AlgebraicReal::from_rational(x.clone()),
                y: AlgebraicReal::from_rational(y.clone()),
                field: None,
                x_num: Num::Rat(x),
                y_num: Num::Rat(y),
                base_gen: None,
            };
            recenter(sys, &pt)
        }
        None => sys.clone(),
    };
    let class = classify_origin(&local);
    println!("{}", print_system(&local));
    println!("flags: {:?}", class.flags);
    println!("frame: {:?}", class.frame);
    println!("main vertex: {:?}, height {}", class.polygon.main_vertex(), class.polygon.height());
    println!("verdict: {}", class.verdict);
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.cmd {
        Cmd::Resolve { file, json, dot, max_depth, max_field_degree } => {
            let sys = load(&file)?;
            let budget = Budget { max_depth, max_field_degree, ..Budget::default() };
            resolve(&sys, budget, json.as_deref(), dot.as_deref())
        }
        Cmd::Polygon { file } => {
            let sys = load(&file)?;
            let poly = polygon(&support_aux(&sys)).map_err(|e| Failure::Diagnostics(vec![e.to_string()]))?;
            println!("{}", serde_json::to_string_pretty(&polygon_report(&poly)).expect("serializable"));
            Ok(0)
        }
        Cmd::Classify { file, at } => {
            classify(&load(&file)?, at);
            Ok(0)
        }
        Cmd::Plot { file, area, grid } => {
            print!("{}", plot_data(&load(&file)?, area, grid.max(1)));
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("IMPASSE_LOG", "warn")).init();
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Parse(msg)) => {
            eprintln!("parse error: {msg}");
            ExitCode::from(EXIT_PARSE)
        }
        Err(Failure::Diagnostics(msgs)) => {
            for m in msgs {
                eprintln!("diagnostic: {m}");
            }
            ExitCode::from(EXIT_DIAGNOSTICS)
        }
    }
}

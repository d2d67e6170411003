use std::fmt::Write as _;
use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use quarklet::cdf::{self, quarklets};
use quarklet::duals::{dual_quark_ft, dual_quarklet_ft, TailModel};
use quarklet::grid::GridSpec;
use quarklet::json as qjson;
use quarklet::modulation::{verify_perfect_reconstruction, ModulationBundle};
use quarklet::mra::{orthogonalize_haar, Transform};
use quarklet::piecewise::PiecewisePoly;
use quarklet::splines::{bspline, quark};
use quarklet::stability::{condition_e, dual_symbol_eigenvalues, ft_zero_scan, stability_table};
use quarklet::Error;

#[derive(Parser, Debug)]
#[command(
    name = "quarklet",
    version,
    about = "Exact quark and quarklet filter banks"
)]
struct Cli {
    /// Worker threads for parallel sections (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Write the result here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
struct Params {
    /// Primal spline order m.
    #[arg(long)]
    m: u32,
    /// Dual order m~ (m <= m~, m + m~ even).
    #[arg(long)]
    mt: u32,
    /// Highest polynomial degree p.
    #[arg(long, default_value_t = 0)]
    p: u32,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum TableFormat {
    Md,
    Csv,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum OrthoFormat {
    Json,
    Csv,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Tail {
    None,
    FirstOrder,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Function {
    Bspline,
    Quark,
    Quarklet,
    OrthoQuarklet,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Refinement and quarklet masks as exact JSON.
    Filters {
        #[command(flatten)]
        params: Params,
        /// Emit the dual masks instead.
        #[arg(long)]
        dual: bool,
    },
    /// Check X(z) conj(X~(z))^T = Id exactly.
    VerifyPr {
        #[command(flatten)]
        params: Params,
    },
    /// Shift-stability of single quarks.
    StabilityTable {
        #[arg(long, default_value_t = 4)]
        max_m: u32,
        #[arg(long, default_value_t = 3)]
        max_p: u32,
        #[arg(long, value_enum, default_value_t = TableFormat::Md)]
        format: TableFormat,
    },
    /// Real zeros of the quark Fourier transform.
    FtZeros {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        q: u32,
        /// Scan grid, `a:b:n` (endpoints may carry a `pi` suffix).
        #[arg(long, allow_hyphen_values = true, default_value = "-4pi:4pi:8001")]
        grid: GridSpec,
    },
    /// Eigenvalues of the dual symbol at z = 1 and Condition E.
    Eigen {
        #[command(flatten)]
        params: Params,
    },
    /// Fourier transform of the dual generators by a truncated product.
    Dual {
        #[command(flatten)]
        params: Params,
        #[arg(long, allow_hyphen_values = true, default_value = "-8pi:8pi:513")]
        grid: GridSpec,
        /// Truncation level J.
        #[arg(long, default_value_t = 20)]
        levels: u32,
        #[arg(long, value_enum, default_value_t = Tail::FirstOrder)]
        tail: Tail,
        /// Dual quarklets instead of dual quarks.
        #[arg(long)]
        quarklets: bool,
    },
    /// Split a level-(j+1) frame into generator and quarklet frames.
    Decompose {
        #[command(flatten)]
        params: Params,
        /// Frame JSON file, or `-` for stdin.
        #[arg(long, default_value = "-")]
        input: String,
    },
    /// Inverse of `decompose`; reads `{"s": frame, "d": frame}`.
    Reconstruct {
        #[command(flatten)]
        params: Params,
        #[arg(long, default_value = "-")]
        input: String,
    },
    /// Orthogonalized Haar quarklets (m = m~ = 1).
    Orthogonalize {
        #[arg(long)]
        p: u32,
        #[arg(long, value_enum, default_value_t = OrthoFormat::Json)]
        format: OrthoFormat,
        /// Sample grid for CSV output.
        #[arg(long, allow_hyphen_values = true, default_value = "0:1:257")]
        grid: GridSpec,
        /// Quarklet frame to rewrite in the orthogonal basis.
        #[arg(long)]
        input: Option<String>,
    },
    /// CSV samples `x,f(x)` of a named function.
    Sample {
        #[arg(long, value_enum)]
        function: Function,
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 1)]
        mt: u32,
        /// Polynomial degree of the quark/quarklet.
        #[arg(long, default_value_t = 0)]
        q: u32,
        #[arg(long, allow_hyphen_values = true, default_value = "-2:3:501")]
        grid: GridSpec,
    },
}

enum Failure {
    /// Bad flags, inputs or parameters (exit 2).
    Usage(String),
    /// A check ran and did not hold (exit 1).
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Construction(_) | Error::NotInvertible(_) => {
                Failure::Verification(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = Result<(String, bool), Failure>;

fn float(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

fn json_line(v: &Value) -> String {
    let mut s = serde_json::to_string(v).expect("serializable");
    s.push('\n');
    s
}

fn read_input(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Usage(format!("reading stdin: {e}")))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Usage(format!("reading {path}: {e}")))
    }
}

fn bundle(p: Params) -> Result<ModulationBundle, Failure> {
    cdf::validate(p.m, p.mt)?;
    Ok(ModulationBundle::new(p.m, p.mt, p.p)?)
}

fn header(p: Params) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("m".into(), json!(p.m));
    m.insert("mt".into(), json!(p.mt));
    m.insert("p".into(), json!(p.p));
    m
}

fn filters(params: Params, dual: bool) -> Outcome {
    let b = bundle(params)?;
    let mut out = header(params);
    if dual {
        out.insert("a_dual".into(), qjson::mask(&b.cdf.a_dual));
        out.insert("b_dual".into(), qjson::mask(&b.cdf.b_dual));
        out.insert("A_dual".into(), qjson::mask(&b.a_dual));
        out.insert("B_dual".into(), qjson::mask(&b.b_dual));
    } else {
        out.insert("a".into(), qjson::mask(&b.cdf.a));
        out.insert("b".into(), qjson::mask(&b.cdf.b));
        out.insert("A".into(), qjson::mask(&b.refinement.matrices));
        out.insert("B".into(), qjson::mask(&b.b_masks));
    }
    Ok((json_line(&Value::Object(out)), true))
}

fn verify_pr(params: Params) -> Outcome {
    let b = bundle(params)?;
    let r = verify_perfect_reconstruction(&b)?;
    let mut out = header(params);
    out.insert("holds".into(), json!(r.holds()));
    out.insert(
        "report".into(),
        json!(if r.holds() {
            "identity holds"
        } else {
            "identity fails"
        }),
    );
    out.insert(
        "residual".into(),
        Value::Array(
            r.residual
                .iter()
                .map(|(i, j, poly)| json!({"row": i, "col": j, "entry": qjson::laurent(poly)}))
                .collect(),
        ),
    );
    Ok((json_line(&Value::Object(out)), r.holds()))
}

fn table(max_m: u32, max_p: u32, format: TableFormat) -> Outcome {
    if max_m == 0 {
        return Err(Failure::Usage("--max-m must be at least 1".into()));
    }
    let t = stability_table(max_m, max_p)?;
    Ok((
        match format {
            TableFormat::Md => t.to_markdown(),
            TableFormat::Csv => t.to_csv(),
        },
        true,
    ))
}

fn ft_zeros(m: u32, q: u32, grid: GridSpec) -> Outcome {
    let GridSpec::Linear { start, end, count } = grid else {
        return Err(Failure::Usage("ft-zeros needs a linear grid a:b:n".into()));
    };
    let zeros = ft_zero_scan(m, q, start, end, count)?;
    let mut s = String::from("m,q,xi\n");
    for z in zeros {
        let _ = writeln!(s, "{m},{q},{}", float(z));
    }
    Ok((s, true))
}

fn eigen(params: Params) -> Outcome {
    let b = bundle(params)?;
    let eig = dual_symbol_eigenvalues(&b)?;
    let a1 = b.a_dual_at_one();
    let mut out = header(params);
    out.insert("dual_symbol_at_one".into(), qjson::matrix(&a1));
    out.insert("eigenvalues".into(), qjson::vector(&eig));
    out.insert("condition_e".into(), json!(condition_e(&a1)));
    Ok((json_line(&Value::Object(out)), true))
}

fn dual(params: Params, grid: GridSpec, levels: u32, tail: Tail, want_quarklets: bool) -> Outcome {
    let b = bundle(params)?;
    let tail = match tail {
        Tail::None => TailModel::None,
        Tail::FirstOrder => TailModel::FirstOrder,
    };
    let targets = grid.points();
    let values = if want_quarklets {
        let approx = dual_quark_ft(&b, levels, &grid.halved().points(), tail)?;
        dual_quarklet_ft(&b, &approx, &targets)?
    } else {
        dual_quark_ft(&b, levels, &targets, tail)?.values
    };
    let mut s = String::from("xi");
    for q in 0..b.dim() {
        let _ = write!(s, ",re_{q},im_{q}");
    }
    s.push('\n');
    for (xi, v) in targets.iter().zip(values) {
        s.push_str(&float(*xi));
        for c in v {
            let _ = write!(s, ",{},{}", float(c.re), float(c.im));
        }
        s.push('\n');
    }
    Ok((s, true))
}

fn decompose(params: Params, input: &str) -> Outcome {
    let t = Transform::new(&bundle(params)?)?;
    let c = qjson::parse_frame_str(&read_input(input)?)?;
    let (s, d) = t.decompose(&c)?;
    Ok((
        json_line(&json!({"s": qjson::frame(&s), "d": qjson::frame(&d)})),
        true,
    ))
}

fn reconstruct(params: Params, input: &str) -> Outcome {
    let t = Transform::new(&bundle(params)?)?;
    let text = read_input(input)?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Failure::Usage(e.to_string()))?;
    let part = |key: &str| {
        v.get(key)
            .ok_or_else(|| Failure::Usage(format!("input lacks \"{key}\"")))
            .and_then(|f| Ok(qjson::parse_frame(f)?))
    };
    let c = t.reconstruct(&part("s")?, &part("d")?)?;
    Ok((json_line(&qjson::frame(&c)), true))
}

fn orthogonalize(p: u32, format: OrthoFormat, grid: GridSpec, input: Option<&str>) -> Outcome {
    let o = orthogonalize_haar(1, 1, p)?;
    if format == OrthoFormat::Csv {
        return Ok((samples_csv(&o.stars, "psi_star", &grid), true));
    }
    let mut out = serde_json::Map::new();
    out.insert("p".into(), json!(p));
    out.insert("l".into(), qjson::matrix(&o.l));
    out.insert("norms_squared".into(), qjson::vector(&o.gram));
    out.insert(
        "psi_star".into(),
        Value::Array(o.stars.iter().map(qjson::piecewise).collect()),
    );
    if let Some(path) = input {
        let d = qjson::parse_frame_str(&read_input(path)?)?;
        out.insert("d_star".into(), qjson::frame(&o.decompose_orthogonal(&d)?));
    }
    Ok((json_line(&Value::Object(out)), true))
}

fn samples_csv(fs: &[PiecewisePoly], name: &str, grid: &GridSpec) -> String {
    let mut s = String::from("x");
    if fs.len() == 1 {
        s.push_str(",f");
    } else {
        for q in 0..fs.len() {
            let _ = write!(s, ",{name}_{q}");
        }
    }
    s.push('\n');
    for x in grid.points() {
        s.push_str(&float(x));
        for f in fs {
            let _ = write!(s, ",{}", float(f.eval_f64(x)));
        }
        s.push('\n');
    }
    s
}

fn sample(function: Function, m: u32, mt: u32, q: u32, grid: GridSpec) -> Outcome {
    let f = match function {
        Function::Bspline => bspline(m)?,
        Function::Quark => quark(m, q)?,
        Function::Quarklet => {
            cdf::validate(m, mt)?;
            quarklets(m, mt, q)?.quarklets.swap_remove(q as usize)
        }
        Function::OrthoQuarklet => orthogonalize_haar(m, mt, q)?.stars.swap_remove(q as usize),
    };
    Ok((samples_csv(&[f], "f", &grid), true))
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Filters { params, dual } => filters(params, dual),
        Command::VerifyPr { params } => verify_pr(params),
        Command::StabilityTable {
            max_m,
            max_p,
            format,
        } => table(max_m, max_p, format),
        Command::FtZeros { m, q, grid } => ft_zeros(m, q, grid),
        Command::Eigen { params } => eigen(params),
        Command::Dual {
            params,
            grid,
            levels,
            tail,
            quarklets,
        } => dual(params, grid, levels, tail, quarklets),
        Command::Decompose { params, input } => decompose(params, &input),
        Command::Reconstruct { params, input } => reconstruct(params, &input),
        Command::Orthogonalize {
            p,
            format,
            grid,
            input,
        } => orthogonalize(p, format, grid, input.as_deref()),
        Command::Sample {
            function,
            m,
            mt,
            q,
            grid,
        } => sample(function, m, mt, q, grid),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: --jobs: {e}");
            return ExitCode::from(2);
        }
    }
    let output = cli.output.clone();
    let (text, ok) = match run(cli) {
        Ok(r) => r,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            return ExitCode::from(1);
        }
    };
    let written = match &output {
        Some(path) => fs::write(path, &text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: writing output: {e}");
        return ExitCode::from(2);
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

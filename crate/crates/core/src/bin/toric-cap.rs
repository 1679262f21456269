use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use toric_cap::homology::{assemble_e1_with_margin, betti_from_page, snap_threshold, E1Page};
use toric_cap::io::{load_profile, preset};
use toric_cap::rational::{fmt_q, parse_q, to_f64};
use toric_cap::sublevel::{decompose_with, relative_homology_with};
use toric_cap::{
    asymptotic_limit, capacity, check_nice, differential, min_spec, spectrum, verify_properties,
    DegeneracyPolicy, Error, LinearForm, MethodChoice, ToricProfile, Threshold, Window, Q,
};

#[derive(Parser)]
#[command(name = "toric-cap", version, about = "Spectra, window homology and capacities of toric domains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
#[group(required = true, multiple = false)]
struct DomainArgs {
    /// JSON file with {"vertices": [["p/q","p/q"], ...]}
    #[arg(long)]
    domain: Option<PathBuf>,
    /// ellipsoid:a,b | polydisk:a,b | lshape[:a,b,c,d]
    #[arg(long)]
    preset: Option<String>,
}

impl DomainArgs {
    fn load(&self) -> Result<ToricProfile, Error> {
        match (&self.domain, &self.preset) {
            (Some(path), _) => load_profile(path),
            (None, Some(p)) => preset(p),
            (None, None) => Err(Error::InvalidParameter("no domain given".into())),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Auto,
    General,
    Formula,
}

#[derive(Subcommand)]
enum Command {
    /// Action spectrum up to a bound, with niceness diagnostics in JSON mode
    Spectrum {
        #[command(flatten)]
        dom: DomainArgs,
        #[arg(long)]
        amax: String,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        float: bool,
    },
    /// Interval decomposition of {A < a} on the extended boundary
    Sublevel {
        #[command(flatten)]
        dom: DomainArgs,
        /// m1,m2
        #[arg(long, allow_hyphen_values = true)]
        form: String,
        #[arg(long)]
        a: String,
        /// upper threshold (rational or inf); adds the relative homology
        #[arg(long)]
        b: Option<String>,
    },
    /// Betti numbers of the window complex [a, b)
    Homology {
        #[command(flatten)]
        dom: DomainArgs,
        /// lower threshold, or `delta` for half the smallest action
        #[arg(long)]
        a: String,
        /// upper threshold or `inf`
        #[arg(long)]
        b: String,
        /// n0..n1
        #[arg(long, default_value = "0..12")]
        degrees: String,
        #[arg(long)]
        dump_e1: bool,
        #[arg(long, default_value_t = 2)]
        truncation_margin: i64,
    },
    /// c_k for k = 1..kmax
    Capacities {
        #[command(flatten)]
        dom: DomainArgs,
        #[arg(long)]
        kmax: i64,
        #[arg(long, value_enum, default_value = "auto")]
        method: Method,
        /// write the CSV here instead of stdout
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        float: bool,
    },
    /// Check monotonicity, scaling, spectrality and growth of c_k
    Verify {
        #[command(flatten)]
        dom: DomainArgs,
        /// the smaller region (JSON file); defaults to the region scaled by 1/2
        #[arg(long)]
        inner: Option<PathBuf>,
        #[arg(long)]
        inner_preset: Option<String>,
        #[arg(long, default_value = "2")]
        scale: String,
        #[arg(long, default_value_t = 6)]
        kmax: i64,
    },
    /// lim c_k / k, optionally with the ratios up to kmax
    Asymptotics {
        #[command(flatten)]
        dom: DomainArgs,
        #[arg(long, default_value_t = 0)]
        kmax: i64,
        #[arg(long, value_enum, default_value = "auto")]
        method: Method,
    },
}

fn method_choice(m: Method) -> MethodChoice {
    match m {
        Method::Auto => MethodChoice::Auto,
        Method::General => MethodChoice::General,
        Method::Formula => MethodChoice::Formula,
    }
}

fn parse_threshold(s: &str) -> Result<Threshold, Error> {
    match s.trim() {
        "inf" | "infinity" | "∞" => Ok(Threshold::Infinite),
        other => Ok(Threshold::Finite(parse_q(other)?)),
    }
}

fn parse_form(s: &str) -> Result<LinearForm, Error> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| Error::Parse(format!("form must be m1,m2, got {s}")))?;
    let parse = |x: &str| {
        x.trim().parse::<i64>().map_err(|e| Error::Parse(format!("bad form entry {x}: {e}")))
    };
    LinearForm::new(parse(a)?, parse(b)?)
}

fn parse_degrees(s: &str) -> Result<std::ops::RangeInclusive<i64>, Error> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| Error::Parse(format!("degrees must be n0..n1, got {s}")))?;
    let b = b.trim_start_matches('=');
    let parse =
        |x: &str| x.trim().parse::<i64>().map_err(|e| Error::Parse(format!("bad degree {x}: {e}")));
    let (a, b) = (parse(a)?, parse(b)?);
    if a > b {
        return Err(Error::InvalidParameter(format!("empty degree range {s}")));
    }
    Ok(a..=b)
}

fn q_json(x: &Q) -> Value {
    Value::String(fmt_q(x))
}

fn run_spectrum(profile: &ToricProfile, amax: &str, format: Format, float: bool) -> Result<String, Error> {
    let amax = parse_q(amax)?;
    let entries = spectrum(profile, &amax)?;
    match format {
        Format::Csv => {
            let mut out = String::from("action,kind,m,m1,m2,mu,index,x1,x2");
            if float {
                out.push_str(",action_float");
            }
            out.push('\n');
            for e in &entries {
                let (m1, m2) = e.point.form.map_or((String::new(), String::new()), |f| {
                    (f.m1.to_string(), f.m2.to_string())
                });
                let mu = e.point.morse_index.map_or(String::new(), |m| m.to_string());
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{}",
                    fmt_q(&e.action),
                    e.point.kind.as_str(),
                    e.m,
                    m1,
                    m2,
                    mu,
                    e.index,
                    fmt_q(&e.point.location.x),
                    fmt_q(&e.point.location.y)
                ));
                if float {
                    out.push_str(&format!(",{}", to_f64(&e.action)));
                }
                out.push('\n');
            }
            Ok(out)
        }
        Format::Json => {
            let k_max = (to_f64(&amax) / to_f64(&min_spec(profile))).ceil() as i64;
            let nice = check_nice(profile, &amax, k_max)?;
            let v = json!({
                "a_max": q_json(&amax),
                "min_spec": q_json(&min_spec(profile)),
                "entries": entries,
                "niceness": nice,
            });
            Ok(format!("{}\n", serde_json::to_string_pretty(&v).expect("serializable")))
        }
    }
}

fn run_sublevel(profile: &ToricProfile, form: &str, a: &str, b: Option<&str>) -> Result<String, Error> {
    let form = parse_form(form)?;
    let a = parse_threshold(a)?;
    let dec = decompose_with(profile, &form, &a, DegeneracyPolicy::Reject)?;
    let mut v = json!({ "form": form, "a": a.to_string(), "intervals": dec.intervals });
    if let Some(b) = b {
        let b = parse_threshold(b)?;
        let Threshold::Finite(aq) = &a else {
            return Err(Error::InvalidThreshold("a must be finite when b is given".into()));
        };
        let rel = relative_homology_with(profile, &form, aq, &b, DegeneracyPolicy::Reject)?;
        v["b"] = Value::String(b.to_string());
        v["upper_intervals"] = serde_json::to_value(&rel.upper.intervals).expect("serializable");
        v["h0"] = json!(rel
            .h0
            .iter()
            .zip(&rel.h0_representatives)
            .map(|(i, r)| json!({ "interval": i, "representative": q_json(r) }))
            .collect::<Vec<_>>());
        v["h1_gaps"] = json!(rel.h1);
    }
    Ok(format!("{}\n", serde_json::to_string_pretty(&v).expect("serializable")))
}

fn dump_page(page: &E1Page) -> Result<Value, Error> {
    let mut lines = Vec::new();
    for (line, blocks) in &page.lines {
        let forms: Vec<Value> = blocks
            .iter()
            .map(|b| {
                json!({
                    "form": b.form,
                    "h0": b.homology.h0.len(),
                    "h1": b.homology.h1.len(),
                    "representatives": b.homology.h0_representatives.iter().map(q_json).collect::<Vec<_>>(),
                })
            })
            .collect();
        lines.push(json!({ "line": line, "blocks": forms }));
    }
    let mut diffs = Vec::new();
    let keys: Vec<i64> = page.lines.keys().copied().collect();
    for w in keys.windows(2) {
        for i in 0..=1 {
            let d = differential(page, w[0], i)?;
            let rows: Vec<Vec<Value>> = (0..d.matrix.rows())
                .map(|r| (0..d.matrix.cols()).map(|c| q_json(d.matrix.get(r, c))).collect())
                .collect();
            diffs.push(json!({
                "line": d.line,
                "degree": d.degree,
                "sign": d.sign,
                "rows": d.rows.iter().map(|(f, j)| json!([f, j])).collect::<Vec<_>>(),
                "cols": d.cols.iter().map(|(f, j)| json!([f, j])).collect::<Vec<_>>(),
                "matrix": rows,
            }));
        }
    }
    Ok(json!({ "lines": lines, "differentials": diffs }))
}

fn run_homology(
    profile: &ToricProfile,
    a: &str,
    b: &str,
    degrees: &str,
    dump: bool,
    margin: i64,
) -> Result<String, Error> {
    let (a, a_snapped) = if a.trim() == "delta" {
        (min_spec(profile) / Q::from_integer(2.into()), false)
    } else {
        snap_threshold(profile, &parse_q(a)?)?
    };
    let (b, b_snapped) = match parse_threshold(b)? {
        Threshold::Infinite => (Threshold::Infinite, false),
        Threshold::Finite(x) => {
            let (x, s) = snap_threshold(profile, &x)?;
            (Threshold::Finite(x), s)
        }
    };
    let degrees = parse_degrees(degrees)?;
    let window = Window::new(a, b)?;
    let lines = (degrees.start().div_euclid(2) - 1)..=(degrees.end().div_euclid(2) + 1);
    let page = assemble_e1_with_margin(profile, &window, lines, margin)?;
    let table = betti_from_page(&page, degrees)?;
    let mut v = json!({
        "window": table.window,
        "snapped": { "a": a_snapped, "b": b_snapped },
        "betti": table.betti.iter().map(|(n, b)| (n.to_string(), json!(b))).collect::<serde_json::Map<_, _>>(),
    });
    if dump {
        v["e1"] = dump_page(&page)?;
    }
    Ok(format!("{}\n", serde_json::to_string_pretty(&v).expect("serializable")))
}

fn run_capacities(
    profile: &ToricProfile,
    kmax: i64,
    method: Method,
    format: Format,
    float: bool,
) -> Result<String, Error> {
    if kmax < 1 {
        return Err(Error::InvalidParameter("kmax must be at least 1".into()));
    }
    let choice = method_choice(method);
    let results = (1..=kmax)
        .into_par_iter()
        .map(|k| capacity(profile, k, choice))
        .collect::<Result<Vec<_>, _>>()?;
    match format {
        Format::Csv => {
            let mut out = String::from("k,value_num,value_den,method,witness");
            if float {
                out.push_str(",value_float");
            }
            out.push('\n');
            for r in &results {
                out.push_str(&format!(
                    "{},{},{},{},\"{}\"",
                    r.k,
                    r.value.numer(),
                    r.value.denom(),
                    r.method.as_str(),
                    r.witness
                ));
                if float {
                    out.push_str(&format!(",{}", to_f64(&r.value)));
                }
                out.push('\n');
            }
            Ok(out)
        }
        Format::Json => Ok(format!(
            "{}\n",
            serde_json::to_string_pretty(&results).expect("serializable")
        )),
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    let out = match cli.command {
        Command::Spectrum { dom, amax, format, float } => {
            run_spectrum(&dom.load()?, &amax, format, float)?
        }
        Command::Sublevel { dom, form, a, b } => run_sublevel(&dom.load()?, &form, &a, b.as_deref())?,
        Command::Homology { dom, a, b, degrees, dump_e1, truncation_margin } => {
            run_homology(&dom.load()?, &a, &b, &degrees, dump_e1, truncation_margin)?
        }
        Command::Capacities { dom, kmax, method, csv, format, float } => {
            let text = run_capacities(&dom.load()?, kmax, method, format, float)?;
            if let Some(path) = csv {
                std::fs::write(&path, &text)
                    .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                String::new()
            } else {
                text
            }
        }
        Command::Verify { dom, inner, inner_preset, scale, kmax } => {
            let outer = dom.load()?;
            let inner = match (inner, inner_preset) {
                (Some(p), _) => load_profile(&p)?,
                (None, Some(p)) => preset(&p)?,
                (None, None) => outer.scale(&parse_q("1/2")?)?,
            };
            let report = verify_properties(&outer, &inner, &parse_q(&scale)?, kmax)?;
            format!("{}\n", serde_json::to_string_pretty(&report).expect("serializable"))
        }
        Command::Asymptotics { dom, kmax, method } => {
            let profile = dom.load()?;
            let limit = asymptotic_limit(&profile);
            let choice = method_choice(method);
            let ratios = (1..=kmax)
                .into_par_iter()
                .map(|k| {
                    capacity(&profile, k, choice).map(|r| {
                        let ratio = &r.value / Q::from_integer(k.into());
                        json!({ "k": k, "c_k": q_json(&r.value), "ratio": q_json(&ratio) })
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            let v = json!({ "limit": q_json(&limit), "ratios": ratios });
            format!("{}\n", serde_json::to_string_pretty(&v).expect("serializable"))
        }
    };
    let mut stdout = std::io::stdout().lock();
    stdout
        .write_all(out.as_bytes())
        .map_err(|e| Error::Io(e.to_string()))
}

fn error_json(e: &Error) -> Value {
    let mut v = json!({ "error": e.kind(), "message": e.to_string() });
    match e {
        Error::DegenerateEdge { form, edge } => {
            v["form"] = json!(form);
            v["edge"] = json!(edge);
        }
        Error::SpectrumBoundary { value } => v["value"] = q_json(value),
        _ => {}
    }
    v
}

fn main() -> ExitCode {
    if let Ok(n) = std::env::var("TORIC_CAP_THREADS") {
        match n.parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => {
                eprintln!("{}", json!({ "error": "invalid-parameter", "message": "TORIC_CAP_THREADS must be a positive integer" }));
                return ExitCode::from(1);
            }
        }
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", error_json(&e));
            let internal = matches!(e, Error::Contract(_) | Error::Truncation(_));
            ExitCode::from(if internal { 2 } else { 1 })
        }
    }
}

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use k3lat::e8::{self, OrbitClass};
use k3lat::expr::{self, EvalError, LatticeExpr, ParseError};
use k3lat::glue::{
    class_lines, coset_count_row, divisor_classes, hyperplane_multiplicity, nikulin_embeddable,
    nikulin_minus2_property, restricted_weight, BASE_WEIGHT,
};
use k3lat::report::{self, present_norm, rational_string, SCHEMA};
use k3lat::sbad::{is_sbad_extension, polarized_check, ExtensionWitness};
use k3lat::{Lattice, LatticeError};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "k3lat", version, about = "Exact computations with even lattices, E8 orbits and glue counts")]
struct Cli {
    /// Report norms in the positive-definite convention instead of the
    /// default negative one
    #[arg(long, global = true)]
    internal_norms: bool,
    /// Emit JSON (schema 1)
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Lattice invariants
    Lat {
        #[command(subcommand)]
        command: LatCommand,
    },
    /// Weyl orbits of E8 vectors
    E8 {
        #[command(subcommand)]
        command: E8Command,
    },
    /// Coset-count table: one row per E8 orbit of norm 2n
    Table {
        #[arg(long, default_value_t = 2)]
        from: i64,
        #[arg(long, default_value_t = 14)]
        to: i64,
        #[arg(long, value_enum, default_value_t = Format::Md)]
        format: Format,
    },
    /// Divisor classes and hyperplane multiplicities for orbits of norm 2N
    Divisors {
        #[arg(long, value_name = "2N")]
        norm: i64,
        /// 1-based orbit index, in the order listed by `e8 orbits`
        #[arg(long)]
        orbit: Option<usize>,
    },
    /// Weight of the restricted form for orbits of norm 2N
    Weight {
        #[arg(long, value_name = "2N")]
        norm: i64,
        /// 1-based orbit index, in the order listed by `e8 orbits`
        #[arg(long)]
        orbit: Option<usize>,
    },
    /// Embeddings into II(2,26)
    Embed {
        #[command(subcommand)]
        command: EmbedCommand,
    },
    /// Rank-one extensions of Picard lattices
    Sbad {
        #[command(subcommand)]
        command: SbadCommand,
    },
    /// Lorentzian lattices whose -2 vectors are all roots
    Minus2 {
        #[command(subcommand)]
        command: Minus2Command,
    },
}

#[derive(Subcommand)]
enum LatCommand {
    /// Rank, signature, determinant, discriminant group and roots
    Info {
        #[arg(allow_hyphen_values = true)]
        spec: String,
    },
}

#[derive(Subcommand)]
enum E8Command {
    /// List orbits of vectors of norm 2N
    Orbits {
        #[arg(long, value_name = "2N")]
        norm: i64,
    },
}

#[derive(Subcommand)]
enum EmbedCommand {
    /// Check the sufficient condition for a primitive embedding into II(2,26)
    Check {
        #[arg(allow_hyphen_values = true)]
        spec: String,
    },
}

#[derive(Subcommand)]
enum SbadCommand {
    /// Test a bordered gram file: S in the leading block, D in the last row
    Witness {
        #[arg(long)]
        gram: PathBuf,
    },
    /// Test a class D of degree K against a polarization of norm 2N
    Polarized {
        #[arg(long = "n")]
        n: i64,
        #[arg(long, allow_negative_numbers = true)]
        dnorm: i64,
        #[arg(long = "k", allow_negative_numbers = true)]
        k: i64,
    },
}

#[derive(Subcommand)]
enum Minus2Command {
    /// Decide the property for a Lorentzian lattice
    Property {
        #[arg(allow_hyphen_values = true)]
        spec: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Md,
    Csv,
    Json,
}

enum Failure {
    Usage(String),
    Domain(String),
}

impl From<LatticeError> for Failure {
    fn from(e: LatticeError) -> Self {
        match e {
            LatticeError::GramFile(_) => Failure::Usage(e.to_string()),
            other => Failure::Domain(other.to_string()),
        }
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<EvalError> for Failure {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::Lattice(inner) => inner.into(),
            io @ EvalError::Io { .. } => Failure::Usage(io.to_string()),
        }
    }
}

type Outcome = Result<String, Failure>;

struct Context {
    internal_norms: bool,
    json: bool,
}

impl Context {
    /// Present a norm given in the negative convention.
    fn norm(&self, negative: &BigRational) -> String {
        rational_string(&if self.internal_norms { -negative.clone() } else { negative.clone() })
    }

    /// Present a norm given in the positive convention.
    fn internal(&self, positive: &BigRational) -> String {
        rational_string(&present_norm(positive, self.internal_norms))
    }
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn int_json(v: &BigInt) -> Value {
    v.to_i64().map(Value::from).unwrap_or_else(|| Value::from(v.to_string()))
}

fn to_json(v: Value) -> String {
    let mut s = serde_json::to_string_pretty(&v).expect("json value serializes");
    s.push('\n');
    s
}

fn parse_spec(text: &str) -> Result<(LatticeExpr, Lattice), Failure> {
    let parsed = expr::parse(text)?;
    for w in parsed.warnings() {
        eprintln!("warning: {w}");
    }
    let lattice = parsed.evaluate()?;
    Ok((parsed, lattice))
}

fn selected_orbits(two_n: i64, index: Option<usize>) -> Result<Vec<(usize, OrbitClass)>, Failure> {
    let orbits = e8::orbits_of_norm(two_n)?;
    let count = orbits.len();
    let numbered = orbits.into_iter().enumerate().map(|(i, o)| (i + 1, o));
    match index {
        None => Ok(numbered.collect()),
        Some(i) if (1..=count).contains(&i) => Ok(numbered.filter(|(j, _)| *j == i).collect()),
        Some(i) => Err(Failure::Usage(format!(
            "orbit {i} out of range: norm {two_n} has {count} orbit(s)"
        ))),
    }
}

fn fmt_vector(v: &[i64]) -> String {
    let parts: Vec<String> = v.iter().map(i64::to_string).collect();
    format!("[{}]", parts.join(","))
}

fn lat_info(ctx: &Context, spec: &str) -> Outcome {
    let (parsed, l) = parse_spec(spec)?;
    let (pos, neg) = l.signature()?;
    let det = l.determinant();
    let disc = l.discriminant_group()?;
    let divisors: Vec<&BigInt> = disc.divisors.iter().filter(|d| **d > 1.into()).collect();
    let roots = if pos == 0 || neg == 0 {
        Some(k3lat::enumerate::root_count(&l)?)
    } else {
        None
    };
    if ctx.json {
        return Ok(to_json(json!({
            "schema": SCHEMA,
            "lattice": parsed.to_string(),
            "rank": l.rank(),
            "signature": [pos, neg],
            "determinant": int_json(&det),
            "even": l.is_even(),
            "discriminant_divisors": divisors.iter().map(|d| int_json(d)).collect::<Vec<_>>(),
            "discriminant_order": int_json(&disc.order),
            "roots": roots,
        })));
    }
    let group = if divisors.is_empty() {
        "trivial".to_string()
    } else {
        let factors: Vec<String> = divisors.iter().map(|d| format!("Z/{d}")).collect();
        format!("{} (order {})", factors.join(" x "), disc.order)
    };
    let roots = match roots {
        Some(r) => r.to_string(),
        None => "n/a (indefinite)".to_string(),
    };
    Ok(format!(
        "lattice       {parsed}\nrank          {}\nsignature     ({pos}, {neg})\ndeterminant   {det}\neven          {}\ndiscriminant  {group}\nroots         {roots}\n",
        l.rank(),
        l.is_even(),
    ))
}

fn e8_orbits(ctx: &Context, two_n: i64) -> Outcome {
    let orbits = selected_orbits(two_n, None)?;
    let norm = ctx.internal(&rat(two_n));
    if ctx.json {
        let list: Vec<Value> = orbits
            .iter()
            .map(|(i, o)| {
                json!({
                    "index": i,
                    "representative": o.representative,
                    "primitive": o.primitive,
                    "content": o.content(),
                    "orbit_size": o.orbit_size,
                    "complement_roots": o.root_count,
                })
            })
            .collect();
        return Ok(to_json(json!({
            "schema": SCHEMA,
            "two_n": two_n,
            "norm": norm,
            "orbits": list,
        })));
    }
    let total: u64 = orbits.iter().map(|(_, o)| o.orbit_size).sum();
    let mut out = format!(
        "E8 vectors of norm {norm}: {total} in {} orbit(s)\n{:<3} {:<27} {:<10} {:>10} {:>6}\n",
        orbits.len(),
        "#",
        "representative",
        "primitive",
        "size",
        "roots"
    );
    for (i, o) in &orbits {
        out.push_str(&format!(
            "{:<3} {:<27} {:<10} {:>10} {:>6}\n",
            i,
            fmt_vector(&o.representative),
            if o.primitive { "yes".to_string() } else { format!("no (x{})", o.content()) },
            o.orbit_size,
            o.root_count
        ));
    }
    Ok(out)
}

fn table(ctx: &Context, from: i64, to: i64, format: Format) -> Outcome {
    let rows = report::table_rows(from, to)?;
    Ok(match (format, ctx.json) {
        (Format::Json, _) | (_, true) => {
            let mut s = report::table_json(&rows);
            s.push('\n');
            s
        }
        (Format::Csv, false) => report::table_csv(&rows),
        (Format::Md, false) => report::table_markdown(&rows),
    })
}

fn divisors(ctx: &Context, two_n: i64, index: Option<usize>) -> Outcome {
    let mut text = String::new();
    let mut json_orbits = Vec::new();
    for (i, o) in selected_orbits(two_n, index)? {
        let row = coset_count_row(&o)?;
        let classes = divisor_classes(&row);
        let mut reports = Vec::new();
        for (k, t_norm) in class_lines(&row) {
            reports.push(hyperplane_multiplicity(&row, k, &t_norm)?);
        }
        if ctx.json {
            json_orbits.push(json!({
                "index": i,
                "representative": o.representative,
                "primitive": o.primitive,
                "roots": o.root_count,
                "caveat": (!o.primitive).then_some(report::NON_PRIMITIVE_CAVEAT),
                "classes": classes.iter().map(|c| json!({
                    "k": c.k,
                    "norm": ctx.norm(&c.norm),
                    "t_norm": ctx.norm(&c.t_norm),
                    "count": c.count,
                    "vanishing": c.vanishing,
                })).collect::<Vec<_>>(),
                "multiplicities": reports.iter().map(|r| json!({
                    "label": r.label,
                    "norm": ctx.norm(&r.norm),
                    "t0": r.t0.coords.iter().map(rational_string).collect::<Vec<_>>(),
                    "contributions": r.contributions.iter().map(|c| json!({
                        "scale": c.scale,
                        "norm": ctx.norm(&c.norm),
                        "label": c.label,
                        "count": c.count,
                    })).collect::<Vec<_>>(),
                    "total": r.total_multiplicity,
                })).collect::<Vec<_>>(),
            }));
            continue;
        }
        text.push_str(&format!(
            "orbit {i} of norm {two_n}: {} roots, representative {}\n",
            o.root_count,
            fmt_vector(&o.representative)
        ));
        if !o.primitive {
            text.push_str(&format!("  note: {}\n", report::NON_PRIMITIVE_CAVEAT));
        }
        text.push_str("  divisor classes (label, U' norm, T' norm, count):\n");
        if classes.is_empty() {
            text.push_str("    none\n");
        }
        for c in &classes {
            text.push_str(&format!(
                "    k={:<3} {:>6} {:>6} {:>5}{}\n",
                c.k,
                ctx.norm(&c.norm),
                ctx.norm(&c.t_norm),
                c.count,
                if c.vanishing { "  vanishing" } else { "" }
            ));
        }
        text.push_str("  hyperplane multiplicities:\n");
        for r in &reports {
            let parts: Vec<String> = r
                .contributions
                .iter()
                .map(|c| format!("c={}: {}", c.scale, c.count))
                .collect();
            text.push_str(&format!(
                "    k={:<3} norm {:>6}  multiplicity {} ({})\n",
                r.label,
                ctx.norm(&r.norm),
                r.total_multiplicity,
                parts.join(", ")
            ));
        }
    }
    if ctx.json {
        return Ok(to_json(json!({ "schema": SCHEMA, "two_n": two_n, "orbits": json_orbits })));
    }
    Ok(text)
}

fn weight(ctx: &Context, two_n: i64, index: Option<usize>) -> Outcome {
    let orbits = selected_orbits(two_n, index)?;
    let mut entries = Vec::new();
    for (i, o) in &orbits {
        entries.push((*i, o, restricted_weight(&o.complement)?));
    }
    if ctx.json {
        let list: Vec<Value> = entries
            .iter()
            .map(|(i, o, w)| json!({ "index": i, "roots": o.root_count, "weight": w }))
            .collect();
        return Ok(to_json(json!({ "schema": SCHEMA, "two_n": two_n, "weights": list })));
    }
    if let [(_, o, w)] = entries.as_slice() {
        return Ok(format!("{BASE_WEIGHT} + {}/2 = {w}\n", o.root_count));
    }
    Ok(entries
        .iter()
        .map(|(i, o, w)| format!("orbit {i}: {BASE_WEIGHT} + {}/2 = {w}\n", o.root_count))
        .collect())
}

fn embed_check(ctx: &Context, spec: &str) -> Outcome {
    let (parsed, l) = parse_spec(spec)?;
    let r = nikulin_embeddable(&l)?;
    if ctx.json {
        return Ok(to_json(json!({
            "schema": SCHEMA,
            "lattice": parsed.to_string(),
            "rank": r.rank,
            "negative_index": r.negative_index,
            "discriminant_length": r.discriminant_length,
            "target_dim": r.target_dim,
            "embeddable": r.embeddable,
        })));
    }
    Ok(format!(
        "lattice              {parsed}\nsignature            (2, {})\ndiscriminant length  {}\ncondition            {} <= {} and {} + {} = {} < {}\nembeddable           {}\n",
        r.negative_index,
        r.discriminant_length,
        r.negative_index,
        r.target_dim - 2,
        r.discriminant_length,
        r.rank,
        r.discriminant_length + r.rank,
        r.target_dim,
        r.embeddable
    ))
}

fn sbad_witness(ctx: &Context, path: &PathBuf) -> Outcome {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("reading {}: {e}", path.display())))?;
    let s1 = Lattice::from_gram_text(&text)?;
    let w = ExtensionWitness::from_bordered(&s1)?;
    let v = is_sbad_extension(&w)?;
    if ctx.json {
        return Ok(to_json(json!({
            "schema": SCHEMA,
            "det_s": int_json(&v.det_s),
            "det_s1": int_json(&v.det_s1),
            "signature_s1": [v.signature_s1.0, v.signature_s1.1],
            "sbad": v.sbad,
        })));
    }
    Ok(format!(
        "det S         {}\ndet S1        {}\nsignature S1  ({}, {})\nbound         |det S1| = {} <= 2 |det S| = {}\nS-bad         {}\n",
        v.det_s,
        v.det_s1,
        v.signature_s1.0,
        v.signature_s1.1,
        v.det_s1.magnitude(),
        v.det_s.magnitude() * 2u32,
        v.sbad
    ))
}

fn sbad_polarized(ctx: &Context, n: i64, d_norm: i64, k: i64) -> Outcome {
    let c = polarized_check(n, d_norm, k)?;
    if ctx.json {
        return Ok(to_json(json!({
            "schema": SCHEMA,
            "n": c.n,
            "d_norm": c.d_norm,
            "k": c.k,
            "projected": rational_string(&c.projected),
            "bad": c.bad,
        })));
    }
    let p = rational_string(&c.projected);
    Ok(format!(
        "D^2 - k^2/2n = {d_norm} - {}/{} = {p}\n-2 <= {p} < 0: {}\n",
        k * k,
        2 * n,
        c.bad
    ))
}

fn minus2_property(ctx: &Context, spec: &str) -> Outcome {
    let (parsed, l) = parse_spec(spec)?;
    let holds = nikulin_minus2_property(&l)?;
    if ctx.json {
        return Ok(to_json(json!({
            "schema": SCHEMA,
            "lattice": parsed.to_string(),
            "property": holds,
        })));
    }
    Ok(format!("{holds}\n"))
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(value) = std::env::var("K3LAT_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .map_err(|_| Failure::Usage(format!("K3LAT_THREADS must be a non-negative integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Usage(e.to_string()))
}

fn run(cli: Cli) -> Outcome {
    configure_threads()?;
    let ctx = Context {
        internal_norms: cli.internal_norms,
        json: cli.json,
    };
    match cli.command {
        Command::Lat { command: LatCommand::Info { spec } } => lat_info(&ctx, &spec),
        Command::E8 { command: E8Command::Orbits { norm } } => e8_orbits(&ctx, norm),
        Command::Table { from, to, format } => table(&ctx, from, to, format),
        Command::Divisors { norm, orbit } => divisors(&ctx, norm, orbit),
        Command::Weight { norm, orbit } => weight(&ctx, norm, orbit),
        Command::Embed { command: EmbedCommand::Check { spec } } => embed_check(&ctx, &spec),
        Command::Sbad { command: SbadCommand::Witness { gram } } => sbad_witness(&ctx, &gram),
        Command::Sbad { command: SbadCommand::Polarized { n, dnorm, k } } => sbad_polarized(&ctx, n, dnorm, k),
        Command::Minus2 { command: Minus2Command::Property { spec } } => minus2_property(&ctx, &spec),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

//! Command implementations behind the `seccache` binary.
//!
//! Every command is a pure function of its [`RunConfig`]: the same config
//! always produces byte-identical output.

mod config;

use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde_json::{json, Map, Value};

use seccache_core::analysis::{
    bounds_row, compare_same_access, compare_same_cache, curve, curve_secrecy_privacy, decimal, feasibility_floor,
    sample_envelope, CompareRow, PointLabel, RateMemoryPoint,
};
use seccache_core::combinatorics::format_subset;
use seccache_core::field::modulus_table_rows;
use seccache_core::scheme::{
    decode, deliver, draw_randomness, dump_broadcast, dump_caches, place, DemandVector, Library, SchemeParams,
    Topology, Variant,
};
use seccache_core::verifier::{verify_all, Fault, SuiteOptions, VerificationReport};
use seccache_core::Rational;

pub use config::{Cli, Command, Format, Mode, OneOrMany, RunConfig, TSelect};

/// Exit status for a run whose verification checks failed.
pub const EXIT_VERIFICATION_FAILURE: i32 = 1;
/// Exit status for invalid arguments or configurations.
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, PartialEq)]
enum Cell {
    Text(String),
    Int(u128),
    Num(Rational),
    Float(Option<f64>),
    Bool(bool),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Int(x) => x.to_string(),
            Cell::Num(q) => decimal(*q),
            Cell::Float(Some(x)) => format!("{x}"),
            Cell::Bool(b) => b.to_string(),
            Cell::Float(None) | Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Text(s) => json!(s),
            Cell::Int(x) => json!(*x as u64),
            Cell::Num(q) => json!(decimal(*q).parse::<f64>().expect("decimal renders a float")),
            Cell::Float(Some(x)) => json!(x),
            Cell::Bool(b) => json!(b),
            Cell::Float(None) | Cell::Empty => Value::Null,
        }
    }
}

fn opt(q: Option<Rational>) -> Cell {
    q.map_or(Cell::Empty, Cell::Num)
}

struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    fn new(header: &[&'static str]) -> Self {
        Self { header: header.to_vec(), rows: Vec::new() }
    }

    fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Csv => {
                let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
                w.write_record(&self.header)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(Cell::csv))?;
                }
                Ok(String::from_utf8(w.into_inner()?)?)
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let obj: Map<String, Value> =
                            self.header.iter().zip(row).map(|(k, v)| (k.to_string(), v.json())).collect();
                        Value::Object(obj)
                    })
                    .collect();
                Ok(serde_json::to_string_pretty(&rows)? + "\n")
            }
        }
    }
}

/// Runs one command, writing its primary output to `stdout` unless `--out`
/// names a file. Returns the process exit status.
pub fn execute(config: &RunConfig, stdout: &mut dyn Write) -> Result<i32> {
    let command = config.command()?;
    let (text, status) = match command {
        Command::Tradeoff => (tradeoff_table(config)?.render(config.format())?, 0),
        Command::Bounds => (bounds_table(config)?.render(config.format())?, 0),
        Command::Compare => (compare_table(config)?.render(config.format())?, 0),
        Command::FieldTable => (field_table().render(config.format())?, 0),
        Command::Verify => verify(config)?,
        Command::Simulate => (simulate(config)?, 0),
        Command::Figures => {
            let dir = config.out.as_deref().context("figures needs --out <directory>")?;
            figures(dir)?;
            return Ok(0);
        }
    };
    // `simulate` treats --out as its dump directory and keeps the decode table on stdout.
    match (&config.out, command) {
        (Some(path), c) if c != Command::Simulate => {
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))?
        }
        _ => stdout.write_all(text.as_bytes())?,
    }
    Ok(status)
}

fn variants(config: &RunConfig, r: usize) -> Result<Vec<Variant>> {
    let name = config.variant.as_deref().unwrap_or("all");
    Ok(match name {
        "all" if r == 1 => vec![Variant::SecrecyPrivacy, Variant::SecrecyOnly, Variant::DedicatedRpkp],
        "all" | "both" => vec![Variant::SecrecyPrivacy, Variant::SecrecyOnly],
        other => vec![other.parse().map_err(anyhow::Error::from)?],
    })
}

fn topology(config: &RunConfig) -> Result<(usize, usize, usize)> {
    let (c, r, n) = (config.caches()?, config.access()?, config.files()?);
    Topology::new(c, r, n)?;
    Ok((c, r, n))
}

fn tradeoff_table(config: &RunConfig) -> Result<Table> {
    let (c, r, n) = topology(config)?;
    let t_filter = config.t()?;
    if let Some(t) = t_filter {
        if t > c - r {
            bail!("--t {t} is outside [0, C-r] = [0, {}]", c - r);
        }
    }
    let mut table = Table::new(&["variant", "C", "r", "N", "t", "M", "R"]);
    let mut push = |p: &RateMemoryPoint| {
        let t = match p.t {
            PointLabel::Scheme(t) => Cell::Int(t as u128),
            PointLabel::Interpolated => Cell::Text("interpolated".into()),
        };
        table.rows.push(vec![
            Cell::Text(p.variant.name().into()),
            Cell::Int(c as u128),
            Cell::Int(r as u128),
            Cell::Int(n as u128),
            t,
            Cell::Num(p.m),
            Cell::Num(p.r),
        ]);
    };
    for v in variants(config, r)? {
        let cv = curve(v, c, r, n)?;
        for p in cv.points.iter().filter(|p| t_filter.is_none_or(|t| p.t == PointLabel::Scheme(t))) {
            push(p);
        }
        if let (Some(k), None) = (config.samples, t_filter) {
            for p in sample_envelope(&cv, k).iter().filter(|p| p.t == PointLabel::Interpolated) {
                push(p);
            }
        }
    }
    Ok(table)
}

/// Parses `13`, `27/2` or `20.5` exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let (a, b): (i128, i128) = (a.trim().parse()?, b.trim().parse()?);
        if b == 0 {
            bail!("zero denominator in {s:?}");
        }
        return Ok(Rational::new(a, b));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let digits = frac.len() as u32;
        if digits > 18 || !frac.chars().all(|ch| ch.is_ascii_digit()) {
            bail!("cannot parse {s:?} as a decimal");
        }
        let scale = 10i128.pow(digits);
        let neg = whole.starts_with('-');
        let w: i128 = if whole.is_empty() || whole == "-" { 0 } else { whole.parse()? };
        let f: i128 = if frac.is_empty() { 0 } else { frac.parse()? };
        let num = w.abs() * scale + f;
        return Ok(Rational::new(if neg { -num } else { num }, scale));
    }
    Ok(Rational::from_integer(s.parse().with_context(|| format!("cannot parse {s:?} as a number"))?))
}

fn bounds_table(config: &RunConfig) -> Result<Table> {
    let (c, r, n) = topology(config)?;
    let mut grid: Vec<Rational> = curve_secrecy_privacy(c, r, n)?.envelope.iter().map(|p| p.m).collect();
    if r < c {
        grid.push(feasibility_floor(c, r, n)?);
    }
    for g in config.grid.iter().flatten() {
        grid.push(parse_rational(g)?);
    }
    grid.sort();
    grid.dedup();
    let mut table = Table::new(&["C", "r", "N", "M", "lower_bound", "achievable", "ratio", "regime"]);
    for m in grid {
        let row = bounds_row(c, r, n, m)?;
        table.rows.push(vec![
            Cell::Int(c as u128),
            Cell::Int(r as u128),
            Cell::Int(n as u128),
            Cell::Num(m),
            opt(row.lower_bound),
            opt(row.achievable),
            opt(row.ratio),
            Cell::Text(row.regime),
        ]);
    }
    Ok(table)
}

fn compare_rows(mode: Mode, c: usize, n: usize, r_list: &[usize]) -> Result<Vec<CompareRow>> {
    Ok(match mode {
        Mode::SameCache => compare_same_cache(c, n, r_list)?,
        Mode::SameAccess => compare_same_access(c, n, r_list)?,
    })
}

fn compare_table_for(mode: Mode, c: usize, n: usize, r_list: &[usize]) -> Result<Table> {
    let mut table = Table::new(&["mode", "C", "N", "r", "M_axis", "RPU"]);
    for row in compare_rows(mode, c, n, r_list)? {
        table.rows.push(vec![
            Cell::Text(row.mode.to_string()),
            Cell::Int(c as u128),
            Cell::Int(n as u128),
            Cell::Int(row.r as u128),
            Cell::Num(row.m_axis),
            Cell::Num(row.rpu),
        ]);
    }
    Ok(table)
}

fn compare_table(config: &RunConfig) -> Result<Table> {
    let (c, n) = (config.caches()?, config.files()?);
    let r_list = config.access_list().unwrap_or_else(|| (1..=c.min(3)).collect());
    compare_table_for(config.mode.unwrap_or_default(), c, n, &r_list)
}

fn field_table() -> Table {
    let mut table = Table::new(&["l", "modulus_hex"]);
    for (l, modulus) in modulus_table_rows() {
        table.rows.push(vec![Cell::Int(u128::from(l)), Cell::Text(format!("0x{modulus:x}"))]);
    }
    table
}

fn scheme_params(config: &RunConfig, variant: Variant, t: usize) -> Result<SchemeParams> {
    let (c, r, n) = topology(config)?;
    Ok(SchemeParams::new(Topology::new(c, r, n)?, t, variant, config.s.unwrap_or(1))?)
}

fn single_variant(config: &RunConfig) -> Result<Variant> {
    Ok(config.variant.as_deref().unwrap_or("secrecy_privacy").parse()?)
}

fn verify(config: &RunConfig) -> Result<(String, i32)> {
    let (c, r, _) = topology(config)?;
    let vs = match config.variant.as_deref() {
        Some("both" | "all") => vec![Variant::SecrecyPrivacy, Variant::SecrecyOnly],
        _ => vec![single_variant(config)?],
    };
    let ts: Vec<usize> = match config.t()? {
        Some(t) => vec![t],
        None => (0..=c - r).collect(),
    };
    let fault: Fault = config.fault.as_deref().unwrap_or("none").parse()?;
    let options = SuiteOptions { trials: config.trials.unwrap_or(100), seed: config.seed(), fault };
    let mut reports: Vec<VerificationReport> = Vec::new();
    for v in vs {
        for &t in &ts {
            reports.extend(verify_all(&scheme_params(config, v, t)?, options)?);
        }
    }
    let status = if reports.iter().any(VerificationReport::is_failure) { EXIT_VERIFICATION_FAILURE } else { 0 };
    let text = match config.format {
        Some(Format::Csv) => {
            let mut table =
                Table::new(&["check", "instance", "size", "outcome", "distance", "witness", "expected_fail"]);
            for rep in &reports {
                table.rows.push(vec![
                    Cell::Text(rep.check.clone()),
                    Cell::Text(rep.instance.clone()),
                    Cell::Int(rep.size),
                    Cell::Text(serde_json::to_value(rep.outcome)?.as_str().unwrap_or_default().into()),
                    Cell::Float(rep.distance),
                    rep.witness.clone().map_or(Cell::Empty, Cell::Text),
                    Cell::Bool(rep.expected_fail),
                ]);
            }
            table.render(Format::Csv)?
        }
        _ => serde_json::to_string_pretty(&reports)? + "\n",
    };
    Ok((text, status))
}

fn simulate(config: &RunConfig) -> Result<String> {
    let t = config.t()?.context("simulate needs a single --t")?;
    let params = scheme_params(config, single_variant(config)?, t)?;
    let seed = config.seed();
    let library = Library::random(&params, seed);
    let randomness = draw_randomness(&params, seed.wrapping_add(1));
    let demands = match &config.demands {
        Some(d) => DemandVector::new(&params, d.clone())?,
        None => DemandVector::random(&params, seed.wrapping_add(2)),
    };
    let placement = place(&params, &library, &randomness)?;
    let bc = deliver(&params, &randomness, &placement.shares, &demands)?;

    let mut decoded = Table::new(&["user", "demand", "status"]);
    let mut ok = 0;
    for (gi, g) in params.users().enumerate() {
        let want = demands.of(gi);
        let status = match decode(&params, g, &bc, &placement.caches_of(g), want, Some(&demands)) {
            Ok(out) if out == library.file(want) => "ok".to_string(),
            Ok(_) => "mismatch".to_string(),
            Err(e) => format!("error: {e}"),
        };
        ok += usize::from(status == "ok");
        decoded.rows.push(vec![Cell::Text(format_subset(g)), Cell::Int(want as u128), Cell::Text(status)]);
    }
    let decode_csv = decoded.render(Format::Csv)?;

    if let Some(dir) = &config.out {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let records: Vec<_> =
            dump_caches(&params, &placement.caches).into_iter().chain(dump_broadcast(&params, &bc)).collect();
        let mut manifest = Table::new(&["entity", "index_set", "length_symbols"]);
        let mut hex = String::new();
        let l = params.spec().degree();
        for rec in &records {
            manifest.rows.push(vec![
                Cell::Text(rec.entity.into()),
                Cell::Text(rec.index_set.clone()),
                Cell::Int(rec.symbols.len() as u128),
            ]);
            hex.push_str(&rec.hex(l));
            hex.push('\n');
        }
        let cache_size = placement.caches.first().map(|z| z.size_in_files(&params)).unwrap_or_default();
        let summary = json!({
            "instance": format!("{} t={} variant={} s={}", params.topology(), t, params.variant(), params.s()),
            "seed": seed,
            "demands": demands.as_slice(),
            "n": params.sharing().n(),
            "m": params.sharing().m(),
            "l": l,
            "modulus_hex": format!("0x{:x}", params.spec().modulus()),
            "payloads": bc.payloads.len(),
            "rate": decimal(bc.rate(&params)),
            "cache_size": decimal(cache_size),
            "overhead_bits": bc.overhead_bits(),
            "users": params.topology().users(),
            "decoded_ok": ok,
        });
        fs::write(dir.join("manifest.csv"), manifest.render(Format::Csv)?)?;
        fs::write(dir.join("dump.hex"), hex)?;
        fs::write(dir.join("decode.csv"), &decode_csv)?;
        fs::write(dir.join("summary.json"), serde_json::to_string_pretty(&summary)? + "\n")?;
    }
    Ok(decode_csv)
}

/// CSVs for the standard figure set, by file name.
pub fn figure_tables() -> Result<Vec<(&'static str, String)>> {
    let tradeoff = |c: usize, r: usize, n: usize, variant: &str| -> Result<String> {
        let cfg = RunConfig {
            c: Some(c),
            r: Some(OneOrMany::One(r)),
            n: Some(n),
            variant: Some(variant.into()),
            ..RunConfig::default()
        };
        tradeoff_table(&cfg)?.render(Format::Csv)
    };
    let compare = |mode, n| compare_table_for(mode, 5, n, &[1, 2, 3])?.render(Format::Csv);
    Ok(vec![
        ("fig2_tradeoff_C5_r1_N7.csv", tradeoff(5, 1, 7, "all")?),
        ("fig3_tradeoff_C5_r2_N15.csv", tradeoff(5, 2, 15, "both")?),
        ("fig4_same_cache_C5_N10.csv", compare(Mode::SameCache, 10)?),
        ("fig5_same_cache_C5_N50.csv", compare(Mode::SameCache, 50)?),
        ("fig7_same_access_C5_N50.csv", compare(Mode::SameAccess, 50)?),
        ("fig8_same_access_C5_N10.csv", compare(Mode::SameAccess, 10)?),
    ])
}

fn figures(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    for (name, text) in figure_tables()? {
        fs::write(dir.join(name), text)?;
    }
    Ok(())
}

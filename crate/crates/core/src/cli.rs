//! The `serreloc` command line.
//!
//! Exit codes: 0 success, 1 a suite failed, 2 usage (bad flags, unknown
//! suite or object), 3 spec parse or resolution, 4 requirement unmet,
//! 5 any other library error. Every error is printed on one line as
//! `error[<tag>]: <reason>`.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::abcat::{factor_counts, hom_basis, Backend, Mor, Obj};
use crate::error::Error;
use crate::exactlin::Mat;
use crate::ideal;
use crate::quotient::{q_length, qhom_basis};
use crate::serre::SerreSpec;
use crate::spec::{self, Loaded, SpecError};
use crate::verify::{self, Execution, Suite, SuiteReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_SUITE_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_REQUIREMENT: i32 = 4;
pub const EXIT_INTERNAL: i32 = 5;

#[derive(Parser, Debug)]
#[command(name = "serreloc", version, about = "Quotients of finite abelian categories by Serre subcategories")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Override the spec's Serre subcategory (comma-separated simple labels; "" for zero).
    #[arg(long, global = true, value_name = "LABELS")]
    pub serre: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Simples, unit decomposition and component grid.
    Analyze { spec: String },
    /// Hom in the quotient category, with a basis of representatives.
    Qhom { spec: String, m: String, n: String },
    /// Length in A and in A/C.
    Length { spec: String, x: String },
    /// All two-sided Serre tensor-ideals.
    ClassifyIdeals { spec: String },
    /// Smallest tensor-ideal containing the given simples.
    Closure {
        spec: String,
        #[arg(long, value_delimiter = ',', required = true)]
        simples: Vec<String>,
    },
    /// A simple B in C with B*⊗B outside C, or none.
    Obstruction { spec: String },
    /// Run property suites.
    Verify {
        spec: String,
        /// Suite name or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Run trials on one thread.
        #[arg(long)]
        sequential: bool,
        /// Include wall time in text output.
        #[arg(long)]
        timings: bool,
    },
}

/// A failure with its exit code and machine tag.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub tag: &'static str,
    pub message: String,
}

impl CliError {
    fn line(&self) -> String {
        format!("error[{}]: {}", self.tag, self.message.replace('\n', " "))
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let (code, tag) = match &e {
            Error::RequirementUnmet(_) => (EXIT_REQUIREMENT, "requirement_unmet"),
            Error::NotTensorIdeal(_) => (EXIT_REQUIREMENT, "not_tensor_ideal"),
            Error::UnknownSuite(_) => (EXIT_USAGE, "unknown_suite"),
            Error::UnknownLabel(_) => (EXIT_PARSE, "unresolved_label"),
            Error::InvalidBackend(_) => (EXIT_PARSE, "invalid_backend"),
            Error::InvalidObject(_) => (EXIT_PARSE, "invalid_object"),
            _ => (EXIT_INTERNAL, "internal"),
        };
        CliError {
            code,
            tag,
            message: e.to_string(),
        }
    }
}

impl From<SpecError> for CliError {
    fn from(e: SpecError) -> Self {
        let (code, tag) = match &e {
            SpecError::Core(inner) => return CliError::from(inner.clone()),
            SpecError::Io { .. } => (EXIT_PARSE, "io"),
            SpecError::Syntax { .. } => (EXIT_PARSE, "parse"),
            SpecError::Invalid(_) => (EXIT_PARSE, "invalid_spec"),
            SpecError::UnresolvedLabel(_) => (EXIT_PARSE, "unresolved_label"),
            SpecError::EmptyBackend => (EXIT_PARSE, "empty_backend"),
            SpecError::UnknownObject(_) => (EXIT_USAGE, "unknown_object"),
        };
        CliError {
            code,
            tag,
            message: e.to_string(),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses `args` (including the program name), runs the command and returns
/// the exit code. Reports go to `out`, errors to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(out, "{rendered}");
            } else {
                let first = rendered.lines().next().unwrap_or("").trim_start_matches("error: ");
                let _ = writeln!(err, "error[usage]: {first}");
            }
            return code;
        }
    };
    match execute(&cli) {
        Ok((text, code)) => {
            let _ = write!(out, "{text}");
            code
        }
        Err(e) => {
            let _ = writeln!(err, "{}", e.line());
            e.code
        }
    }
}

fn load(cli: &Cli, source: &str) -> CliResult<Loaded> {
    let loaded = spec::load(source)?;
    Ok(match &cli.serre {
        Some(labels) => {
            let list: Vec<&str> = labels.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
            loaded.with_serre(&list)?
        }
        None => loaded,
    })
}

fn execute(cli: &Cli) -> CliResult<(String, i32)> {
    let json_mode = cli.format == Format::Json;
    let render = |v: Value, text: String| -> String {
        if json_mode {
            let mut s = serde_json::to_string_pretty(&v).expect("json values serialize");
            s.push('\n');
            s
        } else {
            text
        }
    };
    match &cli.command {
        Command::Analyze { spec } => {
            let l = load(cli, spec)?;
            let (v, t) = analyze(&l)?;
            Ok((render(v, t), EXIT_OK))
        }
        Command::Qhom { spec, m, n } => {
            let l = load(cli, spec)?;
            let (v, t) = qhom(&l, m, n)?;
            Ok((render(v, t), EXIT_OK))
        }
        Command::Length { spec, x } => {
            let l = load(cli, spec)?;
            let (v, t) = length(&l, x)?;
            Ok((render(v, t), EXIT_OK))
        }
        Command::ClassifyIdeals { spec } => {
            let l = load(cli, spec)?;
            let (v, t) = classify(&l.backend)?;
            Ok((render(v, t), EXIT_OK))
        }
        Command::Closure { spec, simples } => {
            let l = load(cli, spec)?;
            let (v, t) = closure(&l.backend, simples)?;
            Ok((render(v, t), EXIT_OK))
        }
        Command::Obstruction { spec } => {
            let l = load(cli, spec)?;
            let (v, t) = obstruction(&l.serre)?;
            Ok((render(v, t), EXIT_OK))
        }
        Command::Verify {
            spec,
            suite,
            trials,
            seed,
            sequential,
            timings,
        } => {
            // the suite name is checked before the spec is read
            let chosen: Option<Suite> = if suite == "all" { None } else { Some(suite.parse()?) };
            let l = load(cli, spec)?;
            let exec = if *sequential { Execution::Sequential } else { Execution::Parallel };
            let reports = match chosen {
                None => verify::run_all_with(&l.serre, *trials, *seed, exec),
                Some(s) => vec![verify::run_suite_with(s, &l.serre, *trials, *seed, exec)?],
            };
            let pass = reports.iter().all(|r| r.pass);
            let v = json!({ "pass": pass, "reports": reports });
            let text = verify_text(&reports, *timings);
            Ok((render(v, text), if pass { EXIT_OK } else { EXIT_SUITE_FAILED }))
        }
    }
}

fn labels_of(b: &Backend, set: impl IntoIterator<Item = usize>) -> Vec<String> {
    set.into_iter().map(|s| b.simple_label(s).to_string()).collect()
}

fn braces(items: &[String]) -> String {
    format!("{{{}}}", items.join(", "))
}

fn analyze(l: &Loaded) -> CliResult<(Value, String)> {
    let b = &l.backend;
    let simples = labels_of(b, 0..b.simple_count());
    let serre = l.serre.labels();
    let mut t = String::new();
    writeln!(t, "backend: {}", b.name()).unwrap();
    writeln!(t, "simples ({}): {}", simples.len(), simples.join(" ")).unwrap();
    writeln!(t, "serre: {}", braces(&serre)).unwrap();
    let mut v = json!({
        "backend": b.name(),
        "kind": b.kind(),
        "field": b.field().to_string(),
        "simples": simples,
        "serre": serre,
        "tensor": b.tensor_capable(),
    });
    if b.tensor_capable() {
        let grid = ideal::component_grid(b)?;
        let units = labels_of(b, grid.summands.iter().copied());
        writeln!(t, "unit summands ({}): {}", units.len(), units.join(" ")).unwrap();
        let blocks = grid_blocks(&grid);
        let shown: Vec<String> = blocks
            .iter()
            .map(|blk| braces(&blk.iter().map(|&i| units[i].clone()).collect::<Vec<_>>()))
            .collect();
        writeln!(
            t,
            "component grid ({0}x{0}, block-diagonal with {1} blocks: {2}):",
            grid.size(),
            blocks.len(),
            shown.join(" ")
        )
        .unwrap();
        let cells: Vec<Vec<Vec<String>>> = grid
            .cells
            .iter()
            .map(|row| row.iter().map(|c| labels_of(b, c.iter().copied())).collect())
            .collect();
        for (i, row) in cells.iter().enumerate() {
            let shown: Vec<String> = row
                .iter()
                .map(|c| if c.is_empty() { "0".to_string() } else { c.join("+") })
                .collect();
            writeln!(t, "  [{}] {}", units[i], shown.join(" | ")).unwrap();
        }
        v["unit_summands"] = json!(units);
        v["grid"] = json!(cells);
        v["grid_blocks"] = json!(blocks);
    } else {
        writeln!(t, "unit: none (no tensor product)").unwrap();
    }
    Ok((v, t))
}

/// Summand indices grouped into the connected components of the nonzero
/// cells; the grid is block-diagonal with respect to this grouping.
fn grid_blocks(grid: &ideal::ComponentGrid) -> Vec<Vec<usize>> {
    let n = grid.size();
    let mut comp: Vec<usize> = (0..n).collect();
    fn find(c: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while c[r] != r {
            r = c[r];
        }
        c[i] = r;
        r
    }
    for i in 0..n {
        for j in 0..n {
            if grid.is_nonzero(i, j) {
                let (a, b) = (find(&mut comp, i), find(&mut comp, j));
                comp[a.max(b)] = a.min(b);
            }
        }
    }
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut roots: Vec<usize> = Vec::new();
    for i in 0..n {
        let r = find(&mut comp, i);
        match roots.iter().position(|&x| x == r) {
            Some(k) => out[k].push(i),
            None => {
                roots.push(r);
                out.push(vec![i]);
            }
        }
    }
    out
}

fn mat_strings(m: &Mat) -> Value {
    json!(m.to_strings())
}

fn mor_value(f: &Mor) -> Value {
    json!({
        "source_dims": f.source().dims(),
        "target_dims": f.target().dims(),
        "maps": f.maps().iter().map(mat_strings).collect::<Vec<_>>(),
    })
}

fn mat_text(m: &Mat) -> String {
    if m.rows() == 0 || m.cols() == 0 {
        return format!("({}x{})", m.rows(), m.cols());
    }
    let rows: Vec<String> = m.to_strings().into_iter().map(|r| format!("[{}]", r.join(" "))).collect();
    format!("[{}]", rows.join(" "))
}

fn qhom(l: &Loaded, m: &str, n: &str) -> CliResult<(Value, String)> {
    let (x, y) = (l.object(m)?, l.object(n)?);
    let basis = qhom_basis(&x, &y, &l.serre)?;
    let plain = hom_basis(&x, &y)?.len();
    let mut t = format!("dim Hom_A/C({m}, {n}) = {}\n", basis.len());
    writeln!(t, "dim Hom_A({m}, {n}) = {plain}").unwrap();
    for (k, q) in basis.iter().enumerate() {
        let maps: Vec<String> = q
            .rep()
            .maps()
            .iter()
            .enumerate()
            .map(|(v, mat)| format!("{}: {}", l.backend.vertex_labels()[v], mat_text(mat)))
            .collect();
        writeln!(t, "  basis {}: {}", k + 1, maps.join(", ")).unwrap();
    }
    let v = json!({
        "m": m,
        "n": n,
        "serre": l.serre.labels(),
        "dim": basis.len(),
        "hom_dim": plain,
        "basis": basis.iter().map(|q| mor_value(q.rep())).collect::<Vec<_>>(),
    });
    Ok((v, t))
}

fn length(l: &Loaded, name: &str) -> CliResult<(Value, String)> {
    let x: Obj = l.object(name)?;
    let counts = factor_counts(&x)?;
    let la: usize = counts.values().sum();
    let lq = q_length(&x, &l.serre)?;
    let factors: Vec<String> = counts.iter().map(|(s, k)| format!("{s}^{k}")).collect();
    let t = format!(
        "length_A({name}) = {la}\nlength_A/C({name}) = {lq}\nfactors: {}\n",
        if factors.is_empty() { "none".to_string() } else { factors.join(" ") }
    );
    let v = json!({ "object": name, "serre": l.serre.labels(), "length": la, "q_length": lq, "factors": counts });
    Ok((v, t))
}

fn classify(b: &Backend) -> CliResult<(Value, String)> {
    let grid = ideal::component_grid(b)?;
    let units = labels_of(b, grid.summands.iter().copied());
    let ideals = ideal::enumerate_tensor_ideals(b)?;
    let mut t = format!("{} two-sided Serre tensor-ideals\n", ideals.len());
    let mut list = Vec::new();
    for d in &ideals {
        let j: Vec<String> = d.j.iter().map(|&i| units[i].clone()).collect();
        let simples = d.serre.labels();
        writeln!(t, "  J = {}: {}", braces(&j), braces(&simples)).unwrap();
        list.push(json!({ "j": d.j, "j_units": j, "simples": simples }));
    }
    Ok((json!({ "backend": b.name(), "ideals": list }), t))
}

fn closure(b: &Backend, simples: &[String]) -> CliResult<(Value, String)> {
    let set = simples
        .iter()
        .map(|s| b.simple_index(s).map_err(|_| SpecError::UnresolvedLabel(s.clone())))
        .collect::<Result<BTreeSet<usize>, _>>()?;
    let c = ideal::tensor_ideal_closure(b, &set)?;
    let labels = c.labels();
    let t = format!("{}\n", braces(&labels));
    Ok((json!({ "input": labels_of(b, set), "closure": labels }), t))
}

fn obstruction(c: &SerreSpec) -> CliResult<(Value, String)> {
    let b = c.backend();
    if !b.tensor_capable() {
        return Err(Error::RequirementUnmet(format!("backend `{}` has no tensor structure", b.name())).into());
    }
    let w = ideal::monoidal_obstruction(c)?;
    let label = w.map(|s| b.simple_label(s).to_string());
    let t = match &label {
        Some(s) => format!("witness: {s}\n"),
        None => "none\n".to_string(),
    };
    Ok((json!({ "serre": c.labels(), "witness": label }), t))
}

fn verify_text(reports: &[SuiteReport], timings: bool) -> String {
    let mut t = String::new();
    for r in reports {
        let status = match (&r.skipped, r.pass) {
            (Some(_), _) => "SKIP",
            (None, true) => "PASS",
            (None, false) => "FAIL",
        };
        write!(t, "{status} {:<16} trials={} nontrivial={}", r.suite.name(), r.trials, r.nontrivial).unwrap();
        if timings {
            write!(t, " time={:.3}s", r.wall_time.as_secs_f64()).unwrap();
        }
        if let Some(reason) = &r.skipped {
            write!(t, " ({reason})").unwrap();
        }
        t.push('\n');
        for f in &r.failures {
            writeln!(t, "  trial {}: {}", f.trial, f.message).unwrap();
            writeln!(t, "    {}", f.data).unwrap();
        }
    }
    let failed = reports.iter().filter(|r| !r.pass).count();
    writeln!(t, "{} suites, {} failed", reports.len(), failed).unwrap();
    t
}

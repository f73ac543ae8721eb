//! The `hat` command line.
//!
//! Exit status: 0 on success, 1 when a verification verdict is false, 2 on
//! usage or input errors.

pub mod dot;
pub mod report;
pub mod spec;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::autos::{self, verify_automorphism, GeneratorCatalog, LayeredAutomorphism};
use crate::digraph::{FiniteDigraph, PeriodicLayeredDigraph, Vertex};
use crate::product::{self, ProductDescriptor};
use crate::reach;
use crate::transit::{self, Generator, NArc};
use crate::zoo;

pub use report::RunReport;
pub use spec::{build_periodic, parse_factor_spec, FactorSpec, LayerSpec, SpecError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
}

macro_rules! input_error {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Input(e.to_string())
            }
        }
    )*};
}

input_error!(
    SpecError,
    crate::digraph::DigraphError,
    crate::product::ProductError,
    crate::reach::ReachError,
    crate::autos::AutError,
    crate::transit::TransitError,
    crate::zoo::ZooError,
    std::io::Error
);

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// builtin:L, builtin:D, builtin:Z, builtin:mckay(n,m), builtin:dl(dout,din) or a JSON spec path
    #[arg(long = "factor", value_name = "FACTOR")]
    pub factors: Vec<String>,
    /// Inclusive level range
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
    pub window: Option<Vec<i64>>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Arc length (or maximal arc length for certify)
    #[arg(long)]
    pub n: Option<usize>,
    /// Render the report as a text table instead of JSON
    #[arg(long)]
    pub pretty: bool,
    /// Accept spec files with involvers not separated by a complete bipartite layer
    #[arg(long)]
    pub allow_adjacent_involvers: bool,
}

#[derive(Debug, Parser)]
#[command(name = "hat", version, about = "Leveled digraphs, layerwise products and arc transitivity checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a factor and summarize it
    Build(Common),
    /// Layerwise direct product of the given factors
    Product {
        #[command(flatten)]
        common: Common,
        /// One offset per factor (default 0)
        #[arg(long = "offset", allow_negative_numbers = true)]
        offsets: Vec<i64>,
        /// Product of all shifts of a single factor
        #[arg(long)]
        shifts: bool,
    },
    /// Reachability classes and the associated digraph
    Delta(Common),
    /// Exhaustively check an automorphism
    VerifyAut {
        #[command(flatten)]
        common: Common,
        /// Generator word over the catalog of D
        #[arg(long)]
        aut: Option<String>,
        /// Vertex exchange "(l,a,..)<->(l,b,..)"; repeatable
        #[arg(long = "exchange")]
        exchanges: Vec<String>,
    },
    /// Map an arc of D onto the baseline arc
    Canonicalize {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        arc: String,
    },
    /// Orbits of n-arcs inside a window
    Orbits {
        #[command(flatten)]
        common: Common,
        /// Generator word over the catalog of D; repeatable
        #[arg(long = "aut")]
        auts: Vec<String>,
        /// Use the full automorphism group of the window
        #[arg(long)]
        brute_force: bool,
        /// Work on the associated digraph instead of a window
        #[arg(long)]
        delta: bool,
        #[arg(long, default_value_t = transit::DEFAULT_BRUTE_FORCE_BOUND)]
        bound: usize,
    },
    /// Window certificate of arc transitivity for all lengths up to --n
    Certify {
        #[command(flatten)]
        common: Common,
        /// Evidence generator word over the catalog of D; repeatable
        #[arg(long = "aut")]
        auts: Vec<String>,
    },
    /// Write a window as DOT or JSON
    Export(Common),
}

enum Factor {
    Periodic(PeriodicLayeredDigraph),
    Window(FiniteDigraph),
}

fn parse_call(s: &str, name: &str) -> Option<Vec<usize>> {
    let args = s.strip_prefix(name)?.strip_prefix('(')?.strip_suffix(')')?;
    args.split(',').map(|a| a.trim().parse().ok()).collect()
}

fn resolve_factor(s: &str, common: &Common) -> Result<Factor, CliError> {
    if let Some(name) = s.strip_prefix("builtin:") {
        let name: String = name.chars().filter(|c| !c.is_whitespace()).collect();
        return match name.as_str() {
            "L" => Ok(Factor::Periodic(zoo::factor_l())),
            "D" => Ok(Factor::Periodic(zoo::digraph_d())),
            "Z" => Ok(Factor::Periodic(zoo::integer_line())),
            _ => {
                if let Some([n, m]) = parse_call(&name, "mckay").as_deref() {
                    Ok(Factor::Periodic(zoo::factor_mckay_praeger(*n, *m)?))
                } else if let Some([dout, din]) = parse_call(&name, "dl").as_deref() {
                    let (lo, hi) = window_or(common, (-2, 2))?;
                    Ok(Factor::Window(zoo::diestel_leader(
                        *dout,
                        *din,
                        lo,
                        hi,
                        zoo::DEFAULT_VERTEX_BUDGET,
                    )?))
                } else {
                    Err(CliError::Usage(format!("unknown builtin {name:?}")))
                }
            }
        };
    }
    let text = std::fs::read_to_string(s).map_err(|e| CliError::Input(format!("{s}: {e}")))?;
    let spec = parse_factor_spec(&text).map_err(|e| CliError::Input(format!("{s}: {e}")))?;
    if !common.allow_adjacent_involvers {
        zoo::check_involvers(&spec.patterns()?)?;
    }
    Ok(Factor::Periodic(build_periodic(&spec)?))
}

fn window_or(common: &Common, default: (i64, i64)) -> Result<(i64, i64), CliError> {
    match common.window.as_deref() {
        None => Ok(default),
        Some(&[lo, hi]) if lo <= hi => Ok((lo, hi)),
        Some(_) => Err(CliError::Usage("--window needs LO <= HI".into())),
    }
}

fn single_factor(common: &Common) -> Result<Factor, CliError> {
    match common.factors.as_slice() {
        [f] => resolve_factor(f, common),
        [] => Err(CliError::Usage("--factor is required".into())),
        _ => Err(CliError::Usage("exactly one --factor is expected".into())),
    }
}

fn periodic(common: &Common) -> Result<PeriodicLayeredDigraph, CliError> {
    match single_factor(common)? {
        Factor::Periodic(g) => Ok(g),
        Factor::Window(_) => Err(CliError::Usage("this command needs a periodic factor".into())),
    }
}

fn require_d(g: &PeriodicLayeredDigraph, what: &str) -> Result<GeneratorCatalog, CliError> {
    if *g == zoo::digraph_d() {
        Ok(autos::generators_d())
    } else {
        Err(CliError::Usage(format!("{what} is only defined for builtin:D")))
    }
}

fn default_window(common: &Common, g: &PeriodicLayeredDigraph) -> Result<(i64, i64), CliError> {
    window_or(common, (0, g.period() as i64))
}

/// Main output: either the report or a rendered digraph.
enum Output {
    Report(RunReport, i32),
    Text(String, i32),
}

fn describe(report: &mut RunReport, g: &PeriodicLayeredDigraph) {
    report
        .counter("period", g.period())
        .counter("arity", g.arity())
        .counter("offset", g.offset());
    let fibers: Vec<usize> = (0..g.period() as i64).map(|i| g.fiber_size(i)).collect();
    let edges: Vec<usize> = (0..g.period() as i64).map(|i| g.layer(i).edge_count()).collect();
    report.detail("fiber_sizes", fibers).detail("layer_edges", edges);
}

fn render_window(common: &Common, f: &FiniteDigraph, name: &str) -> String {
    match common.format {
        Format::Dot => dot::to_dot(f, name),
        Format::Json => dot::to_json(f),
    }
}

fn cmd_build(common: &Common) -> Result<Output, CliError> {
    let mut report = RunReport::new("build");
    report.input("factor", common.factors.join(" "));
    match single_factor(common)? {
        Factor::Periodic(g) => {
            if common.format == Format::Dot {
                let (lo, hi) = default_window(common, &g)?;
                return Ok(Output::Text(dot::to_dot(&g.window(lo, hi), g.name().unwrap_or("G")), 0));
            }
            describe(&mut report, &g);
            report.verdict("well_formed", true);
            report.detail("spec", FactorSpec::from_digraph(&g));
        }
        Factor::Window(f) => {
            if common.format == Format::Dot {
                return Ok(Output::Text(dot::to_dot(&f, "window"), 0));
            }
            report
                .verdict("well_formed", true)
                .counter("vertices", f.vertex_count())
                .counter("edges", f.edge_count());
        }
    }
    Ok(Output::Report(report, 0))
}

fn cmd_product(common: &Common, offsets: &[i64], shifts: bool) -> Result<Output, CliError> {
    let factors = common
        .factors
        .iter()
        .map(|s| match resolve_factor(s, common)? {
            Factor::Periodic(g) => Ok(g),
            Factor::Window(_) => Err(CliError::Usage(format!("{s} has no periodic description"))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let g = if shifts {
        match factors.as_slice() {
            [g] => product::shift_product(g),
            _ => return Err(CliError::Usage("--shifts takes exactly one --factor".into())),
        }
    } else {
        let offsets = if offsets.is_empty() {
            vec![0; factors.len()]
        } else {
            offsets.to_vec()
        };
        product::layerwise_product_many(&ProductDescriptor::new(factors, offsets.clone())?)
    };
    if common.format == Format::Dot {
        let (lo, hi) = default_window(common, &g)?;
        return Ok(Output::Text(dot::to_dot(&g.window(lo, hi), g.name().unwrap_or("G")), 0));
    }
    let mut report = RunReport::new("product");
    report
        .input("factors", common.factors.join(" "))
        .input("offsets", format!("{offsets:?}"))
        .input("shifts", shifts);
    describe(&mut report, &g);
    report.detail("spec", FactorSpec::from_digraph(&g));
    Ok(Output::Report(report, 0))
}

fn cmd_delta(common: &Common) -> Result<Output, CliError> {
    let delta = match single_factor(common)? {
        Factor::Periodic(g) => match common.window {
            Some(_) => {
                let (lo, hi) = default_window(common, &g)?;
                reach::window_delta(&g.window(lo, hi))?
            }
            None => reach::delta(&g),
        },
        Factor::Window(f) => reach::window_delta(&f)?,
    };
    let rep = &delta.representative;
    if common.format == Format::Dot {
        return Ok(Output::Text(dot::to_dot(&FiniteDigraph::from_bipartite(rep, 0), "delta"), 0));
    }
    let mut report = RunReport::new("delta");
    report
        .input("factor", common.factors.join(" "))
        .verdict("well_defined", delta.well_defined)
        .verdict("bipartite", delta.bipartite)
        .verdict("connected", delta.connected)
        .verdict("complete_bipartite", delta.complete_bipartite)
        .counter("representative_bottom", rep.bottom().len())
        .counter("representative_top", rep.top().len())
        .counter("representative_vertices", rep.vertex_count())
        .counter("representative_edges", rep.edge_count())
        .counter("classes", delta.classes_per_layer.values().sum::<usize>())
        .detail("delta", &delta);
    Ok(Output::Report(report, 0))
}

fn parse_exchange(s: &str) -> Result<(Vertex, Vertex), CliError> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || CliError::Usage(format!("cannot parse exchange {s:?}; expected \"(l,a)<->(l,b)\""));
    let cut = compact.find(")<->(").ok_or_else(bad)?;
    let u = compact[..=cut].parse().map_err(|_| bad())?;
    let v = compact[cut + 4..].parse().map_err(|_| bad())?;
    Ok((u, v))
}

fn cmd_verify(common: &Common, aut: Option<&str>, exchanges: &[String]) -> Result<Output, CliError> {
    let g = periodic(common)?;
    let mut report = RunReport::new("verify-aut");
    report.input("factor", common.factors.join(" "));
    let a = match (aut, exchanges.is_empty()) {
        (Some(word), true) => {
            let catalog = require_d(&g, "--aut")?;
            report.input("aut", word);
            let w: autos::GeneratorWord = word.parse()?;
            report.generator_words.push(w.to_string());
            w.evaluate(&catalog)
        }
        (None, false) => {
            report.input("exchanges", exchanges.join(" "));
            let pairs = exchanges
                .iter()
                .map(|e| parse_exchange(e))
                .collect::<Result<Vec<_>, _>>()?;
            LayeredAutomorphism::from_exchanges(Arc::new(g.clone()), &pairs)?
        }
        _ => return Err(CliError::Usage("give either --aut or --exchange".into())),
    };
    let r = verify_automorphism(&g, &a);
    report
        .verdict("ok", r.ok)
        .verdict("bijective", r.bijective)
        .verdict("preserves_edges", r.preserves_edges)
        .verdict("inverse_preserves_edges", r.inverse_preserves_edges)
        .counter("support_vertices", r.support_vertices)
        .counter("incident_edges", r.incident_edges)
        .counter("edges_checked", r.edges_checked)
        .counter("violations", r.violations)
        .counter("shift", a.shift())
        .detail("levels_checked", r.levels_checked)
        .detail("witness", r.witness.as_ref().map(|(u, v)| format!("{u}>{v}")));
    let code = if r.ok { 0 } else { 1 };
    Ok(Output::Report(report, code))
}

fn cmd_canonicalize(common: &Common, arc: &str) -> Result<Output, CliError> {
    let g = periodic(common)?;
    let catalog = require_d(&g, "canonicalize")?;
    let arc: NArc = arc.parse()?;
    let mut report = RunReport::new("canonicalize");
    report.input("factor", common.factors.join(" ")).input("arc", &arc);
    let code = match autos::canonicalize_arc(&catalog, &arc) {
        Ok(c) => {
            report
                .verdict("reaches_baseline", c.reaches_baseline)
                .counter("n", arc.len())
                .counter("shift", c.psi.shift())
                .detail("image", &c.image);
            report.generator_words.push(c.word.to_string());
            if c.reaches_baseline {
                0
            } else {
                1
            }
        }
        Err(e @ autos::AutError::ImpossibleCoordinate(_)) => {
            report.verdict("reaches_baseline", false).detail("error", e.to_string());
            1
        }
        Err(e) => return Err(e.into()),
    };
    Ok(Output::Report(report, code))
}

fn words_to_generators(catalog: &GeneratorCatalog, words: &[String]) -> Result<Vec<Generator>, CliError> {
    words
        .iter()
        .map(|w| Ok(Generator::Layered(catalog.by_name(w)?)))
        .collect()
}

fn cmd_orbits(common: &Common, auts: &[String], brute_force: bool, delta: bool, bound: usize) -> Result<Output, CliError> {
    let n = common.n.unwrap_or(1);
    let factor = single_factor(common)?;
    let mut report = RunReport::new("orbits");
    report.input("factor", common.factors.join(" ")).input("n", n);
    let orbits = match factor {
        _ if delta && !auts.is_empty() => {
            return Err(CliError::Usage("--delta works with the full group only".into()))
        }
        Factor::Periodic(g) if delta => {
            let rep = reach::delta(&g).representative;
            transit::brute_force_arc_orbits(&FiniteDigraph::from_bipartite(&rep, 0), n, bound)?
        }
        Factor::Window(f) if delta => {
            let rep = reach::window_delta(&f)?.representative;
            transit::brute_force_arc_orbits(&FiniteDigraph::from_bipartite(&rep, 0), n, bound)?
        }
        Factor::Window(f) => transit::brute_force_arc_orbits(&f, n, bound)?,
        Factor::Periodic(g) => {
            let (lo, hi) = default_window(common, &g)?;
            let f = g.window(lo, hi);
            if brute_force {
                transit::brute_force_arc_orbits(&f, n, bound)?
            } else {
                let gens = if auts.is_empty() {
                    vec![Generator::Layered(LayeredAutomorphism::translation(Arc::new(g), 1))]
                } else {
                    report.generator_words.extend(auts.iter().cloned());
                    words_to_generators(&require_d(&g, "--aut")?, auts)?
                };
                transit::arc_orbits(&f, n, &gens)?
            }
        }
    };
    report
        .verdict("complete", orbits.complete)
        .counter("arcs", orbits.arcs)
        .counter("orbit_count", orbits.orbit_count)
        .detail("orbits", &orbits);
    Ok(Output::Report(report, 0))
}

fn cmd_certify(common: &Common, auts: &[String]) -> Result<Output, CliError> {
    let g = periodic(common)?;
    let n_max = common.n.unwrap_or(4);
    let (lo, hi) = window_or(common, (-6, 6))?;
    let mut report = RunReport::new("certify");
    report
        .input("factor", common.factors.join(" "))
        .input("n_max", n_max)
        .input("window", format!("{lo} {hi}"));
    let evidence = if auts.is_empty() {
        None
    } else {
        report.generator_words.extend(auts.iter().cloned());
        Some(words_to_generators(&require_d(&g, "--aut")?, auts)?)
    };
    let r = transit::certify_window_hat(&g, n_max, lo, hi, evidence.as_deref())?;
    report
        .verdict("certified", r.certified)
        .counter("arcs", r.lengths.iter().map(|l| l.arcs).sum::<usize>())
        .detail("certificate", &r);
    Ok(Output::Report(report, if r.certified { 0 } else { 1 }))
}

fn cmd_export(common: &Common) -> Result<Output, CliError> {
    let text = match single_factor(common)? {
        Factor::Periodic(g) => {
            let (lo, hi) = default_window(common, &g)?;
            render_window(common, &g.window(lo, hi), g.name().unwrap_or("G"))
        }
        Factor::Window(f) => render_window(common, &f, "window"),
    };
    Ok(Output::Text(text, 0))
}

fn dispatch(command: &Command) -> Result<(Output, bool, Option<PathBuf>), CliError> {
    let (output, common) = match command {
        Command::Build(c) => (cmd_build(c)?, c),
        Command::Product { common, offsets, shifts } => (cmd_product(common, offsets, *shifts)?, common),
        Command::Delta(c) => (cmd_delta(c)?, c),
        Command::VerifyAut { common, aut, exchanges } => (cmd_verify(common, aut.as_deref(), exchanges)?, common),
        Command::Canonicalize { common, arc } => (cmd_canonicalize(common, arc)?, common),
        Command::Orbits { common, auts, brute_force, delta, bound } => {
            (cmd_orbits(common, auts, *brute_force, *delta, *bound)?, common)
        }
        Command::Certify { common, auts } => (cmd_certify(common, auts)?, common),
        Command::Export(c) => (cmd_export(c)?, c),
    };
    Ok((output, common.pretty, common.out.clone()))
}

/// Runs one invocation and returns the exit status.
pub fn run_command<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(stdout, "{text}")
            } else {
                write!(stderr, "{text}")
            };
            return code;
        }
    };
    let start = Instant::now();
    let (output, pretty, out) = match dispatch(&cli.command) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return 2;
        }
    };
    let (text, code) = match output {
        Output::Report(mut r, code) => {
            r.timing_ms = start.elapsed().as_millis() as u64;
            (if pretty { r.to_table() } else { r.to_json() + "\n" }, code)
        }
        Output::Text(t, code) => (t, code),
    };
    let written = match out {
        Some(path) => std::fs::write(&path, &text).map_err(|e| format!("{}: {e}", path.display())),
        None => stdout.write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    match written {
        Ok(()) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
    }
}

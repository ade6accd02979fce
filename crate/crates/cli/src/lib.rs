//! Command dispatch for the `fanocone` binary.
//!
//! Every command renders into a buffer; the binary writes it in one piece, so
//! a failing command never leaves partial output behind.

use std::fmt::Write as _;
use std::io::Read;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use fanocone::cone_model::{ConePresentation, InputDocument, LoadedInput, WeightedAction};
use fanocone::discrepancy::{minimal_discrepancy, shokurov_check};
use fanocone::orb_topology::{fano_index_wps, wps_table};
use fanocone::reeb_orbits::{
    enumerate_families, index_of_family_chart, index_of_family_weighted, inf_lsft,
    inf_lsft_over_families, OrbitFamily,
};
use fanocone::ss_engine::{
    assemble_e1, certify_min_degree, degenerate_ranks, expected_sh_homology_ball, period_bound,
    sh_min_degree, E1Page, E1Row, SHProfile,
};
use fanocone::sympath_index::{index_bundle, DiagonalPath};
use fanocone::Rational;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IDENTITY: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "fanocone",
    version,
    about = "Exact invariants of Fano cone singularities"
)]
pub struct Cli {
    /// Emit JSON (default for every command except `report`).
    #[arg(long, global = true, conflicts_with = "text")]
    json: bool,
    /// Emit plain text.
    #[arg(long, global = true)]
    text: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct InputArg {
    /// Presentation file, or `-` for standard input.
    input: String,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Minimal discrepancy and its minimizing chart elements.
    Md(InputArg),
    /// Reeb orbit families with their indices.
    Orbits {
        #[command(flatten)]
        input: InputArg,
        #[arg(long)]
        max_period: Rational,
    },
    /// Indices of a diagonal unitary path.
    Cz {
        /// Comma-separated rational speeds.
        #[arg(long, allow_hyphen_values = true)]
        speeds: String,
        #[arg(long)]
        duration: Rational,
    },
    /// First page of the spectral sequence.
    E1 {
        #[command(flatten)]
        input: InputArg,
        #[arg(long, allow_hyphen_values = true)]
        max_degree: Rational,
    },
    /// Minimal nonzero degree of the homology, with full ranks when the page degenerates.
    Shmin {
        #[command(flatten)]
        input: InputArg,
        /// Degree cutoff for the rank table; defaults to max(4n+2, min degree).
        #[arg(long, allow_hyphen_values = true)]
        max_degree: Option<Rational>,
    },
    /// Integral cohomology of a weighted projective space.
    WpsCohomology {
        /// Comma-separated positive weights.
        #[arg(long)]
        weights: String,
        #[arg(long)]
        max_degree: u64,
    },
    /// Runs every identity check on one presentation.
    Verify(InputArg),
    /// Human-readable summary of families, page and homology.
    Report {
        #[command(flatten)]
        input: InputArg,
        #[arg(long, allow_hyphen_values = true)]
        max_degree: Rational,
    },
    /// Canonical presentation document, re-importable as input.
    Export(InputArg),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Text,
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn input_error(err: anyhow::Error) -> Self {
        Outcome {
            code: EXIT_INPUT,
            stdout: String::new(),
            stderr: format!("error: {err:#}\n"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub summary: String,
    pub md: Rational,
    pub inf_lsft: Rational,
    pub sh_min_degree: Rational,
    pub thm13_holds: bool,
    pub thm14_scenario: bool,
    pub shokurov_ok: bool,
    pub engines_agree: bool,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.thm13_holds && self.engines_agree
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdin: &mut dyn Read) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: EXIT_INPUT,
                    stdout: String::new(),
                    stderr: rendered,
                }
            } else {
                Outcome::ok(rendered)
            };
        }
    };
    dispatch(cli, stdin)
}

fn dispatch(cli: Cli, stdin: &mut dyn Read) -> Outcome {
    let default_text = matches!(cli.command, Command::Report { .. });
    let format = if cli.json {
        Format::Json
    } else if cli.text || default_text {
        Format::Text
    } else {
        Format::Json
    };
    let result = match cli.command {
        Command::Md(i) => load(&i.input, stdin).and_then(|l| cmd_md(&l, format)),
        Command::Orbits { input, max_period } => {
            load(&input.input, stdin).and_then(|l| cmd_orbits(&l, max_period, format))
        }
        Command::Cz { speeds, duration } => cmd_cz(&speeds, duration, format),
        Command::E1 { input, max_degree } => {
            load(&input.input, stdin).and_then(|l| cmd_e1(&l, max_degree, format))
        }
        Command::Shmin { input, max_degree } => {
            load(&input.input, stdin).and_then(|l| cmd_shmin(&l, max_degree, format))
        }
        Command::WpsCohomology {
            weights,
            max_degree,
        } => cmd_wps(&weights, max_degree, format),
        Command::Verify(i) => {
            return match load(&i.input, stdin).and_then(|l| verify(&l)) {
                Ok(report) => {
                    let stdout = render_verify(&report, format);
                    if report.passed() {
                        Outcome::ok(stdout)
                    } else {
                        Outcome {
                            code: EXIT_IDENTITY,
                            stdout,
                            stderr: "error: identity check failed\n".into(),
                        }
                    }
                }
                Err(e) => Outcome::input_error(e),
            };
        }
        Command::Report { input, max_degree } => {
            load(&input.input, stdin).and_then(|l| cmd_report(&l, max_degree, format))
        }
        Command::Export(i) => load(&i.input, stdin).and_then(|l| cmd_export(&l, format)),
    };
    match result {
        Ok(stdout) => Outcome::ok(stdout),
        Err(e) => Outcome::input_error(e),
    }
}

fn read_source(path: &str, stdin: &mut dyn Read) -> anyhow::Result<String> {
    let mut text = String::new();
    if path == "-" {
        stdin
            .read_to_string(&mut text)
            .context("reading standard input")?;
    } else {
        text = std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
    }
    Ok(text)
}

/// Parses and validates an input document.
pub fn parse_input(text: &str) -> anyhow::Result<LoadedInput> {
    let doc: InputDocument = serde_json::from_str(text).context("schema error")?;
    Ok(doc.load()?)
}

fn load(path: &str, stdin: &mut dyn Read) -> anyhow::Result<LoadedInput> {
    let text = read_source(path, stdin)?;
    parse_input(&text).with_context(|| format!("input {path}"))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn parse_list<T: std::str::FromStr>(list: &str, what: &str) -> anyhow::Result<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    list.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            s.trim()
                .parse::<T>()
                .map_err(|e| anyhow!("bad {what} {s:?}: {e}"))
        })
        .collect()
}

fn cmd_md(input: &LoadedInput, format: Format) -> anyhow::Result<String> {
    let res = minimal_discrepancy(&input.presentation)?;
    Ok(match format {
        Format::Json => to_json(&res),
        Format::Text => {
            let mut out = format!("md = {}\n", res.md);
            let mins: Vec<String> = res
                .minimizers
                .iter()
                .map(|m| format!("{}#{}", m.chart, m.k))
                .collect();
            writeln!(out, "capped by r: {}", res.capped_by_r).unwrap();
            writeln!(out, "minimizers: {}", display_list(&mins)).unwrap();
            writeln!(out, "klt: {}", res.klt).unwrap();
            if let Some(d) = &res.diagnosis {
                writeln!(out, "diagnosis: {d}").unwrap();
            }
            out
        }
    })
}

fn display_list(items: &[String]) -> String {
    if items.is_empty() {
        "-".to_string()
    } else {
        items.join(", ")
    }
}

fn family_table(families: &[OrbitFamily]) -> String {
    let mut out = format!(
        "{:>4} {:>4} {:>4} {:>5} {:>8} {:>8} {:>8} {:>8} {:>3} {:>3}\n",
        "G", "k", "ell", "comp", "period", "rs", "lcz", "lsft", "dim", "z2"
    );
    for f in families {
        writeln!(
            out,
            "{:>4} {:>4} {:>4} {:>5} {:>8} {:>8} {:>8} {:>8} {:>3} {:>3}",
            f.isotropy_order,
            f.k,
            f.ell,
            f.component_id,
            f.period.to_string(),
            f.rs.to_string(),
            f.lcz.to_string(),
            f.lsft.to_string(),
            f.stratum_dim,
            f.z2
        )
        .unwrap();
    }
    out
}

fn cmd_orbits(input: &LoadedInput, max_period: Rational, format: Format) -> anyhow::Result<String> {
    let families = enumerate_families(&input.presentation, max_period)?;
    Ok(match format {
        Format::Json => to_json(&families),
        Format::Text => family_table(&families),
    })
}

fn cmd_cz(speeds: &str, duration: Rational, format: Format) -> anyhow::Result<String> {
    let speeds: Vec<Rational> = parse_list(speeds, "speed")?;
    let bundle = index_bundle(&DiagonalPath::new(speeds, duration)?);
    Ok(match format {
        Format::Json => to_json(&bundle),
        Format::Text => {
            let z2 = bundle.z2.map_or_else(|| "-".to_string(), |z| z.to_string());
            format!(
                "rs = {}\nlcz = {}\nkernel_half_dim = {}\nz2 = {z2}\n",
                bundle.rs, bundle.lcz, bundle.kernel_half_dim
            )
        }
    })
}

#[derive(Serialize)]
struct PageOutput {
    #[serde(rename = "N")]
    big_n: u64,
    max_degree: Rational,
    entries: Vec<E1Row>,
}

fn page_table(page: &E1Page) -> String {
    let mut out = format!(
        "{:>8} {:>5} {:>3} {:>5}  source\n",
        "degree", "p", "z2", "rank"
    );
    for row in page.rows() {
        let s = &row.source;
        writeln!(
            out,
            "{:>8} {:>5} {:>3} {:>5}  (G={}, k={}, ell={}, comp={}) H_{}",
            row.degree.to_string(),
            row.p,
            row.z2,
            row.rank,
            s.isotropy_order,
            s.k,
            s.ell,
            s.component_id,
            row.homology_degree
        )
        .unwrap();
    }
    out
}

fn cmd_e1(input: &LoadedInput, max_degree: Rational, format: Format) -> anyhow::Result<String> {
    let page = assemble_e1(&input.presentation, max_degree)?;
    Ok(match format {
        Format::Json => to_json(&PageOutput {
            big_n: page.big_n,
            max_degree,
            entries: page.rows(),
        }),
        Format::Text => format!("N = {}\n{}", page.big_n, page_table(&page)),
    })
}

fn shmin_profile(p: &ConePresentation, max_degree: Option<Rational>) -> anyhow::Result<SHProfile> {
    let cert = sh_min_degree(p)?;
    let default = Rational::from_integer(4 * p.n as i64 + 2).max(cert.min_degree);
    let page = assemble_e1(p, max_degree.unwrap_or(default))?;
    if page.is_empty() {
        return Ok(SHProfile {
            min_degree: cert.min_degree,
            degenerate: page.is_monochromatic(),
            ranks: Default::default(),
        });
    }
    let profile = degenerate_ranks(&page)?;
    if profile.min_degree != cert.min_degree {
        return Err(anyhow!(
            "minimal degree {} on the truncated page, {} on the full page",
            profile.min_degree,
            cert.min_degree
        ));
    }
    Ok(profile)
}

fn ranks_text(profile: &SHProfile) -> String {
    let mut out = format!(
        "min_degree = {}\ndegenerate = {}\n",
        profile.min_degree, profile.degenerate
    );
    for (d, r) in &profile.ranks {
        writeln!(out, "  degree {d}: rank {r}").unwrap();
    }
    out
}

fn cmd_shmin(
    input: &LoadedInput,
    max_degree: Option<Rational>,
    format: Format,
) -> anyhow::Result<String> {
    let profile = shmin_profile(&input.presentation, max_degree)?;
    Ok(match format {
        Format::Json => to_json(&profile),
        Format::Text => ranks_text(&profile),
    })
}

#[derive(Serialize)]
struct WpsRow {
    degree: u64,
    group: String,
}

#[derive(Serialize)]
struct WpsOutput {
    weights: Vec<u64>,
    fano_index: u64,
    table: Vec<WpsRow>,
}

fn cmd_wps(weights: &str, max_degree: u64, format: Format) -> anyhow::Result<String> {
    let w = WeightedAction::new(parse_list(weights, "weight")?)?;
    let table = wps_table(&w, max_degree)?;
    let out = WpsOutput {
        weights: w.weights().to_vec(),
        fano_index: fano_index_wps(&w),
        table: table
            .iter()
            .enumerate()
            .map(|(k, g)| WpsRow {
                degree: k as u64,
                group: g.to_string(),
            })
            .collect(),
    };
    Ok(match format {
        Format::Json => to_json(&out),
        Format::Text => {
            let mut s = format!("P{:?}, Fano index {}\n", out.weights, out.fano_index);
            for row in &out.table {
                writeln!(s, "  H^{} = {}", row.degree, row.group).unwrap();
            }
            s
        }
    })
}

/// Compares the two index engines on every family of period at most 3.
fn engines_agree(input: &LoadedInput) -> anyhow::Result<bool> {
    let p = &input.presentation;
    if let Some(w) = &input.action {
        for f in enumerate_families(p, Rational::from_integer(3))? {
            let wi = index_of_family_weighted(w, f.isotropy_order, f.k, f.ell)?;
            if (wi.rs, wi.lcz, wi.lsft, wi.stratum_dim, wi.period, wi.z2)
                != (f.rs, f.lcz, f.lsft, f.stratum_dim, f.period, f.z2)
            {
                return Ok(false);
            }
        }
        return Ok(true);
    }
    // No global path engine: compare the closed form with the
    // trivialization-plus-anomaly route on every chart element, and the
    // chart infimum with the infimum over enumerated families.
    for chart in &p.charts {
        for k in 1..chart.m {
            let idx = index_of_family_chart(chart, k, 0, p.r, p.r, p.n)?;
            match idx.trace {
                Some(t) if t.corrected == idx.lsft => {}
                _ => return Ok(false),
            }
        }
    }
    Ok(inf_lsft(p)? == inf_lsft_over_families(p)?)
}

/// Runs every check on a loaded input.
pub fn verify(input: &LoadedInput) -> anyhow::Result<VerificationReport> {
    let p = &input.presentation;
    let md = minimal_discrepancy(p)?.md;
    let inf = inf_lsft(p)?;
    let sh_min = sh_min_degree(p)?.min_degree;
    let n = p.n as i64;
    let shokurov = shokurov_check(p)?;
    Ok(VerificationReport {
        summary: p.summary(),
        md,
        inf_lsft: inf,
        sh_min_degree: sh_min,
        thm13_holds: md * 2 == inf && inf == sh_min + (n - 3),
        thm14_scenario: md == Rational::from_integer(n - 1),
        shokurov_ok: shokurov.within_bound,
        engines_agree: engines_agree(input)?,
    })
}

fn render_verify(report: &VerificationReport, format: Format) -> String {
    match format {
        Format::Json => to_json(report),
        Format::Text => format!(
            "presentation: {}\nmd = {}\ninf lSFT = {}\nSH min degree = {}\n\
             2 md = inf lSFT = SH min + n - 3: {}\nmd = n - 1: {}\n\
             md <= n - 1: {}\nindex engines agree: {}\n",
            report.summary,
            report.md,
            report.inf_lsft,
            report.sh_min_degree,
            report.thm13_holds,
            report.thm14_scenario,
            report.shokurov_ok,
            report.engines_agree
        ),
    }
}

#[derive(Serialize)]
struct ReportOutput {
    summary: String,
    md: fanocone::discrepancy::DiscrepancyResult,
    inf_lsft: Rational,
    families: Vec<OrbitFamily>,
    e1: Vec<E1Row>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sh: Option<SHProfile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    expected: Option<std::collections::BTreeMap<i64, u64>>,
}

fn cmd_report(input: &LoadedInput, max_degree: Rational, format: Format) -> anyhow::Result<String> {
    let p = &input.presentation;
    let md = minimal_discrepancy(p)?;
    let inf = inf_lsft(p)?;
    let page = assemble_e1(p, max_degree)?;
    let families: Vec<OrbitFamily> = match period_bound(p, max_degree)? {
        Some(bound) => enumerate_families(p, bound)?
            .into_iter()
            .filter(|f| f.lcz <= max_degree)
            .collect(),
        None => Vec::new(),
    };
    let sh = if page.is_empty() {
        None
    } else {
        certify_min_degree(&page)?;
        Some(degenerate_ranks(&page)?)
    };
    let expected = (input.homology_sphere_link && max_degree.floor() >= 0)
        .then(|| expected_sh_homology_ball(p.n, max_degree.floor()));
    let out = ReportOutput {
        summary: p.summary(),
        md,
        inf_lsft: inf,
        families,
        e1: page.rows(),
        sh,
        expected,
    };
    Ok(match format {
        Format::Json => to_json(&out),
        Format::Text => report_text(&out, &page),
    })
}

fn report_text(out: &ReportOutput, page: &E1Page) -> String {
    let mut s = format!("presentation: {}\n", out.summary);
    let mins: Vec<String> = out
        .md
        .minimizers
        .iter()
        .map(|m| format!("{}#{}", m.chart, m.k))
        .collect();
    writeln!(
        s,
        "minimal discrepancy: {} (minimizers: {}{})",
        out.md.md,
        display_list(&mins),
        if out.md.capped_by_r {
            "; attained by r"
        } else {
            ""
        }
    )
    .unwrap();
    writeln!(s, "inf lSFT: {}", out.inf_lsft).unwrap();
    writeln!(s, "\nReeb orbit families (lcz <= {}):", page.max_degree).unwrap();
    s.push_str(&family_table(&out.families));
    writeln!(
        s,
        "\nE1 page (N = {}, degree <= {}):",
        page.big_n, page.max_degree
    )
    .unwrap();
    s.push_str(&page_table(page));
    s.push('\n');
    match &out.sh {
        None => s.push_str("SH profile: no generators up to this degree\n"),
        Some(profile) => {
            s.push_str("SH profile:\n");
            s.push_str(&ranks_text(profile));
        }
    }
    if let (Some(expected), Some(profile)) = (&out.expected, &out.sh) {
        if profile.degenerate {
            let got: std::collections::BTreeMap<i64, u64> = profile
                .ranks
                .iter()
                .filter_map(|(d, r)| d.to_integer().map(|d| (d, *r)))
                .collect();
            let verdict = if got == *expected && got.len() == profile.ranks.len() {
                "match"
            } else {
                "differ from"
            };
            writeln!(s, "ranks {verdict} the homology-ball table").unwrap();
        } else {
            s.push_str("page does not degenerate; homology-ball table not compared\n");
        }
    }
    s
}

fn cmd_export(input: &LoadedInput, format: Format) -> anyhow::Result<String> {
    let doc = InputDocument::export(&input.presentation, input.homology_sphere_link);
    Ok(match format {
        Format::Json | Format::Text => to_json(&doc),
    })
}

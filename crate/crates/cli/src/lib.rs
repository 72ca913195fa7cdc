//! Commands and text rendering behind the `credence` binary.

use std::fmt::Write as _;
use std::path::Path;

use credence::{
    derive_contingency_set, posterior, run_scenario, summarize, top_k_distribution, BeliefDistribution,
    ConfidenceSummary, Error, EvidenceSet, Network, Scenario, StateDistribution, Target, ValidationError,
};

pub use credence::model::DEFAULT_MAX_VARIABLES;

pub const DEFAULT_PRECISION: usize = 3;
pub const DEFAULT_WIDTH: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Table,
    Csv,
    Histogram,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RenderOptions {
    pub format: Format,
    /// Decimal places, 1 to 12.
    pub precision: usize,
    /// Full-mass histogram bar length, at least 10.
    pub width: usize,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            format: Format::Table,
            precision: DEFAULT_PRECISION,
            width: DEFAULT_WIDTH,
        }
    }
}

impl RenderOptions {
    pub fn new(format: Format, precision: usize, width: usize) -> Result<Self, CliError> {
        if !(1..=12).contains(&precision) {
            return Err(CliError::usage(format!(
                "precision must be between 1 and 12, got {precision}"
            )));
        }
        if width < 10 {
            return Err(CliError::usage(format!(
                "histogram width must be at least 10, got {width}"
            )));
        }
        Ok(RenderOptions {
            format,
            precision,
            width,
        })
    }

    fn num(&self, x: f64) -> String {
        format!("{:.*}", self.precision, x)
    }
}

/// Process exit statuses.
pub mod exit {
    pub const OK: u8 = 0;
    pub const IO: u8 = 1;
    pub const INVALID: u8 = 2;
    pub const IMPOSSIBLE: u8 = 3;
    pub const STEP: u8 = 4;
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: exit::INVALID,
            message: message.into(),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

pub fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Io { .. } => exit::IO,
        Error::ImpossibleEvidence => exit::IMPOSSIBLE,
        Error::Step { .. } => exit::STEP,
        _ => exit::INVALID,
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        CliError {
            code: exit_code(&err),
            message: err.to_string(),
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| {
        Error::Io {
            path: path.to_path_buf(),
            source,
        }
        .into()
    })
}

fn load(path: &Path, max_variables: usize) -> Result<Network, CliError> {
    let text = read(path)?;
    Network::from_json(&text, max_variables).map_err(|e| diagnose(path, &text, e))
}

fn load_evidence(path: Option<&Path>) -> Result<EvidenceSet, CliError> {
    match path {
        Some(p) => Ok(EvidenceSet::from_json(&read(p)?)?),
        None => Ok(EvidenceSet::new()),
    }
}

/// Anchors a load error to a line of the source document.
fn diagnose(path: &Path, text: &str, err: Error) -> CliError {
    let line = match &err {
        Error::Parse(e) => Some(e.line()),
        Error::Invalid(v) => locate(text, v),
        _ => None,
    };
    let code = exit_code(&err);
    let message = match line {
        Some(line) => format!("{}:{line}: {err}", path.display()),
        None => format!("{}: {err}", path.display()),
    };
    CliError { code, message }
}

/// 1-based line of the construct a validation error is about.
fn locate(text: &str, err: &ValidationError) -> Option<usize> {
    let subject = err.subject()?;
    let key = match err {
        ValidationError::DuplicateVariable(_)
        | ValidationError::TooFewStates { .. }
        | ValidationError::DuplicateState { .. }
        | ValidationError::EmptyState { .. }
        | ValidationError::MissingNode(_) => "name",
        _ => "var",
    };
    let at = find_key_value(text, key, subject)?;
    let at = match err {
        ValidationError::RowWidth { row, .. }
        | ValidationError::BadProbability { row, .. }
        | ValidationError::RowSum { row, .. } => find_row(text, at, *row).unwrap_or(at),
        _ => at,
    };
    Some(text[..at].matches('\n').count() + 1)
}

/// Byte offset of the first `"key": "value"` pair.
fn find_key_value(text: &str, key: &str, value: &str) -> Option<usize> {
    let quoted_key = format!("\"{key}\"");
    let quoted_value = serde_json::to_string(value).ok()?;
    let mut from = 0;
    while let Some(i) = text[from..].find(&quoted_key) {
        let start = from + i;
        let rest = text[start + quoted_key.len()..].trim_start();
        if let Some(rest) = rest.strip_prefix(':') {
            if rest.trim_start().starts_with(&quoted_value) {
                return Some(start);
            }
        }
        from = start + quoted_key.len();
    }
    None
}

/// Byte offset of row `row` of the first `cpt` array after `from`.
fn find_row(text: &str, from: usize, row: usize) -> Option<usize> {
    let cpt = from + text[from..].find("\"cpt\"")?;
    let open = cpt + text[cpt..].find('[')?;
    let mut depth = 0;
    let mut seen = 0;
    for (i, ch) in text[open..].char_indices() {
        match ch {
            '[' => {
                depth += 1;
                if depth == 2 {
                    if seen == row {
                        return Some(open + i);
                    }
                    seen += 1;
                }
            }
            ']' => {
                depth -= 1;
                if depth == 0 {
                    return None;
                }
            }
            _ => {}
        }
    }
    None
}

pub fn cmd_validate(path: &Path, max_variables: usize) -> Result<String, CliError> {
    let net = load(path, max_variables)?;
    let edges: usize = net.nodes().iter().map(|n| n.parents().len()).sum();
    Ok(format!(
        "{}: ok ({} variables, {} edges)\norder: {}\n",
        path.display(),
        net.len(),
        edges,
        net.topological_order().join(", ")
    ))
}

pub fn cmd_query(
    path: &Path,
    evidence: Option<&Path>,
    target: &str,
    max_variables: usize,
    opts: &RenderOptions,
) -> Result<String, CliError> {
    let net = load(path, max_variables)?;
    let e = load_evidence(evidence)?;
    let dist = posterior(&net, &e, target)?;
    Ok(render_posterior(&dist, opts))
}

/// Parses `VAR=STATE`.
pub fn parse_target(spec: &str) -> Result<Target, CliError> {
    match spec.split_once('=') {
        Some((var, state)) if !var.is_empty() && !state.is_empty() => Ok(Target::new(var, state)),
        _ => Err(CliError::usage(format!(
            "target must look like VAR=STATE, got `{spec}`"
        ))),
    }
}

pub fn cmd_confidence(
    path: &Path,
    evidence: Option<&Path>,
    target: &str,
    top_k: Option<usize>,
    max_variables: usize,
    opts: &RenderOptions,
) -> Result<String, CliError> {
    let target = parse_target(target)?;
    let net = load(path, max_variables)?;
    let e = load_evidence(evidence)?;
    let c = derive_contingency_set(&net, &e, &target.var)?;
    let dist = match top_k {
        Some(k) => top_k_distribution(&net, &e, &target, &c, k)?,
        None => credence::belief_distribution(&net, &e, &target, &c)?,
    };
    let summary = summarize(&dist);
    Ok(match opts.format {
        Format::Csv => {
            let mut out = csv_combinations(&dist);
            out.push('\n');
            out.push_str(&csv_table(
                &["mean", "sigma", "variance", "min", "max", "coverage"],
                [summary_fields(&summary, true)],
            ));
            out
        }
        _ => render_section(&dist, &summary, opts),
    })
}

pub fn cmd_scenario(path: &Path, max_variables: usize, opts: &RenderOptions) -> Result<String, CliError> {
    let scenario = Scenario::load(path, max_variables)?;
    let report = run_scenario(&scenario)?;
    if opts.format == Format::Csv {
        let points = report.snapshots.iter().flat_map(|s| {
            s.distribution
                .points
                .iter()
                .map(move |p| vec![s.step.to_string(), p.value.to_string(), p.mass.to_string()])
        });
        let summaries = report.snapshots.iter().map(|s| {
            let mut row = vec![s.step.to_string()];
            row.extend(summary_fields(&s.summary, false));
            row
        });
        let mut out = csv_table(&["step", "value", "mass"], points);
        out.push('\n');
        out.push_str(&csv_table(
            &["step", "mean", "sigma", "min", "max", "coverage"],
            summaries,
        ));
        return Ok(out);
    }
    let mut out = format!("target: {}={}\n", report.target.var, report.target.state);
    for s in &report.snapshots {
        let _ = writeln!(out, "\n== step {}: {} ==", s.step, s.kind.unwrap_or("initial"));
        out.push_str(&render_section(&s.distribution, &s.summary, opts));
    }
    Ok(out)
}

/// One line per belief point, ascending by value:
/// `<value> |<bar> <mass>` with a bar of `round(mass * width)` characters.
pub fn render_histogram(dist: &BeliefDistribution, opts: &RenderOptions) -> String {
    let mut out = String::new();
    for p in &dist.points {
        let bar = "#".repeat((p.mass * opts.width as f64).round() as usize);
        let _ = writeln!(out, "{} |{} {}", opts.num(p.value), bar, opts.num(p.mass));
    }
    out
}

pub fn render_posterior(dist: &StateDistribution, opts: &RenderOptions) -> String {
    let label = |states: &[String]| states.join(",");
    match opts.format {
        Format::Table => dist
            .entries()
            .iter()
            .map(|(s, p)| format!("{}: {}\n", label(s), opts.num(*p)))
            .collect(),
        Format::Csv => csv_table(
            &["state", "probability"],
            dist.entries().iter().map(|(s, p)| vec![label(s), p.to_string()]),
        ),
        Format::Histogram => {
            let names: Vec<String> = dist.entries().iter().map(|(s, _)| label(s)).collect();
            let pad = names.iter().map(String::len).max().unwrap_or(0);
            names
                .iter()
                .zip(dist.masses())
                .map(|(n, p)| {
                    let bar = "#".repeat((p * opts.width as f64).round() as usize);
                    format!("{n:<pad$} |{bar} {}\n", opts.num(p))
                })
                .collect()
        }
    }
}

/// Contingency set, the distribution as a table or histogram, and the
/// summary lines.
fn render_section(dist: &BeliefDistribution, summary: &ConfidenceSummary, opts: &RenderOptions) -> String {
    let c = dist.contingency_set.variables();
    let mut out = format!(
        "contingency set: {}\n",
        if c.is_empty() {
            "(none)".to_string()
        } else {
            c.join(", ")
        }
    );
    if opts.format == Format::Histogram {
        out.push_str(&render_histogram(dist, opts));
    } else {
        let t = &dist.target;
        let mut header: Vec<String> = c.to_vec();
        if header.is_empty() {
            header.push("events".into());
        }
        header.push(format!("BEL({}={}|events)", t.var, t.state));
        header.push("BEL(events)".into());
        let rows = dist.combinations().into_iter().map(|combo| {
            let mut row = if combo.states.is_empty() {
                vec!["(none)".to_string()]
            } else {
                combo.states.clone()
            };
            row.push(opts.num(combo.value));
            row.push(opts.num(combo.mass));
            row
        });
        out.push_str(&aligned(header, rows));
    }
    let _ = writeln!(out, "mean      {}", opts.num(summary.mean));
    let _ = writeln!(out, "sigma     {}", opts.num(summary.std_dev));
    let _ = writeln!(out, "variance  {}", opts.num(summary.variance));
    let _ = writeln!(
        out,
        "range     [{}, {}]",
        opts.num(summary.min),
        opts.num(summary.max)
    );
    let _ = writeln!(out, "coverage  {}", opts.num(summary.coverage));
    out
}

fn aligned(header: Vec<String>, rows: impl Iterator<Item = Vec<String>>) -> String {
    let mut table = vec![header];
    table.extend(rows);
    let cols = table[0].len();
    let widths: Vec<usize> = (0..cols)
        .map(|i| table.iter().map(|r| r[i].chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in &table {
        let line: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(cell, &w)| format!("{cell:<w$}"))
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}

fn summary_fields(s: &ConfidenceSummary, with_variance: bool) -> Vec<String> {
    let mut fields = vec![s.mean, s.std_dev];
    if with_variance {
        fields.push(s.variance);
    }
    fields.extend([s.min, s.max, s.coverage]);
    fields.iter().map(f64::to_string).collect()
}

fn csv_combinations(dist: &BeliefDistribution) -> String {
    let mut header: Vec<&str> = dist
        .contingency_set
        .variables()
        .iter()
        .map(String::as_str)
        .collect();
    header.extend(["value", "mass"]);
    let rows = dist.combinations().into_iter().map(|c| {
        let mut row = c.states.clone();
        row.push(c.value.to_string());
        row.push(c.mass.to_string());
        row
    });
    csv_table(&header, rows)
}

fn csv_table<R: IntoIterator<Item = String>>(header: &[&str], rows: impl IntoIterator<Item = R>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixture(name: &str) -> std::path::PathBuf {
        Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("../core/fixtures")
            .join(name)
    }

    fn coin_distribution() -> BeliefDistribution {
        let net = credence::load_network(&std::fs::read_to_string(fixture("coin.json")).unwrap()).unwrap();
        let e = EvidenceSet::new();
        let t = Target::new("E2", "head");
        let c = derive_contingency_set(&net, &e, "E2").unwrap();
        credence::belief_distribution(&net, &e, &t, &c).unwrap()
    }

    fn bars(text: &str) -> Vec<usize> {
        text.lines()
            .map(|l| l.chars().filter(|&c| c == '#').count())
            .collect()
    }

    #[test]
    fn coin_histogram() {
        let opts = RenderOptions::new(Format::Histogram, 1, 10).unwrap();
        let text = render_histogram(&coin_distribution(), &opts);
        assert_eq!(bars(&text), [1, 8, 1]);
        assert_eq!(text.lines().next().unwrap(), "0.4 |# 0.1");
    }

    #[test]
    fn single_point_fills_the_width() {
        let mut d = coin_distribution();
        d.points.truncate(1);
        d.points[0].mass = 1.0;
        let text = render_histogram(&d, &RenderOptions::default());
        assert_eq!(bars(&text), [DEFAULT_WIDTH]);
    }

    #[test]
    fn option_bounds() {
        assert!(RenderOptions::new(Format::Table, 0, 60).is_err());
        assert!(RenderOptions::new(Format::Table, 13, 60).is_err());
        assert!(RenderOptions::new(Format::Table, 12, 9).is_err());
        assert!(RenderOptions::new(Format::Table, 12, 10).is_ok());
    }

    #[test]
    fn targets() {
        assert_eq!(parse_target("Win=win").unwrap(), Target::new("Win", "win"));
        assert!(parse_target("Win").is_err());
        assert!(parse_target("=win").is_err());
        assert!(parse_target("Win=").is_err());
    }

    #[test]
    fn locates_rows() {
        let text = "{\n \"nodes\": [\n  {\"var\": \"A\",\n   \"cpt\": [\n    [0.5, 0.5],\n    [0.2, 0.7]\n   ]}\n ]\n}";
        let err = ValidationError::RowSum {
            node: "A".into(),
            row: 1,
            sum: 0.9,
        };
        assert_eq!(locate(text, &err), Some(6));
        assert_eq!(
            locate(text, &ValidationError::Cycle(vec!["A".into(), "A".into()])),
            Some(3)
        );
        assert_eq!(locate(text, &ValidationError::Cycle(vec!["B".into()])), None);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::ImpossibleEvidence), exit::IMPOSSIBLE);
        assert_eq!(exit_code(&Error::UnknownVariable("X".into())), exit::INVALID);
        let step = Error::Step {
            step: 2,
            source: Box::new(Error::ImpossibleEvidence),
        };
        assert_eq!(exit_code(&step), exit::STEP);
    }
}

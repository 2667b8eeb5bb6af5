//! Input parsing: drift-function specs, explicit chain files, key-value
//! spec files, and the run manifest.

use std::fmt::Write as _;
use std::path::Path;

use driftkit::expr::ExprAst;
use driftkit::oracle::MarkovChain;
use driftkit::potential::HSpec;
use driftkit::rng::GENERATOR_ID;

/// Parse a drift-function argument.
///
/// Forms: `const:<delta>`, `mult:<delta>`, `table:v1,v2,...` or any infix
/// expression in `x` and `n`. The domain comes from `--xmin`/`--xmax`
/// (tables derive `xmax` from their length).
pub fn parse_hspec(
    text: &str,
    x_min: f64,
    x_max: Option<f64>,
    n: Option<f64>,
) -> Result<HSpec, String> {
    if let Some(v) = text.strip_prefix("const:") {
        let delta: f64 = v.parse().map_err(|_| format!("bad constant drift `{v}`"))?;
        let hi = x_max.ok_or("constant h needs --xmax (or --x0 as default)")?;
        return HSpec::constant(delta, x_min, hi).map_err(|e| e.to_string());
    }
    if let Some(v) = text.strip_prefix("mult:") {
        let delta: f64 = v
            .parse()
            .map_err(|_| format!("bad multiplicative drift `{v}`"))?;
        let hi = x_max.ok_or("multiplicative h needs --xmax (or --x0 as default)")?;
        return HSpec::multiplicative(delta, x_min, hi).map_err(|e| e.to_string());
    }
    if let Some(v) = text.strip_prefix("table:") {
        let values = parse_f64_list(v)?;
        return HSpec::table(x_min, values).map_err(|e| e.to_string());
    }
    let ast = ExprAst::parse(text).map_err(|e| e.to_string())?;
    let hi = x_max.ok_or("expression h needs --xmax (or --x0 as default)")?;
    HSpec::expression(ast, n.unwrap_or(0.0), x_min, hi).map_err(|e| e.to_string())
}

pub fn parse_f64_list(text: &str) -> Result<Vec<f64>, String> {
    text.split(',')
        .map(|s| s.trim())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<f64>().map_err(|_| format!("bad number `{s}`")))
        .collect()
}

/// Rows separated by `;`, entries by `,`: `1,0;1` is a 2-row gamma.
pub fn parse_f64_rows(text: &str) -> Result<Vec<Vec<f64>>, String> {
    text.split(';').map(parse_f64_list).collect()
}

/// Explicit-chain file: one state per line,
/// `state_label [target] (next_index:prob)*`, `#` comments. States marked
/// `target` are absorbing; the target threshold is their largest label.
pub fn parse_chain_file(text: &str) -> Result<MarkovChain, String> {
    let mut labels: Vec<f64> = Vec::new();
    let mut raw_rows: Vec<Option<Vec<(usize, f64)>>> = Vec::new();
    let mut target_labels: Vec<f64> = Vec::new();
    for (line_no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let label: f64 = parts
            .next()
            .unwrap()
            .parse()
            .map_err(|_| format!("line {}: bad state label", line_no + 1))?;
        let mut rest: Vec<&str> = parts.collect();
        let is_target = rest.first() == Some(&"target");
        if is_target {
            rest.remove(0);
            target_labels.push(label);
        }
        let mut row = Vec::new();
        for tok in rest {
            let (idx, prob) = tok
                .split_once(':')
                .ok_or_else(|| format!("line {}: expected index:prob, got `{tok}`", line_no + 1))?;
            let idx: usize = idx
                .parse()
                .map_err(|_| format!("line {}: bad state index `{idx}`", line_no + 1))?;
            let prob: f64 = prob
                .parse()
                .map_err(|_| format!("line {}: bad probability `{prob}`", line_no + 1))?;
            row.push((idx, prob));
        }
        labels.push(label);
        raw_rows.push(if is_target && row.is_empty() {
            None
        } else {
            Some(row)
        });
    }
    if labels.is_empty() {
        return Err("chain file has no states".into());
    }
    let threshold = target_labels
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);
    if threshold == f64::NEG_INFINITY {
        return Err("chain file marks no target state".into());
    }
    let rows: Vec<Vec<(usize, f64)>> = raw_rows
        .into_iter()
        .enumerate()
        .map(|(i, row)| row.unwrap_or_else(|| vec![(i, 1.0)]))
        .collect();
    MarkovChain::new(labels, rows, threshold).map_err(|e| e.to_string())
}

/// Minimal `key = value` spec document; later keys win.
pub fn parse_spec_file(text: &str) -> Result<Vec<(String, String)>, String> {
    let mut out = Vec::new();
    for (line_no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected key = value", line_no + 1))?;
        out.push((key.trim().to_string(), value.trim().to_string()));
    }
    Ok(out)
}

/// FNV-1a 64-bit content digest, hex-encoded. Stable bookkeeping hash for
/// reproducibility manifests, not a cryptographic digest.
pub fn fnv1a_hex(bytes: &[u8]) -> String {
    let mut hash: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    format!("{hash:016x}")
}

/// Run manifest accompanying every output: command echo, input digests,
/// tool version, master seed, generator id and timestamp. Written to stderr
/// (or a sidecar next to file outputs) so result payloads on stdout stay
/// byte-reproducible.
pub struct RunManifest {
    pub command: String,
    pub inputs: Vec<(String, String)>,
    pub seed: Option<u64>,
}

impl RunManifest {
    pub fn new(seed: Option<u64>) -> Self {
        let command = std::env::args().collect::<Vec<_>>().join(" ");
        Self {
            command,
            inputs: Vec::new(),
            seed,
        }
    }

    pub fn add_input(&mut self, path: &Path, contents: &[u8]) {
        self.inputs
            .push((path.display().to_string(), fnv1a_hex(contents)));
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "manifest-version: 1");
        let _ = writeln!(out, "tool: driftkit {}", env!("CARGO_PKG_VERSION"));
        let _ = writeln!(out, "command: {}", self.command);
        for (path, digest) in &self.inputs {
            let _ = writeln!(out, "input: {path} fnv1a64:{digest}");
        }
        if let Some(seed) = self.seed {
            let _ = writeln!(out, "master-seed: {seed}");
        }
        let _ = writeln!(out, "generator: {GENERATOR_ID}");
        let timestamp = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        let _ = writeln!(out, "timestamp: unix:{timestamp}");
        out
    }
}

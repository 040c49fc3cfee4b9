//! Run configuration: the JSON document a run reads (or the flags build), versioned and
//! validated before anything executes.

use debranges::canonical::{PiecewiseHamiltonian, Segment};
use debranges::space::WeightSpec;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub schema_version: u32,
    #[serde(flatten)]
    pub command: Command,
    #[serde(default)]
    pub output: Output,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Output {
    /// Report path; stdout when absent.
    pub report: Option<String>,
    pub csv: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", content = "parameters", rename_all = "kebab-case")]
pub enum Command {
    Certify(GeneratorParams),
    Construct(GeneratorParams),
    Atomize(AtomizeParams),
    Canonical(CanonicalParams),
    TypeEstimate(TypeParams),
    DiagnoseWeight(WeightParams),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Certify(_) => "certify",
            Command::Construct(_) => "construct",
            Command::Atomize(_) => "atomize",
            Command::Canonical(_) => "canonical",
            Command::TypeEstimate(_) => "type-estimate",
            Command::DiagnoseWeight(_) => "diagnose-weight",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Generator {
    Thm1,
    Thm2,
    PowerWeight,
    PerturbedLattice,
    Lacunary,
}

fn default_n() -> i64 {
    10_000
}
fn one() -> u32 {
    1
}
fn seed() -> u64 {
    42
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorParams {
    pub generator: Generator,
    #[serde(rename = "N", default = "default_n")]
    pub n: i64,
    #[serde(default = "one")]
    pub k: u32,
    /// thm2 frequencies; defaults to [0.3, 0.5, 0.7].
    #[serde(default)]
    pub s_list: Option<Vec<f64>>,
    #[serde(default)]
    pub gamma: Option<f64>,
    #[serde(default)]
    pub beta: Option<f64>,
    #[serde(default)]
    pub q: Option<f64>,
    /// Largest k probed by the lacunary construction.
    #[serde(default)]
    pub k_probe: Option<u32>,
    #[serde(default = "seed")]
    pub seed: u64,
    #[serde(default)]
    pub pf_tol: Option<f64>,
    #[serde(default)]
    pub limit_tol: Option<f64>,
    #[serde(default)]
    pub sum_floor: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomizeParams {
    /// Support ℤ ∩ [−N, N].
    #[serde(rename = "N", default = "default_n")]
    pub n: i64,
    /// μ_n = (1 + |n|)^e; 0 gives unit masses.
    #[serde(default)]
    pub mass_exponent: f64,
    #[serde(default)]
    pub u: f64,
    /// Roots x_n for n = −window..window−1.
    #[serde(default = "default_root_window")]
    pub window: i64,
    /// When given, u is replaced by a level avoiding these points.
    #[serde(default)]
    pub avoid: Option<Vec<f64>>,
    #[serde(default = "default_p")]
    pub p: f64,
    /// Seeded random finite coefficient vectors whose transport is checked.
    #[serde(default)]
    pub isometry_trials: u32,
    /// Largest accepted isometry defect; reaching 1e-6 needs a root window near 2000.
    #[serde(default = "default_isometry_tol")]
    pub isometry_tol: f64,
    #[serde(default = "seed")]
    pub seed: u64,
}

fn default_root_window() -> i64 {
    50
}
fn default_isometry_tol() -> f64 {
    1e-6
}
fn default_p() -> f64 {
    10.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CanonicalParams {
    pub segments: Vec<Segment>,
    #[serde(default = "default_y_min")]
    pub y_min: f64,
    #[serde(default = "default_y_max")]
    pub y_max: f64,
    /// Relative degeneracy threshold for det H_j.
    #[serde(default)]
    pub tol: Option<f64>,
    /// Allowed relative gap between kdb_type and the growth estimate.
    #[serde(default = "default_type_tol")]
    pub type_tol: f64,
}

fn default_y_min() -> f64 {
    1.0
}
fn default_y_max() -> f64 {
    64.0
}
fn default_type_tol() -> f64 {
    0.02
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ModelSpec {
    Sin,
    /// Zeros ±(n − b)/a.
    Lattice { a: f64, b: f64 },
    /// The thm1 factor with zeros 1, 3, 5, … and −2, −4, ….
    Thm1G,
    ShiftedLattice { beta: f64 },
    Lacunary { q: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TypeParams {
    pub model: ModelSpec,
    #[serde(default = "default_y_min")]
    pub y_min: f64,
    #[serde(default = "default_y_max")]
    pub y_max: f64,
    /// When given, the run passes iff the estimate is within rel_tol of it.
    #[serde(default)]
    pub expected: Option<f64>,
    #[serde(default = "default_rel_tol")]
    pub rel_tol: f64,
}

fn default_rel_tol() -> f64 {
    0.1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightParams {
    pub weight: WeightSpec,
    #[serde(default = "default_radius")]
    pub radius: f64,
    #[serde(default = "default_levels")]
    pub ht_levels: (i32, i32),
}

fn default_radius() -> f64 {
    65536.0
}
fn default_levels() -> (i32, i32) {
    (-3, 12)
}

fn bad(msg: impl Into<String>) -> Result<(), String> {
    Err(msg.into())
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, String> {
        let raw: serde_json::Value = serde_json::from_str(text).map_err(|e| format!("config: {e}"))?;
        let obj = raw.as_object().ok_or("config: expected a JSON object")?;
        // flatten and deny_unknown_fields do not combine in serde, so the top level is checked here
        if let Some(k) = obj.keys().find(|k| !["schema_version", "command", "parameters", "output"].contains(&k.as_str())) {
            return Err(format!("config: unknown field `{k}`"));
        }
        let cfg: RunConfig = serde_json::from_value(raw).map_err(|e| format!("config: {e}"))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.schema_version != SCHEMA_VERSION {
            return bad(format!("schema_version {} is not supported (expected {SCHEMA_VERSION})", self.schema_version));
        }
        match &self.command {
            Command::Certify(p) | Command::Construct(p) => p.validate(),
            Command::Atomize(p) => {
                if p.n < 10 || p.window < 1 || p.window >= p.n {
                    return bad("atomize needs N ≥ 10 and 1 ≤ window < N");
                }
                if !p.mass_exponent.is_finite() || !p.u.is_finite() {
                    return bad("mass_exponent and u must be finite");
                }
                if p.avoid.is_some() && p.p < 2.0 {
                    return bad("p must be at least 2");
                }
                Ok(())
            }
            Command::Canonical(p) => {
                PiecewiseHamiltonian::new(p.segments.clone()).map_err(|e| format!("segments: {e}"))?;
                grid_ok(p.y_min, p.y_max)
            }
            Command::TypeEstimate(p) => grid_ok(p.y_min, p.y_max),
            Command::DiagnoseWeight(p) => {
                if !(p.radius > 1.0) || p.ht_levels.0 > p.ht_levels.1 {
                    return bad("weight grid needs radius > 1 and ordered ht_levels");
                }
                Ok(())
            }
        }
    }
}

fn grid_ok(lo: f64, hi: f64) -> Result<(), String> {
    if !(lo > 0.0 && hi >= 4.0 * lo) {
        return bad("the y grid needs 0 < y_min and y_max ≥ 4·y_min (three dyadic points)");
    }
    Ok(())
}

impl GeneratorParams {
    fn validate(&self) -> Result<(), String> {
        if self.n < 100 {
            return bad("N must be at least 100");
        }
        if self.k == 0 {
            return bad("k must be positive");
        }
        let need = |v: Option<f64>, name: &str| v.map(|_| ()).ok_or(format!("generator {:?} needs {name}", self.generator));
        match self.generator {
            Generator::PowerWeight => need(self.gamma, "gamma")?,
            Generator::PerturbedLattice => need(self.beta, "beta")?,
            _ => {}
        }
        if let Some(q) = self.q {
            if !(q > 1.0) {
                return bad("q must exceed 1");
            }
        }
        Ok(())
    }

    /// Fills generator defaults so reports record what actually ran.
    pub fn resolved(&self) -> Self {
        let mut p = self.clone();
        match p.generator {
            Generator::Thm2 if p.s_list.is_none() => p.s_list = Some(vec![0.3, 0.5, 0.7]),
            Generator::Lacunary => {
                p.q.get_or_insert(2.0);
                p.k_probe.get_or_insert(3);
            }
            _ => {}
        }
        p
    }
}

/// Parses "I:pi,E1:0.5,[2,0.5,1]:1" into segments: I, E1 = diag(1,0), E2 = diag(0,1) or
/// [a,b,c] = [[a,b],[b,c]], each followed by a length ("pi", "2pi", "0.5", …).
pub fn parse_segments(text: &str) -> Result<Vec<Segment>, String> {
    let mut out = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let (h, after) = if let Some(r) = rest.strip_prefix('[') {
            let end = r.find(']').ok_or("unclosed '[' in segments")?;
            let nums: Vec<f64> = r[..end]
                .split(',')
                .map(|s| s.trim().parse::<f64>().map_err(|_| format!("bad matrix entry '{s}'")))
                .collect::<Result<_, _>>()?;
            if nums.len() != 3 {
                return Err("a matrix segment needs three entries [a,b,c]".into());
            }
            ([[nums[0], nums[1]], [nums[1], nums[2]]], &r[end + 1..])
        } else {
            let end = rest.find(':').ok_or(format!("segment '{rest}' lacks ':length'"))?;
            let h = match rest[..end].trim() {
                "I" => [[1.0, 0.0], [0.0, 1.0]],
                "E1" => [[1.0, 0.0], [0.0, 0.0]],
                "E2" => [[0.0, 0.0], [0.0, 1.0]],
                other => return Err(format!("unknown Hamiltonian '{other}' (use I, E1, E2 or [a,b,c])")),
            };
            (h, &rest[end..])
        };
        let after = after.strip_prefix(':').ok_or("expected ':' before the segment length")?;
        let (len_text, next) = match after.find(',') {
            Some(i) => (&after[..i], &after[i + 1..]),
            None => (after, ""),
        };
        out.push(Segment { length: parse_length(len_text.trim())?, h });
        rest = next.trim();
    }
    if out.is_empty() {
        return Err("no segments given".into());
    }
    Ok(out)
}

fn parse_length(s: &str) -> Result<f64, String> {
    let err = || format!("bad segment length '{s}'");
    if let Some(m) = s.strip_suffix("pi") {
        let m = m.trim_end_matches('*');
        let f = if m.is_empty() { 1.0 } else { m.parse::<f64>().map_err(|_| err())? };
        return Ok(f * PI);
    }
    s.parse::<f64>().map_err(|_| err())
}

/// "power:p", "exp:c" or "const:v".
pub fn parse_weight(text: &str) -> Result<WeightSpec, String> {
    let (kind, v) = text.split_once(':').ok_or(format!("weight '{text}' should look like power:p"))?;
    let v: f64 = v.parse().map_err(|_| format!("bad weight parameter '{v}'"))?;
    match kind {
        "power" => Ok(WeightSpec::Power { p: v }),
        "exp" => Ok(WeightSpec::ExpAbs { c: v }),
        "const" if v > 0.0 => Ok(WeightSpec::Constant { value: v }),
        "const" => Err("a constant weight must be positive".into()),
        _ => Err(format!("unknown weight kind '{kind}' (power, exp, const)")),
    }
}

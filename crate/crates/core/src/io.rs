//! Instance and result files.
//!
//! Everything is JSON written by [`to_canonical_json`]: object keys sorted,
//! two-space indentation, every float with 17 significant digits, and
//! `+-inf` as the strings `"inf"` / `"-inf"`. Identical inputs therefore give
//! byte-identical files. Sweeps are CSV with an optional SVG chart.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::certify::{certify, Certificate};
use crate::dualsolve::{DualConfig, DualSolution};
use crate::error::{Error, Result};
use crate::ground::{refine_points, Field, GroundSet, Norm};
use crate::losses::Loss;
use crate::measures::{Coupling, TwoClassMeasure};
use crate::pipeline::Solution;
use crate::primalsolve::{EtaField, PrimalConfig};

pub const SCHEMA_VERSION: u32 = 1;
/// Relative tolerance when re-checking stored numbers.
pub const VERIFY_TOL: f64 = 1e-9;

/// Serde adapter for floats that may be infinite.
pub mod ext {
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else if v.is_nan() {
            s.serialize_str("nan")
        } else if *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Num(f64),
        Str(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(v),
            Raw::Str(s) => match s.as_str() {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                other => Err(de::Error::custom(format!("expected a number, \"inf\" or \"-inf\", found \"{other}\""))),
            },
        }
    }
}

/// A vector of extended reals.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExtVec(pub Vec<f64>);

impl Serialize for ExtVec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        #[derive(Serialize)]
        struct One(#[serde(with = "ext")] f64);
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for &v in &self.0 {
            seq.serialize_element(&One(v))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for ExtVec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct One(#[serde(with = "ext")] f64);
        let v: Vec<One> = Vec::deserialize(d)?;
        Ok(ExtVec(v.into_iter().map(|o| o.0).collect()))
    }
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    let pad = |out: &mut String, n: usize| out.extend(std::iter::repeat_n(' ', n));
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(i) = n.as_u64() {
                write!(out, "{i}").unwrap();
            } else if let Some(i) = n.as_i64() {
                write!(out, "{i}").unwrap();
            } else {
                let f = n.as_f64().expect("finite JSON number");
                write!(out, "{:.16e}", if f == 0.0 { 0.0 } else { f }).unwrap();
            }
        }
        Value::String(s) => out.push_str(&serde_json::to_string(s).expect("string")),
        Value::Array(a) => {
            // Short arrays of scalars (coupling triples, coordinates) stay on one line.
            let flat = a.len() <= 3 && a.iter().all(|x| !x.is_array() && !x.is_object());
            if a.is_empty() {
                out.push_str("[]");
            } else if flat {
                out.push('[');
                for (k, x) in a.iter().enumerate() {
                    if k > 0 {
                        out.push_str(", ");
                    }
                    write_value(out, x, indent);
                }
                out.push(']');
            } else {
                out.push_str("[\n");
                for (k, x) in a.iter().enumerate() {
                    pad(out, indent + 2);
                    write_value(out, x, indent + 2);
                    out.push_str(if k + 1 < a.len() { ",\n" } else { "\n" });
                }
                pad(out, indent);
                out.push(']');
            }
        }
        Value::Object(m) => {
            if m.is_empty() {
                out.push_str("{}");
                return;
            }
            let sorted: BTreeMap<&String, &Value> = m.iter().collect();
            out.push_str("{\n");
            for (k, (key, x)) in sorted.iter().enumerate() {
                pad(out, indent + 2);
                out.push_str(&serde_json::to_string(key).expect("key"));
                out.push_str(": ");
                write_value(out, x, indent + 2);
                out.push_str(if k + 1 < sorted.len() { ",\n" } else { "\n" });
            }
            pad(out, indent);
            out.push('}');
        }
    }
}

/// Canonical JSON text of any serializable value.
pub fn to_canonical_json<S: Serialize>(value: &S) -> Result<String> {
    let v = serde_json::to_value(value).map_err(|e| Error::Write(e.to_string()))?;
    let mut out = String::new();
    write_value(&mut out, &v, 0);
    out.push('\n');
    Ok(out)
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Write(format!("{}: {e}", path.display())))
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// On-disk instance layout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub schema_version: u32,
    pub points: Vec<Vec<f64>>,
    pub norm: Norm,
    pub epsilon: f64,
    pub mass0: Vec<f64>,
    pub mass1: Vec<f64>,
    /// Interior points added per segment between nearby points.
    #[serde(default)]
    pub refine: usize,
    #[serde(default)]
    pub primal: PrimalConfig,
    #[serde(default)]
    pub dual: DualConfig,
}

impl InstanceFile {
    /// SHA-256 of the canonical text, used to pair results with instances.
    pub fn digest(&self) -> Result<String> {
        let text = to_canonical_json(self)?;
        Ok(hex::encode(Sha256::digest(text.as_bytes())))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Validation(m));
        if self.schema_version != SCHEMA_VERSION {
            return bad(format!("unsupported schema_version {} (expected {SCHEMA_VERSION})", self.schema_version));
        }
        if self.points.is_empty() {
            return bad("points: empty ground set".into());
        }
        if !(self.epsilon >= 0.0) || !self.epsilon.is_finite() {
            return bad(format!("epsilon: {} is not a nonnegative finite number", self.epsilon));
        }
        for (name, m) in [("mass0", &self.mass0), ("mass1", &self.mass1)] {
            if m.len() != self.points.len() {
                return bad(format!("{name}: {} entries for {} points", m.len(), self.points.len()));
            }
            if let Some((i, v)) = m.iter().enumerate().find(|(_, v)| !(**v >= 0.0) || !v.is_finite()) {
                return bad(format!("{name}[{i}] = {v} is not a nonnegative finite mass"));
            }
        }
        Ok(())
    }

    /// Ground set (after refinement) and measure; new points carry no mass.
    pub fn build(&self) -> Result<(GroundSet<f64>, TwoClassMeasure<f64>)> {
        self.validate()?;
        let pts = refine_points(&self.points, self.norm, self.epsilon, self.refine);
        let g = GroundSet::new(&pts, self.norm, self.epsilon).map_err(|e| Error::Validation(e.to_string()))?;
        let pad = |m: &[f64]| {
            let mut v = m.to_vec();
            v.resize(pts.len(), 0.0);
            v
        };
        let m = TwoClassMeasure::new(pad(&self.mass0), pad(&self.mass1))?;
        Ok((g, m))
    }
}

/// A loaded, validated instance.
#[derive(Debug, Clone)]
pub struct Instance {
    pub file: InstanceFile,
    pub ground: GroundSet<f64>,
    pub measure: TwoClassMeasure<f64>,
    pub digest: String,
}

impl Instance {
    pub fn from_file(file: InstanceFile) -> Result<Self> {
        let (ground, measure) = file.build()?;
        let digest = file.digest()?;
        Ok(Self { file, ground, measure, digest })
    }
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let file: InstanceFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    Instance::from_file(file)
}

pub fn load_instance(path: impl AsRef<Path>) -> Result<Instance> {
    let path = path.as_ref();
    parse_instance(&read_file(path)?).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

pub fn save_instance(path: impl AsRef<Path>, file: &InstanceFile) -> Result<()> {
    write_file(path.as_ref(), &to_canonical_json(file)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateRecord {
    pub loss: String,
    #[serde(with = "ext")]
    pub primal_value: f64,
    #[serde(with = "ext")]
    pub dual_value: f64,
    #[serde(with = "ext")]
    pub gap: f64,
    #[serde(with = "ext")]
    pub slack_sup_r1: f64,
    #[serde(with = "ext")]
    pub slack_sup_r0: f64,
    #[serde(with = "ext")]
    pub slack_pointwise: f64,
    #[serde(with = "ext")]
    pub support_violation: f64,
    pub winf_ok: bool,
    pub diagnostic: bool,
}

impl From<&Certificate> for CertificateRecord {
    fn from(c: &Certificate) -> Self {
        Self {
            loss: c.loss.clone(),
            primal_value: c.primal_value,
            dual_value: c.dual_value,
            gap: c.gap,
            slack_sup_r1: c.slack_sup_r1,
            slack_sup_r0: c.slack_sup_r0,
            slack_pointwise: c.slack_pointwise,
            support_violation: c.support_violation,
            winf_ok: c.winf_ok,
            diagnostic: c.diagnostic,
        }
    }
}

impl From<&CertificateRecord> for Certificate {
    fn from(c: &CertificateRecord) -> Self {
        Self {
            loss: c.loss.clone(),
            primal_value: c.primal_value,
            dual_value: c.dual_value,
            gap: c.gap,
            slack_sup_r1: c.slack_sup_r1,
            slack_sup_r0: c.slack_sup_r0,
            slack_pointwise: c.slack_pointwise,
            support_violation: c.support_violation,
            winf_ok: c.winf_ok,
            diagnostic: c.diagnostic,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DualRecord {
    /// `(source, target, mass)` triples.
    pub coupling0: Vec<(usize, usize, f64)>,
    pub coupling1: Vec<(usize, usize, f64)>,
    pub m0: Vec<f64>,
    pub m1: Vec<f64>,
    pub objective: f64,
}

impl DualRecord {
    pub fn from_solution(d: &DualSolution<f64>) -> Self {
        Self {
            coupling0: d.coupling0.entries().to_vec(),
            coupling1: d.coupling1.entries().to_vec(),
            m0: d.m0.clone(),
            m1: d.m1.clone(),
            objective: d.objective,
        }
    }

    /// Rebuilds the solution from the couplings alone.
    pub fn to_solution(&self, n: usize) -> Result<DualSolution<f64>> {
        for &(i, j, _) in self.coupling0.iter().chain(&self.coupling1) {
            if i >= n || j >= n {
                return Err(Error::InfeasibleDual(format!("pair ({i}, {j}) out of range for {n} points")));
            }
        }
        DualSolution::from_couplings(
            &Loss::Exponential,
            n,
            Coupling::from_entries(self.coupling0.clone()),
            Coupling::from_entries(self.coupling1.clone()),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Provenance {
    pub seed: u64,
    pub primal_iterations: usize,
    pub primal_converged: bool,
    pub dual_iterations: usize,
    pub dual_converged: bool,
    /// Only written on request: it would break byte-stability.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResultFile {
    pub schema_version: u32,
    pub instance_digest: String,
    /// The loss requested on the command line.
    pub loss: String,
    pub tol: f64,
    pub certificates: Vec<CertificateRecord>,
    /// `eta_hat` and one score field per certified loss, keyed by loss name.
    pub fields: BTreeMap<String, ExtVec>,
    pub dual: DualRecord,
    pub provenance: Provenance,
}

impl ResultFile {
    pub fn new(
        instance: &Instance,
        solution: &Solution<f64>,
        loss: Loss,
        tol: f64,
        seed: u64,
        wall_time_ms: Option<f64>,
    ) -> Self {
        let mut fields = BTreeMap::new();
        fields.insert("eta_hat".to_string(), ExtVec(solution.eta_hat.values().to_vec()));
        for o in &solution.outcomes {
            fields.insert(o.certificate.loss.clone(), ExtVec(o.f.0.clone()));
        }
        Self {
            schema_version: SCHEMA_VERSION,
            instance_digest: instance.digest.clone(),
            loss: loss.key().to_string(),
            tol,
            certificates: solution.outcomes.iter().map(|o| CertificateRecord::from(&o.certificate)).collect(),
            fields,
            dual: DualRecord::from_solution(&solution.dual),
            provenance: Provenance {
                seed,
                primal_iterations: solution.primal.iterations,
                primal_converged: solution.primal.converged,
                dual_iterations: solution.dual.iterations,
                dual_converged: solution.dual.converged,
                wall_time_ms,
            },
        }
    }

    pub fn certificate(&self, loss: Loss) -> Option<&CertificateRecord> {
        self.certificates.iter().find(|c| c.loss == loss.key())
    }
}

pub fn save_result(path: impl AsRef<Path>, result: &ResultFile) -> Result<()> {
    write_file(path.as_ref(), &to_canonical_json(result)?)
}

pub fn parse_result(text: &str) -> Result<ResultFile> {
    let r: ResultFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if r.schema_version != SCHEMA_VERSION {
        return Err(Error::Validation(format!(
            "unsupported schema_version {} (expected {SCHEMA_VERSION})",
            r.schema_version
        )));
    }
    Ok(r)
}

pub fn load_result(path: impl AsRef<Path>) -> Result<ResultFile> {
    let path = path.as_ref();
    parse_result(&read_file(path)?).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

fn same(a: f64, b: f64) -> bool {
    a == b || (a - b).abs() <= VERIFY_TOL * a.abs().max(b.abs()).max(1.0)
}

/// Recomputes every stored certificate number from the stored witnesses
/// (fields and couplings) and the instance. Returns the first mismatch or
/// failed threshold as a message.
pub fn verify_result(instance: &Instance, result: &ResultFile) -> std::result::Result<(), String> {
    if result.instance_digest != instance.digest {
        return Err(format!(
            "instance_digest: result was produced for {}, instance is {}",
            result.instance_digest, instance.digest
        ));
    }
    let (g, m) = (&instance.ground, &instance.measure);
    let n = g.len();
    let dual = result.dual.to_solution(n).map_err(|e| format!("dual: {e}"))?;
    dual.check_feasible(g, m).map_err(|e| format!("dual: {e}"))?;
    for (name, stored, fresh) in [("dual.m0", &result.dual.m0, &dual.m0), ("dual.m1", &result.dual.m1, &dual.m1)] {
        if stored.len() != n {
            return Err(format!("{name}: {} entries for {n} points", stored.len()));
        }
        if let Some(i) = (0..n).find(|&i| !same(stored[i], fresh[i])) {
            return Err(format!("{name}[{i}]: stored {} but couplings give {}", stored[i], fresh[i]));
        }
    }
    if !same(result.dual.objective, dual.objective) {
        return Err(format!("dual.objective: stored {} but recomputed {}", result.dual.objective, dual.objective));
    }
    let field = |key: &str| -> std::result::Result<Field<f64>, String> {
        let v = result.fields.get(key).ok_or_else(|| format!("fields.{key}: missing"))?;
        if v.0.len() != n {
            return Err(format!("fields.{key}: {} entries for {n} points", v.0.len()));
        }
        Ok(Field(v.0.clone()))
    };
    let eta = EtaField::new(field("eta_hat")?.0).map_err(|e| format!("fields.eta_hat: {e}"))?;
    let total = m.total();
    if result.certificates.is_empty() {
        return Err("certificates: none stored".into());
    }
    for stored in &result.certificates {
        let loss: Loss = stored.loss.parse().map_err(|e| format!("certificates: {e}"))?;
        let f = field(&stored.loss)?;
        let fresh = certify(loss, &f, &eta, &dual, g, m).map_err(|e| format!("{}: {e}", stored.loss))?;
        let pairs = [
            ("primal_value", stored.primal_value, fresh.primal_value),
            ("dual_value", stored.dual_value, fresh.dual_value),
            ("gap", stored.gap, fresh.gap),
            ("slack_sup_r1", stored.slack_sup_r1, fresh.slack_sup_r1),
            ("slack_sup_r0", stored.slack_sup_r0, fresh.slack_sup_r0),
            ("slack_pointwise", stored.slack_pointwise, fresh.slack_pointwise),
            ("support_violation", stored.support_violation, fresh.support_violation),
        ];
        for (name, a, b) in pairs {
            if !same(a, b) {
                return Err(format!("{}.{name}: stored {a} but recomputed {b}", stored.loss));
            }
        }
        if stored.winf_ok != fresh.winf_ok || stored.diagnostic != fresh.diagnostic {
            return Err(format!("{}: stored flags do not match recomputation", stored.loss));
        }
        if stored.diagnostic {
            continue;
        }
        if !fresh.winf_ok {
            return Err(format!("{}.winf_ok: attack leaves the epsilon ball", stored.loss));
        }
        if fresh.gap < -VERIFY_TOL * total.max(1.0) {
            return Err(format!("{}.gap: {} is negative", stored.loss, fresh.gap));
        }
        let tol = if stored.loss == result.loss { result.tol } else { crate::pipeline::default_tol(loss) };
        if !fresh.within(tol, total) {
            return Err(format!("{}.gap: {} exceeds tolerance {tol}", stored.loss, fresh.gap));
        }
        for (name, v) in [("slack_sup_r1", fresh.slack_sup_r1), ("slack_sup_r0", fresh.slack_sup_r0), ("slack_pointwise", fresh.slack_pointwise)] {
            if v < -VERIFY_TOL * total.max(1.0) {
                return Err(format!("{}.{name}: {v} is negative", stored.loss));
            }
        }
    }
    Ok(())
}

/// One row of a sweep over epsilon.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub eps: f64,
    pub loss: String,
    /// `None` when the solve at this epsilon failed.
    pub values: Option<SweepValues>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepValues {
    pub primal: f64,
    pub dual: f64,
    pub gap: f64,
    pub iters: usize,
    pub runtime_ms: f64,
}

pub const SWEEP_HEADER: [&str; 7] = ["eps", "loss", "primal", "dual", "gap", "iters", "runtime_ms"];

fn fmt_f(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "nan".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

pub fn sweep_csv(rows: &[SweepRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(SWEEP_HEADER).map_err(|e| Error::Write(e.to_string()))?;
    for r in rows {
        let rec = match &r.values {
            Some(v) => vec![
                fmt_f(r.eps),
                r.loss.clone(),
                fmt_f(v.primal),
                fmt_f(v.dual),
                fmt_f(v.gap),
                v.iters.to_string(),
                format!("{:.3}", v.runtime_ms),
            ],
            None => vec![fmt_f(r.eps), r.loss.clone(), "nan".into(), "nan".into(), "nan".into(), "failed".into(), "nan".into()],
        };
        w.write_record(&rec).map_err(|e| Error::Write(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Write(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Write(e.to_string()))
}

pub fn parse_sweep_csv(text: &str) -> Result<Vec<SweepRow>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> =
        r.headers().map_err(|e| Error::Parse(e.to_string()))?.iter().map(|s| s.to_string()).collect();
    if header != SWEEP_HEADER {
        return Err(Error::Parse(format!("unexpected sweep header {header:?}")));
    }
    let num = |s: &str| -> Result<f64> {
        match s {
            "inf" => Ok(f64::INFINITY),
            "-inf" => Ok(f64::NEG_INFINITY),
            "nan" => Ok(f64::NAN),
            _ => s.parse().map_err(|_| Error::Parse(format!("bad number {s:?}"))),
        }
    };
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
        let values = if &rec[5] == "failed" {
            None
        } else {
            Some(SweepValues {
                primal: num(&rec[2])?,
                dual: num(&rec[3])?,
                gap: num(&rec[4])?,
                iters: rec[5].parse().map_err(|_| Error::Parse(format!("bad iteration count {:?}", &rec[5])))?,
                runtime_ms: num(&rec[6])?,
            })
        };
        out.push(SweepRow { eps: num(&rec[0])?, loss: rec[1].to_string(), values });
    }
    Ok(out)
}

/// Line chart of primal (solid) and dual (dashed) values against epsilon,
/// one colour per loss.
pub fn sweep_svg(rows: &[SweepRow]) -> String {
    const W: f64 = 640.0;
    const H: f64 = 400.0;
    const M: f64 = 50.0;
    let ok: Vec<(&SweepRow, &SweepValues)> =
        rows.iter().filter_map(|r| r.values.as_ref().map(|v| (r, v))).filter(|(_, v)| v.primal.is_finite()).collect();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, 0.0_f64, f64::NEG_INFINITY);
    for (r, v) in &ok {
        x0 = x0.min(r.eps);
        x1 = x1.max(r.eps);
        y0 = y0.min(v.dual.min(v.primal));
        y1 = y1.max(v.primal.max(v.dual));
    }
    if !(x1 > x0) {
        x1 = x0 + 1.0;
    }
    if !(y1 > y0) {
        y1 = y0 + 1.0;
    }
    let sx = |x: f64| M + (x - x0) / (x1 - x0) * (W - 2.0 * M);
    let sy = |y: f64| H - M - (y - y0) / (y1 - y0) * (H - 2.0 * M);
    let colours = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];
    let mut s = String::new();
    writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#).unwrap();
    writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#).unwrap();
    writeln!(
        s,
        r#"<path d="M{M} {} L{} {} M{M} {} L{M} {M}" stroke="black" fill="none"/>"#,
        H - M,
        W - M,
        H - M,
        H - M
    )
    .unwrap();
    writeln!(s, r#"<text x="{}" y="{}" font-size="12" text-anchor="middle">epsilon</text>"#, W / 2.0, H - 12.0).unwrap();
    writeln!(s, r#"<text x="{M}" y="{}" font-size="11" text-anchor="middle">{x0:.3}</text>"#, H - M + 16.0).unwrap();
    writeln!(s, r#"<text x="{}" y="{}" font-size="11" text-anchor="middle">{x1:.3}</text>"#, W - M, H - M + 16.0).unwrap();
    writeln!(s, r#"<text x="{}" y="{}" font-size="11" text-anchor="end">{y0:.3}</text>"#, M - 4.0, H - M).unwrap();
    writeln!(s, r#"<text x="{}" y="{}" font-size="11" text-anchor="end">{y1:.3}</text>"#, M - 4.0, M + 4.0).unwrap();
    let mut losses: Vec<&str> = ok.iter().map(|(r, _)| r.loss.as_str()).collect();
    losses.dedup();
    losses.sort();
    losses.dedup();
    for (k, loss) in losses.iter().enumerate() {
        let colour = colours[k % colours.len()];
        let pts: Vec<(f64, f64, f64)> =
            ok.iter().filter(|(r, _)| r.loss == *loss).map(|(r, v)| (r.eps, v.primal, v.dual)).collect();
        for (dash, pick) in [("", 1usize), (r#" stroke-dasharray="5,4""#, 2)] {
            let d: Vec<String> = pts
                .iter()
                .enumerate()
                .map(|(i, p)| {
                    let y = if pick == 1 { p.1 } else { p.2 };
                    format!("{}{:.2} {:.2}", if i == 0 { "M" } else { "L" }, sx(p.0), sy(y))
                })
                .collect();
            writeln!(s, r#"<path d="{}" stroke="{colour}" fill="none" stroke-width="2"{dash}/>"#, d.join(" ")).unwrap();
        }
        writeln!(
            s,
            r#"<text x="{}" y="{}" font-size="12" fill="{colour}">{loss} (solid primal, dashed dual)</text>"#,
            M + 10.0,
            M + 14.0 + 16.0 * k as f64
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    s
}

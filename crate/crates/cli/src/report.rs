//! Dual-format report emission: a line-oriented machine format with a
//! stable schema, and human-readable aligned tables.
//!
//! The machine format is `key value` lines. Floating-point numbers are
//! printed in scientific notation with 17 significant digits, which
//! round-trips IEEE doubles bit-exactly; absent values are `-`. Every
//! document embeds the schema version, the tool version, and the fully
//! resolved job parameters, and each report carries the provenance of its
//! best bounds.

use std::fmt::Write as _;

use jsc_core::engine::bounds::Provenance;
use jsc_core::engine::perturb::DeltaOutcome;
use jsc_core::engine::trace_seq::TraceDiagnostic;
use jsc_core::{
    BoundReport, Interval, KronReport, NormKind, PerturbationReport, SubradiusOutcome,
    TraceKronCheck, TraceSeqReport,
};

use crate::job::{Command, Format, JobSpec};

pub const SCHEMA: &str = "jsc-report/1";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Report payload of one run.
#[derive(Debug, Clone, PartialEq)]
pub enum ReportBody {
    Bounds(BoundReport),
    Subradius(SubradiusOutcome),
    Kron(KronReport),
    TraceSeq(TraceSeqReport),
    ConeCheck(ConeCheckReport),
    Perturb(PerturbationReport),
    Verify(VerifyReport),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrimitivityStatus {
    Primitive(usize),
    NotFoundWithin(usize),
    /// Positivity is undefined on a non-proper cone.
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MemberCheck {
    pub invariant: bool,
    pub positive: Option<bool>,
    pub primitivity: PrimitivityStatus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InnerPairCheck {
    pub embedded: bool,
    pub inner_invariant_all: bool,
    pub beta_estimate: Option<f64>,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConeCheckReport {
    pub dim: usize,
    pub cone_is_orthant: bool,
    pub full_dimensional: bool,
    pub pointed: bool,
    pub proper: bool,
    pub horizon: usize,
    pub members: Vec<MemberCheck>,
    pub inner: Option<InnerPairCheck>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyCheck {
    pub name: String,
    pub passed: bool,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<VerifyCheck>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// 17 significant digits: enough to reconstruct any finite double exactly.
pub fn fmt_f64(v: f64) -> String {
    // Normalize -0.0 so byte comparison of re-emitted documents is stable.
    format!("{:.16e}", v + 0.0)
}

pub fn parse_f64(token: &str) -> Result<f64, String> {
    let v: f64 = token
        .parse()
        .map_err(|_| format!("invalid number '{token}'"))?;
    if !v.is_finite() {
        return Err(format!("non-finite number '{token}'"));
    }
    Ok(v)
}

struct DocWriter {
    out: String,
}

impl DocWriter {
    fn new() -> Self {
        Self { out: String::new() }
    }

    fn kv(&mut self, key: &str, value: impl std::fmt::Display) {
        let _ = writeln!(self.out, "{key} {value}");
    }

    fn kv_f64(&mut self, key: &str, v: f64) {
        self.kv(key, fmt_f64(v));
    }

    fn kv_opt_f64(&mut self, key: &str, v: Option<f64>) {
        match v {
            Some(v) => self.kv_f64(key, v),
            None => self.kv(key, "-"),
        }
    }

    fn kv_f64_list(&mut self, key: &str, vs: &[f64]) {
        if vs.is_empty() {
            self.kv(key, "-");
        } else {
            let joined: Vec<String> = vs.iter().map(|&v| fmt_f64(v)).collect();
            self.kv(key, joined.join(" "));
        }
    }

    fn kv_opt_f64_list(&mut self, key: &str, vs: &[Option<f64>]) {
        if vs.is_empty() {
            self.kv(key, "-");
        } else {
            let joined: Vec<String> = vs
                .iter()
                .map(|v| v.map_or_else(|| "-".to_string(), fmt_f64))
                .collect();
            self.kv(key, joined.join(" "));
        }
    }

    fn kv_usize_list(&mut self, key: &str, vs: &[usize]) {
        if vs.is_empty() {
            self.kv(key, "-");
        } else {
            let joined: Vec<String> = vs.iter().map(|v| v.to_string()).collect();
            self.kv(key, joined.join(" "));
        }
    }

    fn kv_bool(&mut self, key: &str, v: bool) {
        self.kv(key, v);
    }

    fn kv_opt_bool(&mut self, key: &str, v: Option<bool>) {
        match v {
            Some(b) => self.kv(key, b),
            None => self.kv(key, "-"),
        }
    }

    fn interval(&mut self, prefix: &str, i: &Interval) {
        self.kv_f64(&format!("{prefix}_lower"), i.lower);
        self.kv_f64(&format!("{prefix}_upper"), i.upper);
        self.kv_bool(&format!("{prefix}_collapsed"), i.collapsed);
    }

    fn provenance(&mut self, key: &str, p: &Provenance) {
        let t = p.t.map_or_else(|| "-".to_string(), |t| t.to_string());
        self.kv(key, format!("{} {t}", p.rule));
    }
}

/// Ordered key-value view of a machine document.
pub struct Doc {
    entries: Vec<(String, String)>,
}

impl Doc {
    pub fn parse(text: &str) -> Result<Doc, String> {
        let mut entries = Vec::new();
        for line in text.lines() {
            let line = line.trim_end();
            if line.is_empty() {
                continue;
            }
            let (key, rest) = line.split_once(' ').unwrap_or((line, ""));
            entries.push((key.to_string(), rest.trim().to_string()));
        }
        Ok(Doc { entries })
    }

    pub fn get(&self, key: &str) -> Result<&str, String> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
            .ok_or_else(|| format!("missing key '{key}'"))
    }

    pub fn get_opt(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    fn f64(&self, key: &str) -> Result<f64, String> {
        parse_f64(self.get(key)?)
    }

    fn opt_f64(&self, key: &str) -> Result<Option<f64>, String> {
        let v = self.get(key)?;
        if v == "-" {
            Ok(None)
        } else {
            parse_f64(v).map(Some)
        }
    }

    fn f64_list(&self, key: &str) -> Result<Vec<f64>, String> {
        let v = self.get(key)?;
        if v == "-" {
            return Ok(Vec::new());
        }
        v.split_whitespace().map(parse_f64).collect()
    }

    fn opt_f64_list(&self, key: &str) -> Result<Vec<Option<f64>>, String> {
        let v = self.get(key)?;
        if v == "-" {
            return Ok(Vec::new());
        }
        v.split_whitespace()
            .map(|t| {
                if t == "-" {
                    Ok(None)
                } else {
                    parse_f64(t).map(Some)
                }
            })
            .collect()
    }

    fn usize_list(&self, key: &str) -> Result<Vec<usize>, String> {
        let v = self.get(key)?;
        if v == "-" {
            return Ok(Vec::new());
        }
        v.split_whitespace()
            .map(|t| {
                t.parse()
                    .map_err(|_| format!("invalid integer '{t}' under '{key}'"))
            })
            .collect()
    }

    fn usize(&self, key: &str) -> Result<usize, String> {
        self.get(key)?
            .parse()
            .map_err(|_| format!("invalid integer under '{key}'"))
    }

    fn u64(&self, key: &str) -> Result<u64, String> {
        self.get(key)?
            .parse()
            .map_err(|_| format!("invalid integer under '{key}'"))
    }

    fn bool(&self, key: &str) -> Result<bool, String> {
        match self.get(key)? {
            "true" => Ok(true),
            "false" => Ok(false),
            other => Err(format!("invalid boolean '{other}' under '{key}'")),
        }
    }

    fn opt_bool(&self, key: &str) -> Result<Option<bool>, String> {
        match self.get(key)? {
            "-" => Ok(None),
            "true" => Ok(Some(true)),
            "false" => Ok(Some(false)),
            other => Err(format!("invalid boolean '{other}' under '{key}'")),
        }
    }

    fn interval(&self, prefix: &str) -> Result<Interval, String> {
        Ok(Interval {
            lower: self.f64(&format!("{prefix}_lower"))?,
            upper: self.f64(&format!("{prefix}_upper"))?,
            collapsed: self.bool(&format!("{prefix}_collapsed"))?,
        })
    }

    fn provenance(&self, key: &str) -> Result<Provenance, String> {
        let v = self.get(key)?;
        let mut it = v.split_whitespace();
        let rule = it
            .next()
            .ok_or_else(|| format!("empty provenance under '{key}'"))?;
        let t = match it.next() {
            Some("-") | None => None,
            Some(t) => Some(t.parse().map_err(|_| format!("invalid length in '{v}'"))?),
        };
        Ok(Provenance {
            rule: rule.to_string(),
            t,
        })
    }
}

fn norm_token(kind: NormKind) -> &'static str {
    kind.label()
}

fn parse_norm(token: &str) -> Result<NormKind, String> {
    token.parse()
}

/// Serializes the full machine document: header plus report section.
pub fn emit_machine(job: &JobSpec, body: &ReportBody) -> String {
    let mut w = DocWriter::new();
    w.kv("schema", SCHEMA);
    w.kv("version", TOOL_VERSION);
    w.kv("command", job.command.token());
    w.kv("input", job.input.display());
    w.kv("t_max", job.t_max);
    w.kv("k_max", job.k_max);
    w.kv_f64("tol", job.tol);
    w.kv("norm", norm_token(job.norm));
    w.kv_f64_list("deltas", &job.deltas);
    w.kv("trials", job.trials);
    w.kv("seed", job.seed);
    w.kv("budget", job.budget);
    w.kv("dim_cap", job.dim_cap);
    w.kv_opt_f64("dedup_tol", job.dedup_tol);
    w.kv(
        "cone_override",
        if job.cone_override { "orthant" } else { "-" },
    );
    w.kv("format", job.format.token());
    match &job.out {
        Some(p) => w.kv("out", p.display()),
        None => w.kv("out", "-"),
    }
    match body {
        ReportBody::Bounds(r) => emit_bounds_section(&mut w, r),
        ReportBody::Subradius(o) => {
            emit_bounds_section(&mut w, &o.report);
            emit_subradius_section(&mut w, o);
        }
        ReportBody::Kron(r) => emit_kron_section(&mut w, r),
        ReportBody::TraceSeq(r) => emit_trace_seq_section(&mut w, r),
        ReportBody::ConeCheck(r) => emit_cone_check_section(&mut w, r),
        ReportBody::Perturb(r) => emit_perturb_section(&mut w, r),
        ReportBody::Verify(r) => emit_verify_section(&mut w, r),
    }
    w.out
}

fn emit_bounds_section(w: &mut DocWriter, r: &BoundReport) {
    w.kv("begin", "bounds");
    w.kv("bounds_norm", norm_token(r.norm_kind));
    w.kv_usize_list("t_values", &r.t_values);
    w.kv_f64_list("upper_jsr", &r.upper_jsr);
    w.kv_f64_list("lower_jsr_rho", &r.lower_jsr_rho);
    w.kv_opt_f64_list("lower_jsr_trace", &r.lower_jsr_trace);
    w.kv_f64_list("upper_sub_rho", &r.upper_sub_rho);
    w.kv_f64_list("upper_sub_norm", &r.upper_sub_norm);
    w.interval("best_jsr", &r.best_interval_jsr);
    w.interval("best_sub", &r.best_interval_sub);
    w.provenance("prov_jsr_lower", &r.jsr_lower_provenance);
    w.provenance("prov_jsr_upper", &r.jsr_upper_provenance);
    w.provenance("prov_sub_lower", &r.sub_lower_provenance);
    w.provenance("prov_sub_upper", &r.sub_upper_provenance);
    w.kv("products_enumerated", r.products_enumerated);
    w.kv("end", "bounds");
}

fn parse_bounds_section(doc: &Doc) -> Result<BoundReport, String> {
    Ok(BoundReport {
        norm_kind: parse_norm(doc.get("bounds_norm")?)?,
        t_values: doc.usize_list("t_values")?,
        upper_jsr: doc.f64_list("upper_jsr")?,
        lower_jsr_rho: doc.f64_list("lower_jsr_rho")?,
        lower_jsr_trace: doc.opt_f64_list("lower_jsr_trace")?,
        upper_sub_rho: doc.f64_list("upper_sub_rho")?,
        upper_sub_norm: doc.f64_list("upper_sub_norm")?,
        best_interval_jsr: doc.interval("best_jsr")?,
        best_interval_sub: doc.interval("best_sub")?,
        jsr_lower_provenance: doc.provenance("prov_jsr_lower")?,
        jsr_upper_provenance: doc.provenance("prov_jsr_upper")?,
        sub_lower_provenance: doc.provenance("prov_sub_lower")?,
        sub_upper_provenance: doc.provenance("prov_sub_upper")?,
        products_enumerated: doc.usize("products_enumerated")?,
    })
}

fn emit_subradius_section(w: &mut DocWriter, o: &SubradiusOutcome) {
    w.kv("begin", "subradius");
    w.interval("sub", &o.interval);
    w.kv_opt_bool("cone_invariant", o.cone_invariant);
    match &o.conic {
        Some(c) => {
            w.kv_f64("conic_r", c.r);
            w.kv_f64_list("conic_witness", &c.witness);
            w.kv("conic_iterations", c.bisection_iterations);
            w.kv_f64("conic_bracket_upper", c.bracket_upper);
        }
        None => {
            w.kv("conic_r", "-");
            w.kv("conic_witness", "-");
            w.kv("conic_iterations", "-");
            w.kv("conic_bracket_upper", "-");
        }
    }
    w.provenance("sub_lower_rule", &o.lower_provenance);
    w.kv("end", "subradius");
}

fn parse_subradius_section(doc: &Doc) -> Result<SubradiusOutcome, String> {
    let report = parse_bounds_section(doc)?;
    let conic = match doc.get("conic_r")? {
        "-" => None,
        _ => Some(jsc_core::ConicBound {
            r: doc.f64("conic_r")?,
            witness: doc.f64_list("conic_witness")?,
            bisection_iterations: doc.usize("conic_iterations")?,
            bracket_upper: doc.f64("conic_bracket_upper")?,
        }),
    };
    Ok(SubradiusOutcome {
        interval: doc.interval("sub")?,
        report,
        conic,
        cone_invariant: doc.opt_bool("cone_invariant")?,
        lower_provenance: doc.provenance("sub_lower_rule")?,
    })
}

fn emit_kron_section(w: &mut DocWriter, r: &KronReport) {
    w.kv("begin", "kron");
    w.kv_usize_list("k_values", &r.k_values);
    w.kv_f64_list("rho_sum", &r.rho_sum);
    w.kv_f64_list("upper_k", &r.upper_k);
    w.kv_f64_list("lower_k", &r.lower_k);
    w.kv("member_count", r.m);
    w.kv_opt_bool("cone_checked", r.cone_checked);
    w.kv("end", "kron");
}

fn parse_kron_section(doc: &Doc) -> Result<KronReport, String> {
    Ok(KronReport {
        k_values: doc.usize_list("k_values")?,
        rho_sum: doc.f64_list("rho_sum")?,
        upper_k: doc.f64_list("upper_k")?,
        lower_k: doc.f64_list("lower_k")?,
        m: doc.usize("member_count")?,
        cone_checked: doc.opt_bool("cone_checked")?,
    })
}

fn emit_trace_seq_section(w: &mut DocWriter, r: &TraceSeqReport) {
    w.kv("begin", "trace_seq");
    w.kv_usize_list("t_values", &r.t_values);
    w.kv_opt_f64_list("s_sequence", &r.s);
    w.kv_f64_list("r_sequence", &r.r);
    w.kv_bool(
        "all_members_nonnegative",
        r.diagnostic.all_members_nonnegative,
    );
    w.kv_bool("has_primitive_member", r.diagnostic.has_primitive_member);
    w.kv_usize_list("primitive_members", &r.diagnostic.primitive_members);
    w.kv("window_lo", r.diagnostic.window.0);
    w.kv("window_hi", r.diagnostic.window.1);
    w.kv_opt_f64("s_oscillation", r.diagnostic.s_oscillation);
    w.kv_f64("r_oscillation", r.diagnostic.r_oscillation);
    w.kv("s_undefined", r.diagnostic.s_undefined);
    w.kv("end", "trace_seq");
}

fn parse_trace_seq_section(doc: &Doc) -> Result<TraceSeqReport, String> {
    Ok(TraceSeqReport {
        t_values: doc.usize_list("t_values")?,
        s: doc.opt_f64_list("s_sequence")?,
        r: doc.f64_list("r_sequence")?,
        diagnostic: TraceDiagnostic {
            all_members_nonnegative: doc.bool("all_members_nonnegative")?,
            has_primitive_member: doc.bool("has_primitive_member")?,
            primitive_members: doc.usize_list("primitive_members")?,
            window: (doc.usize("window_lo")?, doc.usize("window_hi")?),
            s_oscillation: doc.opt_f64("s_oscillation")?,
            r_oscillation: doc.f64("r_oscillation")?,
            s_undefined: doc.usize("s_undefined")?,
        },
    })
}

fn emit_cone_check_section(w: &mut DocWriter, r: &ConeCheckReport) {
    w.kv("begin", "cone_check");
    w.kv("dim", r.dim);
    w.kv_bool("cone_is_orthant", r.cone_is_orthant);
    w.kv_bool("full_dimensional", r.full_dimensional);
    w.kv_bool("pointed", r.pointed);
    w.kv_bool("proper", r.proper);
    w.kv("primitivity_horizon", r.horizon);
    w.kv("member_count", r.members.len());
    for (i, m) in r.members.iter().enumerate() {
        let positive = m.positive.map_or_else(|| "-".into(), |b| b.to_string());
        let prim = match m.primitivity {
            PrimitivityStatus::Primitive(t) => format!("primitive:{t}"),
            PrimitivityStatus::NotFoundWithin(h) => format!("not-within:{h}"),
            PrimitivityStatus::NotApplicable => "-".into(),
        };
        w.kv(
            &format!("member_{i}"),
            format!("{} {positive} {prim}", m.invariant),
        );
    }
    match &r.inner {
        Some(inner) => {
            w.kv_bool("inner_embedded", inner.embedded);
            w.kv_bool("inner_invariant_all", inner.inner_invariant_all);
            w.kv_opt_f64("beta_estimate", inner.beta_estimate);
            w.kv("beta_samples", inner.samples);
        }
        None => {
            w.kv("inner_embedded", "-");
        }
    }
    w.kv("end", "cone_check");
}

fn parse_cone_check_section(doc: &Doc) -> Result<ConeCheckReport, String> {
    let count = doc.usize("member_count")?;
    let mut members = Vec::with_capacity(count);
    for i in 0..count {
        let raw = doc.get(&format!("member_{i}"))?;
        let tokens: Vec<&str> = raw.split_whitespace().collect();
        if tokens.len() != 3 {
            return Err(format!("malformed member entry '{raw}'"));
        }
        let invariant = tokens[0] == "true";
        let positive = match tokens[1] {
            "-" => None,
            "true" => Some(true),
            "false" => Some(false),
            other => return Err(format!("invalid positivity token '{other}'")),
        };
        let primitivity = if tokens[2] == "-" {
            PrimitivityStatus::NotApplicable
        } else if let Some(t) = tokens[2].strip_prefix("primitive:") {
            PrimitivityStatus::Primitive(t.parse().map_err(|_| "bad exponent".to_string())?)
        } else if let Some(h) = tokens[2].strip_prefix("not-within:") {
            PrimitivityStatus::NotFoundWithin(h.parse().map_err(|_| "bad horizon".to_string())?)
        } else {
            return Err(format!("invalid primitivity token '{}'", tokens[2]));
        };
        members.push(MemberCheck {
            invariant,
            positive,
            primitivity,
        });
    }
    let inner = match doc.get("inner_embedded")? {
        "-" => None,
        _ => Some(InnerPairCheck {
            embedded: doc.bool("inner_embedded")?,
            inner_invariant_all: doc.bool("inner_invariant_all")?,
            beta_estimate: doc.opt_f64("beta_estimate")?,
            samples: doc.usize("beta_samples")?,
        }),
    };
    Ok(ConeCheckReport {
        dim: doc.usize("dim")?,
        cone_is_orthant: doc.bool("cone_is_orthant")?,
        full_dimensional: doc.bool("full_dimensional")?,
        pointed: doc.bool("pointed")?,
        proper: doc.bool("proper")?,
        horizon: doc.usize("primitivity_horizon")?,
        members,
        inner,
    })
}

fn emit_perturb_section(w: &mut DocWriter, r: &PerturbationReport) {
    w.kv("begin", "perturb");
    w.kv_f64_list("perturb_deltas", &r.deltas);
    w.kv("perturb_trials", r.trials);
    w.kv("perturb_seed", r.seed);
    w.kv("perturb_t_max", r.t_max);
    w.kv_bool("positivity_mode", r.positivity_mode);
    w.interval("base_jsr", &r.base_jsr);
    w.interval("base_sub", &r.base_sub);
    w.kv("outcome_count", r.outcomes.len());
    for (i, o) in r.outcomes.iter().enumerate() {
        let fields = [
            fmt_f64(o.delta),
            fmt_f64(o.max_realized_hausdorff),
            fmt_f64(o.max_jsr_mid_deviation),
            fmt_f64(o.max_sub_mid_deviation),
            fmt_f64(o.worst_jsr_interval.lower),
            fmt_f64(o.worst_jsr_interval.upper),
            o.worst_jsr_interval.collapsed.to_string(),
            fmt_f64(o.worst_sub_interval.lower),
            fmt_f64(o.worst_sub_interval.upper),
            o.worst_sub_interval.collapsed.to_string(),
        ];
        w.kv(&format!("outcome_{i}"), fields.join(" "));
    }
    w.kv("end", "perturb");
}

fn parse_perturb_section(doc: &Doc) -> Result<PerturbationReport, String> {
    let count = doc.usize("outcome_count")?;
    let mut outcomes = Vec::with_capacity(count);
    for i in 0..count {
        let raw = doc.get(&format!("outcome_{i}"))?;
        let t: Vec<&str> = raw.split_whitespace().collect();
        if t.len() != 10 {
            return Err(format!("malformed outcome entry '{raw}'"));
        }
        let b = |s: &str| -> Result<bool, String> {
            match s {
                "true" => Ok(true),
                "false" => Ok(false),
                other => Err(format!("invalid boolean '{other}'")),
            }
        };
        outcomes.push(DeltaOutcome {
            delta: parse_f64(t[0])?,
            max_realized_hausdorff: parse_f64(t[1])?,
            max_jsr_mid_deviation: parse_f64(t[2])?,
            max_sub_mid_deviation: parse_f64(t[3])?,
            worst_jsr_interval: Interval {
                lower: parse_f64(t[4])?,
                upper: parse_f64(t[5])?,
                collapsed: b(t[6])?,
            },
            worst_sub_interval: Interval {
                lower: parse_f64(t[7])?,
                upper: parse_f64(t[8])?,
                collapsed: b(t[9])?,
            },
        });
    }
    Ok(PerturbationReport {
        deltas: doc.f64_list("perturb_deltas")?,
        outcomes,
        trials: doc.usize("perturb_trials")?,
        seed: doc.u64("perturb_seed")?,
        t_max: doc.usize("perturb_t_max")?,
        positivity_mode: doc.bool("positivity_mode")?,
        base_jsr: doc.interval("base_jsr")?,
        base_sub: doc.interval("base_sub")?,
    })
}

fn emit_verify_section(w: &mut DocWriter, r: &VerifyReport) {
    w.kv("begin", "verify");
    w.kv("check_count", r.checks.len());
    for (i, c) in r.checks.iter().enumerate() {
        let status = if c.passed { "pass" } else { "fail" };
        w.kv(
            &format!("check_{i}"),
            format!("{} {status} {}", c.name, c.note),
        );
    }
    w.kv("end", "verify");
}

fn parse_verify_section(doc: &Doc) -> Result<VerifyReport, String> {
    let count = doc.usize("check_count")?;
    let mut checks = Vec::with_capacity(count);
    for i in 0..count {
        let raw = doc.get(&format!("check_{i}"))?;
        let mut parts = raw.splitn(3, ' ');
        let name = parts.next().unwrap_or_default().to_string();
        let status = parts.next().unwrap_or_default();
        let note = parts.next().unwrap_or_default().to_string();
        let passed = match status {
            "pass" => true,
            "fail" => false,
            other => return Err(format!("invalid check status '{other}'")),
        };
        checks.push(VerifyCheck { name, passed, note });
    }
    Ok(VerifyReport { checks })
}

/// Parses a machine document back into the resolved job and its report.
pub fn parse_machine(text: &str) -> Result<(JobSpec, ReportBody), String> {
    let doc = Doc::parse(text)?;
    let schema = doc.get("schema")?;
    if schema != SCHEMA {
        return Err(format!(
            "unsupported schema '{schema}', expected '{SCHEMA}'"
        ));
    }
    let command = Command::from_token(doc.get("command")?)?;
    let job = JobSpec {
        command,
        input: doc.get("input")?.into(),
        t_max: doc.usize("t_max")?,
        k_max: doc.usize("k_max")?,
        tol: doc.f64("tol")?,
        norm: parse_norm(doc.get("norm")?)?,
        deltas: doc.f64_list("deltas")?,
        trials: doc.usize("trials")?,
        seed: doc.u64("seed")?,
        budget: doc.usize("budget")?,
        dim_cap: doc.usize("dim_cap")?,
        dedup_tol: doc.opt_f64("dedup_tol")?,
        cone_override: doc.get("cone_override")? == "orthant",
        format: Format::from_token(doc.get("format")?)?,
        out: match doc.get("out")? {
            "-" => None,
            p => Some(p.into()),
        },
    };
    let body = match command {
        Command::Bounds => ReportBody::Bounds(parse_bounds_section(&doc)?),
        Command::Subradius => ReportBody::Subradius(parse_subradius_section(&doc)?),
        Command::Kron => ReportBody::Kron(parse_kron_section(&doc)?),
        Command::TraceSeq => ReportBody::TraceSeq(parse_trace_seq_section(&doc)?),
        Command::ConeCheck => ReportBody::ConeCheck(parse_cone_check_section(&doc)?),
        Command::Perturb => ReportBody::Perturb(parse_perturb_section(&doc)?),
        Command::Verify => ReportBody::Verify(parse_verify_section(&doc)?),
    };
    Ok((job, body))
}

fn fmt_cell(v: f64) -> String {
    format!("{v:>15.9}")
}

fn fmt_opt_cell(v: Option<f64>) -> String {
    v.map_or_else(|| format!("{:>15}", "-"), fmt_cell)
}

fn interval_line(name: &str, i: &Interval, lower_src: &str, upper_src: &str) -> String {
    let collapsed = if i.collapsed { " (collapsed)" } else { "" };
    format!(
        "{name}: [{}, {}]{collapsed}   lower: {lower_src}, upper: {upper_src}\n",
        fmt_cell(i.lower).trim(),
        fmt_cell(i.upper).trim()
    )
}

fn prov_text(p: &Provenance) -> String {
    match p.t {
        Some(t) => format!("{} at t={t}", p.rule),
        None => p.rule.clone(),
    }
}

/// Renders a report as human-readable aligned tables. Column headers carry
/// the rule that produced each sequence.
pub fn emit_human(body: &ReportBody) -> String {
    let mut s = String::new();
    match body {
        ReportBody::Bounds(r) => human_bounds(&mut s, r),
        ReportBody::Subradius(o) => {
            human_bounds(&mut s, &o.report);
            human_subradius(&mut s, o);
        }
        ReportBody::Kron(r) => human_kron(&mut s, r),
        ReportBody::TraceSeq(r) => human_trace_seq(&mut s, r),
        ReportBody::ConeCheck(r) => human_cone_check(&mut s, r),
        ReportBody::Perturb(r) => human_perturb(&mut s, r),
        ReportBody::Verify(r) => human_verify(&mut s, r),
    }
    s
}

fn human_bounds(s: &mut String, r: &BoundReport) {
    let _ = writeln!(
        s,
        "bound sequences over product length t (operator norm: {})",
        r.norm_kind.label()
    );
    // Column headers are the provenance rules of the sequences.
    let _ = writeln!(
        s,
        "{:>4} {:>18} {:>18} {:>18} {:>18} {:>18}",
        "t",
        jsc_core::engine::bounds::RULE_MAX_NORM,
        jsc_core::engine::bounds::RULE_MAX_RHO,
        jsc_core::engine::bounds::RULE_TRACE_AVG,
        jsc_core::engine::bounds::RULE_MIN_RHO,
        jsc_core::engine::bounds::RULE_MIN_NORM,
    );
    let wide = |v: f64| format!("{v:>18.9}");
    let wide_opt =
        |v: Option<f64>| v.map_or_else(|| format!("{:>18}", "-"), |x| format!("{x:>18.9}"));
    for (i, t) in r.t_values.iter().enumerate() {
        let _ = writeln!(
            s,
            "{t:>4} {} {} {} {} {}",
            wide(r.upper_jsr[i]),
            wide(r.lower_jsr_rho[i]),
            wide_opt(r.lower_jsr_trace[i]),
            wide(r.upper_sub_rho[i]),
            wide(r.upper_sub_norm[i]),
        );
    }
    let _ = writeln!(s, "products enumerated: {}", r.products_enumerated);
    s.push_str(&interval_line(
        "jsr interval",
        &r.best_interval_jsr,
        &prov_text(&r.jsr_lower_provenance),
        &prov_text(&r.jsr_upper_provenance),
    ));
    s.push_str(&interval_line(
        "subradius interval (enumeration only)",
        &r.best_interval_sub,
        &prov_text(&r.sub_lower_provenance),
        &prov_text(&r.sub_upper_provenance),
    ));
}

fn human_subradius(s: &mut String, o: &SubradiusOutcome) {
    match o.cone_invariant {
        None => {
            let _ = writeln!(s, "cone: none supplied; lower bound is the trivial zero");
        }
        Some(true) => {
            let _ = writeln!(s, "cone: invariant under every member");
        }
        Some(false) => {
            let _ = writeln!(
                s,
                "cone: NOT invariant under every member; conic bound unavailable, lower \
                 bound is the trivial zero"
            );
        }
    }
    if let Some(c) = &o.conic {
        let witness: Vec<String> = c.witness.iter().map(|v| format!("{v:.9}")).collect();
        let _ = writeln!(
            s,
            "conic certificate: r = {} (witness [{}], {} bisection steps, bracket top {})",
            fmt_cell(c.r).trim(),
            witness.join(", "),
            c.bisection_iterations,
            fmt_cell(c.bracket_upper).trim(),
        );
    }
    s.push_str(&interval_line(
        "subradius interval",
        &o.interval,
        &prov_text(&o.lower_provenance),
        "min over t of the per-length minima",
    ));
}

fn human_kron(s: &mut String, r: &KronReport) {
    let _ = writeln!(s, "Kronecker lift sandwich ({} members)", r.m);
    match r.cone_checked {
        None => {
            let _ = writeln!(
                s,
                "warning: no cone supplied; invariance caller-asserted, sandwich not certified"
            );
        }
        Some(false) => {
            let _ = writeln!(
                s,
                "warning: supplied cone is NOT invariant; sandwich not certified"
            );
        }
        Some(true) => {
            let _ = writeln!(s, "cone invariance verified; sandwich certified");
        }
    }
    let _ = writeln!(
        s,
        "{:>4} {:>15} {:>15} {:>15}",
        "k", "rho(lift-sum)", "lower-root", "upper-root"
    );
    for (i, k) in r.k_values.iter().enumerate() {
        let _ = writeln!(
            s,
            "{k:>4} {} {} {}",
            fmt_cell(r.rho_sum[i]),
            fmt_cell(r.lower_k[i]),
            fmt_cell(r.upper_k[i]),
        );
    }
}

fn human_trace_seq(s: &mut String, r: &TraceSeqReport) {
    let _ = writeln!(s, "trace and radius growth sequences");
    let _ = writeln!(
        s,
        "{:>4} {:>15} {:>15}",
        "t", "max-trace-root", "max-rho-root"
    );
    for (i, t) in r.t_values.iter().enumerate() {
        let _ = writeln!(s, "{t:>4} {} {}", fmt_opt_cell(r.s[i]), fmt_cell(r.r[i]));
    }
    let d = &r.diagnostic;
    let _ = writeln!(s, "all members nonnegative: {}", d.all_members_nonnegative);
    let _ = writeln!(
        s,
        "primitive member present: {}{}",
        d.has_primitive_member,
        if d.has_primitive_member {
            format!(" (members {:?})", d.primitive_members)
        } else {
            String::new()
        }
    );
    let _ = writeln!(
        s,
        "oscillation over t in [{}, {}]: trace-root {}, rho-root {}",
        d.window.0,
        d.window.1,
        d.s_oscillation
            .map_or_else(|| "-".into(), |v| format!("{v:.9}")),
        format_args!("{:.9}", d.r_oscillation),
    );
    if d.s_undefined > 0 {
        let _ = writeln!(
            s,
            "trace-root undefined at {} length(s): every product there has negative trace",
            d.s_undefined
        );
    }
}

fn human_cone_check(s: &mut String, r: &ConeCheckReport) {
    let _ = writeln!(
        s,
        "cone: dim {}, {}full-dimensional: {}, pointed: {}, proper: {}",
        r.dim,
        if r.cone_is_orthant { "orthant, " } else { "" },
        r.full_dimensional,
        r.pointed,
        r.proper
    );
    let _ = writeln!(s, "primitivity horizon: {}", r.horizon);
    let _ = writeln!(
        s,
        "{:>7} {:>10} {:>10} {:>16}",
        "member", "invariant", "positive", "primitive"
    );
    for (i, m) in r.members.iter().enumerate() {
        let positive = m.positive.map_or_else(|| "-".into(), |b| b.to_string());
        let prim = match m.primitivity {
            PrimitivityStatus::Primitive(t) => format!("yes (t = {t})"),
            PrimitivityStatus::NotFoundWithin(h) => format!("not within {h}"),
            PrimitivityStatus::NotApplicable => "-".into(),
        };
        let _ = writeln!(s, "{i:>7} {:>10} {positive:>10} {prim:>16}", m.invariant);
    }
    if let Some(inner) = &r.inner {
        let _ = writeln!(
            s,
            "inner cone: embedded: {}, invariant under all members: {}",
            inner.embedded, inner.inner_invariant_all
        );
        let _ = writeln!(
            s,
            "embedding constant estimate: {} ({} samples)",
            inner
                .beta_estimate
                .map_or_else(|| "unavailable".into(), |v| format!("{v:.9}")),
            inner.samples
        );
    }
}

fn human_perturb(s: &mut String, r: &PerturbationReport) {
    let _ = writeln!(
        s,
        "perturbation study: {} trials per radius, seed {}, t_max {}, positivity mode: {}",
        r.trials, r.seed, r.t_max, r.positivity_mode
    );
    s.push_str(&interval_line("base jsr interval", &r.base_jsr, "-", "-"));
    s.push_str(&interval_line(
        "base subradius interval",
        &r.base_sub,
        "-",
        "-",
    ));
    if r.outcomes.is_empty() {
        let _ = writeln!(s, "no radii requested; nothing perturbed");
        return;
    }
    let _ = writeln!(
        s,
        "{:>12} {:>15} {:>15} {:>15}",
        "delta", "realized-dist", "jsr-mid-dev", "sub-mid-dev"
    );
    for o in &r.outcomes {
        let _ = writeln!(
            s,
            "{:>12.6} {} {} {}",
            o.delta,
            fmt_cell(o.max_realized_hausdorff),
            fmt_cell(o.max_jsr_mid_deviation),
            fmt_cell(o.max_sub_mid_deviation),
        );
    }
}

fn human_verify(s: &mut String, r: &VerifyReport) {
    for c in &r.checks {
        let status = if c.passed { "PASS" } else { "FAIL" };
        let _ = writeln!(s, "{status}  {:<40} {}", c.name, c.note);
    }
    let passed = r.checks.iter().filter(|c| c.passed).count();
    let _ = writeln!(s, "{passed}/{} checks passed", r.checks.len());
}

/// Human rendering of the lifted-trace inequality check (used by verify).
pub fn trace_kron_note(c: &TraceKronCheck) -> String {
    let side = |v: Option<f64>| v.map_or_else(|| "undefined".into(), |x| format!("{x:.12}"));
    format!("lhs {} rhs {}", side(c.lhs), side(c.rhs))
}

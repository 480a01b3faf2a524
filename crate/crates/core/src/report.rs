//! Analysis bundle and its text / JSON reports.
//!
//! JSON numbers are written with 17 significant digits, enough to recover
//! every `f64` exactly, and fields are emitted in a fixed order so identical
//! analyses produce byte-identical documents.

use std::fmt::Write as _;

use serde::Deserialize;

use crate::certify::{classify, Verdict, VerdictKind};
use crate::error::Result;
use crate::spectral::SpectralSummary;
use crate::state::TruncatedState;

/// Singular values listed in reports unless the full list is requested.
pub const REPORT_SINGULAR_VALUES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Text,
    Json,
}

/// Everything `analyze` computes for one truncation.
#[derive(Debug, Clone, PartialEq)]
pub struct Analysis {
    pub source: String,
    pub verdict: Verdict,
    pub spectrum: SpectralSummary,
    pub entropy_bits: f64,
    pub unresolved_mass: f64,
}

impl Analysis {
    pub fn run(state: &TruncatedState, delta: f64, tol: f64) -> Result<Self> {
        let verdict = classify(state, delta, tol)?;
        let spectrum = SpectralSummary::of(state)?;
        Ok(Self {
            source: state.source_digest().to_string(),
            entropy_bits: spectrum.truncated_entropy,
            unresolved_mass: state.unresolved_mass(),
            verdict,
            spectrum,
        })
    }
}

/// The JSON report document.
#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct ReportDocument {
    pub verdict_kind: String,
    pub sigma2_interval: [f64; 2],
    pub max_minor: f64,
    pub tail_bound: f64,
    pub captured_mass: f64,
    pub truncation: [usize; 2],
    pub entropy_bits: f64,
    pub unresolved_mass: f64,
    pub singular_values: Vec<f64>,
}

impl ReportDocument {
    pub fn from_analysis(a: &Analysis, full: bool) -> Self {
        let ev = &a.verdict.evidence;
        let keep = if full {
            a.spectrum.singular_values.len()
        } else {
            REPORT_SINGULAR_VALUES
        };
        Self {
            verdict_kind: a.verdict.kind_name().to_string(),
            sigma2_interval: [ev.sigma2_interval.lo, ev.sigma2_interval.hi],
            max_minor: ev.max_minor.value,
            tail_bound: ev.tail_op_bound,
            captured_mass: ev.captured_mass,
            truncation: [ev.truncation.0, ev.truncation.1],
            entropy_bits: a.entropy_bits,
            unresolved_mass: a.unresolved_mass,
            singular_values: a
                .spectrum
                .singular_values
                .iter()
                .take(keep)
                .copied()
                .collect(),
        }
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        let mut s = String::from("{\n");
        let _ = writeln!(
            s,
            "  \"verdict_kind\": {},",
            json_string(&self.verdict_kind)
        );
        let _ = writeln!(
            s,
            "  \"sigma2_interval\": {},",
            json_array(&self.sigma2_interval)
        );
        let _ = writeln!(s, "  \"max_minor\": {},", num17(self.max_minor));
        let _ = writeln!(s, "  \"tail_bound\": {},", num17(self.tail_bound));
        let _ = writeln!(s, "  \"captured_mass\": {},", num17(self.captured_mass));
        let _ = writeln!(
            s,
            "  \"truncation\": [{}, {}],",
            self.truncation[0], self.truncation[1]
        );
        let _ = writeln!(s, "  \"entropy_bits\": {},", num17(self.entropy_bits));
        let _ = writeln!(s, "  \"unresolved_mass\": {},", num17(self.unresolved_mass));
        let _ = writeln!(
            s,
            "  \"singular_values\": {}",
            json_array(&self.singular_values)
        );
        s.push_str("}\n");
        s
    }
}

/// 17 significant digits in exponent form, e.g. `7.0710678118654757e-1`.
pub fn num17(v: f64) -> String {
    format!("{v:.16e}")
}

fn json_array(v: &[f64]) -> String {
    let items: Vec<String> = v.iter().map(|&x| num17(x)).collect();
    format!("[{}]", items.join(", "))
}

fn json_string(s: &str) -> String {
    serde_json::to_string(s).expect("string serialization cannot fail")
}

/// `1e-06` style: shortest mantissa, signed two-digit exponent.
pub fn short_sci(v: f64) -> String {
    let s = format!("{v:e}");
    match s.split_once('e') {
        Some((mant, exp)) => {
            let e: i32 = exp.parse().unwrap_or(0);
            let sign = if e < 0 { '-' } else { '+' };
            format!("{mant}e{sign}{:02}", e.abs())
        }
        None => s,
    }
}

/// Plain decimal for moderate magnitudes, exponent form otherwise.
pub fn human(v: f64) -> String {
    let a = v.abs();
    if a == 0.0 || (1e-4..1e6).contains(&a) {
        v.to_string()
    } else {
        format!("{v:e}")
    }
}

pub fn emit_report(a: &Analysis, format: ReportFormat, full: bool) -> String {
    match format {
        ReportFormat::Json => ReportDocument::from_analysis(a, full).to_json(),
        ReportFormat::Text => emit_text(a, full),
    }
}

fn emit_text(a: &Analysis, full: bool) -> String {
    let ev = &a.verdict.evidence;
    let mut s = String::new();
    let _ = writeln!(s, "source:           {}", a.source);
    let _ = writeln!(
        s,
        "truncation:       {} x {}",
        ev.truncation.0, ev.truncation.1
    );
    let _ = writeln!(s, "captured mass:    {}", human(ev.captured_mass));
    let _ = writeln!(s, "tail bound:       {}", human(ev.tail_op_bound));
    match ev.max_minor.witness {
        Some(w) => {
            let _ = writeln!(
                s,
                "max |minor|:      {} at rows ({}, {}), cols ({}, {}){}",
                human(ev.max_minor.value),
                w.rows.0,
                w.rows.1,
                w.cols.0,
                w.cols.1,
                if ev.max_minor.exhaustive {
                    ""
                } else {
                    " (estimate)"
                }
            );
        }
        None => {
            let _ = writeln!(s, "max |minor|:      0 (single row or column)");
        }
    }
    let _ = writeln!(
        s,
        "sigma2 interval:  [{}, {}]",
        human(ev.sigma2_interval.lo),
        human(ev.sigma2_interval.hi)
    );
    let sv = &a.spectrum.singular_values;
    let keep = if full {
        sv.len()
    } else {
        sv.len().min(REPORT_SINGULAR_VALUES)
    };
    let listed: Vec<String> = sv[..keep].iter().map(|&x| human(x)).collect();
    let more = if keep < sv.len() {
        format!(" ... ({} more)", sv.len() - keep)
    } else {
        String::new()
    };
    let _ = writeln!(s, "singular values:  {}{more}", listed.join(" "));
    let _ = writeln!(
        s,
        "entropy:          {} bits (unresolved mass {})",
        human(a.entropy_bits),
        human(a.unresolved_mass)
    );
    let _ = writeln!(
        s,
        "operator norm:    {}{}",
        human(ev.classes.operator_norm),
        if ev.classes.bounded_by_one {
            ""
        } else {
            " (exceeds 1)"
        }
    );
    let verdict = match &a.verdict.kind {
        VerdictKind::CertifiedEntangled { sigma2_lower } => {
            format!("CERTIFIED ENTANGLED (sigma2 >= {})", human(*sigma2_lower))
        }
        VerdictKind::SeparableWithin { delta, factor } => format!(
            "SEPARABLE within {} (scale {}, residual {})",
            short_sci(*delta),
            human(factor.scale),
            human(factor.residual)
        ),
        VerdictKind::Inconclusive { reason } => format!("INCONCLUSIVE: {reason}"),
    };
    let _ = writeln!(s, "verdict:          {verdict}");
    s
}

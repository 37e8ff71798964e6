use std::time::Instant;

use anyhow::{Context, Result};
use cf_forge_core::cfengine::{
    iterate_cf, sum_series_with, verify_identity_with, Mode, SeriesOptions, VERIFY_CF_DEPTH,
};
use cf_forge_core::exprlang::eval_float;
use cf_forge_core::mpval::digits_to_bits;
use cf_forge_core::recognizer::{recognize, DEFAULT_MAX_COEFF_BITS};
use cf_forge_core::solver::{prove, Route};
use cf_forge_core::telescope::closed_form_for;
use cf_forge_core::{default_basis, parse, BigFloat, CFSpec, ClosedForm, ProofStatus, Recognition, RenderStyle};
use rayon::prelude::*;
use serde::Serialize;

use crate::corpus::Fixture;
use crate::report::{scientific, Report, Status, Timings};
use crate::{EXIT_MISMATCH, EXIT_OK};

pub const DEFAULT_PRECISION_DIGITS: u32 = 50;
pub const DEFAULT_MAX_TERMS: u64 = 1 << 20;
pub const DEFAULT_MAX_DEGREE: usize = 6;

#[derive(Clone, Copy, Debug)]
pub struct Settings {
    pub precision_digits: u32,
    pub max_terms: u64,
    pub max_degree: usize,
    pub timings: bool,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            precision_digits: DEFAULT_PRECISION_DIGITS,
            max_terms: DEFAULT_MAX_TERMS,
            max_degree: DEFAULT_MAX_DEGREE,
            timings: false,
        }
    }
}

impl Settings {
    pub fn precision_bits(&self) -> u32 {
        digits_to_bits(self.precision_digits)
    }

    /// Digits two independent values must share to count as equal.
    pub fn agreement_digits(&self) -> u32 {
        self.precision_digits.saturating_sub(10).max(1)
    }

    fn series_options(&self) -> SeriesOptions {
        SeriesOptions { max_terms: self.max_terms }
    }
}

fn ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

fn tolerance(digits: u32, prec: u32) -> BigFloat {
    let ten = BigFloat::from_i64(10, prec);
    BigFloat::one(prec).div_prec(&ten.powi(digits as u64), prec)
}

pub fn verify_fixture(fx: &Fixture, settings: &Settings) -> Report {
    let prec = settings.precision_bits();
    let digits = settings.precision_digits as usize;
    let start = Instant::now();
    let spec = match CFSpec::parse(&fx.f, &fx.g) {
        Ok(s) => s,
        Err(e) => return Report::error(&fx.id, prec, format!("invalid spec: {e}")),
    };
    let given = match fx.closed_form.as_deref().map(parse).transpose() {
        Ok(g) => g,
        Err(e) => return Report::error(&fx.id, prec, format!("invalid closed form: {e}")),
    };
    let derived: Option<ClosedForm> = if spec.is_exact() { closed_form_for(&spec).ok() } else { None };
    let symbolic_ms = ms(start);

    let mut report = Report {
        id: fx.id.clone(),
        status: Status::Unsupported,
        series_value: None,
        cf_value: None,
        closed_form_given: fx.closed_form.clone(),
        closed_form_derived: derived.as_ref().map(|c| c.render(RenderStyle::Zeta)),
        abs_err: None,
        n_terms: None,
        precision_bits: prec,
        message: None,
        timings: None,
    };
    let series_start = Instant::now();
    let target = given.clone().or_else(|| derived.as_ref().map(ClosedForm::to_expr));
    match target {
        None => {
            let opts = settings.series_options();
            let outcome = sum_series_with(&spec, prec, opts).and_then(|s| {
                let st = iterate_cf(&spec, VERIFY_CF_DEPTH.min(opts.max_terms), Mode::Float, prec)?;
                Ok((s, st.ratio(prec)))
            });
            match outcome {
                Ok((s, cf)) => {
                    report.series_value = Some(s.value.to_decimal(digits));
                    report.cf_value = Some(cf.to_decimal(digits));
                    report.n_terms = Some(s.n_terms);
                    report.message = Some("no closed form given or derived".into());
                }
                Err(e) => {
                    report.status = Status::Error;
                    report.message = Some(e.to_string());
                }
            }
        }
        Some(t) => match verify_identity_with(&spec, &t, prec, settings.agreement_digits(), settings.series_options()) {
            Ok(v) => {
                report.series_value = Some(v.series.value.to_decimal(digits));
                report.cf_value = Some(v.cf_value.to_decimal(digits));
                report.n_terms = Some(v.series.n_terms);
                report.abs_err = Some(scientific(&v.abs_err, 6));
                report.status = match (v.status, &derived) {
                    (cf_forge_core::VerifyStatus::Mismatch, _) => Status::Mismatch,
                    (_, None) => Status::VerifiedNumeric,
                    (_, Some(d)) => match d.eval(prec) {
                        Ok(dv) => {
                            let gap = dv.sub_prec(&v.closed_value, prec).abs();
                            if gap < tolerance(settings.agreement_digits(), prec) {
                                Status::ProvedSymbolic
                            } else {
                                report.message = Some(format!(
                                    "derived closed form differs from the given one by {}",
                                    scientific(&gap, 6)
                                ));
                                Status::Mismatch
                            }
                        }
                        Err(e) => {
                            report.message = Some(format!("derived closed form not evaluable: {e}"));
                            Status::VerifiedNumeric
                        }
                    },
                };
                if !v.cf_agrees {
                    report.message = Some("convergent disagrees with the series".into());
                }
            }
            Err(e) => {
                report.status = Status::Error;
                report.message = Some(e.to_string());
            }
        },
    }
    if settings.timings {
        report.timings = Some(Timings { symbolic_ms, series_ms: ms(series_start), total_ms: ms(start) });
    }
    report
}

#[derive(Clone, Debug)]
pub struct BatchOutcome {
    pub reports: Vec<Report>,
    pub exit_code: u8,
}

impl BatchOutcome {
    pub fn count(&self, status: Status) -> usize {
        self.reports.iter().filter(|r| r.status == status).count()
    }

    pub fn summary(&self) -> String {
        format!(
            "{} fixtures: {} proved_symbolic, {} verified_numeric, {} mismatch, {} unsupported, {} error",
            self.reports.len(),
            self.count(Status::ProvedSymbolic),
            self.count(Status::VerifiedNumeric),
            self.count(Status::Mismatch),
            self.count(Status::Unsupported),
            self.count(Status::Error),
        )
    }

    pub fn to_json_lines(&self) -> String {
        self.reports.iter().map(|r| r.to_json_line() + "\n").collect()
    }

    pub fn to_text(&self) -> String {
        let width = self.reports.iter().map(|r| r.id.len()).max().unwrap_or(2).max(2);
        let mut out = format!("{:<width$}  {:<16}  {:>12}  {:>8}\n", "id", "status", "abs_err", "terms");
        for r in &self.reports {
            out.push_str(&format!(
                "{:<width$}  {:<16}  {:>12}  {:>8}\n",
                r.id,
                r.status.as_str(),
                r.abs_err.as_deref().unwrap_or("-"),
                r.n_terms.map_or("-".to_string(), |n| n.to_string()),
            ));
        }
        out
    }
}

/// Verifies every fixture; report order follows fixture order.
pub fn cmd_batch(fixtures: &[Fixture], settings: &Settings) -> BatchOutcome {
    let reports: Vec<Report> = fixtures.par_iter().map(|fx| verify_fixture(fx, settings)).collect();
    let exit_code = if reports.iter().any(|r| r.status.is_failure()) { EXIT_MISMATCH } else { EXIT_OK };
    BatchOutcome { reports, exit_code }
}

#[derive(Clone, Debug, Serialize)]
pub struct ProveChecks {
    pub b0_consistent: bool,
    pub f0_zero: bool,
    pub functional_identity_verified_degree: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProveReport {
    pub a: String,
    pub b: String,
    pub status: Status,
    pub solver_status: &'static str,
    pub route: Option<&'static str>,
    pub f: Option<String>,
    pub g: Option<String>,
    /// Closed form of the series, even zeta values as powers of pi.
    pub closed_form: Option<String>,
    pub closed_form_zeta: Option<String>,
    pub series_value: Option<String>,
    /// Value of the continued fraction itself.
    pub cf_limit: Option<String>,
    pub checks: ProveChecks,
    pub diagnostics: Vec<String>,
    pub precision_bits: u32,
}

pub fn cmd_prove(a: &str, b: &str, max_degree: usize, precision_digits: u32) -> Result<ProveReport> {
    let a_expr = parse(a).with_context(|| format!("parsing a = {a}"))?;
    let b_expr = parse(b).with_context(|| format!("parsing b = {b}"))?;
    let prec = digits_to_bits(precision_digits);
    let digits = precision_digits as usize;
    let r = prove(&a_expr, &b_expr, max_degree)?;
    let status = match r.status {
        ProofStatus::Proved => Status::ProvedSymbolic,
        ProofStatus::Candidate => Status::Unsupported,
        ProofStatus::Failed => Status::Error,
    };
    let value = r.closed_form.as_ref().map(|c| c.eval(prec)).transpose()?;
    let cf_limit = match (&value, r.route, &r.g) {
        (Some(s), Some(route), Some(g)) => {
            let scale = match route {
                Route::Direct => BigFloat::one(prec),
                Route::Transformed => BigFloat::from_ratio(&g.coeff(0), prec),
            };
            Some(scale.div_prec(s, prec).to_decimal(digits))
        }
        _ => None,
    };
    Ok(ProveReport {
        a: a.to_string(),
        b: b.to_string(),
        status,
        solver_status: r.status.as_str(),
        route: r.route.map(|rt| match rt {
            Route::Direct => "direct",
            Route::Transformed => "transformed",
        }),
        f: r.f.as_ref().map(|f| f.to_expr_string()),
        g: r.g.as_ref().map(|g| g.to_expr_string()),
        closed_form: r.closed_form.as_ref().map(|c| c.render(RenderStyle::Pi)),
        closed_form_zeta: r.closed_form.as_ref().map(|c| c.render(RenderStyle::Zeta)),
        series_value: value.map(|v| v.to_decimal(digits)),
        cf_limit,
        checks: ProveChecks {
            b0_consistent: r.checks.b0_consistent,
            f0_zero: r.checks.f0_zero,
            functional_identity_verified_degree: r.checks.functional_identity_verified_degree,
        },
        diagnostics: r.diagnostics,
        precision_bits: prec,
    })
}

#[derive(Clone, Debug)]
pub enum RecognizeInput {
    Value(String),
    Spec { f: String, g: String },
}

#[derive(Clone, Debug, Serialize)]
pub struct RecognizeReport {
    pub input: String,
    pub basis_level: u8,
    pub status: Status,
    pub closed_form: Option<String>,
    pub relation: Option<Vec<String>>,
    pub residual: Option<String>,
    pub confidence_bits: Option<i64>,
    pub value: Option<String>,
    pub precision_bits: u32,
    pub message: Option<String>,
}

/// Working precision for recognition against a basis of `dim` constants.
pub fn recognition_bits(dim: usize, precision_digits: u32) -> u32 {
    digits_to_bits(precision_digits).max(32 * dim as u32 + 256)
}

pub fn cmd_recognize(input: &RecognizeInput, level: u8, precision_digits: u32) -> Result<RecognizeReport> {
    let basis = default_basis(level)?;
    let prec = recognition_bits(basis.len() + 1, precision_digits);
    let (label, result) = match input {
        RecognizeInput::Value(s) => {
            let e = parse(s).with_context(|| format!("parsing value {s}"))?;
            anyhow::ensure!(e.is_constant(), "value {s} depends on n");
            let origin = BigFloat::zero(64);
            (s.clone(), recognize(|bits| eval_float(&e, &origin, bits), &basis, prec, DEFAULT_MAX_COEFF_BITS)?)
        }
        RecognizeInput::Spec { f, g } => {
            let spec = CFSpec::parse(f, g).with_context(|| format!("spec f = {f}, g = {g}"))?;
            let x = |bits: u32| sum_series_with(&spec, bits + 16, SeriesOptions::default()).map(|s| s.value.with_prec(bits));
            (format!("f={f}, g={g}"), recognize(x, &basis, prec, DEFAULT_MAX_COEFF_BITS)?)
        }
    };
    let digits = precision_digits as usize;
    Ok(match result {
        Recognition::Match { closed_form, relation } => RecognizeReport {
            input: label,
            basis_level: level,
            status: Status::VerifiedNumeric,
            value: Some(closed_form.eval(prec)?.to_decimal(digits)),
            closed_form: Some(closed_form.render(RenderStyle::Zeta)),
            relation: Some(relation.coefficients.iter().map(|c| c.to_string()).collect()),
            residual: Some(scientific(&relation.residual, 6)),
            confidence_bits: Some(relation.confidence_bits),
            precision_bits: prec,
            message: None,
        },
        Recognition::NoMatch { reason } => RecognizeReport {
            input: label,
            basis_level: level,
            status: Status::Unsupported,
            closed_form: None,
            relation: None,
            residual: None,
            confidence_bits: None,
            value: None,
            precision_bits: prec,
            message: Some(format!("no match: {reason}")),
        },
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SumReport {
    pub f: String,
    pub g: String,
    pub series_value: String,
    pub error_estimate: String,
    pub n_terms: u64,
    pub cf_value: String,
    pub cf_index: u64,
    pub closed_form_derived: Option<String>,
    pub precision_bits: u32,
}

pub fn cmd_sum(f: &str, g: &str, precision_digits: u32, max_terms: u64) -> Result<SumReport> {
    let spec = CFSpec::parse(f, g).with_context(|| format!("spec f = {f}, g = {g}"))?;
    let prec = digits_to_bits(precision_digits);
    let digits = precision_digits as usize;
    let s = sum_series_with(&spec, prec, SeriesOptions { max_terms })?;
    let depth = VERIFY_CF_DEPTH.min(max_terms);
    let st = iterate_cf(&spec, depth, Mode::Float, prec)?;
    let derived = if spec.is_exact() { closed_form_for(&spec).ok() } else { None };
    Ok(SumReport {
        f: f.to_string(),
        g: g.to_string(),
        series_value: s.value.to_decimal(digits),
        error_estimate: scientific(&s.error_estimate, 3),
        n_terms: s.n_terms,
        cf_value: st.ratio(prec).to_decimal(digits),
        cf_index: depth,
        closed_form_derived: derived.map(|c| c.render(RenderStyle::Zeta)),
        precision_bits: prec,
    })
}

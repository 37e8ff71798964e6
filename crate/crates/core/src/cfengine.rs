//! Continued fractions built from a pair `(f, g)`.
//!
//! With `a_n = -f(n)^2` and `b_n = (f(n+1)g(n+1) + f(n)g(n-1)) / g(n)`, and
//! `p_{-1} = 1, p_0 = b_0, q_{-1} = 0, q_0 = 1`, induction on the recurrences
//! gives
//!
//! ```text
//! p_n g(0)             = F_n g(n+1),          F_n = f(1) f(2) ... f(n+1)
//! q_n p_{n-1} - q_{n-1} p_n = (f(1) ... f(n))^2
//! q_n / p_n            = g(0)^2 sum_{i=0}^{n} 1 / (f(i+1) g(i) g(i+1))
//! ```
//!
//! The last line follows from the second by dividing by `p_n p_{n-1}` and
//! substituting the first; the `g(0)^2` factor comes from `p_0 = b_0 =
//! f(1)g(1)/g(0)`. Hence the fraction `b_0 + a_1/(b_1 + ...)` converges to
//! `1/S` where `S` is the limit of the scaled sum.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::exprlang::{as_rational_function, eval_float, render, Expr, ExprError};
use crate::mpval::{BigFloat, GUARD_BITS};
use crate::poly::RationalFunction;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CfError {
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    #[error("pole at index {0}")]
    PoleAtIndex(i64),
    #[error("exact arithmetic exceeded the {0}-bit budget")]
    OverflowBudget(u64),
    #[error("series diverges or decays too slowly (decay degree about {0:.2})")]
    DivergentSeries(f64),
    #[error("series terms do not settle to one sign")]
    IrregularTerms,
    #[error("target precision not reached within {0} terms")]
    SlowConvergence(u64),
    #[error("exact mode requested but {0} is not exactly evaluable")]
    NotExact(String),
    #[error(transparent)]
    Expr(#[from] ExprError),
}

/// Numerator bit budget for exact iteration.
pub const EXACT_BIT_BUDGET: u64 = 10_000_000;

/// Indices checked for zeros of `f` and `g` when a spec is built.
pub const DEFAULT_N_CHECK: i64 = 64;

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Exact(BigRational),
    Float(BigFloat),
}

impl Value {
    pub fn to_float(&self, prec: u32) -> BigFloat {
        match self {
            Value::Exact(r) => BigFloat::from_ratio(r, prec),
            Value::Float(x) => x.with_prec(prec),
        }
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Value::Exact(r) => Some(r),
            Value::Float(_) => None,
        }
    }

    fn is_zero(&self) -> bool {
        match self {
            Value::Exact(r) => r.is_zero(),
            Value::Float(x) => x.is_zero(),
        }
    }

    fn binop(
        &self,
        other: &Value,
        prec: u32,
        exact: impl Fn(&BigRational, &BigRational) -> BigRational,
        float: impl Fn(&BigFloat, &BigFloat, u32) -> BigFloat,
    ) -> Value {
        match (self, other) {
            (Value::Exact(a), Value::Exact(b)) => Value::Exact(exact(a, b)),
            _ => Value::Float(float(&self.to_float(prec), &other.to_float(prec), prec)),
        }
    }

    fn add(&self, o: &Value, prec: u32) -> Value {
        self.binop(o, prec, |a, b| a + b, |a, b, p| a.add_prec(b, p))
    }

    fn mul(&self, o: &Value, prec: u32) -> Value {
        self.binop(o, prec, |a, b| a * b, |a, b, p| a.mul_prec(b, p))
    }

    /// Caller guarantees `o` is nonzero.
    fn div(&self, o: &Value, prec: u32) -> Value {
        self.binop(o, prec, |a, b| a / b, |a, b, p| a.div_prec(b, p))
    }

    fn neg(&self) -> Value {
        match self {
            Value::Exact(r) => Value::Exact(-r),
            Value::Float(x) => Value::Float(x.neg()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Float,
}

/// A continued fraction given by `(f, g)`.
#[derive(Clone, Debug)]
pub struct CFSpec {
    f: Expr,
    g: Expr,
    f_rf: Option<RationalFunction>,
    g_rf: Option<RationalFunction>,
}

fn is_negligible(x: &BigFloat, prec: u32) -> bool {
    x.is_zero() || x.abs_lt_pow2(-(prec as i64) / 2)
}

impl CFSpec {
    /// Validates with the default index window and 128-bit numeric checks.
    pub fn new(f: Expr, g: Expr) -> Result<Self, CfError> {
        Self::with_checks(f, g, DEFAULT_N_CHECK, 128)
    }

    pub fn parse(f: &str, g: &str) -> Result<Self, CfError> {
        Self::new(crate::exprlang::parse(f)?, crate::exprlang::parse(g)?)
    }

    pub fn with_checks(f: Expr, g: Expr, n_check: i64, prec: u32) -> Result<Self, CfError> {
        let spec = Self::unchecked(f, g);
        match spec.f_at(0, prec) {
            Ok(Value::Exact(r)) if !r.is_zero() => {
                return Err(CfError::InvalidSpec(format!("f(0) = {r}, expected 0")))
            }
            Ok(Value::Float(x)) if !is_negligible(&x, prec) => {
                return Err(CfError::InvalidSpec(format!(
                    "f(0) = {}, expected 0",
                    x.to_decimal(12)
                )))
            }
            Ok(_) | Err(CfError::PoleAtIndex(_)) | Err(CfError::Expr(ExprError::Domain(_))) => {}
            Err(e) => return Err(e),
        }
        for n in 0..=n_check {
            if n >= 1 && spec.value_vanishes(&spec.f_at(n, prec)?) {
                return Err(CfError::InvalidSpec(format!("f({n}) = 0")));
            }
            if spec.value_vanishes(&spec.g_at(n, prec)?) {
                return Err(CfError::InvalidSpec(format!("g({n}) = 0")));
            }
        }
        Ok(spec)
    }

    /// Skips validation.
    pub fn unchecked(f: Expr, g: Expr) -> Self {
        let f_rf = as_rational_function(&f).ok();
        let g_rf = as_rational_function(&g).ok();
        CFSpec { f, g, f_rf, g_rf }
    }

    fn value_vanishes(&self, v: &Value) -> bool {
        v.is_zero()
    }

    pub fn f(&self) -> &Expr {
        &self.f
    }

    pub fn g(&self) -> &Expr {
        &self.g
    }

    pub fn f_rational(&self) -> Option<&RationalFunction> {
        self.f_rf.as_ref()
    }

    pub fn g_rational(&self) -> Option<&RationalFunction> {
        self.g_rf.as_ref()
    }

    /// True when `f` and `g` are rational functions of `n`.
    pub fn is_exact(&self) -> bool {
        self.f_rf.is_some() && self.g_rf.is_some()
    }

    fn eval(e: &Expr, rf: Option<&RationalFunction>, n: i64, prec: u32) -> Result<Value, CfError> {
        if let Some(rf) = rf {
            let x = BigRational::from_integer(BigInt::from(n));
            return rf.eval(&x).map(Value::Exact).ok_or(CfError::PoleAtIndex(n));
        }
        match eval_float(e, &BigFloat::from_i64(n, 64), prec) {
            Ok(x) => Ok(Value::Float(x)),
            Err(ExprError::DivisionByZero(_)) => Err(CfError::PoleAtIndex(n)),
            Err(e) => Err(e.into()),
        }
    }

    pub fn f_at(&self, n: i64, prec: u32) -> Result<Value, CfError> {
        Self::eval(&self.f, self.f_rf.as_ref(), n, prec)
    }

    pub fn g_at(&self, n: i64, prec: u32) -> Result<Value, CfError> {
        Self::eval(&self.g, self.g_rf.as_ref(), n, prec)
    }

    fn g_nonzero(&self, n: i64, prec: u32) -> Result<Value, CfError> {
        let v = self.g_at(n, prec)?;
        if v.is_zero() {
            return Err(CfError::PoleAtIndex(n));
        }
        Ok(v)
    }

    /// `a_n = -f(n)^2`, `n >= 1`.
    pub fn a_n(&self, n: i64, prec: u32) -> Result<Value, CfError> {
        let f = self.f_at(n, prec)?;
        Ok(f.mul(&f, prec).neg())
    }

    /// `b_n`; at `n = 0` the `f(0) g(-1)` product is taken as zero.
    pub fn b_n(&self, n: i64, prec: u32) -> Result<Value, CfError> {
        let g_n = self.g_nonzero(n, prec)?;
        let mut num = self.f_at(n + 1, prec)?.mul(&self.g_at(n + 1, prec)?, prec);
        if n != 0 {
            let back = self.f_at(n, prec)?.mul(&self.g_at(n - 1, prec)?, prec);
            num = num.add(&back, prec);
        }
        Ok(num.div(&g_n, prec))
    }

    /// `b_n` as a rational function, when `f` and `g` are rational.
    pub fn b_rational(&self) -> Option<RationalFunction> {
        let f = self.f_rf.as_ref()?;
        let g = self.g_rf.as_ref()?;
        let one = BigRational::one();
        let up = &f.shift(&one) * &g.shift(&one);
        let down = f * &g.shift(&-one);
        (&up + &down).checked_div(g)
    }

    /// `-a_n` as a rational function.
    pub fn minus_a_rational(&self) -> Option<RationalFunction> {
        let f = self.f_rf.as_ref()?;
        Some(f * f)
    }

    /// `g(0)^2 / (f(i+1) g(i) g(i+1))`.
    pub fn term(&self, i: i64, prec: u32) -> Result<Value, CfError> {
        let g0 = self.g_nonzero(0, prec)?;
        let f1 = self.f_at(i + 1, prec)?;
        if f1.is_zero() {
            return Err(CfError::PoleAtIndex(i + 1));
        }
        let den = f1.mul(&self.g_nonzero(i, prec)?, prec).mul(&self.g_nonzero(i + 1, prec)?, prec);
        Ok(g0.mul(&g0, prec).div(&den, prec))
    }
}

/// `(p_{n-1}, p_n, q_{n-1}, q_n)` at index `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvergentState {
    pub p_prev: Value,
    pub p: Value,
    pub q_prev: Value,
    pub q: Value,
    pub n: u64,
}

impl ConvergentState {
    /// `q_n / p_n`, the partial sum the convergent represents.
    pub fn ratio(&self, prec: u32) -> BigFloat {
        let p = self.p.to_float(prec + GUARD_BITS);
        self.q.to_float(prec + GUARD_BITS).div_prec(&p, prec)
    }

    pub fn exact_ratio(&self) -> Option<BigRational> {
        Some(self.q.as_exact()? / self.p.as_exact()?)
    }
}

fn bits_of(v: &Value) -> u64 {
    match v {
        Value::Exact(r) => r.numer().bits().max(r.denom().bits()),
        Value::Float(_) => 0,
    }
}

/// Runs the convergent recurrences up to index `n`.
pub fn iterate_cf(spec: &CFSpec, n: u64, mode: Mode, prec: u32) -> Result<ConvergentState, CfError> {
    if mode == Mode::Exact && !spec.is_exact() {
        let which = if spec.f_rf.is_none() { render(&spec.f) } else { render(&spec.g) };
        return Err(CfError::NotExact(which));
    }
    let wp = prec + GUARD_BITS;
    let coerce = |v: Value| match mode {
        Mode::Exact => v,
        Mode::Float => Value::Float(v.to_float(wp)),
    };
    let mut st = ConvergentState {
        p_prev: coerce(Value::Exact(BigRational::one())),
        p: coerce(spec.b_n(0, wp)?),
        q_prev: coerce(Value::Exact(BigRational::zero())),
        q: coerce(Value::Exact(BigRational::one())),
        n: 0,
    };
    for k in 1..=n {
        let a = coerce(spec.a_n(k as i64, wp)?);
        let b = coerce(spec.b_n(k as i64, wp)?);
        let p = b.mul(&st.p, wp).add(&a.mul(&st.p_prev, wp), wp);
        let q = b.mul(&st.q, wp).add(&a.mul(&st.q_prev, wp), wp);
        if mode == Mode::Exact {
            let bits = bits_of(&p).max(bits_of(&q));
            if bits > EXACT_BIT_BUDGET {
                return Err(CfError::OverflowBudget(EXACT_BIT_BUDGET));
            }
        }
        st.p_prev = std::mem::replace(&mut st.p, p);
        st.q_prev = std::mem::replace(&mut st.q, q);
        st.n = k;
    }
    Ok(st)
}

/// `S_N = g(0)^2 sum_{i=0}^{N} 1/(f(i+1) g(i) g(i+1))`, exactly.
pub fn partial_sum(spec: &CFSpec, n: u64) -> Result<BigRational, CfError> {
    if !spec.is_exact() {
        return Err(CfError::NotExact(render(&spec.f)));
    }
    let mut s = BigRational::zero();
    for i in 0..=n {
        match spec.term(i as i64, 64)? {
            Value::Exact(t) => s += t,
            Value::Float(_) => unreachable!("exact spec"),
        }
    }
    Ok(s)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeriesResult {
    pub value: BigFloat,
    pub n_terms: u64,
    pub error_estimate: BigFloat,
    /// Always false: tails are estimated, not bounded.
    pub rigorous: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct SeriesOptions {
    /// Largest number of terms that may be summed.
    pub max_terms: u64,
}

impl Default for SeriesOptions {
    fn default() -> Self {
        SeriesOptions { max_terms: 1 << 20 }
    }
}

const RICHARDSON_K_MAX: u64 = 240;

/// The limit `S` of the scaled partial sums.
pub fn sum_series(spec: &CFSpec, prec: u32) -> Result<SeriesResult, CfError> {
    sum_series_with(spec, prec, SeriesOptions::default())
}

pub fn sum_series_with(spec: &CFSpec, prec: u32, opts: SeriesOptions) -> Result<SeriesResult, CfError> {
    let probe = |i: i64| -> Result<BigFloat, CfError> { Ok(spec.term(i, 96)?.to_float(96)) };
    let (t1, t2, t3) = (probe(128)?, probe(256)?, probe(512)?);
    for i in 120..136 {
        if probe(i)?.signum() != t1.signum() {
            return Err(CfError::IrregularTerms);
        }
    }
    if t1.is_zero() || t2.is_zero() || t3.is_zero() || t1.signum() != t3.signum() {
        return Err(CfError::IrregularTerms);
    }
    let r1 = t1.log2_abs() - t2.log2_abs();
    let r2 = t2.log2_abs() - t3.log2_abs();
    if r2 > 1.5 * r1 + 1.0 {
        return sum_direct(spec, prec, opts);
    }
    if r2 < 1.5 {
        return Err(CfError::DivergentSeries(r2));
    }
    sum_richardson(spec, prec, opts)
}

fn sum_direct(spec: &CFSpec, prec: u32, opts: SeriesOptions) -> Result<SeriesResult, CfError> {
    let wp = prec + GUARD_BITS + 16;
    let mut s = BigFloat::zero(wp);
    let mut prev = spec.term(0, wp)?.to_float(wp);
    s = s.add_prec(&prev, wp);
    let mut i = 1u64;
    loop {
        if i >= opts.max_terms {
            return Err(CfError::SlowConvergence(opts.max_terms));
        }
        let t = spec.term(i as i64, wp)?.to_float(wp);
        s = s.add_prec(&t, wp);
        i += 1;
        let small = t.is_zero() || t.log2_abs() < s.log2_abs() - (prec as f64) - 24.0;
        if small {
            let rho = if prev.is_zero() || t.is_zero() {
                BigFloat::zero(64)
            } else {
                t.abs().div_prec(&prev.abs(), 64)
            };
            let one = BigFloat::one(64);
            if rho < one {
                let tail = t.abs().mul_prec(&rho, 64).div_prec(&one.sub(&rho), 64);
                let floor = BigFloat::one(64).mul_pow2(-(wp as i64));
                let err = if tail > floor { tail } else { floor };
                return Ok(SeriesResult {
                    value: s.with_prec(prec),
                    n_terms: i,
                    error_estimate: err.mul_int(2),
                    rigorous: false,
                });
            }
        }
        prev = t;
    }
}

/// Richardson weights `(K+k)^K (-1)^(k+K) / (k! (K-k)!)`, `k = 0..=K`.
fn richardson_weights(k_order: u64) -> Vec<BigRational> {
    let mut fact = vec![BigInt::one()];
    for i in 1..=k_order {
        let next = &fact[i as usize - 1] * i;
        fact.push(next);
    }
    (0..=k_order)
        .map(|k| {
            let num = BigInt::from(k_order + k).pow(k_order as u32);
            let den = &fact[k as usize] * &fact[(k_order - k) as usize];
            let w = BigRational::new(num, den);
            if (k + k_order) % 2 == 1 {
                -w
            } else {
                w
            }
        })
        .collect()
}

fn sum_richardson(spec: &CFSpec, prec: u32, opts: SeriesOptions) -> Result<SeriesResult, CfError> {
    let k_max = RICHARDSON_K_MAX.min(opts.max_terms.saturating_sub(1) / 2);
    let wp = prec + 64 + 4 * k_max as u32;
    let target = -(prec as f64) - 4.0;
    // partial sums S_j, extended on demand
    let mut sums: Vec<BigFloat> = Vec::new();
    let mut acc = BigFloat::zero(wp);
    let mut extend = |upto: u64, sums: &mut Vec<BigFloat>| -> Result<(), CfError> {
        while (sums.len() as u64) <= upto {
            let i = sums.len() as i64;
            acc = acc.add_prec(&spec.term(i, wp)?.to_float(wp), wp);
            sums.push(acc.clone());
        }
        Ok(())
    };
    let extrapolate = |k: u64, sums: &[BigFloat]| -> BigFloat {
        let w = richardson_weights(k);
        let mut r = BigFloat::zero(wp);
        for (j, wj) in w.iter().enumerate() {
            let term = BigFloat::from_ratio(wj, wp).mul_prec(&sums[(k as usize) + j], wp);
            r = r.add_prec(&term, wp);
        }
        r
    };
    let mut k = 8u64;
    if k + 4 > k_max {
        return Err(CfError::SlowConvergence(opts.max_terms));
    }
    extend(2 * k, &mut sums)?;
    let mut prev = extrapolate(k, &sums);
    let mut best: Option<(BigFloat, BigFloat, u64)> = None;
    while k + 4 <= k_max {
        k += 4;
        extend(2 * k, &mut sums)?;
        let r = extrapolate(k, &sums);
        let diff = r.sub_prec(&prev, 64).abs().mul_int(10);
        let scale = r.log2_abs().max(0.0);
        let better = match &best {
            Some((_, e, _)) => diff < *e,
            None => true,
        };
        if better {
            best = Some((r.clone(), diff.clone(), 2 * k + 1));
        }
        if diff.is_zero() || diff.log2_abs() < target + scale {
            let floor = BigFloat::one(64).mul_pow2(-(prec as i64) - 8);
            let err = if diff > floor { diff } else { floor };
            return Ok(SeriesResult {
                value: r.with_prec(prec),
                n_terms: 2 * k + 1,
                error_estimate: err,
                rigorous: false,
            });
        }
        // past the sweet spot the estimates start to grow again
        if let Some((_, e, _)) = &best {
            if k > 64 && diff.log2_abs() > e.log2_abs() + 40.0 {
                break;
            }
        }
        prev = r;
    }
    Err(CfError::SlowConvergence(sums.len() as u64))
}

/// Outcome of comparing a closed form with the series and the convergent.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyStatus {
    Verified,
    Mismatch,
}

#[derive(Clone, Debug)]
pub struct Verification {
    pub status: VerifyStatus,
    pub series: SeriesResult,
    pub closed_value: BigFloat,
    pub cf_value: BigFloat,
    pub cf_index: u64,
    pub cf_agrees: bool,
    pub abs_err: BigFloat,
}

/// Depth of the convergent compared against the series.
pub const VERIFY_CF_DEPTH: u64 = 1000;

pub fn verify_identity(
    spec: &CFSpec,
    closed_form: &Expr,
    prec: u32,
    agreement_digits: u32,
) -> Result<Verification, CfError> {
    verify_identity_with(spec, closed_form, prec, agreement_digits, SeriesOptions::default())
}

pub fn verify_identity_with(
    spec: &CFSpec,
    closed_form: &Expr,
    prec: u32,
    agreement_digits: u32,
    opts: SeriesOptions,
) -> Result<Verification, CfError> {
    if !closed_form.is_constant() {
        return Err(CfError::InvalidSpec("closed form depends on n".into()));
    }
    let series = sum_series_with(spec, prec, opts)?;
    let closed_value = eval_float(closed_form, &BigFloat::zero(64), prec)?;
    let abs_err = series.value.sub_prec(&closed_value, prec).abs();
    let tol = BigFloat::one(64).div_prec(&BigFloat::from_int(&BigInt::from(10).pow(agreement_digits), prec), prec);

    let depth = VERIFY_CF_DEPTH.min(opts.max_terms);
    let st = iterate_cf(spec, depth, Mode::Float, prec)?;
    let cf_value = st.ratio(prec);
    let prev = {
        let p = st.p_prev.to_float(prec + GUARD_BITS);
        st.q_prev.to_float(prec + GUARD_BITS).div_prec(&p, prec)
    };
    let delta = cf_value.sub_prec(&prev, prec).abs();
    let slack = delta
        .mul_int(2 * (depth as i64 + 1))
        .add(&series.error_estimate)
        .add(&BigFloat::one(64).mul_pow2(-(prec as i64) + 8));
    let cf_gap = cf_value.sub_prec(&series.value, prec).abs();
    let cf_agrees = cf_gap <= slack;

    let status = if abs_err < tol && cf_agrees { VerifyStatus::Verified } else { VerifyStatus::Mismatch };
    Ok(Verification { status, series, closed_value, cf_value, cf_index: depth, cf_agrees, abs_err })
}

/// `-log10 |x|`, clamped; handy for reporting agreement.
pub fn digits_of_agreement(err: &BigFloat) -> f64 {
    if err.is_zero() {
        return f64::INFINITY;
    }
    -err.log2_abs() * std::f64::consts::LOG10_2
}

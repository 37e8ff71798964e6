//! Integer-relation detection and constant recognition.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::cfengine::CfError;
use crate::exprlang::{eval_float, parse, Expr, ExprError, Func, NamedConst};
use crate::mpval::BigFloat;
use crate::telescope::{Atom, ClosedForm};

pub const MIN_PRECISION: u32 = 128;
pub const DEFAULT_MAX_COEFF_BITS: u32 = 64;
const EXTRA_BITS: u32 = 60;
const MAX_STEPS: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RecognizerError {
    #[error("precision too low: {got} bits, need at least {need}")]
    PrecisionTooLow { got: u32, need: u32 },
    #[error("need at least two values")]
    TooFewValues,
    #[error("basis level must be 1, 2 or 3, got {0}")]
    InvalidLevel(u8),
    #[error("duplicate basis label {0}")]
    DuplicateLabel(String),
    #[error("basis entry {0} is not a constant")]
    NotConstant(String),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Value(#[from] CfError),
}

/// Integer vector `m` with `sum m_i v_i` close to zero.
#[derive(Clone, Debug, PartialEq)]
pub struct Relation {
    pub coefficients: Vec<BigInt>,
    pub residual: BigFloat,
    pub confidence_bits: i64,
}

impl Relation {
    pub fn max_coeff_bits(&self) -> u64 {
        self.coefficients.iter().map(|c| c.bits()).max().unwrap_or(0)
    }
}

/// Fixed point with `wp` fractional bits.
fn to_fixed(x: &BigFloat, wp: u32) -> BigInt {
    x.mul_pow2(wp as i64).round_to_int()
}

/// Nearest integer to `a / b`.
fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    let (a, b) = if b.is_negative() { (-a, -b) } else { (a.clone(), b.clone()) };
    let two = BigInt::from(2);
    (a * &two + &b).div_floor(&(b * &two))
}

fn canonical(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    if !g.is_zero() && !g.is_one() {
        for c in v.iter_mut() {
            *c /= &g;
        }
    }
    if v.iter().find(|c| !c.is_zero()).is_some_and(|c| c.is_negative()) {
        for c in v.iter_mut() {
            *c = -&*c;
        }
    }
    v
}

fn dot(m: &[BigInt], v: &[BigFloat], prec: u32) -> BigFloat {
    let mut acc = BigFloat::zero(prec);
    for (c, x) in m.iter().zip(v) {
        if !c.is_zero() {
            acc = acc.add_prec(&x.mul_prec(&BigFloat::from_int(c, prec), prec), prec);
        }
    }
    acc
}

fn relation_from(m: Vec<BigInt>, values: &[BigFloat], prec: u32) -> Relation {
    let wp = prec + 64;
    let residual = dot(&m, values, wp).abs().with_prec(prec);
    let mass: i64 = m.iter().map(|c| c.bits() as i64).sum();
    let r = residual.log2_abs();
    let bits = if r.is_finite() { -r.ceil() as i64 } else { prec as i64 };
    Relation { coefficients: m, residual, confidence_bits: bits - mass }
}

/// PSLQ over fixed-point integers. Returns the first relation whose residual
/// is below `2^(-precision_bits/2)` and whose entries fit in `max_coeff_bits`.
pub fn pslq(
    values: &[BigFloat],
    precision_bits: u32,
    max_coeff_bits: u32,
) -> Result<Option<Relation>, RecognizerError> {
    let n = values.len();
    if n < 2 {
        return Err(RecognizerError::TooFewValues);
    }
    if precision_bits < MIN_PRECISION {
        return Err(RecognizerError::PrecisionTooLow { got: precision_bits, need: MIN_PRECISION });
    }
    if let Some(v) = values.iter().find(|v| v.prec() < precision_bits) {
        return Err(RecognizerError::PrecisionTooLow { got: v.prec(), need: precision_bits });
    }
    let accept = |m: Vec<BigInt>| -> Option<Relation> {
        let m = canonical(m);
        if m.iter().all(|c| c.is_zero()) || m.iter().any(|c| c.bits() > max_coeff_bits as u64) {
            return None;
        }
        let rel = relation_from(m, values, precision_bits);
        rel.residual.abs_lt_pow2(-((precision_bits / 2) as i64)).then_some(rel)
    };
    // a zero entry is its own relation
    if let Some(i) = values.iter().position(|v| v.abs_lt_pow2(-(precision_bits as i64))) {
        let mut m = vec![BigInt::zero(); n];
        m[i] = BigInt::one();
        return Ok(accept(m));
    }

    let wp = precision_bits + EXTRA_BITS;
    let one = BigInt::one() << wp;
    let x: Vec<BigInt> = values.iter().map(|v| to_fixed(v, wp)).collect();
    let tol = BigInt::one() << (wp - precision_bits * 3 / 4);
    let max_coeff = BigInt::one() << max_coeff_bits;

    // gamma^k with gamma = sqrt(4/3), fixed point
    let gamma = ((BigInt::from(4) << (2 * wp)) / 3u32).sqrt();
    let mut gpow = vec![gamma.clone()];
    for k in 1..n {
        let next = (&gpow[k - 1] * &gamma) >> wp;
        gpow.push(next);
    }

    let mut b: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let mut s = vec![BigInt::zero(); n];
    for k in 0..n {
        let t: BigInt = x[k..].iter().map(|v| v * v).sum();
        s[k] = t.sqrt();
    }
    let t = s[0].clone();
    let mut y: Vec<BigInt> = x.iter().map(|v| (v << wp) / &t).collect();
    for sk in s.iter_mut() {
        *sk = (&*sk << wp) / &t;
    }
    let mut h = vec![vec![BigInt::zero(); n - 1]; n];
    for i in 0..n {
        if i < n - 1 && !s[i].is_zero() {
            h[i][i] = (&s[i + 1] << wp) / &s[i];
        }
        for j in 0..i.min(n - 1) {
            let sjj = &s[j] * &s[j + 1];
            if !sjj.is_zero() {
                h[i][j] = ((-&y[i] * &y[j]) << wp) / sjj;
            }
        }
    }

    let reduce = |i: usize, j: usize, h: &mut Vec<Vec<BigInt>>, y: &mut Vec<BigInt>, b: &mut Vec<Vec<BigInt>>| {
        if h[j][j].is_zero() {
            return;
        }
        let t = round_div(&h[i][j], &h[j][j]);
        if t.is_zero() {
            return;
        }
        let yi = y[i].clone();
        y[j] += &t * yi;
        for k in 0..=j {
            let v = &t * &h[j][k];
            h[i][k] -= v;
        }
        for row in b.iter_mut() {
            let v = &t * &row[i];
            row[j] += v;
        }
    };
    for i in 1..n {
        for j in (0..i).rev() {
            reduce(i, j, &mut h, &mut y, &mut b);
        }
    }

    for _ in 0..MAX_STEPS {
        let mut m = 0;
        let mut best = BigInt::from(-1);
        for i in 0..n - 1 {
            let sz = &gpow[i] * h[i][i].abs();
            if sz > best {
                best = sz;
                m = i;
            }
        }
        y.swap(m, m + 1);
        h.swap(m, m + 1);
        for row in b.iter_mut() {
            row.swap(m, m + 1);
        }
        if m + 2 < n {
            let t0 = (&h[m][m] * &h[m][m] + &h[m][m + 1] * &h[m][m + 1]).sqrt();
            if t0.is_zero() {
                break;
            }
            let t1 = (&h[m][m] << wp) / &t0;
            let t2 = (&h[m][m + 1] << wp) / &t0;
            for row in h.iter_mut().skip(m) {
                let t3 = row[m].clone();
                let t4 = row[m + 1].clone();
                row[m] = (&t1 * &t3 + &t2 * &t4) >> wp;
                row[m + 1] = (-&t2 * &t3 + &t1 * &t4) >> wp;
            }
        }
        for i in m + 1..n {
            for j in (0..=(i - 1).min(m + 1)).rev() {
                reduce(i, j, &mut h, &mut y, &mut b);
            }
        }
        // smallest-norm relation among columns that hit tolerance
        let mut found: Option<Relation> = None;
        for i in 0..n {
            if y[i].abs() < tol {
                let col: Vec<BigInt> = b.iter().map(|row| row[i].clone()).collect();
                if let Some(rel) = accept(col) {
                    let norm = |r: &Relation| -> BigInt { r.coefficients.iter().map(|c| c * c).sum() };
                    if found.as_ref().is_none_or(|f| norm(&rel) < norm(f)) {
                        found = Some(rel);
                    }
                }
            }
        }
        if found.is_some() {
            return Ok(found);
        }
        let recnorm = h.iter().flatten().map(|v| v.abs()).max().unwrap_or_default();
        if recnorm.is_zero() {
            break;
        }
        // no relation of norm below 1/max|H| exists
        let bound = ((&one << wp) / recnorm) >> wp;
        if bound / 100 >= max_coeff {
            break;
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq)]
pub struct BasisEntry {
    pub label: String,
    pub expr: Expr,
    pub atom: Atom,
}

/// Ordered basis constants; the query value is prepended at relation time.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstantBasis {
    pub entries: Vec<BasisEntry>,
    pub level: u8,
}

/// The closed-form atom a basis entry stands for; anything unrecognized
/// stays a `Constant` keyed by its label.
fn atom_for(label: &str, expr: &Expr) -> Atom {
    let one = BigRational::one();
    match expr {
        Expr::Int(i) if i.is_one() => Atom::One,
        Expr::Zeta(k) => Atom::Zeta(*k),
        Expr::Const(NamedConst::Gamma) => Atom::EulerGamma,
        Expr::Const(NamedConst::Catalan) => Atom::Catalan,
        Expr::Psi(a) if *a < one => Atom::Digamma(a.clone()),
        Expr::Hurwitz(k, a) if *a < one => Atom::Hurwitz(*k, a.clone()),
        Expr::Func(Func::Log, arg) => match arg.as_ref() {
            Expr::Int(p) if is_prime(p) => Atom::LogPrime(p.try_into().expect("checked small")),
            _ => Atom::Constant(label.to_string()),
        },
        _ => Atom::Constant(label.to_string()),
    }
}

fn is_prime(p: &BigInt) -> bool {
    let Ok(p) = u64::try_from(p) else { return false };
    p > 1 && p < (1 << 40) && (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

impl ConstantBasis {
    pub fn from_labels(level: u8, labels: &[&str]) -> Result<Self, RecognizerError> {
        let mut entries: Vec<BasisEntry> = Vec::new();
        for &label in labels {
            if entries.iter().any(|e| e.label == label) {
                return Err(RecognizerError::DuplicateLabel(label.to_string()));
            }
            let expr = parse(label)?;
            if !expr.is_constant() {
                return Err(RecognizerError::NotConstant(label.to_string()));
            }
            let atom = atom_for(label, &expr);
            entries.push(BasisEntry { label: label.to_string(), expr, atom });
        }
        Ok(ConstantBasis { entries, level })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|e| e.label.as_str())
    }

    pub fn eval(&self, prec: u32) -> Result<Vec<BigFloat>, RecognizerError> {
        let origin = BigFloat::zero(64);
        self.entries
            .iter()
            .map(|e| Ok(eval_float(&e.expr, &origin, prec)?.with_prec(prec)))
            .collect()
    }
}

const LEVEL1: &[&str] =
    &["1", "zeta(2)", "zeta(3)", "zeta(4)", "zeta(5)", "zeta(6)", "zeta(7)", "zeta(8)"];
const LEVEL2: &[&str] = &["gamma", "log(2)", "log(3)", "catalan", "pi"];
const LEVEL3: &[&str] = &["pi*sqrt(3)", "pi*sqrt(2)", "pi*log(2)", "pi^2*log(2)", "log(5)"];

/// Level 1: `1, zeta(2..8)`. Level 2 adds `gamma, log 2, log 3, catalan, pi`.
/// Level 3 adds `pi*sqrt(3), pi*sqrt(2), pi*log(2), pi^2*log(2), log(5)`.
pub fn default_basis(level: u8) -> Result<ConstantBasis, RecognizerError> {
    let groups: &[&[&str]] = match level {
        1 => &[LEVEL1],
        2 => &[LEVEL1, LEVEL2],
        3 => &[LEVEL1, LEVEL2, LEVEL3],
        _ => return Err(RecognizerError::InvalidLevel(level)),
    };
    let labels: Vec<&str> = groups.iter().flat_map(|g| g.iter().copied()).collect();
    ConstantBasis::from_labels(level, &labels)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Recognition {
    Match { closed_form: ClosedForm, relation: Relation },
    NoMatch { reason: String },
}

impl Recognition {
    pub fn closed_form(&self) -> Option<&ClosedForm> {
        match self {
            Recognition::Match { closed_form, .. } => Some(closed_form),
            Recognition::NoMatch { .. } => None,
        }
    }
}

/// Recognizes the value produced by `x` in terms of `basis`.
///
/// `x(bits)` must return the value to at least `bits` bits. A relation found
/// at `precision_bits` is kept only if its residual, recomputed at
/// `precision_bits + 64`, shrinks by `2^32` or falls below `2^-(precision_bits+32)`.
pub fn recognize<E>(
    x: impl Fn(u32) -> Result<BigFloat, E>,
    basis: &ConstantBasis,
    precision_bits: u32,
    max_coeff_bits: u32,
) -> Result<Recognition, RecognizerError>
where
    RecognizerError: From<E>,
{
    if precision_bits < MIN_PRECISION {
        return Err(RecognizerError::PrecisionTooLow { got: precision_bits, need: MIN_PRECISION });
    }
    let xv = x(precision_bits)?.with_prec(precision_bits);
    if xv.is_zero() {
        return Ok(Recognition::Match {
            closed_form: ClosedForm::zero(),
            relation: Relation {
                coefficients: vec![BigInt::one()],
                residual: BigFloat::zero(precision_bits),
                confidence_bits: precision_bits as i64,
            },
        });
    }
    let mut values = vec![xv];
    values.extend(basis.eval(precision_bits)?);
    let Some(rel) = pslq(&values, precision_bits, max_coeff_bits)? else {
        return Ok(Recognition::NoMatch { reason: format!("no relation within {max_coeff_bits} coefficient bits") });
    };
    let m0 = rel.coefficients[0].clone();
    if m0.is_zero() {
        return Ok(Recognition::NoMatch { reason: "relation does not involve the value".into() });
    }
    let hi = precision_bits + 64;
    let mut hv = vec![x(hi)?.with_prec(hi)];
    hv.extend(basis.eval(hi)?);
    let r_hi = dot(&rel.coefficients, &hv, hi + 64).abs();
    let shrunk = r_hi.abs_lt_pow2(-((precision_bits + 32) as i64))
        || (!rel.residual.is_zero() && r_hi.log2_abs() <= rel.residual.log2_abs() - 32.0);
    if !shrunk {
        return Ok(Recognition::NoMatch { reason: "relation fails at higher precision".into() });
    }
    let mut cf = ClosedForm::zero();
    for (entry, c) in basis.entries.iter().zip(&rel.coefficients[1..]) {
        cf.add_term(entry.atom.clone(), BigRational::new(-c, m0.clone()));
    }
    Ok(Recognition::Match { closed_form: cf, relation: rel })
}

/// Bits of the largest entry of the integer relation behind `cf`.
pub fn relation_height(cf: &ClosedForm) -> u32 {
    let den = cf.terms().fold(BigInt::one(), |l, (_, c)| l.lcm(c.denom()));
    cf.terms()
        .map(|(_, c)| (c.numer() * (&den / c.denom())).bits())
        .chain([den.bits()])
        .max()
        .unwrap_or(1) as u32
}

/// Precision for a round trip of `cf` through `recognize`, from its dimension and height.
pub fn roundtrip_precision(cf: &ClosedForm, dim: usize) -> u32 {
    256.max(dim as u32 * (relation_height(cf) + 16) + 128)
}

/// Lets `recognize` take a fixed value: the caller guarantees its accuracy.
pub fn fixed(x: &BigFloat) -> impl Fn(u32) -> Result<BigFloat, RecognizerError> + '_ {
    move |_| Ok(x.clone())
}

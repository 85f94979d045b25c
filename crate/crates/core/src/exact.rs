//! Arbitrary-precision evaluation at rational points.
//!
//! Quasipolynomials degenerate to polynomials as κ → 0, but the closed forms
//! get there through violent cancellation: at κ = 10⁻⁴ individual terms of a
//! fourth-order kernel reach ~10¹⁶ while the sum stays O(1), which wipes out
//! every significant digit of an f64 evaluation. The small-κ checks therefore
//! evaluate in exact rational arithmetic: oscillators are computed by
//! truncated Taylor series with a rigorously bounded tail, and everything
//! else is exact.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::qpoly::{EvalError, Mode, QuasiPoly, Rational, YOsc};

/// Tail bound for oscillator series, as a power of ten: the truncation error
/// of each computed `S(z)`, `C(z)` is below `10^-DEFAULT_DIGITS`.
pub const DEFAULT_DIGITS: u32 = 60;

/// A concrete rational point `(x, y, κ, a)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalPoint {
    pub x: Vec<Rational>,
    pub y: Rational,
    pub kappa: Rational,
    pub a: Rational,
}

impl RationalPoint {
    pub fn new(x: Vec<Rational>, y: Rational, kappa: Rational, a: Rational) -> Self {
        debug_assert!(kappa.is_positive() && a.is_positive());
        RationalPoint { x, y, kappa, a }
    }

    /// Exact conversion from a floating-point evaluation point (every finite
    /// f64 is a dyadic rational).
    pub fn from_eval_point(pt: &crate::qpoly::EvalPoint) -> Self {
        let conv = |v: f64| Rational::from_float(v).expect("finite coordinate");
        RationalPoint {
            x: pt.x.iter().copied().map(conv).collect(),
            y: conv(pt.y),
            kappa: conv(pt.kappa),
            a: conv(pt.a),
        }
    }
}

/// `S(z), C(z)` — (sinh, cosh) or (sin, cos) — by Taylor series, each with
/// absolute truncation error below `eps`.
fn osc_pair(z: &Rational, mode: Mode, eps: &Rational) -> (Rational, Rational) {
    let z2 = z * z;
    let mut s = z.clone(); // current sin-series term, z^(2k+1)/(2k+1)!
    let mut c = Rational::one(); // current cos-series term, z^(2k)/(2k)!
    let mut sum_s = s.clone();
    let mut sum_c = c.clone();
    let mut k: u64 = 0;
    loop {
        // next terms: multiply by ±z²/((n+1)(n+2))
        let cd = BigInt::from((2 * k + 1) * (2 * k + 2));
        let sd = BigInt::from((2 * k + 2) * (2 * k + 3));
        c = &c * &z2 / Rational::from_integer(cd);
        s = &s * &z2 / Rational::from_integer(sd);
        if mode == Mode::Circular {
            c = -c;
            s = -s;
        }
        sum_c += c.clone();
        sum_s += s.clone();
        k += 1;
        // Once every upcoming step ratio is below 1/2 the tail is bounded
        // by the last term (geometric), so stopping when both terms are
        // below eps keeps the truncation under eps. (2k+1)(2k+2) is the
        // smaller of the two next denominators.
        let smallest_next_den = Rational::from_integer(BigInt::from((2 * k + 1) * (2 * k + 2)));
        if s.abs() < *eps && c.abs() < *eps && &z2 * BigInt::from(2) < smallest_next_den {
            return (sum_s, sum_c);
        }
    }
}

fn pow_rational(base: &Rational, exp: i32) -> Result<Rational, EvalError> {
    if exp == 0 {
        return Ok(Rational::one());
    }
    if base.is_zero() && exp < 0 {
        return Err(EvalError::NearResonance {
            factor: "oscillator denominator".to_string(),
            value: 0.0,
            floor: 0.0,
        });
    }
    let mut acc = Rational::one();
    for _ in 0..exp.unsigned_abs() {
        acc *= base;
    }
    if exp < 0 {
        acc = acc.recip();
    }
    Ok(acc)
}

/// Exact-rational evaluation with the default series precision.
pub fn eval_rational(q: &QuasiPoly, pt: &RationalPoint) -> Result<Rational, EvalError> {
    eval_rational_with(q, pt, DEFAULT_DIGITS)
}

/// Exact-rational evaluation; oscillator series are truncated with absolute
/// tail below `10^-digits`. Apart from that truncation the arithmetic is
/// exact, so cancellation between huge terms is harmless.
pub fn eval_rational_with(
    q: &QuasiPoly,
    pt: &RationalPoint,
    digits: u32,
) -> Result<Rational, EvalError> {
    if pt.x.len() != q.dim() {
        return Err(EvalError::DimensionMismatch {
            expected: q.dim(),
            got: pt.x.len(),
        });
    }
    let eps = Rational::new(BigInt::one(), BigInt::from(10u32).pow(digits));
    let arg_y = &pt.kappa * &pt.y;
    let arg_a = &pt.kappa * &pt.a;
    let (sy, cy) = osc_pair(&arg_y, q.mode(), &eps);
    let (sa, ca) = osc_pair(&arg_a, q.mode(), &eps);
    let mut acc = Rational::zero();
    for t in q.terms() {
        let mut v = t.coeff.clone();
        for (xi, &ai) in pt.x.iter().zip(&t.x_exp.0) {
            v *= pow_rational(xi, ai as i32)?;
        }
        v *= pow_rational(&pt.y, t.y_exp as i32)?;
        v *= pow_rational(&pt.kappa, t.k_exp)?;
        v *= pow_rational(&pt.a, t.a_exp)?;
        match t.y_osc {
            YOsc::One => {}
            YOsc::S => v *= &sy,
            YOsc::C => v *= &cy,
        }
        v *= pow_rational(&sa, t.sa_exp)?;
        v *= pow_rational(&ca, t.ca_exp)?;
        acc += v;
    }
    Ok(acc)
}

/// Nearest f64 to an exact rational (convenience for reports).
pub fn to_f64(v: &Rational) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

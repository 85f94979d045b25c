//! The closed term algebra for layer quasipolynomials.
//!
//! Every expression this crate manipulates is a [`QuasiPoly`]: a normalized
//! finite sum of [`Term`]s of the shape
//!
//! ```text
//! c · x^α · y^j · κ^e · a^p · osc(κy) · S(κa)^sa · C(κa)^ca
//! ```
//!
//! where `c` is an exact rational, `α` is a multi-index of x-exponents, the
//! κ- and a-exponents are integers (negative powers are how denominators like
//! `sinh(κa)²` are carried), and the oscillator pair `(S, C)` is
//! `(sinh, cosh)` in hyperbolic mode and `(sin, cos)` in circular mode. The
//! `κy`-oscillator appears to degree at most one per term; that is an
//! invariant of the whole solution class and every operation here preserves
//! it.
//!
//! κ and the layer width `a` stay symbolic. Floating-point enters only
//! through [`QuasiPoly::eval`]; arbitrary-precision evaluation at rational
//! points lives in [`crate::exact`].

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

/// Exact rational scalar used for all coefficients.
pub type Rational = BigRational;

/// Shorthand for an exact rational `num/den`.
///
/// Panics if `den == 0`.
pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Shorthand for an exact integer rational.
pub fn integer(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Sign case of the equation parameter ν = σκ².
///
/// Hyperbolic means σ = −1 (oscillators are sinh/cosh and the Pythagorean
/// identity is C² − S² = 1); circular means σ = +1 (sin/cos, S² + C² = 1).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    Hyperbolic,
    Circular,
}

impl Mode {
    /// σ in ν = σκ².
    pub fn sigma(self) -> i64 {
        match self {
            Mode::Hyperbolic => -1,
            Mode::Circular => 1,
        }
    }

    /// Sign `s` of the kernel recurrence `p_{2m} = s·(2m−1)·κ⁻¹·∂κ p_{2m−2}`.
    ///
    /// Coincides with σ: minus for hyperbolic, plus for circular.
    pub fn recurrence_sign(self) -> i64 {
        self.sigma()
    }
}

/// Which direction the Pythagorean identity is applied during normalization.
///
/// `SinhDenominator` keeps powers of `S(κa)` free and rewrites `C(κa)²`
/// away (used by Dirichlet solutions, whose denominators are `S(κa)`
/// powers); `CoshDenominator` is the mirror image (Dirichlet–Neumann,
/// denominators `C(κa)`). Mixing bases in arithmetic is an error rather
/// than a silent rewrite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Basis {
    SinhDenominator,
    CoshDenominator,
}

/// The κy-oscillator factor of a term: absent, `S(κy)`, or `C(κy)`.
///
/// `S`/`C` mean sinh/cosh in hyperbolic mode and sin/cos in circular mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum YOsc {
    One,
    S,
    C,
}

/// A vector of non-negative integer exponents.
///
/// Halving, binomials, and factorials all act componentwise.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn new(exps: Vec<u32>) -> Self {
        MultiIndex(exps)
    }

    pub fn zeros(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// |k| = Σ kᵢ.
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Componentwise integer half, `[k/2]`.
    pub fn half(&self) -> MultiIndex {
        MultiIndex(self.0.iter().map(|&k| k / 2).collect())
    }

    /// Componentwise sum.
    pub fn plus(&self, other: &MultiIndex) -> MultiIndex {
        debug_assert_eq!(self.len(), other.len());
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise `self − 2·m` (saturating is a bug here, so debug-checked).
    pub fn minus_twice(&self, m: &MultiIndex) -> MultiIndex {
        debug_assert_eq!(self.len(), m.len());
        MultiIndex(
            self.0
                .iter()
                .zip(&m.0)
                .map(|(&k, &m)| {
                    debug_assert!(2 * m <= k);
                    k - 2 * m
                })
                .collect(),
        )
    }

    /// All multi-indices `0 ≤ m ≤ bound` componentwise, in odometer order.
    pub fn range_to(bound: &MultiIndex) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; bound.len()];
        loop {
            out.push(MultiIndex(cur.clone()));
            let mut axis = 0;
            loop {
                if axis == cur.len() {
                    return out;
                }
                if cur[axis] < bound.0[axis] {
                    cur[axis] += 1;
                    for low in cur.iter_mut().take(axis) {
                        *low = 0;
                    }
                    break;
                }
                axis += 1;
            }
        }
    }
}

/// `n!` as a big integer.
pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::from(1), |acc, i| acc * BigInt::from(i))
}

/// Binomial coefficient `C(n, k)` as a big integer (0 when `k > n`).
pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let k = k.min(n - k);
    let mut num = BigInt::from(1);
    let mut den = BigInt::from(1);
    for i in 0..k {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

/// One additive piece of a quasipolynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    /// Exact rational coefficient (nonzero in normalized form).
    pub coeff: Rational,
    /// x-exponents (length = ambient dimension).
    pub x_exp: MultiIndex,
    /// y-exponent.
    pub y_exp: u32,
    /// κ-exponent (negative powers allowed).
    pub k_exp: i32,
    /// a-exponent (negative powers allowed).
    pub a_exp: i32,
    /// κy-oscillator factor, degree at most one.
    pub y_osc: YOsc,
    /// Exponent of `S(κa)`.
    pub sa_exp: i32,
    /// Exponent of `C(κa)`.
    pub ca_exp: i32,
}

impl Term {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        coeff: Rational,
        x_exp: MultiIndex,
        y_exp: u32,
        k_exp: i32,
        a_exp: i32,
        y_osc: YOsc,
        sa_exp: i32,
        ca_exp: i32,
    ) -> Self {
        Term {
            coeff,
            x_exp,
            y_exp,
            k_exp,
            a_exp,
            y_osc,
            sa_exp,
            ca_exp,
        }
    }

    /// A constant term `c` in dimension `n`.
    pub fn constant(coeff: Rational, n: usize) -> Self {
        Term::monomial(coeff, MultiIndex::zeros(n), 0)
    }

    /// A plain monomial `c · x^α · y^j`.
    pub fn monomial(coeff: Rational, x_exp: MultiIndex, y_exp: u32) -> Self {
        Term::new(coeff, x_exp, y_exp, 0, 0, YOsc::One, 0, 0)
    }

    /// `κ^e` in dimension `n`.
    pub fn kappa_power(e: i32, n: usize) -> Self {
        Term::new(integer(1), MultiIndex::zeros(n), 0, e, 0, YOsc::One, 0, 0)
    }

    /// True when the term carries no oscillator factors at all
    /// (it may still carry x, y, κ, a powers).
    pub fn is_oscillator_free(&self) -> bool {
        self.y_osc == YOsc::One && self.sa_exp == 0 && self.ca_exp == 0
    }

    /// True when the term is a plain `(x, y)` monomial: no oscillators and
    /// no κ or a powers.
    pub fn is_plain(&self) -> bool {
        self.is_oscillator_free() && self.k_exp == 0 && self.a_exp == 0
    }

    /// Canonical sort key: lexicographic on (|α|, α, j, e, p, osc, sa, ca).
    fn signature(&self) -> (u32, &[u32], u32, i32, i32, YOsc, i32, i32) {
        (
            self.x_exp.total(),
            &self.x_exp.0,
            self.y_exp,
            self.k_exp,
            self.a_exp,
            self.y_osc,
            self.sa_exp,
            self.ca_exp,
        )
    }

    fn same_signature(&self, other: &Term) -> bool {
        self.signature() == other.signature()
    }

    fn with_coeff(&self, coeff: Rational) -> Term {
        let mut t = self.clone();
        t.coeff = coeff;
        t
    }
}

/// Structural errors of the term algebra.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("mode mismatch: {0:?} vs {1:?}")]
    ModeMismatch(Mode, Mode),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("reduction basis mismatch: {0:?} vs {1:?}")]
    BasisMismatch(Basis, Basis),
    #[error("multiplier carries oscillator factors")]
    OscillatorMultiplier,
    #[error("axis {axis} out of range for dimension {dim}")]
    AxisOutOfRange { axis: usize, dim: usize },
    #[error("operand is not a plain polynomial in (x, y)")]
    NotPlainPolynomial,
    #[error("expression depends on x; cannot be re-dimensioned")]
    NotDimensionFree,
    #[error("negative power of the non-basis oscillator {factor} under {basis:?}")]
    NegativeNonBasisPower { basis: Basis, factor: &'static str },
}

/// Numeric evaluation failures.
#[derive(Clone, Debug, PartialEq, Error)]
pub enum EvalError {
    #[error("point has {got} x-coordinates, expression has dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("{factor} = {value:e} is below the conditioning floor {floor:e} while raised to a negative power")]
    NearResonance {
        factor: String,
        value: f64,
        floor: f64,
    },
}

/// Options for floating-point evaluation.
#[derive(Clone, Debug)]
pub struct EvalOptions {
    /// Relative floor under which an oscillator factor raised to a negative
    /// power triggers [`EvalError::NearResonance`] instead of returning a
    /// meaningless huge value.
    pub conditioning_floor: f64,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            conditioning_floor: 1e-12,
        }
    }
}

/// A concrete point `(x, y, κ, a)` for floating-point evaluation.
#[derive(Clone, Debug, PartialEq)]
pub struct EvalPoint {
    pub x: Vec<f64>,
    pub y: f64,
    pub kappa: f64,
    pub a: f64,
}

impl EvalPoint {
    pub fn new(x: Vec<f64>, y: f64, kappa: f64, a: f64) -> Self {
        debug_assert!(kappa > 0.0 && a > 0.0);
        EvalPoint { x, y, kappa, a }
    }
}

/// Which face of the layer `y` is pinned to in [`QuasiPoly::subst_y`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LayerFace {
    /// y = 0.
    Bottom,
    /// y = a.
    Top,
}

/// A normalized quasipolynomial: fixed mode, dimension, and reduction basis,
/// plus a canonically ordered term list.
///
/// Normalized means: terms sorted by the total order on
/// `(|α|, α, j, e, p, osc, sa, ca)`, no two terms share a signature, no zero
/// coefficients, and the non-basis `κa`-oscillator appears to power 0 or 1
/// (higher powers are rewritten through the Pythagorean identity; negative
/// powers are rejected at construction, since mixing them in would make the
/// canonical form non-unique — `C − C⁻¹ − S²C⁻¹` is identically zero).
/// Denominators therefore live entirely on the basis oscillator, which is
/// exactly how the boundary-kernel families are built.
/// All constructors normalize, so a `QuasiPoly` is always canonical and two
/// values are mathematically equal in the class iff they are `==`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiPoly {
    mode: Mode,
    n: usize,
    basis: Basis,
    terms: Vec<Term>,
}

impl QuasiPoly {
    /// The zero quasipolynomial.
    pub fn zero(mode: Mode, n: usize, basis: Basis) -> Self {
        QuasiPoly {
            mode,
            n,
            basis,
            terms: Vec::new(),
        }
    }

    /// Builds and normalizes. Fails if any term's x-exponent length differs
    /// from `n`.
    pub fn from_terms(
        mode: Mode,
        n: usize,
        basis: Basis,
        terms: Vec<Term>,
    ) -> Result<Self, AlgebraError> {
        for t in &terms {
            if t.x_exp.len() != n {
                return Err(AlgebraError::DimensionMismatch(n, t.x_exp.len()));
            }
            match basis {
                Basis::SinhDenominator if t.ca_exp < 0 => {
                    return Err(AlgebraError::NegativeNonBasisPower {
                        basis,
                        factor: "C(kappa*a)",
                    })
                }
                Basis::CoshDenominator if t.sa_exp < 0 => {
                    return Err(AlgebraError::NegativeNonBasisPower {
                        basis,
                        factor: "S(kappa*a)",
                    })
                }
                _ => {}
            }
        }
        let mut q = QuasiPoly {
            mode,
            n,
            basis,
            terms,
        };
        q.canonicalize();
        Ok(q)
    }

    /// A constant.
    pub fn constant(c: Rational, mode: Mode, n: usize, basis: Basis) -> Self {
        QuasiPoly::from_terms(mode, n, basis, vec![Term::constant(c, n)]).expect("constant term")
    }

    /// A plain polynomial from `(coeff, x-exponents, y-exponent)` triples.
    pub fn plain_poly(
        mode: Mode,
        n: usize,
        basis: Basis,
        terms: &[(Rational, Vec<u32>, u32)],
    ) -> Result<Self, AlgebraError> {
        QuasiPoly::from_terms(
            mode,
            n,
            basis,
            terms
                .iter()
                .map(|(c, xs, j)| Term::monomial(c.clone(), MultiIndex::new(xs.clone()), *j))
                .collect(),
        )
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when every term is a plain `(x, y)` monomial.
    pub fn is_plain(&self) -> bool {
        self.terms.iter().all(Term::is_plain)
    }

    /// True when no term carries oscillator factors (κ/a powers allowed).
    pub fn is_oscillator_free(&self) -> bool {
        self.terms.iter().all(Term::is_oscillator_free)
    }

    /// Re-normalizes (idempotent: already-canonical values are returned
    /// unchanged, term for term).
    pub fn normalize(&self) -> QuasiPoly {
        let mut q = self.clone();
        q.canonicalize();
        q
    }

    /// Re-dimension an x-free expression (e.g. a boundary kernel) into
    /// dimension `n`.
    pub fn broadcast(&self, n: usize) -> Result<QuasiPoly, AlgebraError> {
        if self.terms.iter().any(|t| t.x_exp.total() != 0) {
            return Err(AlgebraError::NotDimensionFree);
        }
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut t = t.clone();
                t.x_exp = MultiIndex::zeros(n);
                t
            })
            .collect();
        Ok(QuasiPoly {
            mode: self.mode,
            n,
            basis: self.basis,
            terms,
        })
    }

    /// Same expression under the other reduction basis. Fails when the
    /// value carries negative powers of what would become the non-basis
    /// oscillator.
    pub fn with_basis(&self, basis: Basis) -> Result<QuasiPoly, AlgebraError> {
        QuasiPoly::from_terms(self.mode, self.n, basis, self.terms.clone())
    }

    /// Pointwise sum. Modes, dimensions, and bases must agree.
    pub fn add(&self, other: &QuasiPoly) -> Result<QuasiPoly, AlgebraError> {
        if self.mode != other.mode {
            return Err(AlgebraError::ModeMismatch(self.mode, other.mode));
        }
        if self.n != other.n {
            return Err(AlgebraError::DimensionMismatch(self.n, other.n));
        }
        if self.basis != other.basis {
            return Err(AlgebraError::BasisMismatch(self.basis, other.basis));
        }
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        let mut q = QuasiPoly {
            mode: self.mode,
            n: self.n,
            basis: self.basis,
            terms,
        };
        q.canonicalize();
        Ok(q)
    }

    /// Pointwise difference.
    pub fn sub(&self, other: &QuasiPoly) -> Result<QuasiPoly, AlgebraError> {
        self.add(&other.scale(&integer(-1)))
    }

    /// Every coefficient multiplied by `c`.
    pub fn scale(&self, c: &Rational) -> QuasiPoly {
        if c.is_zero() {
            return QuasiPoly::zero(self.mode, self.n, self.basis);
        }
        let terms = self
            .terms
            .iter()
            .map(|t| t.with_coeff(&t.coeff * c))
            .collect();
        // Scaling by a nonzero rational keeps signatures and order intact.
        QuasiPoly {
            mode: self.mode,
            n: self.n,
            basis: self.basis,
            terms,
        }
    }

    /// Multiplication by a single oscillator-free term (exponentwise).
    ///
    /// Oscillator-bearing multipliers are rejected: a product of two
    /// κy-oscillators would leave the degree-≤-1 class.
    pub fn mul_plain(&self, t: &Term) -> Result<QuasiPoly, AlgebraError> {
        if !t.is_oscillator_free() {
            return Err(AlgebraError::OscillatorMultiplier);
        }
        if t.x_exp.len() != self.n {
            return Err(AlgebraError::DimensionMismatch(self.n, t.x_exp.len()));
        }
        if t.coeff.is_zero() {
            return Ok(QuasiPoly::zero(self.mode, self.n, self.basis));
        }
        let terms = self
            .terms
            .iter()
            .map(|s| {
                Term::new(
                    &s.coeff * &t.coeff,
                    s.x_exp.plus(&t.x_exp),
                    s.y_exp + t.y_exp,
                    s.k_exp + t.k_exp,
                    s.a_exp + t.a_exp,
                    s.y_osc,
                    s.sa_exp,
                    s.ca_exp,
                )
            })
            .collect();
        let mut q = QuasiPoly {
            mode: self.mode,
            n: self.n,
            basis: self.basis,
            terms,
        };
        q.canonicalize();
        Ok(q)
    }

    /// Floating-point evaluation with default options.
    pub fn eval(&self, pt: &EvalPoint) -> Result<f64, EvalError> {
        self.eval_with(pt, &EvalOptions::default())
    }

    /// Floating-point evaluation.
    ///
    /// Near-resonant denominators (an oscillator factor raised to a negative
    /// power whose magnitude sits below the conditioning floor) fail loudly
    /// instead of returning garbage.
    pub fn eval_with(&self, pt: &EvalPoint, opts: &EvalOptions) -> Result<f64, EvalError> {
        if pt.x.len() != self.n {
            return Err(EvalError::DimensionMismatch {
                expected: self.n,
                got: pt.x.len(),
            });
        }
        let arg_y = pt.kappa * pt.y;
        let arg_a = pt.kappa * pt.a;
        let (sy, cy, sa, ca) = match self.mode {
            Mode::Hyperbolic => (arg_y.sinh(), arg_y.cosh(), arg_a.sinh(), arg_a.cosh()),
            Mode::Circular => (arg_y.sin(), arg_y.cos(), arg_a.sin(), arg_a.cos()),
        };
        // sinh(κa) scales like max(1, κa); sin and cos are bounded by 1.
        let sa_floor = match self.mode {
            Mode::Hyperbolic => opts.conditioning_floor * arg_a.abs().max(1.0),
            Mode::Circular => opts.conditioning_floor,
        };
        let ca_floor = opts.conditioning_floor;
        let (sa_name, ca_name) = match self.mode {
            Mode::Hyperbolic => ("sinh(lambda*a)", "cosh(lambda*a)"),
            Mode::Circular => ("sin(mu*a)", "cos(mu*a)"),
        };
        let mut acc = 0.0;
        for t in &self.terms {
            if t.sa_exp < 0 && sa.abs() < sa_floor {
                return Err(EvalError::NearResonance {
                    factor: sa_name.to_string(),
                    value: sa,
                    floor: sa_floor,
                });
            }
            if t.ca_exp < 0 && ca.abs() < ca_floor {
                return Err(EvalError::NearResonance {
                    factor: ca_name.to_string(),
                    value: ca,
                    floor: ca_floor,
                });
            }
            let mut v = t.coeff.to_f64().unwrap_or(f64::NAN);
            for (xi, &ai) in pt.x.iter().zip(&t.x_exp.0) {
                v *= xi.powi(ai as i32);
            }
            v *= pt.y.powi(t.y_exp as i32);
            v *= pt.kappa.powi(t.k_exp);
            v *= pt.a.powi(t.a_exp);
            v *= match t.y_osc {
                YOsc::One => 1.0,
                YOsc::S => sy,
                YOsc::C => cy,
            };
            v *= sa.powi(t.sa_exp);
            v *= ca.powi(t.ca_exp);
            acc += v;
        }
        Ok(acc)
    }

    /// Pin `y` to a face of the layer, staying inside the algebra.
    ///
    /// At the bottom (`y = 0`): `y^j` with `j > 0` and `S(κy)` factors drop,
    /// `C(κy)` becomes 1. At the top (`y = a`): `y^j` folds into the
    /// a-exponent and the κy-oscillator becomes the matching κa-oscillator.
    pub fn subst_y(&self, face: LayerFace) -> QuasiPoly {
        let mut out = Vec::new();
        for t in &self.terms {
            match face {
                LayerFace::Bottom => {
                    if t.y_exp > 0 || t.y_osc == YOsc::S {
                        continue;
                    }
                    let mut t = t.clone();
                    t.y_osc = YOsc::One;
                    out.push(t);
                }
                LayerFace::Top => {
                    let mut t = t.clone();
                    t.a_exp += t.y_exp as i32;
                    t.y_exp = 0;
                    match t.y_osc {
                        YOsc::One => {}
                        YOsc::S => t.sa_exp += 1,
                        YOsc::C => t.ca_exp += 1,
                    }
                    t.y_osc = YOsc::One;
                    out.push(t);
                }
            }
        }
        let mut q = QuasiPoly {
            mode: self.mode,
            n: self.n,
            basis: self.basis,
            terms: out,
        };
        q.canonicalize();
        q
    }

    /// The reflection `y ↦ a − y`, expanded back into the algebra.
    ///
    /// `y^j` expands binomially over `(a − y)`; the κy-oscillators expand by
    /// the addition formulas
    ///
    /// ```text
    /// S(κ(a−y)) = S(κa)·C(κy) − C(κa)·S(κy)            (both modes)
    /// C(κ(a−y)) = C(κa)·C(κy) − S(κa)·S(κy)            (hyperbolic)
    /// C(κ(a−y)) = C(κa)·C(κy) + S(κa)·S(κy)            (circular)
    /// ```
    ///
    /// An involution up to normalization.
    pub fn reflect_y(&self) -> QuasiPoly {
        let mut out = Vec::new();
        for t in &self.terms {
            let j = t.y_exp;
            for i in 0..=j {
                // (a − y)^j = Σ C(j,i) a^{j−i} (−y)^i
                let mut c = Rational::from_integer(binomial(j, i));
                if i % 2 == 1 {
                    c = -c;
                }
                let mut base = t.with_coeff(&t.coeff * c);
                base.y_exp = i;
                base.a_exp += (j - i) as i32;
                match t.y_osc {
                    YOsc::One => out.push(base),
                    YOsc::S => {
                        let mut s_part = base.clone();
                        s_part.y_osc = YOsc::C;
                        s_part.sa_exp += 1;
                        out.push(s_part);
                        let mut c_part = base;
                        c_part.coeff = -c_part.coeff;
                        c_part.y_osc = YOsc::S;
                        c_part.ca_exp += 1;
                        out.push(c_part);
                    }
                    YOsc::C => {
                        let mut c_part = base.clone();
                        c_part.y_osc = YOsc::C;
                        c_part.ca_exp += 1;
                        out.push(c_part);
                        let mut s_part = base;
                        if self.mode == Mode::Hyperbolic {
                            s_part.coeff = -s_part.coeff;
                        }
                        s_part.y_osc = YOsc::S;
                        s_part.sa_exp += 1;
                        out.push(s_part);
                    }
                }
            }
        }
        let mut q = QuasiPoly {
            mode: self.mode,
            n: self.n,
            basis: self.basis,
            terms: out,
        };
        q.canonicalize();
        q
    }

    /// Sort, merge like terms, drop zeros, and reduce the non-basis
    /// `κa`-oscillator below power two via the Pythagorean identity.
    fn canonicalize(&mut self) {
        // Identity reduction first: each split lowers the offending exponent
        // by two, so the worklist terminates.
        let mut work: Vec<Term> = std::mem::take(&mut self.terms);
        let mut done: Vec<Term> = Vec::with_capacity(work.len());
        while let Some(t) = work.pop() {
            match self.basis {
                Basis::SinhDenominator if t.ca_exp >= 2 => {
                    // C² = 1 + S² (hyperbolic) or 1 − S² (circular)
                    let mut plain = t.clone();
                    plain.ca_exp -= 2;
                    let mut squared = plain.clone();
                    squared.sa_exp += 2;
                    if self.mode == Mode::Circular {
                        squared.coeff = -squared.coeff;
                    }
                    work.push(plain);
                    work.push(squared);
                }
                Basis::CoshDenominator if t.sa_exp >= 2 => {
                    // S² = C² − 1 (hyperbolic) or 1 − C² (circular)
                    let mut plain = t.clone();
                    plain.sa_exp -= 2;
                    let mut squared = plain.clone();
                    squared.ca_exp += 2;
                    match self.mode {
                        Mode::Hyperbolic => plain.coeff = -plain.coeff,
                        Mode::Circular => squared.coeff = -squared.coeff,
                    }
                    work.push(plain);
                    work.push(squared);
                }
                _ => done.push(t),
            }
        }
        done.sort_by(|a, b| a.signature().cmp(&b.signature()));
        let mut merged: Vec<Term> = Vec::with_capacity(done.len());
        for t in done {
            match merged.last_mut() {
                Some(last) if last.same_signature(&t) => last.coeff += t.coeff,
                _ => merged.push(t),
            }
        }
        merged.retain(|t| !t.coeff.is_zero());
        self.terms = merged;
    }
}

impl fmt::Display for QuasiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::render::text(self))
    }
}

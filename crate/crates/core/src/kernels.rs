//! Boundary kernels and particular solutions.
//!
//! Solutions with monomial boundary data `x^k` are superpositions
//!
//! ```text
//! u_k(x, y) = Σ_{m ≤ [k/2]} C_k^{2m} · x^{k−2m} · p_{2m}(κ, y)
//! ```
//!
//! where the coefficient functions `p_{2m}` (and `q_{2m}` for the Neumann
//! side of the mixed problem) are generated from a closed-form seed by the
//! recurrence `p_{2m} = s·(2m−1)·κ⁻¹·∂κ p_{2m−2}`, `s = ∓1` by mode. The
//! recurrence stays inside the term algebra, so every kernel is an exact
//! quasipolynomial.
//!
//! For the inhomogeneous equation `Δu + νu = P` with polynomial `P`, the
//! polynomial particular solution is
//!
//! ```text
//! ũ = P/ν + Σ_{j≥1} (−1)^j ν^{−(j+1)} Δ^j P
//! ```
//!
//! with ν = σκ²; the sum terminates because Δ is nilpotent on polynomials.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use thiserror::Error;

use crate::calculus::{self, recurrence_step};
use crate::qpoly::{
    factorial, integer, AlgebraError, Basis, Mode, MultiIndex, QuasiPoly, Rational, Term, YOsc,
};

/// Boundary-condition type of the problem a kernel family serves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Bc {
    /// Values prescribed on both faces.
    Dirichlet,
    /// Value prescribed at y = 0, normal derivative at y = a.
    DirichletNeumann,
}

/// Which datum a kernel family carries.
///
/// `P` kernels multiply the value datum; `Q` kernels multiply the normal
/// derivative datum and exist only for the mixed problem.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum KernelKind {
    P,
    Q,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("the Dirichlet problem has no flux-side (q) kernels")]
    DirichletHasNoQKernels,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// A valid (problem, side, mode) combination.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct KernelFamily {
    pub bc: Bc,
    pub kind: KernelKind,
    pub mode: Mode,
}

impl KernelFamily {
    pub fn new(bc: Bc, kind: KernelKind, mode: Mode) -> Result<Self, KernelError> {
        if bc == Bc::Dirichlet && kind == KernelKind::Q {
            return Err(KernelError::DirichletHasNoQKernels);
        }
        Ok(KernelFamily { bc, kind, mode })
    }

    pub fn dirichlet(mode: Mode) -> Self {
        KernelFamily {
            bc: Bc::Dirichlet,
            kind: KernelKind::P,
            mode,
        }
    }

    pub fn mixed_value(mode: Mode) -> Self {
        KernelFamily {
            bc: Bc::DirichletNeumann,
            kind: KernelKind::P,
            mode,
        }
    }

    pub fn mixed_flux(mode: Mode) -> Self {
        KernelFamily {
            bc: Bc::DirichletNeumann,
            kind: KernelKind::Q,
            mode,
        }
    }

    /// Reduction basis used by this family's solutions: Dirichlet
    /// denominators are `S(κa)` powers, mixed-problem denominators `C(κa)`.
    pub fn basis(self) -> Basis {
        match self.bc {
            Bc::Dirichlet => Basis::SinhDenominator,
            Bc::DirichletNeumann => Basis::CoshDenominator,
        }
    }
}

/// The order-zero kernel, as a one-dimensional (x-free) quasipolynomial.
///
/// Dirichlet: `p₀ = S(κy)/S(κa)` (value 0 at y = 0, 1 at y = a).
/// Mixed, value side: `p₀ = C(κ(a−y))/C(κa)`, expanded by the addition
/// formula at construction so downstream code never sees shifted arguments.
/// Mixed, flux side: `q₀ = S(κy)/(κ·C(κa))`.
pub fn seed(family: KernelFamily) -> QuasiPoly {
    let n = 1;
    let x0 = MultiIndex::zeros(n);
    let terms = match (family.bc, family.kind) {
        (Bc::Dirichlet, KernelKind::P) => {
            vec![Term::new(integer(1), x0, 0, 0, 0, YOsc::S, -1, 0)]
        }
        (Bc::DirichletNeumann, KernelKind::P) => {
            // C(κ(a−y))/C(κa) = C(κy) ± S(κa)·S(κy)/C(κa)
            // (minus hyperbolic, plus circular)
            let s_sign = match family.mode {
                Mode::Hyperbolic => integer(-1),
                Mode::Circular => integer(1),
            };
            vec![
                Term::new(integer(1), x0.clone(), 0, 0, 0, YOsc::C, 0, 0),
                Term::new(s_sign, x0, 0, 0, 0, YOsc::S, 1, -1),
            ]
        }
        (Bc::DirichletNeumann, KernelKind::Q) => {
            vec![Term::new(integer(1), x0, 0, -1, 0, YOsc::S, 0, -1)]
        }
        (Bc::Dirichlet, KernelKind::Q) => unreachable!("rejected by KernelFamily::new"),
    };
    QuasiPoly::from_terms(family.mode, n, family.basis(), terms).expect("seed term dimensions")
}

type KernelCache = Mutex<HashMap<(KernelFamily, u32), QuasiPoly>>;

fn cache() -> &'static KernelCache {
    static CACHE: OnceLock<KernelCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The order-2m kernel `p_{2m}` (or `q_{2m}`), one-dimensional, memoized.
pub fn p2m(family: KernelFamily, m: u32) -> QuasiPoly {
    if let Some(hit) = cache().lock().unwrap().get(&(family, m)) {
        return hit.clone();
    }
    let value = if m == 0 {
        seed(family)
    } else {
        recurrence_step(&p2m(family, m - 1), m)
    };
    let mut guard = cache().lock().unwrap();
    guard.entry((family, m)).or_insert_with(|| value.clone());
    value
}

/// The multi-index kernel `p_{2m} = (2m)!·|m|! / (|2m|!·m!) · p_{2|m|}`,
/// broadcast to dimension `m.len()`; multi-index factorials act
/// componentwise.
pub fn multiindex_p(family: KernelFamily, m: &MultiIndex) -> QuasiPoly {
    let ratio = multiindex_ratio(m);
    p2m(family, m.total())
        .broadcast(m.len())
        .expect("kernels are x-free")
        .scale(&ratio)
}

/// `(2m)!·|m|! / (|2m|!·m!)` as an exact rational.
pub fn multiindex_ratio(m: &MultiIndex) -> Rational {
    let total = m.total();
    let mut num = factorial(total);
    let mut den = factorial(2 * total);
    for &mi in &m.0 {
        num *= factorial(2 * mi);
        den *= factorial(mi);
    }
    Rational::new(num, den)
}

/// The solution with monomial boundary datum `x^k`:
/// `Σ_{m ≤ [k/2]} C_k^{2m} x^{k−2m} p_{2m}` (componentwise binomials).
///
/// Boundary behavior by family:
/// - Dirichlet `P`: 0 at y = 0, `x^k` at y = a (the y = 0 counterpart is
///   its [`QuasiPoly::reflect_y`] image);
/// - mixed `P`: `x^k` at y = 0, zero normal derivative at y = a;
/// - mixed `Q`: 0 at y = 0, normal derivative `x^k` at y = a.
pub fn monomial_solution(family: KernelFamily, k: &MultiIndex) -> QuasiPoly {
    let n = k.len();
    let mut acc = QuasiPoly::zero(family.mode, n, family.basis());
    for m in MultiIndex::range_to(&k.half()) {
        let mut binom = BigInt::from(1);
        for (&ki, &mi) in k.0.iter().zip(&m.0) {
            binom *= crate::qpoly::binomial(ki, 2 * mi);
        }
        let monomial = Term::monomial(Rational::from_integer(binom), k.minus_twice(&m), 0);
        let contribution = multiindex_p(family, &m)
            .mul_plain(&monomial)
            .expect("plain monomial");
        acc = acc.add(&contribution).expect("same family");
    }
    acc
}

/// Polynomial particular solution of `Δu + νu = P` for plain polynomial `P`,
/// with ν = σκ² taken from `P`'s mode. Iterates Δ until it vanishes.
///
/// The result is a polynomial in `(x, y)` whose coefficients carry negative
/// κ-powers, and it satisfies the equation exactly in the algebra.
pub fn particular(p: &QuasiPoly) -> Result<QuasiPoly, KernelError> {
    if !p.is_plain() {
        return Err(AlgebraError::NotPlainPolynomial.into());
    }
    let sigma = p.mode().sigma();
    let mut acc = QuasiPoly::zero(p.mode(), p.dim(), p.basis());
    let mut power = p.clone(); // Δ^j P
    let mut j: i32 = 0;
    while !power.is_zero() {
        // (−1)^j / ν^{j+1} = (−1)^j σ^{j+1} κ^{−2(j+1)}
        let mut sign = if j % 2 == 0 { 1 } else { -1 };
        if sigma < 0 && (j + 1) % 2 == 1 {
            sign = -sign;
        }
        let factor = Term::new(
            integer(sign),
            MultiIndex::zeros(p.dim()),
            0,
            -2 * (j + 1),
            0,
            YOsc::One,
            0,
            0,
        );
        acc = acc.add(&power.mul_plain(&factor)?)?;
        power = calculus::laplacian(&power);
        j += 1;
    }
    Ok(acc)
}

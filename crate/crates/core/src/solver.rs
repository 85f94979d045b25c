//! End-to-end assembly of boundary-value problems.
//!
//! The pipeline: build the polynomial particular solution ũ of
//! `Δu + νu = P`, correct the boundary data by the traces of ũ, decompose
//! each corrected datum into x-monomials (their coefficients live in the
//! κ/a-power ring), superpose the matching boundary kernels, and report a
//! uniqueness verdict plus any conditioning warnings.
//!
//! For the circular mode (ν = +μ²) the layer operator has eigenvalues at
//! `μa = kπ` (Dirichlet) or `μa = π/2 + kπ` (mixed); solving there is
//! rejected, and near-misses are flagged. Uniqueness in the slow-growth
//! class holds below `μ = π/a` (Dirichlet) / `π/(2a)` (mixed); the verdict
//! is decided in exact rational arithmetic against interval bounds of π.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use thiserror::Error;

pub use crate::kernels::Bc;

use crate::calculus;
use crate::kernels::{self, KernelFamily};
use crate::qpoly::{integer, AlgebraError, LayerFace, Mode, MultiIndex, QuasiPoly, Rational, Term};

/// Rational interval bracketing π, used for exact uniqueness comparisons:
/// `pi_lower() < π < pi_upper()`.
fn pi_lower() -> Rational {
    Rational::new(
        BigInt::from(314_159_265_358_979u64),
        BigInt::from(100_000_000_000_000u64),
    )
}

fn pi_upper() -> Rational {
    Rational::new(
        BigInt::from(314_159_265_358_980u64),
        BigInt::from(100_000_000_000_000u64),
    )
}

/// One monomial `coeff · x^α · y^j` of an input polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyTerm {
    pub coeff: Rational,
    pub x_exp: MultiIndex,
    pub y_exp: u32,
}

impl PolyTerm {
    pub fn new(coeff: Rational, x_exp: MultiIndex, y_exp: u32) -> Self {
        PolyTerm {
            coeff,
            x_exp,
            y_exp,
        }
    }
}

/// A fully specified boundary-value problem.
#[derive(Clone, Debug, PartialEq)]
pub struct ProblemSpec {
    n: usize,
    a: Rational,
    mode: Mode,
    kappa: Rational,
    bc: Bc,
    rhs: Vec<PolyTerm>,
    phi: Vec<PolyTerm>,
    psi: Vec<PolyTerm>,
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum ProblemError {
    #[error("layer width a must be positive, got {0}")]
    NonPositiveWidth(String),
    #[error("kappa must be positive, got {0}")]
    NonPositiveKappa(String),
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("{role} term has {got} x-exponents, expected {expected}")]
    TermDimension {
        role: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("boundary datum {role} must not depend on y")]
    BoundaryDependsOnY { role: &'static str },
}

impl ProblemSpec {
    /// Validates and builds a problem. `phi` is the value datum at y = 0;
    /// `psi` is the value at y = a (Dirichlet) or the normal derivative at
    /// y = a (mixed). Both must be polynomials in x alone.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        n: usize,
        a: Rational,
        mode: Mode,
        kappa: Rational,
        bc: Bc,
        rhs: Vec<PolyTerm>,
        phi: Vec<PolyTerm>,
        psi: Vec<PolyTerm>,
    ) -> Result<Self, ProblemError> {
        if n == 0 {
            return Err(ProblemError::ZeroDimension);
        }
        if !a.is_positive() {
            return Err(ProblemError::NonPositiveWidth(a.to_string()));
        }
        if !kappa.is_positive() {
            return Err(ProblemError::NonPositiveKappa(kappa.to_string()));
        }
        for (role, poly, y_allowed) in [
            ("P", &rhs, true),
            ("phi", &phi, false),
            ("psi", &psi, false),
        ] {
            for t in poly.iter() {
                if t.x_exp.len() != n {
                    return Err(ProblemError::TermDimension {
                        role,
                        expected: n,
                        got: t.x_exp.len(),
                    });
                }
                if !y_allowed && t.y_exp != 0 {
                    return Err(ProblemError::BoundaryDependsOnY { role });
                }
            }
        }
        Ok(ProblemSpec {
            n,
            a,
            mode,
            kappa,
            bc,
            rhs,
            phi,
            psi,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn width(&self) -> &Rational {
        &self.a
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn kappa(&self) -> &Rational {
        &self.kappa
    }

    pub fn bc(&self) -> Bc {
        self.bc
    }

    pub fn rhs_terms(&self) -> &[PolyTerm] {
        &self.rhs
    }

    pub fn phi_terms(&self) -> &[PolyTerm] {
        &self.phi
    }

    pub fn psi_terms(&self) -> &[PolyTerm] {
        &self.psi
    }

    /// Reduction basis of this problem's solutions.
    pub fn basis(&self) -> crate::qpoly::Basis {
        self.value_family().basis()
    }

    fn value_family(&self) -> KernelFamily {
        match self.bc {
            Bc::Dirichlet => KernelFamily::dirichlet(self.mode),
            Bc::DirichletNeumann => KernelFamily::mixed_value(self.mode),
        }
    }

    fn poly_to_quasipoly(&self, poly: &[PolyTerm]) -> QuasiPoly {
        QuasiPoly::from_terms(
            self.mode,
            self.n,
            self.basis(),
            poly.iter()
                .map(|t| Term::monomial(t.coeff.clone(), t.x_exp.clone(), t.y_exp))
                .collect(),
        )
        .expect("validated dimensions")
    }

    /// The right-hand side P as a quasipolynomial.
    pub fn rhs_poly(&self) -> QuasiPoly {
        self.poly_to_quasipoly(&self.rhs)
    }

    /// The y = 0 value datum φ as a quasipolynomial.
    pub fn phi_poly(&self) -> QuasiPoly {
        self.poly_to_quasipoly(&self.phi)
    }

    /// The y = a datum ψ (value for Dirichlet, normal derivative for mixed).
    pub fn psi_poly(&self) -> QuasiPoly {
        self.poly_to_quasipoly(&self.psi)
    }

    /// ν·q = σκ²·q inside the algebra.
    pub fn nu_times(&self, q: &QuasiPoly) -> QuasiPoly {
        let sigma = integer(self.mode.sigma());
        q.mul_plain(&Term::kappa_power(2, q.dim()))
            .expect("plain multiplier")
            .scale(&sigma)
    }
}

/// Verdict on uniqueness in the slow-growth class.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Uniqueness {
    UniqueSlowGrowth,
    NotUnique,
}

/// The assembled solution.
#[derive(Clone, Debug)]
pub struct Solution {
    /// The full solution u = ũ + v, normalized.
    pub u: QuasiPoly,
    /// The polynomial particular part ũ.
    pub particular: QuasiPoly,
    /// The homogeneous part v correcting the boundary data.
    pub homogeneous: QuasiPoly,
    pub uniqueness: Uniqueness,
    pub warnings: Vec<String>,
}

/// Near-resonance policy for the circular mode.
#[derive(Clone, Debug)]
pub struct SolverOptions {
    /// |S(μa)| (Dirichlet) or |C(μa)| (mixed) below this is a hard error.
    pub resonance_hard_floor: f64,
    /// ...below this (but above the hard floor) only warns.
    pub resonance_soft_floor: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            resonance_hard_floor: 1e-10,
            resonance_soft_floor: 1e-6,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum SolveError {
    #[error("{factor} = {value:e}: the problem parameter sits at or near an eigenvalue")]
    AtEigenvalue { factor: String, value: f64 },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Outcome of the resonance check.
#[derive(Clone, Debug, PartialEq)]
pub enum GuardOutcome {
    Pass,
    Warning(String),
}

/// Conditioning check for the circular mode.
///
/// An exact rational μa never equals a nonzero multiple of π, so this guards
/// the numerics, not the mathematics: kernels carry `S(μa)` or `C(μa)`
/// denominators, and evaluating them next to an eigenvalue returns garbage.
pub fn resonance_guard(spec: &ProblemSpec) -> Result<GuardOutcome, SolveError> {
    resonance_guard_with(spec, &SolverOptions::default())
}

pub fn resonance_guard_with(
    spec: &ProblemSpec,
    opts: &SolverOptions,
) -> Result<GuardOutcome, SolveError> {
    if spec.mode() == Mode::Hyperbolic {
        return Ok(GuardOutcome::Pass);
    }
    let arg = (spec.kappa() * spec.width()).to_f64().unwrap_or(f64::NAN);
    let (value, factor) = match spec.bc() {
        Bc::Dirichlet => (arg.sin(), "sin(mu*a)"),
        Bc::DirichletNeumann => (arg.cos(), "cos(mu*a)"),
    };
    if value.abs() < opts.resonance_hard_floor {
        return Err(SolveError::AtEigenvalue {
            factor: factor.to_string(),
            value,
        });
    }
    if value.abs() < opts.resonance_soft_floor {
        return Ok(GuardOutcome::Warning(format!(
            "{factor} = {value:e}: solving near an eigenvalue, expect large coefficients"
        )));
    }
    Ok(GuardOutcome::Pass)
}

/// Uniqueness verdict in the slow-growth class.
///
/// Hyperbolic problems are always unique. Circular ones are unique iff
/// `μ < π/a` (Dirichlet) or `μ < π/(2a)` (mixed); the comparison runs in
/// exact rational arithmetic against an interval bracketing π, and a μa
/// that lands inside the interval is conservatively reported `NotUnique`.
pub fn uniqueness_report(spec: &ProblemSpec) -> Uniqueness {
    uniqueness_with_warning(spec).0
}

pub(crate) fn uniqueness_with_warning(spec: &ProblemSpec) -> (Uniqueness, Option<String>) {
    if spec.mode() == Mode::Hyperbolic {
        return (Uniqueness::UniqueSlowGrowth, None);
    }
    // Dirichlet threshold: μa < π; mixed: 2μa < π.
    let mut product = spec.kappa() * spec.width();
    if spec.bc() == Bc::DirichletNeumann {
        product *= Rational::from_integer(BigInt::from(2));
    }
    if product < pi_lower() {
        (Uniqueness::UniqueSlowGrowth, None)
    } else if product <= pi_upper() {
        (
            Uniqueness::NotUnique,
            Some(
                "mu*a is inside the rational bracket of the uniqueness threshold; \
                 conservatively reported as not unique"
                    .to_string(),
            ),
        )
    } else {
        (Uniqueness::NotUnique, None)
    }
}

/// Splits an oscillator-free quasipolynomial in x (κ/a-ring coefficients)
/// into x-monomials: multi-index ↦ ring coefficient pieces.
fn decompose_on_x(g: &QuasiPoly) -> BTreeMap<MultiIndex, Vec<Term>> {
    debug_assert!(g.is_oscillator_free());
    let mut map: BTreeMap<MultiIndex, Vec<Term>> = BTreeMap::new();
    for t in g.terms() {
        debug_assert_eq!(t.y_exp, 0);
        let mut ring = t.clone();
        ring.x_exp = MultiIndex::zeros(g.dim());
        map.entry(t.x_exp.clone()).or_default().push(ring);
    }
    map
}

/// Superposes boundary kernels against a corrected datum `g` (an
/// x-polynomial with κ/a-ring coefficients).
fn superpose(
    g: &QuasiPoly,
    kernel_for: impl Fn(&MultiIndex) -> QuasiPoly,
) -> Result<QuasiPoly, AlgebraError> {
    let mut acc = QuasiPoly::zero(g.mode(), g.dim(), g.basis());
    for (k, ring_terms) in decompose_on_x(g) {
        let kernel = kernel_for(&k);
        for ring in ring_terms {
            acc = acc.add(&kernel.mul_plain(&ring)?)?;
        }
    }
    Ok(acc)
}

/// Solves the problem with the default near-resonance policy.
pub fn solve(spec: &ProblemSpec) -> Result<Solution, SolveError> {
    solve_with(spec, &SolverOptions::default())
}

/// Solves the problem: particular solution, boundary correction, kernel
/// superposition. The residual `Δu + νu − P` of the result normalizes to
/// exactly zero and the boundary traces reproduce the data exactly; both
/// facts are re-checkable through [`crate::verify`].
pub fn solve_with(spec: &ProblemSpec, opts: &SolverOptions) -> Result<Solution, SolveError> {
    let mut warnings = Vec::new();
    match resonance_guard_with(spec, opts)? {
        GuardOutcome::Pass => {}
        GuardOutcome::Warning(w) => warnings.push(w),
    }

    let particular = kernels::particular(&spec.rhs_poly()).map_err(|e| match e {
        kernels::KernelError::Algebra(a) => SolveError::Algebra(a),
        kernels::KernelError::DirichletHasNoQKernels => unreachable!("particular uses no kernels"),
    })?;

    // Corrected data: subtract the particular solution's traces.
    let bottom = spec
        .phi_poly()
        .sub(&particular.subst_y(LayerFace::Bottom))?;
    let top = match spec.bc() {
        Bc::Dirichlet => spec.psi_poly().sub(&particular.subst_y(LayerFace::Top))?,
        Bc::DirichletNeumann => spec
            .psi_poly()
            .sub(&calculus::ddy(&particular).subst_y(LayerFace::Top))?,
    };

    let homogeneous = match spec.bc() {
        Bc::Dirichlet => {
            let family = KernelFamily::dirichlet(spec.mode());
            // The bottom datum rides the reflected kernels (x^k at y = 0),
            // the top datum the direct ones (x^k at y = a).
            let from_bottom = superpose(&bottom, |k| {
                kernels::monomial_solution(family, k).reflect_y()
            })?;
            let from_top = superpose(&top, |k| kernels::monomial_solution(family, k))?;
            from_bottom.add(&from_top)?
        }
        Bc::DirichletNeumann => {
            let value_family = KernelFamily::mixed_value(spec.mode());
            let flux_family = KernelFamily::mixed_flux(spec.mode());
            let from_bottom = superpose(&bottom, |k| kernels::monomial_solution(value_family, k))?;
            let from_top = superpose(&top, |k| kernels::monomial_solution(flux_family, k))?;
            from_bottom.add(&from_top)?
        }
    };

    let u = particular.add(&homogeneous)?;
    let (uniqueness, warn) = uniqueness_with_warning(spec);
    if let Some(w) = warn {
        warnings.push(w);
    }
    Ok(Solution {
        u,
        particular,
        homogeneous,
        uniqueness,
        warnings,
    })
}

//! Exact quasipolynomial solutions of Dirichlet and Dirichlet–Neumann
//! boundary-value problems for the Helmholtz equation in a layer.
//!
//! The domain is the slab `ℝⁿ × (0, a)`. For the equation
//!
//! ```text
//! Δu(x, y) + ν u(x, y) = P(x, y),      ν = ±κ²,  κ > 0,
//! ```
//!
//! with a polynomial right-hand side `P` and polynomial boundary data, the
//! solution of slow growth is a *quasipolynomial*: a finite sum of monomials
//! in `(x, y)` times hyperbolic (`ν = −κ²`) or trigonometric (`ν = +κ²`)
//! functions of `κy` and `κa`. This crate constructs that solution in closed
//! form with exact rational coefficients and verifies it both symbolically
//! (the residual cancels term by term) and numerically (independent
//! finite-difference and series oracles).
//!
//! # Quick start
//!
//! Solve `Δu − λ²u = x²y²` on `ℝ × (0, a)` with `u(x,0) = u(x,a) = 0`:
//!
//! ```
//! use helmholtz_layer::solver::{Bc, PolyTerm, ProblemSpec};
//! use helmholtz_layer::{integer, rational, EvalPoint, Mode, MultiIndex};
//!
//! let spec = ProblemSpec::new(
//!     1,                         // dimension of x
//!     rational(5, 4),            // layer width a
//!     Mode::Hyperbolic,          // ν = −κ²
//!     integer(1),                // κ
//!     Bc::Dirichlet,
//!     vec![PolyTerm::new(integer(1), MultiIndex::new(vec![2]), 2)], // P = x²y²
//!     vec![],                    // φ = 0
//!     vec![],                    // ψ = 0
//! )
//! .unwrap();
//!
//! let solution = helmholtz_layer::solver::solve(&spec).unwrap();
//!
//! // The boundary traces vanish exactly in the term algebra...
//! use helmholtz_layer::qpoly::LayerFace;
//! assert!(solution.u.subst_y(LayerFace::Bottom).is_zero());
//! assert!(solution.u.subst_y(LayerFace::Top).is_zero());
//!
//! // ...and the value at an interior point is finite and reproducible.
//! let pt = EvalPoint::new(vec![0.5], 0.625, 1.0, 1.25);
//! let v = solution.u.eval(&pt).unwrap();
//! assert!(v.is_finite());
//! ```

pub mod calculus;
pub mod document;
pub mod exact;
pub mod kernels;
pub mod qpoly;
pub mod render;
pub mod solver;
pub mod verify;

pub use qpoly::{
    integer, rational, Basis, EvalOptions, EvalPoint, LayerFace, Mode, MultiIndex, QuasiPoly,
    Rational, Term, YOsc,
};

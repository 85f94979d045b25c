//! Shared fixtures: reference closed forms written out by hand, kept
//! independent of the library's own construction paths so the two can be
//! compared as separate routes to the same functions.

#![allow(dead_code)]

use num_traits::Zero;

use helmholtz_layer::qpoly::{integer, rational, Basis, Mode, MultiIndex, QuasiPoly, Term, YOsc};
use helmholtz_layer::solver::{Bc, PolyTerm, ProblemSpec};

pub fn rel_close(got: f64, want: f64, tol: f64) -> bool {
    (got - want).abs() <= tol * want.abs().max(1.0)
}

#[allow(clippy::too_many_arguments)]
fn t(
    coeff: helmholtz_layer::Rational,
    x: Vec<u32>,
    y: u32,
    k: i32,
    a: i32,
    osc: YOsc,
    sa: i32,
    ca: i32,
) -> Term {
    Term::new(coeff, MultiIndex::new(x), y, k, a, osc, sa, ca)
}

/// Second Dirichlet hyperbolic kernel, expanded by hand:
/// `−y·C(λy)/(λ·S(λa)) + a·S(λy)·C(λa)/(λ·S(λa)²)`.
pub fn p2_reference() -> QuasiPoly {
    QuasiPoly::from_terms(
        Mode::Hyperbolic,
        1,
        Basis::SinhDenominator,
        vec![
            t(integer(-1), vec![0], 1, -1, 0, YOsc::C, -1, 0),
            t(integer(1), vec![0], 0, -1, 1, YOsc::S, -2, 1),
        ],
    )
    .unwrap()
}

/// Fourth Dirichlet hyperbolic kernel, six hand-expanded terms.
pub fn p4_reference() -> QuasiPoly {
    QuasiPoly::from_terms(
        Mode::Hyperbolic,
        1,
        Basis::SinhDenominator,
        vec![
            t(integer(-3), vec![0], 1, -3, 0, YOsc::C, -1, 0),
            t(integer(3), vec![0], 2, -2, 0, YOsc::S, -1, 0),
            t(integer(-6), vec![0], 1, -2, 1, YOsc::C, -2, 1),
            t(integer(3), vec![0], 0, -3, 1, YOsc::S, -2, 1),
            t(integer(6), vec![0], 0, -2, 2, YOsc::S, -3, 2),
            t(integer(-3), vec![0], 0, -2, 2, YOsc::S, -1, 0),
        ],
    )
    .unwrap()
}

/// Dirichlet hyperbolic `u₂ = x²S(λy)/S(λa) − yC(λy)/(λS(λa))
/// + aS(λy)C(λa)/(λS(λa)²)`.
pub fn dirichlet_u2_reference() -> QuasiPoly {
    QuasiPoly::from_terms(
        Mode::Hyperbolic,
        1,
        Basis::SinhDenominator,
        vec![
            t(integer(1), vec![2], 0, 0, 0, YOsc::S, -1, 0),
            t(integer(-1), vec![0], 1, -1, 0, YOsc::C, -1, 0),
            t(integer(1), vec![0], 0, -1, 1, YOsc::S, -2, 1),
        ],
    )
    .unwrap()
}

/// Mixed-problem hyperbolic value solution of order one:
/// `u₁ = x·C(λy) − x·S(λa)·S(λy)/C(λa)`.
pub fn dn_u1_reference() -> QuasiPoly {
    QuasiPoly::from_terms(
        Mode::Hyperbolic,
        1,
        Basis::CoshDenominator,
        vec![
            t(integer(1), vec![1], 0, 0, 0, YOsc::C, 0, 0),
            t(integer(-1), vec![1], 0, 0, 0, YOsc::S, 1, -1),
        ],
    )
    .unwrap()
}

/// `u₂ = x²C(λy) − x²S(λa)S(λy)/C(λa) + yS(λa)C(λy)/(λC(λa))
///      + aS(λy)/λ − yS(λy)/λ − aS(λa)²S(λy)/(λC(λa)²)`.
pub fn dn_u2_reference() -> QuasiPoly {
    QuasiPoly::from_terms(
        Mode::Hyperbolic,
        1,
        Basis::CoshDenominator,
        vec![
            t(integer(1), vec![2], 0, 0, 0, YOsc::C, 0, 0),
            t(integer(-1), vec![2], 0, 0, 0, YOsc::S, 1, -1),
            t(integer(1), vec![0], 1, -1, 0, YOsc::C, 1, -1),
            t(integer(1), vec![0], 0, -1, 1, YOsc::S, 0, 0),
            t(integer(-1), vec![0], 1, -1, 0, YOsc::S, 0, 0),
            t(integer(-1), vec![0], 0, -1, 1, YOsc::S, 2, -2),
        ],
    )
    .unwrap()
}

/// `v₁ = x·S(λy)/(λ·C(λa))`.
pub fn dn_v1_reference() -> QuasiPoly {
    QuasiPoly::from_terms(
        Mode::Hyperbolic,
        1,
        Basis::CoshDenominator,
        vec![t(integer(1), vec![1], 0, -1, 0, YOsc::S, 0, -1)],
    )
    .unwrap()
}

/// `v₂ = x²S(λy)/(λC(λa)) − yC(λy)/(λ²C(λa)) + S(λy)/(λ³C(λa))
///      + aS(λa)S(λy)/(λ²C(λa)²)`.
pub fn dn_v2_reference() -> QuasiPoly {
    QuasiPoly::from_terms(
        Mode::Hyperbolic,
        1,
        Basis::CoshDenominator,
        vec![
            t(integer(1), vec![2], 0, -1, 0, YOsc::S, 0, -1),
            t(integer(-1), vec![0], 1, -2, 0, YOsc::C, 0, -1),
            t(integer(1), vec![0], 0, -3, 0, YOsc::S, 0, -1),
            t(integer(1), vec![0], 0, -2, 1, YOsc::S, 1, -2),
        ],
    )
    .unwrap()
}

/// Circular Dirichlet `u₂ = x²S(μy)/S(μa) + yC(μy)/(μS(μa))
/// − aS(μy)C(μa)/(μS(μa)²)`.
pub fn circular_u2_reference() -> QuasiPoly {
    QuasiPoly::from_terms(
        Mode::Circular,
        1,
        Basis::SinhDenominator,
        vec![
            t(integer(1), vec![2], 0, 0, 0, YOsc::S, -1, 0),
            t(integer(1), vec![0], 1, -1, 0, YOsc::C, -1, 0),
            t(integer(-1), vec![0], 0, -1, 1, YOsc::S, -2, 1),
        ],
    )
    .unwrap()
}

/// Circular mixed-problem flux solution of order two:
/// `v₂ = x²S(μy)/(μC(μa)) + yC(μy)/(μ²C(μa)) − S(μy)/(μ³C(μa))
///      + aS(μa)S(μy)/(μ²C(μa)²)`.
///
/// The two middle terms carry the opposite signs from the hyperbolic flux
/// family: the recurrence sign flips with the mode, and the μ → 0 limit
/// `x²y − y³/3 + a²y` pins the pattern.
pub fn circular_v2_reference() -> QuasiPoly {
    QuasiPoly::from_terms(
        Mode::Circular,
        1,
        Basis::CoshDenominator,
        vec![
            t(integer(1), vec![2], 0, -1, 0, YOsc::S, 0, -1),
            t(integer(1), vec![0], 1, -2, 0, YOsc::C, 0, -1),
            t(integer(-1), vec![0], 0, -3, 0, YOsc::S, 0, -1),
            t(integer(1), vec![0], 0, -2, 1, YOsc::S, 1, -2),
        ],
    )
    .unwrap()
}

/// Dirichlet problem `Δu − λ²u = x²y²`, zero boundary data.
pub fn example2_spec() -> ProblemSpec {
    ProblemSpec::new(
        1,
        rational(5, 4),
        Mode::Hyperbolic,
        integer(1),
        Bc::Dirichlet,
        vec![PolyTerm::new(integer(1), MultiIndex::new(vec![2]), 2)],
        vec![],
        vec![],
    )
    .unwrap()
}

/// Mixed problem `Δu − λ²u = x²y²`, `u(x,0) = 0`, `u_y(x,a) = 0`.
pub fn example3_spec() -> ProblemSpec {
    ProblemSpec::new(
        1,
        rational(5, 4),
        Mode::Hyperbolic,
        integer(1),
        Bc::DirichletNeumann,
        vec![PolyTerm::new(integer(1), MultiIndex::new(vec![2]), 2)],
        vec![],
        vec![],
    )
    .unwrap()
}

/// Mixed circular problem `Δu + μ²u = x₁²x₂x₃·y³` in three dimensions,
/// a = 1, zero data.
pub fn example4_spec() -> ProblemSpec {
    ProblemSpec::new(
        3,
        integer(1),
        Mode::Circular,
        integer(1),
        Bc::DirichletNeumann,
        vec![PolyTerm::new(integer(1), MultiIndex::new(vec![2, 1, 1]), 3)],
        vec![],
        vec![],
    )
    .unwrap()
}

/// Hand-coded closed-form solution of the Dirichlet x²y² problem, evaluated
/// directly in f64 — shares nothing with the term algebra.
pub fn example2_closed_form(x: f64, y: f64, l: f64, a: f64) -> f64 {
    let (sh, ch) = (f64::sinh, f64::cosh);
    -x * x * y * y / l.powi(2) - 2.0 * y * y / l.powi(4) - 2.0 * x * x / l.powi(4) - 8.0 / l.powi(6)
        + a * a * x * x * sh(l * y) / (l.powi(2) * sh(l * a))
        - a * a * y * ch(l * y) / (l.powi(3) * sh(l * a))
        + a.powi(3) * sh(l * y) * ch(l * a) / (l.powi(3) * sh(l * a).powi(2))
        + sh(l * y) * (2.0 * x * x + 2.0 * a * a - 2.0 * x * x * ch(l * a))
            / (l.powi(4) * sh(l * a))
        + 2.0 * y * ch(l * y) * (ch(l * a) - 1.0) / (l.powi(5) * sh(l * a))
        + 2.0 * a * sh(l * y) * ch(l * a) * (1.0 - ch(l * a)) / (l.powi(5) * sh(l * a).powi(2))
        + 8.0 * sh(l * y) * (1.0 - ch(l * a)) / (l.powi(6) * sh(l * a))
        + 2.0 * x * x * ch(l * y) / l.powi(4)
        + 2.0 * (a - y) * sh(l * y) / l.powi(5)
        + 8.0 * ch(l * y) / l.powi(6)
}

/// Hand-coded closed-form solution of the mixed x²y² problem.
pub fn example3_closed_form(x: f64, y: f64, l: f64, a: f64) -> f64 {
    let (sh, ch) = (f64::sinh, f64::cosh);
    -x * x * y * y / l.powi(2) - 2.0 * y * y / l.powi(4) - 2.0 * x * x / l.powi(4) - 8.0 / l.powi(6)
        + 2.0 * x * x * ch(l * y) / l.powi(4)
        - 2.0 * x * x * sh(l * a) * sh(l * y) / (l.powi(4) * ch(l * a))
        + 2.0 * y * sh(l * a) * ch(l * y) / (l.powi(5) * ch(l * a))
        + 2.0 * a * sh(l * y) / l.powi(5)
        - 2.0 * y * sh(l * y) / l.powi(5)
        - 2.0 * a * sh(l * a).powi(2) * sh(l * y) / (l.powi(5) * ch(l * a).powi(2))
        + 8.0 * ch(l * (a - y)) / (l.powi(6) * ch(l * a))
        + 2.0 * a * x * x * sh(l * y) / (l.powi(3) * ch(l * a))
        - 2.0 * a * y * ch(l * y) / (l.powi(4) * ch(l * a))
        + 6.0 * a * sh(l * y) / (l.powi(5) * ch(l * a))
        + 2.0 * a * a * sh(l * a) * sh(l * y) / (l.powi(4) * ch(l * a).powi(2))
}

/// Hand-coded closed-form solution of the three-dimensional circular
/// problem (a = 1), three x-groups.
pub fn example4_closed_form(x1: f64, x2: f64, x3: f64, y: f64, mu: f64) -> f64 {
    let cm = mu.cos();
    let sm = mu.sin();
    let group1 = y.powi(3) / mu.powi(2) - 6.0 * y / mu.powi(4)
        + 6.0 * (mu * y).sin() / (mu.powi(5) * cm)
        - 3.0 * (mu * y).sin() / (mu.powi(3) * cm);
    let group2 = -2.0 * y.powi(3) / mu.powi(4)
        + 24.0 * y / mu.powi(6)
        + 9.0 * (mu * y).sin() / (mu.powi(5) * cm)
        - 30.0 * (mu * y).sin() / (mu.powi(7) * cm)
        + 6.0 * y * (mu * y).cos() / (mu.powi(6) * cm);
    let group3 = -3.0 * y * (mu * y).cos() / (mu.powi(4) * cm)
        + 6.0 * (mu * y).sin() * sm / (mu.powi(6) * cm.powi(2))
        - 3.0 * (mu * y).sin() * sm / (mu.powi(4) * cm.powi(2));
    group1 * x1 * x1 * x2 * x3 + (group2 + group3) * x2 * x3
}

/// Plain limit polynomial from `(num, den, x-exponents, y-exp, a-exp)` rows.
pub fn limit_poly(
    mode: Mode,
    basis: Basis,
    n: usize,
    rows: &[(i64, i64, Vec<u32>, u32, i32)],
) -> QuasiPoly {
    QuasiPoly::from_terms(
        mode,
        n,
        basis,
        rows.iter()
            .map(|(num, den, x, y, a)| {
                t(rational(*num, *den), x.clone(), *y, 0, *a, YOsc::One, 0, 0)
            })
            .collect(),
    )
    .unwrap()
}

/// Checks every canonical-form invariant: nonzero coefficients, unique
/// signatures, canonical order, reduced non-basis oscillator powers.
pub fn assert_invariants(q: &QuasiPoly) {
    let mut seen = std::collections::BTreeSet::new();
    for t in q.terms() {
        assert!(!t.coeff.is_zero(), "zero coefficient survived");
        let sig = (
            t.x_exp.total(),
            t.x_exp.0.clone(),
            t.y_exp,
            t.k_exp,
            t.a_exp,
            t.y_osc as u8,
            t.sa_exp,
            t.ca_exp,
        );
        assert!(seen.insert(sig), "duplicate signature survived");
        match q.basis() {
            Basis::SinhDenominator => assert!(t.ca_exp <= 1, "unreduced C power"),
            Basis::CoshDenominator => assert!(t.sa_exp <= 1, "unreduced S power"),
        }
    }
    let sorted: Vec<_> = {
        let mut v = q.terms().to_vec();
        v.sort_by_key(|t| {
            (
                t.x_exp.total(),
                t.x_exp.0.clone(),
                t.y_exp,
                t.k_exp,
                t.a_exp,
                t.y_osc as u8,
                t.sa_exp,
                t.ca_exp,
            )
        });
        v
    };
    assert_eq!(sorted, q.terms(), "terms out of canonical order");
}

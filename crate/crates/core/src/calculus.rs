//! Exact differential operators, closed on the term class.
//!
//! `∂/∂xᵢ` is the plain power rule (oscillators depend only on y, κ, a).
//! `∂/∂y` and `∂/∂κ` are product rules over the oscillator factors, with the
//! circular mode flipping the sign of the cosine derivatives. All operators
//! return normalized quasipolynomials and preserve the degree-≤-1 invariant
//! on the κy-oscillator.

use crate::qpoly::{AlgebraError, QuasiPoly, Rational, Term, YOsc};
use crate::Mode;

/// ∂/∂xᵢ (0-based axis).
pub fn ddx(q: &QuasiPoly, axis: usize) -> Result<QuasiPoly, AlgebraError> {
    if axis >= q.dim() {
        return Err(AlgebraError::AxisOutOfRange { axis, dim: q.dim() });
    }
    let mut out = Vec::new();
    for t in q.terms() {
        let e = t.x_exp.0[axis];
        if e == 0 {
            continue;
        }
        let mut t = t.clone();
        t.coeff *= Rational::from_integer(e.into());
        t.x_exp.0[axis] = e - 1;
        out.push(t);
    }
    QuasiPoly::from_terms(q.mode(), q.dim(), q.basis(), out)
}

/// ∂/∂y. Product rule over `y^j` and the κy-oscillator:
/// `S′ = κC` in both modes, `C′ = κS` hyperbolic, `−κS` circular.
pub fn ddy(q: &QuasiPoly) -> QuasiPoly {
    let mut out = Vec::new();
    for t in q.terms() {
        if t.y_exp > 0 {
            let mut p = t.clone();
            p.coeff *= Rational::from_integer(t.y_exp.into());
            p.y_exp -= 1;
            out.push(p);
        }
        match t.y_osc {
            YOsc::One => {}
            YOsc::S => {
                let mut p = t.clone();
                p.y_osc = YOsc::C;
                p.k_exp += 1;
                out.push(p);
            }
            YOsc::C => {
                let mut p = t.clone();
                p.y_osc = YOsc::S;
                p.k_exp += 1;
                if q.mode() == Mode::Circular {
                    p.coeff = -p.coeff;
                }
                out.push(p);
            }
        }
    }
    QuasiPoly::from_terms(q.mode(), q.dim(), q.basis(), out).expect("same dimension")
}

/// ∂/∂κ. Product rule over `κ^e`, the κy-oscillator (argument κy emits a
/// factor y), and the κa-oscillator powers (argument κa emits a factor a).
pub fn ddkappa(q: &QuasiPoly) -> QuasiPoly {
    let circular = q.mode() == Mode::Circular;
    let mut out = Vec::new();
    for t in q.terms() {
        if t.k_exp != 0 {
            let mut p = t.clone();
            p.coeff *= Rational::from_integer(t.k_exp.into());
            p.k_exp -= 1;
            out.push(p);
        }
        match t.y_osc {
            YOsc::One => {}
            YOsc::S => {
                // ∂κ S(κy) = y·C(κy), both modes
                let mut p = t.clone();
                p.y_osc = YOsc::C;
                p.y_exp += 1;
                out.push(p);
            }
            YOsc::C => {
                // ∂κ C(κy) = ±y·S(κy)
                let mut p = t.clone();
                p.y_osc = YOsc::S;
                p.y_exp += 1;
                if circular {
                    p.coeff = -p.coeff;
                }
                out.push(p);
            }
        }
        if t.sa_exp != 0 {
            // ∂κ S(κa)^sa = sa·a·S^{sa−1}·C, both modes
            let mut p = t.clone();
            p.coeff *= Rational::from_integer(t.sa_exp.into());
            p.sa_exp -= 1;
            p.ca_exp += 1;
            p.a_exp += 1;
            out.push(p);
        }
        if t.ca_exp != 0 {
            // ∂κ C(κa)^ca = ±ca·a·C^{ca−1}·S
            let mut p = t.clone();
            p.coeff *= Rational::from_integer(t.ca_exp.into());
            p.ca_exp -= 1;
            p.sa_exp += 1;
            p.a_exp += 1;
            if circular {
                p.coeff = -p.coeff;
            }
            out.push(p);
        }
    }
    QuasiPoly::from_terms(q.mode(), q.dim(), q.basis(), out).expect("same dimension")
}

/// Δ = Σᵢ ∂²/∂xᵢ² + ∂²/∂y².
pub fn laplacian(q: &QuasiPoly) -> QuasiPoly {
    let mut acc = ddy(&ddy(q));
    for axis in 0..q.dim() {
        let dxx = ddx(&ddx(q, axis).expect("axis in range"), axis).expect("axis in range");
        acc = acc.add(&dxx).expect("same family");
    }
    acc
}

/// One step of the kernel recurrence: `s·(2m−1)·κ⁻¹·∂κ q` with the
/// mode-determined sign `s`. The sign flip between the
/// hyperbolic and circular families is exactly this one parameter.
pub fn recurrence_step(q: &QuasiPoly, m: u32) -> QuasiPoly {
    let factor =
        Rational::from_integer((q.mode().recurrence_sign() * (2 * i64::from(m) - 1)).into());
    ddkappa(q)
        .mul_plain(&Term::kappa_power(-1, q.dim()))
        .expect("plain multiplier")
        .scale(&factor)
}

//! JSON documents for problems and solutions.
//!
//! Rationals travel as `"num/den"` strings (never floats), so a document
//! round-trips the exact coefficients. A [`ProblemDocument`] mirrors
//! [`ProblemSpec`]; a [`SolutionDocument`] mirrors the solution's term list
//! with the oscillator factors spelled out (`"sinh_ky"`, `"cos_ka"`, ...)
//! plus rendered text/LaTeX forms. Serialization is deterministic: term
//! order is the canonical order of the algebra and field order is fixed.
//!
//! # Problem document
//!
//! ```json
//! {
//!   "dimension": 1,
//!   "a": "5/4",
//!   "mode": "hyperbolic",
//!   "kappa": "1",
//!   "bc": "dirichlet",
//!   "P":   [ { "coeff": "1", "x": [2], "y": 2 } ],
//!   "phi": [],
//!   "psi": []
//! }
//! ```

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::qpoly::{Basis, Mode, MultiIndex, QuasiPoly, Rational, Term, YOsc};
use crate::solver::{Bc, PolyTerm, ProblemSpec, Solution, Uniqueness};

#[derive(Clone, Debug, PartialEq, Error)]
pub enum DocumentError {
    #[error("cannot parse rational {0:?} (expected \"num\" or \"num/den\")")]
    BadRational(String),
    #[error("unknown {field} value {value:?}")]
    BadEnum { field: &'static str, value: String },
    #[error("term {index}: {reason}")]
    BadTerm { index: usize, reason: String },
    #[error("invalid problem: {0}")]
    BadProblem(#[from] crate::solver::ProblemError),
    #[error("invalid terms: {0}")]
    BadAlgebra(#[from] crate::qpoly::AlgebraError),
    #[error("json: {0}")]
    Json(String),
}

fn parse_rational(s: &str) -> Result<Rational, DocumentError> {
    let bad = || DocumentError::BadRational(s.to_string());
    let mut parts = s.splitn(2, '/');
    let num = BigInt::from_str(parts.next().ok_or_else(bad)?.trim()).map_err(|_| bad())?;
    let den = match parts.next() {
        Some(d) => BigInt::from_str(d.trim()).map_err(|_| bad())?,
        None => BigInt::from(1),
    };
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// One monomial of an input polynomial: exact coefficient, x-exponents,
/// y-exponent.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyTermDoc {
    pub coeff: String,
    pub x: Vec<u32>,
    #[serde(default)]
    pub y: u32,
}

/// JSON mirror of a [`ProblemSpec`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProblemDocument {
    pub dimension: usize,
    pub a: String,
    pub mode: String,
    pub kappa: String,
    pub bc: String,
    #[serde(rename = "P", default)]
    pub p: Vec<PolyTermDoc>,
    #[serde(default)]
    pub phi: Vec<PolyTermDoc>,
    #[serde(default)]
    pub psi: Vec<PolyTermDoc>,
}

fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::Hyperbolic => "hyperbolic",
        Mode::Circular => "circular",
    }
}

fn parse_mode(s: &str) -> Result<Mode, DocumentError> {
    match s {
        "hyperbolic" => Ok(Mode::Hyperbolic),
        "circular" => Ok(Mode::Circular),
        other => Err(DocumentError::BadEnum {
            field: "mode",
            value: other.to_string(),
        }),
    }
}

fn bc_name(bc: Bc) -> &'static str {
    match bc {
        Bc::Dirichlet => "dirichlet",
        Bc::DirichletNeumann => "dirichlet_neumann",
    }
}

fn parse_bc(s: &str) -> Result<Bc, DocumentError> {
    match s {
        "dirichlet" => Ok(Bc::Dirichlet),
        "dirichlet_neumann" => Ok(Bc::DirichletNeumann),
        other => Err(DocumentError::BadEnum {
            field: "bc",
            value: other.to_string(),
        }),
    }
}

fn poly_from_doc(terms: &[PolyTermDoc]) -> Result<Vec<PolyTerm>, DocumentError> {
    terms
        .iter()
        .map(|t| {
            Ok(PolyTerm::new(
                parse_rational(&t.coeff)?,
                MultiIndex::new(t.x.clone()),
                t.y,
            ))
        })
        .collect()
}

fn poly_to_doc(terms: &[PolyTerm]) -> Vec<PolyTermDoc> {
    terms
        .iter()
        .map(|t| PolyTermDoc {
            coeff: t.coeff.to_string(),
            x: t.x_exp.0.clone(),
            y: t.y_exp,
        })
        .collect()
}

impl ProblemDocument {
    pub fn from_spec(spec: &ProblemSpec) -> Self {
        ProblemDocument {
            dimension: spec.dim(),
            a: spec.width().to_string(),
            mode: mode_name(spec.mode()).to_string(),
            kappa: spec.kappa().to_string(),
            bc: bc_name(spec.bc()).to_string(),
            p: poly_to_doc(spec.rhs_terms()),
            phi: poly_to_doc(spec.phi_terms()),
            psi: poly_to_doc(spec.psi_terms()),
        }
    }

    pub fn to_spec(&self) -> Result<ProblemSpec, DocumentError> {
        Ok(ProblemSpec::new(
            self.dimension,
            parse_rational(&self.a)?,
            parse_mode(&self.mode)?,
            parse_rational(&self.kappa)?,
            parse_bc(&self.bc)?,
            poly_from_doc(&self.p)?,
            poly_from_doc(&self.phi)?,
            poly_from_doc(&self.psi)?,
        )?)
    }

    pub fn from_json(json: &str) -> Result<Self, DocumentError> {
        serde_json::from_str(json).map_err(|e| DocumentError::Json(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serialization")
    }
}

fn is_zero_i32(v: &i32) -> bool {
    *v == 0
}

/// One term of a solution, oscillator names spelled out. The `sinh_ka` /
/// `cosh_ka` exponent fields are used in hyperbolic mode, `sin_ka` /
/// `cos_ka` in circular mode; zero exponents are omitted.
#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct SolutionTermDoc {
    pub coeff: String,
    pub x: Vec<u32>,
    #[serde(default)]
    pub y: u32,
    #[serde(default, skip_serializing_if = "is_zero_i32")]
    pub kappa: i32,
    #[serde(default, skip_serializing_if = "is_zero_i32")]
    pub a: i32,
    /// "none", "sinh_ky", "cosh_ky", "sin_ky", or "cos_ky".
    pub osc_y: String,
    #[serde(default, skip_serializing_if = "is_zero_i32")]
    pub sinh_ka: i32,
    #[serde(default, skip_serializing_if = "is_zero_i32")]
    pub cosh_ka: i32,
    #[serde(default, skip_serializing_if = "is_zero_i32")]
    pub sin_ka: i32,
    #[serde(default, skip_serializing_if = "is_zero_i32")]
    pub cos_ka: i32,
}

/// JSON mirror of a solved problem: the exact term list plus rendered forms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionDocument {
    pub dimension: usize,
    pub mode: String,
    pub basis: String,
    pub terms: Vec<SolutionTermDoc>,
    pub uniqueness: String,
    #[serde(default)]
    pub warnings: Vec<String>,
    pub text: String,
    pub latex: String,
}

fn basis_name(basis: Basis) -> &'static str {
    match basis {
        Basis::SinhDenominator => "sinh_denominator",
        Basis::CoshDenominator => "cosh_denominator",
    }
}

fn parse_basis(s: &str) -> Result<Basis, DocumentError> {
    match s {
        "sinh_denominator" => Ok(Basis::SinhDenominator),
        "cosh_denominator" => Ok(Basis::CoshDenominator),
        other => Err(DocumentError::BadEnum {
            field: "basis",
            value: other.to_string(),
        }),
    }
}

fn osc_y_name(osc: YOsc, mode: Mode) -> &'static str {
    match (osc, mode) {
        (YOsc::One, _) => "none",
        (YOsc::S, Mode::Hyperbolic) => "sinh_ky",
        (YOsc::C, Mode::Hyperbolic) => "cosh_ky",
        (YOsc::S, Mode::Circular) => "sin_ky",
        (YOsc::C, Mode::Circular) => "cos_ky",
    }
}

fn parse_osc_y(s: &str, mode: Mode, index: usize) -> Result<YOsc, DocumentError> {
    let expected_mode = |wanted: Mode| {
        if mode == wanted {
            Ok(())
        } else {
            Err(DocumentError::BadTerm {
                index,
                reason: format!(
                    "oscillator {s:?} does not belong to {} mode",
                    mode_name(mode)
                ),
            })
        }
    };
    match s {
        "none" => Ok(YOsc::One),
        "sinh_ky" => expected_mode(Mode::Hyperbolic).map(|_| YOsc::S),
        "cosh_ky" => expected_mode(Mode::Hyperbolic).map(|_| YOsc::C),
        "sin_ky" => expected_mode(Mode::Circular).map(|_| YOsc::S),
        "cos_ky" => expected_mode(Mode::Circular).map(|_| YOsc::C),
        other => Err(DocumentError::BadEnum {
            field: "osc_y",
            value: other.to_string(),
        }),
    }
}

fn uniqueness_name(u: Uniqueness) -> &'static str {
    match u {
        Uniqueness::UniqueSlowGrowth => "unique_slow_growth",
        Uniqueness::NotUnique => "not_unique",
    }
}

impl SolutionDocument {
    /// Renders a quasipolynomial (plus verdict and warnings) into a document.
    pub fn from_parts(u: &QuasiPoly, uniqueness: Uniqueness, warnings: &[String]) -> Self {
        let mode = u.mode();
        let terms = u
            .terms()
            .iter()
            .map(|t| {
                let (sinh_ka, cosh_ka, sin_ka, cos_ka) = match mode {
                    Mode::Hyperbolic => (t.sa_exp, t.ca_exp, 0, 0),
                    Mode::Circular => (0, 0, t.sa_exp, t.ca_exp),
                };
                SolutionTermDoc {
                    coeff: t.coeff.to_string(),
                    x: t.x_exp.0.clone(),
                    y: t.y_exp,
                    kappa: t.k_exp,
                    a: t.a_exp,
                    osc_y: osc_y_name(t.y_osc, mode).to_string(),
                    sinh_ka,
                    cosh_ka,
                    sin_ka,
                    cos_ka,
                }
            })
            .collect();
        SolutionDocument {
            dimension: u.dim(),
            mode: mode_name(mode).to_string(),
            basis: basis_name(u.basis()).to_string(),
            terms,
            uniqueness: uniqueness_name(uniqueness).to_string(),
            warnings: warnings.to_vec(),
            text: crate::render::text(u),
            latex: crate::render::latex(u),
        }
    }

    pub fn from_solution(solution: &Solution) -> Self {
        Self::from_parts(&solution.u, solution.uniqueness, &solution.warnings)
    }

    /// Reconstructs the exact quasipolynomial. Lossless: the round trip
    /// reproduces the normalized term list identically.
    pub fn to_quasipoly(&self) -> Result<QuasiPoly, DocumentError> {
        let mode = parse_mode(&self.mode)?;
        let basis = parse_basis(&self.basis)?;
        let mut terms = Vec::with_capacity(self.terms.len());
        for (index, t) in self.terms.iter().enumerate() {
            if t.x.len() != self.dimension {
                return Err(DocumentError::BadTerm {
                    index,
                    reason: format!(
                        "x has {} exponents, document dimension is {}",
                        t.x.len(),
                        self.dimension
                    ),
                });
            }
            let (sa_exp, ca_exp) = match mode {
                Mode::Hyperbolic => {
                    if t.sin_ka != 0 || t.cos_ka != 0 {
                        return Err(DocumentError::BadTerm {
                            index,
                            reason: "sin_ka/cos_ka factors in a hyperbolic document".to_string(),
                        });
                    }
                    (t.sinh_ka, t.cosh_ka)
                }
                Mode::Circular => {
                    if t.sinh_ka != 0 || t.cosh_ka != 0 {
                        return Err(DocumentError::BadTerm {
                            index,
                            reason: "sinh_ka/cosh_ka factors in a circular document".to_string(),
                        });
                    }
                    (t.sin_ka, t.cos_ka)
                }
            };
            terms.push(Term::new(
                parse_rational(&t.coeff)?,
                MultiIndex::new(t.x.clone()),
                t.y,
                t.kappa,
                t.a,
                parse_osc_y(&t.osc_y, mode, index)?,
                sa_exp,
                ca_exp,
            ));
        }
        Ok(QuasiPoly::from_terms(mode, self.dimension, basis, terms)?)
    }

    pub fn uniqueness(&self) -> Result<Uniqueness, DocumentError> {
        match self.uniqueness.as_str() {
            "unique_slow_growth" => Ok(Uniqueness::UniqueSlowGrowth),
            "not_unique" => Ok(Uniqueness::NotUnique),
            other => Err(DocumentError::BadEnum {
                field: "uniqueness",
                value: other.to_string(),
            }),
        }
    }

    pub fn from_json(json: &str) -> Result<Self, DocumentError> {
        serde_json::from_str(json).map_err(|e| DocumentError::Json(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serialization")
    }
}

/// One monomial of a κ-free limit polynomial (a-powers allowed: the κ → 0
/// limits of layer solutions carry the layer width).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitTermDoc {
    pub coeff: String,
    pub x: Vec<u32>,
    #[serde(default)]
    pub y: u32,
    #[serde(default, skip_serializing_if = "is_zero_i32")]
    pub a: i32,
}

/// A polynomial limit (for κ → 0 checks), as a standalone document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitDocument {
    pub terms: Vec<LimitTermDoc>,
}

impl LimitDocument {
    pub fn to_quasipoly(
        &self,
        mode: Mode,
        dimension: usize,
        basis: Basis,
    ) -> Result<QuasiPoly, DocumentError> {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                Ok(Term::new(
                    parse_rational(&t.coeff)?,
                    MultiIndex::new(t.x.clone()),
                    t.y,
                    0,
                    t.a,
                    YOsc::One,
                    0,
                    0,
                ))
            })
            .collect::<Result<Vec<_>, DocumentError>>()?;
        Ok(QuasiPoly::from_terms(mode, dimension, basis, terms)?)
    }

    pub fn from_json(json: &str) -> Result<Self, DocumentError> {
        serde_json::from_str(json).map_err(|e| DocumentError::Json(e.to_string()))
    }
}

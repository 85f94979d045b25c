//! Plain-text and LaTeX rendering of quasipolynomials.
//!
//! The symbol for κ follows the mode (`lambda` hyperbolic, `mu` circular),
//! oscillators are spelled `sinh`/`cosh` or `sin`/`cos`, and each term is
//! rendered as a single fraction with the negative κ-, a-, and oscillator
//! powers collected in the denominator. Output is deterministic: the term
//! order is the canonical order of the algebra.

use num_traits::{One, Signed};

use crate::qpoly::{Mode, QuasiPoly, Term, YOsc};

struct Symbols {
    kappa: &'static str,
    s: &'static str,
    c: &'static str,
}

fn symbols(mode: Mode) -> Symbols {
    match mode {
        Mode::Hyperbolic => Symbols {
            kappa: "lambda",
            s: "sinh",
            c: "cosh",
        },
        Mode::Circular => Symbols {
            kappa: "mu",
            s: "sin",
            c: "cos",
        },
    }
}

fn var_name(i: usize, n: usize) -> String {
    if n == 1 {
        "x".to_string()
    } else {
        format!("x{}", i + 1)
    }
}

fn push_factor(parts: &mut Vec<String>, base: String, exp: u32) {
    match exp {
        0 => {}
        1 => parts.push(base),
        _ => parts.push(format!("{base}^{exp}")),
    }
}

/// One term as (numerator factors, denominator factors), coefficient signs
/// and the 1-coefficients already handled by the caller.
fn term_factors(t: &Term, mode: Mode, n: usize) -> (Vec<String>, Vec<String>) {
    let sym = symbols(mode);
    let mut num = Vec::new();
    let mut den = Vec::new();

    let numer = t.coeff.numer().abs();
    let denom = t.coeff.denom().clone();
    if !numer.is_one() {
        num.push(numer.to_string());
    }
    if !denom.is_one() {
        den.push(denom.to_string());
    }
    for (i, &e) in t.x_exp.0.iter().enumerate() {
        push_factor(&mut num, var_name(i, n), e);
    }
    push_factor(&mut num, "y".to_string(), t.y_exp);
    let signed =
        |parts_pos: &mut Vec<String>, parts_neg: &mut Vec<String>, base: String, e: i32| {
            if e > 0 {
                push_factor(parts_pos, base, e as u32);
            } else if e < 0 {
                push_factor(parts_neg, base, (-e) as u32);
            }
        };
    signed(&mut num, &mut den, sym.kappa.to_string(), t.k_exp);
    signed(&mut num, &mut den, "a".to_string(), t.a_exp);
    match t.y_osc {
        YOsc::One => {}
        YOsc::S => num.push(format!("{}({}*y)", sym.s, sym.kappa)),
        YOsc::C => num.push(format!("{}({}*y)", sym.c, sym.kappa)),
    }
    signed(
        &mut num,
        &mut den,
        format!("{}({}*a)", sym.s, sym.kappa),
        t.sa_exp,
    );
    signed(
        &mut num,
        &mut den,
        format!("{}({}*a)", sym.c, sym.kappa),
        t.ca_exp,
    );
    (num, den)
}

/// Deterministic plain-text rendering.
pub fn text(q: &QuasiPoly) -> String {
    if q.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, t) in q.terms().iter().enumerate() {
        let negative = t.coeff.is_negative();
        if i == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        let (num, den) = term_factors(t, q.mode(), q.dim());
        let numer = if num.is_empty() {
            "1".to_string()
        } else {
            num.join("*")
        };
        if den.is_empty() {
            out.push_str(&numer);
        } else if den.len() == 1 {
            out.push_str(&format!("{numer}/{}", den[0]));
        } else {
            out.push_str(&format!("{numer}/({})", den.join("*")));
        }
    }
    out
}

fn latex_factor(base: &str, exp: u32) -> String {
    match exp {
        1 => base.to_string(),
        _ => {
            // sinh(\lambda a)^2 typesets as \sinh^{2}(\lambda a)
            if let Some(rest) = base.strip_prefix('\\') {
                if let Some(paren) = rest.find('(') {
                    return format!("\\{}^{{{exp}}}{}", &rest[..paren], &rest[paren..]);
                }
            }
            format!("{base}^{{{exp}}}")
        }
    }
}

fn latex_term_factors(t: &Term, mode: Mode, n: usize) -> (Vec<String>, Vec<String>) {
    let (kappa, s, c) = match mode {
        Mode::Hyperbolic => ("\\lambda", "\\sinh", "\\cosh"),
        Mode::Circular => ("\\mu", "\\sin", "\\cos"),
    };
    let var = |i: usize| {
        if n == 1 {
            "x".to_string()
        } else {
            format!("x_{{{}}}", i + 1)
        }
    };
    let mut num = Vec::new();
    let mut den = Vec::new();
    let numer = t.coeff.numer().abs();
    let denom = t.coeff.denom().clone();
    if !numer.is_one() {
        num.push(numer.to_string());
    }
    if !denom.is_one() {
        den.push(denom.to_string());
    }
    for (i, &e) in t.x_exp.0.iter().enumerate() {
        if e > 0 {
            num.push(latex_factor(&var(i), e));
        }
    }
    if t.y_exp > 0 {
        num.push(latex_factor("y", t.y_exp));
    }
    let signed = |num: &mut Vec<String>, den: &mut Vec<String>, base: String, e: i32| {
        if e > 0 {
            num.push(latex_factor(&base, e as u32));
        } else if e < 0 {
            den.push(latex_factor(&base, (-e) as u32));
        }
    };
    signed(&mut num, &mut den, kappa.to_string(), t.k_exp);
    signed(&mut num, &mut den, "a".to_string(), t.a_exp);
    match t.y_osc {
        YOsc::One => {}
        YOsc::S => num.push(format!("{s}({kappa} y)")),
        YOsc::C => num.push(format!("{c}({kappa} y)")),
    }
    signed(&mut num, &mut den, format!("{s}({kappa} a)"), t.sa_exp);
    signed(&mut num, &mut den, format!("{c}({kappa} a)"), t.ca_exp);
    (num, den)
}

/// LaTeX rendering, one `\frac` per term with a denominator.
pub fn latex(q: &QuasiPoly) -> String {
    if q.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, t) in q.terms().iter().enumerate() {
        let negative = t.coeff.is_negative();
        if i == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { "-" } else { "+" });
        }
        let (num, den) = latex_term_factors(t, q.mode(), q.dim());
        let numer = if num.is_empty() {
            "1".to_string()
        } else {
            num.join(" ")
        };
        if den.is_empty() {
            out.push_str(&numer);
        } else {
            out.push_str(&format!("\\frac{{{numer}}}{{{}}}", den.join(" ")));
        }
    }
    out
}

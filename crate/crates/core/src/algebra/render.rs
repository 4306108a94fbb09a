//! Text, LaTeX and JSON renderings of scalars and operator expressions.
//!
//! The text form is valid DSL input and parses back to the same expression.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde_json::Value;

use crate::algebra::expr::{OpExpr, Term};
use crate::algebra::factor::FunctionFactor;
use crate::num::Rational;
use crate::scalar::{Gaussian, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Latex,
    Json,
}

pub fn render(e: &OpExpr, format: Format) -> String {
    match format {
        Format::Text => text(e),
        Format::Latex => latex(e),
        Format::Json => json(e).to_string(),
    }
}

pub fn json(e: &OpExpr) -> Value {
    e.to_json()
}

fn rational_atom(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("({}/{})", q.numer(), q.denom())
    }
}

fn rational_plain(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn exponent_text(q: &Rational) -> String {
    if q.is_integer() && q.is_positive() {
        q.numer().to_string()
    } else {
        format!("({})", rational_plain(q))
    }
}

/// Sign and multiplicative pieces of a coefficient; empty pieces mean 1.
fn coeff_text_parts(s: &Scalar) -> (bool, Vec<String>) {
    let mut parts = Vec::new();
    let (re, im) = (s.re(), s.im());
    let negative = if im.is_zero() {
        if !re.abs().is_one() {
            parts.push(rational_atom(&re.abs()));
        }
        re.is_negative()
    } else if re.is_zero() {
        if !im.abs().is_one() {
            parts.push(rational_atom(&im.abs()));
        }
        parts.push("i".to_string());
        im.is_negative()
    } else {
        let sign = if im.is_negative() { '-' } else { '+' };
        let mag = im.abs();
        let imag = if mag.is_one() { "i".to_string() } else { format!("{}*i", rational_plain(&mag)) };
        parts.push(format!("({}{}{})", rational_plain(re), sign, imag));
        false
    };
    if !s.radicand().is_one() {
        parts.push(format!("sqrt({})", s.radicand()));
    }
    if s.pi4() != 0 {
        let q = Rational::new(BigInt::from(s.pi4()), BigInt::from(4));
        if q.is_one() {
            parts.push("pi".to_string());
        } else {
            parts.push(format!("pi^{}", exponent_text(&q)));
        }
    }
    (negative, parts)
}

pub fn scalar_text(s: &Scalar) -> String {
    if s.is_zero() {
        return "0".to_string();
    }
    let (neg, parts) = coeff_text_parts(s);
    let body = if parts.is_empty() { "1".to_string() } else { parts.join("*") };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

fn monomial_text(coef: &Rational, var: &str, first: bool, out: &mut String) {
    let neg = coef.is_negative();
    let mag = coef.abs();
    if first {
        if neg {
            out.push('-');
        }
    } else {
        out.push_str(if neg { " - " } else { " + " });
    }
    if !mag.is_one() {
        out.push_str(&rational_atom(&mag));
        out.push('*');
    }
    out.push_str(var);
}

fn factor_text_parts(f: &FunctionFactor) -> Vec<String> {
    let mut parts = Vec::new();
    if !f.power.is_zero() {
        if f.power.is_one() {
            parts.push("x".to_string());
        } else {
            parts.push(format!("x^{}", exponent_text(&f.power)));
        }
    }
    if f.has_exponential() {
        let mut arg = String::new();
        if !f.gauss.is_zero() {
            monomial_text(&f.gauss, "x^2", true, &mut arg);
        }
        if !f.linear.is_zero() {
            monomial_text(&f.linear, "x", arg.is_empty(), &mut arg);
        }
        parts.push(format!("exp({arg})"));
    }
    parts
}

fn term_text(t: &Term) -> (bool, String) {
    let (neg, mut parts) = coeff_text_parts(&t.coeff);
    parts.extend(factor_text_parts(&t.factor));
    match t.mom {
        0 => {}
        1 => parts.push("p".to_string()),
        m => parts.push(format!("p^{m}")),
    }
    let body = if parts.is_empty() { "1".to_string() } else { parts.join("*") };
    (neg, body)
}

/// Canonical text form, terms in canonical (ascending key) order.
pub fn text(e: &OpExpr) -> String {
    if e.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, t) in e.terms().enumerate() {
        let (neg, body) = term_text(&t);
        match (i, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&body);
    }
    out
}

fn latex_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("\\frac{{{}}}{{{}}}", q.numer(), q.denom())
    }
}

/// Positive real `q sqrt(r)`, writing `1/sqrt(r)`-style fractions when the
/// radicand divides the denominator.
fn latex_radical(q: &Rational, r: &BigInt) -> String {
    if r.is_one() {
        return latex_rational(q);
    }
    let (num, den) = (q.numer(), q.denom());
    if den.is_multiple_of(r) {
        let rest = den / r;
        let lower = if rest.is_one() { format!("\\sqrt{{{r}}}") } else { format!("{rest}\\sqrt{{{r}}}") };
        format!("\\frac{{{num}}}{{{lower}}}")
    } else if den.is_one() {
        let lead = if num.is_one() { String::new() } else { num.to_string() };
        format!("{lead}\\sqrt{{{r}}}")
    } else {
        format!("\\frac{{{num}\\sqrt{{{r}}}}}{{{den}}}")
    }
}

fn latex_pi(pi4: i32) -> Option<String> {
    if pi4 == 0 {
        return None;
    }
    let q = Rational::new(BigInt::from(pi4), BigInt::from(4));
    Some(if q.is_one() {
        "\\pi".to_string()
    } else if q.is_integer() {
        format!("\\pi^{{{}}}", q.numer())
    } else {
        format!("\\pi^{{{}/{}}}", q.numer(), q.denom())
    })
}

/// Sign and body of a coefficient; an empty body means 1.
fn latex_coeff(s: &Scalar) -> (bool, String) {
    let (re, im) = (s.re(), s.im());
    let (neg, mag, imag) = if im.is_zero() {
        (re.is_negative(), re.abs(), false)
    } else if re.is_zero() {
        (im.is_negative(), im.abs(), true)
    } else {
        let sign = if im.is_negative() { "-" } else { "+" };
        let imag = if im.abs().is_one() { "i".to_string() } else { format!("{} i", latex_rational(&im.abs())) };
        let mut body = format!("\\left({} {} {}\\right)", latex_rational(re), sign, imag);
        if !s.radicand().is_one() {
            body.push_str(&format!("\\sqrt{{{}}}", s.radicand()));
        }
        if let Some(p) = latex_pi(s.pi4()) {
            body.push_str(&p);
        }
        return (false, body);
    };
    let mut pieces = Vec::new();
    if !(mag.is_one() && s.radicand().is_one()) {
        pieces.push(latex_radical(&mag, s.radicand()));
    }
    if imag {
        pieces.push("i".to_string());
    }
    if let Some(p) = latex_pi(s.pi4()) {
        pieces.push(p);
    }
    (neg, pieces.join(" "))
}

fn latex_power(var: &str, q: &Rational) -> String {
    if q.is_one() {
        var.to_string()
    } else if q.is_integer() {
        format!("{var}^{{{}}}", q.numer())
    } else {
        format!("{var}^{{{}/{}}}", q.numer(), q.denom())
    }
}

fn latex_factor(f: &FunctionFactor) -> Vec<String> {
    let mut parts = Vec::new();
    if !f.power.is_zero() {
        parts.push(latex_power("x", &f.power));
    }
    if f.has_exponential() {
        let mut arg = String::new();
        for (c, v) in [(&f.gauss, "x^{2}"), (&f.linear, "x")] {
            if c.is_zero() {
                continue;
            }
            if arg.is_empty() {
                if c.is_negative() {
                    arg.push('-');
                }
            } else {
                arg.push_str(if c.is_negative() { " - " } else { " + " });
            }
            if !c.abs().is_one() {
                arg.push_str(&latex_rational(&c.abs()));
                arg.push(' ');
            }
            arg.push_str(v);
        }
        parts.push(format!("e^{{{arg}}}"));
    }
    parts
}

fn latex_terms(terms: &[Term]) -> String {
    let mut out = String::new();
    for (i, t) in terms.iter().enumerate() {
        let (neg, coeff) = latex_coeff(&t.coeff);
        let mut parts = Vec::new();
        if !coeff.is_empty() {
            parts.push(coeff);
        }
        parts.extend(latex_factor(&t.factor));
        if t.mom > 0 {
            parts.push(latex_power("p", &Rational::from_integer(t.mom.into())));
        }
        let body = if parts.is_empty() { "1".to_string() } else { parts.join(" ") };
        match (i, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&body);
    }
    out
}

/// Largest positive rational dividing every real and imaginary part.
fn rational_content<'a>(values: impl Iterator<Item = &'a Gaussian>) -> Rational {
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for g in values {
        for q in [&g.re, &g.im] {
            if q.is_zero() {
                continue;
            }
            num = num.gcd(q.numer());
            den = den.lcm(q.denom());
        }
    }
    Rational::new(num, den)
}

/// LaTeX form with terms in descending order; a shared radical/pi stratum is
/// pulled out in front of the parentheses.
pub fn latex(e: &OpExpr) -> String {
    if e.is_zero() {
        return "0".to_string();
    }
    let mut terms: Vec<Term> = e.terms().collect();
    terms.reverse();
    let stratum = terms[0].coeff.stratum().clone();
    let shared = terms.len() > 1 && !stratum.is_unit() && terms.iter().all(|t| t.coeff.stratum() == &stratum);
    if !shared {
        return latex_terms(&terms);
    }
    let content = rational_content(terms.iter().map(|t| t.coeff.value()));
    let inv = content.recip();
    let inner: Vec<Term> = terms
        .iter()
        .map(|t| Term { coeff: Scalar::gaussian(t.coeff.value().scale(&inv)), factor: t.factor.clone(), mom: t.mom })
        .collect();
    let mut prefix = latex_radical(&content, &stratum.radicand);
    if let Some(p) = latex_pi(stratum.pi4) {
        prefix = if prefix == "1" { p } else { format!("{prefix} {p}") };
    }
    format!("{prefix}\\left({}\\right)", latex_terms(&inner))
}

/// LaTeX for a single scalar.
pub fn latex_scalar(s: &Scalar) -> String {
    if s.is_zero() {
        return "0".to_string();
    }
    let (neg, body) = latex_coeff(s);
    let body = if body.is_empty() { "1".to_string() } else { body };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{int, rat};

    fn lowering_1d() -> OpExpr {
        let s = Scalar::sqrt(&rat(1, 2));
        &OpExpr::momentum().scale(&s) - &OpExpr::coord().scale(&(&Scalar::i() * &s))
    }

    #[test]
    fn scalar_styles() {
        assert_eq!(scalar_text(&Scalar::i().scale(&int(2))), "2*i");
        assert_eq!(scalar_text(&Scalar::rational(rat(1, 2))), "(1/2)");
        assert_eq!(scalar_text(&Scalar::gaussian(Gaussian::new(int(1), rat(-3, 4)))), "(1-3/4*i)");
        assert_eq!(scalar_text(&Scalar::sqrt(&int(3))), "sqrt(3)");
        assert_eq!(scalar_text(&Scalar::pi_pow(-1)), "pi^(-1/4)");
        assert_eq!(scalar_text(&Scalar::pi_pow(4)), "pi");
        assert_eq!(scalar_text(&Scalar::zero()), "0");
    }

    #[test]
    fn term_styles() {
        let f = FunctionFactor::new(rat(3, 2), int(-1), int(0));
        let e = OpExpr::term(Scalar::sqrt(&int(2)).scale(&rat(1, 2)), f, 2);
        assert_eq!(text(&e), "(1/2)*sqrt(2)*x^(3/2)*exp(-x^2)*p^2");
        let g = OpExpr::factor(FunctionFactor::new(int(-1), rat(-1, 2), int(1)));
        assert_eq!(text(&g), "x^(-1)*exp(-(1/2)*x^2 + x)");
        assert_eq!(text(&OpExpr::zero()), "0");
        assert_eq!(text(&(&OpExpr::one() - &OpExpr::coord())), "1 - x");
    }

    #[test]
    fn latex_lowering_operator() {
        assert_eq!(latex(&lowering_1d()), "\\frac{1}{\\sqrt{2}}\\left(p - i x\\right)");
        assert_eq!(latex(&OpExpr::zero()), "0");
    }

    #[test]
    fn text_lowering_operator() {
        assert_eq!(text(&lowering_1d()), "-(1/2)*i*sqrt(2)*x + (1/2)*sqrt(2)*p");
    }
}

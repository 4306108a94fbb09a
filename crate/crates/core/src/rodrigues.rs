//! Operator Rodrigues formulas and the classical polynomial families they
//! reproduce.
//!
//! The nested commutators are evaluated innermost first; once the dressing
//! factors are multiplied in, every exponential and negative power cancels
//! and the polynomial is read off in the system's argument.

use num_traits::{One, Signed, Zero};

use crate::algebra::{coord_pow, FunctionFactor, OpExpr};
use crate::error::{Error, Result};
use crate::num::{
    binomial_general, double_factorial_q, factorial_q, half, int, rat, rational_pow, Coefficient, Rational,
};
use crate::poly::{Argument, Poly, Polynomial};
use crate::scalar::Scalar;
use crate::systems::{QuantumNumbers, SystemKind};

/// Upper Laguerre index; must exceed -1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaIndex(Rational);

impl AlphaIndex {
    pub fn new(value: Rational) -> Result<Self> {
        if value > int(-1) {
            Ok(AlphaIndex(value))
        } else {
            Err(Error::LaguerreIndex(value.to_string()))
        }
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }

    /// `l + 1/2`, `2l + 1`, `m`, `2m` for osc3d, coul3d, osc2d, coul2d.
    pub fn for_system(sys: SystemKind, level: u32) -> Option<AlphaIndex> {
        let l = int(level as i64);
        let v = match sys {
            SystemKind::Sho1d => return None,
            SystemKind::Osc3d => l + half(),
            SystemKind::Coul3d => l * int(2) + Rational::one(),
            SystemKind::Osc2d => l,
            SystemKind::Coul2d => l * int(2),
        };
        Some(AlphaIndex(v))
    }
}

/// Physicists' Hermite polynomial from `H_{n+1} = 2y H_n - 2n H_{n-1}`.
pub fn hermite<T: Coefficient>(n: usize) -> Poly<T> {
    let two = T::from_int(2);
    let mut prev = Poly::<T>::zero();
    let mut cur = Poly::<T>::one();
    for j in 0..n {
        let next = cur.mul_var().scale(&two).sub(&prev.scale(&T::from_int(2 * j as i64)));
        prev = cur;
        cur = next;
    }
    cur
}

/// `L_k^(alpha)(u) = sum_j (-1)^j C(k + alpha, k - j) u^j / j!`
pub fn laguerre_explicit<T: Coefficient>(k: usize, alpha: &T) -> Poly<T> {
    let top = alpha.clone() + T::from_int(k as i64);
    let mut coeffs = Vec::with_capacity(k + 1);
    let mut j_fact = T::one();
    for j in 0..=k {
        if j > 0 {
            j_fact = j_fact * T::from_int(j as i64);
        }
        let b = binomial_general(&top, (k - j) as u64) / j_fact.clone();
        coeffs.push(if j % 2 == 1 { -b } else { b });
    }
    Poly::new(coeffs)
}

fn lag(k: i64, alpha: &Rational) -> Poly<Rational> {
    if k < 0 {
        Poly::zero()
    } else {
        laguerre_explicit(k as usize, alpha)
    }
}

/// Outcome of the three Laguerre recurrences at one index pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RecurrenceCheck {
    /// `k L_k^a = (k + a) L_{k-1}^a - u L_{k-1}^{a+1}`
    pub lowering_index: bool,
    /// `k L_k^a = (2k + a - 1 - u) L_{k-1}^a - (k + a - 1) L_{k-2}^a`
    pub three_term: bool,
    /// `L_k^{a+1} - L_{k-1}^{a+1} = L_k^a`
    pub index_difference: bool,
}

impl RecurrenceCheck {
    pub fn all(&self) -> bool {
        self.lowering_index && self.three_term && self.index_difference
    }
}

/// Checks the three recurrences on the explicit-sum polynomials. For
/// `k = 0` the first two are vacuous; negative-degree terms are zero.
pub fn laguerre_recur_check(k: u32, alpha: &AlphaIndex) -> RecurrenceCheck {
    let a = alpha.value();
    let k = k as i64;
    let kq = int(k);
    let u = Poly::<Rational>::var();
    let a1 = a + Rational::one();
    let lhs = lag(k, a).scale(&kq);
    let lowering_index = k == 0 || lhs == lag(k - 1, a).scale(&(&kq + a)).sub(&u.mul(&lag(k - 1, &a1)));
    let three_term = k == 0 || {
        let lin = Poly::new(vec![&kq * int(2) + a - Rational::one(), int(-1)]);
        lhs == lin.mul(&lag(k - 1, a)).sub(&lag(k - 2, a).scale(&(&kq + a - Rational::one())))
    };
    let index_difference = lag(k, &a1).sub(&lag(k - 1, &a1)) == lag(k, a);
    RecurrenceCheck { lowering_index, three_term, index_difference }
}

/// The two-dimensional Coulomb chain identity
/// `L_{k+1}^{(2m-2)} = ((2m - 1 - u) L_k^{(2m)} - (2m - 1) L_{k-1}^{(2m)}) / (k + 1)`,
/// for `m >= 1`.
pub fn coulomb2d_chain_check(k: u32, m: u32) -> bool {
    assert!(m >= 1, "index 2m - 2 must be non-negative");
    let two_m = int(2 * m as i64);
    let k = k as i64;
    let c = &two_m - Rational::one();
    let lhs = lag(k + 1, &(&two_m - int(2)));
    let lin = Poly::new(vec![c.clone(), int(-1)]);
    let rhs = lin.mul(&lag(k, &two_m)).sub(&lag(k - 1, &two_m).scale(&c)).scale(&int(k + 1).recip());
    lhs == rhs
}

/// Coordinate expression `poly(u(x))`.
pub fn polynomial_expr(p: &Polynomial) -> OpExpr {
    let mut e = OpExpr::zero();
    for (c, pow) in p.in_coordinate() {
        e.add_term(&Scalar::rational(c), FunctionFactor::monomial(int(pow)), 0);
    }
    e
}

/// The commutator step of the Coulomb induction, done in the operator
/// algebra: with `k = n - l - 1 >= 1` and `u = 2x/n`,
/// `[p, x^-k L_k^{(2l+1)}(u)] = i (n + l) x^{-k-1} L_{k-1}^{(2l+1)}(u)`.
pub fn coulomb_commutator_identity(n: u32, l: u32) -> bool {
    assert!(n >= l + 2, "needs k = n - l - 1 >= 1");
    let k = (n - l - 1) as i64;
    let alpha = int(2 * l as i64 + 1);
    let arg = Argument::Coulomb3d { n };
    let inner = coord_pow(-k).mul(&polynomial_expr(&Polynomial::new(arg, lag(k, &alpha))));
    let lhs = OpExpr::momentum().commutator(&inner);
    let rhs = coord_pow(-k - 1)
        .mul(&polynomial_expr(&Polynomial::new(arg, lag(k - 1, &alpha))))
        .scale(&Scalar::i().scale(&int((n + l) as i64)));
    lhs == rhs
}

/// Argument tag of the polynomial belonging to a state.
pub fn argument_for(sys: SystemKind, qn: QuantumNumbers) -> Argument {
    let n = qn.principal(sys);
    match sys {
        SystemKind::Sho1d => Argument::X,
        SystemKind::Osc3d | SystemKind::Osc2d => Argument::XSquared,
        SystemKind::Coul3d => Argument::Coulomb3d { n },
        SystemKind::Coul2d => Argument::Coulomb2d { n },
    }
}

/// Conventional name of the state's polynomial: `(text, latex)`, e.g.
/// `("L_2^(1/2)", "L_{2}^{(1/2)}")`.
pub fn family_name(sys: SystemKind, qn: QuantumNumbers) -> (String, String) {
    match AlphaIndex::for_system(sys, qn.level) {
        None => (format!("H_{}", qn.k), format!("H_{{{}}}", qn.k)),
        Some(a) => {
            let v = a.value();
            let alpha = if v.is_integer() { v.numer().to_string() } else { format!("{}/{}", v.numer(), v.denom()) };
            (format!("L_{}^({alpha})", qn.k), format!("L_{{{}}}^{{({alpha})}}", qn.k))
        }
    }
}

/// Hermite or associated Laguerre polynomial from the recurrence or the
/// explicit sum, with the system's index map.
pub fn reference_polynomial(sys: SystemKind, qn: QuantumNumbers) -> Polynomial {
    let arg = argument_for(sys, qn);
    let poly = match AlphaIndex::for_system(sys, qn.level) {
        None => hermite(qn.k as usize),
        Some(a) => laguerre_explicit(qn.k as usize, a.value()),
    };
    Polynomial::new(arg, poly)
}

fn exp_linear(l: Rational) -> OpExpr {
    OpExpr::factor(FunctionFactor::exponential(Rational::zero(), l))
}

fn exp_gauss(g: i64) -> OpExpr {
    OpExpr::factor(FunctionFactor::exponential(int(g), Rational::zero()))
}

/// Reads a momentum-free expression as a polynomial in `arg`.
pub fn read_polynomial(e: &OpExpr, arg: Argument) -> Result<Polynomial> {
    let residue = |why: &str| Error::NonPolynomialResidue(format!("{why}: {e}"));
    let scale = arg.scale();
    let d = arg.degree() as i64;
    let mut coeffs: Vec<Rational> = Vec::new();
    for t in e.terms() {
        if t.mom != 0 {
            return Err(residue("momentum survived"));
        }
        if t.factor.has_exponential() {
            return Err(residue("exponential did not cancel"));
        }
        let c = t.coeff.as_rational().ok_or_else(|| residue("non-rational coefficient"))?;
        let p = &t.factor.power;
        if !p.is_integer() || p.is_negative() || !(p.numer() % d).is_zero() {
            return Err(residue("power outside the polynomial ring"));
        }
        let j: usize = (p.numer() / d).try_into().map_err(|_| residue("degree overflow"))?;
        if coeffs.len() <= j {
            coeffs.resize(j + 1, Rational::zero());
        }
        // x^(d j) = u^j / scale^j
        coeffs[j] = c / rational_pow(&scale, j as i64);
    }
    Ok(Polynomial::new(arg, Poly::new(coeffs)))
}

/// Nested-commutator Rodrigues form for the state, reduced to a polynomial.
pub fn rodrigues_nested(sys: SystemKind, qn: QuantumNumbers) -> Result<Polynomial> {
    let e = match sys {
        SystemKind::Sho1d => hermite_nested(qn.k),
        SystemKind::Osc3d => oscillator_nested(qn.k, 2 * qn.level as i64 + 1),
        SystemKind::Osc2d => oscillator_nested(qn.k, 2 * qn.level as i64),
        SystemKind::Coul3d => coulomb3d_nested(qn.level, qn.k),
        SystemKind::Coul2d => coulomb2d_nested(qn.level, qn.k),
    };
    read_polynomial(&e, argument_for(sys, qn))
}

/// `(-i)^n e^{x^2} [p, [p, ... [p, e^{-x^2}]]]`
fn hermite_nested(n: u32) -> OpExpr {
    let p = OpExpr::momentum();
    let mut f = exp_gauss(-1);
    for _ in 0..n {
        f = p.commutator(&f);
    }
    exp_gauss(1).mul(&f).scale(&Scalar::neg_i_pow(n))
}

/// `x^-w e^{x^2} [B, ... [B, x^{w + 2k} e^{-x^2}]] / k!` with
/// `B = (i/2) x^-1 p`, so that `[B, F] = F' / (2x)`. The weight `w` is
/// `2l + 1` in 3D and `2m` in 2D.
fn oscillator_nested(k: u32, w: i64) -> OpExpr {
    let b = coord_pow(-1).mul(&OpExpr::momentum()).scale(&Scalar::i().scale(&half()));
    let mut f = coord_pow(w + 2 * k as i64).mul(&exp_gauss(-1));
    for _ in 0..k {
        f = b.commutator(&f);
    }
    coord_pow(-w).mul(&exp_gauss(1)).mul(&f).scale_rational(&factorial_q(k as u64).recip())
}

/// `Q = (2n-1)! l! k! / ((n+l)! (n-1)!)` with `n = l + k + 1`.
pub fn coulomb3d_divisor(l: u32, k: u32) -> Rational {
    let (l, k) = (l as u64, k as u64);
    let n = l + k + 1;
    factorial_q(2 * n - 1) * factorial_q(l) * factorial_q(k) / (factorial_q(n + l) * factorial_q(n - 1))
}

/// `P = (2m+k)! / (k! (2m-1)!! (2m+2k)!!)`
pub fn coulomb2d_prefactor(m: u32, k: u32) -> Rational {
    let (m, k) = (m as i64, k as i64);
    factorial_q((2 * m + k) as u64)
        / (factorial_q(k as u64) * double_factorial_q(2 * m - 1) * double_factorial_q(2 * m + 2 * k))
}

/// 3D Coulomb, `n = l + k + 1`:
/// `L = i^k (2x)^k / Q * x^{-l-1} e^{x/(l+1)} F e^{x/n} x^{-n}` with
/// `F = [p, x^-1 e^{-x/((j+1)(j+2))} [ ... [p, x^{2n-1} e^{-(2n-1)x/(n(n-1))}]]]`
/// (`j` running from `l` up to `n-3`) and
/// `Q = (2n-1)! l! k! / ((n+l)! (n-1)!)`.
fn coulomb3d_nested(l: u32, k: u32) -> OpExpr {
    let n = (l + k + 1) as i64;
    let l64 = l as i64;
    let p = OpExpr::momentum();
    let f = if k == 0 {
        coord_pow(n).mul(&exp_linear(rat(-1, n)))
    } else {
        let mut f = p.commutator(&coord_pow(2 * n - 1).mul(&exp_linear(rat(-(2 * n - 1), n * (n - 1)))));
        for j in (l64..=n - 3).rev() {
            let dress = coord_pow(-1).mul(&exp_linear(rat(-1, (j + 1) * (j + 2))));
            f = p.commutator(&dress.mul(&f));
        }
        f
    };
    let q = coulomb3d_divisor(l, k);
    let front = coord_pow(-l64 - 1).mul(&exp_linear(rat(1, l64 + 1)));
    let back = if k == 0 { OpExpr::one() } else { coord_pow(-n).mul(&exp_linear(rat(1, n))) };
    let lead = &Scalar::neg_i_pow(3 * k) * &Scalar::rational(rational_pow(&int(2), k as i64) / q);
    front.mul(&f).mul(&back).mul(&coord_pow(k as i64)).scale(&lead)
}

/// 2D Coulomb, `N = m + k + 1/2`:
/// `L = i^k P ρ^{-2m-1} e^{(2m+k+1)ρ/((m+1/2) N)} [p, Φ_m [p, ... [p, Φ_{m+k-1} ρ^{2m+2k+1} e^{-2ρ/N}]]]`
/// with `Φ_j = ρ^-1 e^{-ρ/((j+1/2)(j+3/2))}` and
/// `P = (2m+k)! / (k! (2m-1)!! (2m+2k)!!)`.
fn coulomb2d_nested(m: u32, k: u32) -> OpExpr {
    let (m64, k64) = (m as i64, k as i64);
    let h = half();
    let big_n = int(m64 + k64) + &h;
    let p = OpExpr::momentum();
    let mut f = coord_pow(2 * m64 + 2 * k64 + 1).mul(&exp_linear(-int(2) / &big_n));
    for j in (m64..m64 + k64).rev() {
        let jq = int(j);
        let rate = ((&jq + &h) * (&jq + int(1) + &h)).recip();
        let phi = coord_pow(-1).mul(&exp_linear(-rate));
        f = p.commutator(&phi.mul(&f));
    }
    let pref = coulomb2d_prefactor(m, k);
    let rate = int(2 * m64 + k64 + 1) / ((int(m64) + &h) * &big_n);
    let front = coord_pow(-2 * m64 - 1).mul(&exp_linear(rate));
    let lead = &Scalar::neg_i_pow(3 * k) * &Scalar::rational(pref);
    front.mul(&f).scale(&lead)
}

/// Exact coefficient-wise equality of the nested form with the recurrence /
/// explicit-sum polynomial.
pub fn rodrigues_equivalence(sys: SystemKind, qn: QuantumNumbers) -> Result<bool> {
    Ok(rodrigues_nested(sys, qn)? == reference_polynomial(sys, qn))
}

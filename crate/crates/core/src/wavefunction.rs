//! Normalized eigenfunctions assembled along the ladder and along the
//! Rodrigues form, with exact eigenvalue checks and quadrature overlaps.

use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::algebra::{apply_to_state, FnState, FunctionFactor, OpExpr};
use crate::error::{Error, Result};
use crate::num::{double_factorial_q, factorial_q, half, int, rational_pow, rational_to_f64, to_i64, Rational};
use crate::poly::{Argument, Polynomial};
use crate::quadrature::{tail_cutoff, Integrator};
use crate::rodrigues::{
    argument_for, coulomb2d_prefactor, coulomb3d_divisor, read_polynomial, reference_polynomial, rodrigues_nested,
};
use crate::scalar::{rational_from_json, rational_json, Scalar};
use crate::systems::{
    closed_form_normalization, hamiltonian, lowering_op, normalization_constant, raising_op, solve_gauge,
    QuantumNumbers, SystemKind,
};

/// Below this radius negative powers are not evaluated.
pub const ORIGIN_CUTOFF: f64 = 1e-12;

/// Integrand bound that fixes the quadrature cutoff.
const TAIL_EPS: f64 = 1e-16;

/// Ground-state normalization; always positive real.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundNormConstant {
    pub value: Scalar,
}

/// `norm (-i)^phase poly(u(t)) t^a exp(g t^2 + l t)`, square integrable
/// against `t^measure dt`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wavefunction {
    pub sys: SystemKind,
    pub qn: QuantumNumbers,
    pub norm: Scalar,
    pub poly: Polynomial,
    pub envelope: FunctionFactor,
    pub measure: Rational,
    /// Power of `-i` kept out of `norm`.
    pub phase: u32,
}

/// `Gamma(z)` for integer or half-integer `z > 0` as `(rational, has sqrt(pi))`.
fn gamma_exact(z: &Rational) -> (Rational, bool) {
    if let Some(n) = to_i64(z) {
        (factorial_q(n as u64 - 1), false)
    } else {
        // Gamma(j + 1/2) = (2j-1)!! / 2^j sqrt(pi)
        let j = to_i64(&(z - half())).expect("half-integer argument");
        (double_factorial_q(2 * j - 1) / rational_pow(&int(2), j), true)
    }
}

/// Exact ground normalization of level `level`, from the moment integral of
/// the gauge envelope.
pub fn ground_norm(sys: SystemKind, level: u32) -> GroundNormConstant {
    let sp = sys.superpotential(level);
    let s = -(&sp.alpha * int(2));
    // int t^s e^{-beta t^2} or int t^s e^{-2 gamma t} over the half line
    let (moment, has_pi) = if sp.beta.is_positive() {
        assert!(sp.beta.is_one(), "oscillator frequency fixed to one");
        let (g, pi) = gamma_exact(&((&s + Rational::one()) / int(2)));
        let half_line = g / int(2);
        (if sys.dimension() == 1 { half_line * int(2) } else { half_line }, pi)
    } else {
        let (g, pi) = gamma_exact(&(&s + Rational::one()));
        let e = to_i64(&s).expect("integer moment") + 1;
        (g / rational_pow(&(&sp.gamma * int(2)), e), pi)
    };
    let inv = &Scalar::rational(moment.recip()) * &Scalar::pi_pow(if has_pi { -2 } else { 0 });
    GroundNormConstant { value: inv.sqrt_positive().expect("moment is positive") }
}

/// Ground constants in their closed forms, written per system.
pub fn printed_ground_norm(sys: SystemKind, level: u32) -> Scalar {
    let l = level as i64;
    let value = match sys {
        SystemKind::Sho1d => return Scalar::pi_pow(-1),
        SystemKind::Osc3d => {
            return &Scalar::sqrt(&(rational_pow(&int(2), l + 2) / double_factorial_q(2 * l + 1))) * &Scalar::pi_pow(-1)
        }
        SystemKind::Coul3d => {
            let n = l + 1;
            rational_pow(&Rational::new(2.into(), n.into()), 2 * n + 1) / factorial_q(2 * n as u64)
        }
        SystemKind::Osc2d => int(2) / factorial_q(l as u64),
        SystemKind::Coul2d => {
            let top = int(2) / (int(l) + half());
            rational_pow(&top, 2 * l + 2) / factorial_q(2 * l as u64 + 1)
        }
    };
    Scalar::sqrt(&value)
}

/// Angular factor `1/sqrt(2 pi)` carried by the planar systems; the 3D
/// spherical harmonic is left symbolic.
pub fn angular_factor(sys: SystemKind) -> Option<Scalar> {
    (sys.dimension() == 2).then(|| &Scalar::sqrt(&half()) * &Scalar::pi_pow(-2))
}

/// `t^(-alpha_l - c) exp(-beta t^2 / 2 - gamma_{l+k} t)`
pub fn envelope(sys: SystemKind, qn: QuantumNumbers) -> FunctionFactor {
    let low = sys.superpotential(qn.level);
    let top = sys.superpotential(qn.level + qn.k);
    FunctionFactor::new(-low.alpha - sys.shift(), -top.beta / int(2), -top.gamma)
}

/// Phase that the ladder route carries relative to the Rodrigues route.
pub fn ladder_phase(sys: SystemKind, k: u32) -> u32 {
    if sys == SystemKind::Sho1d {
        (3 * k) % 4
    } else {
        k % 4
    }
}

pub fn ground_wavefunction(sys: SystemKind, level: u32) -> Result<Wavefunction> {
    let c = sys.shift();
    let gauge = solve_gauge(&lowering_op(sys, level), &c)?;
    let qn = QuantumNumbers::new(level, 0);
    let env = gauge.ground(&c);
    debug_assert_eq!(env, envelope(sys, qn));
    Ok(Wavefunction {
        sys,
        qn,
        norm: ground_norm(sys, level).value,
        poly: reference_polynomial(sys, qn),
        envelope: env,
        measure: sys.measure(),
        phase: 0,
    })
}

/// Raising operators applied to the normalized auxiliary ground state,
/// times the chain-product constant; read back into canonical form.
pub fn build_by_ladder(sys: SystemKind, qn: QuantumNumbers) -> Result<Wavefunction> {
    let top = qn.level + qn.k;
    let ground = ground_wavefunction(sys, top)?;
    let mut state = ground.expanded();
    for j in (qn.level..top).rev() {
        state = apply_to_state(&raising_op(sys, j), &state);
    }
    let state = state.scale(&normalization_constant(sys, qn));
    canonicalize(sys, qn, &state)
}

/// Splits a raw state into `norm (-i)^phase poly envelope`.
fn canonicalize(sys: SystemKind, qn: QuantumNumbers, state: &FnState) -> Result<Wavefunction> {
    let env = envelope(sys, qn);
    let arg = argument_for(sys, qn);
    let bare = state.parts().mul_factor_left(&env.inv());
    let lead = bare
        .terms()
        .max_by(|a, b| a.factor.power.cmp(&b.factor.power))
        .ok_or_else(|| Error::NonPolynomialResidue("zero state".into()))?;
    let reference = reference_polynomial(sys, qn);
    let scale = rational_pow(&arg.scale(), qn.k as i64);
    let std_lead = reference.poly.leading().expect("nonzero reference") * scale;
    let ratio = lead.coeff.scale(&std_lead.recip());
    let poly = read_polynomial(&bare.scale(&ratio.inv().expect("nonzero")), arg)?;
    let (phase, norm) = (0..4)
        .map(|j| (j, &ratio * &Scalar::neg_i_pow(3 * j)))
        .find(|(_, s)| s.is_positive_real())
        .ok_or_else(|| Error::NonPolynomialResidue(format!("ratio {ratio} is not a unit times a positive real")))?;
    Ok(Wavefunction { sys, qn, norm, poly, envelope: env, measure: sys.measure(), phase })
}

/// Constant relating the nested-commutator normalization to the ground
/// norm of the chain's top level.
fn rodrigues_norm(sys: SystemKind, qn: QuantumNumbers) -> Scalar {
    let k = qn.k;
    let c = closed_form_normalization(sys, qn);
    let ground = ground_norm(sys, qn.level + k).value;
    let root2 = Scalar::sqrt(&int(2));
    let rel = match sys {
        SystemKind::Sho1d => Scalar::sqrt(&half()).pow(k as i32).unwrap(),
        SystemKind::Osc3d | SystemKind::Osc2d => root2.pow(k as i32).unwrap().scale(&factorial_q(k as u64)),
        SystemKind::Coul3d => {
            (&root2 * &Scalar::integer(2)).pow(-(k as i32)).unwrap().scale(&coulomb3d_divisor(qn.level, k))
        }
        SystemKind::Coul2d => {
            Scalar::sqrt(&half()).pow(k as i32).unwrap().scale(&coulomb2d_prefactor(qn.level, k).recip())
        }
    };
    &(&c * &rel) * &ground
}

pub fn build_by_rodrigues(sys: SystemKind, qn: QuantumNumbers) -> Result<Wavefunction> {
    Ok(Wavefunction {
        sys,
        qn,
        norm: rodrigues_norm(sys, qn),
        poly: rodrigues_nested(sys, qn)?,
        envelope: envelope(sys, qn),
        measure: sys.measure(),
        phase: 0,
    })
}

fn coulomb_norm(qn: QuantumNumbers, top_factorial: u64) -> Scalar {
    let (l, k) = (qn.level as i64, qn.k as u64);
    let n = l + k as i64 + 1;
    let q = factorial_q(k) / (int(2 * n) * factorial_q(top_factorial))
        * rational_pow(&Rational::new(2.into(), n.into()), 2 * l + 3);
    Scalar::sqrt(&q)
}

/// The textbook hydrogen radial constant
/// `sqrt((n-l-1)! / (2n (n+l)!)) (2/n)^(l+3/2)`.
pub fn coulomb3d_norm(qn: QuantumNumbers) -> Scalar {
    coulomb_norm(qn, (2 * qn.level + qn.k + 1) as u64)
}

/// Same constant with `(n+1)!` in place of `(n+l)!`, the form printed in
/// the source derivation; it is off by a factor for `l != 1`.
pub fn printed_coulomb3d_norm(qn: QuantumNumbers) -> Scalar {
    coulomb_norm(qn, (qn.level + qn.k + 2) as u64)
}

/// Rodrigues-route 3D Coulomb state with the printed prefactor.
pub fn build_coulomb3d_printed(qn: QuantumNumbers) -> Result<Wavefunction> {
    let mut w = build_by_rodrigues(SystemKind::Coul3d, qn)?;
    w.norm = printed_coulomb3d_norm(qn);
    Ok(w)
}

/// Exact equality of the ladder state with the phased Rodrigues state,
/// compared as expanded coordinate functions.
pub fn routes_agree(sys: SystemKind, qn: QuantumNumbers) -> Result<bool> {
    let ladder = build_by_ladder(sys, qn)?;
    let rod = build_by_rodrigues(sys, qn)?;
    let expected = ladder_phase(sys, qn.k);
    Ok(ladder.phase == expected && ladder.expanded() == rod.expanded().scale(&Scalar::neg_i_pow(expected)))
}

/// `H_l psi - E psi` as an exact state.
pub fn eigen_residual(psi: &Wavefunction, energy: &Rational) -> FnState {
    let s = psi.expanded();
    let h = apply_to_state(&hamiltonian(psi.sys, psi.qn.level), &s);
    h.sub(&s.scale(&Scalar::rational(energy.clone())))
}

/// Zero residual at the chain energy.
pub fn eigencheck(psi: &Wavefunction) -> bool {
    eigen_residual(psi, &psi.sys.energy(psi.qn)).is_zero()
}

/// Eigenvalue read from one coefficient of `H psi`, returned only when the
/// full residual vanishes with it.
pub fn derived_energy(psi: &Wavefunction) -> Option<Rational> {
    let s = psi.expanded();
    let h = apply_to_state(&hamiltonian(psi.sys, psi.qn.level), &s);
    let t = s.parts().terms().next()?;
    let hc = h.parts().coefficient(&t.factor, 0)?;
    let e = (&hc * &t.coeff.inv()?).as_rational()?.clone();
    eigen_residual(psi, &e).is_zero().then_some(e)
}

/// Real overlap `int psi1 psi2 t^measure dt` with phases stripped.
pub fn inner_product(a: &Wavefunction, b: &Wavefunction) -> Result<f64> {
    if a.sys != b.sys || a.qn.level != b.qn.level {
        return Err(Error::InvalidQuantumNumbers {
            system: a.sys,
            reason: "overlaps need the same system and angular level".into(),
        });
    }
    let (na, nb) = (a.norm_f64(), b.norm_f64());
    let power = rational_to_f64(&(&a.envelope.power + &b.envelope.power + &a.measure));
    let gauss = rational_to_f64(&(&a.envelope.gauss + &b.envelope.gauss));
    let linear = rational_to_f64(&(&a.envelope.linear + &b.envelope.linear));
    let bound = |t: f64| {
        na * nb * a.poly.abs_bound(t) * b.poly.abs_bound(t) * t.powf(power) * (gauss * t * t + linear * t).exp()
    };
    let cut = tail_cutoff(bound, TAIL_EPS, 0.25, 1e5)?;
    let m = rational_to_f64(&a.measure);
    let f = |t: f64| {
        let w = if m == 0.0 { 1.0 } else { t.powf(m) };
        a.real_value(t) * b.real_value(t) * w
    };
    let lo = if a.sys.dimension() == 1 { -cut } else { 0.0 };
    Integrator::default().integrate(f, lo, cut)
}

/// Sign changes of the state on its open domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NodeCount {
    /// Sturm count of real roots of the polynomial factor.
    pub exact: usize,
    /// Sign changes seen on a uniform sample grid.
    pub sampled: usize,
}

impl Wavefunction {
    /// Exact expansion as a coordinate function on the system's kernel.
    pub fn expanded(&self) -> FnState {
        let lead = &self.norm * &Scalar::neg_i_pow(self.phase);
        let mut e = OpExpr::zero();
        for (c, pow) in self.poly.in_coordinate() {
            e.add_term(&lead.scale(&c), self.envelope.mul(&FunctionFactor::monomial(int(pow))), 0);
        }
        FnState::new(e, self.sys.shift())
    }

    pub fn norm_f64(&self) -> f64 {
        self.norm.to_complex::<f64>().re
    }

    /// Value without the phase; callers keep `t` in the domain.
    pub fn real_value(&self, t: f64) -> f64 {
        self.norm_f64() * self.poly.eval_at(t) * self.envelope.eval(t)
    }

    pub fn evaluate(&self, t: f64) -> Result<Complex64> {
        let radial = self.sys.dimension() > 1;
        if !t.is_finite() || (radial && t < 0.0) || (self.envelope.power.is_negative() && t.abs() < ORIGIN_CUTOFF) {
            return Err(Error::DomainError(t));
        }
        let phase = Scalar::neg_i_pow(self.phase).to_complex::<f64>();
        Ok(phase * self.real_value(t))
    }

    pub fn nodes(&self) -> NodeCount {
        let radial = self.sys.dimension() > 1;
        let zero = Rational::zero();
        let exact = self.poly.poly.count_real_roots(if radial { Some(&zero) } else { None }, None);
        // every root lies below the Cauchy bound 1 + max |a_j / a_n|
        let c = self.poly.coeffs();
        let lead = rational_to_f64(c.last().expect("nonzero polynomial")).abs();
        let u_max = 1.0 + c.iter().map(|a| rational_to_f64(a).abs() / lead).fold(0.0, f64::max);
        let t_max = match self.poly.arg {
            Argument::XSquared => u_max.sqrt(),
            arg => u_max / rational_to_f64(&arg.scale()),
        } * 1.1;
        let lo = if radial { 0.0 } else { -t_max };
        let samples = 20_000;
        let mut last = 0.0f64;
        let mut sampled = 0;
        for j in 1..samples {
            let t = lo + (t_max - lo) * j as f64 / samples as f64;
            let v = self.poly.eval_at(t);
            if v != 0.0 {
                if last != 0.0 && v.signum() != last.signum() {
                    sampled += 1;
                }
                last = v;
            }
        }
        NodeCount { exact, sampled }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "system": self.sys.name(),
            "level": self.qn.level,
            "k": self.qn.k,
            "norm": self.norm.to_json(),
            "phase": self.phase,
            "poly": self.poly.to_json(),
            "envelope": self.envelope.to_json(),
            "measure": rational_json(&self.measure),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |f: &str| Error::Json(format!("wavefunction field `{f}`"));
        let sys: SystemKind = v["system"].as_str().ok_or_else(|| bad("system"))?.parse()?;
        let num = |f: &str| v[f].as_u64().and_then(|x| u32::try_from(x).ok()).ok_or_else(|| bad(f));
        Ok(Wavefunction {
            sys,
            qn: QuantumNumbers::new(num("level")?, num("k")?),
            norm: Scalar::from_json(&v["norm"])?,
            poly: Polynomial::from_json(&v["poly"])?,
            envelope: FunctionFactor::from_json(&v["envelope"])?,
            measure: rational_from_json(&v["measure"])?,
            phase: num("phase")? % 4,
        })
    }
}

impl fmt::Display for Wavefunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.expanded())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rat;

    const SYSTEMS: [SystemKind; 5] = SystemKind::ALL;

    #[test]
    fn ground_norms_match_closed_forms() {
        for sys in SYSTEMS {
            for level in 0..5 {
                if sys == SystemKind::Sho1d && level > 0 {
                    continue;
                }
                assert_eq!(ground_norm(sys, level).value, printed_ground_norm(sys, level), "{sys} {level}");
            }
        }
        assert_eq!(ground_norm(SystemKind::Sho1d, 0).value, Scalar::pi_pow(-1));
        assert_eq!(ground_norm(SystemKind::Osc3d, 0).value, &Scalar::integer(2) * &Scalar::pi_pow(-1));
        assert_eq!(ground_norm(SystemKind::Coul2d, 0).value, Scalar::integer(4));
    }

    #[test]
    fn ladder_examples() {
        let w = build_by_ladder(SystemKind::Sho1d, QuantumNumbers::new(0, 1)).unwrap();
        // sqrt 2 x pi^(-1/4) e^{-x^2/2}, up to the ladder phase i
        let expect = FnState::from_factor(
            &(&Scalar::sqrt(&int(2)) * &Scalar::pi_pow(-1)) * &Scalar::i(),
            FunctionFactor::new(int(1), rat(-1, 2), int(0)),
            int(0),
        );
        assert_eq!(w.expanded(), expect);
        assert_eq!(w.phase, 3);
        let c = build_by_ladder(SystemKind::Coul3d, QuantumNumbers::new(1, 0)).unwrap();
        assert_eq!(c.envelope, FunctionFactor::new(int(1), int(0), rat(-1, 2)));
        assert_eq!(c.poly.degree(), 0);
    }

    #[test]
    fn routes_agree_small() {
        for sys in SYSTEMS {
            for level in 0..3 {
                for k in 0..4 {
                    let level = if sys == SystemKind::Sho1d { 0 } else { level };
                    assert!(routes_agree(sys, QuantumNumbers::new(level, k)).unwrap(), "{sys} {level} {k}");
                }
            }
        }
    }

    #[test]
    fn coulomb_rodrigues_norm_is_textbook() {
        for n in 1..6u32 {
            for l in 0..n {
                let qn = QuantumNumbers::new(l, n - l - 1);
                let w = build_by_rodrigues(SystemKind::Coul3d, qn).unwrap();
                assert_eq!(w.norm, coulomb3d_norm(qn));
            }
        }
        let q = QuantumNumbers::new(1, 1);
        assert_eq!(printed_coulomb3d_norm(q), coulomb3d_norm(q));
    }

    #[test]
    fn eigen_examples() {
        let w = build_by_rodrigues(SystemKind::Sho1d, QuantumNumbers::new(0, 3)).unwrap();
        assert_eq!(derived_energy(&w), Some(rat(7, 2)));
        let w = build_by_ladder(SystemKind::Coul3d, QuantumNumbers::new(1, 1)).unwrap();
        assert_eq!(derived_energy(&w), Some(rat(-1, 18)));
        let w = build_by_ladder(SystemKind::Osc2d, QuantumNumbers::new(2, 1)).unwrap();
        assert!(eigencheck(&w));
        assert_eq!(derived_energy(&w), Some(int(5)));
        assert!(!eigen_residual(&w, &int(4)).is_zero());
    }

    #[test]
    fn overlaps() {
        let g = ground_wavefunction(SystemKind::Sho1d, 0).unwrap();
        assert!((inner_product(&g, &g).unwrap() - 1.0).abs() < 1e-10);
        let a = build_by_rodrigues(SystemKind::Osc3d, QuantumNumbers::new(1, 1)).unwrap();
        let b = build_by_rodrigues(SystemKind::Osc3d, QuantumNumbers::new(1, 2)).unwrap();
        assert!(inner_product(&a, &b).unwrap().abs() < 1e-10);
        let h = build_by_rodrigues(SystemKind::Coul3d, QuantumNumbers::new(0, 0)).unwrap();
        assert!((inner_product(&h, &h).unwrap() - 1.0).abs() < 1e-10);
        let p = build_coulomb3d_printed(QuantumNumbers::new(0, 0)).unwrap();
        assert!((inner_product(&p, &p).unwrap() - 0.5).abs() < 1e-10);
        assert!(inner_product(&a, &h).is_err());
    }

    #[test]
    fn point_values() {
        let g = ground_wavefunction(SystemKind::Sho1d, 0).unwrap();
        assert!((g.evaluate(0.0).unwrap().re - 0.751_125_544_464_942_5).abs() < 1e-15);
        let w = build_by_rodrigues(SystemKind::Sho1d, QuantumNumbers::new(0, 1)).unwrap();
        assert_eq!(w.evaluate(0.0).unwrap().norm(), 0.0);
        let h = build_by_rodrigues(SystemKind::Coul3d, QuantumNumbers::new(0, 0)).unwrap();
        assert!((h.evaluate(1.0).unwrap().re - 2.0 * (-1.0f64).exp()).abs() < 1e-15);
        assert!(matches!(h.evaluate(-1.0), Err(Error::DomainError(_))));
    }

    #[test]
    fn node_counts() {
        for sys in SYSTEMS {
            for k in 0..6 {
                let w = build_by_rodrigues(sys, QuantumNumbers::new(if sys == SystemKind::Sho1d { 0 } else { 1 }, k))
                    .unwrap();
                let n = w.nodes();
                assert_eq!(n.exact, k as usize, "{sys} {k}");
                assert_eq!(n.sampled, k as usize, "{sys} {k}");
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let w = build_by_ladder(SystemKind::Coul2d, QuantumNumbers::new(1, 2)).unwrap();
        assert_eq!(Wavefunction::from_json(&w.to_json()).unwrap(), w);
    }

    #[test]
    fn angular() {
        assert!(angular_factor(SystemKind::Osc3d).is_none());
        let a = angular_factor(SystemKind::Coul2d).unwrap().to_complex::<f64>().re;
        assert!((a - 1.0 / (2.0 * std::f64::consts::PI).sqrt()).abs() < 1e-15);
    }
}

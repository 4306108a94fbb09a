//! The five exactly solvable systems and their factorization chains.
//!
//! Units are dimensionless throughout: hbar = M = 1, omega = 1 for the
//! oscillators and e^2 = a0 = 1 for the Coulomb problems. One coordinate
//! symbol stands for x, r or rho; the kernel shift `c` and the measure
//! exponent carry the dimension.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::algebra::{apply_to_state, FnState, FunctionFactor, OpExpr};
use crate::error::{Error, Result};
use crate::num::{double_factorial_q, factorial_q, half, int, rat, rational_pow, Rational};
use crate::scalar::Scalar;

/// Default upper bound on level and chain depth accepted from users.
pub const DEFAULT_MAX_LEVEL: u32 = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SystemKind {
    Sho1d,
    Osc2d,
    Osc3d,
    Coul2d,
    Coul3d,
}

impl SystemKind {
    pub const ALL: [SystemKind; 5] =
        [SystemKind::Sho1d, SystemKind::Osc2d, SystemKind::Osc3d, SystemKind::Coul2d, SystemKind::Coul3d];

    pub fn name(self) -> &'static str {
        match self {
            SystemKind::Sho1d => "sho1d",
            SystemKind::Osc2d => "osc2d",
            SystemKind::Osc3d => "osc3d",
            SystemKind::Coul2d => "coul2d",
            SystemKind::Coul3d => "coul3d",
        }
    }

    pub fn dimension(self) -> u32 {
        match self {
            SystemKind::Sho1d => 1,
            SystemKind::Osc2d | SystemKind::Coul2d => 2,
            SystemKind::Osc3d | SystemKind::Coul3d => 3,
        }
    }

    pub fn is_coulomb(self) -> bool {
        matches!(self, SystemKind::Coul2d | SystemKind::Coul3d)
    }

    /// Kernel shift `c`: the kernel is annihilated by `p + i c / x`.
    pub fn shift(self) -> Rational {
        rat(self.dimension() as i64 - 1, 2)
    }

    /// Coordinate power in the radial inner product.
    pub fn measure(self) -> Rational {
        int(self.dimension() as i64 - 1)
    }

    /// Energy added per link of the chain: `A A^+ + E_l = H_{l+1} + shift`.
    pub fn chain_shift(self) -> Rational {
        if self.is_coulomb() {
            Rational::zero()
        } else {
            Rational::one()
        }
    }

    /// Angular offset: `l + 1` in 3D, `m + 1/2` in 2D.
    fn angular_offset(self, level: u32) -> Rational {
        match self.dimension() {
            3 => int(level as i64 + 1),
            2 => int(level as i64) + half(),
            _ => Rational::zero(),
        }
    }

    pub fn superpotential(self, level: u32) -> Superpotential {
        let off = self.angular_offset(level);
        if self.is_coulomb() {
            Superpotential { alpha: -off.clone(), beta: Rational::zero(), gamma: off.recip() }
        } else {
            Superpotential { alpha: -off, beta: Rational::one(), gamma: Rational::zero() }
        }
    }

    /// Ground energy of `H_level`.
    pub fn ground_energy(self, level: u32) -> Rational {
        let off = self.angular_offset(level);
        match self {
            SystemKind::Sho1d => half(),
            SystemKind::Osc3d | SystemKind::Osc2d => off + half(),
            SystemKind::Coul3d | SystemKind::Coul2d => -(&off * &off * int(2)).recip(),
        }
    }

    /// Energy of the chain state: auxiliary ground energy plus accumulated shifts.
    pub fn energy(self, qn: QuantumNumbers) -> Rational {
        self.ground_energy(qn.level + qn.k) + self.chain_shift() * int(qn.k as i64)
    }

    /// Textbook spectrum in terms of the principal number.
    pub fn energy_law(self, qn: QuantumNumbers) -> Rational {
        let n = int(qn.principal(self) as i64);
        match self {
            SystemKind::Sho1d => n + half(),
            SystemKind::Osc3d => n + rat(3, 2),
            SystemKind::Osc2d => n + Rational::one(),
            SystemKind::Coul3d => -(&n * &n * int(2)).recip(),
            SystemKind::Coul2d => {
                let m = n - half();
                -(&m * &m * int(2)).recip()
            }
        }
    }

    /// Centrifugal coefficient `kappa` in `kappa / x^2`.
    pub fn centrifugal(self, level: u32) -> Rational {
        let l = int(level as i64);
        match self.dimension() {
            3 => &l * (&l + Rational::one()) / int(2),
            2 => (&l * &l - rat(1, 4)) / int(2),
            _ => Rational::zero(),
        }
    }
}

impl fmt::Display for SystemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SystemKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        SystemKind::ALL.iter().copied().find(|k| k.name() == s).ok_or_else(|| Error::UnknownSystem(s.to_string()))
    }
}

/// Superpotential `alpha / x + beta x + gamma`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Superpotential {
    pub alpha: Rational,
    pub beta: Rational,
    pub gamma: Rational,
}

impl Superpotential {
    pub fn to_expr(&self) -> OpExpr {
        let mut e = OpExpr::zero();
        e.add_term(&Scalar::rational(self.alpha.clone()), FunctionFactor::monomial(int(-1)), 0);
        e.add_term(&Scalar::rational(self.beta.clone()), FunctionFactor::coord(), 0);
        e.add_term(&Scalar::rational(self.gamma.clone()), FunctionFactor::one(), 0);
        e
    }

    /// Gauge factor `x^(-alpha) exp(-beta x^2 / 2 - gamma x)`, whose
    /// logarithmic derivative is `-W`.
    pub fn gauge(&self) -> FunctionFactor {
        FunctionFactor::new(-self.alpha.clone(), -&self.beta / int(2), -self.gamma.clone())
    }

    /// Normalizability: growth at infinity and regular behaviour at the origin.
    pub fn is_normalizable(&self, radial: bool) -> bool {
        let grows = self.beta > Rational::zero() || (self.beta.is_zero() && self.gamma > Rational::zero());
        grows && (!radial || self.alpha < Rational::zero())
    }
}

/// Angular level (l or m) and chain depth k.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuantumNumbers {
    pub level: u32,
    pub k: u32,
}

impl QuantumNumbers {
    pub fn new(level: u32, k: u32) -> Self {
        QuantumNumbers { level, k }
    }

    /// Principal number: `k` (1D), `level + 2k` (oscillators),
    /// `level + k + 1` (Coulomb).
    pub fn principal(self, sys: SystemKind) -> u32 {
        match sys {
            SystemKind::Sho1d => self.k,
            SystemKind::Osc3d | SystemKind::Osc2d => self.level + 2 * self.k,
            SystemKind::Coul3d | SystemKind::Coul2d => self.level + self.k + 1,
        }
    }

    /// Inverts [`QuantumNumbers::principal`].
    pub fn from_principal(sys: SystemKind, n: u32, level: u32) -> Result<Self> {
        let bad = |reason: String| Error::InvalidQuantumNumbers { system: sys, reason };
        match sys {
            SystemKind::Sho1d => {
                if level != 0 {
                    return Err(bad("the 1D oscillator has no angular level".into()));
                }
                Ok(QuantumNumbers::new(0, n))
            }
            SystemKind::Osc3d | SystemKind::Osc2d => {
                if n < level || !(n - level).is_multiple_of(2) {
                    return Err(bad(format!("n - level must be even and non-negative (n={n}, level={level})")));
                }
                Ok(QuantumNumbers::new(level, (n - level) / 2))
            }
            SystemKind::Coul3d | SystemKind::Coul2d => {
                if n <= level {
                    return Err(bad(format!("need n > level (n={n}, level={level})")));
                }
                Ok(QuantumNumbers::new(level, n - level - 1))
            }
        }
    }

    /// Rejects values beyond the configured guard.
    pub fn check(self, sys: SystemKind, max_level: u32) -> Result<Self> {
        if sys == SystemKind::Sho1d && self.level != 0 {
            return Err(Error::InvalidQuantumNumbers {
                system: sys,
                reason: "the 1D oscillator has no angular level".into(),
            });
        }
        if self.level > max_level || self.k > max_level {
            return Err(Error::LevelOutOfRange { level: self.level.max(self.k) as i64, max: max_level });
        }
        Ok(self)
    }
}

/// `(1/sqrt 2) (p - i W_level)`
pub fn lowering_op(sys: SystemKind, level: u32) -> OpExpr {
    let w = sys.superpotential(level).to_expr();
    (&OpExpr::momentum() - &w.scale(&Scalar::i())).scale(&Scalar::sqrt(&half()))
}

pub fn raising_op(sys: SystemKind, level: u32) -> OpExpr {
    lowering_op(sys, level).adjoint()
}

/// `p^2/2 + kappa/x^2 + V` with `V = x^2/2` or `-1/x`.
pub fn hamiltonian(sys: SystemKind, level: u32) -> OpExpr {
    let mut h = OpExpr::term(Scalar::rational(half()), FunctionFactor::one(), 2);
    h.add_term(&Scalar::rational(sys.centrifugal(level)), FunctionFactor::monomial(int(-2)), 0);
    if sys.is_coulomb() {
        h.add_term(&Scalar::integer(-1), FunctionFactor::monomial(int(-1)), 0);
    } else {
        h.add_term(&Scalar::rational(half()), FunctionFactor::monomial(int(2)), 0);
    }
    h
}

fn constant(q: Rational) -> OpExpr {
    OpExpr::scalar(Scalar::rational(q))
}

/// Residuals of `A^+ A + E_l - H_l` and `A A^+ + E_l - H_{l+1} - shift`.
pub fn factorization_residuals(sys: SystemKind, level: u32) -> (OpExpr, OpExpr) {
    let a = lowering_op(sys, level);
    let ad = a.adjoint();
    let e = constant(sys.ground_energy(level));
    let r1 = &(&ad.mul(&a) + &e) - &hamiltonian(sys, level);
    let next = &hamiltonian(sys, level + 1) + &constant(sys.chain_shift());
    let r2 = &(&a.mul(&ad) + &e) - &next;
    (r1, r2)
}

pub fn factorization_check(sys: SystemKind, level: u32) -> bool {
    let (r1, r2) = factorization_residuals(sys, level);
    r1.is_zero() && r2.is_zero()
}

/// Residual of `H_l A^+_l - A^+_l (H_{l+1} + shift)`.
pub fn intertwine_residual(sys: SystemKind, level: u32) -> OpExpr {
    let ad = raising_op(sys, level);
    let next = &hamiltonian(sys, level + 1) + &constant(sys.chain_shift());
    &hamiltonian(sys, level).mul(&ad) - &ad.mul(&next)
}

pub fn intertwine_check(sys: SystemKind, level: u32) -> bool {
    intertwine_residual(sys, level).is_zero()
}

/// Similarity decomposition of a lowering operator: `A f = s f p`, so
/// `A = s f p f^-1` and `A^+ = s f^-1 p f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaugeSolution {
    pub f: FunctionFactor,
    pub s: Scalar,
}

impl GaugeSolution {
    /// Ground state in the representation with kernel shift `c`: the state
    /// `f x^-c K` is annihilated by `A`.
    pub fn ground(&self, c: &Rational) -> FunctionFactor {
        self.f.shifted(&-c.clone())
    }

    /// Re-checks `A f - s f p = 0` by normal ordering.
    pub fn verify(&self, a: &OpExpr) -> bool {
        let lhs = a.mul(&OpExpr::factor(self.f.clone()));
        let rhs = OpExpr::term(self.s.clone(), self.f.clone(), 1);
        (&lhs - &rhs).is_zero()
    }
}

/// Matches `a = s (p - i (alpha/x + beta x + gamma))` and returns the gauge
/// factor, re-verified by normal ordering. `c` only feeds the ground-state
/// check.
pub fn solve_gauge(a: &OpExpr, c: &Rational) -> Result<GaugeSolution> {
    let no = |why: &str| Error::NoGauge(format!("{why}: {a}"));
    if a.max_momentum() != 1 {
        return Err(no("expected first order in p"));
    }
    let s = a.coefficient(&FunctionFactor::one(), 1).filter(|s| !s.is_zero()).ok_or_else(|| no("no bare p term"))?;
    let s_inv = s.inv().ok_or_else(|| no("zero p coefficient"))?;
    // W = i (a - s p) / s
    let rest = &a.scale(&s_inv) - &OpExpr::momentum();
    let w = rest.scale(&Scalar::i());
    if !w.is_momentum_free() {
        return Err(no("momentum in the potential part"));
    }
    let mut sp = Superpotential { alpha: Rational::zero(), beta: Rational::zero(), gamma: Rational::zero() };
    for t in w.terms() {
        let q = t.coeff.as_rational().ok_or_else(|| no("superpotential must be real rational"))?.clone();
        if t.factor.has_exponential() {
            return Err(no("exponential in the superpotential"));
        }
        if t.factor.power == int(-1) {
            sp.alpha = q;
        } else if t.factor.power.is_one() {
            sp.beta = q;
        } else if t.factor.power.is_zero() {
            sp.gamma = q;
        } else {
            return Err(no("superpotential outside alpha/x + beta x + gamma"));
        }
    }
    let g = GaugeSolution { f: sp.gauge(), s };
    if !g.verify(a) {
        return Err(no("residual after gauge matching"));
    }
    let ground = FnState::from_factor(Scalar::one(), g.ground(c), c.clone());
    if !apply_to_state(a, &ground).is_zero() {
        return Err(no("gauge ground state not annihilated"));
    }
    Ok(g)
}

/// Normalization from the chain energies:
/// `C = prod_j (E - E_aux(j))^(-1/2)` with the auxiliary energies including
/// the accumulated link shifts.
pub fn normalization_constant(sys: SystemKind, qn: QuantumNumbers) -> Scalar {
    let target = sys.energy(qn);
    let mut prod = Rational::one();
    for j in 0..qn.k {
        let aux = sys.ground_energy(qn.level + j) + sys.chain_shift() * int(j as i64);
        prod *= &target - aux;
    }
    Scalar::sqrt(&prod.recip())
}

/// Closed-form normalization constants as printed for each system.
pub fn closed_form_normalization(sys: SystemKind, qn: QuantumNumbers) -> Scalar {
    let (l, k) = (qn.level as i64, qn.k as i64);
    let two_k = rational_pow(&int(2), k);
    match sys {
        SystemKind::Sho1d => Scalar::sqrt(&factorial_q(k as u64).recip()),
        SystemKind::Osc3d | SystemKind::Osc2d => Scalar::sqrt(&(two_k * factorial_q(k as u64)).recip()),
        SystemKind::Coul3d => {
            let n = l + k + 1;
            let lead = &Scalar::sqrt(&int(2)).pow(k as i32).unwrap() * &Scalar::integer(n).pow(k as i32).unwrap();
            let ratio = factorial_q(n as u64 - 1) / factorial_q(l as u64);
            let inner =
                factorial_q((n + l) as u64) / (factorial_q((2 * n - 1) as u64) * factorial_q((n - l - 1) as u64));
            &lead.scale(&ratio) * &Scalar::sqrt(&inner)
        }
        SystemKind::Coul2d => {
            let top = int(l + k) + half();
            let lead = &Scalar::sqrt(&int(2)).pow(k as i32).unwrap() * &Scalar::rational(rational_pow(&top, k));
            let ratio = double_factorial_q(2 * l + 2 * k - 1) / (two_k * double_factorial_q(2 * l - 1));
            let inner = factorial_q((2 * l + k) as u64) / (factorial_q(k as u64) * factorial_q((2 * l + 2 * k) as u64));
            &lead.scale(&ratio) * &Scalar::sqrt(&inner)
        }
    }
}

/// One cell of the factorization-chain diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainEntry {
    /// Hamiltonian index the state belongs to (`H_column`).
    pub column: u32,
    /// Auxiliary ground state it descends from (`H_row`); equal-row cells
    /// are degenerate.
    pub row: u32,
    /// Energy counted with all shifts down to column 0.
    pub energy: Rational,
}

/// The chain diagram up to `max_level`: cell `(j, r)` for `j <= r` is the
/// state of `H_j` obtained from the ground state of `H_r` by `r - j` raising
/// operators.
pub fn chain_energies(sys: SystemKind, max_level: u32) -> Vec<ChainEntry> {
    let mut out = Vec::new();
    for row in 0..=max_level {
        let energy = sys.ground_energy(row) + sys.chain_shift() * int(row as i64);
        for column in 0..=row {
            out.push(ChainEntry { column, row, energy: energy.clone() });
        }
    }
    out
}

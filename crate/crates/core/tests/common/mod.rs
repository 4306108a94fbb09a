//! Independent oracles and generators shared by the integration tests.
#![allow(dead_code)]

use ladderkit::num::Rational;
use ladderkit::{FunctionFactor, OpExpr, Poly, QuantumNumbers, Scalar, SystemKind};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn z(n: i64) -> Rational {
    q(n, 1)
}

pub fn fact(n: i64) -> Rational {
    (1..=n).fold(Rational::one(), |acc, j| acc * z(j))
}

pub fn dfact(n: i64) -> Rational {
    let mut acc = Rational::one();
    let mut j = n;
    while j > 1 {
        acc *= z(j);
        j -= 2;
    }
    acc
}

pub fn qpow(b: &Rational, e: i64) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..e.abs() {
        acc *= b;
    }
    if e < 0 {
        acc.recip()
    } else {
        acc
    }
}

/// `H_n(y) = n! sum_m (-1)^m (2y)^(n-2m) / (m! (n-2m)!)`
pub fn hermite_oracle(n: i64) -> Poly<Rational> {
    let mut c = vec![Rational::zero(); n as usize + 1];
    for m in 0..=n / 2 {
        let sign = if m % 2 == 0 { z(1) } else { z(-1) };
        c[(n - 2 * m) as usize] = sign * fact(n) * qpow(&z(2), n - 2 * m) / (fact(m) * fact(n - 2 * m));
    }
    Poly::new(c)
}

/// Laguerre polynomials from the three-term recurrence, started at
/// `L_0 = 1`, `L_1 = 1 + a - u`.
pub fn laguerre_oracle(k: i64, a: &Rational) -> Poly<Rational> {
    let mut prev = Poly::<Rational>::zero();
    let mut cur = Poly::<Rational>::one();
    for m in 1..=k {
        let mq = z(m);
        let lin = Poly::new(vec![&mq * z(2) + a - z(1), z(-1)]);
        let next = lin.mul(&cur).sub(&prev.scale(&(&mq + a - z(1)))).scale(&mq.recip());
        prev = cur;
        cur = next;
    }
    cur
}

pub fn alpha_oracle(sys: SystemKind, level: u32) -> Rational {
    let l = z(level as i64);
    match sys {
        SystemKind::Osc3d => l + q(1, 2),
        SystemKind::Coul3d => l * z(2) + z(1),
        SystemKind::Osc2d => l,
        SystemKind::Coul2d => l * z(2),
        SystemKind::Sho1d => unreachable!(),
    }
}

pub fn reference_oracle(sys: SystemKind, qn: QuantumNumbers) -> Poly<Rational> {
    match sys {
        SystemKind::Sho1d => hermite_oracle(qn.k as i64),
        _ => laguerre_oracle(qn.k as i64, &alpha_oracle(sys, qn.level)),
    }
}

/// Principal number and energy law per system.
pub fn energy_oracle(sys: SystemKind, qn: QuantumNumbers) -> Rational {
    let (l, k) = (qn.level as i64, qn.k as i64);
    match sys {
        SystemKind::Sho1d => z(k) + q(1, 2),
        SystemKind::Osc3d => z(l + 2 * k) + q(3, 2),
        SystemKind::Osc2d => z(l + 2 * k + 1),
        SystemKind::Coul3d => {
            let n = z(l + k + 1);
            -(&n * &n * z(2)).recip()
        }
        SystemKind::Coul2d => {
            let n = z(l + k + 1) - q(1, 2);
            -(&n * &n * z(2)).recip()
        }
    }
}

/// Square of the closed-form chain normalization.
pub fn c_squared_oracle(sys: SystemKind, qn: QuantumNumbers) -> Rational {
    let (l, k) = (qn.level as i64, qn.k as i64);
    match sys {
        SystemKind::Sho1d => fact(k).recip(),
        SystemKind::Osc3d | SystemKind::Osc2d => (qpow(&z(2), k) * fact(k)).recip(),
        SystemKind::Coul3d => {
            let n = l + k + 1;
            let r = fact(n - 1) / fact(l);
            qpow(&z(2), k) * qpow(&z(n), 2 * k) * &r * &r * fact(n + l) / (fact(2 * n - 1) * fact(n - l - 1))
        }
        SystemKind::Coul2d => {
            let top = z(l + k) + q(1, 2);
            let r = dfact(2 * l + 2 * k - 1) / (qpow(&z(2), k) * dfact(2 * l - 1));
            qpow(&z(2), k) * qpow(&top, 2 * k) * &r * &r * fact(2 * l + k) / (fact(k) * fact(2 * l + 2 * k))
        }
    }
}

/// Square of the ground constant, and whether it carries `pi^(-1/2)`.
pub fn ground_squared_oracle(sys: SystemKind, level: u32) -> (Rational, bool) {
    let l = level as i64;
    match sys {
        SystemKind::Sho1d => (z(1), true),
        SystemKind::Osc3d => (qpow(&z(2), l + 2) / dfact(2 * l + 1), true),
        SystemKind::Coul3d => {
            let n = l + 1;
            (qpow(&q(2, n), 2 * n + 1) / fact(2 * n), false)
        }
        SystemKind::Osc2d => (z(2) / fact(l), false),
        SystemKind::Coul2d => (qpow(&(z(2) / (z(l) + q(1, 2))), 2 * l + 2) / fact(2 * l + 1), false),
    }
}

pub fn ground_oracle(sys: SystemKind, level: u32) -> Scalar {
    let (sq, pi) = ground_squared_oracle(sys, level);
    let root = Scalar::sqrt(&sq);
    if pi {
        &root * &Scalar::pi_pow(-1)
    } else {
        root
    }
}

/// Index grid of the acceptance criteria.
pub fn acceptance_grid(sys: SystemKind) -> Vec<QuantumNumbers> {
    let mut out = Vec::new();
    match sys {
        SystemKind::Sho1d => out.extend((0..=10).map(|n| QuantumNumbers::new(0, n))),
        SystemKind::Osc3d => {
            for l in 0..=10 {
                for k in 0..=(10 - l) / 2 {
                    out.push(QuantumNumbers::new(l, k));
                }
            }
        }
        SystemKind::Coul3d => {
            for n in 1..=8 {
                for l in 0..n {
                    out.push(QuantumNumbers::new(l, n - l - 1));
                }
            }
        }
        SystemKind::Osc2d | SystemKind::Coul2d => {
            for m in 0..=8 {
                for k in 0..=8 {
                    out.push(QuantumNumbers::new(m, k));
                }
            }
        }
    }
    out
}

pub fn random_rational(rng: &mut ChaCha8Rng, span: i64) -> Rational {
    q(rng.gen_range(-span..=span), rng.gen_range(1..=6))
}

pub fn random_scalar(rng: &mut ChaCha8Rng) -> Scalar {
    let g = ladderkit::Gaussian::new(
        random_rational(rng, 9),
        if rng.gen_bool(0.4) { random_rational(rng, 5) } else { Rational::zero() },
    );
    let radicand = [1, 1, 1, 2, 3, 6, 5][rng.gen_range(0..7)];
    let pi4 = [0, 0, 0, -1, -2, 1, 4][rng.gen_range(0..7)];
    let s = Scalar::new(g, &z(radicand), pi4);
    if s.is_zero() {
        Scalar::one()
    } else {
        s
    }
}

pub fn random_factor(rng: &mut ChaCha8Rng) -> FunctionFactor {
    FunctionFactor::new(
        q(rng.gen_range(-6..=6), rng.gen_range(1..=2)),
        q(rng.gen_range(-3..=1), 2),
        q(rng.gen_range(-4..=4), rng.gen_range(1..=3)),
    )
}

pub fn random_opexpr(rng: &mut ChaCha8Rng) -> OpExpr {
    let mut e = OpExpr::zero();
    for _ in 0..rng.gen_range(0..=4) {
        let s = random_scalar(rng);
        e.add_term(&s, random_factor(rng), rng.gen_range(0..=3));
    }
    e
}

const TOKENS: &[&str] = &[
    "x", "p", "i", "pi", "r", "rho", "sqrt(", "exp(", "A(", "Adag(", "H(", "sho1d", "coul3d", "(", ")", "[", "]", ",",
    "+", "-", "*", "/", "^", "2", "1", "0", "17", " ", "(1/2)", "(-1/4)",
];

/// Random input for the parser: raw bytes, token soup, or a mutated
/// valid expression.
pub fn fuzz_input(rng: &mut ChaCha8Rng, max_len: usize) -> String {
    let len = if rng.gen_ratio(1, 50) { max_len } else { 1usize << rng.gen_range(0..12) }.min(max_len);
    match rng.gen_range(0..3) {
        0 => {
            let bytes: Vec<u8> = (0..len).map(|_| rng.gen()).collect();
            String::from_utf8_lossy(&bytes).chars().take(len).collect()
        }
        1 => {
            let mut s = String::new();
            while s.len() < len {
                s.push_str(TOKENS[rng.gen_range(0..TOKENS.len())]);
            }
            s.truncate(len);
            s
        }
        _ => {
            let mut s = ladderkit::algebra::render::text(&random_opexpr(rng)).into_bytes();
            for _ in 0..rng.gen_range(0..4) {
                if s.is_empty() {
                    break;
                }
                let at = rng.gen_range(0..s.len());
                match rng.gen_range(0..3) {
                    0 => {
                        s.remove(at);
                    }
                    1 => s.insert(at, TOKENS[rng.gen_range(0..TOKENS.len())].as_bytes()[0]),
                    _ => s[at] = b"()[]^*-+,/"[rng.gen_range(0..10)],
                }
            }
            String::from_utf8(s).unwrap_or_default()
        }
    }
}

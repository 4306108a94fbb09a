//! Verification suites over the (system, level, k) grid, collected into a
//! deterministic report.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::algebra::{FunctionFactor, OpExpr};
use crate::error::Result;
use crate::num::{int, rat};
use crate::rodrigues::{laguerre_recur_check, rodrigues_equivalence, AlphaIndex};
use crate::scalar::Scalar;
use crate::systems::{
    closed_form_normalization, factorization_check, intertwine_check, normalization_constant, QuantumNumbers,
    SystemKind,
};
use crate::wavefunction::{
    build_by_rodrigues, build_coulomb3d_printed, coulomb3d_norm, derived_energy, eigencheck, ground_norm,
    ground_wavefunction, inner_product, printed_coulomb3d_norm, printed_ground_norm, routes_agree,
};

/// Version tag carried by every JSON document.
pub const SCHEMA: &str = "ladderkit/1";

/// Gram-matrix and ground-norm tolerance.
pub const QUADRATURE_TOL: f64 = 1e-8;

/// States per Gram matrix.
pub const GRAM_SIZE: u32 = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// A known discrepancy that was reproduced as expected.
    ExpectedMismatch,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::ExpectedMismatch => "expected-mismatch",
        }
    }
}

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub key: String,
    pub status: Status,
    pub detail: Option<String>,
    pub seconds: f64,
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub systems: Vec<SystemKind>,
    pub max_level: u32,
    pub seed: u64,
    pub compare_printed_coulomb: bool,
    pub timings: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            systems: SystemKind::ALL.to_vec(),
            max_level: crate::systems::DEFAULT_MAX_LEVEL,
            seed: 0,
            compare_printed_coulomb: false,
            timings: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub checks: Vec<CheckResult>,
    pub timings: bool,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn count(&self, s: Status) -> usize {
        self.checks.iter().filter(|c| c.status == s).count()
    }

    pub fn to_json(&self, cfg: &VerifyConfig) -> Value {
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| {
                let mut v = json!({"key": c.key, "status": c.status.name()});
                if let Some(d) = &c.detail {
                    v["detail"] = json!(d);
                }
                if self.timings {
                    v["seconds"] = json!(c.seconds);
                }
                v
            })
            .collect();
        json!({
            "schema": SCHEMA,
            "command": "verify",
            "config": {
                "systems": cfg.systems.iter().map(|s| s.name()).collect::<Vec<_>>(),
                "max_level": cfg.max_level,
                "seed": cfg.seed,
                "compare_printed_coulomb": cfg.compare_printed_coulomb,
            },
            "summary": {
                "total": self.checks.len(),
                "passed": self.count(Status::Pass),
                "failed": self.count(Status::Fail),
                "expected_mismatch": self.count(Status::ExpectedMismatch),
            },
            "checks": checks,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!("{:<18} {}", c.status.name(), c.key));
            if let Some(d) = &c.detail {
                out.push_str(&format!("  ({d})"));
            }
            if self.timings {
                out.push_str(&format!("  [{:.3}s]", c.seconds));
            }
            out.push('\n');
        }
        out.push_str(&format!(
            "{} checks: {} passed, {} failed, {} expected mismatches\n",
            self.checks.len(),
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::ExpectedMismatch)
        ));
        out
    }
}

type Job = Box<dyn Fn() -> (Status, Option<String>) + Send + Sync>;

fn verdict(ok: bool) -> (Status, Option<String>) {
    (if ok { Status::Pass } else { Status::Fail }, None)
}

fn from_result(r: Result<bool>) -> (Status, Option<String>) {
    match r {
        Ok(ok) => verdict(ok),
        Err(e) => (Status::Fail, Some(e.to_string())),
    }
}

/// States of `sys` whose principal number is at most `max`.
pub fn state_grid(sys: SystemKind, max: u32) -> Vec<QuantumNumbers> {
    let mut out = Vec::new();
    for level in 0..=max {
        if sys == SystemKind::Sho1d && level > 0 {
            break;
        }
        for k in 0..=max {
            let qn = QuantumNumbers::new(level, k);
            if qn.principal(sys) <= max {
                out.push(qn);
            }
        }
    }
    out
}

fn key(suite: &str, sys: SystemKind, qn: Option<QuantumNumbers>, level: Option<u32>) -> String {
    match (qn, level) {
        (Some(q), _) => format!("{suite}/{}/level={:02}/k={:02}", sys.name(), q.level, q.k),
        (None, Some(l)) => format!("{suite}/{}/level={l:02}", sys.name()),
        (None, None) => format!("{suite}/{}", sys.name()),
    }
}

/// Levels at which the Gram matrices are checked.
fn gram_levels(sys: SystemKind) -> Vec<u32> {
    if sys == SystemKind::Sho1d {
        vec![0]
    } else {
        vec![0, 1]
    }
}

/// Largest deviation of the Gram matrix from the identity.
pub fn gram_deviation(sys: SystemKind, level: u32, size: u32) -> Result<f64> {
    let states: Vec<_> =
        (0..size).map(|k| build_by_rodrigues(sys, QuantumNumbers::new(level, k))).collect::<Result<_>>()?;
    let pairs: Vec<(usize, usize)> = (0..states.len()).flat_map(|i| (i..states.len()).map(move |j| (i, j))).collect();
    let devs: Vec<f64> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let target = if i == j { 1.0 } else { 0.0 };
            inner_product(&states[i], &states[j]).map(|v| (v - target).abs())
        })
        .collect::<Result<_>>()?;
    Ok(devs.into_iter().fold(0.0, f64::max))
}

fn random_factor(rng: &mut ChaCha8Rng) -> FunctionFactor {
    FunctionFactor::new(
        rat(rng.gen_range(-4..=4), rng.gen_range(1..=2)),
        rat(rng.gen_range(-2..=0), 2),
        int(rng.gen_range(-1..=1)),
    )
}

fn random_expr(rng: &mut ChaCha8Rng) -> OpExpr {
    let mut e = OpExpr::zero();
    for _ in 0..rng.gen_range(1..=3) {
        let c = Scalar::rational(rat(rng.gen_range(-5..=5), rng.gen_range(1..=3)));
        e.add_term(&c, random_factor(rng), rng.gen_range(0..=2));
    }
    e
}

fn jacobi_holds(a: &OpExpr, b: &OpExpr, c: &OpExpr) -> bool {
    let t1 = a.commutator(&b.commutator(c));
    let t2 = b.commutator(&c.commutator(a));
    let t3 = c.commutator(&a.commutator(b));
    (&(&t1 + &t2) + &t3).is_zero()
}

fn adjoint_reverses(a: &OpExpr, b: &OpExpr) -> bool {
    a.mul(b).adjoint() == b.adjoint().mul(&a.adjoint())
}

fn jobs(cfg: &VerifyConfig) -> Vec<(String, Job)> {
    let mut out: Vec<(String, Job)> = Vec::new();
    let max = cfg.max_level;
    for &sys in &cfg.systems {
        for level in 0..=max {
            out.push((
                key("factorization", sys, None, Some(level)),
                Box::new(move || verdict(factorization_check(sys, level))),
            ));
            out.push((
                key("intertwining", sys, None, Some(level)),
                Box::new(move || verdict(intertwine_check(sys, level))),
            ));
        }
        for qn in state_grid(sys, max) {
            out.push((
                key("rodrigues", sys, Some(qn), None),
                Box::new(move || from_result(rodrigues_equivalence(sys, qn))),
            ));
            if let Some(alpha) = AlphaIndex::for_system(sys, qn.level) {
                out.push((
                    key("recurrence", sys, Some(qn), None),
                    Box::new(move || verdict(laguerre_recur_check(qn.k, &alpha).all())),
                ));
            }
            out.push((
                key("normalization", sys, Some(qn), None),
                Box::new(move || verdict(normalization_constant(sys, qn) == closed_form_normalization(sys, qn))),
            ));
            out.push((key("routes", sys, Some(qn), None), Box::new(move || from_result(routes_agree(sys, qn)))));
            out.push((
                key("eigen", sys, Some(qn), None),
                Box::new(move || {
                    let w = match build_by_rodrigues(sys, qn) {
                        Ok(w) => w,
                        Err(e) => return (Status::Fail, Some(e.to_string())),
                    };
                    let law = sys.energy_law(qn);
                    match derived_energy(&w) {
                        Some(e) if e == law && eigencheck(&w) => (Status::Pass, None),
                        Some(e) => (Status::Fail, Some(format!("derived {e}, law {law}"))),
                        None => (Status::Fail, Some("nonzero residual".into())),
                    }
                }),
            ));
        }
        let top_ground = if sys == SystemKind::Sho1d { 0 } else { max };
        for level in 0..=top_ground {
            out.push((
                key("ground-norm", sys, None, Some(level)),
                Box::new(move || {
                    if ground_norm(sys, level).value != printed_ground_norm(sys, level) {
                        return (Status::Fail, Some("exact constant differs from closed form".into()));
                    }
                    match ground_wavefunction(sys, level).and_then(|g| inner_product(&g, &g)) {
                        Ok(v) if (v - 1.0).abs() < QUADRATURE_TOL => (Status::Pass, None),
                        Ok(v) => (Status::Fail, Some(format!("quadrature norm {v}"))),
                        Err(e) => (Status::Fail, Some(e.to_string())),
                    }
                }),
            ));
        }
        for level in gram_levels(sys) {
            out.push((
                key("orthonormality", sys, None, Some(level)),
                Box::new(move || match gram_deviation(sys, level, GRAM_SIZE) {
                    Ok(d) if d < QUADRATURE_TOL => (Status::Pass, None),
                    Ok(d) => (Status::Fail, Some(format!("max deviation {d:e}"))),
                    Err(e) => (Status::Fail, Some(e.to_string())),
                }),
            ));
        }
        if sys == SystemKind::Coul3d && cfg.compare_printed_coulomb {
            out.push(("coulomb-prefactor/printed".into(), Box::new(printed_coulomb_entry)));
            out.push(("coulomb-prefactor/rederived".into(), Box::new(rederived_coulomb_entry)));
        }
    }
    // seeded identity checks on random operators
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for i in 0..16 {
        let (a, b, c) = (random_expr(&mut rng), random_expr(&mut rng), random_expr(&mut rng));
        out.push((format!("random/jacobi/{i:02}"), Box::new(move || verdict(jacobi_holds(&a, &b, &c)))));
        let (a, b) = (random_expr(&mut rng), random_expr(&mut rng));
        out.push((format!("random/adjoint/{i:02}"), Box::new(move || verdict(adjoint_reverses(&a, &b)))));
    }
    out
}

/// Norm of the ground Coulomb state with the printed prefactor; the
/// expected value is 1/2, not 1.
fn printed_coulomb_entry() -> (Status, Option<String>) {
    let qn = QuantumNumbers::new(0, 0);
    match build_coulomb3d_printed(qn).and_then(|w| inner_product(&w, &w)) {
        Ok(v) if (v - 0.5).abs() < QUADRATURE_TOL => (
            Status::ExpectedMismatch,
            Some(format!(
                "printed prefactor uses (n+1)! where (n+l)! is needed; <psi_10|psi_10> = {v:.10}, constant {} vs {}",
                printed_coulomb3d_norm(qn),
                coulomb3d_norm(qn)
            )),
        ),
        Ok(v) => (Status::Fail, Some(format!("printed prefactor norm {v}, expected 0.5"))),
        Err(e) => (Status::Fail, Some(e.to_string())),
    }
}

fn rederived_coulomb_entry() -> (Status, Option<String>) {
    match build_by_rodrigues(SystemKind::Coul3d, QuantumNumbers::new(0, 0)).and_then(|w| inner_product(&w, &w)) {
        Ok(v) if (v - 1.0).abs() < QUADRATURE_TOL => (Status::Pass, Some(format!("<psi_10|psi_10> = {v:.10}"))),
        Ok(v) => (Status::Fail, Some(format!("norm {v}"))),
        Err(e) => (Status::Fail, Some(e.to_string())),
    }
}

/// Runs every suite in parallel; results are sorted by key.
pub fn run(cfg: &VerifyConfig) -> Report {
    let mut checks: Vec<CheckResult> = jobs(cfg)
        .into_par_iter()
        .map(|(key, job)| {
            let start = Instant::now();
            let (status, detail) = job();
            CheckResult { key, status, detail, seconds: start.elapsed().as_secs_f64() }
        })
        .collect();
    checks.sort_by(|a, b| a.key.cmp(&b.key));
    Report { checks, timings: cfg.timings }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_passes_and_is_deterministic() {
        let cfg = VerifyConfig { max_level: 3, seed: 7, ..VerifyConfig::default() };
        let a = run(&cfg);
        assert!(a.passed(), "{}", a.to_text());
        let b = run(&cfg);
        assert_eq!(a.to_json(&cfg).to_string(), b.to_json(&cfg).to_string());
        assert!(a.checks.windows(2).all(|w| w[0].key < w[1].key));
    }

    #[test]
    fn printed_coulomb_is_flagged() {
        let cfg = VerifyConfig {
            systems: vec![SystemKind::Coul3d],
            max_level: 2,
            compare_printed_coulomb: true,
            ..VerifyConfig::default()
        };
        let r = run(&cfg);
        assert!(r.passed());
        assert_eq!(r.count(Status::ExpectedMismatch), 1);
        let entry = r.checks.iter().find(|c| c.key == "coulomb-prefactor/printed").unwrap();
        assert!(entry.detail.as_ref().unwrap().contains("(n+1)!"));
    }

    #[test]
    fn grid_sizes() {
        assert_eq!(state_grid(SystemKind::Sho1d, 10).len(), 11);
        // n <= 3: (0,0) (0,1) (0,2) (1,0) (1,1) (2,0)
        assert_eq!(state_grid(SystemKind::Coul3d, 3).len(), 6);
    }
}

//! Acceptance criteria 1 to 10. Runs without the libtest harness so every
//! criterion prints its own pass/fail line.

mod common;

use std::panic;
use std::process::ExitCode;
use std::time::Instant;

use common::*;
use ladderkit::algebra::render::text;
use ladderkit::dsl::{self, parse};
use ladderkit::rodrigues::{
    coulomb2d_chain_check, laguerre_recur_check, reference_polynomial, rodrigues_nested, AlphaIndex,
};
use ladderkit::systems::{factorization_check, intertwine_check, normalization_constant};
use ladderkit::verify::{gram_deviation, run, Status, VerifyConfig};
use ladderkit::wavefunction::{
    build_by_ladder, build_by_rodrigues, build_coulomb3d_printed, derived_energy, eigencheck, ground_norm,
    ground_wavefunction, inner_product,
};
use ladderkit::{QuantumNumbers, Scalar, SystemKind};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const IDENTITY_LEVELS: u32 = 8;
const IDENTITY_SECONDS: f64 = 10.0;
const RODRIGUES_SECONDS: f64 = 60.0;
const QUADRATURE_SECONDS: f64 = 120.0;
const GROUND_TOL: f64 = 1e-8;
const GRAM_TOL: f64 = 1e-8;
const GRAM_SIZE: u32 = 6;
const GRAM_LEVELS: u32 = 3;
const PREFACTOR_TOL: f64 = 1e-8;
const ROUND_TRIPS: usize = 300;
const FUZZ_CASES: usize = 10_000;
const FUZZ_MAX_LEN: usize = 64 * 1024;
const SEED: u64 = 20_241_015;

type Criterion = (&'static str, fn() -> Verdict);

struct Verdict {
    pass: bool,
    note: String,
}

fn verdict(failures: Vec<String>, note: impl Into<String>) -> Verdict {
    let pass = failures.is_empty();
    let note = if pass { note.into() } else { format!("{} failures, first: {}", failures.len(), failures[0]) };
    Verdict { pass, note }
}

fn within(v: Verdict, start: Instant, limit: f64) -> Verdict {
    let secs = start.elapsed().as_secs_f64();
    if v.pass && secs >= limit {
        Verdict { pass: false, note: format!("took {secs:.1}s, limit {limit}s") }
    } else {
        v
    }
}

fn grid_states() -> Vec<(SystemKind, QuantumNumbers)> {
    SystemKind::ALL.iter().flat_map(|&s| acceptance_grid(s).into_iter().map(move |qn| (s, qn))).collect()
}

fn c1_factorization() -> Verdict {
    let start = Instant::now();
    let mut bad = Vec::new();
    for sys in SystemKind::ALL {
        for level in 0..=IDENTITY_LEVELS {
            if !factorization_check(sys, level) {
                bad.push(format!("factorization {sys} level {level}"));
            }
            if !intertwine_check(sys, level) {
                bad.push(format!("intertwining {sys} level {level}"));
            }
        }
    }
    within(verdict(bad, "5 systems, levels 0-8, residuals exactly zero"), start, IDENTITY_SECONDS)
}

fn c2_rodrigues() -> Verdict {
    let start = Instant::now();
    let mut bad = Vec::new();
    let states = grid_states();
    for &(sys, qn) in &states {
        match rodrigues_nested(sys, qn) {
            Ok(p) => {
                let degree_ok = p.degree() == qn.k as usize;
                if p.poly != reference_oracle(sys, qn) || p != reference_polynomial(sys, qn) || !degree_ok {
                    bad.push(format!("{sys} {qn:?}"));
                }
            }
            Err(e) => bad.push(format!("{sys} {qn:?}: {e}")),
        }
    }
    within(verdict(bad, format!("{} states equal the recurrence polynomials", states.len())), start, RODRIGUES_SECONDS)
}

fn c3_recurrences() -> Verdict {
    let mut bad = Vec::new();
    let mut n = 0;
    for (sys, qn) in grid_states() {
        let Some(alpha) = AlphaIndex::for_system(sys, qn.level) else { continue };
        n += 1;
        if !laguerre_recur_check(qn.k, &alpha).all() {
            bad.push(format!("{sys} {qn:?}"));
        }
    }
    for m in 1..=8 {
        for k in 0..=8 {
            n += 1;
            if !coulomb2d_chain_check(k, m) {
                bad.push(format!("2D chain identity m={m} k={k}"));
            }
        }
    }
    verdict(bad, format!("{n} index pairs"))
}

fn c4_spectra() -> Verdict {
    let mut bad = Vec::new();
    for (sys, qn) in grid_states() {
        let law = energy_oracle(sys, qn);
        let derived = build_by_rodrigues(sys, qn).ok().and_then(|w| derived_energy(&w));
        if derived.as_ref() != Some(&law) || sys.energy(qn) != law {
            bad.push(format!("{sys} {qn:?}: derived {derived:?}, law {law}"));
        }
    }
    verdict(bad, "derived eigenvalues equal the energy laws")
}

fn c5_normalization() -> Verdict {
    let mut bad = Vec::new();
    for (sys, qn) in grid_states() {
        if normalization_constant(sys, qn) != Scalar::sqrt(&c_squared_oracle(sys, qn)) {
            bad.push(format!("{sys} {qn:?}"));
        }
    }
    verdict(bad, "chain products equal the closed forms")
}

fn c6_ground() -> Verdict {
    let start = Instant::now();
    let mut bad = Vec::new();
    let mut worst: f64 = 0.0;
    for sys in SystemKind::ALL {
        let top = if sys == SystemKind::Sho1d { 0 } else { IDENTITY_LEVELS };
        for level in 0..=top {
            if ground_norm(sys, level).value != ground_oracle(sys, level) {
                bad.push(format!("{sys} level {level}: exact constant"));
            }
            match ground_wavefunction(sys, level).and_then(|g| inner_product(&g, &g)) {
                Ok(v) => {
                    worst = worst.max((v - 1.0).abs());
                    if (v - 1.0).abs() >= GROUND_TOL {
                        bad.push(format!("{sys} level {level}: norm {v}"));
                    }
                }
                Err(e) => bad.push(format!("{sys} level {level}: {e}")),
            }
        }
    }
    within(verdict(bad, format!("max |norm - 1| = {worst:.1e}")), start, QUADRATURE_SECONDS)
}

fn c7_eigen() -> Verdict {
    let mut bad = Vec::new();
    for (sys, qn) in grid_states() {
        let ok = [build_by_rodrigues(sys, qn), build_by_ladder(sys, qn)]
            .into_iter()
            .all(|w| w.map(|w| eigencheck(&w)).unwrap_or(false));
        if !ok {
            bad.push(format!("{sys} {qn:?}"));
        }
    }
    verdict(bad, "H psi - E psi is zero for both routes")
}

fn c8_gram() -> Verdict {
    let start = Instant::now();
    let mut bad = Vec::new();
    let mut worst: f64 = 0.0;
    for sys in SystemKind::ALL {
        let levels = if sys == SystemKind::Sho1d { 1 } else { GRAM_LEVELS };
        for level in 0..levels {
            match gram_deviation(sys, level, GRAM_SIZE) {
                Ok(d) => {
                    worst = worst.max(d);
                    if d >= GRAM_TOL {
                        bad.push(format!("{sys} level {level}: {d:e}"));
                    }
                }
                Err(e) => bad.push(format!("{sys} level {level}: {e}")),
            }
        }
    }
    within(verdict(bad, format!("6x6 Gram matrices, max deviation {worst:.1e}")), start, QUADRATURE_SECONDS)
}

fn c9_printed_prefactor() -> Verdict {
    let qn = QuantumNumbers::new(0, 0);
    let printed = build_coulomb3d_printed(qn).and_then(|w| inner_product(&w, &w));
    let fixed = build_by_rodrigues(SystemKind::Coul3d, qn).and_then(|w| inner_product(&w, &w));
    let cfg = VerifyConfig {
        systems: vec![SystemKind::Coul3d],
        max_level: 1,
        compare_printed_coulomb: true,
        ..VerifyConfig::default()
    };
    let report = run(&cfg);
    let named = report
        .checks
        .iter()
        .any(|c| c.status == Status::ExpectedMismatch && c.detail.as_deref().is_some_and(|d| d.contains("(n+1)!")));
    match (printed, fixed) {
        (Ok(p), Ok(f)) => {
            let pass = (p - 0.5).abs() < PREFACTOR_TOL && (f - 1.0).abs() < PREFACTOR_TOL && named;
            Verdict {
                pass,
                note: format!("printed (n+1)! prefactor gives {p:.10}, (n+l)! gives {f:.10}, report names it: {named}"),
            }
        }
        (p, f) => Verdict { pass: false, note: format!("{p:?} {f:?}") },
    }
}

fn c10_dsl() -> Verdict {
    let mut bad = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for _ in 0..ROUND_TRIPS {
        let e = random_opexpr(&mut rng);
        let t = text(&e);
        match dsl::evaluate(&t) {
            Ok(back) if back == e => {}
            other => bad.push(format!("round trip of `{t}`: {other:?}")),
        }
    }
    let prev_hook = panic::take_hook();
    panic::set_hook(Box::new(|_| {}));
    let mut crashes = 0;
    for _ in 0..FUZZ_CASES {
        let input = fuzz_input(&mut rng, FUZZ_MAX_LEN);
        let outcome = panic::catch_unwind(|| match parse(&input) {
            Ok(_) => {
                let _ = dsl::evaluate(&input);
                true
            }
            Err(e) => e.offset <= input.len(),
        });
        match outcome {
            Ok(true) => {}
            Ok(false) => bad.push(format!("bad error offset for {:?}", input.chars().take(40).collect::<String>())),
            Err(_) => crashes += 1,
        }
    }
    panic::set_hook(prev_hook);
    if crashes > 0 {
        bad.push(format!("{crashes} crashes"));
    }
    let example = dsl::evaluate("[p, exp(-x^2)]").map(|e| text(&e));
    if example.as_deref() != Ok("2*i*x*exp(-x^2)") {
        bad.push(format!("commutator example gave {example:?}"));
    }
    verdict(bad, format!("{ROUND_TRIPS} round trips, {FUZZ_CASES} fuzz inputs, 0 crashes"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("factorization and intertwining identities", c1_factorization),
        ("operator Rodrigues equivalence", c2_rodrigues),
        ("Laguerre recurrences", c3_recurrences),
        ("spectra", c4_spectra),
        ("normalization constants", c5_normalization),
        ("ground-state constants", c6_ground),
        ("symbolic eigencheck", c7_eigen),
        ("numeric orthonormality", c8_gram),
        ("printed Coulomb prefactor", c9_printed_prefactor),
        ("expression language", c10_dsl),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = f();
        let secs = start.elapsed().as_secs_f64();
        if !v.pass {
            failed += 1;
        }
        println!("criterion {:>2} {} {name} [{secs:.2}s]: {}", i + 1, if v.pass { "PASS" } else { "FAIL" }, v.note);
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

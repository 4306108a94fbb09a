use std::io::{self, BufRead};

use ladderkit::algebra::render::{latex, latex_scalar, render, scalar_text};
use ladderkit::algebra::Format;
use ladderkit::dsl::{self, DslError};
use ladderkit::highprec::scalar_to_float;
use ladderkit::rodrigues::{family_name, rodrigues_nested};
use ladderkit::systems::{chain_energies, closed_form_normalization, normalization_constant};
use ladderkit::verify::{self, VerifyConfig, SCHEMA};
use ladderkit::wavefunction::{
    angular_factor, build_by_ladder, build_by_rodrigues, build_coulomb3d_printed, ground_norm, inner_product,
    ladder_phase, routes_agree,
};
use ladderkit::{Error, QuantumNumbers, Rational, SystemKind, Wavefunction};
use serde_json::{json, Value};

use crate::{ChainArgs, DeriveArgs, EvalArgs, ExprArgs, OutputFormat, StateArgs, TableArgs, VerifyArgs};

pub const UNITS_NOTE: &str = "units: hbar = M = omega = e^2 = a0 = 1; x stands for x, r and rho";

/// Successful run; `ok` selects exit code 0 or 1.
pub struct Outcome {
    pub stdout: String,
    pub ok: bool,
}

/// Bad input (exit code 2); `stdout` holds any partial output.
pub struct Failure {
    pub message: String,
    pub stdout: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { message: e.to_string(), stdout: String::new() }
    }
}

fn fail(message: impl Into<String>) -> Failure {
    Failure { message: message.into(), stdout: String::new() }
}

type Run = Result<Outcome, Failure>;

fn done(stdout: String, ok: bool) -> Run {
    Ok(Outcome { stdout, ok })
}

fn parse_system(name: &str) -> Result<SystemKind, Failure> {
    name.parse().map_err(|e: Error| fail(e.to_string()))
}

fn only(format: OutputFormat, allowed: &[OutputFormat], cmd: &str) -> Result<(), Failure> {
    if allowed.contains(&format) {
        Ok(())
    } else {
        Err(fail(format!("`{cmd}` does not support --format {format:?}").to_lowercase()))
    }
}

fn angular_level(sys: SystemKind, l: Option<u32>, m: Option<i64>) -> Result<u32, Failure> {
    match (sys.dimension(), l, m) {
        (1, None, None) => Ok(0),
        (1, _, _) => Err(fail("sho1d takes no --l or --m")),
        (3, l, None) => Ok(l.unwrap_or(0)),
        (3, _, Some(_)) => Err(fail("3D systems take --l, not --m")),
        (_, None, m) => {
            let m = m.unwrap_or(0).unsigned_abs();
            u32::try_from(m).map_err(|_| fail("--m out of range"))
        }
        (_, Some(_), _) => Err(fail("2D systems take --m, not --l")),
    }
}

/// Resolves flags to quantum numbers; `--n` is the principal number.
pub fn resolve_state(a: &StateArgs) -> Result<(SystemKind, QuantumNumbers), Failure> {
    let sys = parse_system(&a.system)?;
    let level = angular_level(sys, a.l, a.m)?;
    let qn = match (a.n, a.k) {
        (Some(n), Some(k)) => {
            let qn = QuantumNumbers::new(level, k);
            if qn.principal(sys) != n {
                return Err(fail(format!("--n {n} is inconsistent with --k {k} at level {level}")));
            }
            qn
        }
        (Some(n), None) => QuantumNumbers::from_principal(sys, n, level)?,
        (None, k) => QuantumNumbers::new(level, k.unwrap_or(0)),
    };
    Ok((sys, qn.check(sys, a.max_level)?))
}

fn state_label(sys: SystemKind, qn: QuantumNumbers) -> String {
    let n = qn.principal(sys);
    match sys.dimension() {
        1 => format!("n={n}"),
        3 => format!("n={n} l={} (k={})", qn.level, qn.k),
        _ => format!("m={} k={} (n={n})", qn.level, qn.k),
    }
}

fn state_json(sys: SystemKind, qn: QuantumNumbers) -> Value {
    json!({"level": qn.level, "k": qn.k, "n": qn.principal(sys)})
}

fn rational_text(q: &Rational) -> String {
    q.to_string()
}

fn decimal(s: &ladderkit::Scalar, bits: u32) -> Result<String, Failure> {
    Ok(scalar_to_float(s, bits)?.re_decimal())
}

fn wavefunction_text(w: &Wavefunction) -> String {
    render(w.expanded().parts(), Format::Text)
}

pub fn derive(a: &DeriveArgs) -> Run {
    only(a.format, &[OutputFormat::Text, OutputFormat::Json, OutputFormat::Latex], "derive")?;
    let (sys, qn) = resolve_state(&a.state)?;
    if a.precision < 53 {
        return Err(Error::Precision(a.precision).into());
    }
    let ladder = build_by_ladder(sys, qn)?;
    let rod = build_by_rodrigues(sys, qn)?;
    let agree = routes_agree(sys, qn)?;
    let energy = sys.energy(qn);
    let c = normalization_constant(sys, qn);
    let c_closed = closed_form_normalization(sys, qn) == c;
    let ground = ground_norm(sys, qn.level + qn.k).value;
    let (name, name_tex) = family_name(sys, qn);
    let norm_dec = decimal(&rod.norm, a.precision)?;
    let printed = if a.compare_printed_coulomb && sys == SystemKind::Coul3d {
        let p = build_coulomb3d_printed(qn)?;
        let sq = inner_product(&p, &p)?;
        Some((p.norm, sq))
    } else {
        None
    };
    let out = match a.format {
        OutputFormat::Json => {
            let mut v = json!({
                "schema": SCHEMA,
                "command": "derive",
                "system": sys.name(),
                "state": state_json(sys, qn),
                "energy": rational_text(&energy),
                "normalization": c.to_json(),
                "normalization_matches_closed_form": c_closed,
                "ground_norm": ground.to_json(),
                "polynomial": {"name": name, "value": rod.poly.to_json()},
                "norm_decimal": norm_dec,
                "rodrigues": rod.to_json(),
                "ladder": ladder.to_json(),
                "routes_agree": agree,
            });
            if let Some(af) = angular_factor(sys) {
                v["angular_factor"] = af.to_json();
            }
            if let Some((pn, sq)) = &printed {
                v["printed_coulomb"] = json!({"norm": pn.to_json(), "norm_squared": sq});
            }
            format!("{}\n", serde_json::to_string_pretty(&v).expect("json"))
        }
        OutputFormat::Latex => {
            let mut s = format!("% {UNITS_NOTE}\n");
            s.push_str(&format!("E = {}\n", latex_scalar(&ladderkit::Scalar::rational(energy.clone()))));
            s.push_str(&format!("C = {}\n", latex_scalar(&c)));
            s.push_str(&format!("{name_tex}(u) = {}, \\quad u = {}\n", rod.poly.latex(), rod.poly.arg.describe()));
            s.push_str(&format!("\\psi = {}\n", latex(rod.expanded().parts())));
            s
        }
        _ => {
            let mut s = format!("{UNITS_NOTE}\n");
            s.push_str(&format!("system: {}\n", sys.name()));
            s.push_str(&format!("state: {}\n", state_label(sys, qn)));
            s.push_str(&format!("energy: E = {}\n", rational_text(&energy)));
            s.push_str(&format!(
                "normalization: C = {} (closed form {})\n",
                scalar_text(&c),
                if c_closed { "agrees" } else { "DIFFERS" }
            ));
            s.push_str(&format!("ground norm: N = {}\n", scalar_text(&ground)));
            s.push_str(&format!("polynomial: {name}(u) = {}, u = {}\n", rod.poly, rod.poly.arg.describe()));
            s.push_str(&format!("norm: {} = {norm_dec}\n", scalar_text(&rod.norm)));
            if let Some(af) = angular_factor(sys) {
                s.push_str(&format!("angular factor: {} exp(i m phi), not included above\n", scalar_text(&af)));
            }
            s.push_str(&format!("rodrigues route: psi = {}\n", wavefunction_text(&rod)));
            s.push_str(&format!("ladder route: psi = {}\n", wavefunction_text(&ladder)));
            s.push_str(&format!("ladder phase: (-i)^{}\n", ladder_phase(sys, qn.k)));
            if let Some((pn, sq)) = &printed {
                s.push_str(&format!(
                    "printed prefactor: {} gives <psi|psi> = {sq:.10} (re-derived gives 1)\n",
                    scalar_text(pn)
                ));
            }
            s.push_str(&format!("routes agree: {}\n", if agree { "yes" } else { "no" }));
            s
        }
    };
    done(out, agree)
}

pub fn verify(a: &VerifyArgs) -> Run {
    only(a.format, &[OutputFormat::Text, OutputFormat::Json], "verify")?;
    let systems = if a.system == "all" { SystemKind::ALL.to_vec() } else { vec![parse_system(&a.system)?] };
    let cfg = VerifyConfig {
        systems,
        max_level: a.max_level,
        seed: a.seed,
        compare_printed_coulomb: a.compare_printed_coulomb,
        timings: a.timings,
    };
    let report = verify::run(&cfg);
    let out = match a.format {
        OutputFormat::Json => format!("{}\n", serde_json::to_string_pretty(&report.to_json(&cfg)).expect("json")),
        _ => format!("{UNITS_NOTE}\n{}", report.to_text()),
    };
    done(out, report.passed())
}

pub fn chain(a: &ChainArgs) -> Run {
    only(a.format, &[OutputFormat::Text, OutputFormat::Json, OutputFormat::Csv], "chain")?;
    let sys = parse_system(&a.system)?;
    let cells = chain_energies(sys, a.max_level);
    let rows: Vec<(u32, Rational, Vec<u32>)> = (0..=a.max_level)
        .map(|r| {
            let mine: Vec<_> = cells.iter().filter(|c| c.row == r).collect();
            (r, mine[0].energy.clone(), mine.iter().map(|c| c.column).collect())
        })
        .collect();
    let out = match a.format {
        OutputFormat::Json => {
            let rows: Vec<Value> = rows
                .iter()
                .map(|(r, e, cols)| json!({"row": r, "energy": rational_text(e), "columns": cols}))
                .collect();
            let v = json!({"schema": SCHEMA, "command": "chain", "system": sys.name(), "max_level": a.max_level, "rows": rows});
            format!("{}\n", serde_json::to_string_pretty(&v).expect("json"))
        }
        OutputFormat::Csv => {
            let mut s = String::from("row,column,energy\n");
            for c in &cells {
                s.push_str(&format!("{},{},{}\n", c.row, c.column, rational_text(&c.energy)));
            }
            s
        }
        _ => {
            let mut s = format!("{UNITS_NOTE}\n");
            s.push_str(&format!(
                "factorization chain of {}: row r holds the states built on the ground of H_r\n",
                sys.name()
            ));
            for (r, e, cols) in &rows {
                let hs: Vec<String> = cols.iter().map(|c| format!("H_{c}")).collect();
                s.push_str(&format!("row {r:>2}  E = {:<10} {}\n", rational_text(e), hs.join(" ")));
            }
            s
        }
    };
    done(out, true)
}

/// `start:end:step` with a positive step.
pub fn parse_points(spec: &str) -> Result<Vec<f64>, Failure> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || fail(format!("--points expects start:end:step, got `{spec}`"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let nums: Vec<f64> = parts.iter().map(|p| p.trim().parse::<f64>()).collect::<Result<_, _>>().map_err(|_| bad())?;
    let (a, b, h) = (nums[0], nums[1], nums[2]);
    if !(a.is_finite() && b.is_finite() && h.is_finite()) || h <= 0.0 || b < a {
        return Err(bad());
    }
    let count = ((b - a) / h + 1e-9).floor() as usize;
    if count > 1_000_000 {
        return Err(fail("--points would produce more than a million points"));
    }
    Ok((0..=count).map(|j| a + h * j as f64).collect())
}

pub fn eval(a: &EvalArgs) -> Run {
    only(a.format, &[OutputFormat::Csv, OutputFormat::Json, OutputFormat::Text], "eval")?;
    let (sys, qn) = resolve_state(&a.state)?;
    let points = parse_points(&a.points)?;
    let w = build_by_rodrigues(sys, qn)?;
    let values: Vec<(f64, f64, f64)> =
        points.iter().map(|&t| w.evaluate(t).map(|v| (t, v.re, v.im))).collect::<Result<_, _>>()?;
    let out = match a.format {
        OutputFormat::Json => {
            let pts: Vec<Value> = values.iter().map(|(t, re, im)| json!({"t": t, "re": re, "im": im})).collect();
            let v = json!({
                "schema": SCHEMA,
                "command": "eval",
                "system": sys.name(),
                "state": state_json(sys, qn),
                "wavefunction": w.to_json(),
                "points": pts,
            });
            format!("{}\n", serde_json::to_string_pretty(&v).expect("json"))
        }
        _ => {
            let mut s = String::from("t,re,im\n");
            for (t, re, im) in values {
                s.push_str(&format!("{t},{re},{im}\n"));
            }
            s
        }
    };
    done(out, true)
}

fn dsl_message(src: &str, e: &DslError) -> String {
    match e {
        DslError::Parse(p) => format!("{e}\n{}", p.caret(src)),
        _ => e.to_string(),
    }
}

pub fn expr(a: &ExprArgs) -> Run {
    only(a.format, &[OutputFormat::Text, OutputFormat::Latex, OutputFormat::Json], "expr")?;
    let inputs: Vec<String> = if a.exprs.is_empty() {
        io::stdin().lock().lines().collect::<Result<Vec<_>, _>>().map_err(|e| fail(e.to_string()))?
    } else {
        a.exprs.clone()
    };
    let format = match a.format {
        OutputFormat::Latex => Format::Latex,
        OutputFormat::Json => Format::Json,
        _ => Format::Text,
    };
    let mut out = String::new();
    let mut errors = Vec::new();
    for src in inputs.iter().filter(|s| !s.trim().is_empty()) {
        match dsl::evaluate(src) {
            Ok(e) => {
                out.push_str(&render(&e, format));
                out.push('\n');
            }
            Err(e) => errors.push(dsl_message(src, &e)),
        }
    }
    if errors.is_empty() {
        done(out, true)
    } else {
        Err(Failure { message: errors.join("\nerror: "), stdout: out })
    }
}

pub fn table(a: &TableArgs) -> Run {
    only(a.format, &[OutputFormat::Text, OutputFormat::Json, OutputFormat::Csv, OutputFormat::Latex], "table")?;
    let sys = parse_system(&a.system)?;
    let level = angular_level(sys, a.l, a.m)?;
    let states: Vec<QuantumNumbers> = (0..=a.max_level)
        .map(|k| QuantumNumbers::new(level, k).check(sys, ladderkit::systems::DEFAULT_MAX_LEVEL.max(a.max_level)))
        .collect::<Result<_, _>>()?;
    let polys = states.iter().map(|&qn| rodrigues_nested(sys, qn).map(|p| (qn, p))).collect::<Result<Vec<_>, _>>()?;
    let out = match a.format {
        OutputFormat::Json => {
            let rows: Vec<Value> = polys
                .iter()
                .map(|(qn, p)| json!({"name": family_name(sys, *qn).0, "k": qn.k, "polynomial": p.to_json()}))
                .collect();
            let v = json!({"schema": SCHEMA, "command": "table", "system": sys.name(), "level": level, "rows": rows});
            format!("{}\n", serde_json::to_string_pretty(&v).expect("json"))
        }
        OutputFormat::Csv => {
            let mut s = String::from("name,k,power,coefficient\n");
            for (qn, p) in &polys {
                let name = family_name(sys, *qn).0;
                for (j, c) in p.coeffs().iter().enumerate() {
                    s.push_str(&format!("{name},{},{j},{c}\n", qn.k));
                }
            }
            s
        }
        OutputFormat::Latex => {
            let mut s = format!("% {UNITS_NOTE}\n");
            for (qn, p) in &polys {
                s.push_str(&format!("{}(u) &= {} \\\\\n", family_name(sys, *qn).1, p.latex()));
            }
            s
        }
        OutputFormat::Text => {
            let mut s = format!("{UNITS_NOTE}\n");
            let u = match sys {
                SystemKind::Sho1d => "x",
                SystemKind::Osc2d | SystemKind::Osc3d => "x^2",
                SystemKind::Coul3d => "2x/n",
                SystemKind::Coul2d => "2x/(n-1/2)",
            };
            s.push_str(&format!("coefficients of u^0, u^1, ... with u = {u}\n"));
            for (qn, p) in &polys {
                let cs: Vec<String> = p.coeffs().iter().map(|c| c.to_string()).collect();
                s.push_str(&format!("{:<12} {}\n", family_name(sys, *qn).0, cs.join("  ")));
            }
            s
        }
    };
    done(out, true)
}

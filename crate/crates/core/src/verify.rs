//! Self-checking suites for the invariants the rest of the crate relies on.
//!
//! Every suite is deterministic (fixed seeds, fixed iteration order) and
//! reports the worst residual it saw next to the tolerance it was held to.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{
    bound_exact, bound_first_order, bound_strong, sweep_bounds, BoundInputs, SweepGrid,
};
use crate::error::{Error, Result};
use crate::hilbert::{encode_codeword, DensityMatrix, Factor, LogicalState, Operator};
use crate::measurement::{product_operators, sum_rule_defect, KrausLabel, KrausSet, Strength};
use crate::pauli::{paulis_up_to_weight, Pauli, PauliKind, Scope, StabilizerCode};
use crate::protocol::{build_bath_hamiltonian, build_one_local_coupling, Variant};
use crate::twolocal::{equivalence_residual, GateTable};

pub const ORDERING_SLACK: f64 = 1e-12;
pub const COLLAPSE_TOL: f64 = 1e-10;
pub const SLOPE_RANGE: (f64, f64) = (-2.1, -1.9);
pub const SUPPRESSION_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
pub const PSD_FLOOR: f64 = -1e-10;
pub const CONVEX_TOL: f64 = 1e-13;
pub const TWO_LOCAL_TOL: f64 = 1e-10;

/// Number of random codes enumerated by the half-lemma suite.
pub const HALF_LEMMA_CODES: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    /// A Pauli anticommuting with some generator anticommutes with half the group.
    HalfLemma,
    /// Kraus sum rules and trace/positivity of channel outputs.
    SumRule,
    /// One channel application scales a single-error commutator by `ζ^q`.
    Suppression,
    /// `ζ = 0` bounds equal the strong bound.
    Collapse,
    /// Generators bound ≥ group bound ≥ strong bound on both reference grids.
    Ordering,
    /// The first-order remainder falls off as `M^{-2}`.
    Slope,
    /// Gate construction reproduces the direct weak measurement.
    TwoLocal,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::HalfLemma,
        Suite::SumRule,
        Suite::Suppression,
        Suite::Collapse,
        Suite::Ordering,
        Suite::Slope,
        Suite::TwoLocal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::HalfLemma => "halflemma",
            Suite::SumRule => "sumrule",
            Suite::Suppression => "suppression",
            Suite::Collapse => "collapse",
            Suite::Ordering => "ordering",
            Suite::Slope => "slope",
            Suite::TwoLocal => "twolocal",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|v| v.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

/// Deliberate defects for checking that the suites can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Fault {
    /// The minus branch of the last measured operator in every product Kraus
    /// set is built with the plus sign.
    KrausSign,
}

impl FromStr for Fault {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "kraus-sign" | "kraus_sign" => Ok(Fault::KrausSign),
            other => Err(Error::Parse(format!("unknown fault {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Suites to run; empty means all of them.
    pub only: Vec<Suite>,
    pub fault: Option<Fault>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub suite: Suite,
    pub passed: bool,
    pub checks: usize,
    pub failures: usize,
    /// Worst value of the suite's figure of merit (a residual, or the fitted
    /// slope for [`Suite::Slope`]).
    pub worst: f64,
    pub tolerance: f64,
    pub detail: String,
}

/// Tally of a suite's individual checks.
struct Tally {
    suite: Suite,
    tolerance: f64,
    checks: usize,
    failures: usize,
    worst: f64,
    first_failure: Option<String>,
}

impl Tally {
    fn new(suite: Suite, tolerance: f64) -> Self {
        Tally {
            suite,
            tolerance,
            checks: 0,
            failures: 0,
            worst: 0.0,
            first_failure: None,
        }
    }

    /// Records a residual that must not exceed the tolerance.
    fn residual(&mut self, value: f64, what: impl FnOnce() -> String) {
        self.checks += 1;
        if value.is_nan() || value > self.worst {
            self.worst = value;
        }
        if !(value <= self.tolerance) {
            self.fail(format!("{} (residual {value:.3e})", what()));
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.fail(what());
        }
    }

    fn error(&mut self, e: Error, what: impl FnOnce() -> String) {
        self.checks += 1;
        self.fail(format!("{}: {e}", what()));
    }

    fn fail(&mut self, msg: String) {
        self.failures += 1;
        self.first_failure.get_or_insert(msg);
    }

    fn finish(self, summary: String) -> SuiteResult {
        let passed = self.failures == 0 && self.checks > 0;
        let detail = match self.first_failure {
            Some(f) => format!("{summary}; first failure: {f}"),
            None => summary,
        };
        SuiteResult {
            suite: self.suite,
            passed,
            checks: self.checks,
            failures: self.failures,
            worst: self.worst,
            tolerance: self.tolerance,
            detail,
        }
    }
}

pub fn run_suite(suite: Suite, fault: Option<Fault>) -> SuiteResult {
    match suite {
        Suite::HalfLemma => half_lemma(),
        Suite::SumRule => sum_rule(fault),
        Suite::Suppression => suppression(),
        Suite::Collapse => collapse(),
        Suite::Ordering => ordering(),
        Suite::Slope => slope(),
        Suite::TwoLocal => two_local(),
    }
}

/// Runs the selected suites in [`Suite::ALL`] order.
pub fn run_verification(options: &VerifyOptions) -> Vec<SuiteResult> {
    Suite::ALL
        .into_iter()
        .filter(|s| options.only.is_empty() || options.only.contains(s))
        .map(|s| run_suite(s, options.fault))
        .collect()
}

fn half_lemma() -> SuiteResult {
    let mut tally = Tally::new(Suite::HalfLemma, 0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let codes: Vec<StabilizerCode> = (0..HALF_LEMMA_CODES)
        .filter_map(|i| {
            let n = 2 + i % 4;
            let qbar = rng.gen_range(1..=n);
            StabilizerCode::random(n, qbar, &mut rng).ok()
        })
        .collect();
    tally.check(codes.len() == HALF_LEMMA_CODES, || "random code generation failed".into());
    for code in &codes {
        let paulis = match paulis_up_to_weight(code.n(), 2) {
            Ok(p) => p,
            Err(e) => {
                tally.error(e, || format!("enumerating Paulis on {} qubits", code.n()));
                continue;
            }
        };
        let half = code.group().len() / 2;
        for p in &paulis {
            let (gens, group) = match (
                code.anticommuting_count(p, Scope::Generators),
                code.anticommuting_count(p, Scope::Group),
            ) {
                (Ok(g), Ok(s)) => (g, s),
                (Err(e), _) | (_, Err(e)) => {
                    tally.error(e, || format!("counting for {p}"));
                    continue;
                }
            };
            let expected = if gens > 0 { half } else { 0 };
            tally.check(group == expected, || {
                format!("{p} anticommutes with {group} of {} elements", code.group().len())
            });
        }
    }
    let checks = tally.checks;
    tally.finish(format!("{} codes on 2..=5 qubits, {checks} Paulis of weight <= 2", codes.len()))
}

/// Seeded random density matrix `AA†/tr(AA†)` on `factors`.
fn random_state(factors: Vec<Factor>, rng: &mut ChaCha8Rng) -> Result<DensityMatrix> {
    let dim: usize = factors.iter().map(|f| f.dim()).product();
    let a = DMatrix::<Complex64>::from_fn(dim, dim, |_, _| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    let rho = &a * a.adjoint();
    let tr = rho.trace();
    DensityMatrix::new(Operator::new(factors, rho / tr)?)
}

/// Trace and positivity of one channel output.
fn check_output(tally: &mut Tally, set: &KrausSet, rho: &DensityMatrix, label: &str) {
    let out = match set.apply_operator(rho.operator()) {
        Ok(o) => o,
        Err(e) => return tally.error(e, || label.to_string()),
    };
    tally.residual((out.trace() - Complex64::new(1.0, 0.0)).norm(), || format!("{label}: trace"));
    match out.hermitian_eigenvalues() {
        Ok(ev) => {
            let min = ev[0];
            tally.check(min >= PSD_FLOOR, || format!("{label}: eigenvalue {min:.3e}"));
        }
        Err(e) => tally.error(e, || format!("{label}: hermiticity")),
    }
}

fn sum_rule(fault: Option<Fault>) -> SuiteResult {
    let mut tally = Tally::new(Suite::SumRule, TRACE_TOL);
    let bug = fault == Some(Fault::KrausSign);
    let strengths = [
        Strength::none(),
        Strength::Weak(0.5),
        Strength::Weak(1.0),
        Strength::Weak(3.0),
        Strength::Strong,
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    let mut codes = Vec::new();
    for n in [2, 4, 6] {
        match StabilizerCode::detection_code(n) {
            Ok(c) => codes.push(c),
            Err(e) => tally.error(e, || format!("[[{n}, {}, 2]] code", n - 2)),
        }
    }
    for (n, qbar) in [(3, 2), (4, 1), (4, 3), (5, 2)] {
        match StabilizerCode::random(n, qbar, &mut rng) {
            Ok(c) => codes.push(c),
            Err(e) => tally.error(e, || format!("random [[{n}, {}]] code", n - qbar)),
        }
    }
    let mut sets = 0usize;
    for code in &codes {
        let states: Vec<DensityMatrix> = {
            let mut v = Vec::new();
            for _ in 0..2 {
                match random_state(vec![Factor::System(2); code.n()], &mut rng) {
                    Ok(s) => v.push(s),
                    Err(e) => tally.error(e, || "random state".into()),
                }
            }
            v
        };
        let joint = random_state(
            vec![Factor::System(2); code.n()]
                .into_iter()
                .chain([Factor::Bath(2)])
                .collect(),
            &mut rng,
        );
        let mut families: Vec<(String, Vec<Pauli>, KrausLabel)> = vec![
            ("generators".into(), code.generators().to_vec(), KrausLabel::Generators),
            ("group".into(), code.nontrivial_elements().to_vec(), KrausLabel::Group),
        ];
        for g in code.generators() {
            families.push((format!("single {g}"), vec![g.clone()], KrausLabel::Single));
        }
        for s in strengths {
            for (name, measured, label) in &families {
                sets += 1;
                let what = || format!("n={} {name} eps={s}", code.n());
                let ops = match product_operators(measured, s, bug) {
                    Ok(o) => o,
                    Err(e) => {
                        tally.error(e, what);
                        continue;
                    }
                };
                match sum_rule_defect(&ops) {
                    Ok(d) => tally.residual(d, || format!("{}: sum rule", what())),
                    Err(e) => tally.error(e, what),
                }
                let set = match KrausSet::new(ops, *label) {
                    Ok(k) => k,
                    // Already counted as a sum-rule failure above.
                    Err(_) => continue,
                };
                for (i, rho) in states.iter().enumerate() {
                    check_output(&mut tally, &set, rho, &format!("{} state {i}", what()));
                }
                if let Ok(joint) = &joint {
                    match set.extend(&[Factor::Bath(2)]) {
                        Ok(ext) => check_output(&mut tally, &ext, joint, &format!("{} with bath", what())),
                        Err(e) => tally.error(e, what),
                    }
                }
                if *label == KrausLabel::Single {
                    convex_identity(&mut tally, &set, &measured[0], s, &states, &what());
                }
            }
        }
    }
    let checks = tally.checks;
    tally.finish(format!("{sets} Kraus sets over {} codes, {checks} checks", codes.len()))
}

/// `Σ K ρ K† = (1+ζ)/2 ρ + (1−ζ)/2 VρV` for a single involution `V`.
fn convex_identity(tally: &mut Tally, set: &KrausSet, v: &Pauli, s: Strength, states: &[DensityMatrix], what: &str) {
    let vm = match v.to_matrix() {
        Ok(m) => m,
        Err(e) => return tally.error(e, || what.to_string()),
    };
    let zeta = s.zeta();
    for rho in states {
        let out = match set.apply_operator(rho.operator()) {
            Ok(o) => o,
            Err(e) => return tally.error(e, || what.to_string()),
        };
        let flipped = vm.matrix() * rho.matrix() * vm.matrix();
        let expected = rho.matrix() * Complex64::new((1.0 + zeta) / 2.0, 0.0)
            + flipped * Complex64::new((1.0 - zeta) / 2.0, 0.0);
        let residual = (out.matrix() - expected).iter().map(|z| z.norm()).fold(0.0, f64::max);
        tally.checks += 1;
        tally.worst = tally.worst.max(residual);
        if !(residual <= CONVEX_TOL) {
            tally.fail(format!("{what}: convex identity (residual {residual:.3e})"));
        }
    }
}

/// `ρ_codeword ⊗ |0⟩⟨0|` on the `[[4,2,2]]` code with a one-qubit bath.
fn suppression_state(code: &StabilizerCode) -> Result<DensityMatrix> {
    encode_codeword(code, &LogicalState::Bits("0000".into()))?
        .tensor(&DensityMatrix::basis(vec![Factor::Bath(2)], 0)?)
}

fn suppression() -> SuiteResult {
    let mut tally = Tally::new(Suite::Suppression, SUPPRESSION_TOL);
    let setup = || -> Result<(StabilizerCode, DensityMatrix, Operator)> {
        let code = StabilizerCode::detection_code(4)?;
        let rho = suppression_state(&code)?;
        let bath_op = build_bath_hamiltonian(2, 11, 1.0)?;
        Ok((code, rho, bath_op))
    };
    let (code, rho, bath_op) = match setup() {
        Ok(s) => s,
        Err(e) => {
            tally.error(e, || "setup".into());
            return tally.finish("setup failed".into());
        }
    };
    for s in [Strength::Weak(0.5), Strength::Weak(2.0)] {
        let zeta = s.zeta();
        for variant in [Variant::Group, Variant::Generators] {
            let channel = match variant.kraus_set(&code, s).and_then(|k| {
                k.ok_or_else(|| Error::InvalidArgument("no channel".into()))?
                    .extend(&[Factor::Bath(2)])
            }) {
                Ok(k) => k,
                Err(e) => {
                    tally.error(e, || format!("{variant} channel"));
                    continue;
                }
            };
            for qubit in 0..4 {
                for kind in [PauliKind::X, PauliKind::Y, PauliKind::Z] {
                    let result = (|| -> Result<(Pauli, f64)> {
                        let e = Pauli::single(4, qubit, kind)?;
                        let power = match variant {
                            Variant::Group => code.q_cap().div_ceil(2),
                            _ => code.anticommuting_count(&e, Scope::Generators)?,
                        };
                        let expected = zeta.powi(power as i32);
                        let l = e.to_matrix()?.tensor(&bath_op)?.liouvillian(rho.operator())?;
                        if l.max_abs() < 1e-6 {
                            return Err(Error::ZeroOperator);
                        }
                        let out = channel.apply_operator(&l)?;
                        let residual = (out.matrix() - l.matrix() * Complex64::new(expected, 0.0))
                            .iter()
                            .map(|z| z.norm())
                            .fold(0.0, f64::max);
                        Ok((e, residual))
                    })();
                    match result {
                        Ok((e, r)) => tally.residual(r, || format!("{variant} E={e} eps={s}")),
                        Err(err) => tally.error(err, || format!("{variant} qubit {qubit} {kind:?} eps={s}")),
                    }
                }
            }
        }
    }
    tally.finish("12 one-local errors x {group, generators} x eps {0.5, 2}".into())
}

fn relative_gap(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

fn collapse() -> SuiteResult {
    let mut tally = Tally::new(Suite::Collapse, COLLAPSE_TOL);
    for (panel, grid) in [("left", SweepGrid::left_panel()), ("right", SweepGrid::right_panel())] {
        let j0 = grid.j0tau;
        for &m in &grid.m_values {
            for &lambda in &grid.lambdas {
                let j1 = lambda * j0;
                let strong = bound_strong(&BoundInputs::group(j0, j1, 1.0, m, grid.qbar, 0.0));
                for inputs in [
                    BoundInputs::group(j0, j1, 1.0, m, grid.qbar, 0.0),
                    BoundInputs::generators(j0, j1, 1.0, m, grid.qbar, 0.0),
                ] {
                    match (bound_exact(&inputs), strong.clone()) {
                        (Ok(b), Ok(s)) => tally.residual(relative_gap(b, s), || {
                            format!("{panel} M={m} lambda={lambda} q={}", inputs.q_small)
                        }),
                        (Err(e), _) | (_, Err(e)) => tally.error(e, || format!("{panel} M={m} lambda={lambda}")),
                    }
                }
            }
        }
    }
    let checks = tally.checks;
    tally.finish(format!("{checks} points on both reference grids at zeta = 0"))
}

fn ordering() -> SuiteResult {
    let mut tally = Tally::new(Suite::Ordering, ORDERING_SLACK);
    for (panel, grid) in [("left", SweepGrid::left_panel()), ("right", SweepGrid::right_panel())] {
        match sweep_bounds(&grid) {
            Ok(rows) => {
                for r in rows {
                    let excess = (r.group - r.generators).max(r.strong - r.group).max(0.0);
                    tally.residual(excess, || format!("{panel} M={} lambda={} zeta={}", r.m, r.lambda, r.zeta));
                }
            }
            Err(e) => tally.error(e, || format!("{panel} sweep")),
        }
    }
    let checks = tally.checks;
    tally.finish(format!("{checks} grid points, generators >= group >= strong"))
}

/// Least-squares slope of `ys` against `xs`.
pub fn fitted_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Log-log slope of `|B − B_first_order|` over `M = 2^6 … 2^12`.
pub fn remainder_slope(inputs: impl Fn(usize) -> BoundInputs) -> Result<f64> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for k in 6..=12 {
        let m = 1usize << k;
        let i = inputs(m);
        let gap = (bound_exact(&i)? - bound_first_order(&i)?).abs();
        if gap == 0.0 || !gap.is_finite() {
            return Err(Error::Numerical(format!("remainder {gap} at M = {m}")));
        }
        xs.push((m as f64).ln());
        ys.push(gap.ln());
    }
    Ok(fitted_slope(&xs, &ys))
}

fn slope() -> SuiteResult {
    let mut tally = Tally::new(Suite::Slope, SLOPE_RANGE.1);
    let mut summary = Vec::new();
    for (name, f) in [
        ("group", BoundInputs::group as fn(f64, f64, f64, usize, usize, f64) -> BoundInputs),
        ("generators", BoundInputs::generators),
    ] {
        match remainder_slope(|m| f(1.0, 0.1, 1.0, m, 4, 0.5)) {
            Ok(s) => {
                summary.push(format!("{name} {s:.4}"));
                tally.checks += 1;
                // Track the slope furthest from -2.
                if (s + 2.0).abs() > (tally.worst + 2.0).abs() || tally.checks == 1 {
                    tally.worst = s;
                }
                if !(SLOPE_RANGE.0..=SLOPE_RANGE.1).contains(&s) {
                    tally.fail(format!("{name} slope {s:.4}"));
                }
            }
            Err(e) => tally.error(e, || name.into()),
        }
    }
    tally.finish(format!("log-log slopes over M = 64..4096: {}", summary.join(", ")))
}

/// A joint codeword ⊗ bath state rotated slightly out of the code space by a
/// seeded one-local coupling.
pub fn perturbed_codeword(bits: &str, seed: u64, t: f64) -> Result<DensityMatrix> {
    let code = StabilizerCode::detection_code(bits.len())?;
    let sys = encode_codeword(&code, &LogicalState::Bits(bits.into()))?;
    let bath = DensityMatrix::basis(vec![Factor::Bath(2)], 0)?;
    let h = build_one_local_coupling(bits.len(), 2, seed, 1.0)?;
    sys.tensor(&bath)?.evolve(&h, t)
}

/// One row of the two-local pass/fail table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoLocalRow {
    pub v_hat: String,
    pub seed: u64,
    pub epsilon: Strength,
    pub residual: f64,
    pub pass: bool,
}

/// Residuals for every `V̂ ∈ {XXXX, ZZZZ, YYYY}`, seed and strength.
pub fn two_local_table(seeds: &[u64], strengths: &[Strength]) -> Result<Vec<TwoLocalRow>> {
    let mut cases = Vec::new();
    for v in ["XXXX", "ZZZZ", "YYYY"] {
        for &seed in seeds {
            for &s in strengths {
                cases.push((v, seed, s));
            }
        }
    }
    cases
        .par_iter()
        .map(|&(v, seed, s)| {
            let v_hat: Pauli = v.parse()?;
            let rho = perturbed_codeword("0000", seed, 0.3)?;
            let residual = equivalence_residual(&rho, &v_hat, s)?;
            Ok(TwoLocalRow {
                v_hat: v.into(),
                seed,
                epsilon: s,
                residual,
                pass: residual <= TWO_LOCAL_TOL,
            })
        })
        .collect()
}

pub const TWO_LOCAL_SEEDS: [u64; 3] = [1, 2, 3];
pub const TWO_LOCAL_STRENGTHS: [Strength; 3] = [Strength::Weak(0.5), Strength::Weak(2.0), Strength::Strong];

fn two_local() -> SuiteResult {
    let mut tally = Tally::new(Suite::TwoLocal, TWO_LOCAL_TOL);
    match GateTable::standard().verify() {
        Ok(r) => tally.residual(r, || "controlled-Pauli table".into()),
        Err(e) => tally.error(e, || "controlled-Pauli table".into()),
    }
    match two_local_table(&TWO_LOCAL_SEEDS, &TWO_LOCAL_STRENGTHS) {
        Ok(rows) => {
            for r in rows {
                tally.residual(r.residual, || format!("{} seed {} eps={}", r.v_hat, r.seed, r.epsilon));
            }
        }
        Err(e) => tally.error(e, || "two-local table".into()),
    }
    tally.finish("XXXX, ZZZZ, YYYY x 3 seeds x eps {0.5, 2, strong}".into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
        assert_eq!("kraus-sign".parse::<Fault>().unwrap(), Fault::KrausSign);
    }

    #[test]
    fn fast_suites_pass() {
        for s in [Suite::HalfLemma, Suite::Suppression, Suite::Collapse, Suite::Ordering, Suite::Slope] {
            let r = run_suite(s, None);
            assert!(r.passed, "{s}: {}", r.detail);
        }
    }

    #[test]
    fn sum_rule_catches_injected_fault() {
        let clean = run_suite(Suite::SumRule, None);
        assert!(clean.passed, "{}", clean.detail);
        let broken = run_suite(Suite::SumRule, Some(Fault::KrausSign));
        assert!(!broken.passed);
        assert!(broken.worst > 1e-3);
    }

    #[test]
    fn slope_fit_of_exact_power_law() {
        let xs: Vec<f64> = (1..6).map(|k| (k as f64).ln()).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 - 2.0 * x).collect();
        assert!((fitted_slope(&xs, &ys) + 2.0).abs() < 1e-12);
    }

    #[test]
    fn only_filter_selects_suites() {
        let r = run_verification(&VerifyOptions {
            only: vec![Suite::Collapse],
            fault: None,
        });
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].suite, Suite::Collapse);
    }
}

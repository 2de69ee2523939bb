//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! `cargo test -p ctxdim-cli --test acceptance` always exits 0 once every criterion has
//! been evaluated; append `-- --strict` to exit 1 when any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use ctxdim_cli::behavior_file::ProbabilityTableFile;
use ctxdim_cli::ChshTerms;
use ctxdim_core::canonical::{canonical_cglmp4_optimal_setup, canonical_cglmp4_separable_setup, optimal_measurements};
use ctxdim_core::eigen::{eigh, min_eigenvalue};
use ctxdim_core::linalg::{identity, max_norm, partial_transpose, CMatrix, Subsystem};
use ctxdim_core::random::{complex_gaussian, random_density_matrix, random_povm, rng_from_seed};
use ctxdim_core::{behavior_from, cglmp4, cglmp4_value, chsh, chsh_value, classical_max, ghjw_dilation, steer, Assemblage, Behavior, Povm, Scenario};
use ctxdim_photonics::experiment::{fitted_layout, phased_stations, tabulated_stations, ReferenceStates};
use ctxdim_photonics::setup::{ResolvedSetup, SetupFile};
use ctxdim_photonics::{monte_carlo, station_povm, FitOptions, Layout, MonteCarloSummary, NoiseModel};
use ctxdim_sdp::{solve, validate_solution, OptimalityTolerance, SdpProblem, SolveOptions, SolveStatus};
use ctxdim_seesaw::{optimize_preparations, run, SeesawConfig, SeesawRun};
use ctxdim_testkit::admm::{solve_admm, AdmmOptions};
use ctxdim_testkit::problems::random_feasible_problem;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

const A6_MEASURED: &str = include_str!("../fixtures/a6_measured.txt");
const A7_EXPECTED: &str = include_str!("../fixtures/a7_expected.txt");
const A7_MEASURED: &str = include_str!("../fixtures/a7_measured.txt");
const A8_EXPECTED: &str = include_str!("../fixtures/a8_expected.txt");
const A8_MEASURED: &str = include_str!("../fixtures/a8_measured.txt");
const ENTANGLED_SETUP: &str = include_str!("../fixtures/entangled.toml");
const CHSH_SETUP: &str = include_str!("../fixtures/chsh.toml");

const OPTIMUM: f64 = 0.36476;
const SEPARABLE_OPTIMUM: f64 = 0.33609;
const TABLE_VALUE_TOL: f64 = 5e-4;
const PPT_TOL: f64 = 1e-10;
const FAST_SECONDS: f64 = 1.0;

const A8_DISTINCT: [f64; 4] = [0.7833, 0.1050, 0.0547, 0.0569];
const A7_DISTINCT: [f64; 4] = [0.8211, 0.0453, 0.0324, 0.1012];
/// `(a, b, x, y)` of the misprinted A8 Expected entry.
const A8_TYPO: (usize, usize, usize, usize) = (3, 2, 1, 0);

const A6_PRINTED: f64 = 2.8021;
const A7_PRINTED: f64 = 0.3292;
const A8_PRINTED: f64 = 0.3631;
const PRINTED_TOL: f64 = 1e-4;
const FLOAT_SLACK: f64 = 1e-12;
const A7_INGEST_TOL: f64 = 0.06;
const A8_INGEST_TOL: f64 = 0.15;

const SDP_REFERENCE_TOL: f64 = 1e-4;
const SDP_PROBLEMS: u64 = 50;
const SDP_SECONDS: f64 = 60.0;

const SEESAW_SEED: u64 = 0;
const SEESAW_RESTARTS: usize = 50;
const SEESAW_PPT_FLOOR: f64 = 0.3355;
const SEESAW_FLOOR: f64 = 0.364;
const SEESAW_CEILING_SLACK: f64 = 1e-5;
const MONOTONE_SLACK: f64 = 1e-7;
const SEESAW_SECONDS: f64 = 480.0;

const SINGLE_SHOT_TOL: f64 = 1e-5;
const SINGLE_SHOT_SECONDS: f64 = 5.0;

const GHJW_ASSEMBLAGES: u64 = 100;
const GHJW_TOL: f64 = 1e-10;

const LOCAL_SAMPLES: usize = 1000;
const LOCAL_SEED: u64 = 314;
const QUBIT_SEED: u64 = 2718;
const BOUND_SLACK: f64 = 1e-9;
const QUBIT_SLACK: f64 = 1e-6;

const REPRODUCTION_TOL: f64 = 1e-3;
const COMPLETENESS_TOL: f64 = 1e-10;
const MC_SAMPLES: usize = 10_000;
const MC_SEED: u64 = 0;
const ENTANGLED_STD_BAND: (f64, f64) = (0.005, 0.02);
const CHSH_STD_BAND: (f64, f64) = (0.003, 0.02);
const COUNTS_TO_ANGLES: f64 = 10.0;
const PHOTONICS_SECONDS: f64 = 180.0;

struct Check {
    pass: bool,
    detail: String,
}

impl Check {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self { pass, detail: detail.into() }
    }
}

/// `parts` all have to pass.
fn all(parts: Vec<Check>) -> Check {
    let pass = parts.iter().all(|p| p.pass);
    let detail = parts.iter().map(|p| format!("{} {}", if p.pass { "ok" } else { "FAILED" }, p.detail)).collect::<Vec<_>>().join("; ");
    Check::new(pass, detail)
}

fn within(name: &str, got: f64, want: f64, tol: f64) -> Check {
    Check::new((got - want).abs() <= tol, format!("{name} = {got:.10} (target {want} ± {tol:e})"))
}

fn timed(limit: f64, seconds: f64) -> Check {
    Check::new(seconds < limit, format!("{seconds:.2} s (< {limit} s)"))
}

fn i4_of(setup: fn() -> ctxdim_core::Result<(Assemblage, Vec<Povm>)>) -> (f64, Assemblage, Behavior) {
    let (ass, povms) = setup().expect("canonical setup");
    let b = behavior_from(&ass, &povms).expect("behavior");
    (cglmp4().evaluate(&b).expect("functional"), ass, b)
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let (v, _, _) = i4_of(canonical_cglmp4_optimal_setup);
    all(vec![within("I4", v, OPTIMUM, TABLE_VALUE_TOL), timed(FAST_SECONDS, start.elapsed().as_secs_f64())])
}

fn criterion_2() -> Check {
    let start = Instant::now();
    let (v, ass, _) = i4_of(canonical_cglmp4_separable_setup);
    let worst = ass
        .sigmas()
        .iter()
        .flatten()
        .map(|s| min_eigenvalue(&partial_transpose(s.matrix(), Subsystem::First, (2, 2)).expect("2x2 split")))
        .fold(f64::INFINITY, f64::min);
    all(vec![
        within("I4", v, SEPARABLE_OPTIMUM, TABLE_VALUE_TOL),
        Check::new(worst >= -PPT_TOL, format!("min eigenvalue of partial transposes {worst:.3e}")),
        timed(FAST_SECONDS, start.elapsed().as_secs_f64()),
    ])
}

/// Entries of `text` not within `tol` of `4·p` at the same `(a, b, x, y)`.
fn positional_mismatches(text: &str, b: &Behavior, tol: f64) -> Vec<(usize, usize, usize, usize)> {
    let file = ProbabilityTableFile::parse(text).expect("fixture parses");
    Scenario::CGLMP4
        .keys()
        .filter(|&(a, bb, x, y)| file.entries[Scenario::CGLMP4.index(a, bb, x, y)].is_some_and(|e| (e - 4.0 * b.get(a, bb, x, y)).abs() > tol))
        .collect()
}

/// Every tabulated position reproduces one of `distinct`, and every value of `distinct` is hit.
fn distinct_values(text: &str, b: &Behavior, distinct: &[f64]) -> Check {
    let file = ProbabilityTableFile::parse(text).expect("fixture parses");
    let computed: Vec<f64> = Scenario::CGLMP4
        .keys()
        .filter(|&(a, bb, x, y)| file.entries[Scenario::CGLMP4.index(a, bb, x, y)].is_some())
        .map(|(a, bb, x, y)| 4.0 * b.get(a, bb, x, y))
        .collect();
    let near = |v: f64| distinct.iter().any(|d| (v - d).abs() <= TABLE_VALUE_TOL);
    let covered = distinct.iter().all(|d| computed.iter().any(|v| (v - d).abs() <= TABLE_VALUE_TOL));
    Check::new(computed.iter().all(|&v| near(v)) && covered, format!("{} positions against {distinct:?}", computed.len()))
}

fn criterion_3() -> Check {
    let start = Instant::now();
    let (_, _, optimal) = i4_of(canonical_cglmp4_optimal_setup);
    let (_, _, separable) = i4_of(canonical_cglmp4_separable_setup);
    let a8 = positional_mismatches(A8_EXPECTED, &optimal, TABLE_VALUE_TOL);
    let a7 = positional_mismatches(A7_EXPECTED, &separable, TABLE_VALUE_TOL);
    all(vec![
        distinct_values(A8_EXPECTED, &optimal, &A8_DISTINCT),
        distinct_values(A7_EXPECTED, &separable, &A7_DISTINCT),
        Check::new(a8 == vec![A8_TYPO], format!("A8 positional mismatches {a8:?} (only the misprint {A8_TYPO:?} allowed)")),
        Check::new(a7.is_empty(), format!("A7 positional mismatches {a7:?}")),
        timed(FAST_SECONDS, start.elapsed().as_secs_f64()),
    ])
}

fn measured_value(text: &str, tol: f64) -> f64 {
    let b = ProbabilityTableFile::parse(text).expect("fixture parses").ingest(tol).expect("ingests");
    cglmp4().evaluate(&b).expect("functional")
}

fn criterion_4() -> Check {
    let a6 = ChshTerms::parse(A6_MEASURED).expect("fixture parses").value();
    all(vec![
        within("A7 measured I4", measured_value(A7_MEASURED, A7_INGEST_TOL), A7_PRINTED, PRINTED_TOL + FLOAT_SLACK),
        within("A8 measured I4", measured_value(A8_MEASURED, A8_INGEST_TOL), A8_PRINTED, PRINTED_TOL + FLOAT_SLACK),
        within("A6 measured S", a6, A6_PRINTED, PRINTED_TOL + FLOAT_SLACK),
    ])
}

fn criterion_5() -> Check {
    let start = Instant::now();
    let i4 = classical_max(&cglmp4()).expect("enumerates");
    let s = classical_max(&chsh()).expect("enumerates");
    all(vec![
        Check::new(i4.value == 0.0 && i4.vertices == 256, format!("I4 max {} over {} vertices", i4.value, i4.vertices)),
        Check::new(s.value == 2.0 && s.vertices == 16, format!("S max {} over {} vertices", s.value, s.vertices)),
        timed(FAST_SECONDS, start.elapsed().as_secs_f64()),
    ])
}

fn lambda_max_problem(cm: &CMatrix) -> SdpProblem {
    let mut p = SdpProblem::new();
    p.add_block("x", cm.nrows());
    p.set_objective(0, cm.clone());
    p.add_constraint(vec![(0, identity(cm.nrows()))], 1.0);
    p
}

/// Solves `p`, validates the certificate and compares with `reference`.
fn sdp_case(label: &str, p: &SdpProblem, reference: f64, solver_time: &mut f64) -> Option<String> {
    let tol = OptimalityTolerance::default();
    let start = Instant::now();
    let sol = solve(p, &SolveOptions::default()).ok()?;
    *solver_time += start.elapsed().as_secs_f64();
    if sol.status != SolveStatus::Optimal {
        return Some(format!("{label}: status {:?}", sol.status));
    }
    let report = validate_solution(p, &sol);
    if !report.is_optimal(&tol) {
        return Some(format!("{label}: {:?}", report.violations(&tol)));
    }
    let diff = (sol.objective() - reference).abs();
    (diff > SDP_REFERENCE_TOL).then(|| format!("{label}: {} vs reference {reference}", sol.objective()))
}

fn criterion_6() -> Check {
    let start = Instant::now();
    let mut solver_time = 0.0;
    let mut failures = Vec::new();
    for seed in 0..10 {
        let mut rng = rng_from_seed(seed);
        let g = complex_gaussian(4, 4, &mut rng);
        let cm = (&g + g.adjoint()).scale(0.5);
        let exact = eigh(&cm).max();
        failures.extend(sdp_case(&format!("lambda-max {seed}"), &lambda_max_problem(&cm), exact, &mut solver_time));
    }
    for seed in 0..SDP_PROBLEMS {
        let fp = random_feasible_problem(1000 + seed, 3, 8, 40);
        let reference = solve_admm(&fp.problem, &AdmmOptions::default());
        if !reference.converged {
            failures.push(format!("random {seed}: reference did not converge"));
            continue;
        }
        failures.extend(sdp_case(&format!("random {seed}"), &fp.problem, reference.objective, &mut solver_time));
    }
    let total = start.elapsed().as_secs_f64();
    all(vec![
        Check::new(failures.is_empty(), format!("10 lambda-max + {SDP_PROBLEMS} random problems, failures {failures:?}")),
        Check::new(total < SDP_SECONDS, format!("{total:.2} s total, {solver_time:.2} s in the solver (< {SDP_SECONDS} s)")),
    ])
}

fn seesaw_checks(out: &SeesawRun, floor: f64, ceiling: f64, label: &str) -> Vec<Check> {
    let best = out.best_record().final_value;
    let bumps: usize = out.records.iter().map(|r| r.trace.windows(2).filter(|w| w[1] < w[0] - MONOTONE_SLACK).count()).sum();
    vec![
        Check::new((floor..=ceiling).contains(&best), format!("{label} best {best:.10} in [{floor}, {ceiling}]")),
        Check::new(bumps == 0, format!("{label} non-monotone half-steps {bumps}")),
    ]
}

/// Criterion 7 plus the serialized runs for the reproducibility check.
fn criterion_7() -> (Check, Vec<u8>) {
    let start = Instant::now();
    let config = SeesawConfig { restarts: SEESAW_RESTARTS, master_seed: SEESAW_SEED, ..SeesawConfig::default() };
    let ppt = run(&config, true).expect("ppt run");
    let free = run(&config, false).expect("unconstrained run");
    let mut bytes = serde_json::to_vec(&ppt.to_doc(true)).expect("serializes");
    bytes.extend(serde_json::to_vec(&free.to_doc(false)).expect("serializes"));
    let mut parts = seesaw_checks(&ppt, SEESAW_PPT_FLOOR, SEPARABLE_OPTIMUM + SEESAW_CEILING_SLACK, "ppt");
    parts.extend(seesaw_checks(&free, SEESAW_FLOOR, OPTIMUM + SEESAW_CEILING_SLACK, "unconstrained"));
    parts.push(timed(SEESAW_SECONDS, start.elapsed().as_secs_f64()));
    (all(parts), bytes)
}

fn criterion_8() -> Check {
    let start = Instant::now();
    let povms = optimal_measurements().expect("measurements");
    let (_, ppt) = optimize_preparations(&cglmp4(), &povms, true).expect("ppt program");
    let (_, free) = optimize_preparations(&cglmp4(), &povms, false).expect("unconstrained program");
    all(vec![
        within("ppt", ppt, SEPARABLE_OPTIMUM, SINGLE_SHOT_TOL),
        within("unconstrained", free, OPTIMUM, SINGLE_SHOT_TOL),
        timed(SINGLE_SHOT_SECONDS, start.elapsed().as_secs_f64()),
    ])
}

fn assemblage_distance(a: &Assemblage, b: &Assemblage) -> f64 {
    let mut worst: f64 = 0.0;
    for x in 0..a.settings() {
        for k in 0..a.outcomes() {
            worst = worst.max(max_norm(&(a.sigma(k, x).matrix() - b.sigma(k, x).matrix())));
        }
    }
    worst
}

fn criterion_9() -> Check {
    let mut worst: f64 = 0.0;
    for seed in 0..GHJW_ASSEMBLAGES {
        let mut rng = rng_from_seed(seed);
        let rho = random_density_matrix(16, 1 + (seed % 4) as usize, &mut rng);
        let povms: Vec<_> = (0..2).map(|_| random_povm(4, 4, &mut rng)).collect();
        let ass = steer(&rho, &povms).expect("steers");
        let (rho2, dilation) = ghjw_dilation(&ass).expect("dilates");
        worst = worst.max(assemblage_distance(&ass, &steer(&rho2, &dilation).expect("steers")));
    }
    Check::new(worst <= GHJW_TOL, format!("{GHJW_ASSEMBLAGES} assemblages, worst deviation {worst:.3e} (<= {GHJW_TOL:e})"))
}

/// `Σ_λ p(λ) p(a|x,λ) p(b|y,λ)` with random deterministic response functions.
fn local_mixture(scenario: Scenario, rng: &mut ChaCha8Rng) -> Behavior {
    let terms = rng.random_range(1..=6);
    let weights: Vec<f64> = (0..terms).map(|_| rng.random::<f64>()).collect();
    let total: f64 = weights.iter().sum();
    let mut table = vec![0.0; scenario.len()];
    for w in weights {
        let alice: Vec<usize> = (0..scenario.settings_x).map(|_| rng.random_range(0..scenario.outcomes_a)).collect();
        let bob: Vec<usize> = (0..scenario.settings_y).map(|_| rng.random_range(0..scenario.outcomes_b)).collect();
        let d = Behavior::deterministic(scenario, &alice, &bob);
        for (t, p) in table.iter_mut().zip(d.table()) {
            *t += w / total * p;
        }
    }
    Behavior::raw(scenario, table).expect("valid mixture")
}

fn criterion_10() -> Check {
    let mut rng = rng_from_seed(LOCAL_SEED);
    let (mut i4, mut s) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for _ in 0..LOCAL_SAMPLES {
        i4 = i4.max(cglmp4_value(&local_mixture(Scenario::CGLMP4, &mut rng)).expect("functional"));
        s = s.max(chsh_value(&local_mixture(Scenario::CHSH, &mut rng)).expect("functional"));
    }
    let qubit_bound = std::f64::consts::FRAC_1_SQRT_2 - 0.5;
    let mut rng = rng_from_seed(QUBIT_SEED);
    let mut qubit = f64::NEG_INFINITY;
    for _ in 0..LOCAL_SAMPLES {
        let rank = rng.random_range(1..=4);
        let rho = random_density_matrix(4, rank, &mut rng);
        let n: Vec<_> = (0..2).map(|_| random_povm(2, 4, &mut rng)).collect();
        let m: Vec<_> = (0..2).map(|_| random_povm(2, 4, &mut rng)).collect();
        let b = behavior_from(&steer(&rho, &n).expect("steers"), &m).expect("behavior");
        qubit = qubit.max(cglmp4_value(&b).expect("functional"));
    }
    all(vec![
        Check::new(i4 <= BOUND_SLACK, format!("local I4 max {i4:.3e}")),
        Check::new(s <= 2.0 + BOUND_SLACK, format!("local S max {s:.10}")),
        Check::new(qubit <= qubit_bound + QUBIT_SLACK, format!("qubit I4 max {qubit:.6} (bound {qubit_bound:.6})")),
    ])
}

fn resolve(text: &str) -> ResolvedSetup {
    SetupFile::parse(text).expect("setup parses").resolve().expect("setup resolves")
}

fn station_mismatches(states: ReferenceStates, stations: Vec<ctxdim_photonics::StationSetting>, table: &str) -> Vec<(usize, usize, usize, usize)> {
    let (layout, _) = fitted_layout(states, stations, &FitOptions::default()).expect("fits");
    let b = Layout::Sagnac(layout).behavior().expect("behavior");
    positional_mismatches(table, &b, REPRODUCTION_TOL).into_iter().filter(|&k| table != A8_EXPECTED || k != A8_TYPO).collect()
}

fn mc(setup: &ResolvedSetup, noise: &NoiseModel) -> MonteCarloSummary {
    monte_carlo(&setup.layout, &setup.functional, noise, MC_SAMPLES, MC_SEED).expect("monte carlo")
}

/// Criterion 11 plus the serialized summaries for the reproducibility check.
fn criterion_11() -> (Check, Vec<u8>) {
    let start = Instant::now();
    let mut parts = Vec::new();

    let mut literal = station_mismatches(ReferenceStates::Optimal, tabulated_stations(), A8_EXPECTED);
    literal.extend(station_mismatches(ReferenceStates::Separable, tabulated_stations(), A7_EXPECTED));
    parts.push(Check::new(literal.is_empty(), format!("tabulated stations: {} entries off by more than {REPRODUCTION_TOL:e}", literal.len())));
    let mut phased = station_mismatches(ReferenceStates::Optimal, phased_stations(), A8_EXPECTED);
    phased.extend(station_mismatches(ReferenceStates::Separable, phased_stations(), A7_EXPECTED));
    println!("    info: with the second station phased, {} entries off by more than {REPRODUCTION_TOL:e}", phased.len());

    let completeness = tabulated_stations()
        .iter()
        .chain(phased_stations().iter())
        .map(|s| {
            let povm = station_povm(s).expect("station povm");
            let sum = povm.effects().iter().fold(CMatrix::zeros(4, 4), |acc, e| acc + e.matrix());
            max_norm(&(sum - identity(4)))
        })
        .fold(0.0, f64::max);
    parts.push(Check::new(completeness <= COMPLETENESS_TOL, format!("station completeness {completeness:.3e}")));

    let entangled = resolve(ENTANGLED_SETUP);
    let qubit = resolve(CHSH_SETUP);
    let mut summaries = Vec::new();
    for (label, setup, band) in [("I4", &entangled, ENTANGLED_STD_BAND), ("S", &qubit, CHSH_STD_BAND)] {
        let full = mc(setup, &setup.noise);
        parts.push(Check::new(
            (band.0..=band.1).contains(&full.std),
            format!("{label} mean {:.6} std {:.6} in [{}, {}]", full.mean, full.std, band.0, band.1),
        ));
        let quiet = mc(setup, &NoiseModel::noiseless());
        parts.push(Check::new(quiet.std == 0.0, format!("{label} zero-noise std {:e}", quiet.std)));
        let counts = mc(setup, &setup.noise.counts_only());
        let angles = mc(setup, &setup.noise.angles_only());
        parts.push(Check::new(
            counts.std * COUNTS_TO_ANGLES <= angles.std,
            format!("{label} counts-only std {:.3e} vs angles-only {:.3e}", counts.std, angles.std),
        ));
        summaries.extend([full, quiet, counts, angles]);
    }
    parts.push(timed(PHOTONICS_SECONDS, start.elapsed().as_secs_f64()));
    (all(parts), serde_json::to_vec(&summaries).expect("serializes"))
}

fn criterion_12(seesaw: &[u8], photonics: &[u8]) -> Check {
    let (_, seesaw_again) = criterion_7();
    let (_, photonics_again) = criterion_11();
    all(vec![
        Check::new(seesaw == seesaw_again.as_slice(), format!("see-saw runs, {} bytes", seesaw.len())),
        Check::new(photonics == photonics_again.as_slice(), format!("Monte-Carlo summaries, {} bytes", photonics.len())),
    ])
}

fn evaluate<T>(id: usize, f: impl FnOnce() -> (Check, T)) -> (bool, Option<T>) {
    let start = Instant::now();
    let (check, extra) = match catch_unwind(AssertUnwindSafe(f)) {
        Ok((check, extra)) => (check, Some(extra)),
        Err(e) => {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default();
            (Check::new(false, format!("panicked: {msg}")), None)
        }
    };
    println!("criterion {id:>2} {} [{:.2} s] {}", if check.pass { "PASS" } else { "FAIL" }, start.elapsed().as_secs_f64(), check.detail);
    (check.pass, extra)
}

fn plain(f: fn() -> Check) -> impl FnOnce() -> (Check, ()) {
    move || (f(), ())
}

fn main() {
    let strict = std::env::args().any(|a| a == "--strict");
    let fast: [fn() -> Check; 6] = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6];
    let mut passed: Vec<bool> = fast.into_iter().enumerate().map(|(i, f)| evaluate(i + 1, plain(f)).0).collect();
    let (ok, seesaw) = evaluate(7, criterion_7);
    passed.push(ok);
    passed.push(evaluate(8, plain(criterion_8)).0);
    passed.push(evaluate(9, plain(criterion_9)).0);
    passed.push(evaluate(10, plain(criterion_10)).0);
    let (ok, photonics) = evaluate(11, criterion_11);
    passed.push(ok);
    let ok = match (seesaw, photonics) {
        (Some(s), Some(p)) => evaluate(12, || (criterion_12(&s, &p), ())).0,
        _ => evaluate(12, || (Check::new(false, "criteria 7 and 11 did not produce output"), ())).0,
    };
    passed.push(ok);

    let failed: Vec<usize> = passed.iter().enumerate().filter(|(_, p)| !**p).map(|(i, _)| i + 1).collect();
    println!("acceptance: {} of {} criteria pass, failing {failed:?}", passed.len() - failed.len(), passed.len());
    if strict && !failed.is_empty() {
        std::process::exit(1);
    }
}

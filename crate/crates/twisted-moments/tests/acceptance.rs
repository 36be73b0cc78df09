//! The acceptance gate: eleven pinned criteria, one test — and one
//! pass/fail line — each.
//!
//! Every criterion pins its tolerances as named constants below, next to a
//! note saying where the number comes from (an exact identity, a quadrature
//! agreement band, or a recorded empirical constant with its measured
//! value). Tests that share a verification suite reuse one cached run, so
//! the gate stays inside a few minutes end to end.
//!
//! Run `cargo test --test acceptance -- --nocapture --test-threads=1` to
//! see the per-criterion summary lines; under a plain `cargo test` the
//! per-test ok/FAILED lines carry the verdicts.

use std::sync::OnceLock;
use std::time::Instant;

use twisted_moments::eigendata::newform_eigendata;
use twisted_moments::modsym::build_space;
use twisted_moments::scan::{run_scan, write_csv, ScanConfig};
use twisted_moments::verify::{run_suite, CheckResult, Suite, VerifyReport};

// --- pinned tolerances -----------------------------------------------------

/// Complete twisted sums against brute force: exact identity, float noise.
const TWISTED_SUM_TOL: f64 = 1e-9;
/// Additive-character reciprocity on 100 random admissible tuples.
const RECIPROCITY_TOL: f64 = 1e-12;
/// Dual-side (post-Poisson) complete sums against brute force.
const POISSON_DUAL_TOL: f64 = 1e-9;
/// Wall-clock budget for the whole exponential-sum identity battery.
const IDENTITY_SUITE_BUDGET_SECS: f64 = 60.0;
/// | |τ(χ)|² − p | for every primitive χ mod every odd prime p ≤ 101.
const GAUSS_MODULUS_TOL: f64 = 1e-9;
/// Slack allowed over |S(m, n; c)| ≤ τ(c)·√(gcd(m, n, c))·√c.
const WEIL_BOUND_TOL: f64 = 1e-9;
/// Closed-form V(x) against contour quadrature, k ∈ {2, 4, 12}.
const WEIGHT_V_TOL: f64 = 1e-8;
/// V(x) at k = 2 against its elementary form e^{−2πx}.
const WEIGHT_V_K2_TOL: f64 = 1e-10;
/// Series vs backward-recurrence Bessel values on the crossover band.
const BESSEL_DUAL_TOL: f64 = 1e-9;
/// Stationary-phase prediction vs direct quadrature (relative).
const STATIONARY_REL_TOL: f64 = 0.1;
/// Out-of-window oscillatory integrals, relative to the in-window scale.
const STATIONARY_WINDOW_TOL: f64 = 1e-6;
/// Numeric stationary point against the closed form p²y/m₁².
const STATIONARY_POINT_TOL: f64 = 1e-6;
/// |a(ℓ)| integer matches are exact; |λ(q)| − q^{−1/2} is float.
const FRICKE_EIGENVALUE_TOL: f64 = 1e-8;
/// Held-out trace residuals where certified tail cutoffs exist (weight 4).
const TRACE_W4_TOL: f64 = 1e-6;
/// Held-out weight-2 trace residuals at the calibrated cutoff c ≤ 20000:
/// the k = 2 kernel decays too slowly for certified tails at any practical
/// cutoff (the chooser's refusal is itself asserted), so this is a recorded
/// empirical envelope — measured residuals are ≈ 6e-5 with ~4× headroom.
const TRACE_W2_TOL: f64 = 2e-4;
/// Dual second-moment residual relative to max(1, spectral).
const DUAL_MOMENT_REL_TOL: f64 = 1e-4;
/// Root numbers: | |ε| − 1 | and cross-balance-point consistency.
const ROOT_NUMBER_TOL: f64 = 1e-6;
/// Wall-clock budget for the full prime-grid scan.
const SCAN_BUDGET_SECS: f64 = 600.0;
/// Recorded constant bounding moment/(q + p) over the full grid
/// (measured max 6.108294 over primes ≤ 60, 6092 records).
const MOMENT_RATIO_BOUND: f64 = 6.2;
/// Recorded constant bounding max|L|/(√q + √p) over the full grid
/// (measured max 1.7648687 on the same grid).
const L_RATIO_BOUND: f64 = 1.8;

// --- shared suite runs -----------------------------------------------------

static CHARACTERS: OnceLock<(VerifyReport, f64)> = OnceLock::new();
static EXP_SUMS: OnceLock<(VerifyReport, f64)> = OnceLock::new();
static SPECIAL: OnceLock<(VerifyReport, f64)> = OnceLock::new();
static PETERSSON: OnceLock<(VerifyReport, f64)> = OnceLock::new();
static LFUNCTIONS: OnceLock<(VerifyReport, f64)> = OnceLock::new();

fn report(slot: &'static OnceLock<(VerifyReport, f64)>, suite: Suite) -> &'static (VerifyReport, f64) {
    slot.get_or_init(|| {
        let start = Instant::now();
        let rep = run_suite(suite).unwrap_or_else(|e| panic!("{suite} suite failed to run: {e}"));
        (rep, start.elapsed().as_secs_f64())
    })
}

fn rows<'a>(rep: &'a VerifyReport, identity: &str) -> Vec<&'a CheckResult> {
    let out: Vec<_> = rep.checks.iter().filter(|c| c.identity == identity).collect();
    assert!(!out.is_empty(), "no '{identity}' rows in the {} suite", rep.suite);
    out
}

/// Largest residual over the matching rows; NaN anywhere is a failure.
fn worst_residual(rep: &VerifyReport, identity: &str) -> f64 {
    let mut worst = f64::NEG_INFINITY;
    for row in rows(rep, identity) {
        assert!(
            row.residual.is_finite(),
            "non-finite residual in '{identity}' ({})",
            row.parameters
        );
        worst = worst.max(row.residual);
    }
    worst
}

// --- criteria ----------------------------------------------------------------

/// Complete twisted exponential sums, reciprocity, and the dual-side
/// (post-Poisson) sums all close against brute force, with one globally
/// consistent resolved sign and character orientation, inside the runtime
/// budget.
#[test]
fn c01_complete_sum_identities() {
    let (rep, secs) = report(&EXP_SUMS, Suite::ExpSums);

    let twisted = worst_residual(rep, "twisted_complete_sum");
    assert!(twisted < TWISTED_SUM_TOL, "twisted sums residual {twisted:.3e} ≥ {TWISTED_SUM_TOL:.0e}");

    let orientation = rows(rep, "character_orientation")[0];
    assert!(orientation.passed(), "orientation probe failed: {}", orientation.note);
    assert!(
        orientation.note.contains("χ̄(m₁)·χ(cq)"),
        "unexpected resolved orientation: {}",
        orientation.note
    );

    let recip_rows = rows(rep, "reciprocity");
    assert!(
        recip_rows[0].parameters.contains("100 random"),
        "reciprocity battery is not the 100-tuple sweep: {}",
        recip_rows[0].parameters
    );
    let recip = worst_residual(rep, "reciprocity");
    assert!(recip < RECIPROCITY_TOL, "reciprocity residual {recip:.3e} ≥ {RECIPROCITY_TOL:.0e}");

    let poisson_row = rows(rep, "poisson_dual_sum")[0];
    let poisson = worst_residual(rep, "poisson_dual_sum");
    assert!(poisson < POISSON_DUAL_TOL, "poisson dual residual {poisson:.3e} ≥ {POISSON_DUAL_TOL:.0e}");
    assert!(
        poisson_row.note.contains("sign -1") && poisson_row.note.contains("χ(m₂)·χ̄(m₁)"),
        "dual-sum convention not the globally resolved one: {}",
        poisson_row.note
    );

    assert!(
        *secs < IDENTITY_SUITE_BUDGET_SECS,
        "identity battery took {secs:.1}s ≥ {IDENTITY_SUITE_BUDGET_SECS}s"
    );
    println!(
        "PASS c01 complete-sum identities — twisted {twisted:.2e} < {TWISTED_SUM_TOL:.0e}, \
         reciprocity {recip:.2e} < {RECIPROCITY_TOL:.0e}, poisson dual {poisson:.2e} < {POISSON_DUAL_TOL:.0e}; \
         factor χ̄(m₁)·χ(cq), dual sign −1 with χ(m₂)·χ̄(m₁); suite {secs:.1}s"
    );
}

/// |τ(χ)|² = p for every primitive character mod every odd prime p ≤ 101.
#[test]
fn c02_gauss_sum_modulus() {
    let (rep, _) = report(&CHARACTERS, Suite::Characters);
    let row = rows(rep, "gauss_sum_modulus")[0];
    assert!(
        row.parameters.contains("101"),
        "gauss battery does not sweep p ≤ 101: {}",
        row.parameters
    );
    let worst = worst_residual(rep, "gauss_sum_modulus");
    assert!(worst < GAUSS_MODULUS_TOL, "| |τ|² − p | {worst:.3e} ≥ {GAUSS_MODULUS_TOL:.0e}");
    println!(
        "PASS c02 gauss sums — | |τ(χ)|² − p | ≤ {worst:.2e} < {GAUSS_MODULUS_TOL:.0e} ({})",
        row.parameters
    );
}

/// Kloosterman values stay inside the Weil bound τ(c)·√(gcd(m,n,c))·√c for
/// every modulus c ≤ 500 on 200 random (m, n) pairs each.
#[test]
fn c03_weil_bound() {
    let (rep, _) = report(&EXP_SUMS, Suite::ExpSums);
    let row = rows(rep, "weil_bound")[0];
    assert!(
        row.parameters.contains("c ≤ 500") && row.parameters.contains("200"),
        "weil battery is not the c ≤ 500 × 200-sample sweep: {}",
        row.parameters
    );
    let worst = worst_residual(rep, "weil_bound");
    assert!(worst < WEIL_BOUND_TOL, "Weil bound exceeded by {worst:.3e}");
    println!(
        "PASS c03 weil bound — max(|S| − τ(c)√(gcd·c)) = {worst:.2e} < {WEIL_BOUND_TOL:.0e} ({})",
        row.parameters
    );
}

/// The smoothing weight V(x): closed form against contour quadrature for
/// k ∈ {2, 4, 12} on a 20-point log grid in [1e−3, 10], and the elementary
/// e^{−2πx} form at k = 2.
#[test]
fn c04_afe_weight_function() {
    let (rep, _) = report(&SPECIAL, Suite::Special);
    let contour_row = rows(rep, "weight_v_contour")[0];
    assert!(
        contour_row.parameters.contains('2')
            && contour_row.parameters.contains('4')
            && contour_row.parameters.contains("12"),
        "contour battery does not sweep k ∈ {{2, 4, 12}}: {}",
        contour_row.parameters
    );
    let contour = worst_residual(rep, "weight_v_contour");
    assert!(contour < WEIGHT_V_TOL, "V(x) contour residual {contour:.3e} ≥ {WEIGHT_V_TOL:.0e}");
    let k2 = worst_residual(rep, "weight_v_k2_exponential");
    assert!(k2 < WEIGHT_V_K2_TOL, "V₂(x) − e^(−2πx) residual {k2:.3e} ≥ {WEIGHT_V_K2_TOL:.0e}");
    println!(
        "PASS c04 afe weight — contour {contour:.2e} < {WEIGHT_V_TOL:.0e} (k ∈ {{2,4,12}}, 20-pt log grid), \
         k=2 exponential {k2:.2e} < {WEIGHT_V_K2_TOL:.0e}"
    );
}

/// Bessel J: the ascending series and the backward-recurrence evaluation
/// agree through the crossover band [6, 10] for orders 1, 3, 11, and the
/// small-/large-argument envelopes hold on sampled grids.
#[test]
fn c05_bessel_dual_evaluation() {
    let (rep, _) = report(&SPECIAL, Suite::Special);
    let dual_row = rows(rep, "bessel_dual_methods")[0];
    assert!(
        dual_row.parameters.contains("[6, 10]") || dual_row.parameters.contains("6") && dual_row.parameters.contains("10"),
        "dual-method battery is not on the crossover band: {}",
        dual_row.parameters
    );
    let dual = worst_residual(rep, "bessel_dual_methods");
    assert!(dual < BESSEL_DUAL_TOL, "dual-method disagreement {dual:.3e} ≥ {BESSEL_DUAL_TOL:.0e}");
    let oracle = rows(rep, "bessel_integral_oracle")[0];
    assert!(oracle.passed(), "integral-oracle row over budget: {:.3e}", oracle.residual);
    let envelopes = rows(rep, "bessel_envelopes")[0];
    assert!(envelopes.passed(), "envelope violation: {:.3e}", envelopes.residual);
    println!(
        "PASS c05 bessel dual evaluation — series vs recurrence {dual:.2e} < {BESSEL_DUAL_TOL:.0e} \
         (orders 1, 3, 11 on [6, 10]); envelopes and integral oracle hold"
    );
}

/// Oscillatory integrals: the stationary-phase prediction tracks direct
/// quadrature at oscillation depths 10² and 10³, integrals collapse when
/// the frequency window excludes the stationary point, and the numeric
/// stationary point lands on p²y/m₁².
#[test]
fn c06_stationary_phase() {
    let (rep, _) = report(&SPECIAL, Suite::Special);
    let depth_rows = rows(rep, "stationary_phase");
    assert!(depth_rows.len() >= 2, "expected both oscillation depths, got {}", depth_rows.len());
    let rel = worst_residual(rep, "stationary_phase");
    assert!(rel < STATIONARY_REL_TOL, "stationary-phase relative error {rel:.3} ≥ {STATIONARY_REL_TOL}");
    let window = worst_residual(rep, "no_stationary_point_decay");
    assert!(
        window < STATIONARY_WINDOW_TOL,
        "out-of-window integral at {window:.3e} of the in-window scale"
    );
    let location = worst_residual(rep, "stationary_point_location");
    assert!(location < STATIONARY_POINT_TOL, "stationary point off by {location:.3e}");
    println!(
        "PASS c06 stationary phase — rel. error {rel:.2e} < {STATIONARY_REL_TOL} at depths 1e2, 1e3; \
         out-of-window ratio {window:.2e} < {STATIONARY_WINDOW_TOL:.0e}; x₀ within {location:.2e} of p²y/m₁²"
    );
}

/// Hecke eigendata: level-11 coefficients reproduce elliptic-curve point
/// counts exactly at every good prime ℓ ≤ 50, the structural batteries
/// pass for q ∈ {11, 23, 37}, and |λ(q)| = q^{−1/2}.
#[test]
fn c07_eigendata_oracle() {
    // Point counts on y² + y = x³ − x² − 10x − 20 over F_ℓ.
    fn elliptic_ap(ell: u64) -> i64 {
        let l = ell as i64;
        let md = |x: i64| x.rem_euclid(l);
        let mut count = 1i64; // point at infinity
        for x in 0..l {
            for y in 0..l {
                if md(y * y + y) == md(md(x * x * x) - md(x * x) - md(10 * x) - 20) {
                    count += 1;
                }
            }
        }
        l + 1 - count
    }

    let space = build_space(11).expect("level 11 space");
    let forms = newform_eigendata(&space, 60).expect("level 11 eigendata");
    assert_eq!(forms.len(), 1, "level 11 carries one newform");
    let form = &forms[0];
    let good_primes = [2u64, 3, 5, 7, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47];
    for &ell in &good_primes {
        let got = form.coefficient(ell).expect("integral coefficient");
        let oracle = elliptic_ap(ell);
        assert_eq!(got, oracle, "a({ell}) = {got} but the point count gives {oracle}");
    }
    // ℓ = 11 is the level: the curve is singular there, so the affine count
    // is no oracle; the coefficient is pinned through |λ(q)| below and the
    // structural battery (a(11)² = 1 for a newform of prime level 11).
    let a11 = form.coefficient(11).expect("a(11)");
    assert_eq!(a11 * a11, 1, "a(11)² must be 1, got a(11) = {a11}");

    let mut battery = Vec::new();
    for q in [11u64, 23, 37] {
        let space = build_space(q).expect("space");
        let forms = newform_eigendata(&space, 60).expect("eigendata");
        assert!(!forms.is_empty(), "level {q} should carry newforms");
        for form in &forms {
            form.validate().unwrap_or_else(|e| panic!("battery failed for {}: {e}", form.label()));
            let dev = (form.lambda(q).expect("λ(q)").abs() - 1.0 / (q as f64).sqrt()).abs();
            assert!(
                dev < FRICKE_EIGENVALUE_TOL,
                "| |λ({q})| − {q}^(−1/2) | = {dev:.3e} for {}",
                form.label()
            );
        }
        battery.push(format!("q={q} dim {}", forms.len()));
    }
    println!(
        "PASS c07 eigendata oracle — a(ℓ) equals the point count at all {} good primes ℓ ≤ 50, \
         a(11)² = 1; batteries green ({}); |λ(q)| = q^(−1/2) within {FRICKE_EIGENVALUE_TOL:.0e}",
        good_primes.len(),
        battery.join(", ")
    );
}

/// Petersson machinery: positive harmonic weights at weight 2 for
/// q ∈ {11, 23, 37}; held-out trace residuals below 1e−6 in the regime
/// where certified tail cutoffs exist (weight 4); the explicit refusal to
/// certify weight-2 tails; weight-2 residuals inside the recorded empirical
/// envelope; and the dual second-moment identity at (q, p, N) = (11, 3, 10)
/// and (11, 5, 20).
#[test]
fn c08_petersson_verification() {
    let (rep, _) = report(&PETERSSON, Suite::Petersson);

    let positive = rows(rep, "harmonic_weights_positive");
    assert_eq!(positive.len(), 3, "one positivity row per level");
    for row in &positive {
        assert!(row.passed(), "negative weight at {}: {}", row.parameters, row.note);
    }

    let w4 = worst_residual(rep, "trace_identity_weight4");
    assert!(w4 < TRACE_W4_TOL, "certified-regime residual {w4:.3e} ≥ {TRACE_W4_TOL:.0e}");

    let refusal = rows(rep, "weight2_tail_refusal")[0];
    assert!(refusal.passed(), "weight-2 tail certification must be refused: {}", refusal.note);

    let w2_rows = rows(rep, "trace_identity_weight2");
    assert_eq!(w2_rows.len(), 3, "one weight-2 trace row per level");
    let mut w2_texts = Vec::new();
    for row in &w2_rows {
        assert!(
            row.residual < TRACE_W2_TOL,
            "weight-2 residual {:.3e} ≥ {TRACE_W2_TOL:.0e} at {}",
            row.residual,
            row.parameters
        );
        let level = row
            .parameters
            .split(',')
            .next()
            .unwrap_or(&row.parameters)
            .trim()
            .to_string();
        w2_texts.push(format!("{level}: {:.1e}", row.residual));
    }

    let dual_rows = rows(rep, "dual_moment");
    assert_eq!(dual_rows.len(), 2, "both dual-moment configurations");
    let mut dual_texts = Vec::new();
    for row in &dual_rows {
        assert!(
            row.residual < DUAL_MOMENT_REL_TOL,
            "dual-moment relative residual {:.3e} ≥ {DUAL_MOMENT_REL_TOL:.0e} at {}",
            row.residual,
            row.parameters
        );
        dual_texts.push(format!("{:.1e}", row.residual));
    }

    println!(
        "PASS c08 petersson — weights positive (q ∈ {{11, 23, 37}}); certified held-out residual \
         {w4:.2e} < {TRACE_W4_TOL:.0e} (weight 4); weight-2 tail certification refused as designed; \
         weight-2 empirical residuals {} (envelope {TRACE_W2_TOL:.0e}); dual moments {} of scale \
         (budget {DUAL_MOMENT_REL_TOL:.0e})",
        w2_texts.join(", "),
        dual_texts.join(", ")
    );
}

/// Numerically solved root numbers sit on the unit circle for every form
/// and every primitive χ with q ∈ {11, 23}, p ∈ {3, 5, 7, 13}, and the
/// solved ε does not depend on which balance pair determined it.
#[test]
fn c09_root_numbers() {
    let (rep, _) = report(&LFUNCTIONS, Suite::Lfunctions);
    let unit_rows = rows(rep, "root_number_unit_modulus");
    assert_eq!(unit_rows.len(), 2, "one unit-modulus row per level");
    for (row, level) in unit_rows.iter().zip(["level 11", "level 23"]) {
        assert!(row.parameters.contains(level), "row order changed: {}", row.parameters);
        assert!(
            row.residual < ROOT_NUMBER_TOL,
            "| |ε| − 1 | = {:.3e} ≥ {ROOT_NUMBER_TOL:.0e} at {} ({})",
            row.residual,
            row.parameters,
            row.note
        );
    }
    let unit = worst_residual(rep, "root_number_unit_modulus");
    let balance = worst_residual(rep, "root_number_balance_consistency");
    assert!(
        balance < ROOT_NUMBER_TOL,
        "balance-pair inconsistency {balance:.3e} ≥ {ROOT_NUMBER_TOL:.0e}"
    );
    println!(
        "PASS c09 root numbers — | |ε| − 1 | ≤ {unit:.2e} < {ROOT_NUMBER_TOL:.0e} across q ∈ {{11, 23}}, \
         p ∈ {{3, 5, 7, 13}}, every form; balance-pair consistency {balance:.2e}"
    );
}

/// The full prime-grid scan (q, p ≤ 60) finishes inside the budget with no
/// failed cells, both theorem surrogates stay under their recorded
/// constants, and the diagonal trend diagnostic finds no significant
/// upward drift in the per-form moment ratio.
#[test]
fn c10_grid_scan_boundedness() {
    let q_list = vec![2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59];
    let p_list = vec![3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59];
    let config = ScanConfig::new(q_list, p_list);
    let start = Instant::now();
    let outcome = run_scan(&config).expect("full grid scan");
    let secs = start.elapsed().as_secs_f64();

    assert!(secs < SCAN_BUDGET_SECS, "scan took {secs:.0}s ≥ {SCAN_BUDGET_SECS}s");
    assert_eq!(outcome.summary.failures, 0, "cells failed: {:?}", failed_cells(&outcome));
    assert_eq!(outcome.records.len(), 6092, "grid shape changed");
    assert!(
        outcome.summary.max_moment_ratio <= MOMENT_RATIO_BOUND,
        "moment/(q+p) reached {:.6}, over the recorded constant {MOMENT_RATIO_BOUND}",
        outcome.summary.max_moment_ratio
    );
    assert!(
        outcome.summary.max_l_ratio <= L_RATIO_BOUND,
        "max|L|/(√q+√p) reached {:.6}, over the recorded constant {L_RATIO_BOUND}",
        outcome.summary.max_l_ratio
    );
    let trend = &outcome.trend;
    assert!(trend.n >= 80, "diagonal band unexpectedly sparse: {} cells", trend.n);
    assert!(
        !trend.significant_upward,
        "upward diagonal trend: n = {}, ρ = {:.4}, z = {:.2}",
        trend.n, trend.rho, trend.z
    );
    println!(
        "PASS c10 grid scan — {} records in {secs:.0}s (< {SCAN_BUDGET_SECS:.0}s), 0 failed cells; \
         max moment/(q+p) = {:.4} ≤ {MOMENT_RATIO_BOUND} (recorded), max|L|/(√q+√p) = {:.4} ≤ {L_RATIO_BOUND} \
         (recorded); per-form diagonal trend n = {}, ρ = {:+.3}, z = {:+.2} — not significant at α = 0.05",
        outcome.records.len(),
        outcome.summary.max_moment_ratio,
        outcome.summary.max_l_ratio,
        trend.n,
        trend.rho,
        trend.z
    );
}

fn failed_cells(outcome: &twisted_moments::scan::ScanOutcome) -> Vec<String> {
    outcome
        .records
        .iter()
        .filter(|r| !r.errors.is_empty())
        .map(|r| format!("({}, {}, {}): {}", r.q, r.p, r.character, r.errors))
        .collect()
}

/// Scan output is byte-identical across worker counts. Any environment
/// override applies to both arms equally; in the default environment this
/// pins config-level 1 worker against 8.
#[test]
fn c11_scan_determinism() {
    let q_list = vec![11u64, 17, 19, 23];
    let p_list = vec![3u64, 5, 7, 11, 13];

    let mut one = ScanConfig::new(q_list.clone(), p_list.clone());
    one.workers = Some(1);
    let mut eight = ScanConfig::new(q_list, p_list);
    eight.workers = Some(8);

    let mut csv_one = Vec::new();
    write_csv(&run_scan(&one).expect("1-worker scan"), &mut csv_one).expect("serialize");
    let mut csv_eight = Vec::new();
    write_csv(&run_scan(&eight).expect("8-worker scan"), &mut csv_eight).expect("serialize");

    assert!(csv_one.len() > 1000, "determinism grid produced implausibly little output");
    assert_eq!(csv_one, csv_eight, "scan output differs between 1 and 8 workers");
    println!(
        "PASS c11 scan determinism — {} bytes of CSV byte-identical across 1 vs 8 workers",
        csv_one.len()
    );
}

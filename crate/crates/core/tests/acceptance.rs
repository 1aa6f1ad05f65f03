//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (`harness = false`) so the report is always printed. The process
//! fails if any criterion fails, except those listed in `KNOWN_UNATTAINABLE`, which still
//! print FAIL together with the reason.

use std::cmp::Ordering;
use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex64;
use num_traits::Signed;
use rand::{Rng, SeedableRng};

use subdiv_core::convergence::{contractivity_norm, difference_scheme, necessary_conditions, smooth_lift};
use subdiv_core::dynamics::{decompose_modes, iterate_local, TrajectoryReport};
use subdiv_core::local_matrix::{
    build_local_matrix, complex_region_predicate, eigenvalues, multiset_distance, w5_closed_form,
    w5_coefficients, w6_closed_form, w6_coefficients, w6_discriminant, LocalMatrix,
};
use subdiv_core::rational::{self, int, rat, Rational};
use subdiv_core::refine::{basis_experiment, basis_samples_exact, refine_k, ControlPolygon};
use subdiv_core::scheme::{catalog_get, Mask};
use subdiv_core::search::{
    min_width_report, negativity_lemma_check, negativity_sign_exact, scan, CellClass, ParamRange, SearchSpec,
};
use subdiv_core::Execution;

/// Criteria whose literal statement cannot hold; see the reason printed with the FAIL line.
const KNOWN_UNATTAINABLE: &[usize] = &[10];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn mask(name: &str) -> Mask {
    catalog_get(name).unwrap().mask
}

fn random_rationals(seed: u64, count: usize) -> Vec<Rational> {
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    (0..count)
        .map(|_| rat(rng.random_range(-1000..=1000), rng.random_range(1..=1000)))
        .collect()
}

fn scheme_a_spectrum() -> Vec<Complex64> {
    let r2 = 2f64.sqrt();
    vec![c(-0.1, 0.0), c(-0.1, 0.0), c(0.4, 0.0), c(1.0, 0.0), c(0.4, r2 / 5.0), c(0.4, -r2 / 5.0)]
}

fn criterion_1() -> Outcome {
    let a = build_local_matrix(&mask("a")).unwrap();
    let expected = scheme_a_spectrum();
    let exact = multiset_distance(&expected, &a.spectrum().unwrap().eigenvalues);
    let float = multiset_distance(&expected, &eigenvalues(&a.to_f64()).unwrap().eigenvalues);
    outcome(
        exact < 1e-9 && float < 1e-9,
        format!("max deviation {exact:.2e} (exact polynomial route), {float:.2e} (Schur route)"),
    )
}

fn criterion_2() -> Outcome {
    let norm = contractivity_norm(&difference_scheme(&mask("a")).unwrap());
    outcome(norm == rat(4, 5), format!("norm {}", rational::format(&norm)))
}

fn criterion_3() -> Outcome {
    let lifted = smooth_lift(&mask("a"));
    let expected: Vec<Rational> = [(-1, 20), (1, 10), (11, 20), (4, 5), (11, 20), (1, 10), (-1, 20)]
        .iter()
        .map(|&(n, d)| rat(n, d))
        .collect();
    let spectrum = build_local_matrix(&lifted).unwrap().spectrum().unwrap();
    let max_imag = spectrum.max_imag();
    let pair = spectrum
        .eigenvalues
        .iter()
        .filter(|z| z.im > 1e-7)
        .any(|z| spectrum.eigenvalues.iter().any(|w| (w - z.conj()).norm() < 1e-9));
    outcome(
        lifted.coeffs() == expected.as_slice() && pair,
        format!("mask {lifted}, max |Im| {max_imag:.6}"),
    )
}

fn criterion_4() -> Outcome {
    let range = ParamRange::new(int(-1), int(1), rat(1, 100)).unwrap();
    let mut worst: f64 = 0.0;
    for a in range.values() {
        let m = LocalMatrix::from_coefficients(&w5_coefficients(&a)).unwrap();
        let numeric = m.spectrum().unwrap();
        worst = worst.max(multiset_distance(&w5_closed_form(&a).eigenvalues, &numeric.eigenvalues));
    }
    let spec = SearchSpec::new(5, vec![range.clone()], true).unwrap();
    let result = scan(&spec, Execution::default()).unwrap();
    outcome(
        range.count() == 201 && worst < 1e-8 && result.counts.complex() == 0,
        format!(
            "{} values, max deviation {worst:.2e}, complex cells {}",
            range.count(),
            result.counts.complex()
        ),
    )
}

fn criterion_5() -> Outcome {
    let range = ParamRange::new(rat(-1, 2), rat(1, 2), rat(1, 100)).unwrap();
    let values = range.values();
    let n = values.len();
    let rows: Vec<(f64, usize, usize)> = Execution::default().map_range(n * n, |k| {
        let (a, b) = (&values[k / n], &values[k % n]);
        let m = LocalMatrix::from_coefficients(&w6_coefficients(a, b)).unwrap();
        let numeric = m.spectrum().unwrap();
        let dev = multiset_distance(&w6_closed_form(a, b).eigenvalues, &numeric.eigenvalues);
        let d = rational::to_f64(&w6_discriminant(a, b));
        if d.abs() < 1e-10 {
            return (dev, 0, 1);
        }
        let agree = complex_region_predicate(a, b) == (numeric.max_imag() > 1e-7);
        (dev, usize::from(!agree), 0)
    });
    let worst = rows.iter().map(|r| r.0).fold(0.0, f64::max);
    let disagree: usize = rows.iter().map(|r| r.1).sum();
    let skipped: usize = rows.iter().map(|r| r.2).sum();
    outcome(
        n == 101 && worst < 1e-8 && disagree == 0,
        format!("{}x{} cells, max deviation {worst:.2e}, predicate disagreements {disagree}, |D|<1e-10 cells skipped {skipped}", n, n),
    )
}

fn criterion_6() -> Outcome {
    let (max, arg) = negativity_lemma_check(&ParamRange::new(int(-5), int(5), rat(1, 1000)).unwrap());
    let near = (rational::to_f64(&arg) - 1.0 / 3.0).abs() <= 1e-3;
    let identity = random_rationals(6, 100).iter().all(|b| {
        let lhs = int(8) * (int(1) - b * int(5) + b * b * int(8)) - (int(1) + b) * (int(1) + b);
        let t = b * int(3) - int(1);
        lhs == int(7) * &t * &t
    });
    let exact_zero = negativity_sign_exact(&rat(1, 3)) == Ordering::Equal;
    outcome(
        max <= 1e-9 && near && identity && exact_zero,
        format!(
            "max {max:.3e} at b = {}, identity on 100 random rationals: {identity}",
            rational::format(&arg)
        ),
    )
}

fn criterion_7() -> Outcome {
    let ok = random_rationals(7, 100).iter().all(|a| {
        let root = a * int(2) + rat(1, 4);
        w6_discriminant(a, &(a + rat(1, 4))) == &root * &root
    });
    outcome(ok, "D(a, a + 1/4) = (2a + 1/4)^2 on 100 random rationals")
}

fn criterion_8() -> Outcome {
    let samples = basis_samples_exact(&mask("c"), 10).unwrap();
    let off = samples
        .iter()
        .filter(|(t, v)| *v != (int(1) - t.abs()).max(int(0)))
        .count();
    outcome(samples.len() == 8193 && off == 0, format!("{} points, {off} off the tent", samples.len()))
}

fn criterion_9() -> Outcome {
    let curve = basis_experiment(&mask("d"), 10).unwrap();
    match curve.value_at(0.0) {
        Some(v) => outcome((v - 2.0 / 3.0).abs() < 1e-3, format!("value at t = 0: {v:.12}")),
        None => outcome(false, "no sample at t = 0"),
    }
}

fn decomposed(v0: &[Rational]) -> TrajectoryReport {
    let a = build_local_matrix(&mask("a")).unwrap();
    decompose_modes(iterate_local(v0, &a, 30).unwrap(), &a.spectrum().unwrap())
}

fn unit(j: usize) -> Vec<Rational> {
    (0..6).map(|i| int(i64::from(i == j))).collect()
}

fn criterion_10() -> Outcome {
    let target = 6f64.sqrt() / 5.0;
    // e3 is generic: it has a component along every eigenmode
    let generic = decomposed(&unit(2));
    let pair = generic.mode(c(0.4, 2f64.sqrt() / 5.0), 1e-9);
    let ratio_dev = pair.map_or(f64::INFINITY, |m| {
        m.ratios.iter().map(|(_, r)| (r - target).abs()).fold(0.0, f64::max)
    });
    let ratio_count = pair.map_or(0, |m| m.ratios.len());
    let neg = generic.mode(c(-0.1, 0.0), 1e-9);
    let flips = neg.and_then(|m| m.sign_flips).unwrap_or(0);
    let eligible = neg.and_then(|m| m.eligible_transitions).unwrap_or(0);
    let contraction_ok = ratio_count >= 25 && ratio_dev < 1e-9;
    let flips_ok = eligible >= 10 && flips == eligible;

    let from_e1 = decomposed(&unit(0));
    let monotone_claim = from_e1.monotonicity_violations >= 1;
    let others: Vec<usize> = (1..5).map(|j| decomposed(&unit(j)).monotonicity_violations).collect();

    let mut detail = format!(
        "pair ratio |dev| {ratio_dev:.2e} over {ratio_count} steps; -1/10 mode flips {flips}/{eligible} eligible steps; \
         violations from e1: {}",
        from_e1.monotonicity_violations
    );
    if !monotone_claim {
        detail.push_str(&format!(
            " (e1 is an eigenvector of -1/10, so d_k = 10^-k; violations from e2..e5: {others:?})"
        ));
    }
    outcome(contraction_ok && flips_ok && monotone_claim, detail)
}

fn criterion_11() -> Outcome {
    let report = min_width_report(6, &[], Execution::default()).unwrap();
    let witness = report
        .witnesses
        .iter()
        .any(|w| w.class == CellClass::ComplexConvergent && w.cell.params == vec![rat(-1, 10), rat(3, 10)]);
    let counts: Vec<String> = report
        .per_width
        .iter()
        .map(|w| format!("w{}: {} complex", w.width, w.counts.complex()))
        .collect();
    outcome(
        report.min_width == Some(6) && witness,
        format!("minimum width {:?}, witness (-1/10, 3/10) listed: {witness}; {}", report.min_width, counts.join(", ")),
    )
}

fn criterion_12() -> Outcome {
    let mut failures = Vec::new();
    for name in ["a", "b", "c", "d"] {
        let m = mask(name);
        let a = build_local_matrix(&m).unwrap();
        if !a.row_sums().iter().all(|s| *s == int(1)) {
            failures.push(format!("{name}: row sums"));
        }
        let spectrum = a.spectrum().unwrap();
        if !spectrum.eigenvalues.iter().any(|z| (z - c(1.0, 0.0)).norm() < 1e-9) {
            failures.push(format!("{name}: eigenvalue 1"));
        }
        if !necessary_conditions(&m).2 {
            failures.push(format!("{name}: necessary conditions"));
        }
        let mut p = ControlPolygon::delta();
        for level in 0..8 {
            let next = refine_k(&p, &m, 1).unwrap();
            if next.sum() != p.sum() * int(2) {
                failures.push(format!("{name}: sum at level {level}"));
            }
            p = next;
        }
    }
    outcome(failures.is_empty(), if failures.is_empty() { "catalog a-d".into() } else { failures.join("; ") })
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("width-6 example spectrum", criterion_1),
        ("contractivity norm 4/5", criterion_2),
        ("C1 lift mask and complex pair", criterion_3),
        ("width-5 closed form", criterion_4),
        ("width-6 closed form and complex region", criterion_5),
        ("negativity function nonpositive", criterion_6),
        ("C1 width-6 obstruction identity", criterion_7),
        ("tent exactness", criterion_8),
        ("cubic B-spline value", criterion_9),
        ("dynamics", criterion_10),
        ("minimum width", criterion_11),
        ("structural invariants", criterion_12),
    ];
    let mut unexpected = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let id = k + 1;
        let start = Instant::now();
        let result = run();
        let status = if result.pass { "PASS" } else { "FAIL" };
        println!(
            "criterion {id:>2} {status}: {name} ({}) [{:.2}s]",
            result.detail,
            start.elapsed().as_secs_f64()
        );
        if !result.pass {
            if KNOWN_UNATTAINABLE.contains(&id) {
                println!("             known: the statement cannot hold as written; see the project notes");
            } else {
                unexpected += 1;
            }
        }
    }
    if unexpected > 0 {
        println!("{unexpected} criterion/criteria failed");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}

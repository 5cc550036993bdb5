//! Acceptance criteria, one line each. Run with `cargo test -p attain-kit --test acceptance`.

mod common;

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use attain_kit::classify::{classify, Constants};
use attain_kit::constants::{
    gns_constant_estimate, gns_ratio, gns_ratio_of, sobolev_constant, sobolev_quotient_dilated, PiecewiseLinear,
    DEFAULT_RESOLUTION, GNS_DEFAULT_BUDGET,
};
use attain_kit::curves::{CurveParams, ScalarCurve};
use attain_kit::extremal::{build_u_star, lambda_from_tstar, norms, GridSpec};
use attain_kit::halfline::{grid_oracle, maximize_halfline, minimize_halfline, Mode, DEFAULT_TOL};
use attain_kit::params::{Exponent, Problem, ProblemParams, Target};
use attain_kit::verify::{
    run_derivative_checks, run_envelope, run_equality_family, run_maximizer_check, run_monotonicity_scan,
    run_truncation_check, run_truth_table, CheckReport, SuiteConfig,
};

struct Outcome {
    passed: bool,
    summary: String,
}

fn outcome(passed: bool, summary: String) -> Outcome {
    Outcome { passed, summary }
}

fn from_reports(reports: &[CheckReport]) -> Outcome {
    let passed = reports.iter().all(|r| r.passed);
    let summary = reports
        .iter()
        .map(|r| {
            let mut s = format!("{} worst {:.2e} tol {:.0e} over {}", r.name, r.worst_violation, r.tolerance, r.n_cases);
            if let Some(d) = r.details.first() {
                s.push_str(&format!(" [{d}]"));
            }
            s
        })
        .collect::<Vec<_>>()
        .join("; ");
    outcome(passed, summary)
}

fn crit(n: u32, p: f64, gamma: f64, alpha: f64) -> Problem {
    Problem::new(ProblemParams::local(n, Exponent::from_f64(p), Target::Critical, gamma, alpha)).unwrap()
}

fn sub(n: u32, p: f64, q: f64, gamma: f64, alpha: f64) -> Problem {
    Problem::new(ProblemParams::local(n, Exponent::from_f64(p), Target::Value(q.into()), gamma, alpha)).unwrap()
}

fn suite() -> SuiteConfig {
    SuiteConfig::new(common::ground_state().gns_224())
}

fn truth_table() -> Outcome {
    from_reports(&[run_truth_table(&suite()).unwrap()])
}

fn closed_form_thresholds() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut rel = |got: f64, want: f64| worst = worst.max((got - want).abs() / want);
    // gamma = gamma_c, subcritical: inf g = p / gamma_c.
    for (n, p, q) in [(2u32, 2.0, 4.0), (3, 2.0, 4.0), (3, 1.5, 2.5), (4, 3.0, 5.0)] {
        let gc = n as f64 * (q - p) / p;
        let cp = CurveParams::for_problem(&sub(n, p, q, gc, 1.0), 1.0).unwrap();
        rel(minimize_halfline(&ScalarCurve::g(cp), DEFAULT_TOL).unwrap().value, p / gc);
    }
    // gamma = p*, critical: inf g = p / p*.
    for (n, p) in [(5u32, 2.0), (3, 1.5), (7, 2.5), (6, 2.0)] {
        let ps = n as f64 * p / (n as f64 - p);
        let cp = CurveParams::for_problem(&crit(n, p, ps, 1.0), 1.0).unwrap();
        rel(minimize_halfline(&ScalarCurve::g(cp), DEFAULT_TOL).unwrap().value, p / ps);
    }
    // gamma <= p, critical: inf g = 1.
    for gamma in [0.5, 1.0, 1.5, 2.0] {
        let cp = CurveParams::for_problem(&crit(5, 2.0, gamma, 1.0), 1.0).unwrap();
        rel(minimize_halfline(&ScalarCurve::g(cp), DEFAULT_TOL).unwrap().value, 1.0);
    }
    outcome(worst <= 1e-8, format!("worst relative deviation {worst:.2e} over 12 cases (tol 1e-8)"))
}

fn closed_form_d() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut attained = 0;
    let mut cases = 0;
    for gamma in [0.5, 1.0, 1.5, 2.0] {
        for k in [0.25, 0.5, 1.0, 2.0, 4.0] {
            let cp = CurveParams::for_problem(&crit(5, 2.0, gamma, 1.0), 1.0).unwrap().with_kappa(k);
            let r = maximize_halfline(&ScalarCurve::f(cp), DEFAULT_TOL).unwrap();
            let want = k.max(1.0);
            worst = worst.max((r.value - want).abs() / want);
            attained += r.attained as usize;
            cases += 1;
        }
    }
    outcome(
        worst <= 1e-9 && attained == 0,
        format!("worst relative deviation {worst:.2e} (tol 1e-9), attained {attained} of {cases}"),
    )
}

fn random_curve(rng: &mut ChaCha8Rng) -> CurveParams {
    let pick = rng.gen_range(0..4);
    let gamma = rng.gen_range(0.3..8.0);
    let weight = rng.gen_range(0.2..5.0);
    let problem = match pick {
        0 => {
            let n = rng.gen_range(3..9);
            let p = rng.gen_range(1.2..(n as f64).sqrt());
            crit(n, p, gamma, 1.0)
        }
        1 => {
            let n = rng.gen_range(2..7);
            let p = rng.gen_range(1.2..n as f64);
            let ps = if p < n as f64 { n as f64 * p / (n as f64 - p) } else { 4.0 * p };
            let q = rng.gen_range(p + 0.1 * (ps - p)..p + 0.9 * (ps - p));
            sub(n, p, q, gamma, 1.0)
        }
        2 => {
            let n = rng.gen_range(2..7);
            let s = rng.gen_range(0.1..0.45 * n as f64);
            Problem::new(ProblemParams::fractional(n, Exponent::from_f64(s), Target::Critical, gamma, 1.0)).unwrap()
        }
        _ => {
            let n = rng.gen_range(2..7);
            let s = rng.gen_range(0.1..0.45 * n as f64);
            let top = 2.0 * n as f64 / (n as f64 - 2.0 * s);
            let q = rng.gen_range(2.0 + 0.1 * (top - 2.0)..2.0 + 0.9 * (top - 2.0));
            Problem::new(ProblemParams::fractional(n, Exponent::from_f64(s), Target::Value(q.into()), gamma, 1.0))
                .unwrap()
        }
    };
    CurveParams::for_problem(&problem, weight).unwrap()
}

fn optimizer_vs_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    let mut detail = String::new();
    for i in 0..200 {
        let cp = random_curve(&mut rng);
        let (curve, mode) = if i % 2 == 0 {
            (ScalarCurve::f(cp), Mode::Max)
        } else {
            (ScalarCurve::g(cp), Mode::Min)
        };
        let fast = match mode {
            Mode::Max => maximize_halfline(&curve, DEFAULT_TOL),
            Mode::Min => minimize_halfline(&curve, DEFAULT_TOL),
        }
        .unwrap();
        let slow = grid_oracle(&curve, 1_000_000, mode).unwrap();
        let d = if fast.value == slow.value { 0.0 } else { (fast.value - slow.value).abs() };
        if d > worst {
            worst = d;
            detail = format!(" at {cp:?}");
        }
    }
    outcome(worst <= 1e-8, format!("worst |delta value| {worst:.2e} over 200 curves (tol 1e-8){detail}"))
}

fn sobolev_quadrature() -> Outcome {
    let (_, grad, lq) = common::talenti_norms_p2(5);
    let s = sobolev_constant(5, 2.0, DEFAULT_RESOLUTION).unwrap();
    let beta_err = (s.value - lq / grad).abs() / (lq / grad);
    let mut scale_err: f64 = 0.0;
    for b in [1e-3, 0.1, 10.0, 1e3] {
        let d = sobolev_quotient_dilated(5, 2.0, b, DEFAULT_RESOLUTION).unwrap();
        scale_err = scale_err.max((d - s.value).abs() / s.value);
    }
    let pairs = [(2u32, 1.5), (3, 1.5), (3, 2.0), (3, 2.9), (4, 2.0), (4, 3.5), (5, 2.0), (6, 1.2), (7, 3.0), (10, 4.0)];
    let mut honest = 0;
    let mut talenti_err: f64 = 0.0;
    for (n, p) in pairs {
        let lo = sobolev_constant(n, p, DEFAULT_RESOLUTION).unwrap();
        let hi = sobolev_constant(n, p, 2 * DEFAULT_RESOLUTION).unwrap();
        honest += ((hi.value - lo.value).abs() < lo.err_bound) as usize;
        let t = common::talenti(n, p);
        talenti_err = talenti_err.max((lo.value - t).abs() / t);
    }
    outcome(
        beta_err <= 1e-8 && scale_err <= 1e-10 && honest == pairs.len() && talenti_err <= 1e-8,
        format!(
            "Beta oracle {beta_err:.2e} (tol 1e-8), dilation {scale_err:.2e} (tol 1e-10), honest err_bound {honest}/{}, Talenti {talenti_err:.2e}",
            pairs.len()
        ),
    )
}

fn gns_estimator() -> Outcome {
    let oracle = common::ground_state().gns_224();
    let est = gns_constant_estimate(2, 2.0, 4.0, GNS_DEFAULT_BUDGET).unwrap();
    let rel = (est.constant.value - oracle).abs() / oracle;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = f64::NEG_INFINITY;
    for i in 0..50 {
        let ratio = if i % 2 == 0 {
            let m = rng.gen_range(4..40);
            let radius = rng.gen_range(1.0..15.0);
            let r: Vec<f64> = (0..=m).map(|j| radius * j as f64 / m as f64).collect();
            let mut u: Vec<f64> = (0..m).map(|_| rng.gen_range(0.0..1.0)).collect();
            u.sort_by(|a, b| b.total_cmp(a));
            u.push(0.0);
            gns_ratio(2, 2.0, 4.0, &PiecewiseLinear::new(r, u).unwrap())
        } else {
            let parts: Vec<(f64, f64)> = (0..rng.gen_range(1..4))
                .map(|_| (rng.gen_range(0.1..2.0), rng.gen_range(0.2..3.0)))
                .collect();
            let u = |r: f64| parts.iter().map(|&(a, w)| a * (-(r / w).powi(2)).exp()).sum::<f64>();
            let du = |r: f64| parts.iter().map(|&(a, w)| -2.0 * a * r / (w * w) * (-(r / w).powi(2)).exp()).sum::<f64>();
            gns_ratio_of(2, 2.0, 4.0, u, du, 30.0, 600)
        };
        worst = worst.max(ratio / oracle - 1.0);
    }
    let bound_ok = worst < 0.0 && est.constant.value <= oracle * (1.0 + 1e-12);
    outcome(
        rel <= 1e-4 && bound_ok,
        format!("estimate {:.12} vs oracle {oracle:.12}: rel {rel:.2e} (tol 1e-4); 50 profiles max ratio/B - 1 = {worst:.2e}", est.constant.value),
    )
}

fn envelope_and_equality() -> Outcome {
    let cfg = suite();
    let mut o = from_reports(&[
        run_envelope(&cfg).unwrap(),
        run_equality_family(&cfg).unwrap(),
        run_maximizer_check(&cfg).unwrap(),
    ]);
    // t_star from the classifier against the brute-force argmax.
    let s = sobolev_constant(5, 2.0, DEFAULT_RESOLUTION).unwrap().value;
    let w = s.powf(10.0 / 3.0);
    let prob = crit(5, 2.0, 4.0, 1.0 / w);
    let v = classify(&prob, &Constants::sobolev(s)).unwrap();
    let cp = CurveParams::for_problem(&prob, w).unwrap();
    let brute = grid_oracle(&ScalarCurve::f(cp), 1_000_000, Mode::Max).unwrap();
    let (t, tb) = (v.t_star.unwrap(), brute.argopt.unwrap());
    let u = build_u_star(5, 2.0, &GridSpec::default()).unwrap();
    let nm = norms(&u, 2.0, 10.0 / 3.0).unwrap();
    let (l, lb) = (lambda_from_tstar(t, &nm, 4.0, 5).unwrap(), lambda_from_tstar(tb, &nm, 4.0, 5).unwrap());
    let lam_err = (l - lb).abs() / l;
    o.passed &= lam_err <= 1e-4;
    o.summary.push_str(&format!("; lambda vs grid argmax {lam_err:.2e} (tol 1e-4)"));
    o
}

fn derivative_and_monotonicity() -> Outcome {
    from_reports(&[run_derivative_checks().unwrap(), run_monotonicity_scan(&suite()).unwrap()])
}

fn truncated_approach() -> Outcome {
    from_reports(&[run_truncation_check(&suite()).unwrap()])
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome, u64);
    let criteria: [Criterion; 9] = [
        ("truth table of verdicts", truth_table, 10),
        ("closed-form thresholds", closed_form_thresholds, 3),
        ("closed-form D for gamma <= p", closed_form_d, 1),
        ("optimizer against grid oracle", optimizer_vs_oracle, 30),
        ("Sobolev constant quadrature", sobolev_quadrature, 10),
        ("interpolation constant estimator", gns_estimator, 60),
        ("envelope and equality family", envelope_and_equality, 60),
        ("derivative signs and threshold monotonicity", derivative_and_monotonicity, 60),
        ("truncated family approaches D", truncated_approach, 60),
    ];
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let took = start.elapsed();
        let ok = o.passed && took < Duration::from_secs(*budget);
        failed += (!ok) as usize;
        println!(
            "criterion {} {}: {name} ({:.2} s, budget {budget} s): {}",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            o.summary
        );
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
    println!("all {} criteria passed", criteria.len());
}

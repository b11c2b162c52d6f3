//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! nonzero when any fails. Pass criterion numbers as arguments to run a
//! subset, e.g. `cargo test --test acceptance -- 5 8`.

use std::f64::consts::E;
use std::path::Path;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vortbound::bounds::constants::TABLE;
use vortbound::bounds::{
    bound_enstrophy_time_integral, bound_grad_3eps, bound_grad_l2, bound_l2eps_norm,
    bound_lp_sup_growth, bound_second_grad_integral, bound_weighted_grad_integral,
    continuation_schedule, n_threshold, n_threshold_detail, triple_log_envelope, BoundInputs,
};
use vortbound::diagnostics::{max_interior_residual, weighted_dissipation};
use vortbound::solver::{run_simulation, FlowState};
use vortbound::spectral::{
    biot_savart_velocity, curl, forward_transform, gradient, inverse_transform,
};
use vortbound::{LogScalar, ScalarField, SpectralVectorField, VectorField};
use vortbound_harness::{init_scenario, run, RunOutcome, ScenarioConfig, ScenarioName};

struct Verdict {
    pass: bool,
    detail: String,
}

impl Verdict {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self { pass, detail: detail.into() }
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn bundled(name: &str) -> ScenarioConfig {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(format!("{name}.toml"));
    ScenarioConfig::load(&path).expect("bundled scenario parses")
}

/// Scenario runs shared between criteria.
struct Runs {
    root: tempfile::TempDir,
    done: Vec<(ScenarioName, RunOutcome, f64)>,
}

impl Runs {
    fn get(&mut self, name: ScenarioName) -> &(ScenarioName, RunOutcome, f64) {
        if let Some(i) = self.done.iter().position(|(n, _, _)| *n == name) {
            return &self.done[i];
        }
        let config = bundled(name.as_str());
        let start = Instant::now();
        let outcome = run(&config, Some(self.root.path())).expect("bundled scenario runs");
        let seconds = start.elapsed().as_secs_f64();
        self.done.push((name, outcome, seconds));
        self.done.last().unwrap()
    }
}

fn physical(w: &SpectralVectorField) -> [Vec<f64>; 3] {
    let f = inverse_transform(w).unwrap();
    std::array::from_fn(|c| f.component(c).samples().to_vec())
}

fn spectral_identities(_: &mut Runs) -> Verdict {
    let start = Instant::now();
    let mut worst_curl: f64 = 0.0;
    let mut worst_parseval: f64 = 0.0;
    let mut fields = 0;
    for n in [16, 32] {
        let mut configs: Vec<ScenarioConfig> = ScenarioName::ALL
            .into_iter()
            .map(|s| ScenarioConfig { n, ..ScenarioConfig::new(s) })
            .collect();
        for seed in 1..=4 {
            configs.push(ScenarioConfig {
                n,
                seed: Some(seed),
                amplitude: 3.0,
                ..ScenarioConfig::new(ScenarioName::RandomSolenoidal)
            });
        }
        for c in &configs {
            let w = init_scenario(c).unwrap().omega;
            let back = curl(&biot_savart_velocity(&w).unwrap());
            worst_curl = worst_curl.max(back.add_scaled(-1.0, &w).unwrap().mode_norm() / w.mode_norm());
            let p = physical(&w);
            let direct: f64 = p.iter().flatten().map(|v| v * v).sum::<f64>() * w.grid().cell_volume();
            worst_parseval = worst_parseval.max(rel(w.l2_norm(), direct.sqrt()));
            fields += 1;
        }
    }
    let seconds = start.elapsed().as_secs_f64();
    Verdict::new(
        worst_curl <= 1e-10 && worst_parseval <= 1e-10 && seconds < 10.0,
        format!(
            "{fields} fields on n=16,32; curl(BS w) rel err {worst_curl:.2e}, \
             Parseval rel err {worst_parseval:.2e}, {seconds:.2}s"
        ),
    )
}

fn beltrami_decay(runs: &mut Runs) -> Verdict {
    let (_, outcome, seconds) = runs.get(ScenarioName::BeltramiAbc);
    let samples = outcome.series.samples();
    let (first, last) = (samples[0], samples[samples.len() - 1]);
    let nu = outcome.manifest.config.nu;
    let expected = first.l2 * (-nu * last.t).exp();
    let err = rel(last.l2, expected);
    let worst = samples
        .iter()
        .map(|s| rel(s.l2, first.l2 * (-nu * s.t).exp()))
        .fold(0.0, f64::max);
    Verdict::new(
        last.t == 1.0 && err <= 1e-6 && *seconds < 120.0,
        format!(
            "|w|_2(1) = {:.12}, exact {expected:.12}, rel err {err:.2e} (worst over {} samples {worst:.2e}); \
             run with diagnostics {seconds:.1}s",
            last.l2,
            samples.len()
        ),
    )
}

fn enstrophy_balance(runs: &mut Runs) -> Verdict {
    let tg = max_interior_residual(&runs.get(ScenarioName::TaylorGreen).1.residuals);
    let tg_cfg = runs.get(ScenarioName::TaylorGreen).1.manifest.config.clone();
    let abc = max_interior_residual(&runs.get(ScenarioName::BeltramiAbc).1.residuals);
    Verdict::new(
        tg <= 1e-2 && abc <= 1e-4 && tg_cfg.n == 32 && tg_cfg.dt == 1e-3 && tg_cfg.t_end == 0.5,
        format!("max interior residual: taylor_green {tg:.2e} (<= 1e-2), beltrami_abc {abc:.2e} (<= 1e-4)"),
    )
}

/// `int grad(|w|^(2eps/3) w) : grad w` without the product-rule expansion.
fn unexpanded_dissipation(w: &SpectralVectorField, eps: f64) -> f64 {
    let g = *w.grid();
    let p = physical(w);
    let a = 2.0 * eps / 3.0;
    let comps: [ScalarField; 3] = std::array::from_fn(|j| {
        let v = (0..g.len())
            .map(|q| {
                let m = (p[0][q] * p[0][q] + p[1][q] * p[1][q] + p[2][q] * p[2][q]).sqrt();
                m.powf(a) * p[j][q]
            })
            .collect();
        ScalarField::new(g, v).unwrap()
    });
    let weighted = forward_transform(&VectorField::new(comps).unwrap()).unwrap();
    let (gw, gv) = (gradient(&weighted), gradient(w));
    let mut sum = 0.0;
    for i in 0..3 {
        let row = |grad: &vortbound::SpectralGradient| {
            SpectralVectorField::new(g, std::array::from_fn(|j| grad.component(i, j).to_vec())).unwrap()
        };
        let (lhs, rhs) = (physical(&row(&gw)), physical(&row(&gv)));
        for j in 0..3 {
            sum += lhs[j].iter().zip(&rhs[j]).map(|(x, y)| x * y).sum::<f64>();
        }
    }
    sum * g.cell_volume()
}

fn weighted_dissipation_identity(_: &mut Runs) -> Verdict {
    let eps = 0.01;
    let mut worst: f64 = 0.0;
    let mut min_value = f64::INFINITY;
    for seed in 0..100 {
        let config = ScenarioConfig {
            n: 16,
            seed: Some(seed),
            ..ScenarioConfig::new(ScenarioName::RandomSolenoidal)
        };
        let w = init_scenario(&config).unwrap().omega;
        let expanded = weighted_dissipation(&w, eps).unwrap();
        worst = worst.max(rel(expanded, unexpanded_dissipation(&w, eps)));
        min_value = min_value.min(expanded);
    }
    Verdict::new(
        worst <= 1e-2 && min_value >= 0.0,
        format!("100 random fields at n=16, eps={eps}: worst rel diff {worst:.2e}, min value {min_value:.3e}"),
    )
}

fn ln_check(label: &str, got: LogScalar, expected_ln: f64, worst: &mut f64, lines: &mut Vec<String>) {
    let err = if expected_ln == 0.0 {
        got.ln().abs()
    } else {
        rel(got.ln(), expected_ln)
    };
    *worst = worst.max(if got.is_overflow() { f64::INFINITY } else { err });
    lines.push(format!("{label} ln {:.6e} ({err:.1e})", got.ln()));
}

fn bound_transcription(_: &mut Runs) -> Verdict {
    let mut worst: f64 = 0.0;
    let mut lines = Vec::new();
    let zero = BoundInputs::zeroed(1.0);

    let unit_n = BoundInputs { n: 1.0, ..zero };
    ln_check("enstrophy(N=1,C=0)", bound_enstrophy_time_integral(&unit_n).unwrap(), 4.57f64.ln(), &mut worst, &mut lines);
    let unit_nc = BoundInputs { n: 1.0, c: 1.0, ..zero };
    ln_check(
        "enstrophy(N=1,C=1)",
        bound_enstrophy_time_integral(&unit_nc).unwrap(),
        (1.075e22f64 + 9.6 + 4.57).ln(),
        &mut worst,
        &mut lines,
    );

    ln_check("l2eps(zero)", bound_l2eps_norm(&zero).unwrap(), 0.0, &mut worst, &mut lines);
    let ones = BoundInputs { l2eps_t1: 1.0, ..zero };
    ln_check("l2eps(l2eps_t1=1)", bound_l2eps_norm(&ones).unwrap(), 2f64.ln() / 0.253, &mut worst, &mut lines);

    ln_check("weighted(nu=1)", bound_weighted_grad_integral(&zero).unwrap(), 1.97f64.ln(), &mut worst, &mut lines);
    let nu2 = BoundInputs::zeroed(2.0);
    ln_check("weighted(nu=2)", bound_weighted_grad_integral(&nu2).unwrap(), 0.985f64.ln(), &mut worst, &mut lines);

    let grad = BoundInputs { grad_l2_t1: 1.0, ..zero };
    let g = bound_grad_l2(&grad).unwrap();
    ln_check("grad_l2", g, 2.432e7, &mut worst, &mut lines);
    let grad_as_double_is_inf = g.value() == f64::INFINITY;

    let s1 = bound_second_grad_integral(&grad).unwrap();
    ln_check("second_grad(nu=1)", s1, 1.945f64.ln() + 4.864e7, &mut worst, &mut lines);
    let grad2 = BoundInputs { grad_l2_t1: 1.0, ..nu2 };
    let s2 = bound_second_grad_integral(&grad2).unwrap();
    ln_check("second_grad(nu=2)", s2, (1.945f64 / 2.0).ln() + 4.864e7 / 4.0, &mut worst, &mut lines);

    let g3 = bound_grad_3eps(&zero).unwrap();
    let zero_norms_zero = bound_grad_l2(&zero).unwrap().is_zero() && bound_second_grad_integral(&zero).unwrap().is_zero();

    let lp_one = BoundInputs { n: 1.0, t2: 1.0, ..zero };
    ln_check("lp_sup(N=1,span=1)", bound_lp_sup_growth(1.0, &lp_one, 0.0).unwrap(), 2.2e5, &mut worst, &mut lines);
    let lp_exact = bound_lp_sup_growth(3.25, &zero, 7.0).unwrap().value() == 3.25;

    let thr_in = BoundInputs { sup_t1: 1.0, ..zero };
    let thr = n_threshold_detail(&thr_in).unwrap();
    ln_check("threshold innermost exponent", thr.exponent_chain[0], (7.294e7f64 + 1.0).ln(), &mut worst, &mut lines);
    let thr_overflow = n_threshold(&thr_in).unwrap().is_overflow() && thr.exponent_chain.len() == 3;

    let env_zero = triple_log_envelope(1.0, 0.0, 0.0, 0.0).unwrap();
    ln_check("envelope(t=t1)", env_zero, 2.0 * E, &mut worst, &mut lines);
    let env_one = triple_log_envelope(1.0, 1.0, 0.0, 0.0).unwrap();
    ln_check("envelope(t-t1=1)", env_one, E.exp() + E, &mut worst, &mut lines);

    let anchors = [
        r"1.075 \cdot 10^{22}",
        r"e^{4.22 \ N^{\frac{1}{2}}(t_2-t_1)}",
        r"\frac{1.97}{\nu}",
        r"8.16 \cdot 10^4",
        r"\frac{1.945}{\nu}",
        r"2.48 \cdot 10^3",
        r"1.1 \cdot 10^5 (N^2+1)",
        r"2.07 \sqrt{N} + 12.78",
    ];
    let missing: Vec<&str> = anchors
        .iter()
        .copied()
        .filter(|a| !TABLE.iter().any(|c| c.anchor == *a))
        .collect();

    let pass = worst <= 1e-12
        && grad_as_double_is_inf
        && g3.is_overflow()
        && zero_norms_zero
        && lp_exact
        && thr_overflow
        && missing.is_empty();
    Verdict::new(
        pass,
        format!(
            "worst log-space rel err {worst:.1e} over {} values; grad_3eps and threshold overflow: {}, {}; \
             {}/8 anchors in the constants table{}",
            lines.len(),
            g3.is_overflow(),
            thr_overflow,
            8 - missing.len(),
            if missing.is_empty() { String::new() } else { format!(" (missing {missing:?})") }
        ),
    )
}

fn bound_satisfaction(runs: &mut Runs) -> Verdict {
    let mut total_seconds = 0.0;
    let mut parts = Vec::new();
    let mut pass = true;
    for s in ScenarioName::ALL {
        let (_, outcome, seconds) = runs.get(s);
        total_seconds += seconds;
        let good = outcome
            .reports
            .iter()
            .filter(|r| r.satisfied && (r.bound.is_overflow() || r.log_margin > 0.0))
            .count();
        pass &= good == 8 && outcome.reports.len() == 8 && outcome.manifest.config.n == 32;
        parts.push(format!("{s} {good}/{}", outcome.reports.len()));
    }
    pass &= total_seconds < 600.0;
    Verdict::new(pass, format!("{}; {total_seconds:.0}s for the four runs", parts.join(", ")))
}

type BoundFn = fn(&BoundInputs) -> vortbound::Result<LogScalar>;

fn lp_sup(inp: &BoundInputs) -> vortbound::Result<LogScalar> {
    bound_lp_sup_growth(inp.sup_t1, inp, inp.grad_3eps_t1_pow)
}

const BOUNDS: [BoundFn; 8] = [
    bound_enstrophy_time_integral,
    bound_l2eps_norm,
    bound_weighted_grad_integral,
    bound_grad_l2,
    bound_second_grad_integral,
    bound_grad_3eps,
    lp_sup,
    n_threshold,
];

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    if rng.random_bool(0.1) {
        0.0
    } else {
        rng.random_range(lo.ln()..hi.ln()).exp()
    }
}

/// `a >= b` up to round-off in the logarithm.
fn dominates(a: LogScalar, b: LogScalar) -> bool {
    a.is_overflow() || (!b.is_overflow() && a.ln() >= b.ln() - 1e-12 * b.ln().abs().max(1.0))
}

fn monotonicity(_: &mut Runs) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut violations = 0;
    let mut finite_evaluations = 0;
    for _ in 0..1000 {
        let t1 = rng.random_range(0.0..1.0);
        let base = BoundInputs {
            nu: log_uniform(&mut rng, 1e-2, 1e6).max(1e-2),
            t1,
            t2: t1 + log_uniform(&mut rng, 1e-4, 2.0),
            n: log_uniform(&mut rng, 1e-3, 1e3),
            c: log_uniform(&mut rng, 1e-3, 1e3),
            l2eps_t1: log_uniform(&mut rng, 1e-3, 1e3),
            grad_l2_t1: log_uniform(&mut rng, 1e-3, 1e3),
            grad_3eps_t1_pow: log_uniform(&mut rng, 1e-3, 1e3),
            sup_t1: 1.0 + log_uniform(&mut rng, 1e-3, 1e3),
            ..BoundInputs::zeroed(1.0)
        };
        let grow = 1.0 + rng.random_range(0.01..3.0);
        let more_n = BoundInputs { n: base.n * grow + 0.01, ..base };
        let more_c = BoundInputs { c: base.c * grow + 0.01, ..base };
        let longer = BoundInputs { t2: base.t1 + (base.t2 - base.t1) * grow + 0.01, ..base };
        let viscous = BoundInputs { nu: base.nu * grow, ..base };
        for f in BOUNDS {
            let b = f(&base).unwrap();
            finite_evaluations += usize::from(!b.is_overflow());
            let ok = dominates(f(&more_n).unwrap(), b)
                && dominates(f(&more_c).unwrap(), b)
                && dominates(f(&longer).unwrap(), b)
                && dominates(b, f(&viscous).unwrap());
            violations += usize::from(!ok);
        }
    }

    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let a = rng.random_range(-300.0f64..300.0).exp2().min(1e300);
        let b = rng.random_range(-300.0f64..300.0).exp2().min(1e300);
        let p = rng.random_range(-1.0..1.0);
        let (la, lb) = (LogScalar::new(a), LogScalar::new(b));
        let checks = [
            ((la * lb).value(), a * b),
            ((la + lb).value(), a + b),
            (la.pow(p).value(), a.powf(p)),
        ];
        for (got, want) in checks {
            if want.is_finite() && want > 0.0 && want.is_normal() {
                worst = worst.max(rel(got, want));
            }
        }
    }
    Verdict::new(
        violations == 0 && worst <= 1e-12,
        format!(
            "{violations} monotonicity violations in 1000 tuples x 8 bounds x 4 directions \
             ({finite_evaluations} finite base values); LogScalar worst rel err {worst:.1e} on 10^4 pairs"
        ),
    )
}

fn envelope_and_schedule(_: &mut Runs) -> Verdict {
    let mut worst_env: f64 = 0.0;
    for base in [0.0f64, 1.0, 20.0, 1e3] {
        let limit = base.max(E.powf(E));
        let v = triple_log_envelope(1e6, 0.0, 0.0, base).unwrap().value();
        worst_env = worst_env.max(rel(v, limit));
    }
    let s = continuation_schedule(1.0, 1.0, 1.0, 1.0, Some(1.0)).unwrap();
    let expected_step = 1.0 / (2.0 * (2.0 * E).exp());
    let first_err = (s.first_step - 0.5).abs();
    let step_err = rel(s.subsequent_step, expected_step);
    let interior_err = s.steps[1..s.steps.len() - 1]
        .iter()
        .map(|&h| rel(h, expected_step))
        .fold(0.0, f64::max);
    let tiled = s.intervals[0][0] == 0.0 && s.intervals.last().unwrap()[1] == 1.0;
    Verdict::new(
        worst_env <= 1e-5 && first_err <= 1e-12 && step_err <= 1e-12 && interior_err <= 1e-12 && tiled,
        format!(
            "envelope at n=1e6 worst rel err {worst_env:.2e}; first step err {first_err:.1e}, \
             subsequent step {:.6e} (rel err {step_err:.1e}), {} intervals tiling [0, 1]",
            s.subsequent_step,
            s.intervals.len()
        ),
    )
}

/// Relative round-off floor below which a global error carries no
/// truncation signal.
const ROUND_OFF: f64 = 1e-12;

fn final_state(initial: &FlowState, config: &ScenarioConfig, dt: f64) -> SpectralVectorField {
    let solver = vortbound::solver::SolverConfig {
        dt,
        record_stride: usize::MAX,
        ..config.solver()
    };
    run_simulation(initial, &solver).unwrap().last().unwrap().omega.clone()
}

fn temporal_order(_: &mut Runs) -> Verdict {
    let ladder = [2e-3, 1e-3, 5e-4];

    let config = bundled("beltrami_abc");
    let initial = init_scenario(&config).unwrap();
    let exact = initial.omega.scaled((-config.nu * config.t_end).exp());
    let errors: Vec<f64> = ladder
        .iter()
        .map(|&dt| {
            final_state(&initial, &config, dt).add_scaled(-1.0, &exact).unwrap().mode_norm() / exact.mode_norm()
        })
        .collect();
    let literal: Vec<f64> = errors.windows(2).map(|e| (e[0] / e[1]).log2()).collect();
    let show = |v: &[f64], f: fn(&f64) -> String| v.iter().map(f).collect::<Vec<_>>().join(", ");
    let literal_ok = literal.iter().all(|&p| p >= 3.7);
    let exact_to_round_off = errors.iter().all(|&e| e <= ROUND_OFF);

    // the same ladder on a flow with a nonzero nonlinear term
    let stiff = ScenarioConfig {
        n: 16,
        seed: Some(11),
        amplitude: 20.0,
        t_end: 0.1,
        ..ScenarioConfig::new(ScenarioName::RandomSolenoidal)
    };
    let start = init_scenario(&stiff).unwrap();
    let finals: Vec<SpectralVectorField> = ladder.iter().map(|&dt| final_state(&start, &stiff, dt)).collect();
    let d0 = finals[0].add_scaled(-1.0, &finals[1]).unwrap().mode_norm();
    let d1 = finals[1].add_scaled(-1.0, &finals[2]).unwrap().mode_norm();
    let self_order = (d0 / d1).log2();
    let signal = d1 / finals[2].mode_norm() > 1e3 * f64::EPSILON;

    let beltrami_ok = literal_ok || exact_to_round_off;
    Verdict::new(
        beltrami_ok && self_order >= 3.7 && signal,
        format!(
            "beltrami_abc errors [{}] (orders [{}]){}; \
             random_solenoidal n=16 self-convergence order {self_order:.3} (successive differences {d0:.2e}, {d1:.2e})",
            show(&errors, |e| format!("{e:.2e}")),
            show(&literal, |p| format!("{p:.2}")),
            if exact_to_round_off && !literal_ok {
                ", at round-off on every rung: the integrating factor is exact on this flow"
            } else {
                ""
            }
        ),
    )
}

type Criterion = (u32, &'static str, fn(&mut Runs) -> Verdict);

const CRITERIA: [Criterion; 9] = [
    (1, "spectral identities", spectral_identities),
    (2, "Beltrami exact decay", beltrami_decay),
    (3, "enstrophy balance", enstrophy_balance),
    (4, "weighted dissipation identity", weighted_dissipation_identity),
    (5, "bound formula transcription", bound_transcription),
    (6, "bound satisfaction on bundled scenarios", bound_satisfaction),
    (7, "monotonicity and LogScalar algebra", monotonicity),
    (8, "envelope limit and continuation schedule", envelope_and_schedule),
    (9, "temporal convergence", temporal_order),
];

fn main() {
    let selected: Vec<u32> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let mut runs = Runs {
        root: tempfile::tempdir().expect("temporary output root"),
        done: Vec::new(),
    };
    let mut failed = Vec::new();
    for (id, title, check) in CRITERIA {
        if !selected.is_empty() && !selected.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let verdict = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| check(&mut runs)))
            .unwrap_or_else(|_| Verdict::new(false, "panicked"));
        println!(
            "criterion {id} {}: {title}: {} [{:.1}s]",
            if verdict.pass { "PASS" } else { "FAIL" },
            verdict.detail,
            start.elapsed().as_secs_f64()
        );
        if !verdict.pass {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all selected criteria passed");
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}

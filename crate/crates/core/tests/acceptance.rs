//! End-to-end acceptance suite. Each criterion prints one PASS/FAIL line to
//! stderr (written directly, so it shows without `--nocapture`).

use std::io::Write;
use std::process::Command;
use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use paragrassmann::dynamics::{
    coherent_state_check, discretized_propagator, discretized_propagator_with, exact_propagator,
    hermiticity_check, resolution_of_identity, KernelRule, PGHamiltonian, TimeSign,
};
use paragrassmann::integration::{
    convolve, convolve_via_integral, derivative_conditions, expq_addition_check, factorial_identity_check,
    integral_via_derivatives, pairing_integral, pairing_table_check, unit, CoeffMatrix, IntegralNormalization,
};
use paragrassmann::multimode::{build_multimode, check_relations, MultiModeRep};
use paragrassmann::potts::{delta_expansion_check, four_routes, PottsInstance};
use paragrassmann::qgroup::{build_glq2, build_slq2, check_glq2_relations, HalfInt};
use paragrassmann::{CycloContext, CycloElement, Field, SingleModeRep};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ctx(p: usize) -> Arc<CycloContext> {
    CycloContext::new(p).unwrap()
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// A random nonzero element a + b ω^k with small integer a, b.
fn random_element(ctx: &Arc<CycloContext>, rng: &mut ChaCha8Rng) -> CycloElement {
    loop {
        let a = rng.gen_range(-3i64..=3);
        let b = rng.gen_range(-2i64..=2);
        let k = rng.gen_range(0..ctx.order() as i64);
        let z = ctx.int(a) + ctx.int(b) * ctx.omega_pow(k);
        if !z.is_zero() {
            return z;
        }
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn potts_four_routes() -> Outcome {
    let start = Instant::now();
    let xs = [rat(1, 1), rat(2, 1), rat(3, 1), rat(5, 2)];
    let mut cases = 0;
    for p in 1..=3 {
        for sites in 2..=5 {
            for x in &xs {
                let inst = PottsInstance::new(p, sites, x.clone()).map_err(|e| e.to_string())?;
                let routes = four_routes(&inst).map_err(|e| e.to_string())?;
                ensure(routes.agree(), || format!("p={p} N={sites} x={x}: {routes:?}"))?;
                let xp = x + rat(p as i64, 1);
                let xm = x - rat(1, 1);
                let anchor = num_traits::pow(xp, sites) + rat(p as i64, 1) * num_traits::pow(xm, sites);
                ensure(routes.closed == anchor, || format!("p={p} N={sites} x={x}: closed form"))?;
                cases += 1;
            }
        }
    }
    for (p, sites, expected) in [(1, 2, 10), (2, 3, 66)] {
        let inst = PottsInstance::new(p, sites, rat(2, 1)).unwrap();
        let routes = four_routes(&inst).map_err(|e| e.to_string())?;
        ensure(routes.bruteforce == rat(expected, 1), || {
            format!("spot value p={p} N={sites}: {}", routes.bruteforce)
        })?;
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 60.0, || format!("took {secs:.1} s"))?;
    Ok(format!("{cases} configurations exact, spot values 10 and 66, {secs:.1} s"))
}

fn relation_suites() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for p in 1..=6 {
        let c = ctx(p);
        for _ in 0..3 {
            let betas: Vec<_> = (0..p).map(|_| random_element(&c, &mut rng)).collect();
            let rep = SingleModeRep::new(&c, Some(&betas)).map_err(|e| e.to_string())?;
            let report = rep.check_relations();
            ensure(report.all_passed(), || format!("single p={p}: {:?}", report.failures().collect::<Vec<_>>()))?;
        }
        let rep = SingleModeRep::new(&c, None).unwrap();
        let report = rep.check_q_oscillator().map_err(|e| e.to_string())?;
        ensure(report.all_passed(), || format!("q-oscillator p={p}: {:?}", report.failures().collect::<Vec<_>>()))?;
    }
    for (p, modes) in [(1, 1), (2, 1), (3, 1), (4, 1), (1, 2), (2, 2), (3, 2), (2, 3)] {
        let rep = MultiModeRep::new(&ctx(p), modes).map_err(|e| e.to_string())?;
        let report = check_relations(&rep);
        ensure(report.all_passed(), || format!("multimode p={p} N={modes}: {:?}", report.failures().collect::<Vec<_>>()))?;
    }
    for (p, modes) in [(2, 2), (3, 2), (2, 3)] {
        let aligned = build_multimode(&ctx(p), modes, None, Some(vec![[1, -1]; modes]), 4096)
            .map_err(|e| e.to_string())?;
        ensure(!check_relations(&aligned).all_passed(), || {
            format!("negative control passed at p={p} N={modes}")
        })?;
    }
    Ok("single-mode p<=6 with random β, multimode N<=3, negative control rejected".into())
}

fn integral_calculus() -> Outcome {
    for p in 1..=4 {
        let c = ctx(p);
        let fact = c.q_factorial(p);
        let splits = [
            IntegralNormalization::default_split(&c),
            IntegralNormalization::new(&c, c.one(), fact.clone()).unwrap(),
            IntegralNormalization::new(&c, c.int(2), fact.clone() / c.int(2)).unwrap(),
            IntegralNormalization::new(&c, c.omega_pow(1), fact / c.omega_pow(1)).unwrap(),
        ];
        for (k, norm) in splits.iter().enumerate() {
            let report = pairing_table_check(&c, norm).map_err(|e| e.to_string())?;
            ensure(report.all_passed(), || format!("table p={p} split {k}: {:?}", report.failures().collect::<Vec<_>>()))?;
        }
    }
    for p in 1..=3 {
        let c = ctx(p);
        let norm = IntegralNormalization::default_split(&c);
        for n in 0..=p {
            for m in 0..=p {
                let (f, g) = (unit(&c, n), unit(&c, m));
                let direct = pairing_integral(&c, &f, &g, &norm).map_err(|e| e.to_string())?;
                let via = integral_via_derivatives(&c, &f, &g).map_err(|e| e.to_string())?;
                ensure(direct == via, || format!("p={p} n={n} m={m}: {direct} vs {via}"))?;
                let report = derivative_conditions(&c, &f, &g, &norm).map_err(|e| e.to_string())?;
                ensure(report.all_passed(), || format!("p={p} n={n} m={m}: {:?}", report.failures().collect::<Vec<_>>()))?;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for trial in 0..100 {
        let p = 1 + trial % 3;
        let c = ctx(p);
        let norm = IntegralNormalization::default_split(&c);
        let f1 = CoeffMatrix::from_fn(&c, |_, _| random_element(&c, &mut rng));
        let f2 = CoeffMatrix::from_fn(&c, |_, _| random_element(&c, &mut rng));
        let via = convolve_via_integral(&f1, &f2, &norm).map_err(|e| e.to_string())?;
        ensure(via == convolve(&f1, &f2), || format!("convolution trial {trial} (p={p})"))?;
    }
    Ok("pairing table p<=4 over 4 splits, derivative route p<=3, 100 convolutions".into())
}

fn factorial_and_delta() -> Outcome {
    for p in 1..=6 {
        let c = ctx(p);
        let report = factorial_identity_check(&c);
        ensure(report.all_passed(), || format!("p={p}: {:?}", report.failures().collect::<Vec<_>>()))?;
        let report = delta_expansion_check(&c);
        ensure(report.all_passed(), || format!("p={p}: {:?}", report.failures().collect::<Vec<_>>()))?;
    }
    Ok("p<=6".into())
}

fn expq_addition() -> Outcome {
    for p in 1..=4 {
        let report = expq_addition_check(&ctx(p)).map_err(|e| e.to_string())?;
        ensure(report.all_passed(), || format!("p={p}: {:?}", report.failures().collect::<Vec<_>>()))?;
    }
    Ok("p<=4".into())
}

fn resolution_and_coherent_states() -> Outcome {
    for p in 1..=5 {
        let rep = SingleModeRep::new(&ctx(p), None).unwrap();
        let report = resolution_of_identity(&rep).map_err(|e| e.to_string())?;
        ensure(report.all_passed(), || format!("resolution p={p}: {:?}", report.failures().collect::<Vec<_>>()))?;
    }
    for p in 1..=3 {
        let report = coherent_state_check(&ctx(p), 1).map_err(|e| e.to_string())?;
        ensure(report.all_passed(), || format!("coherent p={p}: {:?}", report.failures().collect::<Vec<_>>()))?;
    }
    Ok("resolution p<=5, coherent states ξ=1 p<=3".into())
}

fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn heat_kernel() -> Outcome {
    let c = ctx(2);
    let ham = PGHamiltonian::new(&c, &[0.0, 1.0, 1.0]).map_err(|e| e.to_string())?;
    let exact = exact_propagator(&ham, 1.0);
    let mut errors = Vec::new();
    for n in [16, 32, 64, 128] {
        let d = discretized_propagator(&ham, 1.0, n).map_err(|e| e.to_string())?;
        errors.push(max_diff(&d, &exact));
    }
    let ratios: Vec<f64> = errors.windows(2).map(|w| w[1] / w[0]).collect();
    ensure(ratios.iter().all(|&r| r <= 0.75), || format!("ratios {ratios:?}"))?;

    // For a diagonal H the displayed kernel composes exactly; only the
    // plus sign reproduces e^(itE_m).
    let direct = discretized_propagator_with(&ham, 1.0, 16, KernelRule::Displayed(TimeSign::Plus))
        .map_err(|e| e.to_string())?;
    ensure(max_diff(&direct, &exact) <= 1e-12, || "plus sign".into())?;
    let minus = discretized_propagator_with(&ham, 1.0, 16, KernelRule::Displayed(TimeSign::Minus))
        .map_err(|e| e.to_string())?;
    ensure(max_diff(&minus, &exact) > 1e-3, || "minus sign unexpectedly exact".into())?;

    for p in 1..=4 {
        let c = ctx(p);
        let mut h = vec![0.0; p + 1];
        h[0] = 0.7;
        let ham = PGHamiltonian::new(&c, &h).unwrap();
        let target = Complex64::new(0.0, 0.7 * 1.3).exp();
        for steps in [1, 2, 5, 16] {
            let d = discretized_propagator(&ham, 1.3, steps).map_err(|e| e.to_string())?;
            ensure(d.iter().all(|v| (v - target).norm() <= 1e-12), || {
                format!("constant H p={p} steps={steps}: {d:?}")
            })?;
        }
    }
    for p in 1..=4 {
        let c = ctx(p);
        let h: Vec<f64> = (0..=p).map(|n| 0.3 + n as f64 * 0.4).collect();
        let report = hermiticity_check(&PGHamiltonian::new(&c, &h).unwrap()).map_err(|e| e.to_string())?;
        ensure(report.all_passed(), || format!("hermiticity p={p}: {:?}", report.failures().collect::<Vec<_>>()))?;
    }
    Ok(format!("errors {errors:.3?}, ratios {ratios:.3?}, constant H exact, H = H†"))
}

fn quantum_group() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for p in 1..=5 {
        let c = ctx(p);
        for twice in [0, 1, 2] {
            let alpha = HalfInt::from_twice(twice);
            let beta = random_element(&c, &mut rng);
            let gamma = random_element(&c, &mut rng);
            let rep = build_glq2(&c, alpha, beta.clone(), gamma).map_err(|e| e.to_string())?;
            let report = check_glq2_relations(&rep);
            ensure(report.all_passed(), || format!("p={p} α={alpha}: {:?}", report.failures().collect::<Vec<_>>()))?;
            ensure(!check_glq2_relations(&rep.perturbed()).all_passed(), || {
                format!("negative control passed at p={p} α={alpha}")
            })?;
            let sl = build_slq2(&c, alpha, beta).map_err(|e| e.to_string())?;
            ensure(sl.qdet == c.one() && check_glq2_relations(&sl).all_passed(), || {
                format!("SL p={p} α={alpha}: qdet {}", sl.qdet)
            })?;
        }
    }
    Ok("p<=5, α ∈ {0, 1/2, 1}".into())
}

fn cli_determinism() -> Outcome {
    let configs: [&[&str]; 5] = [
        &["verify", "--p", "2", "--modes", "2", "--seed", "7"],
        &["potts", "--p", "2", "--sites", "3", "--x", "5/2", "--method", "all", "--exact"],
        &["heat", "--p", "2", "--h", "0,1,1", "--time", "1", "--steps", "16", "--convergence"],
        &["qgroup", "--p", "3", "--alpha", "1/2", "--beta", "2", "--sl"],
        &["repr", "--p", "3", "--beta", "1,2,1/3"],
    ];
    for args in configs {
        let run = || {
            Command::new(env!("CARGO_BIN_EXE_pga"))
                .args(args)
                .output()
                .expect("pga runs")
        };
        let (a, b) = (run(), run());
        ensure(a.status.code() == Some(0), || format!("{args:?} exited {:?}", a.status.code()))?;
        ensure(a.stdout == b.stdout && !a.stdout.is_empty(), || format!("{args:?} differs"))?;
        serde_json::from_slice::<serde_json::Value>(&a.stdout).map_err(|e| format!("{args:?}: {e}"))?;
    }
    Ok(format!("{} configurations byte-identical", configs.len()))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 9] = [
        ("potts four-route agreement", potts_four_routes),
        ("algebra relation suites", relation_suites),
        ("integral calculus", integral_calculus),
        ("q-factorial identity and delta expansion", factorial_and_delta),
        ("exp_q addition law", expq_addition),
        ("resolution of identity and coherent states", resolution_and_coherent_states),
        ("heat kernel", heat_kernel),
        ("quantum group", quantum_group),
        ("CLI determinism", cli_determinism),
    ];
    let mut failed = Vec::new();
    let mut err = std::io::stderr().lock();
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        let (status, detail) = match &outcome {
            Ok(d) => ("PASS", d.clone()),
            Err(d) => ("FAIL", d.clone()),
        };
        let _ = writeln!(err, "criterion {}: {status} {name} ({detail}; {secs:.2} s)", k + 1);
        if outcome.is_err() {
            failed.push(k + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use dyad_core::coupling::rates_for;
use dyad_core::dynamics::{amplitudes, populations};
use dyad_core::emission::{photon_momentum_rate, AngularGrid, EmissionOptions};
use dyad_core::forces::{
    cm_displacement, conservative_forces, displacement_curve, offresonant_force, offresonant_integral,
    rydberg_scaling_audit, OffResonantQuadrature,
};
use dyad_core::greens;
use dyad_core::oracle::{derivative, integrate_effective_2level, second_derivative_scalar};
use dyad_core::units::{lithium_70c, to_internal, PairParams, CODATA_2018, LI7_MASS_U};
use dyad_core::{Complex64, Vec3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    passed: bool,
    summary: String,
}

fn li70(x: f64) -> PairParams {
    to_internal(&lithium_70c()).unwrap().1.with_x(x)
}

fn random_unit(rng: &mut ChaCha8Rng) -> Vec3 {
    loop {
        let v = Vec3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        if v.norm() > 0.2 && v.norm() < 1.0 {
            return v.normalize();
        }
    }
}

fn unitarity() -> Outcome {
    let start = Instant::now();
    let (mut identity, mut defect) = (0.0f64, 0.0f64);
    for i in 0..100 {
        let x = 0.1 + 19.9 * i as f64 / 99.0;
        let r = rates_for(&li70(x)).unwrap();
        for j in 0..100 {
            let t = 10.0 * j as f64 / 99.0;
            let p = populations(&r, t).unwrap();
            identity = identity.max((p.unitarity_sum - (2.0 * r.domega_domega).cosh()).abs());
            if x >= 0.3 {
                defect = defect.max(p.unitarity_defect().abs());
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Outcome {
        passed: identity <= 1e-12 && defect < 1e-4 && secs < 5.0,
        summary: format!("identity {identity:.2e} (tol 1e-12), Li 70C defect {defect:.2e} (tol 1e-4), {secs:.2} s"),
    }
}

fn momentum() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let mut worst = 0.0f64;
    let mut failure = None;
    for _ in 0..100 {
        let x = rng.random_range(0.1..20.0);
        let t = rng.random_range(0.0..10.0);
        let r = rates_for(&li70(x)).unwrap();
        let grid = AngularGrid::for_separation(x, &r.params.rhat);
        match photon_momentum_rate(&r, t, &grid, EmissionOptions::default(), 1e-9) {
            Ok(p) => {
                let (fa, fb, _) = conservative_forces(&r, t).unwrap();
                let net = fa + fb;
                worst = worst.max((p + net).norm() / net.norm());
            }
            Err(e) => failure = Some(format!("x={x} T={t}: {e}")),
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Outcome {
        passed: failure.is_none() && worst <= 1e-6 && secs < 60.0,
        summary: format!(
            "max relative residual {worst:.2e} (tol 1e-6) over 100 points, {secs:.2} s{}",
            failure.map(|f| format!(", {f}")).unwrap_or_default()
        ),
    }
}

fn oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(30);
    let times: Vec<f64> = (0..=400).map(|k| 0.025 * k as f64).collect();
    let mut worst = 0.0f64;
    let i = Complex64::i();
    for _ in 0..20 {
        let mut p = li70(rng.random_range(0.1..5.0));
        p.rhat = random_unit(&mut rng);
        p.dipole_a = random_unit(&mut rng);
        p.dipole_b = random_unit(&mut rng);
        let r = rates_for(&p).unwrap().without_retardation();
        let ode = integrate_effective_2level(r.omega_tilde(), 1.0, &times, 1e-12).unwrap();
        for (t, (ca, cb)) in ode.times.iter().zip(&ode.amplitudes) {
            let a = amplitudes(&r, *t).unwrap();
            worst = worst.max((a.a_envelope + i * ca).norm()).max((a.b_envelope + i * cb).norm());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Outcome {
        passed: worst <= 1e-8 && secs < 30.0,
        summary: format!("max abs error {worst:.2e} (tol 1e-8), 20 couplings, {secs:.2} s"),
    }
}

fn near_field() -> Outcome {
    let r = rates_for(&li70(1e-3)).unwrap();
    let mut worst = 0.0f64;
    for t in [0.5, 1.0, 3.0] {
        let p = populations(&r, t).unwrap().p_gamma;
        let expect = 0.5 * (1.0 - (-2.0 * t).exp()) * (2.0 * r.domega_domega).exp();
        worst = worst.max(((p - expect) / expect).abs());
    }
    let asymptote = populations(&r, 50.0).unwrap().p_gamma;
    Outcome {
        passed: worst <= 1e-3 && (asymptote - 0.5).abs() < 1e-3,
        summary: format!("max relative deviation {worst:.2e} (tol 1e-3), P_γ(∞) = {asymptote:.6}"),
    }
}

/// Worst relative mismatch, normalized by the largest entry of each analytic
/// derivative so zero components do not blow up.
fn gradients() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(50);
    let mut report = Vec::new();
    let mut all = true;
    let mut record = |name: &str, worst: f64| {
        all &= worst <= 1e-6;
        report.push(format!("{name} {worst:.1e}"));
    };

    // ∂_l G̃
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let x = rng.random_range(0.2..20.0);
        let rhat = random_unit(&mut rng);
        let grad = greens::green_gradient(x, &rhat).unwrap();
        let scale = grad.iter().flat_map(|m| m.iter().map(|c| c.norm())).fold(0.0, f64::max);
        for (l, g) in grad.iter().enumerate() {
            let f = |h: f64| {
                let mut v = rhat * x;
                v[l] += h;
                greens::green(v.norm(), &v.normalize())
                    .unwrap()
                    .iter()
                    .flat_map(|c| [c.re, c.im])
                    .collect()
            };
            let d = derivative(f, 0.0, 0.05 * x.min(1.0)).unwrap();
            let a: Vec<f64> = g.iter().flat_map(|c| [c.re, c.im]).collect();
            let e = a.iter().zip(&d.value).map(|(u, v)| (u - v).abs()).fold(0.0, f64::max);
            worst = worst.max(e / scale);
        }
    }
    record("grad G", worst);

    // dG̃/dx
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let x = rng.random_range(0.2..20.0);
        let rhat = random_unit(&mut rng);
        let dg = greens::green_dx(x, &rhat).unwrap();
        let f = |s: f64| greens::green(s, &rhat).unwrap().iter().flat_map(|c| [c.re, c.im]).collect();
        let d = derivative(f, x, 0.05 * x.min(1.0)).unwrap();
        let a: Vec<f64> = dg.iter().flat_map(|c| [c.re, c.im]).collect();
        let scale = a.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let e = a.iter().zip(&d.value).map(|(u, v)| (u - v).abs()).fold(0.0, f64::max);
        worst = worst.max(e / scale);
    }
    record("dG/dx", worst);

    // ∂_l H at imaginary frequency
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let x = rng.random_range(0.2..5.0);
        let t = rng.random_range(0.05..3.0);
        let rhat = random_unit(&mut rng);
        let (_, grad) = greens::green_imag_freq(t, x, &rhat).unwrap();
        let scale = grad.iter().flat_map(|m| m.iter().map(|c| c.abs())).fold(0.0, f64::max);
        for (l, g) in grad.iter().enumerate() {
            let f = |h: f64| {
                let mut v = rhat * x;
                v[l] += h;
                greens::green_imag_freq(t, v.norm(), &v.normalize()).unwrap().0.iter().copied().collect()
            };
            let d = derivative(f, 0.0, 0.05 * x.min(1.0)).unwrap();
            let e = g.iter().zip(&d.value).map(|(u, v)| (u - v).abs()).fold(0.0, f64::max);
            worst = worst.max(e / scale);
        }
    }
    record("grad H", worst);

    // ∂_ω and ∇ of Ω, Γ
    let (mut wf, mut wg) = (0.0f64, 0.0f64);
    for _ in 0..200 {
        let mut p = li70(rng.random_range(0.2..20.0));
        p.rhat = random_unit(&mut rng);
        p.dipole_a = random_unit(&mut rng);
        p.dipole_b = random_unit(&mut rng);
        let r = rates_for(&p).unwrap();
        let f = |s: f64| {
            let w = dyad_core::coupling::omega_tilde_at(&p, s).unwrap();
            vec![w.re, -w.im]
        };
        let d = derivative(f, 1.0, 0.02).unwrap();
        let scale = r.domega_domega.abs().max(r.dgamma_domega.abs());
        wf = wf.max((r.domega_domega - p.eps * d.value[0]).abs() / scale);
        wf = wf.max((r.dgamma_domega - p.eps * d.value[1]).abs() / scale);
        let gscale = r.grad_omega.norm().max(r.grad_gamma.norm());
        for l in 0..3 {
            let g = |h: f64| {
                let mut v = p.rhat * p.x;
                v[l] += h;
                let q = PairParams {
                    x: v.norm(),
                    rhat: v.normalize(),
                    ..p
                };
                let s = rates_for(&q).unwrap();
                vec![s.omega, s.gamma]
            };
            let d = derivative(g, 0.0, 0.05 * p.x.min(1.0)).unwrap();
            wg = wg.max((r.grad_omega[l] - d.value[0]).abs() / gscale);
            wg = wg.max((r.grad_gamma[l] - d.value[1]).abs() / gscale);
        }
    }
    record("d/dω", wf);
    record("grad Ω,Γ", wg);

    Outcome {
        passed: all,
        summary: format!("{} (tol 1e-6, 200 points each)", report.join(", ")),
    }
}

fn figure() -> Outcome {
    let start = Instant::now();
    let xs: Vec<f64> = (0..2001).map(|k| 0.3 + 2.7 * k as f64 / 2000.0).collect();
    let curve = displacement_curve(&lithium_70c(), &xs, 1.0).unwrap();
    let peaks = curve.peaks();
    let near = |target: f64| {
        peaks
            .iter()
            .filter(|(x, _)| (x - target).abs() <= 0.1)
            .map(|p| p.1)
            .fold(None, |m: Option<f64>, v| Some(m.map_or(v, |m| m.max(v))))
    };
    let (p1, p2) = (near(0.77), near(2.0));
    let global = curve.points.iter().map(|p| p.1.abs()).fold(0.0, f64::max);
    let magnitude_ok = (global - 120e-9).abs() <= 0.3 * 120e-9;
    let secs = start.elapsed().as_secs_f64();
    let locs: Vec<String> = peaks.iter().map(|(x, s)| format!("{x:.3}:{s:.3e} m")).collect();
    Outcome {
        passed: p1.is_some() && p2.is_some() && magnitude_ok && secs < 10.0,
        summary: format!(
            "peaks near 0.77 {} and 2.0 {}, max |S_CM| = {global:.3e} m (target 1.2e-7 ± 30%), peaks [{}], {secs:.2} s",
            if p1.is_some() { "found" } else { "missing" },
            if p2.is_some() { "found" } else { "missing" },
            locs.join(", ")
        ),
    }
}

fn scaling() -> Outcome {
    let start = Instant::now();
    let audit = rydberg_scaling_audit(&[40, 50, 60, 70, 80], 0.77, LI7_MASS_U * CODATA_2018.amu).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let ds = audit.displacement_exponent;
    let df = audit.force_exponent;
    Outcome {
        passed: (ds - 2.0).abs() <= 0.2 && (df + 8.0).abs() <= 0.3 && secs < 30.0,
        summary: format!("S_CM ~ n^{ds:.4} (2 ± 0.2), |F_net| ~ n^{df:.4} (−8 ± 0.3), {secs:.2} s"),
    }
}

fn displacement() -> Outcome {
    let r = rates_for(&li70(0.77)).unwrap();
    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    let mut pointwise = 0.0f64;
    let bare = r.without_retardation();
    for k in 1..=100 {
        let t = 0.05 * k as f64;
        let (d2, _) = second_derivative_scalar(|s| cm_displacement(&r, s).unwrap(), t, 0.2f64.min(0.9 * t)).unwrap();
        let (fa, fb, _) = conservative_forces(&r, t).unwrap();
        let accel = 0.5 * r.params.recoil * (fa + fb).dot(&r.params.rhat);
        worst = worst.max((d2 - accel).abs());
        scale = scale.max(accel.abs());
        let (d2, _) = second_derivative_scalar(|s| cm_displacement(&bare, s).unwrap(), t, 0.2f64.min(0.9 * t)).unwrap();
        let (fa, fb, _) = conservative_forces(&bare, t).unwrap();
        let accel = 0.5 * bare.params.recoil * (fa + fb).dot(&bare.params.rhat);
        if accel.abs() > 1e-3 * scale {
            pointwise = pointwise.max(((d2 - accel) / accel).abs());
        }
    }
    let rel = worst / scale;
    Outcome {
        passed: rel <= 1e-6 && pointwise <= 1e-6,
        summary: format!("max |S'' − F/2M| / max |F/2M| = {rel:.2e}, pointwise with ∂_ω off {pointwise:.2e} (tol 1e-6)"),
    }
}

fn offresonant() -> Outcome {
    let mut worst = 0.0f64;
    let mut reciprocal = true;
    let mut detail = Vec::new();
    for x in [0.5, 1.0, 5.0] {
        let p = li70(x);
        let a = offresonant_integral(&p, OffResonantQuadrature::Composite { panels: 128 }).unwrap();
        let b = offresonant_integral(&p, OffResonantQuadrature::Composite { panels: 256 }).unwrap();
        let adaptive = offresonant_integral(&p, OffResonantQuadrature::default()).unwrap();
        let doubling = (a.value - b.value).norm() / b.value.norm();
        let vs_adaptive = (adaptive.value - b.value).norm() / b.value.norm();
        worst = worst.max(doubling).max(vs_adaptive);
        detail.push(format!("x={x}: {doubling:.1e}/{vs_adaptive:.1e}"));
        let r = rates_for(&p).unwrap();
        let f = offresonant_force(&r, 1.0, OffResonantQuadrature::default()).unwrap();
        reciprocal &= f.b == -f.a;
    }
    Outcome {
        passed: worst <= 1e-10 && reciprocal,
        summary: format!(
            "doubling/adaptive change {} (tol 1e-10), F_B = −F_A {}",
            detail.join(", "),
            if reciprocal { "exact" } else { "VIOLATED" }
        ),
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("1 unitarity identity", unitarity),
        ("2 momentum conservation", momentum),
        ("3 oracle equivalence", oracle),
        ("4 near-field half-inhibition", near_field),
        ("5 gradient correctness", gradients),
        ("6 figure reproduction", figure),
        ("7 scaling audit", scaling),
        ("8 displacement/force consistency", displacement),
        ("9 off-resonant convergence", offresonant),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let o = run();
        if !o.passed {
            failed += 1;
        }
        println!("{} [{name}] {}", if o.passed { "PASS" } else { "FAIL" }, o.summary);
    }
    println!("{} of 9 criteria passed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

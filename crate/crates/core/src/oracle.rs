//! Independent verification machinery.
//!
//! Nothing in here is used by the production closed forms. The ODE
//! integrator certifies only the resummed resonant dynamics (no ∂_ω
//! retardation terms, which lie outside the 2×2 reduction).

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::emission::AngularGrid;
use crate::error::{Error, Result};
use crate::{Mat3, Vec3};

/// Output of [`integrate_effective_2level`].
#[derive(Debug, Clone, PartialEq)]
pub struct OdeResult {
    pub times: Vec<f64>,
    /// (c_A, c_B) in the frame rotating at ω₀
    pub amplitudes: Vec<(Complex64, Complex64)>,
    pub steps: usize,
    pub rejected: usize,
    pub max_local_error: f64,
}

type State = [Complex64; 2];

fn rhs(omega: Complex64, gamma0: f64, c: &State) -> State {
    let i = Complex64::i();
    [
        -0.5 * gamma0 * c[0] - i * omega * c[1],
        -0.5 * gamma0 * c[1] - i * omega * c[0],
    ]
}

fn axpy(y: &State, h: f64, ks: &[(&State, f64)]) -> State {
    let mut out = *y;
    for (k, a) in ks {
        out[0] += k[0] * (h * a);
        out[1] += k[1] * (h * a);
    }
    out
}

/// Integrate iċ_A = −(iΓ₀/2)c_A + Ω̃c_B, iċ_B = −(iΓ₀/2)c_B + Ω̃c_A from
/// (1, 0) with Dormand–Prince 5(4), reporting the state at each of
/// `sample_times` (sorted, non-negative).
pub fn integrate_effective_2level(
    omega_tilde: Complex64,
    gamma0: f64,
    sample_times: &[f64],
    tol: f64,
) -> Result<OdeResult> {
    if !(tol > 1e-13 && tol < 1e-6) {
        return Err(Error::Domain { what: "ODE tolerance", value: tol });
    }
    // Dormand–Prince tableau
    const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
    const A: [[f64; 6]; 7] = [
        [0.0; 6],
        [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
        [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
        [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
        [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
        [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
    ];
    const E: [f64; 7] = [
        71.0 / 57600.0,
        0.0,
        -71.0 / 16695.0,
        71.0 / 1920.0,
        -17253.0 / 339200.0,
        22.0 / 525.0,
        -1.0 / 40.0,
    ];
    let _ = C;

    let scale = omega_tilde.norm() + gamma0;
    let mut h = if scale > 0.0 { 0.01 / scale } else { 0.1 };
    let mut t = 0.0;
    let mut y: State = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
    let mut out = OdeResult {
        times: Vec::with_capacity(sample_times.len()),
        amplitudes: Vec::with_capacity(sample_times.len()),
        steps: 0,
        rejected: 0,
        max_local_error: 0.0,
    };
    let f = |c: &State| rhs(omega_tilde, gamma0, c);

    for &target in sample_times {
        if target < t {
            return Err(Error::Domain { what: "sample time", value: target });
        }
        while t < target {
            let step = h.min(target - t);
            let mut k: [State; 7] = [[Complex64::new(0.0, 0.0); 2]; 7];
            k[0] = f(&y);
            for s in 1..7 {
                let terms: Vec<(&State, f64)> = (0..s).map(|j| (&k[j], A[s][j])).collect();
                k[s] = f(&axpy(&y, step, &terms));
            }
            let y5 = axpy(&y, step, &(0..6).map(|j| (&k[j], A[6][j])).collect::<Vec<_>>());
            let err_terms: Vec<(&State, f64)> = (0..7).map(|j| (&k[j], E[j])).collect();
            let zero: State = [Complex64::new(0.0, 0.0); 2];
            let e = axpy(&zero, step, &err_terms);
            let err = e
                .iter()
                .zip(y.iter().zip(&y5))
                .map(|(e, (a, b))| e.norm() / (tol * (1.0 + a.norm().max(b.norm()))))
                .fold(0.0, f64::max);
            if !err.is_finite() {
                return Err(Error::NonFinite("ODE step"));
            }
            if err <= 1.0 {
                t += step;
                y = y5;
                out.steps += 1;
                out.max_local_error = out.max_local_error.max(err * tol);
            } else {
                out.rejected += 1;
            }
            let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            h = step * factor;
            if h < 1e-14 * (1.0 + t.abs()) {
                return Err(Error::StepUnderflow { t, step: h });
            }
        }
        out.times.push(t);
        out.amplitudes.push((y[0], y[1]));
    }
    Ok(out)
}

/// Derivative estimate with its error.
#[derive(Debug, Clone, PartialEq)]
pub struct Estimate {
    pub value: Vec<f64>,
    pub error: f64,
}

/// Central difference with Richardson extrapolation (Ridders' tableau).
///
/// `f` maps a scalar to a vector of components; `step` is the initial
/// step, successively divided by 1.4.
pub fn derivative<F>(f: F, x: f64, step: f64) -> Result<Estimate>
where
    F: Fn(f64) -> Vec<f64>,
{
    ridders(
        |h| {
            let (p, m) = (sample(&f, x + h)?, sample(&f, x - h)?);
            Ok(p.iter().zip(&m).map(|(a, b)| (a - b) / (2.0 * h)).collect())
        },
        step,
    )
}

/// Second derivative from the extrapolated second central difference.
pub fn second_derivative<F>(f: F, x: f64, step: f64) -> Result<Estimate>
where
    F: Fn(f64) -> Vec<f64>,
{
    let mid = sample(&f, x)?;
    ridders(
        |h| {
            let (p, m) = (sample(&f, x + h)?, sample(&f, x - h)?);
            Ok(p.iter()
                .zip(&m)
                .zip(&mid)
                .map(|((a, b), c)| (a - 2.0 * c + b) / (h * h))
                .collect())
        },
        step,
    )
}

fn sample<F: Fn(f64) -> Vec<f64>>(f: &F, x: f64) -> Result<Vec<f64>> {
    let v = f(x);
    if v.iter().any(|c| !c.is_finite()) {
        return Err(Error::NonFinite("finite-difference sample"));
    }
    Ok(v)
}

/// Ridders' tableau over a difference quotient whose error is even in h.
fn ridders<D>(quotient: D, step: f64) -> Result<Estimate>
where
    D: Fn(f64) -> Result<Vec<f64>>,
{
    if !(step > 0.0) {
        return Err(Error::Domain { what: "finite-difference step", value: step });
    }
    const CON: f64 = 1.4;
    const CON2: f64 = CON * CON;
    const NTAB: usize = 10;
    let dist = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(u, v)| (u - v).abs()).fold(0.0, f64::max);

    let mut h = step;
    let mut table: Vec<Vec<Vec<f64>>> = vec![vec![quotient(h)?]];
    let mut best = table[0][0].clone();
    let mut err = f64::INFINITY;
    for i in 1..NTAB {
        h /= CON;
        let mut row = vec![quotient(h)?];
        let mut fac = CON2;
        for j in 1..=i {
            let prev = &table[i - 1][j - 1];
            let next: Vec<f64> = row[j - 1]
                .iter()
                .zip(prev)
                .map(|(a, b)| (a * fac - b) / (fac - 1.0))
                .collect();
            fac *= CON2;
            let e = dist(&next, &row[j - 1]).max(dist(&next, prev));
            if e <= err {
                err = e;
                best = next.clone();
            }
            row.push(next);
        }
        // a lucky early cancellation can fake a tiny error; keep going a bit
        let stalled = i >= 4 && dist(&row[i], &table[i - 1][i - 1]) >= 2.0 * err;
        table.push(row);
        if stalled {
            break;
        }
    }
    Ok(Estimate { value: best, error: err })
}

/// Scalar convenience wrapper around [`derivative`].
pub fn derivative_scalar<F: Fn(f64) -> f64>(f: F, x: f64, step: f64) -> Result<(f64, f64)> {
    let e = derivative(|s| vec![f(s)], x, step)?;
    Ok((e.value[0], e.error))
}

/// Scalar convenience wrapper around [`second_derivative`].
pub fn second_derivative_scalar<F: Fn(f64) -> f64>(f: F, x: f64, step: f64) -> Result<(f64, f64)> {
    let e = second_derivative(|s| vec![f(s)], x, step)?;
    Ok((e.value[0], e.error))
}

/// Laurent coefficients of A(x) and B(x) (see [`crate::greens`]) about x = 0,
/// from x⁻³ up to x^(terms−4), built directly from the exponential series.
#[derive(Debug, Clone, PartialEq)]
pub struct SmallXSeries {
    /// coefficient of x^(k−3) in A
    pub a: Vec<Complex64>,
    /// coefficient of x^(k−3) in B
    pub b: Vec<Complex64>,
}

impl SmallXSeries {
    pub fn eval(&self, x: f64) -> (Complex64, Complex64) {
        let mut a = Complex64::new(0.0, 0.0);
        let mut b = Complex64::new(0.0, 0.0);
        for (k, (ca, cb)) in self.a.iter().zip(&self.b).enumerate() {
            let p = x.powi(k as i32 - 3);
            a += ca * p;
            b += cb * p;
        }
        (a, b)
    }

    /// Coefficient of x^power.
    pub fn coeff(&self, power: i32) -> (Complex64, Complex64) {
        let k = (power + 3) as usize;
        (self.a[k], self.b[k])
    }
}

/// Series of G̃ = −e^{ix}[α/x + iβ/x² − β/x³] about x = 0.
pub fn series_small_x(term_count: usize) -> Result<SmallXSeries> {
    if term_count < 3 {
        return Err(Error::Domain { what: "series term count", value: term_count as f64 });
    }
    let i = Complex64::i();
    // bracket coefficients on I and R̂R̂ for powers −1, −2, −3
    let p = [(1, Complex64::new(1.0, 0.0)), (2, i), (3, Complex64::new(-1.0, 0.0))];
    let s = [(1, Complex64::new(-1.0, 0.0)), (2, -3.0 * i), (3, Complex64::new(3.0, 0.0))];
    let len = term_count + 3;
    let exp_coeff = |m: usize| -> Complex64 {
        let mut c = Complex64::new(1.0, 0.0);
        for j in 1..=m {
            c *= i / j as f64;
        }
        c
    };
    let build = |parts: &[(i32, Complex64); 3]| -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); len];
        for &(neg, coef) in parts {
            // x^{−neg} · Σ (ix)^m/m!  → power m − neg, index m − neg + 3
            for m in 0..len {
                let idx = m as i32 - neg + 3;
                if idx >= 0 && (idx as usize) < len {
                    out[idx as usize] -= coef * exp_coeff(m);
                }
            }
        }
        out
    };
    Ok(SmallXSeries { a: build(&p), b: build(&s) })
}

/// Direction integral ∫dΘ (I − k̂k̂) cos(x k̂·R̂), the mode-sum side of the
/// vacuum-fluctuation identity; equals −4π·Im G̃(x).
pub fn plane_wave_mode_sum(x: f64, rhat: &Vec3, grid: &AngularGrid) -> Mat3 {
    let mut acc = Mat3::zeros();
    for (k, w) in grid.nodes.iter().zip(&grid.weights) {
        let proj = Mat3::identity() - k * k.transpose();
        acc += proj * (w * (x * k.dot(rhat)).cos());
    }
    acc
}

/// ∇_ρ × of [`plane_wave_mode_sum`] taken inside the integral:
/// ∫dΘ −sin(k̂·ρ)·[k̂]ₓ(I − k̂k̂); equals −4π·∇×Im G̃.
pub fn plane_wave_curl_sum(x: f64, rhat: &Vec3, grid: &AngularGrid) -> Mat3 {
    let mut acc = Mat3::zeros();
    for (k, w) in grid.nodes.iter().zip(&grid.weights) {
        let proj = Mat3::identity() - k * k.transpose();
        acc += k.cross_matrix() * proj * (-w * (x * k.dot(rhat)).sin());
    }
    acc
}

/// Solid angle of the grid, for sanity checks.
pub fn total_solid_angle(grid: &AngularGrid) -> f64 {
    grid.weights.iter().sum::<f64>() / (4.0 * PI)
}

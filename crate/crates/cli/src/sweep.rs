//! Grid evaluation. Points are independent; they are computed in parallel
//! and collected in (k₀R, T) order.

use dyad_core::coupling::rates_for;
use dyad_core::dynamics::emission_probability_rate;
use dyad_core::emission::photon_momentum_rate;
use dyad_core::forces::{cm_displacement, force_sample, offresonant_integral, OffResonantIntegral};
use dyad_core::units::{to_internal, Quantity};
use dyad_core::{
    populations, AngularGrid, CouplingRates, EmissionOptions, InterferencePhase, OffResonantQuadrature,
    UnitSystem, Vec3,
};
use rayon::prelude::*;

use crate::config::{Observable, RunConfig};
use crate::CliError;

/// A computed table. Every row has `columns.len()` entries, in SI.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

/// Header for a set of observables, in output order.
pub fn columns(observables: &[Observable]) -> Vec<String> {
    let mut cols = vec!["k0R".to_string(), "T_s".to_string()];
    let has = |o| observables.contains(&o);
    if has(Observable::Populations) {
        cols.extend(["P_A", "P_B", "P_gamma", "unitarity_defect"].map(String::from));
    }
    if has(Observable::Forces) {
        cols.extend(["Fc_A_R_N", "Fc_B_R_N", "Fc_net_R_N"].map(String::from));
        for who in ["A", "B", "net"] {
            for c in ["x", "y", "z"] {
                cols.push(format!("Fnc_{who}_{c}_N"));
            }
        }
        cols.push("Foff_A_R_N".into());
    }
    if has(Observable::Displacement) {
        cols.push("S_CM_m".into());
    }
    if has(Observable::Emission) {
        cols.extend(["dPgamma_dT_per_s", "Pdot_gamma_R_N"].map(String::from));
    }
    cols
}

struct Point {
    rates: CouplingRates,
    units: UnitSystem,
    offres: Option<OffResonantIntegral>,
    grid: Option<AngularGrid>,
}

fn numerical(x: f64, t: Option<f64>, e: dyad_core::Error) -> CliError {
    CliError::Numerical {
        k0r: x,
        gamma0_t: t,
        message: e.to_string(),
    }
}

/// Evaluate the whole grid. Call inside a rayon pool to bound the workers.
pub fn run(cfg: &RunConfig) -> Result<Table, CliError> {
    cfg.validate()?;
    let obs = cfg.observable_set();
    let has = |o| obs.contains(&o);
    let pair = cfg.system.pair()?;
    let xs = cfg.geometry.values();
    let ts = cfg.times.values();
    let opts = EmissionOptions {
        mode: cfg.emission_mode,
        phase: InterferencePhase::Conserving,
    };

    let points = xs
        .par_iter()
        .map(|&x| {
            let err = |e| numerical(x, None, e);
            let (units, params) = to_internal(&pair.with_k0r(x).map_err(err)?).map_err(err)?;
            let rates = rates_for(&params).map_err(err)?;
            let offres = if has(Observable::Forces) {
                Some(offresonant_integral(&params, OffResonantQuadrature::default()).map_err(err)?)
            } else {
                None
            };
            let grid = has(Observable::Emission).then(|| match cfg.quadrature.order {
                Some(order) => AngularGrid::product(order, 2 * order, &params.rhat),
                None => AngularGrid::for_separation(x, &params.rhat),
            });
            Ok(Point {
                rates,
                units,
                offres,
                grid,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;

    let grid: Vec<(usize, f64)> = (0..xs.len()).flat_map(|i| ts.iter().map(move |&t| (i, t))).collect();
    let rows = grid
        .par_iter()
        .map(|&(i, t)| {
            row(&points[i], xs[i], t, &obs, opts, cfg.quadrature.tolerance).map_err(|e| numerical(xs[i], Some(t), e))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(Table {
        columns: columns(&obs),
        rows,
    })
}

fn row(
    p: &Point,
    x: f64,
    t: f64,
    obs: &[Observable],
    opts: EmissionOptions,
    tolerance: f64,
) -> dyad_core::Result<Vec<f64>> {
    let u = &p.units;
    let r = &p.rates;
    let rhat = r.params.rhat;
    let along = |v: Vec3| v.dot(&rhat);
    let mut out = vec![x, u.to_si(Quantity::Time, t)];
    for o in obs {
        match o {
            Observable::Populations => {
                let s = populations(r, t)?;
                out.extend([s.p_a, s.p_b, s.p_gamma, s.unitarity_defect()]);
            }
            Observable::Forces => {
                let offres = p.offres.as_ref().expect("computed for forces");
                let f = force_sample(r, t, offres)?.to_si(u);
                out.extend([along(f.f_a_cons), along(f.f_b_cons), along(f.f_net_cons)]);
                for v in [f.f_a_noncons, f.f_b_noncons, f.f_net_noncons] {
                    out.extend(v.iter());
                }
                out.push(along(f.f_offres_a));
            }
            Observable::Displacement => {
                out.push(u.to_si(Quantity::Displacement, cm_displacement(r, t)?));
            }
            Observable::Emission => {
                let grid = p.grid.as_ref().expect("computed for emission");
                let rate = emission_probability_rate(r, t)?;
                let pdot = photon_momentum_rate(r, t, grid, opts, tolerance)?;
                out.push(u.to_si(Quantity::Frequency, rate));
                out.push(along(u.vec_to_si(Quantity::Force, &pdot)));
            }
        }
    }
    Ok(out)
}

use std::f64::consts::PI;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{PairOps, Probe, PureState2, PureState4, SearchConfig};
use crate::channels::QubitChannel;
use crate::discrim::{Branch, DistanceResult};
use crate::error::{Error, Result};
use crate::optimize::coordinate_ascent;
use crate::par::argmax_first;

/// Smallest window of the local ascent, in radians.
const MIN_WIDTH: f64 = 1e-7;
/// First-stage stopping rule of the multistart search.
const COARSE_TOL: f64 = 1e-5;
const COARSE_WIDTH: f64 = 1e-2;
/// Multistart runs carried into the final refinement.
const POLISHED: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    /// Schmidt probes `a₀|00⟩ + a₁|11⟩` only.
    Restricted,
    /// Every two-qubit pure probe.
    Full,
}

impl FromStr for SearchMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "restricted" => Ok(Self::Restricted),
            "full" => Ok(Self::Full),
            other => Err(Error::Config(format!("unknown search mode `{other}`"))),
        }
    }
}

/// A searched maximum with the probe that attains it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OracleResult {
    pub distance: DistanceResult,
    pub probe: Probe,
}

/// Grid over `u ∈ [0, π]` (endpoints included) and `v ∈ [0, 2π)`, then
/// local ascent from the best node.
fn two_angle_search<S>(ops: &PairOps, cfg: &SearchConfig, state: S) -> (f64, [f64; 2])
where
    S: Fn(f64, f64) -> Vec<crate::smallmat::C64> + Sync + Send,
{
    let n = cfg.grid_points;
    let du = PI / (n - 1) as f64;
    let dv = 2.0 * PI / n as f64;
    let objective = |u: f64, v: f64| ops.delta(&state(u, v)).trace_norm();
    let rows = cfg.exec.map(n, |i| {
        let u = i as f64 * du;
        let vals: Vec<f64> = (0..n).map(|j| objective(u, j as f64 * dv)).collect();
        let j = argmax_first(&vals).unwrap_or(0);
        (j, vals[j])
    });
    let row_best: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let i = argmax_first(&row_best).unwrap_or(0);
    let mut x = [i as f64 * du, rows[i].0 as f64 * dv];
    let grid_best = rows[i].1;
    let refined = coordinate_ascent(
        |y| objective(y[0], y[1]),
        &mut x,
        &[du, dv],
        cfg.refine_tol,
        MIN_WIDTH,
    );
    if refined >= grid_best {
        (refined, x)
    } else {
        (grid_best, [i as f64 * du, rows[i].0 as f64 * dv])
    }
}

fn oracle_distance(value: f64, arg: f64, resolution: usize) -> DistanceResult {
    DistanceResult {
        value,
        arg: arg.clamp(0.0, 1.0),
        branch: Branch::Oracle,
        scan_resolution: resolution,
    }
}

/// Largest `‖N₁(ψ) − N₂(ψ)‖₁` over single-qubit pure probes, searched on the
/// Bloch sphere.
pub fn brute_max_single(
    c1: &QubitChannel,
    c2: &QubitChannel,
    cfg: &SearchConfig,
) -> Result<OracleResult> {
    cfg.validate()?;
    let ops = PairOps::new(c1, c2);
    let (value, [u, v]) = two_angle_search(&ops, cfg, |u, v| {
        PureState2::from_bloch(u, v).amplitudes().to_vec()
    });
    let psi = PureState2::from_bloch(u, v);
    Ok(OracleResult {
        distance: oracle_distance(value, psi.a1.norm_sqr(), cfg.grid_points),
        probe: Probe::Single(psi),
    })
}

/// Largest `‖(id ⊗ N₁)(Ψ) − (id ⊗ N₂)(Ψ)‖₁` over two-qubit pure probes.
pub fn brute_max_entangled(
    c1: &QubitChannel,
    c2: &QubitChannel,
    cfg: &SearchConfig,
    mode: SearchMode,
) -> Result<OracleResult> {
    cfg.validate()?;
    let ops = PairOps::new(c1, c2);
    let (value, psi, resolution) = match mode {
        SearchMode::Restricted => {
            let (value, [t, eta]) =
                two_angle_search(&ops, cfg, |t, eta| PureState4::schmidt(t, eta).a.to_vec());
            (value, PureState4::schmidt(t, eta), cfg.grid_points)
        }
        SearchMode::Full => {
            let (value, psi) = multistart(&ops, cfg);
            (value, psi, cfg.multistarts)
        }
    };
    Ok(OracleResult {
        distance: oracle_distance(value, psi.system_weight(), resolution),
        probe: Probe::Entangled(psi),
    })
}

fn multistart(ops: &PairOps, cfg: &SearchConfig) -> (f64, PureState4) {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let starts: Vec<(usize, [f64; 6])> = (0..cfg.multistarts)
        .map(|_| {
            let mut x = [0.0; 6];
            for xi in x.iter_mut().take(3) {
                *xi = rng.gen_range(0.0..0.5 * PI);
            }
            for xi in x.iter_mut().skip(3) {
                *xi = rng.gen_range(0.0..2.0 * PI);
            }
            PureState4::from_chart(0, &x).to_chart()
        })
        .collect();
    let ascend = |anchor: usize, x: &mut [f64; 6], width: f64, tol: f64, min_width: f64| {
        coordinate_ascent(
            |y| {
                let chart: &[f64; 6] = y.try_into().expect("six chart parameters");
                ops.delta(&PureState4::from_chart(anchor, chart).a)
                    .trace_norm()
            },
            x,
            &[width; 6],
            tol,
            min_width,
        )
    };
    // Every start climbs coarsely; only the best few are polished.
    let coarse = cfg.exec.map(starts.len(), |k| {
        let (anchor, mut x) = starts[k];
        let tol = cfg.refine_tol.max(COARSE_TOL);
        let value = ascend(anchor, &mut x, 0.4, tol, COARSE_WIDTH);
        (value, anchor, x)
    });
    let mut order: Vec<usize> = (0..coarse.len()).collect();
    // Stable sort keeps the lower index first among equal values.
    order.sort_by(|a, b| coarse[*b].0.total_cmp(&coarse[*a].0));
    order.truncate(POLISHED);
    let polished = cfg.exec.map(order.len(), |k| {
        let (value, anchor, mut x) = coarse[order[k]];
        let refined = ascend(
            anchor,
            &mut x,
            16.0 * COARSE_WIDTH,
            cfg.refine_tol,
            MIN_WIDTH,
        );
        if refined >= value {
            (refined, PureState4::from_chart(anchor, &x))
        } else {
            (value, PureState4::from_chart(anchor, &coarse[order[k]].2))
        }
    });
    let values: Vec<f64> = polished.iter().map(|r| r.0).collect();
    polished[argmax_first(&values).unwrap_or(0)]
}

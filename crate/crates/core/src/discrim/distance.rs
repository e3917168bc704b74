use serde::{Deserialize, Serialize};

use super::{s_tilde, DiscrimParams};
use crate::optimize::{maximize_unit, SCAN_POINTS};

/// Which formula produced a [`DistanceResult`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// Single probe, stationary point of `g` inside `[0, 1]`.
    SingleStationary,
    /// Single probe, maximum `2|P|` at a pole.
    SingleEndpoint,
    /// `γ_M² ≤ αβ`: both blocks reduce to `|(1−s)α + sβ|`.
    EntangledLinear,
    /// `γ_m² < αβ < γ_M²`: maximum of `G` over `s̃` and the endpoints.
    EntangledMixed,
    /// Both `γⱼ² ≥ αβ`: numeric maximum of the two-radical sum.
    EntangledTwoRadical,
    /// Brute-force search over probe states.
    Oracle,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistanceResult {
    pub value: f64,
    /// Maximizing `s = |a₁|²`.
    pub arg: f64,
    pub branch: Branch,
    /// Number of scan points behind a numeric maximum, 0 for closed forms.
    pub scan_resolution: usize,
}

impl DistanceResult {
    pub(crate) fn closed(value: f64, arg: f64, branch: Branch) -> Self {
        Self {
            value,
            arg,
            branch,
            scan_resolution: 0,
        }
    }
}

/// Stationary point of `g` in `s`. `None` if `g²` has no curvature.
pub(crate) fn single_stationary(p: &DiscrimParams) -> Option<f64> {
    let ab = p.alpha + p.beta;
    let c = p.gamma_sum();
    let den = 2.0 * ab * ab - 2.0 * c * c;
    if den == 0.0 {
        return None;
    }
    Some((2.0 * p.alpha * ab - c * c) / den)
}

/// Pole carrying `2|P|`.
pub(crate) fn dominant_pole(p: &DiscrimParams) -> f64 {
    if p.alpha.abs() >= p.beta.abs() {
        0.0
    } else {
        1.0
    }
}

/// Maximum trace distance with an unentangled pure probe.
///
/// The interior closed form applies only when `|α+β| < |γ₁|+|γ₂|` and the
/// stationary point lies in `[0, 1]`; otherwise `g` peaks at a pole.
pub fn max_distance_single(p: &DiscrimParams) -> DistanceResult {
    let ab = p.alpha + p.beta;
    let c = p.gamma_sum();
    if ab.abs() < c {
        if let Some(s) = single_stationary(p).filter(|s| (0.0..=1.0).contains(s)) {
            let value =
                c * (c * c - 4.0 * p.alpha * p.beta).max(0.0).sqrt() / (c * c - ab * ab).sqrt();
            return DistanceResult::closed(value, s, Branch::SingleStationary);
        }
    }
    DistanceResult::closed(2.0 * p.p.abs(), dominant_pole(p), Branch::SingleEndpoint)
}

/// Candidates for the maximum of `G`: `s̃` when defined and in `[0, 1]`,
/// then both poles. Returns the best, earliest candidate winning ties.
pub(crate) fn mixed_argmax(p: &DiscrimParams) -> (f64, f64) {
    let mut cands = Vec::with_capacity(3);
    if let Ok(s) = s_tilde(p) {
        if (0.0..=1.0).contains(&s) {
            cands.push(s);
        }
    }
    cands.extend([0.0, 1.0]);
    cands.into_iter().map(|s| (s, p.big_g_unchecked(s))).fold(
        (f64::NAN, f64::NEG_INFINITY),
        |best, cur| {
            if cur.1 > best.1 {
                cur
            } else {
                best
            }
        },
    )
}

/// Maximum trace distance with a maximally general entangled probe, by
/// regime of `γ_m², γ_M²` against `αβ`.
pub fn max_distance_entangled(p: &DiscrimParams) -> DistanceResult {
    let ab = p.alpha * p.beta;
    let gm2 = p.gamma_min * p.gamma_min;
    let gmax2 = p.gamma_max * p.gamma_max;
    if gmax2 <= ab {
        // Each block contributes |(1−s)α + sβ|, linear in s.
        let value = 2.0 * p.alpha.abs().max(p.beta.abs());
        return DistanceResult::closed(value, dominant_pole(p), Branch::EntangledLinear);
    }
    if gm2 < ab {
        let (s, value) = mixed_argmax(p);
        return DistanceResult::closed(value, s, Branch::EntangledMixed);
    }
    let (s, value) = maximize_unit(|s| p.f_unchecked(s));
    DistanceResult {
        value,
        arg: s,
        branch: Branch::EntangledTwoRadical,
        scan_resolution: SCAN_POINTS,
    }
}

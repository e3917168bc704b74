//! Closed-form side of the problem: the parameters `(α, β, γ₁, γ₂)` of a
//! channel pair, the single-probe and entangled objectives, their maxima,
//! and the decision tree for when an entangled probe helps.

mod distance;
mod tree;

use serde::{Deserialize, Serialize};

use crate::channels::{ExtremalChannel, QubitChannel};
use crate::error::{check_range, Error, Result};

pub use distance::{max_distance_entangled, max_distance_single, Branch, DistanceResult};
pub use tree::{classify, classify_channels, Classification, EPS_BOUNDARY};

/// Differences of the quadratic channel moments, plus the derived
/// `γ_m`, `γ_M` and `P`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscrimParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    #[serde(rename = "gamma_m")]
    pub gamma_min: f64,
    #[serde(rename = "gamma_M")]
    pub gamma_max: f64,
    #[serde(rename = "P")]
    pub p: f64,
}

impl DiscrimParams {
    /// Builds the record and its derived fields. Ties pick `γ₁` for both
    /// `γ_m` and `γ_M`, and `α` for `P`.
    pub fn new(alpha: f64, beta: f64, gamma1: f64, gamma2: f64) -> Self {
        let (gamma_min, gamma_max) = if gamma1.abs() == gamma2.abs() {
            (gamma1, gamma1)
        } else if gamma1.abs() < gamma2.abs() {
            (gamma1, gamma2)
        } else {
            (gamma2, gamma1)
        };
        let p = if alpha.abs() >= beta.abs() {
            alpha
        } else {
            beta
        };
        Self {
            alpha,
            beta,
            gamma1,
            gamma2,
            gamma_min,
            gamma_max,
            p,
        }
    }

    /// `|γ₁| + |γ₂|`.
    #[inline]
    pub fn gamma_sum(&self) -> f64 {
        self.gamma1.abs() + self.gamma2.abs()
    }

    /// `(1 − s)α − sβ`.
    #[inline]
    fn diff(&self, s: f64) -> f64 {
        (1.0 - s) * self.alpha - s * self.beta
    }

    /// `(1 − s)α + sβ`.
    #[inline]
    fn mean(&self, s: f64) -> f64 {
        (1.0 - s) * self.alpha + s * self.beta
    }

    /// `√(((1−s)α − sβ)² + 4s(1−s)γ²)`.
    #[inline]
    fn radical(&self, s: f64, gamma: f64) -> f64 {
        let d = self.diff(s);
        (d * d + 4.0 * s * (1.0 - s) * gamma * gamma).sqrt()
    }

    pub(crate) fn g_unchecked(&self, s: f64) -> f64 {
        2.0 * self.radical(s, 0.5 * self.gamma_sum())
    }

    pub(crate) fn f_unchecked(&self, s: f64) -> f64 {
        self.radical(s, self.gamma1) + self.radical(s, self.gamma2)
    }

    pub(crate) fn big_g_unchecked(&self, s: f64) -> f64 {
        // The radicand of the printed form equals this one identically, and
        // this one cannot go negative through rounding.
        self.mean(s).abs() + self.radical(s, self.gamma_max)
    }

    /// Trace norm of the entangled difference operator on the Schmidt probe
    /// with `|a₁|² = s`: `Σⱼ max(|(1−s)α + sβ|, rⱼ)`. Equals `f` when both
    /// `γⱼ² ≥ αβ` and `G` when only `γ_M² > αβ`.
    pub fn entangled_objective(&self, s: f64) -> f64 {
        let m = self.mean(s).abs();
        m.max(self.radical(s, self.gamma1)) + m.max(self.radical(s, self.gamma2))
    }
}

fn quad(c: &ExtremalChannel) -> [f64; 4] {
    let (sp, cp) = c.phi().sin_cos();
    let (st, ct) = c.theta().sin_cos();
    [ct * ct, cp * cp, cp * ct, sp * st]
}

fn moments(c: &QubitChannel) -> [f64; 4] {
    let l = c.lambda();
    if l == 1.0 {
        return quad(&c.first());
    }
    let a = quad(&c.first());
    let b = quad(&c.second());
    std::array::from_fn(|i| l * a[i] + (1.0 - l) * b[i])
}

/// `α = Δ cos²θ`, `β = Δ cos²φ`, `γ₁ = Δ cos φ cos θ`, `γ₂ = Δ sin φ sin θ`,
/// each moment mixed linearly in `λ`.
pub fn compute_params(c1: &QubitChannel, c2: &QubitChannel) -> DiscrimParams {
    let a = moments(c1);
    let b = moments(c2);
    DiscrimParams::new(a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3])
}

fn check_s(s: f64) -> Result<()> {
    check_range("s", s, 0.0, 1.0)
}

/// `g(s) = 2√(((1−s)α − sβ)² + 4s(1−s)((|γ₁|+|γ₂|)/2)²)`.
pub fn g_single(p: &DiscrimParams, s: f64) -> Result<f64> {
    check_s(s)?;
    Ok(p.g_unchecked(s))
}

/// `f(s) = Σᵢ √(((1−s)α − sβ)² + 4s(1−s)γᵢ²)`.
pub fn f_entangled(p: &DiscrimParams, s: f64) -> Result<f64> {
    check_s(s)?;
    Ok(p.f_unchecked(s))
}

/// `G(s) = |(1−s)α + sβ| + √(((1−s)α + sβ)² + 4s(1−s)(γ_M² − αβ))`.
#[allow(non_snake_case)]
pub fn G_mixed(p: &DiscrimParams, s: f64) -> Result<f64> {
    check_s(s)?;
    Ok(p.big_g_unchecked(s))
}

/// Stationary point of `G`. Fails when `γ_M(α + β)` vanishes or the
/// denominator does.
pub fn s_tilde(p: &DiscrimParams) -> Result<f64> {
    let (a, b, gm) = (p.alpha, p.beta, p.gamma_max);
    let sign = gm * (a + b);
    if sign.abs() <= EPS_BOUNDARY {
        return Err(Error::Degenerate("gamma_M (alpha + beta) = 0"));
    }
    let (num, den) = if sign > 0.0 {
        (gm - a, 2.0 * gm - (a + b))
    } else {
        (gm + a, 2.0 * gm + (a + b))
    };
    if den.abs() <= EPS_BOUNDARY {
        return Err(Error::Degenerate("s_tilde denominator vanishes"));
    }
    Ok(num / den)
}

/// Quartic whose sign decides the two-radical inequality in the diagonal
/// branch; written with `s ↔ 1 − s` relative to `f`.
#[allow(non_snake_case)]
pub fn F_diag(p: &DiscrimParams, s: f64) -> Result<f64> {
    check_s(s)?;
    let (a, b, pp) = (p.alpha, p.beta, p.p * p.p);
    let sq = p.gamma1 * p.gamma1 + p.gamma2 * p.gamma2;
    let d = (p.gamma1 * p.gamma1 - p.gamma2 * p.gamma2).powi(2);
    Ok(pp * (pp - b * b)
        + 2.0 * pp * (b * (a + b) - sq) * s
        + (pp * (2.0 * sq - (a + b).powi(2)) + d) * s * s
        - 2.0 * d * s.powi(3)
        + d * s.powi(4))
}

/// Quartic whose sign decides `G(s) > 2|P|`.
#[allow(non_snake_case)]
pub fn R_diag(p: &DiscrimParams, s: f64) -> Result<f64> {
    check_s(s)?;
    let (a, b, pp) = (p.alpha, p.beta, p.p * p.p);
    let gm2 = p.gamma_max * p.gamma_max;
    let e = (gm2 - a * b).powi(2);
    Ok(pp * (pp - a * a)
        + 2.0 * pp * (a * a - gm2) * s
        + (e - pp * (a * a + b * b - 2.0 * gm2)) * s * s
        - 2.0 * e * s.powi(3)
        + e * s.powi(4))
}

/// Helstrom success probability `½(1 + d/2)` for trace distance `d`.
pub fn success_probability(distance: f64) -> Result<f64> {
    check_range("distance", distance, 0.0, 2.0)?;
    Ok(0.5 * (1.0 + 0.5 * distance))
}

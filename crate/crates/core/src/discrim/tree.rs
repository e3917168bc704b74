//! Decision tree for the usefulness of an entangled probe.
//!
//! Equalities hold within [`EPS_BOUNDARY`]; inequalities near equality are
//! resolved toward the side that includes it. Every tested quantity is
//! recorded as a signed margin.

use std::collections::BTreeMap;

use serde::Serialize;

use super::distance::{dominant_pole, mixed_argmax, single_stationary};
use super::{compute_params, s_tilde, DiscrimParams};
use crate::channels::QubitChannel;

pub const EPS_BOUNDARY: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Classification {
    pub useful: bool,
    /// Leaf label, e.g. `"T3/B.2"`.
    pub node: &'static str,
    /// Some recorded margin is within [`EPS_BOUNDARY`] of zero.
    pub boundary: bool,
    pub margins: BTreeMap<&'static str, f64>,
}

impl Classification {
    /// Smallest absolute margin, or infinity when none was tested.
    pub fn min_abs_margin(&self) -> f64 {
        self.margins
            .values()
            .fold(f64::INFINITY, |m, v| m.min(v.abs()))
    }
}

#[derive(Default)]
struct Walk {
    margins: BTreeMap<&'static str, f64>,
}

impl Walk {
    fn record(&mut self, key: &'static str, x: f64) -> f64 {
        self.margins.insert(key, x);
        x
    }

    /// `x ≤ 0`.
    fn le(&mut self, key: &'static str, x: f64) -> bool {
        self.record(key, x) <= EPS_BOUNDARY
    }

    /// `x < 0`.
    fn lt(&mut self, key: &'static str, x: f64) -> bool {
        self.record(key, x) < -EPS_BOUNDARY
    }

    /// `x > 0`.
    fn gt(&mut self, key: &'static str, x: f64) -> bool {
        self.record(key, x) > EPS_BOUNDARY
    }

    /// `x = 0`.
    fn eq(&mut self, key: &'static str, x: f64) -> bool {
        self.record(key, x).abs() <= EPS_BOUNDARY
    }

    fn leaf(self, node: &'static str, useful: bool) -> Classification {
        let boundary = self.margins.values().any(|v| v.abs() < EPS_BOUNDARY);
        Classification {
            useful,
            node,
            boundary,
            margins: self.margins,
        }
    }
}

/// Distance of `s` outside `[0, 1]`, zero inside.
fn outside_unit(s: f64) -> f64 {
    (-s).max(s - 1.0).max(0.0)
}

/// Walk the tree on `p`.
pub fn classify(p: &DiscrimParams) -> Classification {
    let mut w = Walk::default();
    let ab = p.alpha * p.beta;
    if w.le("gamma_M^2-alpha*beta", p.gamma_max * p.gamma_max - ab) {
        return w.leaf("T3/root", false);
    }
    if w.lt("gamma_m^2-alpha*beta", p.gamma_min * p.gamma_min - ab) {
        mixed_regime(p, w)
    } else {
        diagonal_regime(p, w)
    }
}

/// `γ_m² < αβ < γ_M²`.
fn mixed_regime(p: &DiscrimParams, mut w: Walk) -> Classification {
    let (a, b) = (p.alpha, p.beta);
    let sum = a + b;
    let c = p.gamma_sum();
    if !w.gt("c-|alpha+beta|", c - sum.abs()) {
        return if w.le("|gamma_M|-|P|", p.gamma_max.abs() - p.p.abs()) {
            w.leaf("T3/A.3", false)
        } else {
            w.leaf("T3/B.4", true)
        };
    }
    if w.eq("alpha-beta", a - b) {
        return if w.eq("|gamma_m|-|alpha|", p.gamma_min.abs() - a.abs()) {
            w.leaf("T3/A.1", false)
        } else {
            w.leaf("T3/B.1", true)
        };
    }
    // On the surface 2γ_M(α+β) = c² the printed root test is recorded, but
    // it does not decide the verdict: points satisfying it can still gain.
    let surface = w.eq(
        "2*gamma_M*(alpha+beta)-c^2",
        2.0 * p.gamma_max * sum - c * c,
    );
    if surface {
        let rad = (a * a - 1.0) * (b * b - 1.0);
        if !w.lt("(alpha^2-1)(beta^2-1)", rad) {
            let root = rad.max(0.0).sqrt();
            w.record(
                "gamma_M-root_plus",
                p.gamma_max - (1.0 + a * b + root) / sum,
            );
            w.record(
                "gamma_M-root_minus",
                p.gamma_max - (1.0 + a * b - root) / sum,
            );
        }
    }
    // Entanglement helps iff max G exceeds max g. Distinct peak locations
    // settle it; a shared pole means equal values; a shared interior peak
    // (which happens on the surface above) needs the values compared.
    let s1 = single_stationary(p).unwrap_or(f64::NAN);
    let interior = (0.0..=1.0).contains(&s1);
    let s_g = if interior { s1 } else { dominant_pole(p) };
    let (s_big, big_max) = mixed_argmax(p);
    let (yes, no) = if surface {
        ("T3/B.3", "T3/A.2")
    } else {
        ("T3/B.2", "T3/A.2e")
    };
    let gain = big_max - p.g_unchecked(s_g);
    if w.gt("|s_G-s_g|", (s_big - s_g).abs()) {
        w.record("G(s_G)-g(s_g)", gain);
        return w.leaf(yes, true);
    }
    if interior {
        return if w.gt("G(s_G)-g(s_g)", gain) {
            w.leaf(yes, true)
        } else {
            w.leaf(no, false)
        };
    }
    w.record("s_g_outside", outside_unit(s1));
    let tilde = match s_tilde(p) {
        Ok(t) if (0.0..=1.0).contains(&t) => big_max - p.big_g_unchecked(t),
        Ok(t) => outside_unit(t),
        Err(_) => 0.0,
    };
    w.record("s_tilde_margin", tilde);
    w.leaf(no, false)
}

/// Both `γⱼ² ≥ αβ`.
fn diagonal_regime(p: &DiscrimParams, mut w: Walk) -> Classification {
    let (a, b) = (p.alpha, p.beta);
    let sum = a + b;
    let c = p.gamma_sum();
    let sq = p.gamma1 * p.gamma1 + p.gamma2 * p.gamma2;
    if w.eq("|gamma1|-|gamma2|", p.gamma1.abs() - p.gamma2.abs()) {
        return w.leaf("T2/O.1", false);
    }
    if w.gt("c-|alpha+beta|", c - sum.abs()) {
        let s1 = single_stationary(p).unwrap_or(f64::NAN);
        let lo = w.gt("s1", s1);
        let hi = w.gt("1-s1", 1.0 - s1);
        if lo && hi {
            if w.eq("alpha-beta", a - b) {
                return if w.lt(
                    "|gamma1*gamma2|-alpha^2",
                    (p.gamma1 * p.gamma2).abs() - a * a,
                ) {
                    w.leaf("T2/B.2", true)
                } else {
                    w.leaf("T2/A.4", false)
                };
            }
            w.record("f(s1)-g(s1)", p.f_unchecked(s1) - p.g_unchecked(s1));
            return w.leaf("T2/B.3", true);
        }
        return if w.gt("gamma1^2+gamma2^2-P(alpha+beta)", sq - p.p * sum) {
            w.leaf("T2/B.1e", true)
        } else {
            w.leaf("T2/A.2e", false)
        };
    }
    if w.le(
        "2|gamma_M|-|alpha+beta|",
        2.0 * p.gamma_max.abs() - sum.abs(),
    ) {
        return w.leaf("T2/A.1", false);
    }
    if w.gt("gamma1^2+gamma2^2-P(alpha+beta)", sq - p.p * sum) {
        w.leaf("T2/B.1", true)
    } else {
        w.leaf("T2/A.2", false)
    }
}

/// Channel-level classification: two quasi-extreme extremal channels are
/// settled before the parameter tree.
pub fn classify_channels(c1: &QubitChannel, c2: &QubitChannel) -> Classification {
    let quasi = |c: &QubitChannel| c.as_extremal().is_some_and(|e| e.is_quasi_extreme());
    if quasi(c1) && quasi(c2) {
        return Walk::default().leaf("T1", false);
    }
    classify(&compute_params(c1, c2))
}

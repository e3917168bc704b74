//! Qubit channels in the diagonal frame: extremal `(φ, θ)` maps, their
//! convex mixtures, Kraus sets and the affine Bloch-ball picture.

mod literal;

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{check_range, Error, Result};
use crate::smallmat::{re, ComplexMatrix, HermitianMatrix, EQ_TOL};

pub use literal::parse_channel;

/// Tolerance for the density-matrix precondition of `apply`.
pub const DENSITY_TOL: f64 = 1e-10;

/// A map in the closure of the extreme points, with Kraus operators
/// `K₀ = diag(cos θ, cos φ)` and `K₁ = [[0, sin φ], [sin θ, 0]]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtremalChannel {
    phi: f64,
    theta: f64,
}

impl ExtremalChannel {
    pub fn new(phi: f64, theta: f64) -> Result<Self> {
        check_range("phi", phi, 0.0, PI)?;
        check_range("theta", theta, 0.0, PI)?;
        Ok(Self { phi, theta })
    }

    pub fn identity() -> Self {
        Self {
            phi: 0.0,
            theta: 0.0,
        }
    }

    /// Amplitude damping with `sin²φ` decay probability (`θ = 0`).
    pub fn amplitude_damping(phi: f64) -> Result<Self> {
        Self::new(phi, 0.0)
    }

    #[inline]
    pub fn phi(&self) -> f64 {
        self.phi
    }

    #[inline]
    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn k0(&self) -> ComplexMatrix {
        ComplexMatrix::real2(self.theta.cos(), 0.0, 0.0, self.phi.cos())
    }

    pub fn k1(&self) -> ComplexMatrix {
        ComplexMatrix::real2(0.0, self.phi.sin(), self.theta.sin(), 0.0)
    }

    pub fn kraus(&self) -> KrausSet {
        KrausSet {
            operators: vec![self.k0(), self.k1()],
            weights: vec![1.0],
        }
    }

    /// `sin θ = sin φ`: the ellipsoid touches the sphere in two points.
    pub fn is_quasi_extreme(&self) -> bool {
        (self.theta.sin() - self.phi.sin()).abs() <= EQ_TOL
    }

    pub fn affine_map(&self) -> AffineMap {
        let d = (self.phi - self.theta).cos();
        let s = (self.phi + self.theta).cos();
        AffineMap {
            lambdas: [d, s, d * s],
            t: [
                0.0,
                0.0,
                (self.phi - self.theta).sin() * (self.phi + self.theta).sin(),
            ],
        }
    }
}

impl fmt::Display for ExtremalChannel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "extremal({},{})", self.phi, self.theta)
    }
}

/// `λ·N(φ, θ) + (1 − λ)·N(φ′, θ′)`. With `λ = 1` the second component is
/// stored but has no effect.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QubitChannel {
    lambda: f64,
    first: ExtremalChannel,
    second: ExtremalChannel,
}

impl From<ExtremalChannel> for QubitChannel {
    fn from(c: ExtremalChannel) -> Self {
        Self {
            lambda: 1.0,
            first: c,
            second: c,
        }
    }
}

impl QubitChannel {
    pub fn mixture(lambda: f64, first: ExtremalChannel, second: ExtremalChannel) -> Result<Self> {
        check_range("lambda", lambda, 0.0, 1.0)?;
        Ok(Self {
            lambda,
            first,
            second,
        })
    }

    pub fn extremal(phi: f64, theta: f64) -> Result<Self> {
        Ok(ExtremalChannel::new(phi, theta)?.into())
    }

    pub fn identity() -> Self {
        ExtremalChannel::identity().into()
    }

    pub fn amplitude_damping(phi: f64) -> Result<Self> {
        Ok(ExtremalChannel::amplitude_damping(phi)?.into())
    }

    /// Pauli channel `λ·N(θ, θ) + (1 − λ)·N(θ₂, π − θ₂)`; Kraus operators are
    /// proportional to `{I, X}` and `{Z, X}`.
    pub fn pauli(lambda: f64, theta: f64, theta2: f64) -> Result<Self> {
        check_range("theta2", theta2, 0.0, PI)?;
        Self::mixture(
            lambda,
            ExtremalChannel::new(theta, theta)?,
            ExtremalChannel::new(theta2, PI - theta2)?,
        )
    }

    #[inline]
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    #[inline]
    pub fn first(&self) -> ExtremalChannel {
        self.first
    }

    #[inline]
    pub fn second(&self) -> ExtremalChannel {
        self.second
    }

    /// The single extremal map this channel reduces to, if any.
    pub fn as_extremal(&self) -> Option<ExtremalChannel> {
        if self.lambda == 1.0 || self.first == self.second {
            Some(self.first)
        } else if self.lambda == 0.0 {
            Some(self.second)
        } else {
            None
        }
    }

    /// Flat Kraus set `{√λ K₀, √λ K₁, √(1−λ) K₀′, √(1−λ) K₁′}`.
    pub fn kraus(&self) -> KrausSet {
        let a = re(self.lambda.sqrt());
        let b = re((1.0 - self.lambda).sqrt());
        KrausSet {
            operators: vec![
                self.first.k0().scale(a),
                self.first.k1().scale(a),
                self.second.k0().scale(b),
                self.second.k1().scale(b),
            ],
            weights: vec![self.lambda, 1.0 - self.lambda],
        }
    }

    pub fn apply(&self, rho: &HermitianMatrix) -> Result<HermitianMatrix> {
        if rho.dim() != 2 {
            return Err(Error::DimensionMismatch(rho.dim(), 2));
        }
        rho.check_density(DENSITY_TOL)?;
        Ok(self.kraus().apply_unchecked(rho))
    }

    /// `(id ⊗ N)(ρ)` on a two-qubit density matrix.
    pub fn apply_extended(&self, rho: &HermitianMatrix) -> Result<HermitianMatrix> {
        if rho.dim() != 4 {
            return Err(Error::DimensionMismatch(rho.dim(), 4));
        }
        rho.check_density(DENSITY_TOL)?;
        Ok(self.kraus().apply_extended_unchecked(rho))
    }

    pub fn affine_map(&self) -> AffineMap {
        let a = self.first.affine_map();
        let b = self.second.affine_map();
        let l = self.lambda;
        let mix = |x: [f64; 3], y: [f64; 3]| {
            [
                l * x[0] + (1.0 - l) * y[0],
                l * x[1] + (1.0 - l) * y[1],
                l * x[2] + (1.0 - l) * y[2],
            ]
        };
        AffineMap {
            lambdas: mix(a.lambdas, b.lambdas),
            t: mix(a.t, b.t),
        }
    }

    /// Channel literal accepted by [`parse_channel`].
    pub fn literal(&self) -> String {
        match self.as_extremal() {
            Some(e) if self.lambda == 1.0 => e.to_string(),
            _ => format!(
                "mix({};{},{};{},{})",
                self.lambda, self.first.phi, self.first.theta, self.second.phi, self.second.theta
            ),
        }
    }
}

impl fmt::Display for QubitChannel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.literal())
    }
}

/// Kraus operators with any mixture weight already folded in as `√w`
/// scaling. `weights` records the mixture weights of the components.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausSet {
    pub operators: Vec<ComplexMatrix>,
    pub weights: Vec<f64>,
}

impl KrausSet {
    pub fn new(operators: Vec<ComplexMatrix>) -> Result<Self> {
        if let Some(bad) = operators.iter().find(|k| k.dim() != 2) {
            return Err(Error::DimensionMismatch(bad.dim(), 2));
        }
        Ok(Self {
            operators,
            weights: vec![1.0],
        })
    }

    /// `Σ K ρ K†` for any (not necessarily Hermitian) 2×2 input.
    pub fn apply_matrix(&self, m: &ComplexMatrix) -> Result<ComplexMatrix> {
        let mut out = ComplexMatrix::zeros(2)?;
        for k in &self.operators {
            out = out.try_add(&m.conjugate_by(k)?)?;
        }
        Ok(out)
    }

    pub(crate) fn apply_unchecked(&self, rho: &HermitianMatrix) -> HermitianMatrix {
        let out = self
            .apply_matrix(rho.matrix())
            .expect("2x2 shapes checked by caller");
        HermitianMatrix::from_construction(out)
    }

    pub(crate) fn apply_extended_unchecked(&self, rho: &HermitianMatrix) -> HermitianMatrix {
        let id = ComplexMatrix::identity(2).expect("valid dimension");
        let mut out = ComplexMatrix::zeros(4).expect("valid dimension");
        for k in &self.operators {
            let big = ComplexMatrix::kron(&id, k).expect("2x2 operators");
            out = out + rho.matrix().conjugate_by(&big).expect("4x4 shapes");
        }
        HermitianMatrix::from_construction(out)
    }

    /// `Σ K†K`.
    pub fn completeness(&self) -> ComplexMatrix {
        self.operators
            .iter()
            .map(|k| k.dagger() * *k)
            .fold(ComplexMatrix::zeros(2).expect("valid dimension"), |a, b| {
                a + b
            })
    }

    /// `Σᵢⱼ |i⟩⟨j| ⊗ N(|i⟩⟨j|)`.
    pub fn choi(&self) -> HermitianMatrix {
        let mut choi = ComplexMatrix::zeros(4).expect("valid dimension");
        for i in 0..2 {
            for j in 0..2 {
                let mut eij = ComplexMatrix::zeros(2).expect("valid dimension");
                eij.set(i, j, re(1.0));
                let img = self.apply_matrix(&eij).expect("2x2 shapes");
                for k in 0..2 {
                    for l in 0..2 {
                        choi.set(2 * i + k, 2 * j + l, img.get(k, l));
                    }
                }
            }
        }
        HermitianMatrix::from_construction(choi)
    }

    pub fn validate_cptp(&self) -> CptpReport {
        let id = ComplexMatrix::identity(2).expect("valid dimension");
        let tp_violation = self.completeness().max_abs_diff(&id);
        let min_eig = self.choi().eigenvalues()[0];
        let cp_violation = (-min_eig).max(0.0);
        CptpReport {
            trace_preserving: tp_violation <= EQ_TOL,
            completely_positive: min_eig >= -EQ_TOL,
            max_violation: tp_violation.max(cp_violation),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CptpReport {
    pub trace_preserving: bool,
    pub completely_positive: bool,
    pub max_violation: f64,
}

impl CptpReport {
    pub fn is_valid(&self) -> bool {
        self.trace_preserving && self.completely_positive
    }
}

/// Diagonal affine action `r ↦ diag(λ) r + t` on Bloch vectors.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AffineMap {
    pub lambdas: [f64; 3],
    pub t: [f64; 3],
}

impl AffineMap {
    pub fn apply(&self, r: [f64; 3]) -> [f64; 3] {
        [
            self.lambdas[0] * r[0] + self.t[0],
            self.lambdas[1] * r[1] + self.t[1],
            self.lambdas[2] * r[2] + self.t[2],
        ]
    }
}

/// `(x, y, z)` with `ρ = (I + xX + yY + zZ)/2`.
pub fn bloch_vector(rho: &HermitianMatrix) -> [f64; 3] {
    let m = rho.matrix();
    let off = m.get(0, 1);
    [2.0 * off.re, -2.0 * off.im, m.get(0, 0).re - m.get(1, 1).re]
}

pub fn density_from_bloch(r: [f64; 3]) -> HermitianMatrix {
    use crate::smallmat::c;
    let m = ComplexMatrix::from_rows2([
        [re(0.5 * (1.0 + r[2])), c(0.5 * r[0], -0.5 * r[1])],
        [c(0.5 * r[0], 0.5 * r[1]), re(0.5 * (1.0 - r[2]))],
    ]);
    HermitianMatrix::from_construction(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smallmat::{c, C64};
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_2;

    fn ket0() -> HermitianMatrix {
        HermitianMatrix::real_diag(&[1.0, 0.0]).unwrap()
    }

    fn ket1() -> HermitianMatrix {
        HermitianMatrix::real_diag(&[0.0, 1.0]).unwrap()
    }

    #[test]
    fn kraus_examples() {
        let id = ExtremalChannel::identity().kraus();
        assert!(id.operators[0].approx_eq(&ComplexMatrix::identity(2).unwrap(), 0.0));
        assert!(id.operators[1].approx_eq(&ComplexMatrix::zeros(2).unwrap(), 0.0));
        assert_eq!(id.weights, vec![1.0]);

        let ad = ExtremalChannel::new(FRAC_PI_2, 0.0).unwrap().kraus();
        assert!(ad.operators[0].approx_eq(&ComplexMatrix::real2(1.0, 0.0, 0.0, 0.0), 1e-16));
        assert!(ad.operators[1].approx_eq(&ComplexMatrix::real2(0.0, 1.0, 0.0, 0.0), 1e-16));

        let k = ExtremalChannel::new(PI / 3.0, 0.0).unwrap().kraus();
        assert!(k.operators[0].approx_eq(&ComplexMatrix::real2(1.0, 0.0, 0.0, 0.5), 1e-15));
        assert!(k.operators[1].approx_eq(
            &ComplexMatrix::real2(0.0, 3f64.sqrt() / 2.0, 0.0, 0.0),
            1e-15
        ));
    }

    #[test]
    fn rejects_out_of_range_parameters() {
        assert!(ExtremalChannel::new(4.0, 0.0).is_err());
        assert!(ExtremalChannel::new(0.0, -0.1).is_err());
        assert!(ExtremalChannel::new(f64::NAN, 0.0).is_err());
        let e = ExtremalChannel::identity();
        assert!(QubitChannel::mixture(1.5, e, e).is_err());
    }

    #[test]
    fn apply_examples() {
        let id = QubitChannel::identity();
        let rho = density_from_bloch([0.3, -0.2, 0.5]);
        assert!(id
            .apply(&rho)
            .unwrap()
            .matrix()
            .approx_eq(rho.matrix(), 1e-15));

        let ad = QubitChannel::amplitude_damping(FRAC_PI_2).unwrap();
        assert!(ad
            .apply(&ket1())
            .unwrap()
            .matrix()
            .approx_eq(ket0().matrix(), 1e-15));

        let weak = QubitChannel::extremal(PI / 3.0, 0.0).unwrap();
        let out = weak.apply(&ket1()).unwrap();
        let expected = HermitianMatrix::real_diag(&[0.75, 0.25]).unwrap();
        assert!(out.matrix().approx_eq(expected.matrix(), 1e-15));
    }

    #[test]
    fn apply_rejects_non_density_input() {
        let id = QubitChannel::identity();
        let not_unit = HermitianMatrix::real_diag(&[1.0, 1.0]).unwrap();
        assert!(matches!(id.apply(&not_unit), Err(Error::NotDensity(_))));
        let negative = HermitianMatrix::real_diag(&[1.5, -0.5]).unwrap();
        assert!(id.apply(&negative).is_err());
        let four = HermitianMatrix::real_diag(&[1.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(id.apply(&four).is_err());
        assert!(id.apply_extended(&ket0()).is_err());
    }

    fn bell() -> HermitianMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        HermitianMatrix::projector(&[re(s), re(0.0), re(0.0), re(s)]).unwrap()
    }

    #[test]
    fn extended_action_on_bell_state() {
        let rho = bell();
        let id = QubitChannel::identity();
        assert!(id
            .apply_extended(&rho)
            .unwrap()
            .matrix()
            .approx_eq(rho.matrix(), 1e-15));

        // Full damping sends the second qubit to |0⟩ and kills coherences.
        let out = QubitChannel::amplitude_damping(FRAC_PI_2)
            .unwrap()
            .apply_extended(&rho)
            .unwrap();
        let expected = HermitianMatrix::real_diag(&[0.5, 0.0, 0.5, 0.0]).unwrap();
        assert!(out.matrix().approx_eq(expected.matrix(), 1e-15), "{out:?}");
    }

    #[test]
    fn extended_action_on_schmidt_state() {
        // id ⊗ N on a₀|00⟩ + a₁|11⟩ gives |Φ′⟩⟨Φ′| + |Φ″⟩⟨Φ″| with
        // Φ′ = a₀cos θ|00⟩ + a₁cos φ|11⟩ and Φ″ = a₀sin θ|01⟩ + a₁sin φ|10⟩.
        let (phi, theta) = (0.9, 2.1);
        let (a0, a1) = (0.6, c(0.0, 0.8));
        let ch = QubitChannel::extremal(phi, theta).unwrap();
        let psi = [re(a0), re(0.0), re(0.0), a1];
        let out = ch
            .apply_extended(&HermitianMatrix::projector(&psi).unwrap())
            .unwrap();
        let z = re(0.0);
        let p1 = [re(a0 * theta.cos()), z, z, a1 * phi.cos()];
        let p2 = [z, re(a0 * theta.sin()), a1 * phi.sin(), z];
        let expected = ComplexMatrix::outer(&p1).unwrap() + ComplexMatrix::outer(&p2).unwrap();
        assert!(out.matrix().approx_eq(&expected, 1e-15));
    }

    #[test]
    fn affine_map_examples() {
        let id = ExtremalChannel::identity().affine_map();
        assert_eq!(id.lambdas, [1.0, 1.0, 1.0]);
        assert_eq!(id.t, [0.0, 0.0, 0.0]);
        let ad = ExtremalChannel::new(FRAC_PI_2, 0.0).unwrap().affine_map();
        for l in ad.lambdas {
            assert!(l.abs() < 1e-15);
        }
        assert!((ad.t[2] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn cptp_reports() {
        let c = ExtremalChannel::new(0.4, 2.2).unwrap();
        assert!(c.kraus().validate_cptp().is_valid());

        let k0 = ExtremalChannel::new(PI / 3.0, 0.0).unwrap().k0();
        let partial = KrausSet::new(vec![k0]).unwrap().validate_cptp();
        assert!(!partial.trace_preserving);
        assert!(partial.completely_positive);
        assert!(partial.max_violation > 0.5);

        let m = QubitChannel::mixture(0.3, c, ExtremalChannel::new(1.0, 0.2).unwrap()).unwrap();
        assert!(m.kraus().validate_cptp().is_valid());
    }

    #[test]
    fn quasi_extreme_detection() {
        let q = |p: f64, t: f64| ExtremalChannel::new(p, t).unwrap().is_quasi_extreme();
        assert!(q(PI / 4.0, PI / 4.0));
        assert!(q(PI / 4.0, 3.0 * PI / 4.0));
        assert!(!q(PI / 3.0, PI / 6.0));
    }

    #[test]
    fn degenerate_mixtures_match_their_component() {
        let a = ExtremalChannel::new(0.7, 1.9).unwrap();
        let b = ExtremalChannel::new(2.5, 0.1).unwrap();
        let rho = density_from_bloch([0.1, 0.4, -0.6]);
        let single = QubitChannel::from(a).apply(&rho).unwrap();
        let full = QubitChannel::mixture(1.0, a, b)
            .unwrap()
            .apply(&rho)
            .unwrap();
        let same = QubitChannel::mixture(0.5, a, a)
            .unwrap()
            .apply(&rho)
            .unwrap();
        assert!(single.matrix().approx_eq(full.matrix(), 1e-15));
        assert!(single.matrix().approx_eq(same.matrix(), 1e-15));
    }

    #[test]
    fn pauli_preset_is_unital_and_diagonal() {
        let p = QubitChannel::pauli(0.35, 0.8, 1.3).unwrap();
        let map = p.affine_map();
        assert!(map.t.iter().all(|t| t.abs() < 1e-15));
        // Every Kraus operator is proportional to a Pauli matrix.
        use crate::smallmat::pauli;
        let basis = [pauli::i2(), pauli::x(), pauli::y(), pauli::z()];
        for k in p.kraus().operators {
            let hits = basis
                .iter()
                .filter(|s| {
                    let overlap: C64 = (s.dagger() * k).trace() * 0.5;
                    (k - s.scale(overlap)).max_abs_diff(&ComplexMatrix::zeros(2).unwrap()) < 1e-12
                })
                .count();
            assert!(hits >= 1);
        }
    }

    fn arb_extremal() -> impl Strategy<Value = ExtremalChannel> {
        (0.0..=PI, 0.0..=PI).prop_map(|(p, t)| ExtremalChannel::new(p, t).unwrap())
    }

    fn arb_channel() -> impl Strategy<Value = QubitChannel> {
        (0.0..=1.0f64, arb_extremal(), arb_extremal())
            .prop_map(|(l, a, b)| QubitChannel::mixture(l, a, b).unwrap())
    }

    fn arb_density() -> impl Strategy<Value = HermitianMatrix> {
        (0.0..=1.0f64, 0.0..=PI, 0.0..2.0 * PI).prop_map(|(r, t, p)| {
            density_from_bloch([r * t.sin() * p.cos(), r * t.sin() * p.sin(), r * t.cos()])
        })
    }

    proptest! {
        #[test]
        fn apply_yields_density_matrices(ch in arb_channel(), rho in arb_density()) {
            let out = ch.apply(&rho).unwrap();
            prop_assert!((out.trace() - 1.0).abs() < 1e-10);
            prop_assert!(out.eigenvalues()[0] >= -1e-10);
        }

        #[test]
        fn extended_action_on_products(ch in arb_channel(), a in arb_density(), b in arb_density()) {
            let prod = HermitianMatrix::new(ComplexMatrix::kron(a.matrix(), b.matrix()).unwrap()).unwrap();
            let lhs = ch.apply_extended(&prod).unwrap();
            let rhs = ComplexMatrix::kron(a.matrix(), ch.apply(&b).unwrap().matrix()).unwrap();
            prop_assert!(lhs.matrix().approx_eq(&rhs, 1e-10));
        }

        #[test]
        fn affine_map_matches_reconstruction(ch in arb_channel()) {
            // Image of (I ± σ_k)/2 gives λ_k and t_k directly.
            let map = ch.affine_map();
            for k in 0..3 {
                let mut r = [0.0; 3];
                r[k] = 1.0;
                let plus = bloch_vector(&ch.apply(&density_from_bloch(r)).unwrap());
                r[k] = -1.0;
                let minus = bloch_vector(&ch.apply(&density_from_bloch(r)).unwrap());
                prop_assert!((0.5 * (plus[k] - minus[k]) - map.lambdas[k]).abs() < 1e-12);
                for j in 0..3 {
                    prop_assert!((0.5 * (plus[j] + minus[j]) - map.t[j]).abs() < 1e-12);
                }
            }
        }

        #[test]
        fn extremal_image_stays_in_ball(ch in arb_extremal(), pts in proptest::collection::vec((0.0..=PI, 0.0..2.0 * PI), 1000)) {
            let map = ch.affine_map();
            for (t, p) in pts {
                let r = map.apply([t.sin() * p.cos(), t.sin() * p.sin(), t.cos()]);
                prop_assert!(r.iter().map(|x| x * x).sum::<f64>() <= 1.0 + 1e-12);
            }
        }

        #[test]
        fn extremal_choi_rank_at_most_two(ch in arb_extremal()) {
            let ev = ch.kraus().choi().eigenvalues();
            // Ascending order: the two smallest are the would-be ranks three and four.
            prop_assert!(ev[0].abs() <= 1e-9 && ev[1].abs() <= 1e-9, "{:?}", ev);
        }

        #[test]
        fn constructed_channels_are_cptp(ch in arb_channel()) {
            let rep = ch.kraus().validate_cptp();
            prop_assert!(rep.is_valid());
            prop_assert!(rep.max_violation <= 1e-10);
        }
    }
}

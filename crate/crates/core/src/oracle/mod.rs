//! Brute-force verification straight from the channel actions: optimal
//! probes by search, the Helstrom measurement, and Monte-Carlo runs.

mod helstrom;
mod search;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::channels::QubitChannel;
use crate::error::{Error, Result};
use crate::par::Exec;
use crate::smallmat::{re, ComplexMatrix, HermitianMatrix, C64};

pub use helstrom::{helstrom, simulate, Measurement};
pub use search::{brute_max_entangled, brute_max_single, OracleResult, SearchMode};

/// Normalization tolerance for probe states.
pub const NORM_TOL: f64 = 1e-12;

fn check_norm(amps: &[C64]) -> Result<()> {
    let n: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    if (n - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized(n));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PureState2 {
    pub a0: C64,
    pub a1: C64,
}

impl PureState2 {
    pub fn new(a0: C64, a1: C64) -> Result<Self> {
        check_norm(&[a0, a1])?;
        Ok(Self { a0, a1 })
    }

    /// `cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩`.
    pub fn from_bloch(theta: f64, phi: f64) -> Self {
        Self {
            a0: re((0.5 * theta).cos()),
            a1: Complex64::from_polar((0.5 * theta).sin(), phi),
        }
    }

    pub fn basis(bit: bool) -> Self {
        if bit {
            Self {
                a0: re(0.0),
                a1: re(1.0),
            }
        } else {
            Self {
                a0: re(1.0),
                a1: re(0.0),
            }
        }
    }

    pub fn amplitudes(&self) -> [C64; 2] {
        [self.a0, self.a1]
    }

    pub fn density(&self) -> HermitianMatrix {
        HermitianMatrix::projector(&self.amplitudes()).expect("two amplitudes")
    }
}

/// Two-qubit pure state over `|00⟩, |01⟩, |10⟩, |11⟩`; the channel acts on
/// the second factor.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PureState4 {
    pub a: [C64; 4],
}

impl PureState4 {
    pub fn new(a: [C64; 4]) -> Result<Self> {
        check_norm(&a)?;
        Ok(Self { a })
    }

    /// `cos(t/2)|00⟩ + e^{iη} sin(t/2)|11⟩`.
    pub fn schmidt(t: f64, eta: f64) -> Self {
        let z = re(0.0);
        Self {
            a: [
                re((0.5 * t).cos()),
                z,
                z,
                Complex64::from_polar((0.5 * t).sin(), eta),
            ],
        }
    }

    /// `|b⟩ ⊗ |ψ⟩`.
    pub fn product(bit: bool, psi: &PureState2) -> Self {
        let z = re(0.0);
        if bit {
            Self {
                a: [z, z, psi.a0, psi.a1],
            }
        } else {
            Self {
                a: [psi.a0, psi.a1, z, z],
            }
        }
    }

    /// Chart with the `anchor` amplitude real: three hyperspherical angles
    /// for the moduli, then the phases of the other three amplitudes.
    pub fn from_chart(anchor: usize, x: &[f64; 6]) -> Self {
        let (s1, c1) = x[0].sin_cos();
        let (s2, c2) = x[1].sin_cos();
        let (s3, c3) = x[2].sin_cos();
        let moduli = [c1, s1 * c2, s1 * s2 * c3, s1 * s2 * s3];
        let mut a = [re(0.0); 4];
        a[anchor] = re(moduli[0]);
        for (k, idx) in Self::others(anchor).into_iter().enumerate() {
            a[idx] = Complex64::from_polar(moduli[k + 1], x[3 + k]);
        }
        Self { a }
    }

    /// Inverse of [`from_chart`](Self::from_chart) with the anchor at the
    /// largest-modulus amplitude (lowest index on ties), global phase removed.
    pub fn to_chart(&self) -> (usize, [f64; 6]) {
        let mut anchor = 0;
        for i in 1..4 {
            if self.a[i].norm() > self.a[anchor].norm() {
                anchor = i;
            }
        }
        let phase = self.a[anchor].arg();
        let others = Self::others(anchor);
        let m = [
            self.a[anchor].norm(),
            self.a[others[0]].norm(),
            self.a[others[1]].norm(),
            self.a[others[2]].norm(),
        ];
        let x0 = m[0].clamp(-1.0, 1.0).acos();
        let x1 = (m[2] * m[2] + m[3] * m[3]).sqrt().atan2(m[1]);
        let x2 = m[3].atan2(m[2]);
        let ph = |i: usize| self.a[others[i]].arg() - phase;
        (anchor, [x0, x1, x2, ph(0), ph(1), ph(2)])
    }

    fn others(anchor: usize) -> [usize; 3] {
        let mut out = [0; 3];
        let mut k = 0;
        for i in 0..4 {
            if i != anchor {
                out[k] = i;
                k += 1;
            }
        }
        out
    }

    /// Probability that the channel-side qubit reads 1.
    pub fn system_weight(&self) -> f64 {
        self.a[1].norm_sqr() + self.a[3].norm_sqr()
    }

    pub fn density(&self) -> HermitianMatrix {
        HermitianMatrix::projector(&self.a).expect("four amplitudes")
    }
}

/// A probe for either strategy.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Probe {
    Single(PureState2),
    Entangled(PureState4),
}

impl Probe {
    pub fn dim(&self) -> usize {
        match self {
            Probe::Single(_) => 2,
            Probe::Entangled(_) => 4,
        }
    }

    pub fn density(&self) -> HermitianMatrix {
        match self {
            Probe::Single(s) => s.density(),
            Probe::Entangled(s) => s.density(),
        }
    }
}

/// `Σₖ |Kₖψ⟩⟨Kₖψ|` for a pure input; `ops` act on the full space.
fn pure_output(ops: &[ComplexMatrix], psi: &[C64]) -> ComplexMatrix {
    let n = psi.len();
    let mut out = ComplexMatrix::zeros(n).expect("dimension 2 or 4");
    let mut v = [re(0.0); 4];
    for k in ops {
        for (i, vi) in v.iter_mut().enumerate().take(n) {
            *vi = (0..n).map(|j| k.get(i, j) * psi[j]).sum();
        }
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, out.get(i, j) + v[i] * v[j].conj());
            }
        }
    }
    out
}

/// Kraus operators of both channels, lifted to `I ⊗ K` for the extended
/// action. Built once per pair and reused across probe evaluations.
#[derive(Clone, Debug)]
pub(crate) struct PairOps {
    single: [Vec<ComplexMatrix>; 2],
    extended: [Vec<ComplexMatrix>; 2],
}

impl PairOps {
    pub(crate) fn new(c1: &QubitChannel, c2: &QubitChannel) -> Self {
        let id = ComplexMatrix::identity(2).expect("valid dimension");
        let lift = |ops: &[ComplexMatrix]| -> Vec<ComplexMatrix> {
            ops.iter()
                .map(|k| ComplexMatrix::kron(&id, k).expect("2x2 operators"))
                .collect()
        };
        let k1 = c1.kraus().operators;
        let k2 = c2.kraus().operators;
        Self {
            extended: [lift(&k1), lift(&k2)],
            single: [k1, k2],
        }
    }

    /// Channel outputs for a pure probe of dimension 2 or 4.
    pub(crate) fn outputs(&self, psi: &[C64]) -> [ComplexMatrix; 2] {
        let ops = if psi.len() == 2 {
            &self.single
        } else {
            &self.extended
        };
        [pure_output(&ops[0], psi), pure_output(&ops[1], psi)]
    }

    pub(crate) fn delta(&self, psi: &[C64]) -> HermitianMatrix {
        let [a, b] = self.outputs(psi);
        HermitianMatrix::from_construction(a - b)
    }
}

/// `N₁(ψ) − N₂(ψ)`.
pub fn delta_single(c1: &QubitChannel, c2: &QubitChannel, psi: &PureState2) -> HermitianMatrix {
    PairOps::new(c1, c2).delta(&psi.amplitudes())
}

/// `(id ⊗ N₁)(Ψ) − (id ⊗ N₂)(Ψ)`.
pub fn delta_entangled(c1: &QubitChannel, c2: &QubitChannel, psi: &PureState4) -> HermitianMatrix {
    PairOps::new(c1, c2).delta(&psi.a)
}

/// Search effort for the brute-force maxima.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Grid points per axis of the two-angle searches.
    pub grid_points: usize,
    /// Random starts of the six-parameter search.
    pub multistarts: usize,
    /// Stop local ascent when a sweep gains less than this.
    pub refine_tol: f64,
    pub rng_seed: u64,
    #[serde(default)]
    pub exec: Exec,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            grid_points: 256,
            multistarts: 64,
            refine_tol: 1e-10,
            rng_seed: 42,
            exec: Exec::Parallel,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.grid_points < 64 {
            return Err(Error::Config(format!(
                "grid_points {} < 64",
                self.grid_points
            )));
        }
        if self.multistarts < 16 {
            return Err(Error::Config(format!(
                "multistarts {} < 16",
                self.multistarts
            )));
        }
        if !(self.refine_tol > 0.0 && self.refine_tol.is_finite()) {
            return Err(Error::Config(format!(
                "refine_tol {} must be positive",
                self.refine_tol
            )));
        }
        Ok(())
    }
}

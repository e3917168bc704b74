use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{PairOps, Probe};
use crate::channels::QubitChannel;
use crate::error::{Error, Result};
use crate::smallmat::{hermitian_eigen, ComplexMatrix, HermitianMatrix, C64};

/// Eigenvalues within this of zero count as null and go to the minus side.
const NULL_TOL: f64 = 1e-13;

/// Two-outcome projective measurement; "plus" votes for the first channel.
#[derive(Clone, Debug, PartialEq)]
pub struct Measurement {
    pub plus: HermitianMatrix,
    pub minus: HermitianMatrix,
}

impl Measurement {
    pub fn dim(&self) -> usize {
        self.plus.dim()
    }
}

/// Projectors onto the positive eigenspace of `delta` and its complement.
pub fn helstrom(delta: &HermitianMatrix) -> Measurement {
    let n = delta.dim();
    let (vals, vecs) = hermitian_eigen(delta);
    let scale = vals.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let mut plus = ComplexMatrix::zeros(n).expect("dimension 2 or 4");
    for (k, val) in vals.iter().enumerate() {
        if *val > NULL_TOL * scale {
            let col: Vec<C64> = (0..n).map(|i| vecs.get(i, k)).collect();
            plus = plus + ComplexMatrix::outer(&col).expect("dimension 2 or 4");
        }
    }
    let id = ComplexMatrix::identity(n).expect("dimension 2 or 4");
    Measurement {
        plus: HermitianMatrix::from_construction(plus),
        minus: HermitianMatrix::from_construction(id - plus),
    }
}

/// Fraction of `trials` rounds won: each round picks a channel uniformly,
/// sends `probe` through it and guesses the first channel on "plus".
pub fn simulate(
    c1: &QubitChannel,
    c2: &QubitChannel,
    probe: &Probe,
    m: &Measurement,
    trials: u64,
    rng_seed: u64,
) -> Result<f64> {
    if trials == 0 {
        return Err(Error::Config("trials must be at least 1".into()));
    }
    if m.dim() != probe.dim() {
        return Err(Error::DimensionMismatch(probe.dim(), m.dim()));
    }
    let ops = PairOps::new(c1, c2);
    let amps: Vec<C64> = match probe {
        Probe::Single(s) => s.amplitudes().to_vec(),
        Probe::Entangled(s) => s.a.to_vec(),
    };
    let outputs = ops.outputs(&amps);
    let p_plus = outputs.map(|rho| {
        HermitianMatrix::from_construction(rho)
            .inner(&m.plus)
            .expect("dimensions checked")
            .clamp(0.0, 1.0)
    });
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut wins = 0u64;
    for _ in 0..trials {
        let second: bool = rng.gen();
        let plus = rng.gen::<f64>() < p_plus[usize::from(second)];
        if plus != second {
            wins += 1;
        }
    }
    Ok(wins as f64 / trials as f64)
}

//! Discrimination of qubit channels with and without side entanglement.

pub mod channels;
pub mod discrim;
pub mod error;
pub mod optimize;
pub mod oracle;
pub mod par;
pub mod smallmat;
pub mod verify;

pub use channels::{parse_channel, AffineMap, ExtremalChannel, KrausSet, QubitChannel};
pub use discrim::{
    classify, classify_channels, compute_params, max_distance_entangled, max_distance_single,
    Classification, DiscrimParams, DistanceResult,
};
pub use error::{Error, Result};
pub use oracle::{
    brute_max_entangled, brute_max_single, delta_entangled, delta_single, helstrom, simulate,
    Measurement, OracleResult, Probe, PureState2, PureState4, SearchConfig, SearchMode,
};
pub use par::Exec;
pub use smallmat::{ComplexMatrix, HermitianMatrix, C64};

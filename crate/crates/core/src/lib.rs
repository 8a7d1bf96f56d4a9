//! Exact evaluation and random search of small stabilizer codes under
//! structured Pauli noise.
//!
//! Every quantity is computed by exhaustive enumeration over the `4^n` Pauli
//! errors of an `n <= 8` qubit register; nothing is sampled except the random
//! code search itself.

pub mod gf2;
pub mod pauli;
pub mod code;
pub mod numeric;
pub mod channel;
pub mod decoder;
pub mod ingest;
pub mod search;
pub mod cli;

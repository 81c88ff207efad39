//! Communication protocols over collective channels: perfect classical
//! messaging, quantum encodings, exchange gates, rates and a logical CHSH
//! test.

pub mod chsh;
pub mod classical;
pub mod encoding;
pub mod gates;
pub mod helstrom;
pub mod rates;

use serde::{Deserialize, Serialize};

pub use chsh::{logical_bell_chsh, logical_bell_chsh_trials, tsirelson_bound};
pub use classical::{
    build_classical_codebook, classical_round_trip, optimality_witness, run_classical,
    transmission_probability, CodeBook, CodeEntry, Message,
};
pub use encoding::{
    decode_logical, dfs_basis_4qubit, encode_logical, j_max, noiseless_subsystem_plan,
    run_logical, EncodingKind, LogicalEncoding,
};
pub use gates::{dfs_logical_paulis, exchange_logical_action, swap_operator, ExchangeAction};
pub use helstrom::helstrom_success_probability;
pub use rates::{rate_table, RateRow, RateTable};

/// Summary of one protocol run, as written by the command-line tool.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProtocolReport {
    pub protocol: String,
    pub n: usize,
    pub trials: usize,
    pub errors: usize,
    pub min_fidelity: Option<f64>,
    pub mean_fidelity: Option<f64>,
    pub chsh_value: Option<f64>,
    pub rate_rows: Vec<RateRow>,
}

impl ProtocolReport {
    pub fn new(protocol: impl Into<String>, n: usize) -> Self {
        Self {
            protocol: protocol.into(),
            n,
            trials: 0,
            errors: 0,
            min_fidelity: None,
            mean_fidelity: None,
            chsh_value: None,
            rate_rows: Vec::new(),
        }
    }
}

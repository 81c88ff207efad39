//! Classical messaging through the collective twirl: one codeword per irrep
//! block, decoded by the projective measurement onto the blocks.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{out_of_range, Error, Result};
use crate::irrep::{decompose, HalfInteger, IrrepDecomposition};
use crate::quantum::{haar_random_su2, rotate_state, GroupElement, StateVector};
use crate::rng::RandomSource;
use crate::twirl::TwirlChannel;

pub const MAX_CODEBOOK_QUBITS: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Message(pub usize);

#[derive(Clone, Debug)]
pub struct CodeEntry {
    pub message: Message,
    pub codeword: StateVector,
    pub j: HalfInteger,
    pub r: usize,
}

#[derive(Clone, Debug)]
pub struct CodeBook {
    n: usize,
    entries: Vec<CodeEntry>,
    decomposition: IrrepDecomposition,
}

impl CodeBook {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[CodeEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn decomposition(&self) -> &IrrepDecomposition {
        &self.decomposition
    }

    pub fn entry(&self, msg: Message) -> Result<&CodeEntry> {
        self.entries
            .get(msg.0)
            .ok_or_else(|| out_of_range("message", msg.0, format!("0..{}", self.entries.len())))
    }

    /// Message carried by block `(j, r)`.
    pub fn message_for_block(&self, j: HalfInteger, r: usize) -> Result<Message> {
        self.entries
            .iter()
            .find(|e| e.j == j && e.r == r)
            .map(|e| e.message)
            .ok_or(Error::UnknownBlock { j: j.to_string(), r })
    }

    /// Probability of each block outcome (indexed like the messages) when
    /// `state` is measured with the block PVM.
    pub fn outcome_probabilities(&self, state: &StateVector) -> Result<Vec<f64>> {
        crate::quantum::check_dim(self.decomposition.dim(), state.dim())?;
        Ok(self
            .decomposition
            .blocks()
            .iter()
            .map(|b| (b.isometry.adjoint() * state.amplitudes()).norm_squared())
            .collect())
    }
}

/// Codeword `|j, m = j, r⟩` for every block, messages in block order.
pub fn build_classical_codebook(n: usize) -> Result<CodeBook> {
    if n == 0 || n > MAX_CODEBOOK_QUBITS {
        return Err(out_of_range("qubit count", n, format!("1..={MAX_CODEBOOK_QUBITS}")));
    }
    let decomposition = decompose(n)?;
    let entries = decomposition
        .blocks()
        .iter()
        .enumerate()
        .map(|(k, b)| {
            Ok(CodeEntry {
                message: Message(k),
                codeword: StateVector::new(b.highest_weight())?,
                j: b.j,
                r: b.r,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CodeBook {
        n,
        entries,
        decomposition,
    })
}

/// Samples an index from a discrete distribution.
fn sample_index(probs: &[f64], rng: &mut RandomSource) -> usize {
    let total: f64 = probs.iter().sum();
    let mut u = rng.random::<f64>() * total;
    for (k, &p) in probs.iter().enumerate() {
        if u < p {
            return k;
        }
        u -= p;
    }
    // rounding at the top end
    probs
        .iter()
        .rposition(|&p| p > 0.0)
        .unwrap_or(probs.len() - 1)
}

/// Probability that `msg` sent through frame mismatch `g` decodes to `msg`.
pub fn transmission_probability(msg: Message, cb: &CodeBook, g: &GroupElement) -> Result<f64> {
    let received = rotate_state(g, &cb.entry(msg)?.codeword)?;
    Ok(cb.outcome_probabilities(&received)?[msg.0])
}

/// Sends `msg`, rotates it by the unknown frame mismatch `g`, and decodes a
/// sampled outcome of the block measurement.
pub fn classical_round_trip(
    msg: Message,
    cb: &CodeBook,
    g: &GroupElement,
    rng: &mut RandomSource,
) -> Result<Message> {
    let received = rotate_state(g, &cb.entry(msg)?.codeword)?;
    let probs = cb.outcome_probabilities(&received)?;
    Ok(Message(sample_index(&probs, rng)))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassicalRun {
    pub n: usize,
    pub messages: usize,
    pub trials: usize,
    pub errors: usize,
    /// Smallest computed probability of decoding the sent message.
    pub min_success_probability: f64,
}

/// Every message sent `trials_per_message` times, each through its own
/// Haar-random frame mismatch. Trial `t` of message `k` draws from
/// `rng.split(k).split(t)`.
pub fn run_classical(cb: &CodeBook, trials_per_message: usize, rng: &RandomSource) -> Result<ClassicalRun> {
    let per_message: Vec<(usize, f64)> = (0..cb.len())
        .into_par_iter()
        .map(|k| {
            let msg_rng = rng.split(k as u64);
            let mut errors = 0;
            let mut min_p = 1.0f64;
            for t in 0..trials_per_message {
                let mut trial_rng = msg_rng.split(t as u64);
                let g = haar_random_su2(&mut trial_rng);
                let received = rotate_state(&g, &cb.entries[k].codeword)?;
                let probs = cb.outcome_probabilities(&received)?;
                min_p = min_p.min(probs[k]);
                if sample_index(&probs, &mut trial_rng) != k {
                    errors += 1;
                }
            }
            Ok((errors, min_p))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ClassicalRun {
        n: cb.n(),
        messages: cb.len(),
        trials: trials_per_message * cb.len(),
        errors: per_message.iter().map(|x| x.0).sum(),
        min_success_probability: per_message.iter().map(|x| x.1).fold(1.0, f64::min),
    })
}

/// Support structure of the twirled codewords.
#[derive(Clone, Debug, PartialEq)]
pub struct SupportWitness {
    /// Largest `tr(ρ_a ρ_b)` over distinct codewords.
    pub max_overlap: f64,
    /// Sum of the numerical ranks of the twirled codewords.
    pub rank_sum: usize,
    pub dim: usize,
}

/// Twirls every codeword and measures how their supports fit together.
/// Pairwise orthogonal supports whose ranks add up to the full dimension
/// leave no room for another perfectly distinguishable message.
pub fn optimality_witness(cb: &CodeBook, tol: f64) -> Result<SupportWitness> {
    let ch = TwirlChannel::from_decomposition(cb.decomposition.clone());
    let twirled = cb
        .entries
        .iter()
        .map(|e| ch.apply(&e.codeword.to_density()))
        .collect::<Result<Vec<_>>>()?;
    let mut max_overlap = 0.0f64;
    for (a, ra) in twirled.iter().enumerate() {
        for rb in &twirled[a + 1..] {
            let ov = (ra.matrix() * rb.matrix()).trace().norm();
            max_overlap = max_overlap.max(ov);
        }
    }
    let rank_sum = twirled
        .iter()
        .map(|rho| crate::quantum::numerical_rank(rho.matrix(), tol))
        .sum();
    Ok(SupportWitness {
        max_overlap,
        rank_sum,
        dim: cb.decomposition.dim(),
    })
}

/// Bit assignment for the two-qubit protocol.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BitLabeling {
    /// Block order: bit 0 is the triplet, bit 1 the singlet.
    Canonical,
    /// Bit 0 is the singlet, bit 1 a triplet state.
    SingletIsZero,
}

/// One bit over two qubits with frame mismatch `g`.
pub fn two_qubit_bit_round_trip(
    bit: u8,
    labeling: BitLabeling,
    g: &GroupElement,
    rng: &mut RandomSource,
) -> Result<u8> {
    if bit > 1 {
        return Err(out_of_range("bit", bit, "0 or 1"));
    }
    let cb = build_classical_codebook(2)?;
    let flip = |b: u8| match labeling {
        BitLabeling::Canonical => b,
        BitLabeling::SingletIsZero => 1 - b,
    };
    let decoded = classical_round_trip(Message(flip(bit) as usize), &cb, g, rng)?;
    Ok(flip(decoded.0 as u8))
}

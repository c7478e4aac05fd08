#pragma once

#include "anontx/bits.hpp"
#include "anontx/protocols/transcript.hpp"
#include "anontx/qsim/dense_state.hpp"
#include "anontx/qsim/ghz_state.hpp"
#include "anontx/rng.hpp"

namespace anontx::protocols {

struct AeResult {
  /// Pair shared by sender and receiver; phase 0 when everyone is honest.
  qsim::GhzPhaseState epr;
  Transcript transcript;
  RandomnessLedger ledger;
  /// Outcomes m_j of the n - 2 measuring players, in player order.
  Bits measurements;
  Bit b = 0;
  /// Receiver's broadcast; never used in any computation.
  Bit b_prime = 0;
};

/// Anonymous entanglement. Non-participants H-measure and broadcast m_j, the
/// sender broadcasts a random b and flips iff b = 1, the receiver broadcasts
/// a random decoy b' and flips iff b xor (xor_j m_j) = 1. All n broadcasts
/// share one round.
AeResult ae_establish(int n, PlayerId sender, PlayerId receiver,
                      RngStream& rng);

struct AnonqResult {
  qsim::Qubit received;
  /// Bell outcomes, which are the data items of the two ANON sub-runs.
  Bit m0 = 0;
  Bit m1 = 0;
  Transcript transcript;
  RandomnessLedger ledger;
};

/// Teleportation over AE: the sender Bell-measures the input with its EPR
/// half, ships (m0, m1) through two ANON runs, and the receiver applies
/// Z^{m0} then X^{m1}.
AnonqResult anonq_send(int n, PlayerId sender, PlayerId receiver,
                       const qsim::Qubit& input, RngStream& rng);

}  // namespace anontx::protocols

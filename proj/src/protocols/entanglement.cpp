#include "anontx/protocols/entanglement.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "anontx/protocols/anon.hpp"

namespace anontx::protocols {

namespace {

void check_pair(int n, PlayerId sender, PlayerId receiver) {
  if (n < 3) throw std::invalid_argument("need at least 3 players");
  if (sender < 0 || sender >= n || receiver < 0 || receiver >= n) {
    throw std::invalid_argument("sender/receiver out of range");
  }
  if (sender == receiver) {
    throw std::invalid_argument("sender and receiver must differ");
  }
}

}  // namespace

AeResult ae_establish(int n, PlayerId sender, PlayerId receiver,
                      RngStream& rng) {
  check_pair(n, sender, receiver);

  std::vector<PlayerId> measured;
  for (int m = 0; m < n; ++m) {
    if (m != sender && m != receiver) measured.push_back(m);
  }
  auto sub = qsim::hadamard_measure_subset(qsim::make_ghz(n), measured, rng);
  qsim::GhzPhaseState pair = sub.residual;

  const Bit b = rng.bit();
  if (b) pair = qsim::apply_phase_flip(pair, 0);
  const Bit b_prime = rng.bit();
  if (b ^ sub.record.parity) pair = qsim::apply_phase_flip(pair, 1);

  AeResult result{pair, Transcript(n), RandomnessLedger(n),
                  sub.record.outcomes, b, b_prime};
  Round round;
  for (std::size_t i = 0; i < measured.size(); ++i) {
    const Bit m = sub.record.outcomes[i];
    round.entries.push_back({measured[i], {m}});
    result.ledger.record(measured[i], 0, "measurement", {m});
  }
  round.entries.push_back({sender, {b}});
  result.ledger.record(sender, 0, "coin", {b});
  round.entries.push_back({receiver, {b_prime}});
  result.ledger.record(receiver, 0, "decoy", {b_prime});
  result.transcript.add_round(std::move(round));
  return result;
}

AnonqResult anonq_send(int n, PlayerId sender, PlayerId receiver,
                       const qsim::Qubit& input, RngStream& rng) {
  check_pair(n, sender, receiver);
  if (std::abs(input.norm_squared() - 1.0) > 1e-10) {
    throw std::invalid_argument("input qubit is not normalized");
  }

  AeResult ae = ae_establish(n, sender, receiver, rng);

  // Qubit 0: input, 1: sender's EPR half, 2: receiver's EPR half.
  const qsim::DenseState pair = qsim::to_dense(ae.epr);
  std::vector<qsim::Complex> amps(8);
  for (std::size_t i = 0; i < amps.size(); ++i) {
    amps[i] = ((i & 1) ? input.beta : input.alpha) * pair.amplitude(i >> 1);
  }
  const qsim::DenseState joint(3, std::move(amps));
  auto bell = qsim::bell_measure(joint, 0, 1, rng);

  AnonqResult result{{}, bell.m0, bell.m1, ae.transcript, ae.ledger};
  AnonResult first = anon_send(n, sender, bell.m0, rng);
  AnonResult second = anon_send(n, sender, bell.m1, rng);
  int offset = static_cast<int>(result.transcript.rounds().size());
  result.transcript.append(first.transcript);
  result.ledger.append(first.ledger, offset);
  offset = static_cast<int>(result.transcript.rounds().size());
  result.transcript.append(second.transcript);
  result.ledger.append(second.ledger, offset);

  // The receiver only sees what ANON delivered.
  const auto corrected = qsim::apply_teleport_correction(
      bell.state, 2, *first.decoded, *second.decoded);
  result.received = corrected.isolated_qubit(2);
  return result;
}

}  // namespace anontx::protocols

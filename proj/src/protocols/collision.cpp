#include "anontx/protocols/collision.hpp"

#include <stdexcept>

namespace anontx::protocols {

int collision_round_count(int n) {
  if (n < 2) throw std::invalid_argument("need at least 2 players");
  return ceil_log2(static_cast<std::uint64_t>(n)) + 1;
}

std::vector<qsim::GhzPhaseState> prepare_rotated_states(int n) {
  const int rounds = collision_round_count(n);
  const int denom = rounds - 1;
  std::vector<qsim::GhzPhaseState> states;
  states.reserve(rounds);
  for (int j = 0; j < rounds; ++j) {
    // The designated preparer is player 0; any player gives the same state.
    states.push_back(qsim::apply_rz(
        qsim::GhzPhaseState(n, 0, denom), 0, -1, j));
  }
  return states;
}

KDecomposition decompose_k(long long k) {
  if (k < 2) throw std::invalid_argument("decompose_k needs k >= 2");
  long long rest = k - 1;
  int j = 0;
  while ((rest & 1) == 0) {
    rest >>= 1;
    ++j;
  }
  return {j, rest};
}

CollisionVerdict collision_detect(int n, const PlayerSet& wishers,
                                  RngStream& rng) {
  const auto who = normalize_players(wishers, n, "wisher");
  const auto states = prepare_rotated_states(n);

  CollisionVerdict out;
  out.transcript = Transcript(n);
  out.ledger = RandomnessLedger(n);
  for (int j = 0; j < static_cast<int>(states.size()); ++j) {
    auto state = states[j];
    for (PlayerId w : who) state = qsim::apply_rz(state, w, 1, j);
    const auto rec = qsim::hadamard_measure_all(state, rng);

    Round round;
    for (int m = 0; m < n; ++m) {
      round.entries.push_back({m, {rec.outcomes[m]}});
      out.ledger.record(m, j, "measurement", {rec.outcomes[m]});
    }
    out.transcript.add_round(std::move(round));
    out.parities.push_back(rec.parity);
    if (rec.parity) {
      out.first_odd_round = j;
      out.verdict = CollisionOutcome::NotExactlyOne;
      return out;
    }
  }
  out.verdict = CollisionOutcome::ExactlyOne;
  return out;
}

AlohaSchedule aloha_schedule(int n, const PlayerSet& wishers, int max_backoff,
                             RngStream& rng, int round_cap) {
  if (max_backoff < 1) throw std::invalid_argument("max_backoff must be >= 1");
  const auto who = normalize_players(wishers, n, "wisher");

  AlohaSchedule schedule;
  if (who.empty()) return schedule;

  // next_attempt[i] is the round in which who[i] tries next; 0 means done.
  std::vector<long long> next_attempt(who.size(), 1);
  std::size_t pending = who.size();
  for (long long r = 1; pending > 0; ++r) {
    if (r > round_cap) {
      schedule.completed = false;
      break;
    }
    AlohaRound round;
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < who.size(); ++i) {
      if (next_attempt[i] == r) {
        round.attempting.push_back(who[i]);
        idx.push_back(i);
      }
    }
    round.verdict = collision_detect(n, round.attempting, rng).verdict;
    if (round.verdict == CollisionOutcome::ExactlyOne) {
      round.transmitted = who[idx.front()];
      next_attempt[idx.front()] = 0;
      --pending;
    } else {
      for (std::size_t i : idx) next_attempt[i] = r + rng.between(1, max_backoff);
    }
    schedule.rounds.push_back(std::move(round));
  }
  return schedule;
}

std::optional<std::pair<PlayerId, PlayerId>> elect_sender_receiver(
    int n, const PlayerSet& sender_wishers, const PlayerSet& receiver_wishers,
    RngStream& rng) {
  if (n < 3) throw std::invalid_argument("election needs at least 3 players");
  const auto senders = normalize_players(sender_wishers, n, "sender wisher");
  const auto receivers =
      normalize_players(receiver_wishers, n, "receiver wisher");
  if (collision_detect(n, senders, rng).verdict != CollisionOutcome::ExactlyOne) {
    return std::nullopt;
  }
  if (collision_detect(n, receivers, rng).verdict !=
      CollisionOutcome::ExactlyOne) {
    return std::nullopt;
  }
  if (senders.front() == receivers.front()) return std::nullopt;
  return std::make_pair(senders.front(), receivers.front());
}

}  // namespace anontx::protocols

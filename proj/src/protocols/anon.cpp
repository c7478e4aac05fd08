#include "anontx/protocols/anon.hpp"

#include <stdexcept>

#include "anontx/qsim/ghz_state.hpp"

namespace anontx::protocols {

std::vector<PlayerConfig> make_players(int n) {
  std::vector<PlayerConfig> players(n);
  for (int m = 0; m < n; ++m) players[m].id = m;
  return players;
}

AnonResult anon_run(std::span<const PlayerConfig> players, RngStream& rng,
                    AnonMode mode) {
  const int n = static_cast<int>(players.size());
  if (n < 3) throw std::invalid_argument("ANON needs at least 3 players");
  int senders = 0;
  for (int m = 0; m < n; ++m) {
    const auto& p = players[m];
    if (p.id != m) throw std::invalid_argument("player ids must be 0..n-1");
    if (p.role == Role::Sender) {
      ++senders;
      if (!p.data_item) throw std::invalid_argument("sender has no data item");
    }
  }
  if (mode == AnonMode::SingleSender && senders > 1) {
    throw std::invalid_argument(
        "more than one sender; run collision detection or use parity mode");
  }

  auto state = qsim::make_ghz(n);
  for (const auto& p : players) {
    if (p.role == Role::Sender && *p.data_item == 1) {
      state = qsim::apply_phase_flip(state, p.id);
    }
    if (p.deviation == Deviation::ExtraFlip) {
      state = qsim::apply_phase_flip(state, p.id);
    }
  }

  const auto measured = qsim::hadamard_measure_all(state, rng);

  AnonResult result{std::nullopt, std::vector<std::optional<Bit>>(n),
                    Transcript(n), RandomnessLedger(n)};
  Round round;
  for (const auto& p : players) {
    const Bit outcome = measured.outcomes[p.id];
    result.ledger.record(p.id, 0, "measurement", {outcome});
    if (p.deviation == Deviation::Withhold) continue;
    const Bit sent =
        p.deviation == Deviation::InvertOutcome ? outcome ^ 1 : outcome;
    round.entries.push_back({p.id, {sent}});
  }
  result.transcript.add_round(std::move(round));
  if (result.transcript.aborted()) return result;

  const Bit k = parity(result.transcript.round_bits(0));
  for (const auto& p : players) {
    if (p.honest()) result.decoded_by[p.id] = k;
  }
  result.decoded = k;
  return result;
}

AnonResult anon_send(int n, PlayerId sender, Bit d, RngStream& rng) {
  if (n < 3) throw std::invalid_argument("ANON needs at least 3 players");
  if (sender < 0 || sender >= n) {
    throw std::invalid_argument("sender out of range");
  }
  auto players = make_players(n);
  players[sender].role = Role::Sender;
  players[sender].data_item = d & 1;
  return anon_run(players, rng);
}

Bit anon_multiparty_parity(int n, const PlayerSet& flippers, RngStream& rng) {
  if (n < 3) throw std::invalid_argument("ANON needs at least 3 players");
  auto players = make_players(n);
  for (PlayerId f : normalize_players(flippers, n, "flipper")) {
    players[f].role = Role::Sender;
    players[f].data_item = 1;
  }
  return *anon_run(players, rng, AnonMode::Parity).decoded;
}

}  // namespace anontx::protocols

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "anontx/bits.hpp"
#include "anontx/protocols/transcript.hpp"
#include "anontx/rng.hpp"

namespace anontx::protocols {

enum class Role { None, Sender, Receiver };

/// How a corrupted player departs from the protocol.
enum class Deviation {
  None,
  /// Skips the broadcast channel; the run aborts.
  Withhold,
  /// Applies an extra sigma_z to its qubit.
  ExtraFlip,
  /// Broadcasts the complement of its measurement.
  InvertOutcome,
};

struct PlayerConfig {
  PlayerId id = 0;
  Role role = Role::None;
  std::optional<Bit> data_item;
  Deviation deviation = Deviation::None;

  bool honest() const { return deviation == Deviation::None; }
};

/// Default configs: n honest players with no role.
std::vector<PlayerConfig> make_players(int n);

struct AnonResult {
  /// Bit decoded by the honest players; empty when the run aborted.
  std::optional<Bit> decoded;
  /// Per-player decode; empty for dishonest players and aborted runs.
  std::vector<std::optional<Bit>> decoded_by;
  Transcript transcript;
  RandomnessLedger ledger;
};

enum class AnonMode {
  /// At most one Sender.
  SingleSender,
  /// Any number of players flip; the output is the parity of their inputs.
  Parity,
};

/// One execution of ANON over a fresh GHZ state. Players with role Sender
/// flip the phase iff their data item is 1; everyone H-measures and
/// broadcasts; the decoded bit is the parity of the broadcast.
AnonResult anon_run(std::span<const PlayerConfig> players, RngStream& rng,
                    AnonMode mode = AnonMode::SingleSender);

/// All-honest ANON with a single sender. Requires n >= 3.
AnonResult anon_send(int n, PlayerId sender, Bit d, RngStream& rng);

/// Parity mode: every player in `flippers` applies sigma_z.
Bit anon_multiparty_parity(int n, const PlayerSet& flippers, RngStream& rng);

}  // namespace anontx::protocols

#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "anontx/bits.hpp"
#include "json.hpp"

namespace anontx::protocols {

/// One broadcast c_jm.
struct Broadcast {
  PlayerId player = 0;
  Bits bits;

  friend bool operator==(const Broadcast&, const Broadcast&) = default;
};

struct Round {
  std::vector<Broadcast> entries;

  friend bool operator==(const Round&, const Round&) = default;
};

/// The public record C = {c_jm}. Rounds are appended in protocol order.
class Transcript {
 public:
  Transcript() = default;
  explicit Transcript(int n) : n_(n) {}

  int num_players() const { return n_; }
  const std::vector<Round>& rounds() const { return rounds_; }
  bool aborted() const { return aborted_; }

  /// Appends a round built from per-player messages. A player whose entry is
  /// absent did not broadcast; that aborts the run.
  void add_round(Round round);

  /// Appends every round of a sub-run (e.g. ANON calls inside ANONQ).
  void append(const Transcript& other);

  /// Broadcasts of one round concatenated in player order.
  Bits round_bits(std::size_t j) const;

  /// Every bit of the transcript in order. Used as the transcript key in
  /// exact distributions.
  std::string key() const;

  friend bool operator==(const Transcript&, const Transcript&) = default;

 private:
  int n_ = 0;
  std::vector<Round> rounds_;
  bool aborted_ = false;
};

/// Role-tagged random value. The tag is for humans reading a full run
/// record; adversary views drop it because roles are not part of G.
struct LedgerEntry {
  int round = 0;
  std::string kind;
  Bits value;

  friend bool operator==(const LedgerEntry&, const LedgerEntry&) = default;
};

/// G = {G_m}: per-player randomness. Append-only.
class RandomnessLedger {
 public:
  RandomnessLedger() = default;
  explicit RandomnessLedger(int n) : entries_(n) {}

  int num_players() const { return static_cast<int>(entries_.size()); }

  void record(PlayerId player, int round, std::string kind, Bits value);

  /// Concatenates another ledger's entries, offsetting their rounds.
  void append(const RandomnessLedger& other, int round_offset);

  const std::vector<LedgerEntry>& of(PlayerId player) const {
    return entries_.at(player);
  }

  /// Values only, in player order; the view a hijacking adversary obtains.
  std::string key() const;
  /// Values of the listed players only.
  std::string key(const PlayerSet& players) const;

  friend bool operator==(const RandomnessLedger&,
                         const RandomnessLedger&) = default;

 private:
  std::vector<std::vector<LedgerEntry>> entries_;
};

/// {protocol, n, rounds: [[{player, bits}]], ledger: {player: [values]},
///  aborted, verdicts}
nlohmann::json to_json(const std::string& protocol, const Transcript& transcript,
                       const RandomnessLedger& ledger,
                       const nlohmann::json& verdicts);

}  // namespace anontx::protocols

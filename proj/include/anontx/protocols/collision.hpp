#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "anontx/bits.hpp"
#include "anontx/protocols/transcript.hpp"
#include "anontx/qsim/ghz_state.hpp"
#include "anontx/rng.hpp"

namespace anontx::protocols {

/// ceil(log2 n) + 1: rounds of collision detection, one GHZ state each.
int collision_round_count(int n);

/// States |t_j> for j = 0..ceil(log2 n): phase -pi/2^j, all over the common
/// denominator 2^ceil(log2 n).
std::vector<qsim::GhzPhaseState> prepare_rotated_states(int n);

/// Unique (j, m) with m odd and k = 2^j * m + 1. Requires k >= 2.
struct KDecomposition {
  int j = 0;
  long long m = 1;
  friend bool operator==(const KDecomposition&, const KDecomposition&) = default;
};
KDecomposition decompose_k(long long k);

enum class CollisionOutcome { ExactlyOne, NotExactlyOne };

struct CollisionVerdict {
  /// k_j mod 2 for each round actually run.
  std::vector<Bit> parities;
  CollisionOutcome verdict = CollisionOutcome::NotExactlyOne;
  std::optional<int> first_odd_round;
  Transcript transcript;
  RandomnessLedger ledger;
};

/// Round j: every wisher applies R_z(pi/2^j) to |t_j>, all players H-measure
/// and broadcast. Stops at the first odd-parity round. Zero wishers leave
/// |t_0> at phase pi, so round 0 always reports them.
CollisionVerdict collision_detect(int n, const PlayerSet& wishers,
                                  RngStream& rng);

struct AlohaRound {
  PlayerSet attempting;
  CollisionOutcome verdict = CollisionOutcome::NotExactlyOne;
  std::optional<PlayerId> transmitted;
};

struct AlohaSchedule {
  std::vector<AlohaRound> rounds;
  /// False if the round cap was hit with wishers still pending.
  bool completed = true;
};

inline constexpr int kDefaultAlohaCap = 1000;

/// Every wisher first attempts in round 1. Colliding wishers each redraw a
/// backoff uniform in [1, max_backoff]. Each round runs collision detection
/// on the attempting set; a sole attempter transmits. Zero wishers yield an
/// empty schedule.
AlohaSchedule aloha_schedule(int n, const PlayerSet& wishers, int max_backoff,
                             RngStream& rng, int round_cap = kDefaultAlohaCap);

/// Collision detection for senders, then for receivers. Returns the pair only
/// if both runs report exactly one wisher and the two are distinct players.
std::optional<std::pair<PlayerId, PlayerId>> elect_sender_receiver(
    int n, const PlayerSet& sender_wishers, const PlayerSet& receiver_wishers,
    RngStream& rng);

}  // namespace anontx::protocols

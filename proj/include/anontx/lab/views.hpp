#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "anontx/bits.hpp"
#include "anontx/keygraph/key_sharing_graph.hpp"
#include "anontx/protocols/transcript.hpp"
#include "anontx/qsim/dense_state.hpp"
#include "anontx/rng.hpp"
#include "json.hpp"

namespace anontx::lab {

enum class ProtocolKind { Anon, Ae, Anonq, DcNet };

const char* to_string(ProtocolKind p);
ProtocolKind protocol_from_string(const std::string& s);

/// A protocol family: everything about a run except who plays which role.
struct Scenario {
  ProtocolKind protocol = ProtocolKind::Anon;
  int n = 3;
  /// Data bit for ANON and DC-net.
  Bit d = 1;
  /// Input qubit for ANONQ.
  qsim::Qubit input{};
  /// DC-net key graph; complete graph when empty.
  std::optional<keygraph::KeySharingGraph> graph;

  keygraph::KeySharingGraph key_graph() const;
};

struct RoleAssignment {
  PlayerId sender = 0;
  /// Needed by AE and ANONQ; ignored by ANON and DC-net.
  std::optional<PlayerId> receiver;
};

/// What a (possibly hijacking) adversary holds after a run. Built only by
/// redaction, so data items and roles never enter it.
class AdversaryView {
 public:
  AdversaryView(const protocols::Transcript& transcript,
                const protocols::RandomnessLedger& ledger,
                const PlayerSet& corrupted, bool hijacked_all);

  const PlayerSet& corrupted() const { return corrupted_; }
  bool hijacked_all() const { return hijacked_all_; }
  const protocols::Transcript& observed() const { return observed_; }
  /// player -> that player's random values, role tags stripped.
  const std::map<PlayerId, std::vector<Bits>>& randomness() const {
    return randomness_;
  }

  /// Canonical string of (C, G^t) or (C, G).
  std::string key() const;
  nlohmann::json to_json() const;

 private:
  PlayerSet corrupted_;
  bool hijacked_all_;
  protocols::Transcript observed_;
  std::map<PlayerId, std::vector<Bits>> randomness_;
};

struct WeightedRun {
  protocols::Transcript transcript;
  protocols::RandomnessLedger ledger;
  double probability = 0.0;
};

/// Thrown when a scenario is too large to enumerate; use sampled mode.
class EnumerationTooLarge : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Every joint (C, G) outcome of a run with its exact probability. Limits:
/// ANON and AE n <= 10, ANONQ n <= 5, DC-net at most 20 edges.
std::vector<WeightedRun> enumerate_runs(const Scenario& scenario,
                                        const RoleAssignment& roles);

/// One seeded run through the protocol implementations.
WeightedRun sample_run(const Scenario& scenario, const RoleAssignment& roles,
                       RngStream& rng);

using ViewDistribution = std::map<std::string, double>;

/// Exact distribution over joint (C, G) keys.
ViewDistribution exact_transcript_distribution(const Scenario& scenario,
                                               const RoleAssignment& roles);

/// Pushes a run distribution through the adversary's redaction.
ViewDistribution view_distribution(const std::vector<WeightedRun>& runs,
                                   const PlayerSet& corrupted,
                                   bool hijacked_all);

double total_variation(const ViewDistribution& p, const ViewDistribution& q);

}  // namespace anontx::lab

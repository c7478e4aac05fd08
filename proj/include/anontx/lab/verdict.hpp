#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "anontx/bits.hpp"
#include "anontx/lab/views.hpp"
#include "json.hpp"

namespace anontx::lab {

enum class Target { Sender, Receiver };
enum class Method { Exact, Sampled };

const char* to_string(Target t);
const char* to_string(Method m);
Target target_from_string(const std::string& s);
Method method_from_string(const std::string& s);

struct VerdictOptions {
  Method method = Method::Exact;
  /// Runs per candidate in sampled mode.
  int trials = 10000;
  /// Exact: |posterior_max - baseline|. Sampled: max pairwise TV distance.
  std::optional<double> tolerance;
  std::uint64_t seed = 0;
};

inline constexpr double kExactTolerance = 1e-12;
inline constexpr double kSampledTvThreshold = 0.05;

struct AnonymityVerdict {
  double posterior_max = 0.0;
  /// 1 / (n - t)
  double baseline = 0.0;
  bool verdict = false;
  Method method = Method::Exact;
  Target target = Target::Sender;
  int t = 0;
  bool hijacked_all = false;
  /// Sampled mode: largest TV distance between candidates' view laws.
  std::optional<double> total_variation;
  int trials = 0;
  std::uint64_t seed = 0;
};

/// Per-candidate view distributions for an adversary corrupting `corrupted`.
/// Candidates are the players outside `corrupted`; a protocol that needs a
/// partner role (the receiver when targeting the sender and vice versa) has
/// it averaged uniformly over the other players.
struct CandidateViews {
  std::vector<PlayerId> candidates;
  std::vector<ViewDistribution> views;
};

CandidateViews exact_candidate_views(const Scenario& scenario, Target target,
                                     const PlayerSet& corrupted,
                                     bool hijacked_all);

/// Bayes posterior over candidates (uniform prior) for one observed view.
std::vector<double> posterior(const CandidateViews& views,
                              const std::string& view_key);

/// Sender/receiver anonymity against t corrupted players holding their own
/// randomness. Requires |corrupted| <= n - 2.
AnonymityVerdict anonymity_verdict(const Scenario& scenario, Target target,
                                   const PlayerSet& corrupted,
                                   const VerdictOptions& options = {});

/// Same, but the adversary also hijacks every player after the run.
AnonymityVerdict traceless_verdict(const Scenario& scenario, Target target,
                                   const PlayerSet& corrupted,
                                   const VerdictOptions& options = {});

/// {protocol, n, t, target, mode, posterior_max, baseline, verdict, trials,
///  seed}
nlohmann::json to_json(const Scenario& scenario, const AnonymityVerdict& v);

}  // namespace anontx::lab

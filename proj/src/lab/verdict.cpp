#include "anontx/lab/verdict.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace anontx::lab {

namespace {

bool needs_partner(const Scenario& s, Target target) {
  switch (s.protocol) {
    case ProtocolKind::Ae:
    case ProtocolKind::Anonq:
      return true;
    case ProtocolKind::Anon:
    case ProtocolKind::DcNet:
      // Receivers take no action in these protocols; a receiver candidate
      // still needs some sender to exist.
      return target == Target::Receiver;
  }
  return false;
}

/// Role assignments consistent with `candidate` holding the target role,
/// each equally likely.
std::vector<RoleAssignment> assignments_for(const Scenario& s, Target target,
                                            PlayerId candidate) {
  std::vector<RoleAssignment> out;
  if (!needs_partner(s, target)) {
    out.push_back({candidate, std::nullopt});
    return out;
  }
  for (int p = 0; p < s.n; ++p) {
    if (p == candidate) continue;
    if (target == Target::Sender) {
      out.push_back({candidate, p});
    } else {
      out.push_back({p, candidate});
    }
  }
  return out;
}

PlayerSet check_corrupted(const Scenario& s, const PlayerSet& corrupted) {
  auto who = normalize_players(corrupted, s.n, "corrupted player");
  if (static_cast<int>(who.size()) > s.n - 2) {
    throw std::invalid_argument("t must satisfy t <= n - 2");
  }
  return who;
}

std::vector<PlayerId> honest_candidates(int n, const PlayerSet& corrupted) {
  std::vector<PlayerId> out;
  for (int m = 0; m < n; ++m) {
    if (!std::binary_search(corrupted.begin(), corrupted.end(), m)) {
      out.push_back(m);
    }
  }
  return out;
}

AnonymityVerdict exact_verdict(const Scenario& s, Target target,
                               const PlayerSet& corrupted, bool hijacked_all,
                               const VerdictOptions& options) {
  const auto views = exact_candidate_views(s, target, corrupted, hijacked_all);
  std::set<std::string> support;
  for (const auto& v : views.views) {
    for (const auto& [k, p] : v) {
      if (p > 0.0) support.insert(k);
    }
  }
  double best = 0.0;
  for (const auto& key : support) {
    const auto post = posterior(views, key);
    best = std::max(best, *std::max_element(post.begin(), post.end()));
  }
  AnonymityVerdict v;
  v.method = Method::Exact;
  v.posterior_max = best;
  v.baseline = 1.0 / static_cast<double>(views.candidates.size());
  v.verdict = std::abs(best - v.baseline) <=
              options.tolerance.value_or(kExactTolerance);
  return v;
}

AnonymityVerdict sampled_verdict(const Scenario& s, Target target,
                                 const PlayerSet& corrupted, bool hijacked_all,
                                 const VerdictOptions& options) {
  if (options.trials < 1) throw std::invalid_argument("trials must be >= 1");
  const auto candidates = honest_candidates(s.n, corrupted);
  std::vector<ViewDistribution> empirical(candidates.size());
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    const auto roles = assignments_for(s, target, candidates[c]);
    RngStream rng(options.seed, mix64(static_cast<std::uint64_t>(candidates[c]) +
                                      0xc0ffee));
    const double w = 1.0 / options.trials;
    for (int i = 0; i < options.trials; ++i) {
      const auto& r = roles[rng.below(roles.size())];
      const auto run = sample_run(s, r, rng);
      empirical[c][AdversaryView(run.transcript, run.ledger, corrupted,
                                 hijacked_all)
                       .key()] += w;
    }
  }
  double tv = 0.0;
  for (std::size_t a = 0; a < empirical.size(); ++a) {
    for (std::size_t b = a + 1; b < empirical.size(); ++b) {
      tv = std::max(tv, total_variation(empirical[a], empirical[b]));
    }
  }
  // Success probability of the MAP guesser on the empirical laws.
  std::map<std::string, double> best_likelihood;
  for (const auto& dist : empirical) {
    for (const auto& [k, p] : dist) {
      auto& slot = best_likelihood[k];
      slot = std::max(slot, p);
    }
  }
  double success = 0.0;
  for (const auto& [k, p] : best_likelihood) success += p;
  success /= static_cast<double>(candidates.size());

  AnonymityVerdict v;
  v.method = Method::Sampled;
  v.posterior_max = success;
  v.baseline = 1.0 / static_cast<double>(candidates.size());
  v.total_variation = tv;
  v.verdict = tv <= options.tolerance.value_or(kSampledTvThreshold);
  v.trials = options.trials;
  return v;
}

AnonymityVerdict run_verdict(const Scenario& s, Target target,
                             const PlayerSet& corrupted, bool hijacked_all,
                             const VerdictOptions& options) {
  const auto who = check_corrupted(s, corrupted);
  AnonymityVerdict v = options.method == Method::Exact
                           ? exact_verdict(s, target, who, hijacked_all, options)
                           : sampled_verdict(s, target, who, hijacked_all,
                                             options);
  v.target = target;
  v.t = static_cast<int>(who.size());
  v.hijacked_all = hijacked_all;
  v.seed = options.seed;
  return v;
}

}  // namespace

const char* to_string(Target t) {
  return t == Target::Sender ? "sender" : "receiver";
}

const char* to_string(Method m) {
  return m == Method::Exact ? "exact" : "sampled";
}

Target target_from_string(const std::string& s) {
  if (s == "sender") return Target::Sender;
  if (s == "receiver") return Target::Receiver;
  throw std::invalid_argument("unknown target '" + s + "'");
}

Method method_from_string(const std::string& s) {
  if (s == "exact") return Method::Exact;
  if (s == "sampled") return Method::Sampled;
  throw std::invalid_argument("unknown mode '" + s + "'");
}

CandidateViews exact_candidate_views(const Scenario& s, Target target,
                                     const PlayerSet& corrupted,
                                     bool hijacked_all) {
  const auto who = check_corrupted(s, corrupted);
  CandidateViews out;
  out.candidates = honest_candidates(s.n, who);
  for (PlayerId c : out.candidates) {
    const auto roles = assignments_for(s, target, c);
    const double w = 1.0 / static_cast<double>(roles.size());
    ViewDistribution mixed;
    for (const auto& r : roles) {
      for (const auto& [k, p] :
           view_distribution(enumerate_runs(s, r), who, hijacked_all)) {
        mixed[k] += w * p;
      }
    }
    out.views.push_back(std::move(mixed));
  }
  return out;
}

std::vector<double> posterior(const CandidateViews& views,
                              const std::string& view_key) {
  std::vector<double> like(views.views.size(), 0.0);
  double total = 0.0;
  for (std::size_t c = 0; c < like.size(); ++c) {
    const auto it = views.views[c].find(view_key);
    if (it != views.views[c].end()) like[c] = it->second;
    total += like[c];
  }
  if (total <= 0.0) throw std::invalid_argument("view has zero probability");
  for (auto& l : like) l /= total;
  return like;
}

AnonymityVerdict anonymity_verdict(const Scenario& scenario, Target target,
                                   const PlayerSet& corrupted,
                                   const VerdictOptions& options) {
  return run_verdict(scenario, target, corrupted, false, options);
}

AnonymityVerdict traceless_verdict(const Scenario& scenario, Target target,
                                   const PlayerSet& corrupted,
                                   const VerdictOptions& options) {
  return run_verdict(scenario, target, corrupted, true, options);
}

nlohmann::json to_json(const Scenario& scenario, const AnonymityVerdict& v) {
  nlohmann::json j = {{"protocol", to_string(scenario.protocol)},
                      {"n", scenario.n},
                      {"t", v.t},
                      {"target", to_string(v.target)},
                      {"mode", to_string(v.method)},
                      {"hijacked_all", v.hijacked_all},
                      {"posterior_max", v.posterior_max},
                      {"baseline", v.baseline},
                      {"verdict", v.verdict},
                      {"trials", v.trials},
                      {"seed", v.seed}};
  if (v.total_variation) j["total_variation"] = *v.total_variation;
  return j;
}

}  // namespace anontx::lab

#include "anontx/lab/views.hpp"

#include <cmath>
#include <stdexcept>

#include "anontx/lab/dcnet.hpp"
#include "anontx/protocols/anon.hpp"
#include "anontx/protocols/entanglement.hpp"
#include "anontx/qsim/ghz_state.hpp"

namespace anontx::lab {

namespace {

using protocols::RandomnessLedger;
using protocols::Round;
using protocols::Transcript;

constexpr int kMaxAnonPlayers = 10;
constexpr int kMaxAnonqPlayers = 5;
constexpr std::size_t kMaxDcNetEdges = 20;

Bits bits_of(std::uint64_t x, int width) {
  Bits out(width);
  for (int i = 0; i < width; ++i) out[i] = (x >> i) & 1;
  return out;
}

PlayerId require_receiver(const Scenario& s, const RoleAssignment& roles) {
  if (!roles.receiver) {
    throw std::invalid_argument(std::string(to_string(s.protocol)) +
                                " needs a receiver");
  }
  if (*roles.receiver == roles.sender) {
    throw std::invalid_argument("sender and receiver must differ");
  }
  return *roles.receiver;
}

/// Exact ANON outcomes: one broadcast round where each player sends its
/// H-basis outcome, weighted by the post-flip state's outcome law.
std::vector<WeightedRun> anon_runs(int n, PlayerId sender, Bit d) {
  auto state = qsim::make_ghz(n);
  if (d) state = qsim::apply_phase_flip(state, sender);
  std::vector<WeightedRun> runs;
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
    const Bits outcome = bits_of(x, n);
    const double p = state.hadamard_outcome_probability(outcome);
    if (p == 0.0) continue;
    WeightedRun run{Transcript(n), RandomnessLedger(n), p};
    Round round;
    for (int m = 0; m < n; ++m) {
      round.entries.push_back({m, {outcome[m]}});
      run.ledger.record(m, 0, "measurement", {outcome[m]});
    }
    run.transcript.add_round(std::move(round));
    runs.push_back(std::move(run));
  }
  return runs;
}

/// Exact AE outcomes: n-2 uniform measurement bits, uniform b and b'.
std::vector<WeightedRun> ae_runs(int n, PlayerId sender, PlayerId receiver) {
  std::vector<PlayerId> measured;
  for (int m = 0; m < n; ++m) {
    if (m != sender && m != receiver) measured.push_back(m);
  }
  const int k = n - 2;
  const double p = std::ldexp(1.0, -n);
  std::vector<WeightedRun> runs;
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << k); ++x) {
    const Bits outcome = bits_of(x, k);
    for (Bit b = 0; b < 2; ++b) {
      for (Bit b_prime = 0; b_prime < 2; ++b_prime) {
        WeightedRun run{Transcript(n), RandomnessLedger(n), p};
        Round round;
        for (int i = 0; i < k; ++i) {
          round.entries.push_back({measured[i], {outcome[i]}});
          run.ledger.record(measured[i], 0, "measurement", {outcome[i]});
        }
        round.entries.push_back({sender, {b}});
        run.ledger.record(sender, 0, "coin", {b});
        round.entries.push_back({receiver, {b_prime}});
        run.ledger.record(receiver, 0, "decoy", {b_prime});
        run.transcript.add_round(std::move(round));
        runs.push_back(std::move(run));
      }
    }
  }
  return runs;
}

std::vector<WeightedRun> anonq_runs(int n, PlayerId sender, PlayerId receiver,
                                    const qsim::Qubit& input) {
  // Bell statistics of input (x) (|00> + |11>)/sqrt(2) on the dense backend.
  const double h = std::sqrt(0.5);
  std::vector<qsim::Complex> amps(8);
  for (std::size_t i = 0; i < 8; ++i) {
    const std::size_t pair = i >> 1;
    const qsim::Complex epr = (pair == 0 || pair == 3) ? h : 0.0;
    amps[i] = ((i & 1) ? input.beta : input.alpha) * epr;
  }
  const auto bell =
      qsim::bell_outcome_probabilities(qsim::DenseState(3, std::move(amps)), 0, 1);

  const auto ae = ae_runs(n, sender, receiver);
  const std::vector<WeightedRun> anon_by_bit[2] = {anon_runs(n, sender, 0),
                                                   anon_runs(n, sender, 1)};
  std::vector<WeightedRun> runs;
  for (const auto& a : ae) {
    for (int m0 = 0; m0 < 2; ++m0) {
      for (int m1 = 0; m1 < 2; ++m1) {
        const double pb = bell[2 * m0 + m1];
        if (pb == 0.0) continue;
        for (const auto& first : anon_by_bit[m0]) {
          for (const auto& second : anon_by_bit[m1]) {
            WeightedRun run{a.transcript, a.ledger,
                            a.probability * pb * first.probability *
                                second.probability};
            run.transcript.append(first.transcript);
            run.ledger.append(first.ledger, 1);
            run.transcript.append(second.transcript);
            run.ledger.append(second.ledger, 2);
            runs.push_back(std::move(run));
          }
        }
      }
    }
  }
  return runs;
}

std::vector<WeightedRun> dcnet_runs(const keygraph::KeySharingGraph& g,
                                    PlayerId sender, Bit d) {
  const std::size_t edges = g.num_edges();
  const double p = std::ldexp(1.0, -static_cast<int>(edges));
  std::vector<WeightedRun> runs;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << edges); ++mask) {
    const Bits keys = keys_from_mask(g, mask);
    const auto round = dcnet_round({g, keys, sender, d});
    runs.push_back({dcnet_transcript(round), dcnet_ledger(g, keys), p});
  }
  return runs;
}

}  // namespace

const char* to_string(ProtocolKind p) {
  switch (p) {
    case ProtocolKind::Anon:
      return "anon";
    case ProtocolKind::Ae:
      return "ae";
    case ProtocolKind::Anonq:
      return "anonq";
    case ProtocolKind::DcNet:
      return "dcnet";
  }
  return "?";
}

ProtocolKind protocol_from_string(const std::string& s) {
  if (s == "anon") return ProtocolKind::Anon;
  if (s == "ae") return ProtocolKind::Ae;
  if (s == "anonq") return ProtocolKind::Anonq;
  if (s == "dcnet") return ProtocolKind::DcNet;
  throw std::invalid_argument("unknown protocol '" + s + "'");
}

keygraph::KeySharingGraph Scenario::key_graph() const {
  if (graph) {
    if (graph->num_nodes() != n) {
      throw std::invalid_argument("key graph node count differs from n");
    }
    return *graph;
  }
  return keygraph::KeySharingGraph::complete(n);
}

AdversaryView::AdversaryView(const Transcript& transcript,
                             const RandomnessLedger& ledger,
                             const PlayerSet& corrupted, bool hijacked_all)
    : corrupted_(normalize_players(corrupted, transcript.num_players(),
                                   "corrupted player")),
      hijacked_all_(hijacked_all),
      observed_(transcript) {
  auto take = [&](PlayerId m) {
    auto& values = randomness_[m];
    for (const auto& e : ledger.of(m)) values.push_back(e.value);
  };
  if (hijacked_all) {
    for (int m = 0; m < ledger.num_players(); ++m) take(m);
  } else {
    for (PlayerId m : corrupted_) take(m);
  }
}

std::string AdversaryView::key() const {
  std::string k = observed_.key();
  k += '#';
  for (const auto& [m, values] : randomness_) {
    k += std::to_string(m);
    k += '[';
    for (const auto& v : values) {
      k += to_text(v);
      k += ',';
    }
    k += ']';
  }
  return k;
}

nlohmann::json AdversaryView::to_json() const {
  nlohmann::json rounds = nlohmann::json::array();
  for (const auto& round : observed_.rounds()) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& e : round.entries) {
      r.push_back({{"player", e.player}, {"bits", to_text(e.bits)}});
    }
    rounds.push_back(std::move(r));
  }
  nlohmann::json randomness = nlohmann::json::object();
  for (const auto& [m, values] : randomness_) {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& v : values) list.push_back(to_text(v));
    randomness[std::to_string(m)] = std::move(list);
  }
  return {{"corrupted", corrupted_},
          {"hijacked_all", hijacked_all_},
          {"rounds", std::move(rounds)},
          {"randomness", std::move(randomness)}};
}

std::vector<WeightedRun> enumerate_runs(const Scenario& s,
                                        const RoleAssignment& roles) {
  if (roles.sender < 0 || roles.sender >= s.n) {
    throw std::invalid_argument("sender out of range");
  }
  switch (s.protocol) {
    case ProtocolKind::Anon:
      if (s.n < 3) throw std::invalid_argument("ANON needs n >= 3");
      if (s.n > kMaxAnonPlayers) {
        throw EnumerationTooLarge("ANON enumeration limited to n <= 10");
      }
      return anon_runs(s.n, roles.sender, s.d & 1);
    case ProtocolKind::Ae: {
      const PlayerId r = require_receiver(s, roles);
      if (s.n < 3) throw std::invalid_argument("AE needs n >= 3");
      if (s.n > kMaxAnonPlayers) {
        throw EnumerationTooLarge("AE enumeration limited to n <= 10");
      }
      return ae_runs(s.n, roles.sender, r);
    }
    case ProtocolKind::Anonq: {
      const PlayerId r = require_receiver(s, roles);
      if (s.n < 3) throw std::invalid_argument("ANONQ needs n >= 3");
      if (s.n > kMaxAnonqPlayers) {
        throw EnumerationTooLarge("ANONQ enumeration limited to n <= 5");
      }
      return anonq_runs(s.n, roles.sender, r, s.input);
    }
    case ProtocolKind::DcNet: {
      const auto g = s.key_graph();
      if (g.num_edges() > kMaxDcNetEdges) {
        throw EnumerationTooLarge("DC-net enumeration limited to 20 edges");
      }
      return dcnet_runs(g, roles.sender, s.d & 1);
    }
  }
  throw std::logic_error("unreachable");
}

WeightedRun sample_run(const Scenario& s, const RoleAssignment& roles,
                       RngStream& rng) {
  switch (s.protocol) {
    case ProtocolKind::Anon: {
      auto r = protocols::anon_send(s.n, roles.sender, s.d, rng);
      return {std::move(r.transcript), std::move(r.ledger), 1.0};
    }
    case ProtocolKind::Ae: {
      auto r = protocols::ae_establish(s.n, roles.sender,
                                       require_receiver(s, roles), rng);
      return {std::move(r.transcript), std::move(r.ledger), 1.0};
    }
    case ProtocolKind::Anonq: {
      auto r = protocols::anonq_send(s.n, roles.sender,
                                     require_receiver(s, roles), s.input, rng);
      return {std::move(r.transcript), std::move(r.ledger), 1.0};
    }
    case ProtocolKind::DcNet: {
      const auto g = s.key_graph();
      const Bits keys = random_keys(g, rng);
      const auto round = dcnet_round({g, keys, roles.sender, s.d});
      return {dcnet_transcript(round), dcnet_ledger(g, keys), 1.0};
    }
  }
  throw std::logic_error("unreachable");
}

ViewDistribution exact_transcript_distribution(const Scenario& scenario,
                                               const RoleAssignment& roles) {
  return view_distribution(enumerate_runs(scenario, roles), {}, true);
}

ViewDistribution view_distribution(const std::vector<WeightedRun>& runs,
                                   const PlayerSet& corrupted,
                                   bool hijacked_all) {
  ViewDistribution dist;
  for (const auto& run : runs) {
    dist[AdversaryView(run.transcript, run.ledger, corrupted, hijacked_all)
             .key()] += run.probability;
  }
  return dist;
}

double total_variation(const ViewDistribution& p, const ViewDistribution& q) {
  double sum = 0.0;
  auto a = p.begin();
  auto b = q.begin();
  while (a != p.end() || b != q.end()) {
    if (b == q.end() || (a != p.end() && a->first < b->first)) {
      sum += std::abs(a->second);
      ++a;
    } else if (a == p.end() || b->first < a->first) {
      sum += std::abs(b->second);
      ++b;
    } else {
      sum += std::abs(a->second - b->second);
      ++a;
      ++b;
    }
  }
  return sum / 2.0;
}

}  // namespace anontx::lab

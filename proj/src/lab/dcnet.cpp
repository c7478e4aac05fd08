#include "anontx/lab/dcnet.hpp"

#include <stdexcept>

namespace anontx::lab {

Bits random_keys(const keygraph::KeySharingGraph& graph, RngStream& rng) {
  Bits keys(graph.num_edges());
  for (auto& k : keys) k = rng.bit();
  return keys;
}

Bits keys_from_mask(const keygraph::KeySharingGraph& graph,
                    std::uint64_t mask) {
  Bits keys(graph.num_edges());
  for (std::size_t e = 0; e < keys.size(); ++e) keys[e] = (mask >> e) & 1;
  return keys;
}

Bit incident_key_parity(const keygraph::KeySharingGraph& graph,
                        const Bits& keys, PlayerId player) {
  Bit acc = 0;
  std::size_t e = 0;
  for (const auto& [i, j] : graph.edges()) {
    if (i == player || j == player) acc ^= keys[e];
    ++e;
  }
  return acc;
}

DcNetRound dcnet_round(const DcNetInstance& instance) {
  const auto& g = instance.graph;
  if (!g.connected()) throw std::invalid_argument("key graph is disconnected");
  if (instance.keys.size() != g.num_edges()) {
    throw std::invalid_argument("one key bit per edge required");
  }
  if (instance.sender < 0 || instance.sender >= g.num_nodes()) {
    throw std::invalid_argument("sender out of range");
  }
  DcNetRound out;
  out.announcements.resize(g.num_nodes());
  for (int m = 0; m < g.num_nodes(); ++m) {
    Bit a = incident_key_parity(g, instance.keys, m);
    if (m == instance.sender) a ^= instance.d & 1;
    out.announcements[m] = a;
    out.decoded ^= a;
  }
  return out;
}

protocols::Transcript dcnet_transcript(const DcNetRound& round) {
  const int n = static_cast<int>(round.announcements.size());
  protocols::Transcript t(n);
  protocols::Round r;
  for (int m = 0; m < n; ++m) r.entries.push_back({m, {round.announcements[m]}});
  t.add_round(std::move(r));
  return t;
}

protocols::RandomnessLedger dcnet_ledger(const keygraph::KeySharingGraph& graph,
                                         const Bits& keys) {
  protocols::RandomnessLedger ledger(graph.num_nodes());
  std::vector<Bits> held(graph.num_nodes());
  std::size_t e = 0;
  for (const auto& [i, j] : graph.edges()) {
    held[i].push_back(keys[e]);
    held[j].push_back(keys[e]);
    ++e;
  }
  for (int m = 0; m < graph.num_nodes(); ++m) {
    ledger.record(m, 0, "keys", held[m]);
  }
  return ledger;
}

std::optional<PlayerId> trace_attack(const std::vector<Bits>& observed,
                                     const std::vector<Bits>& as_bystander,
                                     const std::vector<Bits>& as_sender) {
  if (observed.size() != as_bystander.size() ||
      observed.size() != as_sender.size()) {
    throw std::invalid_argument("simulation size mismatch");
  }
  std::optional<PlayerId> found;
  for (std::size_t m = 0; m < observed.size(); ++m) {
    if (observed[m] == as_sender[m] && observed[m] != as_bystander[m]) {
      if (found) return std::nullopt;  // ambiguous
      found = static_cast<PlayerId>(m);
    }
  }
  return found;
}

std::optional<PlayerId> trace_dcnet(const keygraph::KeySharingGraph& graph,
                                    const Bits& keys,
                                    const Bits& announcements, Bit d_known) {
  const int n = graph.num_nodes();
  std::vector<Bits> observed(n), bystander(n), sender(n);
  for (int m = 0; m < n; ++m) {
    const Bit f1 = incident_key_parity(graph, keys, m);
    observed[m] = {announcements.at(m)};
    bystander[m] = {f1};
    sender[m] = {static_cast<Bit>(f1 ^ (d_known & 1))};
  }
  return trace_attack(observed, bystander, sender);
}

std::optional<PlayerId> trace_anon(const protocols::Transcript& transcript,
                                   const protocols::RandomnessLedger& ledger,
                                   Bit /*d_known*/) {
  // A sender's flip acts on the shared state, not on its own message, so the
  // simulated broadcast in either role is the recorded outcome.
  const int n = transcript.num_players();
  std::vector<Bits> observed(n), simulated(n);
  for (std::size_t j = 0; j < transcript.rounds().size(); ++j) {
    for (const auto& e : transcript.rounds()[j].entries) {
      observed[e.player].insert(observed[e.player].end(), e.bits.begin(),
                                e.bits.end());
    }
  }
  for (int m = 0; m < n; ++m) {
    for (const auto& entry : ledger.of(m)) {
      simulated[m].insert(simulated[m].end(), entry.value.begin(),
                          entry.value.end());
    }
  }
  return trace_attack(observed, simulated, simulated);
}

}  // namespace anontx::lab

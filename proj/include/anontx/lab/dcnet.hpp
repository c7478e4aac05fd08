#pragma once

#include <optional>
#include <vector>

#include "anontx/bits.hpp"
#include "anontx/keygraph/key_sharing_graph.hpp"
#include "anontx/protocols/transcript.hpp"
#include "anontx/rng.hpp"

namespace anontx::lab {

/// Classical dining-cryptographers round over a key-sharing graph.
struct DcNetInstance {
  keygraph::KeySharingGraph graph;
  /// One bit per edge, in graph.edges() order.
  Bits keys;
  PlayerId sender = 0;
  Bit d = 0;
};

/// Uniform key bits for every edge.
Bits random_keys(const keygraph::KeySharingGraph& graph, RngStream& rng);

/// Key bits taken from the low bits of `mask`, edge e <- bit e.
Bits keys_from_mask(const keygraph::KeySharingGraph& graph, std::uint64_t mask);

struct DcNetRound {
  /// Player m announces the XOR of its incident keys, inverted if it is the
  /// sender and d = 1.
  Bits announcements;
  Bit decoded = 0;
};

/// Throws std::invalid_argument if the graph is disconnected or the key
/// vector does not match the edge count.
DcNetRound dcnet_round(const DcNetInstance& instance);

/// XOR of the keys incident to `player`.
Bit incident_key_parity(const keygraph::KeySharingGraph& graph,
                        const Bits& keys, PlayerId player);

/// Transcript (one round of announcements) and ledger (each player's
/// incident keys in edge order) for a DC-net run.
protocols::Transcript dcnet_transcript(const DcNetRound& round);
protocols::RandomnessLedger dcnet_ledger(const keygraph::KeySharingGraph& graph,
                                         const Bits& keys);

/// Hijack-everything trace-back. For each player m, re-derive what m would
/// have sent as a bystander (as_bystander[m]) and as the sender of the known
/// item (as_sender[m]); return the unique m whose observed messages match
/// the sender simulation but not the bystander one.
std::optional<PlayerId> trace_attack(const std::vector<Bits>& observed,
                                     const std::vector<Bits>& as_bystander,
                                     const std::vector<Bits>& as_sender);

/// Trace-back against a DC-net with every key known and d known (the
/// adversary corrupted the receiver). d = 0 makes both simulations agree, so
/// nobody is singled out.
std::optional<PlayerId> trace_dcnet(const keygraph::KeySharingGraph& graph,
                                    const Bits& keys,
                                    const Bits& announcements, Bit d_known);

/// The same matcher applied to an ANON run. Every player's broadcast is its
/// own measurement outcome whatever its role, so both simulations coincide.
std::optional<PlayerId> trace_anon(const protocols::Transcript& transcript,
                                   const protocols::RandomnessLedger& ledger,
                                   Bit d_known);

}  // namespace anontx::lab

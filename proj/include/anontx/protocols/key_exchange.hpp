#pragma once

#include <cstddef>
#include <vector>

#include "anontx/bits.hpp"
#include "anontx/protocols/transcript.hpp"
#include "anontx/rng.hpp"

namespace anontx::protocols {

struct KeyExchangeResult {
  Bits key_i;
  Bits key_j;
  /// Positions k whose announcements differed.
  std::vector<std::size_t> kept;
  Transcript transcript;
};

/// Two nodes each announce "bit b_k is r^k" through ANON for every position
/// k; positions where the announcements agree are dropped. On the rest both
/// nodes take node_i's value as the key bit: i knows it directly, j knows it
/// is the complement of its own.
KeyExchangeResult anonymous_key_exchange(int n, PlayerId node_i,
                                         PlayerId node_j, std::size_t key_len,
                                         RngStream& rng);

/// Same exchange with the nodes' random strings supplied by the caller.
KeyExchangeResult anonymous_key_exchange(int n, PlayerId node_i,
                                         PlayerId node_j, const Bits& r_i,
                                         const Bits& r_j, RngStream& rng);

}  // namespace anontx::protocols

#include "anontx/protocols/key_exchange.hpp"

#include <stdexcept>

#include "anontx/protocols/anon.hpp"

namespace anontx::protocols {

KeyExchangeResult anonymous_key_exchange(int n, PlayerId node_i,
                                         PlayerId node_j, std::size_t key_len,
                                         RngStream& rng) {
  Bits r_i(key_len), r_j(key_len);
  for (std::size_t k = 0; k < key_len; ++k) {
    r_i[k] = rng.bit();
    r_j[k] = rng.bit();
  }
  return anonymous_key_exchange(n, node_i, node_j, r_i, r_j, rng);
}

KeyExchangeResult anonymous_key_exchange(int n, PlayerId node_i,
                                         PlayerId node_j, const Bits& r_i,
                                         const Bits& r_j, RngStream& rng) {
  if (n < 3) throw std::invalid_argument("key exchange needs >= 3 players");
  if (node_i < 0 || node_i >= n || node_j < 0 || node_j >= n) {
    throw std::invalid_argument("node out of range");
  }
  if (node_i == node_j) throw std::invalid_argument("nodes must differ");
  if (r_i.size() != r_j.size()) {
    throw std::invalid_argument("random strings differ in length");
  }

  KeyExchangeResult out{{}, {}, {}, Transcript(n)};
  for (std::size_t k = 0; k < r_i.size(); ++k) {
    const AnonResult from_i = anon_send(n, node_i, r_i[k], rng);
    const AnonResult from_j = anon_send(n, node_j, r_j[k], rng);
    out.transcript.append(from_i.transcript);
    out.transcript.append(from_j.transcript);
    const Bit seen_i = *from_i.decoded;
    const Bit seen_j = *from_j.decoded;
    if (seen_i == seen_j) continue;
    out.kept.push_back(k);
    // Each side derives the bit from what it holds privately.
    out.key_i.push_back(r_i[k]);
    out.key_j.push_back(static_cast<Bit>(r_j[k] ^ 1));
  }
  return out;
}

}  // namespace anontx::protocols

#include "anontx/bits.hpp"

#include <algorithm>
#include <stdexcept>

namespace anontx {

PlayerSet normalize_players(PlayerSet players, int n, const char* what) {
  for (PlayerId p : players) {
    if (p < 0 || p >= n) {
      throw std::invalid_argument(std::string(what) + " index " +
                                  std::to_string(p) + " out of range [0, " +
                                  std::to_string(n) + ")");
    }
  }
  std::sort(players.begin(), players.end());
  players.erase(std::unique(players.begin(), players.end()), players.end());
  return players;
}

}  // namespace anontx

#include "anontx/protocols/transcript.hpp"

#include <algorithm>
#include <stdexcept>

namespace anontx::protocols {

void Transcript::add_round(Round round) {
  std::sort(round.entries.begin(), round.entries.end(),
            [](const Broadcast& a, const Broadcast& b) {
              return a.player < b.player;
            });
  std::vector<bool> seen(n_, false);
  for (const auto& e : round.entries) {
    if (e.player < 0 || e.player >= n_ || seen[e.player]) {
      throw std::invalid_argument("malformed broadcast round");
    }
    seen[e.player] = true;
  }
  if (static_cast<int>(round.entries.size()) != n_) aborted_ = true;
  rounds_.push_back(std::move(round));
}

void Transcript::append(const Transcript& other) {
  if (other.n_ != n_) throw std::invalid_argument("player count mismatch");
  rounds_.insert(rounds_.end(), other.rounds_.begin(), other.rounds_.end());
  aborted_ = aborted_ || other.aborted_;
}

Bits Transcript::round_bits(std::size_t j) const {
  Bits out;
  for (const auto& e : rounds_.at(j).entries) {
    out.insert(out.end(), e.bits.begin(), e.bits.end());
  }
  return out;
}

std::string Transcript::key() const {
  std::string k;
  for (const auto& round : rounds_) {
    for (const auto& e : round.entries) {
      k += std::to_string(e.player);
      k += ':';
      k += to_text(e.bits);
      k += ' ';
    }
    k += '|';
  }
  return k;
}

void RandomnessLedger::record(PlayerId player, int round, std::string kind,
                              Bits value) {
  entries_.at(player).push_back({round, std::move(kind), std::move(value)});
}

void RandomnessLedger::append(const RandomnessLedger& other,
                              int round_offset) {
  if (other.num_players() != num_players()) {
    throw std::invalid_argument("player count mismatch");
  }
  for (int m = 0; m < num_players(); ++m) {
    for (auto e : other.entries_[m]) {
      e.round += round_offset;
      entries_[m].push_back(std::move(e));
    }
  }
}

std::string RandomnessLedger::key() const {
  PlayerSet all(entries_.size());
  for (std::size_t m = 0; m < all.size(); ++m) all[m] = static_cast<int>(m);
  return key(all);
}

std::string RandomnessLedger::key(const PlayerSet& players) const {
  std::string k;
  for (PlayerId m : players) {
    k += std::to_string(m);
    k += '[';
    for (const auto& e : entries_.at(m)) {
      k += std::to_string(e.round);
      k += '=';
      k += to_text(e.value);
      k += ',';
    }
    k += ']';
  }
  return k;
}

nlohmann::json to_json(const std::string& protocol, const Transcript& transcript,
                       const RandomnessLedger& ledger,
                       const nlohmann::json& verdicts) {
  nlohmann::json rounds = nlohmann::json::array();
  for (const auto& round : transcript.rounds()) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& e : round.entries) {
      r.push_back({{"player", e.player}, {"bits", to_text(e.bits)}});
    }
    rounds.push_back(std::move(r));
  }
  nlohmann::json led = nlohmann::json::object();
  for (int m = 0; m < ledger.num_players(); ++m) {
    nlohmann::json values = nlohmann::json::array();
    for (const auto& e : ledger.of(m)) {
      values.push_back(
          {{"round", e.round}, {"kind", e.kind}, {"bits", to_text(e.value)}});
    }
    led[std::to_string(m)] = std::move(values);
  }
  return {{"protocol", protocol},
          {"n", transcript.num_players()},
          {"rounds", std::move(rounds)},
          {"ledger", std::move(led)},
          {"aborted", transcript.aborted()},
          {"verdicts", verdicts}};
}

}  // namespace anontx::protocols

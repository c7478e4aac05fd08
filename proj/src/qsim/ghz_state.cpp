#include "anontx/qsim/ghz_state.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace anontx::qsim {

namespace {

void check_player(const GhzPhaseState& state, PlayerId player) {
  if (player < 0 || player >= state.num_qubits()) {
    throw std::invalid_argument("player " + std::to_string(player) +
                                " out of range for " +
                                std::to_string(state.num_qubits()) + " qubits");
  }
}

}  // namespace

GhzPhaseState::GhzPhaseState(int num_qubits, std::uint64_t phase_numerator,
                             int phase_denom_exp)
    : num_qubits_(num_qubits), numerator_(0), denom_exp_(phase_denom_exp) {
  if (num_qubits < 2) {
    throw std::invalid_argument("GHZ state needs at least 2 qubits");
  }
  if (phase_denom_exp < 0 || phase_denom_exp > kMaxDenomExp) {
    throw std::invalid_argument("phase denominator exponent out of range");
  }
  numerator_ = phase_numerator & (modulus() - 1);
}

double GhzPhaseState::phase_radians() const {
  return std::numbers::pi * static_cast<double>(numerator_) /
         std::ldexp(1.0, denom_exp_);
}

GhzPhaseState GhzPhaseState::rescaled(int new_exp) const {
  if (new_exp < denom_exp_) {
    throw std::invalid_argument("cannot narrow the phase denominator");
  }
  return GhzPhaseState(num_qubits_, numerator_ << (new_exp - denom_exp_),
                       new_exp);
}

bool GhzPhaseState::same_state(const GhzPhaseState& other) const {
  if (num_qubits_ != other.num_qubits_) return false;
  const int exp = std::max(denom_exp_, other.denom_exp_);
  return rescaled(exp).numerator_ == other.rescaled(exp).numerator_;
}

double GhzPhaseState::odd_parity_probability() const {
  const std::uint64_t half = std::uint64_t{1} << denom_exp_;
  if (numerator_ == 0) return 0.0;
  if (numerator_ == half) return 1.0;
  if (denom_exp_ >= 1) {
    const std::uint64_t quarter = half >> 1;
    if (numerator_ == quarter || numerator_ == 3 * quarter) return 0.5;
  }
  return (1.0 - std::cos(phase_radians())) / 2.0;
}

double GhzPhaseState::hadamard_outcome_probability(
    std::span<const Bit> x) const {
  if (static_cast<int>(x.size()) != num_qubits_) {
    throw std::invalid_argument("outcome length does not match qubit count");
  }
  const double p_odd = odd_parity_probability();
  const double p_parity = parity(x) ? p_odd : 1.0 - p_odd;
  // 2^(n-1) strings share each parity class.
  return p_parity / std::ldexp(1.0, num_qubits_ - 1);
}

std::vector<double> GhzPhaseState::hadamard_outcome_distribution() const {
  const std::size_t dim = std::size_t{1} << num_qubits_;
  const double p_odd = odd_parity_probability();
  const double scale = std::ldexp(1.0, -(num_qubits_ - 1));
  std::vector<double> probs(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    const bool odd = std::popcount(i) & 1;
    probs[i] = (odd ? p_odd : 1.0 - p_odd) * scale;
  }
  return probs;
}

GhzPhaseState make_ghz(int n) { return GhzPhaseState(n, 0, 0); }

GhzPhaseState apply_phase_flip(const GhzPhaseState& state, PlayerId player) {
  check_player(state, player);
  return GhzPhaseState(state.num_qubits(),
                       state.phase_numerator() +
                           (std::uint64_t{1} << state.phase_denom_exp()),
                       state.phase_denom_exp());
}

GhzPhaseState apply_rz(const GhzPhaseState& state, PlayerId player,
                       std::int64_t numerator, int denom_exp) {
  check_player(state, player);
  if (denom_exp < 0 || denom_exp > GhzPhaseState::kMaxDenomExp) {
    throw std::invalid_argument("rotation denominator exponent out of range");
  }
  const GhzPhaseState wide =
      state.rescaled(std::max(denom_exp, state.phase_denom_exp()));
  const int shift = wide.phase_denom_exp() - denom_exp;
  // Two's-complement wraparound is exactly reduction mod 2^(J+1).
  const std::uint64_t delta = static_cast<std::uint64_t>(numerator) << shift;
  return GhzPhaseState(wide.num_qubits(), wide.phase_numerator() + delta,
                       wide.phase_denom_exp());
}

MeasurementRecord hadamard_measure_all(const GhzPhaseState& state,
                                       RngStream& rng) {
  const double p_odd = state.odd_parity_probability();
  const Bit odd = rng.uniform() < p_odd ? 1 : 0;
  const int n = state.num_qubits();
  Bits x(n);
  Bit acc = 0;
  for (int q = 0; q + 1 < n; ++q) {
    x[q] = rng.bit();
    acc ^= x[q];
  }
  x[n - 1] = acc ^ odd;
  return MeasurementRecord(std::move(x));
}

SubsetMeasurement hadamard_measure_subset(const GhzPhaseState& state,
                                          std::span<const PlayerId> measured,
                                          RngStream& rng) {
  const int n = state.num_qubits();
  if (static_cast<int>(measured.size()) != n - 2) {
    throw std::invalid_argument("subset measurement must leave exactly 2 qubits");
  }
  std::vector<bool> seen(n, false);
  for (PlayerId q : measured) {
    check_player(state, q);
    if (seen[q]) throw std::invalid_argument("duplicate measured qubit");
    seen[q] = true;
  }
  Bits x(measured.size());
  for (auto& b : x) b = rng.bit();
  MeasurementRecord record(std::move(x));
  const std::uint64_t flip =
      record.parity ? (std::uint64_t{1} << state.phase_denom_exp()) : 0;
  GhzPhaseState residual(2, state.phase_numerator() + flip,
                         state.phase_denom_exp());
  return {std::move(record), residual};
}

}  // namespace anontx::qsim

#include "anontx/qsim/dense_state.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace anontx::qsim {

namespace {

constexpr double kNormTol = 1e-10;

void check_qubit(int q, int n) {
  if (q < 0 || q >= n) {
    throw std::invalid_argument("qubit " + std::to_string(q) +
                                " out of range for " + std::to_string(n));
  }
}

void check_size(int n, int limit) {
  if (n < 1) throw std::invalid_argument("dense state needs >= 1 qubit");
  if (n > limit) {
    throw std::invalid_argument("dense state of " + std::to_string(n) +
                                " qubits exceeds limit " +
                                std::to_string(limit));
  }
}

}  // namespace

Gate Gate::single(std::array<Complex, 4> m) {
  return Gate{1, std::vector<Complex>(m.begin(), m.end())};
}

Gate Gate::two(std::array<Complex, 16> m) {
  return Gate{2, std::vector<Complex>(m.begin(), m.end())};
}

bool Gate::is_unitary(double tol) const {
  const int dim = arity == 1 ? 2 : 4;
  if ((arity != 1 && arity != 2) ||
      matrix.size() != static_cast<std::size_t>(dim * dim)) {
    return false;
  }
  // U^dagger U == I
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      Complex acc{};
      for (int k = 0; k < dim; ++k) {
        acc += std::conj(matrix[k * dim + i]) * matrix[k * dim + j];
      }
      const Complex expected = i == j ? Complex{1.0} : Complex{};
      if (std::abs(acc - expected) > tol) return false;
    }
  }
  return true;
}

namespace gates {

Gate identity() { return Gate::single({1.0, 0.0, 0.0, 1.0}); }

Gate hadamard() {
  const double h = std::numbers::sqrt2 / 2.0;
  return Gate::single({h, h, h, -h});
}

Gate pauli_x() { return Gate::single({0.0, 1.0, 1.0, 0.0}); }

Gate pauli_z() { return Gate::single({1.0, 0.0, 0.0, -1.0}); }

Gate rz(double theta) {
  return Gate::single({1.0, 0.0, 0.0, std::polar(1.0, theta)});
}

Gate cnot() {
  return Gate::two({1, 0, 0, 0,  //
                    0, 1, 0, 0,  //
                    0, 0, 0, 1,  //
                    0, 0, 1, 0});
}

}  // namespace gates

double fidelity(const Qubit& a, const Qubit& b) {
  return std::norm(std::conj(a.alpha) * b.alpha + std::conj(a.beta) * b.beta);
}

DenseState::DenseState(int num_qubits, int limit) : num_qubits_(num_qubits) {
  check_size(num_qubits, limit);
  amplitudes_.assign(std::size_t{1} << num_qubits, Complex{});
  amplitudes_[0] = 1.0;
}

DenseState::DenseState(int num_qubits, std::vector<Complex> amplitudes,
                       int limit)
    : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {
  check_size(num_qubits, limit);
  if (amplitudes_.size() != (std::size_t{1} << num_qubits)) {
    throw std::invalid_argument("amplitude count must be 2^num_qubits");
  }
  if (std::abs(norm_squared() - 1.0) > kNormTol) {
    throw std::invalid_argument("amplitudes are not normalized");
  }
}

DenseState DenseState::product(std::span<const Qubit> qubits, int limit) {
  const int n = static_cast<int>(qubits.size());
  check_size(n, limit);
  std::vector<Complex> amps(std::size_t{1} << n);
  for (std::size_t i = 0; i < amps.size(); ++i) {
    Complex a{1.0};
    for (int q = 0; q < n; ++q) {
      a *= ((i >> q) & 1) ? qubits[q].beta : qubits[q].alpha;
    }
    amps[i] = a;
  }
  return DenseState(n, std::move(amps), limit);
}

double DenseState::norm_squared() const {
  double s = 0.0;
  for (const auto& a : amplitudes_) s += std::norm(a);
  return s;
}

std::vector<double> DenseState::probabilities() const {
  std::vector<double> p(amplitudes_.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::norm(amplitudes_[i]);
  return p;
}

double DenseState::probability_one(int q) const {
  check_qubit(q, num_qubits_);
  double p = 0.0;
  for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
    if ((i >> q) & 1) p += std::norm(amplitudes_[i]);
  }
  return p;
}

void DenseState::collapse(int q, Bit outcome) {
  check_qubit(q, num_qubits_);
  const double p = outcome ? probability_one(q) : 1.0 - probability_one(q);
  if (p <= 0.0) throw std::domain_error("collapse onto zero-probability outcome");
  const double scale = 1.0 / std::sqrt(p);
  for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
    if (static_cast<Bit>((i >> q) & 1) == outcome) {
      amplitudes_[i] *= scale;
    } else {
      amplitudes_[i] = 0.0;
    }
  }
}

Bit DenseState::measure(int q, RngStream& rng) {
  const double p1 = probability_one(q);
  const Bit outcome = rng.uniform() < p1 ? 1 : 0;
  collapse(q, outcome);
  return outcome;
}

Qubit DenseState::isolated_qubit(int q, double tol) const {
  check_qubit(q, num_qubits_);
  // Find the single setting of the other qubits that carries weight.
  std::size_t rest = SIZE_MAX;
  const std::size_t mask = ~(std::size_t{1} << q);
  for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
    if (std::norm(amplitudes_[i]) <= tol * tol) continue;
    if (rest == SIZE_MAX) {
      rest = i & mask;
    } else if ((i & mask) != rest) {
      throw std::domain_error("qubit is entangled with the rest of the state");
    }
  }
  if (rest == SIZE_MAX) throw std::domain_error("zero state");
  return Qubit{amplitudes_[rest], amplitudes_[rest | (std::size_t{1} << q)]};
}

DenseState dense_apply_gate(const DenseState& state, const Gate& gate,
                            std::span<const int> targets) {
  if (!gate.is_unitary()) throw std::invalid_argument("gate is not unitary");
  if (static_cast<int>(targets.size()) != gate.arity) {
    throw std::invalid_argument("target count does not match gate arity");
  }
  const int n = state.num_qubits_;
  for (int t : targets) check_qubit(t, n);

  DenseState out = state;
  auto& amps = out.amplitudes_;
  const auto& m = gate.matrix;
  if (gate.arity == 1) {
    const std::size_t bit = std::size_t{1} << targets[0];
    for (std::size_t i = 0; i < amps.size(); ++i) {
      if (i & bit) continue;
      const Complex a0 = state.amplitudes_[i];
      const Complex a1 = state.amplitudes_[i | bit];
      amps[i] = m[0] * a0 + m[1] * a1;
      amps[i | bit] = m[2] * a0 + m[3] * a1;
    }
    return out;
  }

  if (targets[0] == targets[1]) {
    throw std::invalid_argument("two-qubit gate targets must differ");
  }
  const std::size_t hi = std::size_t{1} << targets[0];
  const std::size_t lo = std::size_t{1} << targets[1];
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if (i & (hi | lo)) continue;
    const std::array<std::size_t, 4> idx{i, i | lo, i | hi, i | hi | lo};
    std::array<Complex, 4> in{};
    for (int k = 0; k < 4; ++k) in[k] = state.amplitudes_[idx[k]];
    for (int r = 0; r < 4; ++r) {
      Complex acc{};
      for (int c = 0; c < 4; ++c) acc += m[r * 4 + c] * in[c];
      amps[idx[r]] = acc;
    }
  }
  return out;
}

DenseState to_dense(const GhzPhaseState& state, int limit) {
  const int n = state.num_qubits();
  check_size(n, limit);
  std::vector<Complex> amps(std::size_t{1} << n);
  const double h = std::numbers::sqrt2 / 2.0;
  amps.front() = h;
  // Exact values at the quarter turns keep the zero/one amplitudes exact.
  const std::uint64_t half = std::uint64_t{1} << state.phase_denom_exp();
  const std::uint64_t k = state.phase_numerator();
  Complex phase;
  if (k == 0) {
    phase = 1.0;
  } else if (k == half) {
    phase = -1.0;
  } else if (state.phase_denom_exp() >= 1 && k == half / 2) {
    phase = Complex{0.0, 1.0};
  } else if (state.phase_denom_exp() >= 1 && k == 3 * (half / 2)) {
    phase = Complex{0.0, -1.0};
  } else {
    phase = std::polar(1.0, state.phase_radians());
  }
  amps.back() = h * phase;
  return DenseState(n, std::move(amps), limit);
}

GhzPhaseState from_dense(const DenseState& state, int denom_exp) {
  const auto& amps = state.amplitudes();
  const double h2 = 0.5;
  for (std::size_t i = 1; i + 1 < amps.size(); ++i) {
    if (std::norm(amps[i]) > kNormTol) {
      throw std::domain_error("state has weight off the GHZ manifold");
    }
  }
  const Complex a0 = amps.front();
  const Complex a1 = amps.back();
  if (std::abs(std::norm(a0) - h2) > kNormTol ||
      std::abs(std::norm(a1) - h2) > kNormTol) {
    throw std::domain_error("GHZ branches are not balanced");
  }
  const double rel = std::arg(a1 / a0);  // (-pi, pi]
  const double steps = rel / std::numbers::pi * std::ldexp(1.0, denom_exp);
  const double rounded = std::round(steps);
  if (std::abs(steps - rounded) > 1e-6) {
    throw std::domain_error("phase is not a multiple of pi / 2^" +
                            std::to_string(denom_exp));
  }
  const auto k = static_cast<std::int64_t>(rounded);
  return GhzPhaseState(state.num_qubits(), static_cast<std::uint64_t>(k),
                       denom_exp);
}

BellOutcome bell_measure(const DenseState& state, int qubit_a, int qubit_b,
                         RngStream& rng) {
  if (qubit_a == qubit_b) {
    throw std::invalid_argument("Bell measurement needs two distinct qubits");
  }
  DenseState s = dense_apply_gate(state, gates::cnot(), {qubit_a, qubit_b});
  s = dense_apply_gate(s, gates::hadamard(), {qubit_a});
  const Bit m0 = s.measure(qubit_a, rng);
  const Bit m1 = s.measure(qubit_b, rng);
  return BellOutcome{m0, m1, std::move(s)};
}

std::array<double, 4> bell_outcome_probabilities(const DenseState& state,
                                                 int qubit_a, int qubit_b) {
  if (qubit_a == qubit_b) {
    throw std::invalid_argument("Bell measurement needs two distinct qubits");
  }
  DenseState s = dense_apply_gate(state, gates::cnot(), {qubit_a, qubit_b});
  s = dense_apply_gate(s, gates::hadamard(), {qubit_a});
  std::array<double, 4> p{};
  const auto probs = s.probabilities();
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const int m0 = (i >> qubit_a) & 1;
    const int m1 = (i >> qubit_b) & 1;
    p[2 * m0 + m1] += probs[i];
  }
  return p;
}

DenseState apply_teleport_correction(const DenseState& state, int target,
                                     Bit m0, Bit m1) {
  DenseState s = state;
  if (m0) s = dense_apply_gate(s, gates::pauli_z(), {target});
  if (m1) s = dense_apply_gate(s, gates::pauli_x(), {target});
  return s;
}

}  // namespace anontx::qsim

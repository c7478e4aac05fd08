#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

#include "anontx/bits.hpp"
#include "anontx/qsim/ghz_state.hpp"
#include "anontx/rng.hpp"

namespace anontx::qsim {

using Complex = std::complex<double>;

inline constexpr int kDefaultDenseLimit = 14;

/// Row-major 2x2 or 4x4 unitary. For two-qubit gates the first target is the
/// high bit of the local basis index.
struct Gate {
  int arity = 1;
  std::vector<Complex> matrix;

  static Gate single(std::array<Complex, 4> m);
  static Gate two(std::array<Complex, 16> m);

  bool is_unitary(double tol = 1e-10) const;
};

namespace gates {
Gate identity();
Gate hadamard();
Gate pauli_x();
Gate pauli_z();
/// diag(1, e^{i theta}); the global phase of the textbook R_z is dropped.
Gate rz(double theta);
Gate cnot();
}  // namespace gates

/// Single-qubit pure state alpha|0> + beta|1>.
struct Qubit {
  Complex alpha{1.0, 0.0};
  Complex beta{0.0, 0.0};

  double norm_squared() const { return std::norm(alpha) + std::norm(beta); }
};

/// |<a|b>|^2.
double fidelity(const Qubit& a, const Qubit& b);

/// Dense state vector. Basis index bit q is qubit q.
class DenseState {
 public:
  /// |0...0> on num_qubits qubits. Throws std::invalid_argument outside
  /// [1, limit].
  explicit DenseState(int num_qubits, int limit = kDefaultDenseLimit);

  /// Normalizes nothing: amplitudes must already have unit norm (1e-10).
  DenseState(int num_qubits, std::vector<Complex> amplitudes,
             int limit = kDefaultDenseLimit);

  static DenseState product(std::span<const Qubit> qubits,
                            int limit = kDefaultDenseLimit);

  int num_qubits() const { return num_qubits_; }
  std::size_t dimension() const { return amplitudes_.size(); }
  const std::vector<Complex>& amplitudes() const { return amplitudes_; }
  Complex amplitude(std::size_t index) const { return amplitudes_[index]; }

  double norm_squared() const;
  std::vector<double> probabilities() const;

  /// P(qubit q reads 1).
  double probability_one(int q) const;

  /// Projects qubit q onto `outcome` and renormalizes. Throws
  /// std::domain_error when that outcome has zero probability.
  void collapse(int q, Bit outcome);

  /// Samples and collapses qubit q.
  Bit measure(int q, RngStream& rng);

  /// State of qubit q given that every other qubit is in a definite basis
  /// state (as after measurement). Throws std::domain_error otherwise.
  Qubit isolated_qubit(int q, double tol = 1e-10) const;

  friend DenseState dense_apply_gate(const DenseState&, const Gate&,
                                     std::span<const int>);

 private:
  int num_qubits_;
  std::vector<Complex> amplitudes_;
};

/// Tensor-product application of a 1- or 2-qubit unitary.
DenseState dense_apply_gate(const DenseState& state, const Gate& gate,
                            std::span<const int> targets);

inline DenseState dense_apply_gate(const DenseState& state, const Gate& gate,
                                   std::initializer_list<int> targets) {
  return dense_apply_gate(state, gate,
                          std::span<const int>(targets.begin(), targets.size()));
}

DenseState to_dense(const GhzPhaseState& state,
                    int limit = kDefaultDenseLimit);

/// Inverse of to_dense for states on the GHZ manifold, expressed over
/// 2^denom_exp. Throws std::domain_error if the state is off-manifold or its
/// phase is not a multiple of pi / 2^denom_exp.
GhzPhaseState from_dense(const DenseState& state, int denom_exp);

struct BellOutcome {
  /// Phase bit: receiver corrects with Z^{m0}.
  Bit m0 = 0;
  /// Bit-flip bit: receiver corrects with X^{m1}.
  Bit m1 = 0;
  DenseState state;
};

/// Bell-basis measurement of (qubit_a, qubit_b) via CNOT(a->b), H(a), then
/// computational readout: m0 from qubit_a, m1 from qubit_b. The measured
/// qubits stay in the returned state, collapsed.
BellOutcome bell_measure(const DenseState& state, int qubit_a, int qubit_b,
                         RngStream& rng);

/// Exact probabilities of the four (m0, m1) outcomes, indexed 2*m0 + m1.
std::array<double, 4> bell_outcome_probabilities(const DenseState& state,
                                                 int qubit_a, int qubit_b);

/// Receiver-side correction for a Bell outcome: Z^{m0} then X^{m1}.
DenseState apply_teleport_correction(const DenseState& state, int target,
                                     Bit m0, Bit m1);

}  // namespace anontx::qsim

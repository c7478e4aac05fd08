#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "anontx/bits.hpp"
#include "anontx/rng.hpp"

namespace anontx::qsim {

/// Outcome of measuring some qubits in the computational basis.
struct MeasurementRecord {
  Bits outcomes;
  int hamming_weight = 0;
  Bit parity = 0;

  MeasurementRecord() = default;
  explicit MeasurementRecord(Bits bits)
      : outcomes(std::move(bits)),
        hamming_weight(anontx::hamming_weight(outcomes)),
        parity(static_cast<Bit>(hamming_weight & 1)) {}
};

/// (|0^n> + e^{i*pi*k/2^J} |1^n>) / sqrt(2), global phase discarded.
///
/// The relative phase is held as an exact dyadic fraction of pi: numerator k
/// in [0, 2^(J+1)) over 2^J. Every operation is integer arithmetic, so phases
/// never drift no matter how many rotations are stacked.
class GhzPhaseState {
 public:
  static constexpr int kMaxDenomExp = 60;

  /// Throws std::invalid_argument for n < 2 or J outside [0, kMaxDenomExp].
  GhzPhaseState(int num_qubits, std::uint64_t phase_numerator,
                int phase_denom_exp);

  int num_qubits() const { return num_qubits_; }
  std::uint64_t phase_numerator() const { return numerator_; }
  int phase_denom_exp() const { return denom_exp_; }
  std::uint64_t modulus() const { return std::uint64_t{2} << denom_exp_; }

  /// Relative phase in radians, reduced to [0, 2*pi).
  double phase_radians() const;

  /// Same state expressed over 2^new_exp. Only widening is allowed.
  GhzPhaseState rescaled(int new_exp) const;

  /// True iff both describe the same physical state (denominators may
  /// differ).
  bool same_state(const GhzPhaseState& other) const;

  /// Probability that a Hadamard-basis measurement of all qubits has odd
  /// parity: (1 - cos phi) / 2, exact at the dyadic points 0, pi/2, pi, 3pi/2.
  double odd_parity_probability() const;

  /// Exact probability of outcome x after H on every qubit:
  /// (1 + (-1)^{|x|} cos phi) / 2^n.
  double hadamard_outcome_probability(std::span<const Bit> x) const;

  /// Full 2^n outcome distribution, index bit q = outcome of qubit q.
  std::vector<double> hadamard_outcome_distribution() const;

  friend bool operator==(const GhzPhaseState&, const GhzPhaseState&) = default;

 private:
  int num_qubits_;
  std::uint64_t numerator_;
  int denom_exp_;
};

GhzPhaseState make_ghz(int n);

/// sigma_z on one player's qubit. The result does not depend on which player
/// applied it.
GhzPhaseState apply_phase_flip(const GhzPhaseState& state, PlayerId player);

/// R_z(pi * numerator / 2^denom_exp) ~ diag(1, e^{i theta}) on one qubit.
/// The state's denominator is widened when denom_exp exceeds it.
GhzPhaseState apply_rz(const GhzPhaseState& state, PlayerId player,
                       std::int64_t numerator, int denom_exp);

/// Every player applies H and measures. Sampled in two stages: parity from
/// its exact Bernoulli law, then a uniform string of that parity.
MeasurementRecord hadamard_measure_all(const GhzPhaseState& state,
                                       RngStream& rng);

struct SubsetMeasurement {
  MeasurementRecord record;
  /// Two-qubit state left on the unmeasured pair, phase phi + |x| * pi.
  GhzPhaseState residual;
};

/// H-measure exactly n - 2 qubits; the other two keep a GHZ-form pair.
/// record.outcomes follows the order of `measured`.
SubsetMeasurement hadamard_measure_subset(const GhzPhaseState& state,
                                          std::span<const PlayerId> measured,
                                          RngStream& rng);

}  // namespace anontx::qsim

#pragma once

#include <complex>

#include <Eigen/Core>

namespace fieldback {

using Complex = std::complex<double>;

/// Single-qubit operator. Row and column index equal the qubit value, so
/// entry (0,0) is the |0⟩⟨0| (S_β) coefficient, (1,1) is S_α, (1,0) is
/// S_+ = |1⟩⟨0| and (0,1) is S_- = |0⟩⟨1|.
using Gate2 = Eigen::Matrix2cd;

/// Square pulse in the rotating frame. Frequencies are in units of Ω and
/// times in units of 1/Ω.
struct PulseParams {
  double detuning = 0.0;  ///< Δω = ω_n − ω̄_n
  double rabi = 0.0;      ///< κE, signed
  double phase = 0.0;     ///< φ in radians
  double duration = 0.0;  ///< t ≥ 0
  double center_frequency = 0.0;  ///< ω̄, bookkeeping only

  /// θ = √(Δω² + (κE)²)/2.
  double tip_angle() const;

  /// Throws ValidationError on negative duration or non-finite fields.
  void validate() const;
};

/// Zeroth-order propagator of a qubit driven by a square coherent pulse,
/// evaluated at p.duration.
Gate2 classical_propagator(const PulseParams& p);

/// Pulse that realizes the Walsh–Hadamard gate up to frame phases:
/// Δω = Ω/√2, κE = −Ω/√2, duration π/Ω.
PulseParams walsh_hadamard_calibration(double omega);

/// (1/√2)[[1,1],[1,−1]].
Gate2 hadamard();

/// Removes a left diagonal phase factor from `gate` so that, row by row,
/// the entry at the largest-magnitude position of `pattern` has the same
/// phase as the pattern entry. Covers both a global phase and the S_z
/// frame phase that proper pulse timing compensates.
Gate2 strip_phases(const Gate2& gate, const Gate2& pattern);

/// max |(G†G − I)_ij|.
double unitarity_defect(const Gate2& gate);

}  // namespace fieldback

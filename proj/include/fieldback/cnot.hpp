#pragma once

#include <array>
#include <complex>
#include <utility>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace fieldback::cnot {

using Complex = std::complex<double>;
using Matrix4 = Eigen::Matrix4d;
using Matrix4c = Eigen::Matrix4cd;

/// Product basis order used by every 4×4 object in this namespace. The
/// first digit is the S qubit (ω1), the second the I qubit (ω2).
enum class BasisState { S11 = 0, S10 = 1, S01 = 2, S00 = 3 };
constexpr int index_of(BasisState s) { return static_cast<int>(s); }
const char* label_of(BasisState s);

/// J-coupled qubit pair under a square selective pulse, rotating frame at ω̄.
/// All quantities share one arbitrary unit.
struct TwoQubitParams {
  double omega1 = 20.0;
  double omega2 = 21.0;
  double coupling = 0.4;   ///< J
  double rabi = 0.01;      ///< κE
  double center_frequency = 0.0;  ///< ω̄
  double duration = 100.6;        ///< T

  /// Throws ValidationError unless ω2 > ω1, T > 0 and all fields are finite.
  void validate() const;
  /// Warns when |ω1 − ω2| ≫ J visibly fails (splitting at most 2J).
  std::vector<std::string> regime_warnings() const;
};

/// The 4×4 rotating-frame Hamiltonian H_C1 in (|11⟩,|10⟩,|01⟩,|00⟩) order.
Matrix4 rotating_hamiltonian(const TwoQubitParams& p);

struct Eigensystem {
  Eigen::Vector4d values;  ///< ascending
  Matrix4 vectors;         ///< columns are orthonormal eigenvectors
};

Eigensystem diagonalize(const TwoQubitParams& p);

/// U_C(t) = V exp(−i diag(λ) t) Vᵀ.
Matrix4c classical_propagator(const TwoQubitParams& p, double t);

/// The four single-flip transition frequencies (ascending) of the drive-free
/// pair from exact diagonalization of the lab-frame energies.
std::array<double, 4> transition_frequencies(const TwoQubitParams& p);

/// ω1 ± J/2 + J²/(4(ω1−ω2)) and ω2 ± J/2 − J²/(4(ω1−ω2)), ascending.
std::array<double, 4> perturbative_transition_frequencies(const TwoQubitParams& p);

struct Calibration {
  double center_frequency = 0.0;  ///< exact |10⟩↔|11⟩ resonance
  double duration = 0.0;          ///< T maximizing |⟨10|U_C(T)|11⟩|
  double transfer = 0.0;          ///< |⟨10|U_C(T)|11⟩| at the calibrated point
  double estimated_duration = 0.0;  ///< π/(2|V_eff|) starting guess
  std::string log;
};

/// Quoted reference for the selective pulse.
inline constexpr double kQuotedDuration = 100.6;
inline constexpr double kQuotedTransfer = 0.97;

/// Sets ω̄ to the energy difference between |11⟩ and the dressed state
/// adiabatically connected to |10⟩ at κE = 0, then searches the first
/// maximum of the |11⟩ → |10⟩ transfer amplitude in T.
Calibration calibrate(const TwoQubitParams& p);

/// |⟨10|U_C(T)|11⟩|.
double transfer_amplitude(const TwoQubitParams& p);

struct DysonSpectrum {
  std::vector<double> offsets;      ///< x = ω − ω̄
  std::vector<Matrix4c> elements;   ///< (to, from) matrix per offset
  TwoQubitParams params;
  double mode_scale = 1.0;          ///< stands in for √(ħω/2ε₀L³)

  /// ⟨to| M(x_j) |from⟩ across the grid.
  std::vector<Complex> element(BasisState from, BasisState to) const;
};

/// Lowering operator S_− + I_−.
Matrix4 lowering_operator();

/// First-order back-reaction spectrum of the selective pulse:
/// −(s/2) Σ_{n,m} v_n v_nᵀ L v_m v_mᵀ e^{iλ_n T}(e^{i(x+λ_m−λ_n)T} − 1)/(i(x+λ_m−λ_n)),
/// where s = κ·√(ħω/2ε₀L³) is `mode_scale`. At x = λ_n − λ_m the kernel
/// takes its limit T.
DysonSpectrum dyson_first_order(const TwoQubitParams& p, std::span<const double> offsets,
                                double mode_scale = 1.0);

/// The four transitions plotted for the CNOT spectrum.
inline constexpr std::array<std::pair<BasisState, BasisState>, 4> kPlottedTransitions = {{
    {BasisState::S11, BasisState::S11},
    {BasisState::S11, BasisState::S10},
    {BasisState::S10, BasisState::S01},
    {BasisState::S01, BasisState::S00},
}};

}  // namespace fieldback::cnot

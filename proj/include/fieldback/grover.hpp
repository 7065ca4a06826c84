#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fieldback/backreaction.hpp"
#include "fieldback/register.hpp"

namespace fieldback {

inline constexpr int kMaxIdealQubits = 14;
inline constexpr int kMaxDecoherentQubits = 12;

/// One Grover search. ε is the dimensionless amplitude per driven
/// Walsh–Hadamard pulse with which a qubit scatters a photon out of the
/// coherent drive; each slot applies ∏_n (1 − iε A(n)) or (1 − iε B(n)).
struct GroverConfig {
  int qubits = 3;
  std::uint64_t marked = 0;
  int iterations = 1;
  double epsilon = 0.0;

  void validate(int max_qubits = kMaxIdealQubits) const;
};

/// Amplitude rotation of one W R W O step acting on (a_y, Σ_{x≠y} a_x/√(2^K−1)).
std::pair<double, double> reduced_rotation(double a_y, double a_rest, int qubits);

/// φ with sin φ = 2√(2^K − 1)/2^K.
double grover_angle(int qubits);

/// π/(2φ) rounded half-down, so K = 2 gives 1.
int optimal_iterations(int qubits);

struct TrajectoryPoint {
  int iteration = 0;
  double amplitude = 0.0;  ///< real part of a_y (a_y is real throughout)
  double success = 0.0;    ///< |a_y|²
};

/// Explicit state-vector run of (W R W O)^N from the uniform state, W
/// applied qubit by qubit. Entry 0 is the initial state. ε is ignored.
std::vector<TrajectoryPoint> ideal_run(const GroverConfig& cfg);

/// Final register of the ideal run.
Register ideal_final_state(const GroverConfig& cfg);

enum class Slot {
  B,  ///< right after the oracle, before the first W
  A,  ///< right after the second W
};
const char* name_of(Slot s);

/// One first-order scattering event. The branch state is
/// Σ_k registers[k] ⊗ G_k|vac⟩, already evolved to the end of the run.
struct Branch {
  int iteration = 0;  ///< 1-based
  int qubit = 0;
  Slot slot = Slot::B;
  std::array<Register, 4> registers;  ///< indexed by PhotonKind; empty in summary mode
  double probability = 0.0;           ///< Gram-contracted branch norm
  double success = 0.0;               ///< Gram-contracted weight on |y⟩
};

struct DecoherentState {
  Register vacuum;              ///< ideal evolution, unit norm
  /// Probability removed from the vacuum branch, ε²⟨ψ|K†GK|ψ⟩ summed over
  /// events at the moment each one fires.
  double vacuum_deficit = 0.0;
  std::vector<Branch> branches;

  /// (1 − deficit) + Σ branch probabilities.
  double total_probability() const;
};

struct StepScatter {
  int iteration = 0;
  double slot_b = 0.0;
  double slot_a = 0.0;
  double success_ideal = 0.0;  ///< after this iteration
};

struct EventScatter {
  int iteration = 0;
  int qubit = 0;
  Slot slot = Slot::B;
  double probability = 0.0;
};

struct ScatterReport {
  int qubits = 0;
  std::uint64_t marked = 0;
  double epsilon = 0.0;
  int iterations = 0;
  double total_scatter = 0.0;
  double success_ideal = 0.0;
  std::optional<double> success_decoherent;  ///< branch simulation only
  std::vector<StepScatter> per_step;
  std::vector<EventScatter> per_event;
  std::vector<std::string> warnings;
};

enum class BranchStorage {
  Full,     ///< keep every kind-resolved branch register
  Summary,  ///< keep probabilities only (constant memory per branch)
};

struct DecoherentRun {
  DecoherentState state;
  ScatterReport report;
};

/// First-order expansion in ε of the driven search. Per iteration the order
/// is O → B-scatter → W R W → A-scatter; each event on qubit n spawns a
/// branch −iε·(kind-resolved A or B on qubit n)·ψ that then evolves ideally.
/// Branches with distinct (iteration, qubit, slot) carry orthogonal field
/// states; kinds within one branch interfere through the Gram matrix.
DecoherentRun decoherent_run(const GroverConfig& cfg, const OverlapTable& table,
                             BranchStorage storage = BranchStorage::Full);

enum class ClosedFormMode { PerStepExact, Asymptotic };

/// Which cross term enters the K/2 pair term.
enum class Contraction {
  Sentence,  ///< |B_β + B_−|² + |B_α + B_+|² (pre-asymptotic display)
  Printed,   ///< |B_β + B_+|² + |B_α + B_+|² (as printed in the large-K sum)
};

/// Amplitudes fed to the per-step display.
enum class StepAngle {
  Exact,  ///< ideal amplitudes before each slot: sin((2j∓1)θ), sin θ = 2^{−K/2}
  Indexed,  ///< sin(jφ) for slot B and sin((j+1)φ) for slot A
};

struct ClosedFormOptions {
  ClosedFormMode mode = ClosedFormMode::PerStepExact;
  Contraction contraction = Contraction::Sentence;
  StepAngle angle = StepAngle::Exact;
};

ScatterReport closed_form_scatter(const GroverConfig& cfg, const OverlapTable& table,
                                  const ClosedFormOptions& options = {});

/// Large-K law written as 64·ε²·2^{K/2}·(per_qubit·K + per_weight·‖y‖).
struct AsymptoticCoefficients {
  double per_qubit = 0.0;
  double per_weight = 0.0;
};

inline constexpr AsymptoticCoefficients kQuotedAsymptotic{0.211, 0.241};

AsymptoticCoefficients asymptotic_coefficients(const OverlapTable& table,
                                               Contraction contraction = Contraction::Sentence);

struct ResidualProjection {
  Complex recomputed;
  Complex quoted{-2.232, 0.448};
};

/// (I_β + I_{β,+} + I_{−,β} + I_{−,+}) / √(I_β + I_− + 2 Re I_{β,−}).
ResidualProjection residual_projection(const OverlapTable& table);

}  // namespace fieldback

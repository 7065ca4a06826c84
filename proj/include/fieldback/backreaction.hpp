#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "fieldback/driven_qubit.hpp"
#include "fieldback/g_functions.hpp"

namespace fieldback {

using Matrix4c = Eigen::Matrix4cd;
/// Coefficients of a one-photon field state over the normalized states
/// G_k|vac⟩, indexed by PhotonKind.
using FieldVector = Eigen::Vector4cd;

struct QuadratureInfo {
  double truncation = 0.0;      ///< X, the core interval is [−X, X]
  double tolerance = 0.0;
  double error_estimate = 0.0;  ///< core plus tail quadrature error
  double max_tail = 0.0;        ///< largest |tail contribution| added
  std::size_t evaluations = 0;
};

/// Normalization integrals I_k and overlaps I_{k,k'} = ∫ conj(g_k) g_k' dx
/// of the one-photon back-reaction states. Immutable once built.
class OverlapTable {
 public:
  /// `overlaps` is the full Hermitian 4×4 matrix with I_k on the diagonal.
  /// Throws ValidationError if it is not Hermitian, has a negative norm, or
  /// breaks Cauchy–Schwarz.
  explicit OverlapTable(const Matrix4c& overlaps, QuadratureInfo info = {});

  double norm(PhotonKind k) const { return overlaps_(index_of(k), index_of(k)).real(); }
  Complex overlap(PhotonKind a, PhotonKind b) const {
    return overlaps_(index_of(a), index_of(b));
  }
  const Matrix4c& matrix() const { return overlaps_; }
  const QuadratureInfo& quadrature() const { return info_; }

 private:
  Matrix4c overlaps_;
  QuadratureInfo info_;
};

/// The printed table: I_α = I_β = 4.297, I_+ = 0.617, I_− = 10.451 and the
/// six complex overlaps quoted with them.
OverlapTable reference_overlap_table();

/// Integrates the table over the real line: adaptive Gauss–Kronrod on
/// [−X, X] plus tails evaluated in closed form (rational tails by u = 1/x,
/// oscillating tails by rotating onto x = ±X ± is). The √ω mode factor is
/// ignored. Requires X ≥ 50 and tol ≤ 1e−6; throws ConvergenceError when
/// the combined error estimate exceeds tol.
OverlapTable integral_table(double truncation = 200.0, double tol = 1e-8);

/// Normalized Gram matrix ⟨G_k|G_k'⟩ = I_{k,k'}/√(I_k I_k').
Matrix4c gram_matrix(const OverlapTable& table);

/// ⟨u|v⟩ for field states given as FieldVector coefficients.
Complex field_inner(const FieldVector& u, const FieldVector& v, const Matrix4c& gram);
double field_norm2(const FieldVector& v, const Matrix4c& gram);

/// Kind-resolved first-order scattering operators of the driven
/// Walsh–Hadamard gate: W_full = (1 − iεA)W = W(1 − iεB). Each entry is the
/// 2×2 coefficient matrix multiplying √I_k-weighted G_k.
struct ScatterOps {
  std::array<Gate2, 4> a;
  std::array<Gate2, 4> b;

  const Gate2& a_of(PhotonKind k) const { return a[index_of(k)]; }
  const Gate2& b_of(PhotonKind k) const { return b[index_of(k)]; }

  /// Matrix element (r, c) of A or B as a field state.
  FieldVector a_element(int row, int col) const;
  FieldVector b_element(int row, int col) const;
};

ScatterOps scattering_operators(const OverlapTable& table);

// ---------------------------------------------------------------------------
// Time-domain envelopes.

/// Frequency grid used to synthesize envelopes; x_j = −X + j·2X/n.
struct SpectralGrid {
  double half_width = 64.0;
  std::size_t points = 4096;
};

struct SampledEnvelope {
  std::vector<double> time;  ///< units of 1/Ω
  std::vector<Complex> amplitude;
};

struct OnePhotonEnvelope : SampledEnvelope {
  PhotonKind kind = PhotonKind::Alpha;
};

std::vector<double> uniform_grid(double t0, double t1, std::size_t n);

/// f(t) = (1/2π) ∫ g_kind(x) e^{−ixt} dx sampled on `time`. The grid must
/// be strictly increasing, have at least 256 points and span [−2π, 6π]
/// (−2 to 6 pulse durations).
OnePhotonEnvelope envelope(PhotonKind kind, std::span<const double> time,
                           const SpectralGrid& spectral = {});

/// Same transform of (e^{iπx} − 1)/x: i times the unit square on [0, π].
SampledEnvelope classical_pulse_envelope(std::span<const double> time,
                                         const SpectralGrid& spectral = {});

/// Trapezoidal ∫|f(t)|² dt over the sampled grid.
double envelope_energy(const SampledEnvelope& env);

}  // namespace fieldback

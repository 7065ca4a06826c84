#pragma once

#include <array>
#include <complex>
#include <string_view>
#include <vector>

namespace fieldback {

using Complex = std::complex<double>;

/// Qubit transition that emits a one-photon back-reaction state. The
/// names follow the single-qubit operators S_α, S_β, S_+, S_− that the
/// corresponding g-function multiplies.
enum class PhotonKind { Alpha = 0, Beta = 1, Plus = 2, Minus = 3 };

inline constexpr std::array<PhotonKind, 4> kAllKinds = {
    PhotonKind::Alpha, PhotonKind::Beta, PhotonKind::Plus, PhotonKind::Minus};

constexpr int index_of(PhotonKind k) { return static_cast<int>(k); }
std::string_view name_of(PhotonKind k);

/// Real-coefficient polynomial, coefficients in ascending powers.
struct Polynomial {
  std::vector<double> coeffs;

  template <typename T>
  T operator()(T x) const {
    T acc{0};
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
    return acc;
  }
};

/// Real rational function num/den, evaluable off the real axis.
struct Rational {
  Polynomial num;
  Polynomial den;

  template <typename T>
  T operator()(T x) const {
    return num(x) / den(x);
  }
};

/// g(x) = (P(x) + Q(x)·e^{iπx}) / D(x) with real polynomials P, Q, D and
/// removable singularities at the real roots of D.
struct GFunction {
  Polynomial p;
  Polynomial q;
  Polynomial d;
  std::vector<double> poles;

  /// Non-oscillating part P/D.
  Rational smooth() const { return {p, d}; }
  /// Coefficient Q/D of e^{iπx}.
  Rational oscillating() const { return {q, d}; }
};

/// The closed-form spectral profile for one kind; x = (ω − ω̄)/Ω.
const GFunction& g_function(PhotonKind kind);

/// Evaluates g_kind(x) for real x. Within 1e−4 of a removable singularity
/// the value comes from a Taylor expansion of numerator and denominator,
/// so the result is continuous and equals the analytic limit at the pole.
Complex g_value(PhotonKind kind, double x);

/// Fourier components (e^{iπx} − 1)/x of the classical square pulse.
Complex square_pulse_spectrum(double x);

}  // namespace fieldback

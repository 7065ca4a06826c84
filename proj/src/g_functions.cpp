#include "fieldback/g_functions.hpp"

#include <cmath>
#include <numbers>

namespace fieldback {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kPi = std::numbers::pi;
constexpr double kSeriesRadius = 1e-4;
constexpr int kSeriesOrder = 5;

std::vector<GFunction> build_table() {
  std::vector<GFunction> table(4);
  // 2√2·x·(x² − 1)
  const Polynomial cubic{{0.0, -2.0 * kSqrt2, 0.0, 2.0 * kSqrt2}};

  table[index_of(PhotonKind::Alpha)] = {
      {{-1.0, 1.0 / kSqrt2, 2.0}}, {{1.0, 1.0 / kSqrt2}}, cubic, {-1.0, 0.0, 1.0}};
  table[index_of(PhotonKind::Beta)] = {
      {{-1.0, -1.0 / kSqrt2}}, {{1.0, -1.0 / kSqrt2, -2.0}}, cubic, {-1.0, 0.0, 1.0}};
  table[index_of(PhotonKind::Plus)] = {
      {{-1.0}}, {{-1.0}}, {{-4.0, 0.0, 4.0}}, {-1.0, 1.0}};
  table[index_of(PhotonKind::Minus)] = {{{3.0 * kSqrt2, 4.0}},
                                        {{3.0 * kSqrt2, 4.0}},
                                        {{-4.0 * kSqrt2, 0.0, 4.0 * kSqrt2}},
                                        {-1.0, 1.0}};
  return table;
}

const std::vector<GFunction>& table() {
  static const std::vector<GFunction> t = build_table();
  return t;
}

// Taylor coefficients of a polynomial about x0, orders 0..n-1.
std::vector<double> shifted(const Polynomial& poly, double x0, int n) {
  std::vector<double> c = poly.coeffs;
  c.resize(std::max<std::size_t>(c.size(), static_cast<std::size_t>(n)), 0.0);
  // Repeated synthetic division yields the coefficients of P(x0 + h).
  std::vector<double> out(static_cast<std::size_t>(n), 0.0);
  const std::size_t degree = c.size() - 1;
  for (std::size_t k = 0; k < static_cast<std::size_t>(n); ++k) {
    for (std::size_t j = degree; j > k; --j) c[j - 1] += x0 * c[j];
    out[k] = c[k];
  }
  return out;
}

// Evaluates g near a simple root x0 of D via the ratio of truncated
// Taylor series of N = P + Q e^{iπx} and D.
Complex series_value(const GFunction& g, double x0, double h) {
  const auto p = shifted(g.p, x0, kSeriesOrder);
  const auto q = shifted(g.q, x0, kSeriesOrder);
  const auto d = shifted(g.d, x0, kSeriesOrder);
  const Complex phase = std::exp(Complex{0.0, kPi * x0});

  std::vector<Complex> e(kSeriesOrder);
  Complex term = 1.0;
  for (int m = 0; m < kSeriesOrder; ++m) {
    e[m] = phase * term;
    term *= Complex{0.0, kPi} / static_cast<double>(m + 1);
  }

  Complex num = 0.0;
  Complex den = 0.0;
  Complex hp = 1.0;
  for (int k = 1; k < kSeriesOrder; ++k) {
    Complex nk = p[k];
    for (int m = 0; m <= k; ++m) nk += q[m] * e[k - m];
    num += nk * hp;
    den += d[k] * hp;
    hp *= h;
  }
  return num / den;
}

}  // namespace

std::string_view name_of(PhotonKind k) {
  switch (k) {
    case PhotonKind::Alpha: return "alpha";
    case PhotonKind::Beta: return "beta";
    case PhotonKind::Plus: return "plus";
    case PhotonKind::Minus: return "minus";
  }
  return "?";
}

const GFunction& g_function(PhotonKind kind) { return table()[index_of(kind)]; }

Complex g_value(PhotonKind kind, double x) {
  const GFunction& g = g_function(kind);
  for (double pole : g.poles) {
    if (std::abs(x - pole) < kSeriesRadius) return series_value(g, pole, x - pole);
  }
  const Complex e = std::exp(Complex{0.0, kPi * x});
  return (g.p(x) + g.q(x) * e) / g.d(x);
}

Complex square_pulse_spectrum(double x) {
  if (std::abs(x) < kSeriesRadius) {
    // (e^{iπx} − 1)/x = iπ·(1 + iπx/2 + (iπx)²/6 + (iπx)³/24)
    const Complex z{0.0, kPi * x};
    return Complex{0.0, kPi} * (1.0 + z / 2.0 + z * z / 6.0 + z * z * z / 24.0);
  }
  return (std::exp(Complex{0.0, kPi * x}) - 1.0) / x;
}

}  // namespace fieldback

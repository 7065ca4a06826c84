#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

namespace fieldback::quad {

/// Gauss–Kronrod 7/15 nodes on [−1, 1] (non-negative half, descending).
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd-indexed Kronrod nodes (the embedded 7-point rule).
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <std::size_t N>
using CVec = std::array<std::complex<double>, N>;

template <std::size_t N>
struct Result {
  CVec<N> value{};
  double error = 0.0;       ///< sum of per-panel |K15 − G7| estimates (max-norm)
  std::size_t evaluations = 0;
  bool converged = true;
};

namespace detail {

template <std::size_t N>
double max_norm(const CVec<N>& v) {
  double m = 0.0;
  for (const auto& c : v) m = std::max(m, std::abs(c));
  return m;
}

template <std::size_t N, typename F>
std::pair<CVec<N>, double> kronrod_panel(const F& f, double a, double b) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  CVec<N> kron{};
  CVec<N> gauss{};
  const CVec<N> centre = f(mid);
  for (std::size_t c = 0; c < N; ++c) {
    kron[c] = centre[c] * kKronrodWeights[7];
    gauss[c] = centre[c] * kGaussWeights[3];
  }
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    const CVec<N> lo = f(mid - dx);
    const CVec<N> hi = f(mid + dx);
    for (std::size_t c = 0; c < N; ++c) {
      const auto sum = lo[c] + hi[c];
      kron[c] += kKronrodWeights[j] * sum;
      if (j % 2 == 1) gauss[c] += kGaussWeights[j / 2] * sum;
    }
  }
  double err = 0.0;
  for (std::size_t c = 0; c < N; ++c) {
    kron[c] *= half;
    gauss[c] *= half;
    err = std::max(err, std::abs(kron[c] - gauss[c]));
  }
  return {kron, err};
}

template <std::size_t N, typename F>
void adapt(const F& f, double a, double b, double tol, int depth, std::size_t budget,
           Result<N>& out) {
  auto [value, err] = kronrod_panel<N>(f, a, b);
  out.evaluations += 15;
  constexpr int kMaxDepth = 40;
  if (err <= tol || depth >= kMaxDepth || out.evaluations + 30 > budget) {
    if (err > tol) out.converged = false;
    for (std::size_t c = 0; c < N; ++c) out.value[c] += value[c];
    out.error += err;
    return;
  }
  const double mid = 0.5 * (a + b);
  adapt<N>(f, a, mid, 0.5 * tol, depth + 1, budget, out);
  adapt<N>(f, mid, b, 0.5 * tol, depth + 1, budget, out);
}

}  // namespace detail

/// Adaptive Gauss–Kronrod integration of a vector-valued integrand over
/// [a, b]. The interval is first cut into `panels` equal pieces; each is
/// bisected until its max-norm error estimate falls below its share of
/// `tol`. Panels are visited in order, so results are reproducible. Once
/// `max_evaluations` is spent, remaining panels are taken unrefined and the
/// result is flagged as not converged.
template <std::size_t N, typename F>
Result<N> integrate(const F& f, double a, double b, double tol, std::size_t panels = 1,
                    std::size_t max_evaluations = 4'000'000) {
  Result<N> out;
  const double width = (b - a) / static_cast<double>(panels);
  const double share = tol / static_cast<double>(panels);
  for (std::size_t p = 0; p < panels; ++p) {
    const double lo = a + width * static_cast<double>(p);
    const double hi = (p + 1 == panels) ? b : lo + width;
    detail::adapt<N>(f, lo, hi, share, 0, max_evaluations, out);
  }
  return out;
}

}  // namespace fieldback::quad

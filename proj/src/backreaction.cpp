#include "fieldback/backreaction.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>

#include "fieldback/errors.hpp"
#include "fieldback/quadrature.hpp"

namespace fieldback {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kEntries = 10;
using Entries = quad::CVec<kEntries>;

// Upper-triangle entries of the overlap matrix: four norms, then six pairs.
constexpr std::array<std::pair<int, int>, kEntries> kEntryIndex = {{
    {0, 0}, {1, 1}, {2, 2}, {3, 3},
    {0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3},
}};

Matrix4c assemble(const Entries& e) {
  Matrix4c m;
  for (std::size_t n = 0; n < kEntries; ++n) {
    const auto [r, c] = kEntryIndex[n];
    m(r, c) = e[n];
    m(c, r) = std::conj(e[n]);
  }
  for (int k = 0; k < 4; ++k) m(k, k) = m(k, k).real();
  return m;
}

struct Parts {
  std::array<Rational, 4> p;  // non-oscillating P/D
  std::array<Rational, 4> q;  // coefficient of e^{iπx}
};

const Parts& parts() {
  static const Parts cached = [] {
    Parts out;
    for (PhotonKind k : kAllKinds) {
      out.p[index_of(k)] = g_function(k).smooth();
      out.q[index_of(k)] = g_function(k).oscillating();
    }
    return out;
  }();
  return cached;
}

// For real x, conj(g_a) g_b = (p_a p_b + q_a q_b) + p_a q_b e^{iπx} + q_a p_b e^{−iπx}.
// The three rational coefficients are continued to complex z.
struct TailTerms {
  Complex flat;
  Complex up;
  Complex down;
};

TailTerms tail_terms(int a, int b, Complex z) {
  const Parts& g = parts();
  const Complex pa = g.p[a](z), qa = g.q[a](z), pb = g.p[b](z), qb = g.q[b](z);
  return {pa * pb + qa * qb, pa * qb, qa * pb};
}

Entries core_integrand(double x) {
  std::array<Complex, 4> g;
  for (PhotonKind k : kAllKinds) g[index_of(k)] = g_value(k, x);
  Entries out;
  for (std::size_t n = 0; n < kEntries; ++n) {
    const auto [r, c] = kEntryIndex[n];
    out[n] = std::conj(g[r]) * g[c];
  }
  return out;
}

}  // namespace

OverlapTable::OverlapTable(const Matrix4c& overlaps, QuadratureInfo info)
    : overlaps_(overlaps), info_(info) {
  const double scale = overlaps.cwiseAbs().maxCoeff();
  require(std::isfinite(scale), "overlap table has non-finite entries");
  const double slack = 1e-9 * std::max(scale, 1.0);
  for (int r = 0; r < 4; ++r) {
    require(std::abs(overlaps(r, r).imag()) <= slack && overlaps(r, r).real() >= 0.0,
            "overlap table norm I_" + std::string(name_of(static_cast<PhotonKind>(r))) +
                " must be real and >= 0");
    for (int c = 0; c < 4; ++c) {
      require(std::abs(overlaps(r, c) - std::conj(overlaps(c, r))) <= slack,
              "overlap table must be Hermitian");
      require(std::norm(overlaps(r, c)) <=
                  overlaps(r, r).real() * overlaps(c, c).real() + slack * scale,
              "overlap table violates Cauchy-Schwarz");
    }
  }
}

OverlapTable reference_overlap_table() {
  Entries e;
  e[0] = 4.297;                   // α
  e[1] = 4.297;                   // β
  e[2] = 0.617;                   // +
  e[3] = 10.451;                  // −
  e[4] = Complex{0.614, 2.221};   // α,β
  e[5] = Complex{-0.617, 1.110};  // α,+
  e[6] = Complex{4.300, -3.331};  // α,−
  e[7] = Complex{0.617, 1.110};   // β,+
  e[8] = Complex{-4.300, -3.331}; // β,−
  e[9] = Complex{-1.850, 0.0};    // +,−
  return OverlapTable(assemble(e));
}

OverlapTable integral_table(double truncation, double tol) {
  require(std::isfinite(truncation) && truncation >= 50.0, "truncation must be >= 50");
  require(std::isfinite(tol) && tol > 0.0 && tol <= 1e-6, "tol must be in (0, 1e-6]");

  const double x_max = truncation;
  const auto panels = static_cast<std::size_t>(std::ceil(2.0 * x_max));
  const auto core = quad::integrate<kEntries>(core_integrand, -x_max, x_max, 0.5 * tol, panels);

  // Non-oscillating tails on both sides, u = 1/x.
  const auto flat = quad::integrate<kEntries>(
      [](double u) {
        Entries out;
        const double x = 1.0 / u;
        for (std::size_t n = 0; n < kEntries; ++n) {
          const auto [a, b] = kEntryIndex[n];
          out[n] = (tail_terms(a, b, x).flat + tail_terms(a, b, -x).flat) / (u * u);
        }
        return out;
      },
      0.0, 1.0 / x_max, 0.1 * tol, 4);

  // Oscillating tails on both sides, rotated off the real axis so the
  // integrand carries e^{−πs}.
  const Complex i{0.0, 1.0};
  const Complex up = i * std::exp(i * (kPi * x_max));
  const Complex down = -i * std::exp(-i * (kPi * x_max));
  constexpr double kDecayLength = 16.0;
  const auto wave = quad::integrate<kEntries>(
      [&](double s) {
        Entries out;
        const double w = std::exp(-kPi * s);
        for (std::size_t n = 0; n < kEntries; ++n) {
          const auto [a, b] = kEntryIndex[n];
          const Complex right_up = tail_terms(a, b, Complex{x_max, s}).up;
          const Complex left_up = tail_terms(a, b, Complex{-x_max, -s}).down;
          const Complex right_down = tail_terms(a, b, Complex{x_max, -s}).down;
          const Complex left_down = tail_terms(a, b, Complex{-x_max, s}).up;
          out[n] = w * (up * (right_up + left_up) + down * (right_down + left_down));
        }
        return out;
      },
      0.0, kDecayLength, 0.1 * tol, 16);

  Entries total;
  double max_tail = 0.0;
  for (std::size_t n = 0; n < kEntries; ++n) {
    const Complex tail = flat.value[n] + wave.value[n];
    max_tail = std::max(max_tail, std::abs(tail));
    total[n] = core.value[n] + tail;
  }

  QuadratureInfo info;
  info.truncation = truncation;
  info.tolerance = tol;
  info.error_estimate = core.error + flat.error + wave.error;
  info.max_tail = max_tail;
  info.evaluations = core.evaluations + flat.evaluations + wave.evaluations;
  if (!(core.converged && flat.converged && wave.converged) || info.error_estimate > tol) {
    std::ostringstream msg;
    const bool refined = core.converged && flat.converged && wave.converged;
    msg << "integral_table: --tol " << tol << " not reached ("
        << (refined ? "" : "subinterval refinement stopped by the evaluation budget; ")
        << "error estimate " << info.error_estimate << " after " << info.evaluations
        << " evaluations)";
    throw ConvergenceError(msg.str());
  }
  return OverlapTable(assemble(total), info);
}

Matrix4c gram_matrix(const OverlapTable& table) {
  Eigen::Vector4d scale;
  for (int k = 0; k < 4; ++k) {
    const double norm = table.matrix()(k, k).real();
    require(norm > 0.0, "gram_matrix needs every I_k > 0");
    scale(k) = 1.0 / std::sqrt(norm);
  }
  Matrix4c g = scale.asDiagonal() * table.matrix() * scale.asDiagonal();
  for (int k = 0; k < 4; ++k) g(k, k) = 1.0;
  return g;
}

Complex field_inner(const FieldVector& u, const FieldVector& v, const Matrix4c& gram) {
  return u.dot(gram * v);  // Eigen's dot conjugates the left operand
}

double field_norm2(const FieldVector& v, const Matrix4c& gram) {
  return field_inner(v, v, gram).real();
}

FieldVector ScatterOps::a_element(int row, int col) const {
  FieldVector v;
  for (int k = 0; k < 4; ++k) v(k) = a[k](row, col);
  return v;
}

FieldVector ScatterOps::b_element(int row, int col) const {
  FieldVector v;
  for (int k = 0; k < 4; ++k) v(k) = b[k](row, col);
  return v;
}

ScatterOps scattering_operators(const OverlapTable& table) {
  const double sa = std::sqrt(table.norm(PhotonKind::Alpha));
  const double sb = std::sqrt(table.norm(PhotonKind::Beta));
  const double sp = std::sqrt(table.norm(PhotonKind::Plus));
  const double sm = std::sqrt(table.norm(PhotonKind::Minus));

  ScatterOps ops;
  auto set = [](Gate2& g, double e00, double e01, double e10, double e11) {
    g << e00, e01, e10, e11;
  };
  // A = [[√Iβ Gβ + √I− G−, √Iβ Gβ − √I− G−], [√I+ G+ + √Iα Gα, √I+ G+ − √Iα Gα]]
  set(ops.a[index_of(PhotonKind::Beta)], sb, sb, 0, 0);
  set(ops.a[index_of(PhotonKind::Minus)], sm, -sm, 0, 0);
  set(ops.a[index_of(PhotonKind::Plus)], 0, 0, sp, sp);
  set(ops.a[index_of(PhotonKind::Alpha)], 0, 0, sa, -sa);
  // B = [[√Iβ Gβ + √I+ G+, √I− G− + √Iα Gα], [√Iβ Gβ − √I+ G+, √I− G− − √Iα Gα]]
  set(ops.b[index_of(PhotonKind::Beta)], sb, 0, sb, 0);
  set(ops.b[index_of(PhotonKind::Plus)], sp, 0, -sp, 0);
  set(ops.b[index_of(PhotonKind::Minus)], 0, sm, 0, sm);
  set(ops.b[index_of(PhotonKind::Alpha)], 0, sa, 0, -sa);
  return ops;
}

std::vector<double> uniform_grid(double t0, double t1, std::size_t n) {
  require(n >= 2 && t1 > t0, "uniform_grid needs n >= 2 and t1 > t0");
  std::vector<double> out(n);
  const double dt = (t1 - t0) / static_cast<double>(n - 1);
  for (std::size_t j = 0; j < n; ++j) out[j] = t0 + dt * static_cast<double>(j);
  out.back() = t1;
  return out;
}

namespace {

void validate_time_grid(std::span<const double> time) {
  require(time.size() >= 256, "time grid needs at least 256 points");
  for (std::size_t j = 1; j < time.size(); ++j) {
    require(time[j] > time[j - 1], "time grid must be strictly increasing");
  }
  constexpr double kSlack = 1e-9;
  require(time.front() <= -2.0 * kPi + kSlack && time.back() >= 6.0 * kPi - kSlack,
          "time grid must span [-2, 6] pulse durations ([-2pi, 6pi])");
}

template <typename Spectrum>
std::vector<Complex> synthesize(const Spectrum& spectrum, std::span<const double> time,
                                const SpectralGrid& grid) {
  require(grid.points >= 256 && grid.half_width > 0.0, "spectral grid too small");
  const std::size_t n = grid.points;
  const double dx = 2.0 * grid.half_width / static_cast<double>(n);
  std::vector<double> xs(n);
  std::vector<Complex> gs(n);
  for (std::size_t j = 0; j < n; ++j) {
    xs[j] = -grid.half_width + dx * static_cast<double>(j);
    gs[j] = spectrum(xs[j]);
  }
  std::vector<Complex> out(time.size());
  for (std::size_t m = 0; m < time.size(); ++m) {
    const double t = time[m];
    Complex acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += gs[j] * std::polar(1.0, -xs[j] * t);
    out[m] = acc * (dx / (2.0 * kPi));
  }
  return out;
}

}  // namespace

OnePhotonEnvelope envelope(PhotonKind kind, std::span<const double> time,
                           const SpectralGrid& spectral) {
  validate_time_grid(time);
  OnePhotonEnvelope env;
  env.kind = kind;
  env.time.assign(time.begin(), time.end());
  env.amplitude = synthesize([kind](double x) { return g_value(kind, x); }, time, spectral);
  return env;
}

SampledEnvelope classical_pulse_envelope(std::span<const double> time,
                                         const SpectralGrid& spectral) {
  validate_time_grid(time);
  SampledEnvelope env;
  env.time.assign(time.begin(), time.end());
  env.amplitude = synthesize(square_pulse_spectrum, time, spectral);
  return env;
}

double envelope_energy(const SampledEnvelope& env) {
  double acc = 0.0;
  for (std::size_t j = 1; j < env.time.size(); ++j) {
    const double dt = env.time[j] - env.time[j - 1];
    acc += 0.5 * dt * (std::norm(env.amplitude[j]) + std::norm(env.amplitude[j - 1]));
  }
  return acc;
}

}  // namespace fieldback

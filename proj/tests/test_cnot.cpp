#include <cmath>
#include <numbers>

#include <doctest.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "fieldback/cnot.hpp"
#include "fieldback/errors.hpp"
#include "oracles.hpp"

using namespace fieldback::cnot;
using B = BasisState;

namespace {

constexpr double kOmegaBar = 21.238516480713454;
constexpr double kCalibratedT = 398.1432601172651;

TwoQubitParams calibrated() {
  TwoQubitParams p;
  p.center_frequency = kOmegaBar;
  p.duration = kCalibratedT;
  return p;
}

Matrix4c expm_propagator(const TwoQubitParams& p, double t) {
  const Matrix4c h = rotating_hamiltonian(p).cast<Complex>();
  return Matrix4c(Complex(0.0, -t) * h).exp();
}

// Gauss–Legendre quadrature of −(1/2)∫₀ᵀ U(T−t)† L U(t)† e^{ixt} dt with
// propagators from the matrix exponential.
Matrix4c dyson_quadrature(const TwoQubitParams& p, double x, int panels) {
  static const double nodes[5] = {0.0, -0.5384693101056831, 0.5384693101056831,
                                  -0.9061798459386640, 0.9061798459386640};
  static const double weights[5] = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                                    0.2369268850561891, 0.2369268850561891};
  const Matrix4c l = lowering_operator().cast<Complex>();
  const double width = p.duration / panels;
  Matrix4c acc = Matrix4c::Zero();
  for (int s = 0; s < panels; ++s) {
    const double mid = (s + 0.5) * width;
    for (int q = 0; q < 5; ++q) {
      const double t = mid + 0.5 * width * nodes[q];
      const Matrix4c left = expm_propagator(p, p.duration - t).adjoint();
      const Matrix4c right = expm_propagator(p, t).adjoint();
      acc += weights[q] * 0.5 * width * (left * l * right) * std::exp(Complex(0.0, x * t));
    }
  }
  return -0.5 * acc;
}

Complex at(const Matrix4c& m, B from, B to) { return m(index_of(to), index_of(from)); }

}  // namespace

TEST_CASE("rotating-frame Hamiltonian layout") {
  const TwoQubitParams p = calibrated();
  const Matrix4 h = rotating_hamiltonian(p);
  CHECK(h.isApprox(h.transpose()));
  CHECK(std::abs(h.trace()) < 1e-12);
  CHECK(h(1, 2) == doctest::Approx(0.2));
  CHECK(h(0, 3) == 0.0);
  CHECK(h(0, 1) == doctest::Approx(0.005));
  CHECK(h(2, 3) == doctest::Approx(0.005));
  CHECK(h(0, 0) == doctest::Approx(20.5 - kOmegaBar + 0.1));
  CHECK(h(1, 1) == doctest::Approx(-0.5 - 0.1));
}

TEST_CASE("eigenvalues match numpy") {
  const Eigensystem es = diagonalize(calibrated());
  const double golden[4] = {-0.64250199, -0.63457345, 0.43846262, 0.83861282};
  for (int n = 0; n < 4; ++n) CHECK(es.values(n) == doctest::Approx(golden[n]).epsilon(1e-7));
  CHECK(std::abs(es.values.sum()) < 1e-12);
  CHECK(oracle::max_abs_diff(Matrix4(es.vectors.transpose() * es.vectors), Matrix4::Identity()) < 1e-12);
}

TEST_CASE("propagator is unitary and matches the matrix exponential") {
  const TwoQubitParams p = calibrated();
  for (double t : {0.0, 1.0, 37.5, 100.6, kCalibratedT, 1000.0}) {
    const Matrix4c u = classical_propagator(p, t);
    CHECK(oracle::max_abs_diff(Matrix4c(u.adjoint() * u), Matrix4c::Identity()) < 1e-10);
    CHECK(oracle::max_abs_diff(u, expm_propagator(p, t)) < 1e-9);
  }
  CHECK_THROWS_AS(classical_propagator(p, -1.0), fieldback::ValidationError);
}

TEST_CASE("transition frequencies") {
  const TwoQubitParams p;
  const auto exact = transition_frequencies(p);
  const auto approx = perturbative_transition_frequencies(p);
  const double golden[4] = {19.761483519, 20.161483519, 20.838516481, 21.238516481};
  for (int n = 0; n < 4; ++n) {
    CHECK(exact[n] == doctest::Approx(golden[n]).epsilon(1e-9));
    CHECK(std::abs(exact[n] - approx[n]) < 2e-3);
  }
}

TEST_CASE("calibration reaches a high-fidelity selective flip") {
  const Calibration cal = calibrate(TwoQubitParams{});
  CHECK(cal.center_frequency == doctest::Approx(kOmegaBar).epsilon(1e-12));
  CHECK(cal.duration == doctest::Approx(kCalibratedT).epsilon(1e-6));
  CHECK(cal.transfer == doctest::Approx(0.98293565890).epsilon(1e-8));
  CHECK(cal.transfer >= 0.95);
  CHECK(cal.log.find("100.6") != std::string::npos);
  TwoQubitParams p = calibrated();
  CHECK(transfer_amplitude(p) == doctest::Approx(cal.transfer).epsilon(1e-10));
  // The transfer is a maximum in T.
  p.duration = kCalibratedT * 1.01;
  CHECK(transfer_amplitude(p) < cal.transfer);
  p.duration = kCalibratedT * 0.99;
  CHECK(transfer_amplitude(p) < cal.transfer);
}

TEST_CASE("spectrum matches direct time-domain quadrature") {
  const TwoQubitParams p = calibrated();
  const std::vector<double> xs = {-1.3, 0.0, 0.4};
  const DysonSpectrum s = dyson_first_order(p, xs);
  for (std::size_t j = 0; j < xs.size(); ++j) {
    const Matrix4c ref = dyson_quadrature(p, xs[j], 800);
    CHECK(oracle::max_abs_diff(s.elements[j], ref) < 1e-6 * std::max(1.0, ref.cwiseAbs().maxCoeff()));
  }
  // Golden values from an independent numpy/scipy evaluation.
  CHECK(std::abs(at(s.elements[2], B::S01, B::S00) - Complex(-151.06609998643, -171.83071872998)) < 1e-6);
  CHECK(std::abs(at(s.elements[1], B::S11, B::S10) - Complex(47.44068250111, 10.64128209169)) < 1e-6);
  CHECK(std::abs(at(s.elements[0], B::S11, B::S11) - Complex(0.29757102439, 0.07259154140)) < 1e-7);
}

TEST_CASE("spectrum is continuous through exact resonances") {
  const TwoQubitParams p = calibrated();
  const Eigensystem es = diagonalize(p);
  std::vector<double> xs;
  for (int n = 0; n < 4; ++n) {
    for (int m = 0; m < 4; ++m) {
      const double x0 = es.values(n) - es.values(m);
      for (double h : {-1e-9, -1e-12, 0.0, 1e-12, 1e-9}) xs.push_back(x0 + h);
      // Either side of the point where the kernel switches to its series.
      const double edge = 1e-3 / p.duration;
      xs.push_back(x0 + edge * (1.0 - 1e-9));
      xs.push_back(x0 + edge * (1.0 + 1e-9));
    }
  }
  const DysonSpectrum s = dyson_first_order(p, xs);
  for (std::size_t j = 0; j < xs.size(); j += 7) {
    // |dM/dx| is of order T², about 2e5 here.
    for (int d = 0; d < 5; ++d) {
      CHECK(oracle::max_abs_diff(s.elements[j + d], s.elements[j + 2]) < 1e-3);
    }
    CHECK(oracle::max_abs_diff(s.elements[j + 5], s.elements[j + 6]) < 1e-8);
  }
}

TEST_CASE("spectrum scales with the mode factor and vanishes for short pulses") {
  TwoQubitParams p = calibrated();
  const std::vector<double> xs = {-0.7, 0.1};
  const DysonSpectrum one = dyson_first_order(p, xs, 1.0);
  const DysonSpectrum three = dyson_first_order(p, xs, 3.0);
  CHECK(oracle::max_abs_diff(three.elements[1], Matrix4c(3.0 * one.elements[1])) < 1e-10);
  CHECK(oracle::max_abs_diff(dyson_first_order(p, xs, 0.0).elements[0], Matrix4c::Zero()) == 0.0);

  p.duration = 1e-6;
  const DysonSpectrum tiny = dyson_first_order(p, xs);
  const Matrix4c expected = (-0.5 * p.duration) * lowering_operator().cast<Complex>();
  CHECK(oracle::max_abs_diff(tiny.elements[0], expected) < 1e-5 * p.duration);
}

TEST_CASE("lowering operator structure") {
  const Matrix4 l = lowering_operator();
  CHECK(l(index_of(B::S01), index_of(B::S11)) == 1.0);
  CHECK(l(index_of(B::S00), index_of(B::S10)) == 1.0);
  CHECK(l(index_of(B::S10), index_of(B::S11)) == 1.0);
  CHECK(l(index_of(B::S00), index_of(B::S01)) == 1.0);
  CHECK(l.sum() == 4.0);
}

TEST_CASE("largest plotted element and doubling") {
  TwoQubitParams p = calibrated();
  std::vector<double> xs;
  for (int j = 0; j <= 1750; ++j) xs.push_back(-2.5 + 0.002 * j);
  auto peak = [&](const TwoQubitParams& q, B from, B to, double* where = nullptr) {
    const auto e = dyson_first_order(q, xs).element(from, to);
    std::size_t arg = 0;
    for (std::size_t j = 1; j < e.size(); ++j) {
      if (std::abs(e[j]) > std::abs(e[arg])) arg = j;
    }
    if (where) *where = xs[arg];
    return std::abs(e[arg]);
  };
  double x0100 = 0.0;
  const double p0100 = peak(p, B::S01, B::S00, &x0100);
  for (const auto& [from, to] : kPlottedTransitions) {
    if (from == B::S01 && to == B::S00) continue;
    CHECK(peak(p, from, to) < p0100);
  }
  // The peak sits at ω̄ minus the |01⟩ → |00⟩ line frequency.
  const auto f = transition_frequencies(p);
  CHECK(std::abs(x0100 - (p.center_frequency - f[2])) < 0.005);

  p.duration *= 2.0;
  CHECK(peak(p, B::S01, B::S00) / p0100 == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("parameters are validated") {
  TwoQubitParams p;
  p.duration = 0.0;
  CHECK_THROWS_AS(p.validate(), fieldback::ValidationError);
  p = TwoQubitParams{};
  p.omega2 = 19.0;
  CHECK_THROWS_AS(p.validate(), fieldback::ValidationError);
  p = TwoQubitParams{};
  CHECK(p.regime_warnings().empty());
  p.omega2 = 20.5;
  CHECK_FALSE(p.regime_warnings().empty());
  const std::vector<double> bad = {std::nan("")};
  CHECK_THROWS_AS(dyson_first_order(calibrated(), bad), fieldback::ValidationError);
}

TEST_CASE("basis labels") {
  CHECK(std::string(label_of(B::S11)) == "11");
  CHECK(std::string(label_of(B::S00)) == "00");
}

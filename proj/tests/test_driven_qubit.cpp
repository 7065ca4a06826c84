#include <cmath>
#include <numbers>

#include <doctest.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "fieldback/driven_qubit.hpp"
#include "fieldback/errors.hpp"
#include "oracles.hpp"

using namespace fieldback;
using oracle::max_abs_diff;

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI{0.0, 1.0};

// Frame factor diag(e^{−iΔωt/2}, e^{iΔωt/2}) times exp(−iMt) with the
// rotating-frame generator M, evaluated by matrix exponential.
Gate2 expm_propagator(const PulseParams& p) {
  Gate2 m;
  m << -p.detuning / 2.0, p.rabi / 2.0 * std::exp(kI * p.phase),
      p.rabi / 2.0 * std::exp(-kI * p.phase), p.detuning / 2.0;
  const Gate2 v = (Gate2(-kI * p.duration * m)).exp();
  Gate2 frame = Gate2::Zero();
  frame(0, 0) = std::exp(-kI * p.detuning * p.duration / 2.0);
  frame(1, 1) = std::exp(kI * p.detuning * p.duration / 2.0);
  return frame * v;
}

Gate2 frame_free(const PulseParams& p) {
  Gate2 inverse = Gate2::Zero();
  inverse(0, 0) = std::exp(kI * p.detuning * p.duration / 2.0);
  inverse(1, 1) = std::exp(-kI * p.detuning * p.duration / 2.0);
  return inverse * classical_propagator(p);
}

PulseParams random_pulse() {
  PulseParams p;
  p.detuning = oracle::uniform(-5.0, 5.0);
  p.rabi = oracle::uniform(-5.0, 5.0);
  p.phase = oracle::uniform(-kPi, kPi);
  p.duration = oracle::uniform(0.0, 20.0);
  return p;
}

}  // namespace

TEST_CASE("resonant pi pulse flips the qubit") {
  PulseParams p{0.0, 1.0, 0.0, kPi, 0.0};
  const Gate2 u = classical_propagator(p);
  CHECK(std::abs(u(0, 0)) < 1e-12);
  CHECK(std::abs(u(1, 1)) < 1e-12);
  CHECK(std::abs(u(0, 1) - Complex(0.0, -1.0)) < 1e-12);
  CHECK(std::abs(u(1, 0) - Complex(0.0, -1.0)) < 1e-12);
}

TEST_CASE("zero duration gives the identity") {
  for (int n = 0; n < 50; ++n) {
    PulseParams p = random_pulse();
    p.duration = 0.0;
    CHECK(max_abs_diff(classical_propagator(p), Gate2::Identity()) < 1e-15);
  }
}

TEST_CASE("calibrated Walsh-Hadamard pulse") {
  const PulseParams p = walsh_hadamard_calibration(1.0);
  CHECK(p.detuning == doctest::Approx(1.0 / std::numbers::sqrt2).epsilon(1e-15));
  CHECK(p.rabi == doctest::Approx(-1.0 / std::numbers::sqrt2).epsilon(1e-15));
  CHECK(p.duration == doctest::Approx(kPi).epsilon(1e-15));
  CHECK(p.phase == 0.0);

  const Complex lo = std::exp(-kI * kPi / std::sqrt(8.0));
  const Complex hi = std::exp(kI * kPi / std::sqrt(8.0));
  Gate2 expected;
  expected << lo, lo, hi, -hi;
  expected *= kI / std::numbers::sqrt2;
  CHECK(max_abs_diff(classical_propagator(p), expected) < 1e-10);

  const Gate2 h = strip_phases(classical_propagator(p), hadamard());
  CHECK(max_abs_diff(h, hadamard()) < 1e-10);
  CHECK(max_abs_diff(h, Gate2(h.adjoint())) < 1e-10);
  CHECK(max_abs_diff(Gate2(h * h), Gate2::Identity()) < 1e-10);
}

TEST_CASE("calibration scales with the rate") {
  const PulseParams p1 = walsh_hadamard_calibration(1.0);
  const PulseParams p2 = walsh_hadamard_calibration(2.0);
  CHECK(p2.duration == doctest::Approx(kPi / 2.0));
  // Δω·t, κE·t are invariant, so the propagator is unchanged.
  CHECK(max_abs_diff(classical_propagator(p1), classical_propagator(p2)) < 1e-12);
  CHECK_THROWS_AS(walsh_hadamard_calibration(0.0), ValidationError);
  CHECK_THROWS_AS(walsh_hadamard_calibration(-1.0), ValidationError);
}

TEST_CASE("propagator matches the matrix exponential of the generator") {
  for (int n = 0; n < 500; ++n) {
    const PulseParams p = random_pulse();
    CHECK(max_abs_diff(classical_propagator(p), expm_propagator(p)) < 1e-10);
  }
}

TEST_CASE("unitarity over random pulses") {
  double worst = 0.0;
  for (int n = 0; n < 10000; ++n) worst = std::max(worst, unitarity_defect(classical_propagator(random_pulse())));
  CHECK(worst < 1e-10);
}

TEST_CASE("frame-corrected propagator composes in time") {
  for (int n = 0; n < 200; ++n) {
    PulseParams p = random_pulse();
    PulseParams a = p;
    PulseParams b = p;
    a.duration = oracle::uniform(0.0, 5.0);
    b.duration = oracle::uniform(0.0, 5.0);
    p.duration = a.duration + b.duration;
    CHECK(max_abs_diff(frame_free(p), Gate2(frame_free(b) * frame_free(a))) < 1e-10);
  }
}

TEST_CASE("eigenphases are plus and minus theta t") {
  for (int n = 0; n < 100; ++n) {
    const PulseParams p = random_pulse();
    const Gate2 v = frame_free(p);
    // Unitary with determinant 1: eigenvalues e^{±iθt}, so the trace is 2cos θt.
    CHECK(std::abs(v.determinant() - 1.0) < 1e-10);
    CHECK(std::abs(v.trace() - 2.0 * std::cos(p.tip_angle() * p.duration)) < 1e-10);
  }
}

TEST_CASE("invalid pulses are rejected") {
  PulseParams p{0.0, 1.0, 0.0, -1.0, 0.0};
  CHECK_THROWS_AS(classical_propagator(p), ValidationError);
  p.duration = 1.0;
  p.detuning = std::nan("");
  CHECK_THROWS_AS(classical_propagator(p), ValidationError);
}

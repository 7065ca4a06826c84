#include <cmath>
#include <complex>
#include <numbers>

#include <doctest.h>

#include "fieldback/g_functions.hpp"
#include "oracles.hpp"

using namespace fieldback;

namespace {

using LComplex = std::complex<long double>;
constexpr long double kPiL = 3.141592653589793238462643383279502884L;
const long double kSqrt2L = std::sqrt(2.0L);

// The four profiles written out directly from their defining expressions.
Complex direct(PhotonKind kind, double xd) {
  const long double x = xd;
  const LComplex e = std::exp(LComplex(0.0L, kPiL * x));
  const long double cubic = 2.0L * kSqrt2L * x * (x * x - 1.0L);
  LComplex g;
  switch (kind) {
    case PhotonKind::Alpha:
      g = ((-1.0L + x / kSqrt2L + 2.0L * x * x) + (1.0L + x / kSqrt2L) * e) / cubic;
      break;
    case PhotonKind::Beta:
      g = ((-1.0L - x / kSqrt2L) + (1.0L - x / kSqrt2L - 2.0L * x * x) * e) / cubic;
      break;
    case PhotonKind::Plus:
      g = -(1.0L + e) / (4.0L * (x * x - 1.0L));
      break;
    case PhotonKind::Minus:
      g = (3.0L * kSqrt2L + 4.0L * x) * (1.0L + e) / (4.0L * kSqrt2L * (x * x - 1.0L));
      break;
  }
  return {static_cast<double>(g.real()), static_cast<double>(g.imag())};
}

// Limits at the removable singularities (computed symbolically).
struct Limit {
  PhotonKind kind;
  double x;
  Complex value;
};
const double kS = std::numbers::sqrt2;
const double kP = std::numbers::pi;
const Limit kLimits[] = {
    {PhotonKind::Alpha, 0.0, {-0.5, -kS * kP / 4.0}},
    {PhotonKind::Alpha, 1.0, {kS / 2.0, -kS * kP * (1.0 + kS / 2.0) / 8.0}},
    {PhotonKind::Alpha, -1.0, {-kS / 2.0, -kS * kP * (1.0 - kS / 2.0) / 8.0}},
    {PhotonKind::Beta, 0.0, {0.5, -kS * kP / 4.0}},
    {PhotonKind::Beta, 1.0, {kS / 2.0, kS * kP * (1.0 + kS / 2.0) / 8.0}},
    {PhotonKind::Beta, -1.0, {-kS / 2.0, kS * kP * (1.0 - kS / 2.0) / 8.0}},
    {PhotonKind::Plus, 1.0, {0.0, kP / 8.0}},
    {PhotonKind::Plus, -1.0, {0.0, -kP / 8.0}},
    {PhotonKind::Minus, 1.0, {0.0, -kS * kP * (4.0 + 3.0 * kS) / 16.0}},
    {PhotonKind::Minus, -1.0, {0.0, kS * kP * (3.0 * kS - 4.0) / 16.0}},
};

double random_x() {
  double x = 0.0;
  do {
    x = oracle::uniform(-30.0, 30.0);
  } while (std::abs(x) < 1e-3 || std::abs(std::abs(x) - 1.0) < 1e-3);
  return x;
}

}  // namespace

TEST_CASE("values agree with the defining expressions away from the poles") {
  for (int n = 0; n < 1000; ++n) {
    const double x = random_x();
    for (PhotonKind k : kAllKinds) {
      const Complex ref = direct(k, x);
      CHECK(std::abs(g_value(k, x) - ref) < 1e-12 * std::max(1.0, std::abs(ref)));
    }
  }
}

TEST_CASE("beta is the conjugate partner of alpha") {
  for (int n = 0; n < 1000; ++n) {
    const double x = oracle::uniform(-30.0, 30.0);
    const Complex rhs = -std::exp(Complex(0.0, kP * x)) * std::conj(g_value(PhotonKind::Alpha, x));
    CHECK(std::abs(g_value(PhotonKind::Beta, x) - rhs) < 1e-12);
  }
}

TEST_CASE("minus is a rational multiple of plus") {
  for (int n = 0; n < 1000; ++n) {
    const double x = oracle::uniform(-30.0, 30.0);
    const Complex rhs = -((4.0 * x + 3.0 * kS) / kS) * g_value(PhotonKind::Plus, x);
    CHECK(std::abs(g_value(PhotonKind::Minus, x) - rhs) < 1e-12);
  }
}

TEST_CASE("removable singularities take their limits") {
  for (const auto& lim : kLimits) {
    CAPTURE(name_of(lim.kind));
    CAPTURE(lim.x);
    CHECK(std::abs(g_value(lim.kind, lim.x) - lim.value) < 1e-12);
    for (double h : {1e-12, 1e-9, 1e-6, 9e-5}) {
      CHECK(std::abs(g_value(lim.kind, lim.x + h) - g_value(lim.kind, lim.x)) < 1e-8 + 5.0 * h);
      CHECK(std::abs(g_value(lim.kind, lim.x - h) - g_value(lim.kind, lim.x)) < 1e-8 + 5.0 * h);
    }
    // Either side of the series radius the two evaluations must join.
    const double r = 1e-4;
    CHECK(std::abs(g_value(lim.kind, lim.x + r * (1 - 1e-9)) -
                   g_value(lim.kind, lim.x + r * (1 + 1e-9))) < 1e-8);
  }
}

TEST_CASE("plus and minus are regular at zero") {
  CHECK(std::abs(g_value(PhotonKind::Plus, 0.0) - Complex(0.5, 0.0)) < 1e-14);
  CHECK(std::abs(g_value(PhotonKind::Minus, 0.0) - Complex(-1.5, 0.0)) < 1e-14);
}

TEST_CASE("square pulse spectrum") {
  CHECK(std::abs(square_pulse_spectrum(0.0) - Complex(0.0, kP)) < 1e-14);
  for (double x : {-3.7, -1.0, 0.25, 2.0, 11.5}) {
    const Complex ref = (std::exp(Complex(0.0, kP * x)) - 1.0) / x;
    CHECK(std::abs(square_pulse_spectrum(x) - ref) < 1e-14);
  }
  CHECK(std::abs(square_pulse_spectrum(1e-7) - Complex(0.0, kP)) < 1e-6);
}

TEST_CASE("kinds have stable names") {
  CHECK(name_of(PhotonKind::Alpha) == "alpha");
  CHECK(name_of(PhotonKind::Beta) == "beta");
  CHECK(name_of(PhotonKind::Plus) == "plus");
  CHECK(name_of(PhotonKind::Minus) == "minus");
}

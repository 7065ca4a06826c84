#include "fieldback/driven_qubit.hpp"

#include <cmath>
#include <numbers>

#include "fieldback/errors.hpp"

namespace fieldback {

namespace {

// sin(θt)/θ, continuous at θ = 0.
double sin_over(double theta, double t) {
  const double arg = theta * t;
  if (std::abs(arg) < 1e-6) return t * (1.0 - arg * arg / 6.0);
  return std::sin(arg) / theta;
}

}  // namespace

double PulseParams::tip_angle() const {
  return std::sqrt(detuning * detuning + rabi * rabi) / 2.0;
}

void PulseParams::validate() const {
  require(std::isfinite(detuning), "detuning must be finite");
  require(std::isfinite(rabi), "rabi must be finite");
  require(std::isfinite(phase), "phase must be finite");
  require(std::isfinite(duration) && duration >= 0.0,
          "duration must be finite and >= 0");
  require(std::isfinite(tip_angle()), "tip angle must be finite");
}

Gate2 classical_propagator(const PulseParams& p) {
  p.validate();
  const Complex i{0.0, 1.0};
  const double t = p.duration;
  const double theta = p.tip_angle();
  const double c = std::cos(theta * t);
  const double s = sin_over(theta, t);
  const Complex frame_up = std::exp(i * (p.detuning * t / 2.0));
  const Complex frame_down = std::conj(frame_up);
  const Complex drive_up = (p.rabi / 2.0) * std::exp(-i * p.phase);

  const Complex u_alpha = frame_up * (c - i * s * (p.detuning / 2.0));
  const Complex u_beta = frame_down * (c + i * s * (p.detuning / 2.0));
  const Complex u_plus = -i * frame_up * s * drive_up;
  const Complex u_minus = -i * frame_down * s * std::conj(drive_up);

  Gate2 u;
  u(0, 0) = u_beta;
  u(0, 1) = u_minus;
  u(1, 0) = u_plus;
  u(1, 1) = u_alpha;
  return u;
}

PulseParams walsh_hadamard_calibration(double omega) {
  require(std::isfinite(omega) && omega > 0.0, "omega must be > 0");
  PulseParams p;
  p.detuning = omega / std::numbers::sqrt2;
  p.rabi = -omega / std::numbers::sqrt2;
  p.phase = 0.0;
  p.duration = std::numbers::pi / omega;
  return p;
}

Gate2 hadamard() {
  Gate2 h;
  h << 1.0, 1.0, 1.0, -1.0;
  return h / std::numbers::sqrt2;
}

Gate2 strip_phases(const Gate2& gate, const Gate2& pattern) {
  Gate2 out = gate;
  for (Eigen::Index r = 0; r < 2; ++r) {
    Eigen::Index c = 0;
    pattern.row(r).cwiseAbs().maxCoeff(&c);
    const Complex ratio = gate(r, c) / pattern(r, c);
    if (std::abs(ratio) == 0.0) continue;
    out.row(r) *= std::abs(ratio) / ratio;
  }
  return out;
}

double unitarity_defect(const Gate2& gate) {
  return (gate.adjoint() * gate - Gate2::Identity()).cwiseAbs().maxCoeff();
}

}  // namespace fieldback

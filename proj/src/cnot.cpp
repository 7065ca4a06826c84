#include "fieldback/cnot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <boost/math/tools/minima.hpp>

#include "fieldback/errors.hpp"

namespace fieldback::cnot {

namespace {

// Lab-frame energies of the drive-free pair: |11⟩, dressed |10⟩,
// dressed |01⟩, |00⟩, plus the dressed |10⟩ eigenvector (|10⟩, |01⟩ parts).
struct BareLevels {
  double e11, e10, e01, e00;
  Eigen::Vector2d dressed10;
};

BareLevels bare_levels(const TwoQubitParams& p) {
  const double j = p.coupling;
  Eigen::Matrix2d middle;
  middle << (p.omega1 - p.omega2) / 2.0 - j / 4.0, j / 2.0,
            j / 2.0, (p.omega2 - p.omega1) / 2.0 - j / 4.0;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> solver(middle);
  const auto& vals = solver.eigenvalues();
  const auto& vecs = solver.eigenvectors();
  // The dressed |10⟩ is the eigenvector with the larger |10⟩ component.
  const int i10 = std::abs(vecs(0, 0)) >= std::abs(vecs(0, 1)) ? 0 : 1;
  BareLevels out;
  out.e11 = (p.omega1 + p.omega2) / 2.0 + j / 4.0;
  out.e00 = -(p.omega1 + p.omega2) / 2.0 + j / 4.0;
  out.e10 = vals(i10);
  out.e01 = vals(1 - i10);
  out.dressed10 = vecs.col(i10);
  return out;
}

// (e^{iΔT} − 1)/(iΔ), continuous at Δ = 0.
Complex kernel(double delta, double duration) {
  const double z = delta * duration;
  if (std::abs(z) < 1e-3) {
    const Complex iz{0.0, z};
    return duration * (1.0 + iz / 2.0 + iz * iz / 6.0 + iz * iz * iz / 24.0 +
                       iz * iz * iz * iz / 120.0);
  }
  return (std::exp(Complex{0.0, z}) - 1.0) / Complex{0.0, delta};
}

}  // namespace

const char* label_of(BasisState s) {
  switch (s) {
    case BasisState::S11: return "11";
    case BasisState::S10: return "10";
    case BasisState::S01: return "01";
    case BasisState::S00: return "00";
  }
  return "?";
}

void TwoQubitParams::validate() const {
  for (double v : {omega1, omega2, coupling, rabi, center_frequency, duration}) {
    require(std::isfinite(v), "two-qubit parameters must be finite");
  }
  require(omega2 > omega1, "omega2 must exceed omega1");
  require(duration > 0.0, "duration T must be > 0");
}

std::vector<std::string> TwoQubitParams::regime_warnings() const {
  std::vector<std::string> out;
  // The quoted example itself has |ω1 − ω2| = 2.5 J, so only flag pairs
  // where the splitting no longer clearly exceeds the coupling.
  if (std::abs(omega1 - omega2) <= 2.0 * std::abs(coupling)) {
    std::ostringstream msg;
    msg << "|omega1 - omega2| = " << std::abs(omega1 - omega2) << " is not >> J = " << coupling;
    out.push_back(msg.str());
  }
  return out;
}

Matrix4 rotating_hamiltonian(const TwoQubitParams& p) {
  const double w = p.center_frequency;
  const double j = p.coupling;
  const double v = p.rabi / 2.0;
  Matrix4 h;
  h << (p.omega1 + p.omega2) / 2.0 - w + j / 4.0, v, v, 0.0,
       v, (p.omega1 - p.omega2) / 2.0 - j / 4.0, j / 2.0, v,
       v, j / 2.0, (-p.omega1 + p.omega2) / 2.0 - j / 4.0, v,
       0.0, v, v, -(p.omega1 + p.omega2) / 2.0 + w + j / 4.0;
  return h;
}

Eigensystem diagonalize(const TwoQubitParams& p) {
  Eigen::SelfAdjointEigenSolver<Matrix4> solver(rotating_hamiltonian(p));
  if (solver.info() != Eigen::Success) throw ConvergenceError("H_C1 diagonalization failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

Matrix4c classical_propagator(const TwoQubitParams& p, double t) {
  require(std::isfinite(t) && t >= 0.0, "propagation time must be >= 0");
  const Eigensystem es = diagonalize(p);
  Eigen::Vector4cd phases;
  for (int n = 0; n < 4; ++n) phases(n) = std::exp(Complex{0.0, -es.values(n) * t});
  const Matrix4c v = es.vectors.cast<Complex>();
  return v * phases.asDiagonal() * v.transpose();
}

std::array<double, 4> transition_frequencies(const TwoQubitParams& p) {
  const BareLevels lv = bare_levels(p);
  std::array<double, 4> out = {lv.e11 - lv.e10, lv.e11 - lv.e01, lv.e10 - lv.e00,
                               lv.e01 - lv.e00};
  std::sort(out.begin(), out.end());
  return out;
}

std::array<double, 4> perturbative_transition_frequencies(const TwoQubitParams& p) {
  const double j = p.coupling;
  const double shift = j * j / (4.0 * (p.omega1 - p.omega2));
  std::array<double, 4> out = {p.omega1 - j / 2.0 + shift, p.omega1 + j / 2.0 + shift,
                               p.omega2 - j / 2.0 - shift, p.omega2 + j / 2.0 - shift};
  std::sort(out.begin(), out.end());
  return out;
}

double transfer_amplitude(const TwoQubitParams& p) {
  const Matrix4c u = classical_propagator(p, p.duration);
  return std::abs(u(index_of(BasisState::S10), index_of(BasisState::S11)));
}

Calibration calibrate(const TwoQubitParams& p) {
  p.validate();
  require(p.rabi != 0.0, "calibration needs a nonzero drive rabi");
  const BareLevels lv = bare_levels(p);

  Calibration cal;
  cal.center_frequency = lv.e11 - lv.e10;

  // ⟨11| drive |dressed 10⟩ sets the effective Rabi frequency.
  const double coupling = 0.5 * p.rabi * (lv.dressed10(0) + lv.dressed10(1));
  cal.estimated_duration = std::numbers::pi / (2.0 * std::abs(coupling));

  TwoQubitParams trial = p;
  trial.center_frequency = cal.center_frequency;
  auto transfer_at = [&](double t) {
    trial.duration = t;
    return transfer_amplitude(trial);
  };

  constexpr int kScan = 2000;
  const double lo = 0.5 * cal.estimated_duration;
  const double hi = 1.5 * cal.estimated_duration;
  const double step = (hi - lo) / kScan;
  double best_t = lo;
  double best = -1.0;
  for (int s = 0; s <= kScan; ++s) {
    const double t = lo + step * s;
    const double v = transfer_at(t);
    if (v > best) {
      best = v;
      best_t = t;
    }
  }
  std::uintmax_t max_iter = 200;
  const auto refined = boost::math::tools::brent_find_minima(
      [&](double t) { return -transfer_at(t); }, best_t - step, best_t + step, 48, max_iter);
  cal.duration = refined.first;
  cal.transfer = -refined.second;

  std::ostringstream log;
  log.precision(10);
  log << "omega_bar = E(11) - E(dressed 10) = " << cal.center_frequency
      << "; effective coupling = " << coupling
      << "; pi-pulse estimate T0 = " << cal.estimated_duration
      << "; scanned [" << lo << ", " << hi << "] in " << kScan << " steps, Brent refined"
      << "; T = " << cal.duration << ", |<10|U_C(T)|11>| = " << cal.transfer
      << "; quoted reference T = " << kQuotedDuration << ", transfer " << kQuotedTransfer;
  cal.log = log.str();
  return cal;
}

Matrix4 lowering_operator() {
  Matrix4 l = Matrix4::Zero();
  const auto at = [&](BasisState to, BasisState from) -> double& {
    return l(index_of(to), index_of(from));
  };
  at(BasisState::S01, BasisState::S11) = 1.0;  // S_−
  at(BasisState::S00, BasisState::S10) = 1.0;  // S_−
  at(BasisState::S10, BasisState::S11) = 1.0;  // I_−
  at(BasisState::S00, BasisState::S01) = 1.0;  // I_−
  return l;
}

std::vector<Complex> DysonSpectrum::element(BasisState from, BasisState to) const {
  std::vector<Complex> out;
  out.reserve(elements.size());
  for (const auto& m : elements) out.push_back(m(index_of(to), index_of(from)));
  return out;
}

DysonSpectrum dyson_first_order(const TwoQubitParams& p, std::span<const double> offsets,
                                double mode_scale) {
  p.validate();
  require(std::isfinite(mode_scale), "mode_scale must be finite");
  for (double x : offsets) require(std::isfinite(x), "offset grid must be finite");

  const Eigensystem es = diagonalize(p);
  const Matrix4 l = lowering_operator();
  const double t = p.duration;

  // Projector products v_n v_nᵀ L v_m v_mᵀ with the fixed phase e^{iλ_n T}.
  std::array<Matrix4c, 16> weight;
  for (int n = 0; n < 4; ++n) {
    const Eigen::Vector4d vn = es.vectors.col(n);
    for (int m = 0; m < 4; ++m) {
      const Eigen::Vector4d vm = es.vectors.col(m);
      const double inner = vn.dot(l * vm);
      weight[4 * n + m] = (inner * (vn * vm.transpose())).cast<Complex>() *
                          std::exp(Complex{0.0, es.values(n) * t});
    }
  }

  DysonSpectrum out;
  out.offsets.assign(offsets.begin(), offsets.end());
  out.params = p;
  out.mode_scale = mode_scale;
  out.elements.reserve(offsets.size());
  for (double x : offsets) {
    Matrix4c acc = Matrix4c::Zero();
    for (int n = 0; n < 4; ++n) {
      for (int m = 0; m < 4; ++m) {
        acc += weight[4 * n + m] * kernel(x + es.values(m) - es.values(n), t);
      }
    }
    out.elements.push_back(-0.5 * mode_scale * acc);
  }
  return out;
}

}  // namespace fieldback::cnot

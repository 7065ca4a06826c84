#include "fieldback/grover.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "fieldback/errors.hpp"

namespace fieldback {

namespace {

constexpr double kPi = std::numbers::pi;

double dimension(int qubits) { return std::ldexp(1.0, qubits); }

// Applies the kind-resolved scattering operators on one qubit.
std::array<Register, 4> scatter(const Register& psi, int qubit,
                                const std::array<Gate2, 4>& kinds, double epsilon) {
  const Complex factor{0.0, -epsilon};
  std::array<Register, 4> out;
  for (int k = 0; k < 4; ++k) {
    out[k] = psi;
    out[k].apply_gate(qubit, factor * kinds[k]);
  }
  return out;
}

// ε²⟨ψ|Σ_{k,k'} G_{kk'} K_k† K_k'|ψ⟩ on one qubit: the norm lost by the
// vacuum branch through the second-order term of the same event.
double vacuum_loss(const Register& psi, int qubit, const std::array<Gate2, 4>& kinds,
                   const Matrix4c& gram, double epsilon) {
  Gate2 number = Gate2::Zero();
  for (int k = 0; k < 4; ++k) {
    for (int kp = 0; kp < 4; ++kp) number += gram(k, kp) * kinds[k].adjoint() * kinds[kp];
  }
  Register moved = psi;
  moved.apply_gate(qubit, number);
  Complex acc = 0.0;
  for (std::size_t x = 0; x < psi.size(); ++x) acc += std::conj(psi[x]) * moved[x];
  return epsilon * epsilon * acc.real();
}

// Gram-contracted weight of a branch on every basis state and on |y⟩.
std::pair<double, double> branch_weights(const std::array<Register, 4>& regs,
                                         std::uint64_t marked, const Matrix4c& gram) {
  double total = 0.0;
  double on_marked = 0.0;
  const std::size_t n = regs[0].size();
  for (std::size_t x = 0; x < n; ++x) {
    FieldVector v;
    for (int k = 0; k < 4; ++k) v(k) = regs[k][x];
    const double w = field_norm2(v, gram);
    total += w;
    if (x == marked) on_marked = w;
  }
  return {total, on_marked};
}

// Squared norm of the field state left on one qubit pair when the
// non-solution amplitude is `rest` and the marked amplitude is `solution`.
struct SlotElements {
  FieldVector e00, e01, e10, e11;
};

SlotElements elements(const ScatterOps& ops, Slot slot) {
  if (slot == Slot::A) {
    return {ops.a_element(0, 0), ops.a_element(0, 1), ops.a_element(1, 0), ops.a_element(1, 1)};
  }
  return {ops.b_element(0, 0), ops.b_element(0, 1), ops.b_element(1, 0), ops.b_element(1, 1)};
}

double pair_term(const SlotElements& e, const Matrix4c& gram, Contraction contraction) {
  if (contraction == Contraction::Sentence) {
    return field_norm2(e.e00 + e.e01, gram) + field_norm2(e.e10 + e.e11, gram);
  }
  return field_norm2(e.e00 + e.e10, gram) + field_norm2(e.e11 + e.e10, gram);
}

// Exact slot probability (divided by ε²) for a state with per-state
// non-solution amplitude `rest` and solution amplitude `solution`.
double slot_probability(const SlotElements& e, const Matrix4c& gram, Contraction contraction,
                        int qubits, int weight, double rest, double solution) {
  const double pairs = dimension(qubits - 1) - 1.0;
  double p = qubits * pairs * rest * rest * pair_term(e, gram, contraction);
  const double zero_bit = field_norm2(e.e00 * solution + e.e01 * rest, gram) +
                          field_norm2(e.e10 * solution + e.e11 * rest, gram);
  const double one_bit = field_norm2(e.e00 * rest + e.e01 * solution, gram) +
                         field_norm2(e.e10 * rest + e.e11 * solution, gram);
  p += (qubits - weight) * zero_bit + weight * one_bit;
  return p;
}

}  // namespace

void GroverConfig::validate(int max_qubits) const {
  require(qubits >= 1 && qubits <= max_qubits,
          "qubits K must be in [1, " + std::to_string(max_qubits) + "]");
  require(marked < (std::uint64_t{1} << qubits), "marked state y must be < 2^K");
  require(iterations >= 0, "iterations must be >= 0");
  require(std::isfinite(epsilon) && epsilon >= 0.0, "epsilon must be finite and >= 0");
}

std::pair<double, double> reduced_rotation(double a_y, double a_rest, int qubits) {
  require(qubits >= 1, "qubits K must be >= 1");
  const double n = dimension(qubits);
  const double diag = 1.0 - 2.0 / n;
  const double off = (2.0 / n) * std::sqrt(n - 1.0);
  return {diag * a_y + off * a_rest, -off * a_y + diag * a_rest};
}

double grover_angle(int qubits) {
  require(qubits >= 1, "qubits K must be >= 1");
  const double n = dimension(qubits);
  return std::asin(std::min(1.0, 2.0 * std::sqrt(n - 1.0) / n));
}

int optimal_iterations(int qubits) {
  require(qubits >= 2, "optimal_iterations needs K >= 2");
  const double horizon = kPi / (2.0 * grover_angle(qubits));
  return static_cast<int>(std::ceil(horizon - 0.5 - 1e-9));
}

std::vector<TrajectoryPoint> ideal_run(const GroverConfig& cfg) {
  cfg.validate(kMaxIdealQubits);
  Register psi = Register::uniform(cfg.qubits);
  std::vector<TrajectoryPoint> out;
  out.reserve(static_cast<std::size_t>(cfg.iterations) + 1);
  auto record = [&](int j) {
    const Complex a = psi[cfg.marked];
    out.push_back({j, a.real(), std::norm(a)});
  };
  record(0);
  for (int j = 1; j <= cfg.iterations; ++j) {
    psi.apply_oracle(cfg.marked);
    psi.apply_walsh_hadamard();
    psi.apply_zero_reflection();
    psi.apply_walsh_hadamard();
    record(j);
  }
  return out;
}

Register ideal_final_state(const GroverConfig& cfg) {
  cfg.validate(kMaxIdealQubits);
  Register psi = Register::uniform(cfg.qubits);
  for (int j = 1; j <= cfg.iterations; ++j) {
    psi.apply_oracle(cfg.marked);
    psi.apply_inversion_about_mean();
  }
  return psi;
}

const char* name_of(Slot s) { return s == Slot::A ? "A" : "B"; }

double DecoherentState::total_probability() const {
  double acc = 1.0 - vacuum_deficit;
  for (const auto& b : branches) acc += b.probability;
  return acc;
}

DecoherentRun decoherent_run(const GroverConfig& cfg, const OverlapTable& table,
                             BranchStorage storage) {
  cfg.validate(kMaxDecoherentQubits);
  require(cfg.epsilon > 0.0, "decoherent_run needs epsilon > 0");

  const ScatterOps ops = scattering_operators(table);
  const Matrix4c gram = gram_matrix(table);

  DecoherentRun run;
  ScatterReport& report = run.report;
  report.qubits = cfg.qubits;
  report.marked = cfg.marked;
  report.epsilon = cfg.epsilon;
  report.iterations = cfg.iterations;

  const double events = 2.0 * cfg.iterations * cfg.qubits;
  if (cfg.epsilon * cfg.epsilon * events > 0.1) {
    std::ostringstream msg;
    msg << "first-order validity: epsilon^2 * events = " << cfg.epsilon * cfg.epsilon * events
        << " exceeds 0.1";
    report.warnings.push_back(msg.str());
  }

  // Evolves a freshly spawned branch through the rest of the run.
  auto finish = [&](std::array<Register, 4>& regs, int iteration, Slot slot) {
    for (auto& r : regs) {
      if (slot == Slot::B) r.apply_inversion_about_mean();
      for (int j = iteration + 1; j <= cfg.iterations; ++j) {
        r.apply_oracle(cfg.marked);
        r.apply_inversion_about_mean();
      }
    }
  };

  auto spawn = [&](const Register& psi, int iteration, Slot slot, StepScatter& step) {
    const auto& kinds = slot == Slot::A ? ops.a : ops.b;
    for (int n = 0; n < cfg.qubits; ++n) {
      Branch branch;
      branch.iteration = iteration;
      branch.qubit = n;
      branch.slot = slot;
      run.state.vacuum_deficit += vacuum_loss(psi, n, kinds, gram, cfg.epsilon);
      auto regs = scatter(psi, n, kinds, cfg.epsilon);
      finish(regs, iteration, slot);
      std::tie(branch.probability, branch.success) = branch_weights(regs, cfg.marked, gram);
      if (storage == BranchStorage::Full) branch.registers = std::move(regs);
      report.per_event.push_back({iteration, n, slot, branch.probability});
      (slot == Slot::A ? step.slot_a : step.slot_b) += branch.probability;
      report.total_scatter += branch.probability;
      run.state.branches.push_back(std::move(branch));
    }
  };

  Register psi = Register::uniform(cfg.qubits);
  for (int j = 1; j <= cfg.iterations; ++j) {
    StepScatter step;
    step.iteration = j;
    psi.apply_oracle(cfg.marked);
    spawn(psi, j, Slot::B, step);
    psi.apply_inversion_about_mean();
    spawn(psi, j, Slot::A, step);
    step.success_ideal = std::norm(psi[cfg.marked]);
    report.per_step.push_back(step);
  }

  report.success_ideal = std::norm(psi[cfg.marked]);
  double success = (1.0 - report.total_scatter) * report.success_ideal;
  for (const auto& b : run.state.branches) success += b.success;
  report.success_decoherent = success;

  run.state.vacuum = std::move(psi);
  return run;
}

ScatterReport closed_form_scatter(const GroverConfig& cfg, const OverlapTable& table,
                                  const ClosedFormOptions& options) {
  cfg.validate(kMaxIdealQubits);
  require(cfg.qubits >= 2, "closed_form_scatter needs K >= 2");
  const ScatterOps ops = scattering_operators(table);
  const Matrix4c gram = gram_matrix(table);
  const SlotElements eb = elements(ops, Slot::B);
  const SlotElements ea = elements(ops, Slot::A);
  const int weight = hamming_weight(cfg.marked);
  const double eps2 = cfg.epsilon * cfg.epsilon;
  const double rest_norm = 1.0 / std::sqrt(dimension(cfg.qubits) - 1.0);

  ScatterReport report;
  report.qubits = cfg.qubits;
  report.marked = cfg.marked;
  report.epsilon = cfg.epsilon;
  report.iterations = cfg.iterations;

  const double theta = std::asin(std::pow(2.0, -0.5 * cfg.qubits));
  const double phi = grover_angle(cfg.qubits);
  report.success_ideal = std::pow(std::sin((2.0 * cfg.iterations + 1.0) * theta), 2);

  if (options.mode == ClosedFormMode::Asymptotic) {
    auto bracket = [&](const SlotElements& e) {
      const double zero_bit = field_norm2(e.e00, gram) + field_norm2(e.e10, gram);
      const double one_bit = field_norm2(e.e01, gram) + field_norm2(e.e11, gram);
      return 0.5 * cfg.qubits * pair_term(e, gram, options.contraction) +
             (cfg.qubits - weight) * zero_bit + weight * one_bit;
    };
    report.total_scatter = eps2 * (kPi / 8.0) * std::pow(2.0, 0.5 * cfg.qubits) *
                           (bracket(eb) + bracket(ea));
    return report;
  }

  for (int j = 1; j <= cfg.iterations; ++j) {
    double angle_b = 0.0;
    double angle_a = 0.0;
    if (options.angle == StepAngle::Exact) {
      angle_b = (2.0 * j - 1.0) * theta;
      angle_a = (2.0 * j + 1.0) * theta;
    } else {
      angle_b = j * phi;
      angle_a = (j + 1.0) * phi;
    }
    StepScatter step;
    step.iteration = j;
    step.slot_b = eps2 * slot_probability(eb, gram, options.contraction, cfg.qubits, weight,
                                          std::cos(angle_b) * rest_norm, -std::sin(angle_b));
    step.slot_a = eps2 * slot_probability(ea, gram, options.contraction, cfg.qubits, weight,
                                          std::cos(angle_a) * rest_norm, std::sin(angle_a));
    step.success_ideal = std::pow(std::sin((2.0 * j + 1.0) * theta), 2);
    report.total_scatter += step.slot_b + step.slot_a;
    report.per_step.push_back(step);
  }
  return report;
}

AsymptoticCoefficients asymptotic_coefficients(const OverlapTable& table,
                                               Contraction contraction) {
  const ScatterOps ops = scattering_operators(table);
  const Matrix4c gram = gram_matrix(table);
  double per_qubit = 0.0;
  double per_weight = 0.0;
  for (Slot slot : {Slot::B, Slot::A}) {
    const SlotElements e = elements(ops, slot);
    const double zero_bit = field_norm2(e.e00, gram) + field_norm2(e.e10, gram);
    const double one_bit = field_norm2(e.e01, gram) + field_norm2(e.e11, gram);
    per_qubit += 0.5 * pair_term(e, gram, contraction) + zero_bit;
    per_weight += one_bit - zero_bit;
  }
  // ε²(π/8)2^{K/2}[…] = 64 ε² 2^{K/2} (π/512)[…]
  constexpr double kScale = kPi / 512.0;
  return {kScale * per_qubit, kScale * per_weight};
}

ResidualProjection residual_projection(const OverlapTable& table) {
  using K = PhotonKind;
  const Complex num = table.norm(K::Beta) + table.overlap(K::Beta, K::Plus) +
                      table.overlap(K::Minus, K::Beta) + table.overlap(K::Minus, K::Plus);
  const double den = std::sqrt(table.norm(K::Beta) + table.norm(K::Minus) +
                               2.0 * table.overlap(K::Beta, K::Minus).real());
  ResidualProjection out;
  out.recomputed = num / den;
  return out;
}

}  // namespace fieldback

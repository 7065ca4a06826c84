#include "fieldback/register.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "fieldback/errors.hpp"

namespace fieldback {

namespace {

void check_qubits(int qubits) {
  require(qubits >= 1 && qubits <= Register::kMaxQubits,
          "qubit count K must be in [1, " + std::to_string(Register::kMaxQubits) + "]");
}

}  // namespace

Register::Register(int qubits) : qubits_(qubits) {
  check_qubits(qubits);
  amps_.assign(std::size_t{1} << qubits, Complex{0.0});
  amps_[0] = 1.0;
}

Register::Register(int qubits, std::vector<Complex> amplitudes)
    : qubits_(qubits), amps_(std::move(amplitudes)) {
  check_qubits(qubits);
  require(amps_.size() == (std::size_t{1} << qubits), "amplitude count must be 2^K");
}

Register Register::uniform(int qubits) {
  check_qubits(qubits);
  const std::size_t n = std::size_t{1} << qubits;
  return Register(qubits, std::vector<Complex>(n, Complex{1.0 / std::sqrt(double(n))}));
}

double Register::norm2() const {
  double acc = 0.0;
  for (const auto& a : amps_) acc += std::norm(a);
  return acc;
}

void Register::apply_oracle(std::uint64_t marked) {
  require(marked < amps_.size(), "marked state y must be < 2^K");
  amps_[marked] = -amps_[marked];
}

void Register::apply_zero_reflection() {
  for (std::size_t x = 1; x < amps_.size(); ++x) amps_[x] = -amps_[x];
}

void Register::apply_walsh_hadamard() {
  static const Gate2 h = hadamard();
  for (int n = 0; n < qubits_; ++n) apply_gate(n, h);
}

void Register::apply_inversion_about_mean() {
  Complex sum = 0.0;
  for (const auto& a : amps_) sum += a;
  const Complex twice_mean = 2.0 * sum / static_cast<double>(amps_.size());
  for (auto& a : amps_) a = twice_mean - a;
}

void Register::apply_gate(int qubit, const Gate2& gate) {
  require(qubit >= 0 && qubit < qubits_, "qubit index out of range");
  const std::size_t stride = std::size_t{1} << qubit;
  for (std::size_t base = 0; base < amps_.size(); base += 2 * stride) {
    for (std::size_t x0 = base; x0 < base + stride; ++x0) {
      const std::size_t x1 = x0 + stride;
      const Complex c0 = amps_[x0];
      const Complex c1 = amps_[x1];
      amps_[x0] = gate(0, 0) * c0 + gate(0, 1) * c1;
      amps_[x1] = gate(1, 0) * c0 + gate(1, 1) * c1;
    }
  }
}

int hamming_weight(std::uint64_t x) { return std::popcount(x); }

}  // namespace fieldback

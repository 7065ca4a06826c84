#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fieldback/driven_qubit.hpp"

namespace fieldback {

/// State vector of K qubits over the product basis |x⟩, x = 0 … 2^K − 1.
/// Bit n of x is the value of qubit n (qubit 0 least significant).
///
/// Physical registers are normalized; scattering branches reuse the type
/// for their ε-scaled, unnormalized components.
class Register {
 public:
  static constexpr int kMaxQubits = 20;

  Register() = default;
  /// |0…0⟩.
  explicit Register(int qubits);
  Register(int qubits, std::vector<Complex> amplitudes);

  /// Σ_x |x⟩ / √(2^K).
  static Register uniform(int qubits);

  int qubits() const { return qubits_; }
  std::size_t size() const { return amps_.size(); }
  Complex operator[](std::size_t x) const { return amps_[x]; }
  Complex& operator[](std::size_t x) { return amps_[x]; }
  std::span<const Complex> amplitudes() const { return amps_; }

  double norm2() const;

  /// O = 1 − 2|y⟩⟨y|.
  void apply_oracle(std::uint64_t marked);
  /// R = −1 + 2|0⟩⟨0|.
  void apply_zero_reflection();
  /// W = ⊗_n H(n), applied qubit by qubit.
  void apply_walsh_hadamard();
  /// W R W = −1 + 2|s⟩⟨s| in one O(2^K) pass.
  void apply_inversion_about_mean();
  /// Applies `gate` to qubit n.
  void apply_gate(int qubit, const Gate2& gate);

 private:
  int qubits_ = 0;
  std::vector<Complex> amps_;
};

int hamming_weight(std::uint64_t x);

}  // namespace fieldback

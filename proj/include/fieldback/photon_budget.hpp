#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace fieldback::budget {

inline constexpr double kPlanck = 6.62607e-34;      ///< J·s
inline constexpr double kSpeedOfLight = 2.99792e8;  ///< m/s

enum class CarrierUnit { Hertz, Meters };

struct PlatformPreset {
  std::string name;
  double power_w = 0.0;
  double duration_s = 0.0;
  double carrier = 0.0;
  CarrierUnit carrier_unit = CarrierUnit::Hertz;
  double ensemble = 1.0;  ///< M, number of independent computers

  double frequency_hz() const;
  void validate() const;
};

/// Be⁺ ion trap, NMR and ESR.
const std::vector<PlatformPreset>& builtin_presets();

/// Looks up a built-in preset by name ("ion-trap", "nmr", "esr").
PlatformPreset find_preset(const std::string& name);

/// Reads presets from a JSON object keyed by preset name, e.g.
/// {"nmr": {"power_w": 100, "duration_s": 1e-5, "frequency_hz": 1e8}}.
/// Exactly one of frequency_hz / wavelength_m is required; ensemble is
/// optional. Unknown keys are rejected.
std::vector<PlatformPreset> load_presets(const std::filesystem::path& path);
std::vector<PlatformPreset> parse_presets(const std::string& text);

/// power × duration / (h ν).
double photons_per_pulse(const PlatformPreset& p);

/// 0.2 K 2^{K/2} M / N_ph.
double decoherence_probability(int qubits, double photons, double ensemble = 1.0);

/// Largest K with decoherence_probability(K) ≤ threshold; 0 if none.
int max_qubits(double photons, double ensemble = 1.0, double threshold = 1.0);

struct BudgetReport {
  std::string name;
  double photons = 0.0;
  double ensemble = 1.0;
  double threshold = 1.0;
  int max_qubits = 0;
  double probability_at_max = 0.0;
  bool breakdown = false;  ///< probability above 1 at the reported K
};

BudgetReport report(const PlatformPreset& p, double threshold = 1.0);
BudgetReport report(std::string name, double photons, double ensemble, double threshold);

}  // namespace fieldback::budget

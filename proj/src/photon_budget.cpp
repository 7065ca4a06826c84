#include "fieldback/photon_budget.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fieldback/errors.hpp"

namespace fieldback::budget {

namespace {

// 2^{K/2} overflows a double near K = 2046; nothing physical gets close.
constexpr int kSearchLimit = 2000;

bool positive(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

double PlatformPreset::frequency_hz() const {
  return carrier_unit == CarrierUnit::Hertz ? carrier : kSpeedOfLight / carrier;
}

void PlatformPreset::validate() const {
  require(!name.empty(), "preset name must be non-empty");
  require(positive(power_w), "preset '" + name + "': power_w must be > 0");
  require(positive(duration_s), "preset '" + name + "': duration_s must be > 0");
  require(positive(carrier), "preset '" + name + "': carrier must be > 0");
  require(std::isfinite(ensemble) && ensemble >= 1.0,
          "preset '" + name + "': ensemble must be >= 1");
}

const std::vector<PlatformPreset>& builtin_presets() {
  static const std::vector<PlatformPreset> presets = {
      {"ion-trap", 1e-3, 1e-4, 300e-9, CarrierUnit::Meters, 1.0},
      {"nmr", 100.0, 1e-5, 1e8, CarrierUnit::Hertz, 1.0},
      {"esr", 1e3, 1e-8, 1e10, CarrierUnit::Hertz, 1.0},
  };
  return presets;
}

PlatformPreset find_preset(const std::string& name) {
  for (const auto& p : builtin_presets()) {
    if (p.name == name) return p;
  }
  throw ValidationError("unknown preset '" + name + "' (expected ion-trap, nmr or esr)");
}

std::vector<PlatformPreset> parse_presets(const std::string& text) {
  nlohmann::ordered_json doc;
  try {
    doc = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("presets file: ") + e.what());
  }
  require(doc.is_object(), "presets file must hold a JSON object keyed by preset name");

  std::vector<PlatformPreset> out;
  for (const auto& [name, body] : doc.items()) {
    require(body.is_object(), "preset '" + name + "' must be an object");
    PlatformPreset p;
    p.name = name;
    bool has_carrier = false;
    for (const auto& [key, value] : body.items()) {
      require(value.is_number(), "preset '" + name + "': " + key + " must be a number");
      const double v = value.get<double>();
      if (key == "power_w") {
        p.power_w = v;
      } else if (key == "duration_s") {
        p.duration_s = v;
      } else if (key == "frequency_hz" || key == "wavelength_m") {
        require(!has_carrier, "preset '" + name + "': give frequency_hz or wavelength_m, not both");
        has_carrier = true;
        p.carrier = v;
        p.carrier_unit = key == "frequency_hz" ? CarrierUnit::Hertz : CarrierUnit::Meters;
      } else if (key == "ensemble") {
        p.ensemble = v;
      } else {
        throw ValidationError("preset '" + name + "': unknown key '" + key + "'");
      }
    }
    require(has_carrier, "preset '" + name + "': frequency_hz or wavelength_m is required");
    p.validate();
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<PlatformPreset> load_presets(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), "cannot read presets file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_presets(buf.str());
}

double photons_per_pulse(const PlatformPreset& p) {
  p.validate();
  return p.power_w * p.duration_s / (kPlanck * p.frequency_hz());
}

double decoherence_probability(int qubits, double photons, double ensemble) {
  require(qubits >= 1, "qubits K must be >= 1");
  require(positive(photons), "photon count must be > 0");
  require(positive(ensemble), "ensemble M must be > 0");
  return 0.2 * qubits * std::exp2(qubits / 2.0) * ensemble / photons;
}

int max_qubits(double photons, double ensemble, double threshold) {
  require(positive(photons), "photon count must be > 0");
  require(positive(ensemble), "ensemble M must be > 0");
  require(photons / ensemble > 1.0, "photons per computer N_ph/M must be > 1");
  require(positive(threshold), "threshold must be > 0");
  int k = 0;
  while (k < kSearchLimit && decoherence_probability(k + 1, photons, ensemble) <= threshold) ++k;
  return k;
}

BudgetReport report(std::string name, double photons, double ensemble, double threshold) {
  BudgetReport r;
  r.name = std::move(name);
  r.photons = photons;
  r.ensemble = ensemble;
  r.threshold = threshold;
  r.max_qubits = max_qubits(photons, ensemble, threshold);
  r.probability_at_max =
      r.max_qubits >= 1 ? decoherence_probability(r.max_qubits, photons, ensemble) : 0.0;
  r.breakdown = r.probability_at_max > 1.0;
  return r;
}

BudgetReport report(const PlatformPreset& p, double threshold) {
  return report(p.name, photons_per_pulse(p), p.ensemble, threshold);
}

}  // namespace fieldback::budget

#include "qcdsim/presets.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace qcdsim {
namespace {

struct EmbeddedPreset {
  const char* name;
  const char* text;
};

constexpr EmbeddedPreset kEmbedded[] = {
#include "qcdsim/preset_data.inc"
};

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

struct Quantity {
  double value = 0.0;
  std::string unit;
  std::string note;
  std::string literal;
};

Quantity parse_quantity(std::string_view text, const std::string& key) {
  Quantity q;
  std::string body(text);
  if (const auto semi = body.find(';'); semi != std::string::npos) {
    q.note = trim(std::string_view(body).substr(semi + 1));
    body = body.substr(0, semi);
  }
  body = trim(body);
  const char* begin = body.data();
  const char* end = body.data() + body.size();
  auto [ptr, ec] = std::from_chars(begin, end, q.value);
  if (ec != std::errc{}) {
    throw std::invalid_argument("preset: key '" + key + "' has no numeric value");
  }
  q.literal.assign(begin, ptr);
  q.unit = trim(std::string_view(ptr, static_cast<std::size_t>(end - ptr)));
  return q;
}

constexpr double kHbar = 1.054571817e-34;
constexpr double kBoltzmann = 1.380649e-23;

}  // namespace

double to_si(double value, std::string_view unit) {
  static const std::map<std::string, double, std::less<>> kScale = {
      {"", 1.0},
      {"2pi Hz", 2.0 * kPi},
      {"2pi kHz", 2.0 * kPi * 1e3},
      {"2pi MHz", 2.0 * kPi * 1e6},
      {"2pi GHz", 2.0 * kPi * 1e9},
      {"1/s", 1.0},
      {"1/ms", 1e3},
      {"1/us", 1e6},
      {"K", 1.0},
      {"mK", 1e-3},
      {"nm", 1e-9},
      {"1/m", 1.0},
      {"mT", 1.0},
      {"2pi MHz/mT", 2.0 * kPi * 1e6},
  };
  auto it = kScale.find(unit);
  if (it == kScale.end()) {
    throw std::invalid_argument("unknown unit '" + std::string(unit) + "'");
  }
  return value * it->second;
}

double hbar_omega_over_kT(double omega, double temperature) {
  if (!(temperature > 0.0)) throw std::domain_error("temperature must be positive");
  return kHbar * omega / (kBoltzmann * temperature);
}

bool PlatformPreset::has_raw(std::string_view key) const {
  return std::any_of(raw.begin(), raw.end(), [&](const auto& r) { return r.name == key; });
}

double PlatformPreset::raw_si(std::string_view key) const {
  for (const auto& r : raw) {
    if (r.name == key) return to_si(r.value, r.unit);
  }
  throw std::out_of_range("preset " + name + ": no raw parameter '" + std::string(key) + "'");
}

PlatformPreset parse_preset(std::string_view text) {
  std::map<std::string, Quantity> normalized;
  PlatformPreset preset{.name = {},
                        .description = {},
                        .reference_label = {},
                        .reference_rate = 1.0,
                        .raw = {},
                        .quotes = {},
                        .normalized = SystemConfig(CouplingProfile::constant(0.0, 0.0), {})};
  RateMode mode = RateMode::standard;

  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped.front() == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("preset line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(std::string_view(stripped).substr(0, eq));
    const std::string value = trim(std::string_view(stripped).substr(eq + 1));
    if (key == "name") {
      preset.name = value;
    } else if (key == "description") {
      preset.description = value;
    } else if (key == "reference") {
      preset.reference_label = value;
    } else if (key == "reference_rate") {
      const Quantity q = parse_quantity(value, key);
      preset.reference_rate = to_si(q.value, q.unit);
    } else if (key == "mode") {
      mode = rate_mode_from_string(value);
    } else if (key.starts_with("raw.")) {
      const Quantity q = parse_quantity(value, key);
      preset.raw.push_back({key.substr(4), q.value, q.unit, q.note, q.literal});
    } else if (key.starts_with("normalized.")) {
      normalized[key.substr(11)] = parse_quantity(value, key);
    } else if (key.starts_with("quote.")) {
      const Quantity q = parse_quantity(value, key);
      PresetQuote quote{key.substr(6), q.value, q.unit, q.note, false, q.literal};
      quote.discrepant = q.note.starts_with("discrepant");
      preset.quotes.push_back(std::move(quote));
    } else {
      throw std::invalid_argument("preset line " + std::to_string(lineno) + ": unknown key '" +
                                  key + "'");
    }
  }

  const auto norm = [&](const char* key) {
    auto it = normalized.find(key);
    if (it == normalized.end()) {
      throw std::invalid_argument("preset " + preset.name + ": missing normalized." + key);
    }
    const Quantity& q = it->second;
    if (q.unit.empty() || q.unit == preset.reference_label) return q.value;
    return to_si(q.value, q.unit) / preset.reference_rate;
  };

  RateInputs rates;
  rates.kappa = norm("kappa");
  rates.gamma1 = norm("Gamma1");
  rates.gamma2 = norm("Gamma2");
  rates.Na = norm("Na");
  rates.Nq = norm("Nq");
  rates.mode = mode;
  preset.normalized = SystemConfig(CouplingProfile::constant(norm("g0"), norm("nu")), rates);
  return preset;
}

std::vector<std::string> platform_names() {
  std::vector<std::string> names;
  for (const auto& e : kEmbedded) names.emplace_back(e.name);
  return names;
}

PlatformPreset platform_preset(std::string_view name) {
  for (const auto& e : kEmbedded) {
    if (name == e.name) return parse_preset(e.text);
  }
  throw std::invalid_argument("unknown platform '" + std::string(name) + "'");
}

double preset_quantity(const SystemConfig& config, std::string_view q) {
  const RateInputs& r = config.rates();
  const DerivedRates& d = config.derived();
  if (q == "g_max") return config.profile().g0();
  if (q == "nu") return config.profile().nu();
  if (q == "kappa") return r.kappa;
  if (q == "Na") return r.Na;
  if (q == "Nq") return r.Nq;
  if (q == "kappa_Na") return r.kappa * r.Na;
  if (q == "Gamma1") return r.gamma1;
  if (q == "Gamma2") return r.gamma2;
  if (q == "gamma") return d.gamma;
  if (q == "Gamma_c") return d.Gamma_c;
  if (q == "Gamma_h") return d.Gamma_h;
  if (q == "gamma1") return d.gamma1_eff.value_or(0.0);
  if (q == "gamma2") return d.gamma2_eff.value_or(0.0);
  throw std::invalid_argument("unknown preset quantity '" + std::string(q) + "'");
}

std::vector<QuoteCheck> check_quotes(const PlatformPreset& preset) {
  std::vector<QuoteCheck> out;
  for (const auto& quote : preset.quotes) {
    double computed = preset_quantity(preset.normalized, quote.quantity);
    const bool occupation = quote.quantity == "Na" || quote.quantity == "Nq";
    if (!quote.unit.empty() && quote.unit != preset.reference_label && !occupation) {
      // normalized rate -> SI -> quote unit
      computed = computed * preset.reference_rate / to_si(1.0, quote.unit);
    }
    QuoteCheck c;
    c.quote = quote;
    c.computed = computed;
    c.rel_deviation = quote.value != 0.0 ? std::abs(computed - quote.value) / std::abs(quote.value)
                                         : std::abs(computed);
    c.within_tolerance = c.rel_deviation <= kPresetTolerance;
    out.push_back(c);
  }
  return out;
}

}  // namespace qcdsim

#include "qcdsim/run_config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "qcdsim/presets.hpp"

namespace qcdsim {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

double parse_double(std::string_view text) {
  const std::string t = trim(text);
  double v = 0.0;
  const char* end = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(t.data(), end, v);
  if (ec != std::errc{} || ptr != end || t.empty()) {
    throw std::invalid_argument("'" + t + "' is not a number");
  }
  if (!std::isfinite(v)) throw std::invalid_argument("'" + t + "' is not finite");
  return v;
}

int parse_int(std::string_view text) {
  const std::string t = trim(text);
  int v = 0;
  const char* end = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(t.data(), end, v);
  if (ec != std::errc{} || ptr != end || t.empty()) {
    throw std::invalid_argument("'" + t + "' is not an integer");
  }
  return v;
}

const std::set<std::string, std::less<>>& known_keys() {
  static const std::set<std::string, std::less<>> keys = {
      "platform",        "profile.kind",     "profile.g0",      "profile.nu",
      "profile.segments", "profile.samples", "rates.kappa",     "rates.gamma1",
      "rates.gamma2",    "rates.Na",         "rates.Nq",        "rates.mode",
      "initial.state",   "initial.file",     "initial.Na",      "times.list",
      "times.start",     "times.stop",       "times.count",     "grid.pattern",
      "grid.extent",     "grid.counts",      "solver.method",   "oracle.mode",
      "oracle.points",   "oracle.cutoff",    "oracle.tolerance", "output.path",
      "output.format",   "scan.Na",          "scan.g0t",        "scan.g0",
      "scan.kappa",      "scan.gamma",       "scan.oracle_max_Na", "wigner.file",
      "wigner.alpha",    "wigner.state"};
  return keys;
}

InitialKind initial_kind_from_string(std::string_view s) {
  if (s == "plus-thermal") return InitialKind::plus_thermal;
  if (s == "excited-thermal") return InitialKind::excited_thermal;
  if (s == "ground-thermal") return InitialKind::ground_thermal;
  if (s == "custom-cmatrix-file") return InitialKind::custom_cmatrix_file;
  throw std::invalid_argument("unknown initial state '" + std::string(s) + "'");
}

WignerTarget wigner_target_from_string(std::string_view s) {
  if (s == "reduced") return WignerTarget::reduced;
  if (s == "plus") return WignerTarget::plus;
  if (s == "minus") return WignerTarget::minus;
  throw std::invalid_argument("unknown wigner state '" + std::string(s) + "'");
}

}  // namespace

std::string_view to_string(InitialKind k) {
  switch (k) {
    case InitialKind::plus_thermal:
      return "plus-thermal";
    case InitialKind::excited_thermal:
      return "excited-thermal";
    case InitialKind::ground_thermal:
      return "ground-thermal";
    case InitialKind::custom_cmatrix_file:
      return "custom-cmatrix-file";
  }
  return "plus-thermal";
}

std::string_view to_string(OracleMode m) {
  switch (m) {
    case OracleMode::off:
      return "off";
    case OracleMode::check:
      return "check";
    case OracleMode::full:
      return "full";
  }
  return "off";
}

OracleMode oracle_mode_from_string(std::string_view s) {
  if (s == "off") return OracleMode::off;
  if (s == "check") return OracleMode::check;
  if (s == "full") return OracleMode::full;
  throw std::invalid_argument("unknown oracle mode '" + std::string(s) + "'");
}

std::vector<double> parse_number_list(std::string_view text) {
  const std::string t = trim(text);
  if (t.empty()) throw std::invalid_argument("empty number list");
  if (t.find(':') != std::string::npos) {
    const auto parts = split(t, ':');
    if (parts.size() != 3) throw std::invalid_argument("range must be start:stop:count");
    const double a = parse_double(parts[0]);
    const double b = parse_double(parts[1]);
    const int n = parse_int(parts[2]);
    if (n < 1) throw std::invalid_argument("range count must be >= 1");
    if (n == 1) return {a};
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = a + (b - a) * i / (n - 1);
    out.back() = b;
    return out;
  }
  std::vector<double> out;
  for (const auto& part : split(t, ',')) out.push_back(parse_double(part));
  return out;
}

RunConfig parse_run_config(std::string_view text, std::string_view source) {
  RunConfig cfg;
  cfg.source = std::string(source);
  cfg.scan.Na = parse_number_list("0:30:50");
  cfg.scan.g0t = parse_number_list("0.06:3:50");

  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& key, const std::string& what) -> ConfigError {
    return ConfigError(std::string(source) + ":" + std::to_string(lineno) + ": " +
                       (key.empty() ? what : "key '" + key + "': " + what));
  };

  std::optional<double> t_start, t_stop;
  std::optional<int> t_count;
  bool have_list = false;
  while (std::getline(in, line)) {
    ++lineno;
    std::string body = line;
    if (const auto hash = body.find('#'); hash != std::string::npos) body.resize(hash);
    body = trim(body);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw fail("", "expected 'key = value'");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (!known_keys().contains(key)) throw fail(key, "unknown key");
    if (cfg.overrides.contains(key)) throw fail(key, "duplicate key");
    if (value.empty()) throw fail(key, "empty value");
    cfg.overrides[key] = value;
    cfg.lines[key] = lineno;

    try {
      if (key == "platform") {
        platform_preset(value);
        cfg.platform = value;
      } else if (key == "profile.kind") {
        if (value != "constant" && value != "piecewise" && value != "sampled") {
          throw std::invalid_argument("expected constant, piecewise or sampled");
        }
      } else if (key == "profile.g0" || key == "profile.nu" || key.starts_with("rates.")) {
        if (key == "rates.mode") {
          rate_mode_from_string(value);
        } else {
          parse_double(value);
        }
      } else if (key == "profile.segments") {
        for (const auto& seg : split(value, ',')) {
          if (split(seg, ':').size() != 3) throw std::invalid_argument("segment must be start:end:amplitude");
          for (const auto& x : split(seg, ':')) parse_double(x);
        }
      } else if (key == "profile.samples") {
        for (const auto& smp : split(value, ',')) {
          if (split(smp, ':').size() != 2) throw std::invalid_argument("sample must be t:amplitude");
          for (const auto& x : split(smp, ':')) parse_double(x);
        }
      } else if (key == "initial.state") {
        cfg.initial = initial_kind_from_string(value);
      } else if (key == "initial.file") {
        cfg.initial_file = value;
      } else if (key == "initial.Na") {
        cfg.initial_Na = parse_double(value);
        if (*cfg.initial_Na < 0.0) throw std::invalid_argument("must be >= 0");
      } else if (key == "times.list") {
        cfg.times = parse_number_list(value);
        have_list = true;
      } else if (key == "times.start") {
        t_start = parse_double(value);
      } else if (key == "times.stop") {
        t_stop = parse_double(value);
      } else if (key == "times.count") {
        t_count = parse_int(value);
      } else if (key == "grid.pattern") {
        if (!cfg.grid) cfg.grid = GridSpec{};
        cfg.grid->pattern = grid_pattern_from_string(value);
      } else if (key == "grid.extent") {
        if (!cfg.grid) cfg.grid = GridSpec{};
        cfg.grid->extent = parse_double(value);
      } else if (key == "grid.counts") {
        if (!cfg.grid) cfg.grid = GridSpec{};
        cfg.grid->counts = parse_int(value);
      } else if (key == "solver.method") {
        cfg.method = solver_method_from_string(value);
      } else if (key == "oracle.mode") {
        cfg.oracle = oracle_mode_from_string(value);
      } else if (key == "oracle.points") {
        cfg.oracle_points = parse_int(value);
        if (cfg.oracle_points < 1) throw std::invalid_argument("must be >= 1");
      } else if (key == "oracle.cutoff") {
        cfg.oracle_cutoff = parse_int(value);
        if (*cfg.oracle_cutoff < 1) throw std::invalid_argument("must be >= 1");
      } else if (key == "oracle.tolerance") {
        cfg.oracle_tolerance = parse_double(value);
        if (!(cfg.oracle_tolerance > 0.0)) throw std::invalid_argument("must be > 0");
      } else if (key == "output.path") {
        cfg.output_path = value;
      } else if (key == "output.format") {
        if (value != "table" && value != "csv") throw std::invalid_argument("expected table or csv");
        cfg.output_format = value;
      } else if (key == "scan.Na") {
        cfg.scan.Na = parse_number_list(value);
      } else if (key == "scan.g0t") {
        cfg.scan.g0t = parse_number_list(value);
      } else if (key == "scan.g0") {
        cfg.scan.g0 = parse_double(value);
      } else if (key == "scan.kappa") {
        cfg.scan.kappa = parse_double(value);
      } else if (key == "scan.gamma") {
        cfg.scan.gamma = parse_double(value);
      } else if (key == "scan.oracle_max_Na") {
        cfg.scan.oracle_max_Na = parse_double(value);
      } else if (key == "wigner.file") {
        cfg.wigner_file = value;
      } else if (key == "wigner.alpha") {
        const auto parts = split(value, ',');
        if (parts.size() != 2) throw std::invalid_argument("expected 're, im'");
        cfg.wigner_alpha = {parse_double(parts[0]), parse_double(parts[1])};
      } else if (key == "wigner.state") {
        cfg.wigner_target = wigner_target_from_string(value);
      }
    } catch (const std::invalid_argument& e) {
      throw fail(key, e.what());
    }
  }

  lineno = 0;  // remaining diagnostics concern the file as a whole
  if (t_start || t_stop || t_count) {
    if (have_list) throw fail("times.list", "cannot be combined with times.start/stop/count");
    if (!t_start || !t_stop || !t_count) throw fail("times.start", "times.start, times.stop and times.count go together");
    if (*t_count < 1) throw fail("times.count", "must be >= 1");
    cfg.times.clear();
    for (int i = 0; i < *t_count; ++i) {
      cfg.times.push_back(*t_count == 1 ? *t_start : *t_start + (*t_stop - *t_start) * i / (*t_count - 1));
    }
  }
  const std::string times_key = have_list ? "times.list" : "times.start";
  for (std::size_t i = 0; i < cfg.times.size(); ++i) {
    const bool negative = cfg.times[i] < 0.0;
    if (negative || (i > 0 && cfg.times[i] < cfg.times[i - 1])) {
      lineno = cfg.lines.contains(times_key) ? cfg.lines[times_key] : 0;
      throw fail(times_key, negative ? "times must be >= 0" : "times must be nondecreasing");
    }
  }
  if (cfg.grid) {
    try {
      cfg.grid->validate();
    } catch (const std::invalid_argument& e) {
      throw fail("grid", e.what());
    }
  }
  if (cfg.initial == InitialKind::custom_cmatrix_file && cfg.initial_file.empty()) {
    throw fail("initial.file", "required for initial.state = custom-cmatrix-file");
  }
  // Resolve the physical system once so bad rates surface at parse time.
  cfg.system();
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_run_config(text.str(), path);
}

SystemConfig RunConfig::system() const {
  auto get = [&](const std::string& key) -> const std::string* {
    auto it = overrides.find(key);
    return it == overrides.end() ? nullptr : &it->second;
  };
  auto where = [&](const std::string& key) {
    auto it = lines.find(key);
    return it == lines.end() ? source : source + ":" + std::to_string(it->second);
  };

  std::optional<SystemConfig> base;
  if (platform) base = platform_preset(*platform).normalized;
  const CouplingProfile base_profile = base ? base->profile() : CouplingProfile::constant(1.0, 0.0);
  RateInputs rates = base ? base->rates() : RateInputs{};

  std::string kind = base_profile.kind() == CouplingProfile::Kind::constant    ? "constant"
                     : base_profile.kind() == CouplingProfile::Kind::piecewise ? "piecewise"
                                                                               : "sampled";
  if (const auto* v = get("profile.kind")) kind = *v;
  const bool touched = get("profile.kind") || get("profile.g0") || get("profile.nu") ||
                       get("profile.segments") || get("profile.samples");

  std::string key;
  try {
    std::optional<CouplingProfile> profile;
    if (!touched) {
      profile = base_profile;
    } else {
      const double nu = get("profile.nu") ? parse_double(*get("profile.nu")) : base_profile.nu();
      if (kind == "constant") {
        key = "profile.g0";
        const double g0 = get("profile.g0") ? parse_double(*get("profile.g0")) : base_profile.g0();
        profile = CouplingProfile::constant(g0, nu);
      } else if (kind == "piecewise") {
        key = "profile.segments";
        std::vector<CouplingProfile::Segment> segs;
        if (const auto* v = get("profile.segments")) {
          for (const auto& seg : split(*v, ',')) {
            const auto f = split(seg, ':');
            segs.push_back({parse_double(f[0]), parse_double(f[1]), parse_double(f[2])});
          }
        } else if (base_profile.kind() == CouplingProfile::Kind::piecewise) {
          segs = base_profile.segments();
        } else {
          throw ConfigError("profile.segments is required for a piecewise profile");
        }
        profile = CouplingProfile::piecewise(segs, nu);
      } else {
        key = "profile.samples";
        std::vector<CouplingProfile::Sample> samples;
        if (const auto* v = get("profile.samples")) {
          for (const auto& smp : split(*v, ',')) {
            const auto f = split(smp, ':');
            samples.push_back({parse_double(f[0]), parse_double(f[1])});
          }
        } else if (base_profile.kind() == CouplingProfile::Kind::sampled) {
          samples = base_profile.samples();
        } else {
          throw ConfigError("profile.samples is required for a sampled profile");
        }
        profile = CouplingProfile::sampled(samples, nu);
      }
    }

    const std::pair<const char*, double RateInputs::*> fields[] = {
        {"rates.kappa", &RateInputs::kappa}, {"rates.gamma1", &RateInputs::gamma1},
        {"rates.gamma2", &RateInputs::gamma2}, {"rates.Na", &RateInputs::Na},
        {"rates.Nq", &RateInputs::Nq}};
    for (const auto& [name, member] : fields) {
      key = name;
      if (const auto* v = get(name)) {
        rates.*member = parse_double(*v);
        if (!std::isfinite(rates.*member) || rates.*member < 0.0) {
          throw std::invalid_argument("must be finite and >= 0");
        }
      }
    }
    key = "rates.mode";
    if (const auto* v = get("rates.mode")) rates.mode = rate_mode_from_string(*v);
    key = "rates";
    return SystemConfig(*profile, rates);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(where(key) + ": key '" + key + "': " + e.what());
  }
}

double RunConfig::initial_occupation() const {
  return initial_Na ? *initial_Na : system().rates().Na;
}

}  // namespace qcdsim

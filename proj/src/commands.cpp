#include "qcdsim/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <ostream>

#include "qcdsim/closed_dynamics.hpp"
#include "qcdsim/fock_oracle.hpp"
#include "qcdsim/presets.hpp"

namespace qcdsim {
namespace {

QubitState initial_qubit(InitialKind kind) {
  switch (kind) {
    case InitialKind::excited_thermal:
      return qubit_excited();
    case InitialKind::ground_thermal:
      return qubit_ground();
    default:
      return qubit_plus();
  }
}

SampledField load_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open table '" + path + "'");
  try {
    return read_table(in);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

// Runs `body`, mapping exceptions onto the exit-code contract.
int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::usage;
  } catch (const TruncationError& e) {
    err << "truncation breach: " << e.what() << '\n';
    return exit_code::truncation;
  } catch (const IntegrationError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return exit_code::numerical;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::usage;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return exit_code::numerical;
  }
}

// Sends output to output.path when set, else to the given stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw ConfigError("cannot write '" + path + "'");
      stream_ = &file_;
    }
  }
  std::ostream& get() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

std::string snapshot_path(const std::string& base, std::size_t index, std::size_t count) {
  if (count == 1) return base;
  const std::string tag = std::to_string(index);
  if (const auto pos = base.find("{index}"); pos != std::string::npos) {
    return base.substr(0, pos) + tag + base.substr(pos + 7);
  }
  const auto slash = base.find_last_of('/');
  const auto dot = base.find_last_of('.');
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) {
    return base.substr(0, dot) + "." + tag + base.substr(dot);
  }
  return base + "." + tag;
}

void print_comparison(std::ostream& os, const OracleComparison& c, double tolerance) {
  os << "oracle t=" << format_g12(c.t) << " cutoff=" << c.cutoff << " points=" << c.points
     << " ee=" << format_g12(c.max_dev[0]) << " gg=" << format_g12(c.max_dev[1])
     << " eg=" << format_g12(c.max_dev[2]) << " ge=" << format_g12(c.max_dev[3])
     << " status=" << (c.worst() <= tolerance ? "pass" : "fail") << '\n';
}

double max_displacement(const CouplingProfile& profile, double t) {
  double best = 0.0;
  for (int i = 1; i <= 64; ++i) best = std::max(best, std::abs(displacement_amplitude(profile, t * i / 64.0)));
  return best;
}

}  // namespace

std::vector<Complex> oracle_sample_points(int count, double radius) {
  std::vector<Complex> pts;
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  for (int k = 0; k < count; ++k) {
    pts.push_back(std::polar(radius * std::sqrt((k + 0.5) / count), golden * k));
  }
  return pts;
}

double OracleComparison::worst() const { return *std::max_element(max_dev, max_dev + 4); }

OracleComparison compare_with_oracle(const RunConfig& cfg, double t, const std::vector<Complex>& points) {
  if (cfg.initial == InitialKind::custom_cmatrix_file) {
    throw ConfigError("the Fock oracle needs a thermal initial state, not a C-Matrix file");
  }
  const SystemConfig sys = cfg.system();
  const double Na0 = cfg.initial_occupation();
  const QubitState q = initial_qubit(cfg.initial);
  const CMatrixField field = solve_cmatrix(sys, product_field(q, thermal_charfn(Na0)), t, cfg.method);

  JointFockState state;
  if (cfg.oracle_cutoff) {
    const OscillatorState th = thermal_state(Na0, *cfg.oracle_cutoff);
    state = integrate(product_state(q, th.rho), sys, t);
    if (th.tail_weight > JointFockState::kTruncationLimit || state.truncation_breach()) {
      throw TruncationError("cutoff " + std::to_string(*cfg.oracle_cutoff) + " holds tail population " +
                            format_g12(std::max(th.tail_weight, state.tail_estimate())));
    }
  } else {
    state = evolve_converged(q, Na0, sys, t, max_displacement(sys.profile(), t)).state;
  }

  OracleComparison c;
  c.t = t;
  c.cutoff = state.cutoff;
  c.points = points.size();
  for (Complex b : points) {
    const CMatrix o = cmatrix_extract(state, b);
    const CMatrix a = field.at(b);
    const Complex d[4] = {o.ee - a.ee, o.gg - a.gg, o.eg - a.eg, o.ge - a.ge};
    for (int i = 0; i < 4; ++i) c.max_dev[i] = std::max(c.max_dev[i], std::abs(d[i]));
  }
  return c;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err, unsigned threads) {
  return guarded(err, [&] {
    if (cfg.output_format != "table") throw ConfigError("simulate writes output.format = table");
    if (cfg.times.size() > 1 && cfg.output_path.empty()) {
      throw ConfigError("output.path is required when more than one time is requested");
    }
    const SystemConfig sys = cfg.system();
    CMatrixField initial;
    std::optional<GridSpec> file_grid;
    double initial_delta = 0.5;
    if (cfg.initial == InitialKind::custom_cmatrix_file) {
      const SampledField table = load_table(cfg.initial_file);
      if (table.grid.pattern != GridPattern::cartesian) {
        throw ConfigError("initial C-Matrix table must use a cartesian grid");
      }
      initial = interpolate(table);
      file_grid = table.grid;
    } else {
      initial_delta = cfg.initial_occupation() + 0.5;
      initial = product_field(initial_qubit(cfg.initial), thermal_charfn(cfg.initial_occupation()));
    }

    int status = exit_code::ok;
    for (std::size_t i = 0; i < cfg.times.size(); ++i) {
      const double t = cfg.times[i];
      const GridSpec grid = cfg.grid ? *cfg.grid : file_grid ? *file_grid : default_grid(sys, t, initial_delta);
      if (cfg.method == SolverMethod::perturbative) {
        const double rate = std::max(sys.derived().Gamma_c, sys.derived().Gamma_h);
        if (rate * t > kPerturbativeLimit) {
          err << "warning: Gamma t = " << format_g12(rate * t) << " exceeds the perturbative limit "
              << kPerturbativeLimit << " at t = " << format_g12(t) << '\n';
        }
      }
      const SampledField field = solve_cmatrix(sys, initial, t, grid, cfg.method, threads);
      Sink sink(cfg.output_path.empty() ? std::string() : snapshot_path(cfg.output_path, i, cfg.times.size()), out);
      write_table(sink.get(), field);

      if (cfg.oracle != OracleMode::off) {
        std::vector<Complex> pts;
        if (cfg.oracle == OracleMode::check) {
          pts = oracle_sample_points(cfg.oracle_points);
        } else {
          for (Complex b : field.beta) {
            if (std::abs(b) <= 3.0) pts.push_back(b);
          }
        }
        const OracleComparison c = compare_with_oracle(cfg, t, pts);
        print_comparison(err, c, cfg.oracle_tolerance);
        if (c.worst() > cfg.oracle_tolerance) status = exit_code::numerical;
      }
    }
    return status;
  });
}

int cmd_scan(const RunConfig& cfg, std::ostream& out, std::ostream& err, unsigned threads) {
  return guarded(err, [&] {
    if (cfg.output_format == "table" && cfg.overrides.contains("output.format")) {
      throw ConfigError("scan writes output.format = csv");
    }
    ScanSpec spec = cfg.scan;
    if (cfg.oracle == OracleMode::off) {
      spec.oracle_max_Na.reset();
    } else if (!spec.oracle_max_Na) {
      spec.oracle_max_Na = 3.0;
    }
    const ScanTable table = scan(spec, threads);
    Sink sink(cfg.output_path, out);
    write_csv(sink.get(), table);
    return exit_code::ok;
  });
}

int cmd_platform(std::string_view name, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const PlatformPreset p = [&] {
      try {
        return platform_preset(name);
      } catch (const std::invalid_argument& e) {
        std::string known;
        for (const auto& n : platform_names()) known += (known.empty() ? "" : ", ") + n;
        throw ConfigError(std::string(e.what()) + " (known: " + known + ")");
      }
    }();
    const std::string& ref = p.reference_label;
    out << "platform = " << p.name << '\n'
        << "description = " << p.description << '\n'
        << "reference = " << ref << " = " << format_g12(p.reference_rate) << " rad/s\n"
        << "mode = " << to_string(p.normalized.rates().mode) << '\n';
    for (const RawParameter& r : p.raw) {
      out << "raw." << r.name << " = " << r.literal << (r.unit.empty() ? "" : " " + r.unit);
      if (!r.note.empty()) out << " ; " << r.note;
      out << '\n';
    }
    const bool exchanged = p.normalized.rates().mode == RateMode::exchanged_qed;
    for (const char* q : {"g_max", "nu", "kappa", "Na", "Nq", "kappa_Na", "Gamma1", "Gamma2", "gamma",
                          "Gamma_c", "Gamma_h", "gamma1", "gamma2"}) {
      const std::string_view qs(q);
      if (!exchanged && (qs == "gamma1" || qs == "gamma2")) continue;
      const bool occupation = qs == "Na" || qs == "Nq";
      out << "normalized." << q << " = " << format_g12(preset_quantity(p.normalized, q))
          << (occupation ? "" : " " + ref) << '\n';
    }
    int mismatches = 0;
    for (const QuoteCheck& c : check_quotes(p)) {
      const std::string unit = c.quote.unit.empty() ? "" : " " + c.quote.unit;
      const char* verdict = c.within_tolerance ? "ok" : c.quote.discrepant ? "known discrepancy" : "MISMATCH";
      if (!c.within_tolerance && !c.quote.discrepant) ++mismatches;
      out << c.quote.quantity << " = " << c.quote.literal << unit << " ; computed " << format_g12(c.computed)
          << unit << " ; deviation " << format_g12(c.rel_deviation) << " ; " << verdict;
      if (!c.quote.note.empty()) out << " ; " << c.quote.note;
      out << '\n';
    }
    return mismatches ? exit_code::numerical : exit_code::ok;
  });
}

int cmd_oracle_check(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const std::vector<Complex> pts = oracle_sample_points(cfg.oracle_points);
    double worst = 0.0;
    for (double t : cfg.times) {
      const OracleComparison c = compare_with_oracle(cfg, t, pts);
      print_comparison(out, c, cfg.oracle_tolerance);
      worst = std::max(worst, c.worst());
    }
    const bool pass = worst <= cfg.oracle_tolerance;
    out << "max_abs_dev = " << format_g12(worst) << '\n'
        << "tolerance = " << format_g12(cfg.oracle_tolerance) << '\n'
        << "status = " << (pass ? "pass" : "fail") << '\n';
    return pass ? exit_code::ok : exit_code::numerical;
  });
}

int cmd_wigner(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (cfg.wigner_file.empty()) throw ConfigError("wigner.file is required");
    const SampledField table = load_table(cfg.wigner_file);
    if (table.grid.pattern != GridPattern::cartesian) throw ConfigError("wigner needs a cartesian table");

    const CMatrixField field = interpolate(table);
    const CMatrix at0 = field.at(Complex{0.0, 0.0});
    double sign = 0.0, norm = (at0.ee + at0.gg).real();
    const char* label = "reduced";
    if (cfg.wigner_target != WignerTarget::reduced) {
      sign = cfg.wigner_target == WignerTarget::minus ? -1.0 : 1.0;
      label = sign < 0 ? "minus" : "plus";
      norm = 0.5 * (at0.ee + at0.gg + sign * (at0.eg + at0.ge)).real();
    }
    if (!(norm > 1e-300)) throw std::domain_error("projected state has zero probability");

    // Trapezoid sum directly on the stored grid nodes.
    const int n = table.grid.counts;
    const double h = 2.0 * table.grid.extent / (n - 1);
    const Complex a = cfg.wigner_alpha;
    Complex sum{0.0, 0.0};
    double boundary = 0.0;
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        const std::size_t idx = static_cast<std::size_t>(j) * n + i;
        const CMatrix& v = table.values[idx];
        const Complex chi = sign == 0.0 ? v.ee + v.gg : 0.5 * (v.ee + v.gg + sign * (v.eg + v.ge));
        const bool edge_i = i == 0 || i == n - 1, edge_j = j == 0 || j == n - 1;
        if (edge_i || edge_j) boundary = std::max(boundary, std::abs(chi) / norm);
        const double wgt = (edge_i ? 0.5 : 1.0) * (edge_j ? 0.5 : 1.0);
        const Complex b = table.beta[idx];
        sum += wgt * chi * std::exp(a * std::conj(b) - std::conj(a) * b);
      }
    }
    if (boundary > 1e-10) {
      throw std::runtime_error("characteristic function has not decayed at the table boundary (|chi| = " +
                               format_g12(boundary) + ")");
    }
    const Complex W = sum * h * h / (kPi * kPi * norm);
    Sink sink(cfg.output_path, out);
    sink.get() << "state = " << label << '\n'
               << "alpha = " << format_g12(a.real()) << ", " << format_g12(a.imag()) << '\n'
               << "probability = " << format_g12(norm) << '\n'
               << "W = " << format_g12(W.real()) << '\n'
               << "imag_residual = " << format_g12(W.imag()) << '\n';
    return exit_code::ok;
  });
}

}  // namespace qcdsim

#include <algorithm>
#include <cmath>
#include <istream>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "qcdsim/grid.hpp"
#include "qcdsim/phase_space.hpp"

namespace qcdsim {

std::string_view to_string(GridPattern p) {
  return p == GridPattern::polar ? "polar" : "cartesian";
}

GridPattern grid_pattern_from_string(std::string_view name) {
  if (name == "cartesian") return GridPattern::cartesian;
  if (name == "polar") return GridPattern::polar;
  throw std::invalid_argument("unknown grid pattern '" + std::string(name) + "'");
}

void GridSpec::validate() const {
  if (!(extent > 0.0) || !std::isfinite(extent)) {
    throw std::invalid_argument("grid extent must be positive and finite");
  }
  if (counts < 2) throw std::invalid_argument("grid counts must be >= 2");
}

std::vector<Complex> GridSpec::points() const {
  validate();
  std::vector<Complex> out;
  const auto n = static_cast<std::size_t>(counts);
  out.reserve(n * n);
  if (pattern == GridPattern::cartesian) {
    const double h = 2.0 * extent / (counts - 1);
    for (int j = 0; j < counts; ++j) {
      const double im = -extent + h * j;
      for (int i = 0; i < counts; ++i) out.emplace_back(-extent + h * i, im);
    }
  } else {
    const double dr = extent / (counts - 1);
    const double dphi = 2.0 * kPi / counts;
    for (int j = 0; j < counts; ++j) {
      const double r = dr * j;
      for (int i = 0; i < counts; ++i) out.push_back(std::polar(r, dphi * i));
    }
  }
  return out;
}

GridSpec default_grid(const SystemConfig& config, double t, double initial_delta) {
  const double kappa = config.rates().kappa;
  const double decay = std::exp(-kappa * t);
  const double delta_eff = config.derived().Delta * -std::expm1(-kappa * t) + initial_delta * decay;
  if (!(delta_eff > 0.0)) throw std::invalid_argument("default_grid: state has no Gaussian envelope");
  GridSpec g;
  const KernelSet k = kernels(config, t);
  g.extent = std::sqrt(-std::log(1e-12) / delta_eff) + std::abs(k.xi);
  g.counts = 101;
  return g;
}

double SampledField::max_abs_difference(const SampledField& other) const {
  if (beta.size() != other.beta.size()) {
    throw std::invalid_argument("max_abs_difference: samples have different sizes");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const CMatrix& a = values[i];
    const CMatrix& b = other.values[i];
    worst = std::max({worst, std::abs(a.ee - b.ee), std::abs(a.gg - b.gg), std::abs(a.eg - b.eg),
                      std::abs(a.ge - b.ge)});
  }
  return worst;
}

SampledField sample(const CMatrixField& field, const GridSpec& grid, double t, unsigned threads) {
  SampledField out;
  out.grid = grid;
  out.t = t;
  out.provenance = field.provenance;
  out.beta = grid.points();
  out.values.resize(out.beta.size());
  parallel_for(out.beta.size(), threads, [&](std::size_t i) { out.values[i] = field.at(out.beta[i]); });
  return out;
}

void write_table(std::ostream& out, const SampledField& f) {
  out << "# t = " << format_g17(f.t) << '\n'
      << "# provenance = " << to_string(f.provenance) << '\n'
      << "# grid.pattern = " << to_string(f.grid.pattern) << '\n'
      << "# grid.extent = " << format_g17(f.grid.extent) << '\n'
      << "# grid.counts = " << f.grid.counts << '\n'
      << "re_beta im_beta re_ee im_ee re_gg im_gg re_eg im_eg re_ge im_ge\n";
  for (std::size_t i = 0; i < f.beta.size(); ++i) {
    const CMatrix& v = f.values[i];
    const double cols[] = {f.beta[i].real(), f.beta[i].imag(), v.ee.real(), v.ee.imag(),
                           v.gg.real(),      v.gg.imag(),      v.eg.real(), v.eg.imag(),
                           v.ge.real(),      v.ge.imag()};
    for (std::size_t c = 0; c < std::size(cols); ++c) {
      if (c) out << ' ';
      out << format_g17(cols[c]);
    }
    out << '\n';
  }
}

namespace {

Provenance provenance_from_string(const std::string& s) {
  for (Provenance p : {Provenance::initial, Provenance::analytic, Provenance::ode,
                       Provenance::perturbative, Provenance::oracle}) {
    if (to_string(p) == s) return p;
  }
  throw std::invalid_argument("table: unknown provenance '" + s + "'");
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

SampledField read_table(std::istream& in) {
  SampledField f;
  bool have_pattern = false, have_extent = false, have_counts = false, have_columns = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = trim(line.substr(1, eq - 1));
      const std::string value = trim(line.substr(eq + 1));
      try {
        if (key == "t") {
          f.t = std::stod(value);
        } else if (key == "provenance") {
          f.provenance = provenance_from_string(value);
        } else if (key == "grid.pattern") {
          f.grid.pattern = grid_pattern_from_string(value);
          have_pattern = true;
        } else if (key == "grid.extent") {
          f.grid.extent = std::stod(value);
          have_extent = true;
        } else if (key == "grid.counts") {
          f.grid.counts = std::stoi(value);
          have_counts = true;
        }
      } catch (const std::logic_error&) {
        throw std::invalid_argument("table line " + std::to_string(lineno) + ": bad value for '" +
                                    key + "'");
      }
      continue;
    }
    if (!have_columns) {
      if (line.rfind("re_beta", 0) != 0) {
        throw std::invalid_argument("table line " + std::to_string(lineno) + ": missing column header");
      }
      have_columns = true;
      continue;
    }
    std::istringstream row(line);
    double c[10];
    for (double& x : c) {
      if (!(row >> x)) {
        throw std::invalid_argument("table line " + std::to_string(lineno) + ": expected 10 numbers");
      }
    }
    f.beta.emplace_back(c[0], c[1]);
    f.values.push_back({{c[2], c[3]}, {c[4], c[5]}, {c[6], c[7]}, {c[8], c[9]}});
  }
  if (!have_pattern || !have_extent || !have_counts) {
    throw std::invalid_argument("table: grid header lines are missing");
  }
  f.grid.validate();
  const auto expected = static_cast<std::size_t>(f.grid.counts) * f.grid.counts;
  if (f.beta.size() != expected) {
    throw std::invalid_argument("table: expected " + std::to_string(expected) + " rows, found " +
                                std::to_string(f.beta.size()));
  }
  return f;
}

CMatrixField interpolate(const SampledField& field) {
  if (field.grid.pattern != GridPattern::cartesian) {
    throw std::invalid_argument("interpolate: only cartesian samples are supported");
  }
  auto data = std::make_shared<const SampledField>(field);
  const double L = field.grid.extent;
  const int n = field.grid.counts;
  const double h = 2.0 * L / (n - 1);

  auto component = [data, L, n, h](Complex CMatrix::*member) -> CharFn {
    return [data, L, n, h, member](Complex b) -> Complex {
      const double x = (b.real() + L) / h;
      const double y = (b.imag() + L) / h;
      if (x < 0.0 || y < 0.0 || x > n - 1 || y > n - 1) return Complex{0.0, 0.0};
      const int i = std::min(static_cast<int>(x), n - 2);
      const int j = std::min(static_cast<int>(y), n - 2);
      const double fx = x - i, fy = y - j;
      auto at = [&](int ii, int jj) {
        return data->values[static_cast<std::size_t>(jj) * n + ii].*member;
      };
      return (1 - fx) * (1 - fy) * at(i, j) + fx * (1 - fy) * at(i + 1, j) +
             (1 - fx) * fy * at(i, j + 1) + fx * fy * at(i + 1, j + 1);
    };
  };
  CMatrixField out;
  out.ee = component(&CMatrix::ee);
  out.gg = component(&CMatrix::gg);
  out.eg = component(&CMatrix::eg);
  out.ge = component(&CMatrix::ge);
  out.provenance = field.provenance;
  return out;
}

}  // namespace qcdsim

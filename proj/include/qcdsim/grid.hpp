#pragma once

#include <iosfwd>
#include <string_view>
#include <vector>

#include "qcdsim/cmatrix.hpp"

namespace qcdsim {

class SystemConfig;

enum class GridPattern { cartesian, polar };

std::string_view to_string(GridPattern p);
GridPattern grid_pattern_from_string(std::string_view name);

/// Sampling grid over the complex beta plane.
/// cartesian: counts x counts points on [-extent, extent]^2, row-major with
///   the imaginary part as the slow index.
/// polar: counts radii on [0, extent] times counts angles in [0, 2 pi).
struct GridSpec {
  GridPattern pattern = GridPattern::cartesian;
  double extent = 6.0;
  int counts = 101;

  void validate() const;
  std::vector<Complex> points() const;
};

/// Extent so that the Gaussian envelope exp(-Delta_eff extent^2) of the
/// state at time t is below 1e-12, widened by the off-diagonal shift |xi(t)|.
/// Delta_eff = Delta (1 - e^{-kappa t}) + initial_delta e^{-kappa t}.
GridSpec default_grid(const SystemConfig& config, double t, double initial_delta);

struct SampledField {
  GridSpec grid;
  double t = 0.0;
  Provenance provenance = Provenance::initial;
  std::vector<Complex> beta;
  std::vector<CMatrix> values;

  /// Largest |component difference| against another sample on the same points.
  double max_abs_difference(const SampledField& other) const;
};

SampledField sample(const CMatrixField& field, const GridSpec& grid, double t = 0.0,
                    unsigned threads = 1);

/// Columnar text table: a "# key = value" header, a column-name line
///   re_beta im_beta re_ee im_ee re_gg im_gg re_eg im_eg re_ge im_ge
/// and one row per grid point in grid order.
void write_table(std::ostream& out, const SampledField& field);
SampledField read_table(std::istream& in);

/// Bilinear interpolation of a cartesian sample (zero outside the grid).
CMatrixField interpolate(const SampledField& field);

}  // namespace qcdsim

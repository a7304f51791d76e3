#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "rds/gaf.hpp"

namespace rds {

using ComplexFunction = std::function<std::complex<double>(std::complex<double>)>;
using RealFunction = std::function<double(double)>;

/// Rectangle [lo.re, hi.re] x [lo.im, hi.im] or an open disk, tagged with the
/// domain it must lie strictly inside.
struct Region {
  enum class Kind { kRectangle, kDisk };

  Kind kind = Kind::kRectangle;
  std::complex<double> lo{-1.0, -1.0};
  std::complex<double> hi{1.0, 1.0};
  std::complex<double> center{};
  double radius = 0.0;
  Domain domain = Domain::kPlane;

  static Region rectangle(std::complex<double> lo, std::complex<double> hi, Domain d = Domain::kPlane);
  static Region disk(std::complex<double> center, double radius, Domain d = Domain::kPlane);

  void validate() const;
  bool contains(std::complex<double> z) const noexcept;
  /// Bounding box as (lo, hi).
  std::pair<std::complex<double>, std::complex<double>> bounds() const noexcept;
  double diameter() const noexcept;
  /// One-line JSON description.
  std::string to_json() const;
};

struct Atom {
  std::complex<double> location;
  int multiplicity = 1;
};

/// Zeros with multiplicities inside a region, sorted by (re, im).
struct PointMeasure {
  std::vector<Atom> atoms;
  Region region;

  int total() const noexcept;
  /// Region JSON in a comment line, then columns re, im, multiplicity.
  void write_csv(std::ostream& out) const;
};

struct WindingOptions {
  /// <= 0: 1e-13 times the largest |f| seen on the boundary.
  double min_modulus = 0.0;
  /// Initial uniform samples per rectangle edge (or on the whole circle x 4).
  int samples_per_edge = 16;
  int max_depth = 24;
  /// Also split a segment when f at its midpoint is far from the chord. Catches
  /// even-order zeros hugging an edge, which leave no net phase between samples.
  bool midpoint_check = false;
};

/// Number of zeros inside the region (argument principle by phase tracking).
/// Throws BoundaryZeroError or NonConvergenceError.
int winding_count(const ComplexFunction& f, const Region& region, const WindingOptions& opts = {});

struct LocateOptions {
  WindingOptions winding;
  /// Cells with a single zero and diameter below this are handed to Newton
  /// before reaching `tol`; 0 means split all the way to `tol`.
  double isolate_diameter = 0.0;
  int retry_budget = 8;
  int newton_iterations = 50;
};

/// Quadtree search; atoms carry multiplicities, total equals the winding count.
PointMeasure locate_zeros(const ComplexFunction& f, const Region& region, double tol,
                          const LocateOptions& opts = {});

/// Sign-change scan plus bisection on (a, b). grid_step <= 0 means (b - a)/2048.
/// Zeros of even multiplicity are not detected.
PointMeasure real_zeros(const RealFunction& f, double a, double b, double grid_step, double tol);

/// Image of the disk |z| < r under phi(z) = (1+z)/(1-z): (center, radius).
std::pair<double, double> disk_image(double r);

/// Total multiplicity of atoms strictly inside disk_image(r). The measure's
/// region must cover the closed image disk (CoverageError otherwise).
int count_in_mapped_disk(const PointMeasure& zeros, double r);

}  // namespace rds

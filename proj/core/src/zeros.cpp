#include "rds/zeros.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "rds/errors.hpp"
#include "rds/io.hpp"
#include "rds/random.hpp"

namespace rds {

using cplx = std::complex<double>;

Region Region::rectangle(cplx lo, cplx hi, Domain d) {
  Region r;
  r.kind = Kind::kRectangle;
  r.lo = lo;
  r.hi = hi;
  r.domain = d;
  r.validate();
  return r;
}

Region Region::disk(cplx center, double radius, Domain d) {
  Region r;
  r.kind = Kind::kDisk;
  r.center = center;
  r.radius = radius;
  r.domain = d;
  r.validate();
  return r;
}

std::pair<cplx, cplx> Region::bounds() const noexcept {
  if (kind == Kind::kRectangle) return {lo, hi};
  return {center - cplx(radius, radius), center + cplx(radius, radius)};
}

double Region::diameter() const noexcept {
  if (kind == Kind::kDisk) return 2.0 * radius;
  return std::abs(hi - lo);
}

bool Region::contains(cplx z) const noexcept {
  if (kind == Kind::kDisk) return std::abs(z - center) < radius;
  return z.real() > lo.real() && z.real() < hi.real() && z.imag() > lo.imag() && z.imag() < hi.imag();
}

void Region::validate() const {
  if (kind == Kind::kRectangle) {
    if (!(lo.real() < hi.real()) || !(lo.imag() < hi.imag()))
      throw ArgumentError("region: rectangle needs lo.re < hi.re and lo.im < hi.im");
    switch (domain) {
      case Domain::kPlane:
        break;
      case Domain::kHalfPlane:
        if (!(lo.real() > 0.0)) throw DomainError("region: rectangle must lie inside the right half-plane");
        break;
      case Domain::kUnitDisk:
        for (const cplx c : {lo, hi, cplx(lo.real(), hi.imag()), cplx(hi.real(), lo.imag())})
          if (!(std::abs(c) < 1.0)) throw DomainError("region: rectangle must lie inside the unit disk");
        break;
    }
  } else {
    if (!(radius > 0.0) || !std::isfinite(radius)) throw ArgumentError("region: disk radius must be positive");
    if (domain == Domain::kHalfPlane && !(center.real() - radius > 0.0))
      throw DomainError("region: disk must lie inside the right half-plane");
    if (domain == Domain::kUnitDisk && !(std::abs(center) + radius < 1.0))
      throw DomainError("region: disk must lie inside the unit disk");
  }
}

std::string Region::to_json() const {
  const char* dom = domain == Domain::kPlane ? "plane" : domain == Domain::kHalfPlane ? "half-plane" : "unit-disk";
  std::ostringstream os;
  if (kind == Kind::kRectangle) {
    os << "{\"kind\":\"rectangle\",\"lo\":[" << format_double(lo.real()) << ',' << format_double(lo.imag())
       << "],\"hi\":[" << format_double(hi.real()) << ',' << format_double(hi.imag()) << "],\"domain\":\"" << dom
       << "\"}";
  } else {
    os << "{\"kind\":\"disk\",\"center\":[" << format_double(center.real()) << ',' << format_double(center.imag())
       << "],\"radius\":" << format_double(radius) << ",\"domain\":\"" << dom << "\"}";
  }
  return os.str();
}

int PointMeasure::total() const noexcept {
  int t = 0;
  for (const auto& a : atoms) t += a.multiplicity;
  return t;
}

void PointMeasure::write_csv(std::ostream& out) const {
  CsvWriter csv(out);
  csv.comment(region.to_json());
  csv.header({"re", "im", "multiplicity"});
  for (const auto& a : atoms) {
    csv.cell(a.location.real()).cell(a.location.imag()).cell(static_cast<std::int64_t>(a.multiplicity)).end_row();
  }
  csv.finish();
}

namespace {

struct EdgeResult {
  double phase = 0.0;  // total arg increment from a to b
  double max_mod = 0.0;
  double min_mod = 0.0;
};

struct PointKey {
  std::uint64_t a, b, c, d;
  bool operator==(const PointKey&) const = default;
};

struct PointKeyHash {
  std::size_t operator()(const PointKey& k) const noexcept {
    return splitmix64(k.a ^ splitmix64(k.b ^ splitmix64(k.c ^ splitmix64(k.d))));
  }
};

// Boundary engine shared by all cells of one search. Straight edges are
// traversed in a canonical direction so that neighbours reuse each other's
// work; the phase of the reversed edge is the negative.
class Contour {
 public:
  Contour(const ComplexFunction& f, const WindingOptions& opts) : f_(f), opts_(opts) {}

  int rectangle(cplx lo, cplx hi) {
    const cplx c[4] = {lo, {hi.real(), lo.imag()}, hi, {lo.real(), hi.imag()}};
    double phase = 0.0;
    double max_mod = 0.0;
    double min_mod = std::numeric_limits<double>::infinity();
    for (int e = 0; e < 4; ++e) {
      const cplx a = c[e];
      const cplx b = c[(e + 1) % 4];
      const bool forward = std::pair(a.real(), a.imag()) < std::pair(b.real(), b.imag());
      const EdgeResult& r = forward ? edge(a, b) : edge(b, a);
      phase += forward ? r.phase : -r.phase;
      max_mod = std::max(max_mod, r.max_mod);
      min_mod = std::min(min_mod, r.min_mod);
    }
    return finish(phase, max_mod, min_mod);
  }

  int circle(cplx center, double radius) {
    const int n = 4 * opts_.samples_per_edge;
    auto point = [&](double t) { return center + std::polar(radius, 2.0 * std::numbers::pi * t); };
    double phase = 0.0;
    double max_mod = 0.0;
    double min_mod = std::numeric_limits<double>::infinity();
    double t0 = 0.0;
    cplx f0 = eval(point(0.0));
    const cplx f_start = f0;
    for (int k = 1; k <= n; ++k) {
      const double t1 = static_cast<double>(k) / n;
      const cplx f1 = k == n ? f_start : eval(point(t1));
      refine(point, t0, f0, t1, f1, 0, phase, max_mod, min_mod);
      t0 = t1;
      f0 = f1;
    }
    return finish(phase, max_mod, min_mod);
  }

 private:
  template <class Param>
  void refine(const Param& point, double t0, cplx f0, double t1, cplx f1, int depth, double& phase, double& max_mod,
              double& min_mod) {
    max_mod = std::max({max_mod, std::abs(f0), std::abs(f1)});
    min_mod = std::min({min_mod, std::abs(f0), std::abs(f1)});
    const double d = std::arg(f1 * std::conj(f0));
    const double tm = 0.5 * (t0 + t1);
    cplx fm;
    bool split = std::abs(d) > std::numbers::pi / 2;
    if (!split && opts_.midpoint_check) {
      fm = eval(point(tm));
      split = std::abs(fm - 0.5 * (f0 + f1)) > 0.5 * std::min(std::abs(f0), std::abs(f1));
    }
    if (!split) {
      phase += d;
      return;
    }
    if (depth >= opts_.max_depth) throw NonConvergenceError("winding_count: refinement depth cap reached");
    if (!opts_.midpoint_check || fm == cplx{}) fm = eval(point(tm));
    refine(point, t0, f0, tm, fm, depth + 1, phase, max_mod, min_mod);
    refine(point, tm, fm, t1, f1, depth + 1, phase, max_mod, min_mod);
  }

  const EdgeResult& edge(cplx a, cplx b) {
    const PointKey key{std::bit_cast<std::uint64_t>(a.real()), std::bit_cast<std::uint64_t>(a.imag()),
                       std::bit_cast<std::uint64_t>(b.real()), std::bit_cast<std::uint64_t>(b.imag())};
    if (auto it = edges_.find(key); it != edges_.end()) return it->second;
    auto point = [&](double t) { return t == 1.0 ? b : a + (b - a) * t; };
    EdgeResult r;
    r.min_mod = std::numeric_limits<double>::infinity();
    const int n = opts_.samples_per_edge;
    double t0 = 0.0;
    cplx f0 = eval(a);
    for (int k = 1; k <= n; ++k) {
      const double t1 = static_cast<double>(k) / n;
      const cplx f1 = eval(point(t1));
      refine(point, t0, f0, t1, f1, 0, r.phase, r.max_mod, r.min_mod);
      t0 = t1;
      f0 = f1;
    }
    return edges_.emplace(key, r).first->second;
  }

  cplx eval(cplx z) {
    const cplx v = f_(z);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw ArgumentError("winding_count: function is not finite on the boundary");
    if (v == cplx{}) throw BoundaryZeroError("winding_count: f vanishes on the boundary");
    return v;
  }

  int finish(double phase, double max_mod, double min_mod) const {
    const double guard = opts_.min_modulus > 0.0 ? opts_.min_modulus : 1e-13 * max_mod;
    if (min_mod < guard) throw BoundaryZeroError("winding_count: |f| below the guard modulus on the boundary");
    const double turns = phase / (2.0 * std::numbers::pi);
    const double rounded = std::round(turns);
    if (std::abs(turns - rounded) > 1e-6) throw NonConvergenceError("winding_count: non-integer winding");
    return static_cast<int>(rounded);
  }

  const ComplexFunction& f_;
  WindingOptions opts_;
  std::unordered_map<PointKey, EdgeResult, PointKeyHash> edges_;
};

class Locator {
 public:
  Locator(const ComplexFunction& f, double tol, const LocateOptions& opts)
      : f_(f), tol_(tol), opts_(opts), contour_(f, opts.winding), careful_(f, careful_options(opts.winding)) {}

  Contour& contour(bool careful = false) { return careful ? careful_ : contour_; }

  // False when no cut of this cell gives children whose counts add up; the
  // caller then re-cuts its own cell, since an even-order zero sitting on a
  // shared edge can alias the phase samples and hand this cell a wrong count.
  bool search(cplx lo, cplx hi, int count, std::vector<Atom>& out, bool careful = false) {
    if (count == 0) return true;
    if (++cells_ > kMaxCells) throw UnresolvableBoundaryError("locate_zeros: cell budget exhausted");
    const double diam = std::abs(hi - lo);
    const cplx mid = 0.5 * (lo + hi);
    const bool at_tol = diam <= tol_;
    if (at_tol || (count == 1 && diam <= opts_.isolate_diameter)) {
      if (!careful) {
        try {
          if (careful_.rectangle(lo, hi) != count) return false;
        } catch (const BoundaryZeroError&) {
          return false;
        } catch (const NonConvergenceError&) {
          return false;
        }
      }
      cplx z;
      if (newton(mid, count, lo, hi, z)) {
        out.push_back({z, count});
        return true;
      }
      if (at_tol) {
        out.push_back({mid, count});
        return true;
      }
    }
    // Attempt 0 uses the fast contour; later attempts the careful one, first
    // with the same cut and then with perturbed cuts.
    for (int attempt = 0; attempt <= opts_.retry_budget; ++attempt) {
      const bool c = careful || attempt > 0;
      cplx cut = mid;
      if (attempt > 1 || (careful && attempt > 0)) {
        const std::uint64_t h = splitmix64(std::bit_cast<std::uint64_t>(lo.real()) ^
                                           splitmix64(std::bit_cast<std::uint64_t>(hi.imag()) + attempt));
        const double u = static_cast<double>(h >> 11) * 0x1.0p-53 - 0.5;
        const double v = static_cast<double>(splitmix64(h) >> 11) * 0x1.0p-53 - 0.5;
        cut += 1e-3 * diam * cplx(u, v) * 2.0;
      }
      const cplx q[4][2] = {{lo, cut},
                            {{cut.real(), lo.imag()}, {hi.real(), cut.imag()}},
                            {cut, hi},
                            {{lo.real(), cut.imag()}, {cut.real(), hi.imag()}}};
      int counts[4];
      try {
        for (int i = 0; i < 4; ++i) counts[i] = contour(c).rectangle(q[i][0], q[i][1]);
      } catch (const BoundaryZeroError&) {
        continue;
      } catch (const NonConvergenceError&) {
        continue;
      }
      if (counts[0] + counts[1] + counts[2] + counts[3] != count) continue;
      const std::size_t mark = out.size();
      bool ok = true;
      for (int i = 0; i < 4 && ok; ++i) ok = search(q[i][0], q[i][1], counts[i], out, c);
      if (ok) return true;
      out.resize(mark);
    }
    return false;
  }

 private:
  bool newton(cplx start, int m, cplx lo, cplx hi, cplx& out) const {
    cplx z = start;
    for (int it = 0; it < opts_.newton_iterations; ++it) {
      const cplx fz = f_(z);
      if (fz == cplx{}) break;
      const double h = 1e-6 * std::max(1.0, std::abs(z));
      const cplx d = (f_(z + h) - f_(z - h)) / (2.0 * h);
      if (d == cplx{} || !std::isfinite(std::abs(d))) return false;
      const cplx step = static_cast<double>(m) * fz / d;
      z -= step;
      if (!(z.real() >= lo.real() && z.real() <= hi.real() && z.imag() >= lo.imag() && z.imag() <= hi.imag()))
        return false;
      if (std::abs(step) < tol_ / 10.0) {
        out = z;
        return true;
      }
    }
    if (f_(z) == cplx{}) {
      out = z;
      return true;
    }
    return false;
  }

  static constexpr std::size_t kMaxCells = 1000000;

  static WindingOptions careful_options(WindingOptions w) {
    w.midpoint_check = true;
    return w;
  }

  const ComplexFunction& f_;
  double tol_;
  LocateOptions opts_;
  Contour contour_;
  Contour careful_;
  std::size_t cells_ = 0;
};

void sort_atoms(std::vector<Atom>& atoms) {
  std::sort(atoms.begin(), atoms.end(), [](const Atom& x, const Atom& y) {
    return std::pair(x.location.real(), x.location.imag()) < std::pair(y.location.real(), y.location.imag());
  });
}

}  // namespace

int winding_count(const ComplexFunction& f, const Region& region, const WindingOptions& opts) {
  region.validate();
  if (opts.samples_per_edge < 1) throw ArgumentError("winding_count: samples_per_edge must be positive");
  Contour c(f, opts);
  if (region.kind == Region::Kind::kDisk) return c.circle(region.center, region.radius);
  return c.rectangle(region.lo, region.hi);
}

PointMeasure locate_zeros(const ComplexFunction& f, const Region& region, double tol, const LocateOptions& opts) {
  region.validate();
  if (!(tol > 0.0)) throw ArgumentError("locate_zeros: tol must be positive");
  Locator loc(f, tol, opts);
  PointMeasure pm;
  pm.region = region;

  if (region.kind == Region::Kind::kRectangle) {
    const int count = loc.contour().rectangle(region.lo, region.hi);
    if (!loc.search(region.lo, region.hi, count, pm.atoms)) {
      pm.atoms.clear();
      const int recount = loc.contour(true).rectangle(region.lo, region.hi);
      if (!loc.search(region.lo, region.hi, recount, pm.atoms, true))
        throw UnresolvableBoundaryError("locate_zeros: retry budget exhausted while subdividing");
    }
  } else {
    const int count = loc.contour().circle(region.center, region.radius);
    if (count > 0) {
      // Search the bounding square, then keep what lies in the disk.
      auto [lo, hi] = region.bounds();
      int box = -1;
      for (int attempt = 0; attempt <= opts.retry_budget && box < 0; ++attempt) {
        const double grow = region.radius * (1e-3 * attempt);
        try {
          box = loc.contour().rectangle(lo - cplx(grow, grow), hi + cplx(grow, grow));
          lo -= cplx(grow, grow);
          hi += cplx(grow, grow);
        } catch (const BoundaryZeroError&) {
        } catch (const NonConvergenceError&) {
        }
      }
      if (box < 0) throw UnresolvableBoundaryError("locate_zeros: cannot enclose the disk");
      std::vector<Atom> all;
      if (!loc.search(lo, hi, box, all))
        throw UnresolvableBoundaryError("locate_zeros: retry budget exhausted while subdividing");
      for (const auto& a : all)
        if (region.contains(a.location)) pm.atoms.push_back(a);
    }
    if (pm.total() != count)
      throw UnresolvableBoundaryError("locate_zeros: a zero lies too close to the disk boundary");
  }
  sort_atoms(pm.atoms);
  return pm;
}

PointMeasure real_zeros(const RealFunction& f, double a, double b, double grid_step, double tol) {
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) throw ArgumentError("real_zeros: need a < b");
  if (!(tol > 0.0)) throw ArgumentError("real_zeros: tol must be positive");
  const double step = grid_step > 0.0 ? grid_step : (b - a) / 2048.0;
  const auto n = static_cast<std::size_t>(std::ceil((b - a) / step - 1e-9));
  std::vector<double> x(n + 1);
  std::vector<double> fx(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    x[i] = i == n ? b : a + static_cast<double>(i) * step;
    fx[i] = f(x[i]);
  }

  PointMeasure pm;
  pm.region.kind = Region::Kind::kRectangle;
  pm.region.lo = {a, 0.0};
  pm.region.hi = {b, 0.0};
  pm.region.domain = Domain::kPlane;

  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0 && fx[i] == 0.0) pm.atoms.push_back({{x[i], 0.0}, 1});
    if (fx[i] == 0.0 || fx[i + 1] == 0.0) continue;
    if (std::signbit(fx[i]) == std::signbit(fx[i + 1])) continue;
    double lo = x[i];
    double hi = x[i + 1];
    double flo = fx[i];
    double root = std::numeric_limits<double>::quiet_NaN();
    while (hi - lo > tol) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      const double fm = f(mid);
      if (fm == 0.0) {
        root = mid;
        break;
      }
      if (std::signbit(fm) == std::signbit(flo)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    if (std::isnan(root)) root = 0.5 * (lo + hi);
    pm.atoms.push_back({{root, 0.0}, 1});
  }
  sort_atoms(pm.atoms);
  return pm;
}

std::pair<double, double> disk_image(double r) {
  if (!(r > 0.0 && r < 1.0)) throw ArgumentError("disk_image: r must lie in (0, 1)");
  const double d = 1.0 - r * r;
  return {(1.0 + r * r) / d, 2.0 * r / d};
}

int count_in_mapped_disk(const PointMeasure& zeros, double r) {
  const auto [c, rad] = disk_image(r);
  const Region& g = zeros.region;
  bool covered = false;
  if (g.kind == Region::Kind::kRectangle) {
    covered = g.lo.real() <= c - rad && g.hi.real() >= c + rad && g.lo.imag() <= -rad && g.hi.imag() >= rad;
  } else {
    covered = std::abs(g.center - cplx(c, 0.0)) + rad <= g.radius;
  }
  if (!covered) throw CoverageError("count_in_mapped_disk: zero search region does not cover the image disk");
  int n = 0;
  for (const auto& a : zeros.atoms)
    if (std::abs(a.location - cplx(c, 0.0)) < rad) n += a.multiplicity;
  return n;
}

}  // namespace rds

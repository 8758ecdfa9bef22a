#include "ctrlcap/capacity/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ctrlcap/numerics/error.hpp"
#include "ctrlcap/numerics/parallel.hpp"
#include "ctrlcap/numerics/random.hpp"

namespace ctrlcap::capacity {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_dist(Point a, Point b) {
  const double d = std::abs(a - b);
  return d > 0 ? std::log(d) : kNegInf;
}

// Arc-length parameterisation of the boundary with the curves built once.
class BoundaryParam {
 public:
  explicit BoundaryParam(const Region& x) : curves_(x.boundary()) {
    double total = 0;
    for (const auto& c : curves_) {
      cumulative_.push_back(total);
      total += c.length();
    }
    total_ = total;
    open_ = !curves_.back().closed;
  }

  bool open() const { return open_; }

  double normalise(double s) const { return open_ ? std::clamp(s, 0.0, 1.0) : s - std::floor(s); }

  Point at(double s) const {
    s = normalise(s);
    double target = s * total_;
    for (std::size_t i = 0; i < curves_.size(); ++i) {
      const double len = curves_[i].length();
      if (target <= len || i + 1 == curves_.size()) return curves_[i].at_fraction(len > 0 ? std::min(target / len, 1.0) : 0.0);
      target -= len;
    }
    return curves_.back().at_fraction(1.0);
  }

 private:
  std::vector<Curve> curves_;
  std::vector<double> cumulative_;
  double total_ = 0;
  bool open_ = false;
};

struct Config {
  std::vector<double> s;
  std::vector<Point> z;
  double log_product = kNegInf;  // sum_{i<j} log |z_i - z_j|
  int sweeps = 0;
  bool stalled = false;
};

double log_product(const std::vector<Point>& z) {
  double total = 0;
  for (std::size_t i = 0; i < z.size(); ++i)
    for (std::size_t j = i + 1; j < z.size(); ++j) total += log_dist(z[i], z[j]);
  return total;
}

double row_sum(const std::vector<Point>& z, std::size_t skip, Point p) {
  double total = 0;
  for (std::size_t j = 0; j < z.size(); ++j)
    if (j != skip) total += log_dist(p, z[j]);
  return total;
}

double d_of(double log_prod, std::size_t n) {
  return n < 2 ? 0.0 : std::exp(2 * log_prod / (static_cast<double>(n) * static_cast<double>(n - 1)));
}

// Coordinate ascent: golden section for each point on a local bracket of the
// boundary parameter.
void ascend(const BoundaryParam& bp, Config& c, int sweeps) {
  const std::size_t n = c.s.size();
  const double h = 1.0 / (2.0 * static_cast<double>(n));
  const double g = (std::sqrt(5.0) - 1) / 2;
  c.log_product = log_product(c.z);
  c.stalled = false;
  int sweep = 0;
  double last_gain = 0;
  for (; sweep < sweeps; ++sweep) {
    double gain = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double current = row_sum(c.z, i, c.z[i]);
      auto f = [&](double s) { return row_sum(c.z, i, bp.at(s)); };
      double lo = c.s[i] - h, hi = c.s[i] + h;
      if (bp.open()) lo = std::max(lo, 0.0), hi = std::min(hi, 1.0);
      double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
      double f1 = f(x1), f2 = f(x2);
      for (int it = 0; it < 32; ++it) {
        if (f1 > f2) {
          hi = x2, x2 = x1, f2 = f1;
          x1 = hi - g * (hi - lo);
          f1 = f(x1);
        } else {
          lo = x1, x1 = x2, f1 = f2;
          x2 = lo + g * (hi - lo);
          f2 = f(x2);
        }
      }
      // Open ends: Fekete points sit on the end points, so test them too.
      double best_s = f1 > f2 ? x1 : x2, best_f = std::max(f1, f2);
      if (bp.open()) {
        for (double end : {lo, hi}) {
          const double fe = f(end);
          if (fe > best_f) best_f = fe, best_s = end;
        }
      }
      if (best_f > current) {
        gain += best_f - current;
        c.s[i] = bp.normalise(best_s);
        c.z[i] = bp.at(c.s[i]);
      }
    }
    c.log_product += gain;
    last_gain = gain;
    if (gain <= 1e-12 * std::max(1.0, std::abs(c.log_product))) break;
  }
  c.sweeps = std::min(sweep + 1, sweeps);
  c.stalled = sweep >= sweeps && last_gain > 1e-9 * std::max(1.0, std::abs(c.log_product));
  c.log_product = log_product(c.z);
}

// Adds points one at a time at the best of a fixed candidate grid.
void extend_greedy(const BoundaryParam& bp, Config& c, std::size_t n) {
  constexpr int kCandidates = 1024;
  while (c.s.size() < n) {
    double best = kNegInf, best_s = 0;
    for (int k = 0; k <= kCandidates; ++k) {
      const double s = static_cast<double>(k) / kCandidates;
      const double v = row_sum(c.z, c.z.size(), bp.at(s));
      if (v > best) best = v, best_s = s;
    }
    c.s.push_back(best_s);
    c.z.push_back(bp.at(best_s));
  }
}

// Drops the point whose removal keeps the largest product until n remain;
// each step cannot decrease d, so d_n(result) >= d_N(c).
Config prune(const Config& c, std::size_t n) {
  Config out = c;
  while (out.z.size() > n) {
    std::size_t worst = 0;
    double worst_sum = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < out.z.size(); ++i) {
      const double v = row_sum(out.z, i, out.z[i]);
      if (v < worst_sum) worst_sum = v, worst = i;
    }
    out.z.erase(out.z.begin() + static_cast<std::ptrdiff_t>(worst));
    out.s.erase(out.s.begin() + static_cast<std::ptrdiff_t>(worst));
  }
  out.log_product = log_product(out.z);
  return out;
}

Config random_config(const BoundaryParam& bp, std::size_t n, numerics::Rng& rng) {
  Config c;
  for (std::size_t i = 0; i < n; ++i) c.s.push_back(rng.uniform());
  std::sort(c.s.begin(), c.s.end());
  for (double s : c.s) c.z.push_back(bp.at(s));
  return c;
}

Config spaced_config(const BoundaryParam& bp, std::size_t n) {
  Config c;
  const double denom = bp.open() ? static_cast<double>(n - 1) : static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) c.s.push_back(static_cast<double>(i) / denom);
  for (double s : c.s) c.z.push_back(bp.at(s));
  return c;
}

struct LevelResult {
  Config best;
  double spread = 0;
};

LevelResult solve_level(const BoundaryParam& bp, std::size_t n, const Config& seed_config, const FeketeOptions& opt) {
  const int restarts = std::max(1, opt.restarts);
  std::vector<Config> runs(static_cast<std::size_t>(restarts));
  numerics::parallel_for(runs.size(), opt.jobs, [&](std::size_t r) {
    Config c;
    if (r == 0) {
      c = seed_config;
    } else {
      numerics::Rng rng(opt.seed, numerics::Rng::mix(n) ^ static_cast<std::uint64_t>(r));
      c = random_config(bp, n, rng);
    }
    ascend(bp, c, opt.sweeps);
    runs[r] = std::move(c);
  });
  LevelResult out;
  std::size_t best = 0;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    const double d = d_of(runs[r].log_product, n);
    lo = std::min(lo, d);
    hi = std::max(hi, d);
    if (runs[r].log_product > runs[best].log_product) best = r;
  }
  out.best = runs[best];
  out.spread = hi - lo;
  return out;
}

FeketeResult to_result(const Config& c, double spread) {
  FeketeResult r;
  r.points = c.z;
  const std::size_t n = c.z.size();
  r.d_n = d_of(c.log_product, n);
  r.energy = 2 * c.log_product / (static_cast<double>(n) * static_cast<double>(n));
  r.spread = spread;
  r.sweeps = c.sweeps;
  r.stalled = c.stalled;
  return r;
}

std::vector<Point> distinct_points(const Region& x) {
  std::vector<Point> out;
  for (const auto& z : x.boundary_grid(0)) {
    bool seen = false;
    for (const auto& w : out) seen = seen || w == z;
    if (!seen) out.push_back(z);
  }
  return out;
}

// Discrete Fekete subset of a point cloud: greedy start, then single swaps.
Config cloud_fekete(const std::vector<Point>& pts, std::size_t n) {
  Config c;
  std::vector<bool> used(pts.size(), false);
  auto add = [&](std::size_t k) {
    used[k] = true;
    c.z.push_back(pts[k]);
    c.s.push_back(static_cast<double>(k));
  };
  // Start from the diameter pair.
  std::size_t a = 0, b = 1;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      if (std::abs(pts[i] - pts[j]) > std::abs(pts[a] - pts[b])) a = i, b = j;
  add(a);
  if (n >= 2) add(b);
  while (c.z.size() < n) {
    std::size_t best = 0;
    double best_v = kNegInf;
    for (std::size_t k = 0; k < pts.size(); ++k) {
      if (used[k]) continue;
      const double v = row_sum(c.z, c.z.size(), pts[k]);
      if (v > best_v || best_v == kNegInf) best_v = v, best = k;
    }
    add(best);
  }
  bool improved = true;
  int sweeps = 0;
  while (improved && sweeps < 200) {
    improved = false;
    ++sweeps;
    for (std::size_t i = 0; i < c.z.size(); ++i) {
      const double current = row_sum(c.z, i, c.z[i]);
      for (std::size_t k = 0; k < pts.size(); ++k) {
        if (used[k]) continue;
        const double v = row_sum(c.z, i, pts[k]);
        if (v > current + 1e-14 * std::max(1.0, std::abs(current))) {
          used[static_cast<std::size_t>(c.s[i])] = false;
          used[k] = true;
          c.z[i] = pts[k];
          c.s[i] = static_cast<double>(k);
          improved = true;
          break;
        }
      }
    }
  }
  c.sweeps = sweeps;
  c.log_product = log_product(c.z);
  return c;
}

double gamma_ratio_constant(int n) {
  const double nn = static_cast<double>(n);
  return std::tgamma(1 / nn) / (std::pow(2.0, 1 + 2 / nn) * std::sqrt(kPi) * std::tgamma(0.5 + 1 / nn));
}

}  // namespace

double ngon_constant(int n) {
  require(n >= 3, ErrorKind::InvalidArgument, "ngon_constant: n must be >= 3");
  return gamma_ratio_constant(n);
}

double stated_square_constant() { return std::pow(std::tgamma(0.25), 2) / (4 * kPi * kPi); }
double stated_triangle_constant() { return std::pow(std::tgamma(1.0 / 3), 2) / (4 * kPi * kPi); }

std::optional<double> cap_closed_form(const Region& x) {
  const auto& p = x.params();
  const double scale = std::abs(x.transform().scale);
  double v = 0;
  switch (x.kind()) {
    case RegionKind::Interval: v = (p[1] - p[0]) / 4; break;
    case RegionKind::TwoIntervals: v = std::sqrt(p[1] * p[1] - p[0] * p[0]) / 2; break;
    case RegionKind::Ellipse: v = (p[0] + p[1]) / 2; break;
    case RegionKind::Disk: v = p[2]; break;
    case RegionKind::HalfDisk: v = 4 * p[0] / std::pow(3.0, 1.5); break;
    case RegionKind::Square: v = ngon_constant(4) * p[0]; break;
    case RegionKind::EquilateralTriangle: v = ngon_constant(3) * p[0]; break;
    case RegionKind::RegularNGon: v = ngon_constant(static_cast<int>(p[0])) * p[1]; break;
    default: return std::nullopt;
  }
  return v * scale;
}

FeketeResult fekete_points(const Region& x, int n, const FeketeOptions& options) {
  require(n >= 2, ErrorKind::InvalidArgument, "fekete_points: n must be >= 2");
  if (x.is_point_cloud()) {
    const auto pts = distinct_points(x);
    require(pts.size() >= static_cast<std::size_t>(n), ErrorKind::InvalidArgument,
            "fekete_points: the point cloud has fewer than n distinct points");
    return to_result(cloud_fekete(pts, static_cast<std::size_t>(n)), 0.0);
  }
  const BoundaryParam bp(x);
  const auto level = solve_level(bp, static_cast<std::size_t>(n), spaced_config(bp, static_cast<std::size_t>(n)), options);
  return to_result(level.best, level.spread);
}

std::string_view to_string(CapacityMethod m) { return m == CapacityMethod::ClosedForm ? "closed_form" : "fekete"; }

CapacityEstimate cap_estimate(const Region& x, int n_max, const FeketeOptions& options) {
  require(n_max >= 4, ErrorKind::InvalidArgument, "cap_estimate: n_max must be >= 4");
  CapacityEstimate est;
  est.method = CapacityMethod::Fekete;
  est.closed_form = cap_closed_form(x);

  if (x.is_point_cloud()) {
    // The whole cloud carries the uniform discrete measure.
    const auto pts = distinct_points(x);
    est.n_points = static_cast<int>(pts.size());
    if (pts.size() < 2) return est;
    const double lp = log_product(pts);
    const double n = static_cast<double>(pts.size());
    est.energy = 2 * lp / (n * n);
    est.value = std::exp(est.energy);
    est.levels = {est.n_points};
    est.d_sequence = {d_of(lp, pts.size())};
    return est;
  }
  if (x.is_single_point()) return est;

  std::vector<std::size_t> levels;
  for (int n = 4; n <= n_max; n += 4) levels.push_back(static_cast<std::size_t>(n));
  if (levels.back() != static_cast<std::size_t>(n_max)) levels.push_back(static_cast<std::size_t>(n_max));

  const BoundaryParam bp(x);
  std::vector<Config> configs;
  std::vector<double> spreads;
  Config seed_config = spaced_config(bp, levels.front());
  for (std::size_t li = 0; li < levels.size(); ++li) {
    if (li > 0) {
      seed_config = configs.back();
      extend_greedy(bp, seed_config, levels[li]);
    }
    const auto level = solve_level(bp, levels[li], seed_config, options);
    configs.push_back(level.best);
    spreads.push_back(level.spread);
  }
  // Enforce d_n >= d_{n'} for n < n': a pruned larger configuration is a
  // feasible start for the smaller level.
  for (std::size_t li = levels.size() - 1; li-- > 0;) {
    Config pruned = prune(configs[li + 1], levels[li]);
    if (pruned.log_product / static_cast<double>(levels[li] * (levels[li] - 1)) >
        configs[li].log_product / static_cast<double>(levels[li] * (levels[li] - 1))) {
      ascend(bp, pruned, options.sweeps);
      configs[li] = std::move(pruned);
    }
  }

  for (std::size_t li = 0; li < levels.size(); ++li) {
    est.levels.push_back(static_cast<int>(levels[li]));
    est.d_sequence.push_back(d_of(configs[li].log_product, levels[li]));
    est.stalled = est.stalled || configs[li].stalled;
  }
  const std::size_t n_top = levels.back();
  est.n_points = static_cast<int>(n_top);
  est.energy = 2 * configs.back().log_product / static_cast<double>(n_top * n_top);
  est.spread = spreads.back();

  // Least-squares fit d = cap + c / n on the upper half of the levels.
  std::vector<double> xs, ys;
  for (std::size_t li = 0; li < levels.size(); ++li) {
    if (2 * levels[li] < n_top) continue;
    xs.push_back(1.0 / static_cast<double>(levels[li]));
    ys.push_back(est.d_sequence[li]);
  }
  if (xs.size() < 2) {
    est.value = est.d_sequence.back();
    return est;
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) mx += xs[i], my += ys[i];
  mx /= static_cast<double>(xs.size());
  my /= static_cast<double>(xs.size());
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  const double slope = sxy / sxx;
  est.value = my - slope * mx;
  double rss = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (est.value + slope * xs[i]);
    rss += r * r;
  }
  est.fit_residual = std::sqrt(rss / static_cast<double>(xs.size()));
  return est;
}

CapacityEstimate capacity(const Region& x, int n_max, const FeketeOptions& options) {
  if (const auto cf = cap_closed_form(x)) {
    CapacityEstimate est;
    est.method = CapacityMethod::ClosedForm;
    est.value = *cf;
    est.closed_form = cf;
    return est;
  }
  return cap_estimate(x, n_max, options);
}

UpperBoundCheck check_upper_bounds(const Region& x, double cap, double slack) {
  UpperBoundCheck out;
  out.diameter_bound = x.diameter() / 2;
  const bool connected = x.kind() != RegionKind::TwoIntervals && x.kind() != RegionKind::PointCloud;
  if (connected) out.length_bound = x.boundary_length() / 4;
  const double tol = 1 + slack;
  out.holds = cap <= out.diameter_bound * tol && (!out.length_bound || cap <= *out.length_bound * tol);
  return out;
}

}  // namespace ctrlcap::capacity

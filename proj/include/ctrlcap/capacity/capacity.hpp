#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "ctrlcap/capacity/region.hpp"

namespace ctrlcap::capacity {

/// Capacity of the regular n-gon with unit side.
double ngon_constant(int n);

/// The Proposition's separate square and triangle constants, Gamma(1/4)^2/(4 pi^2)
/// and Gamma(1/3)^2/(4 pi^2). Kept for reporting; they disagree with ngon_constant.
double stated_square_constant();
double stated_triangle_constant();

/// Catalog value, scaled by |transform scale|; none for polygons, polylines
/// and point clouds.
std::optional<double> cap_closed_form(const Region& x);

struct FeketeOptions {
  int restarts = 8;
  int sweeps = 200;
  std::uint64_t seed = 0;
  int jobs = 1;
};

struct FeketeResult {
  std::vector<Point> points;
  double d_n = 0;       // (prod_{i<j} |z_i - z_j|)^(2 / (n (n - 1)))
  double energy = 0;    // (1/n^2) sum_{i != j} log |z_i - z_j|
  double spread = 0;    // max - min of d_n across restarts
  int sweeps = 0;       // sweeps used by the winning restart
  bool stalled = false; // sweep cap reached while still improving
};

/// Multi-start coordinate ascent on the boundary parameter. Point clouds pick
/// n of their points (greedy start, then single swaps).
FeketeResult fekete_points(const Region& x, int n, const FeketeOptions& options = {});

enum class CapacityMethod { ClosedForm, Fekete };
std::string_view to_string(CapacityMethod m);

struct CapacityEstimate {
  double value = 0;
  CapacityMethod method = CapacityMethod::Fekete;
  int n_points = 0;
  double energy = 0;
  std::vector<int> levels;           // n for each d_n
  std::vector<double> d_sequence;    // nonincreasing
  double fit_residual = 0;           // rms of d_n - (cap + c/n) on the fitted levels
  double spread = 0;                 // restart spread at n_max
  bool stalled = false;
  std::optional<double> closed_form;
};

/// Fekete levels n = 4, 8, ..., n_max, each level seeded by the previous one
/// plus greedy points. value fits d_n = cap + c/n on the levels n >= n_max/2.
CapacityEstimate cap_estimate(const Region& x, int n_max, const FeketeOptions& options = {});

/// Closed form when available, else the Fekete estimate.
CapacityEstimate capacity(const Region& x, int n_max = 40, const FeketeOptions& options = {});

struct UpperBoundCheck {
  std::optional<double> length_bound;  // l/4 for connected shapes (l = boundary length or curve length)
  double diameter_bound = 0;           // D/2
  bool holds = true;
};

/// cap <= l/4 and cap <= D/2, with relative slack `slack`.
UpperBoundCheck check_upper_bounds(const Region& x, double cap, double slack = 1e-9);

}  // namespace ctrlcap::capacity

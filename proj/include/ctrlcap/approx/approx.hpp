#pragma once

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "ctrlcap/capacity/region.hpp"
#include "ctrlcap/numerics/matrix.hpp"

namespace ctrlcap::approx {

using capacity::Point;
using capacity::Region;

/// x^n = sum_i coefficient_i T_{index_i}(x).
struct ChebyshevExpansion {
  int n = 0;
  std::vector<std::pair<int, double>> terms;  // (n - 2i, 2^(1-n) C(n,i) delta_{i,n} / 2), index descending

  double evaluate(double x) const;
};

/// Full expansion of x^n.
ChebyshevExpansion cheb_expansion(int n);

struct ChebTruncation {
  ChebyshevExpansion poly;  // terms with index <= m
  double tail_bound = 0;    // 2^(1-n) sum_{i < i'} C(n, i), i' = ceil((n - m) / 2)
};

ChebTruncation cheb_truncation(int n, int m);

/// 2^(1-n) sum_{i=0}^{count-1} C(n, i), summed in log space.
double binomial_tail(int n, int count);

enum class Basis { Chebyshev, Faber };

/// Best approximation result. For phi_exact the error function is
/// x^n - sum_j c_j T_j(x). For err_region it is
/// rho^l e^(i l theta) (F_l(u) - sum_{j<l} c_j F_j(u)), u = (z - center) e^(-i theta) / rho,
/// with F_j the Faber polynomials of the ellipse with eccentricity parameter epsilon.
struct MinimaxResult {
  int l = 0;                 // target degree (l or n)
  int m = 0;                 // approximant degree bound
  double error = 0;          // max |error function| on the validation grid
  double solve_error = 0;    // max on the solve grid
  double lower_bound = 0;    // certified lower bound on the solve-grid minimax value
  double certified_gap = 0;  // solve_error - lower_bound
  std::vector<std::complex<double>> coefficients;
  Basis basis = Basis::Chebyshev;
  Point center{0, 0};
  double rho = 1, epsilon = 0, theta = 0;
  std::size_t grid_size = 0;
  std::size_t validation_size = 0;
  int iterations = 0;
  int alternation_points = 0;  // phi_exact: alternating extrema of size error
  bool degenerate = false;   // single-point region: error 0 by interpolation
};

/// Value of the error function of `r` at z (err_region results) or x (phi).
std::complex<double> error_function(const MinimaxResult& r, Point z);

/// min over monic p of degree `degree` of ||p(D) z||_2: least-squares residual
/// of D^degree z against span{z, Dz, ..., D^(degree-1) z}.
double monic_residual(const numerics::ComplexVector& d, const numerics::ComplexVector& z, int degree);

template <class R>
R monic_residual_t(const numerics::CVector<R>& d, const numerics::CVector<R>& z, int degree);

/// Phi_{n,m} by Remez exchange (single exchange, Chebyshev-extrema start).
MinimaxResult phi_exact(int n, int m);

/// 2 exp(-m^2 / (2n)).
double phi_hoeffding(int n, int m);

struct ErrOptions {
  std::size_t solve_points = 512;
  std::size_t validation_points = 2048;
  int max_iterations = 500;
  double damping = 0.5;
  double target_relative_gap = 1e-6;
};

/// Err(l, X) by Lawson iteration on a boundary discretisation.
MinimaxResult err_region(int l, const Region& x, const ErrOptions& options = {});

/// (l, Err(l, X)^(1/l)) for l = 1..l_max.
std::vector<std::pair<int, double>> err_capacity_trend(const Region& x, int l_max, const ErrOptions& options = {});

std::string_view to_string(Basis b);

}  // namespace ctrlcap::approx

#pragma once

#include <optional>
#include <vector>

#include "ctrlcap/numerics/linalg.hpp"
#include "ctrlcap/system/system.hpp"

namespace ctrlcap::gramian {

using numerics::BigFloat;
using numerics::ComplexMatrix;
using numerics::ComplexVector;
using system::LinearSystem;

struct GramianOptions {
  int precision_bits = 53;
  bool auto_escalate = true;
  /// Exactly Hermitian A with t > n: W = U G U* with G formed from
  /// geometric sums over the eigenvalues of A, independent of t.
  bool spectral = true;
  /// Stop escalating once lambda_min is certified <= this value even if it
  /// is not resolved relative to lambda_max.
  std::optional<BigFloat> certify_below;
};

struct GramianReport {
  int t = 0;
  ComplexMatrix W;       // rounded to binary64 (entries may be +-inf for huge W)
  BigFloat lambda_min;   // at precision_bits_used
  BigFloat lambda_max;
  int precision_bits_used = 53;
  bool resolved = false;
  bool rank_deficient = false;  // (t+1) k < n, lambda_min = 0 exactly
  BigFloat lambda_min_upper;    // lambda_min + 2^(20-p) lambda_max
  bool certified_below = false; // stopped on options.certify_below
  bool spectral = false;
};

struct SteeringPlan {
  std::vector<ComplexVector> inputs;  // u(0..t-1)
  double energy = 0;                  // sum ||u(i)||^2
  BigFloat energy_exact;
  double quadratic_form = 0;          // r^* W(t-1)^+ r with r = xf - A^t x0
  double target_residual = 0;         // ||x(t) - xf||
  int precision_bits = 53;
};

struct WorstDirection {
  ComplexVector y;
  double energy = 0;             // steer(sys, 0, y, t).energy
  double inverse_lambda_min = 0; // 1 / lambda_min(W(t-1))
  int precision_bits = 53;
};

/// S(t) = [B, AB, ..., A^t B] at the active precision of R.
template <class R>
numerics::CMatrix<R> controllability_matrix(const LinearSystem& sys, int t);

/// W(t) = sum_{i=0}^t A^i B B^* (A^*)^i, formed as S(t) S(t)^*. lambda_min is
/// resolved once it is >= 2^(20-p) lambda_max (and >= 1e-12 in binary64);
/// otherwise p is doubled (cap 4096). Throws Overflow when binary64 cannot
/// hold S(t) and escalation is off.
GramianReport gramian(const LinearSystem& sys, int t, const GramianOptions& options = {});

/// 1 / lambda_min(W(t-1)); +inf when W(t-1) is singular or unresolved.
BigFloat control_energy(const LinearSystem& sys, int t, const GramianOptions& options = {});

/// Minimum-energy open-loop input from x0 to xf in t steps, computed at
/// twice the precision the Gramian needed. Throws Unreachable when xf - A^t x0
/// leaves the range of W(t-1).
SteeringPlan steer(const LinearSystem& sys, const ComplexVector& x0, const ComplexVector& xf, int t,
                   const GramianOptions& options = {});

/// Unit eigenvector of W(t-1) for lambda_min and the energy to reach it.
WorstDirection worst_direction(const LinearSystem& sys, int t, const GramianOptions& options = {});

extern template numerics::CMatrix<double> controllability_matrix<double>(const LinearSystem&, int);
extern template numerics::CMatrix<BigFloat> controllability_matrix<BigFloat>(const LinearSystem&, int);

}  // namespace ctrlcap::gramian

#include "ctrlcap/system/system.hpp"

#include <cmath>
#include <limits>

#include "ctrlcap/numerics/linalg.hpp"

namespace ctrlcap::system {

using numerics::BigFloat;
using numerics::CMatrix;
using numerics::Cx;
using numerics::kTolerance;

LinearSystem::LinearSystem(ComplexMatrix a, ComplexMatrix b) : a_(std::move(a)), b_(std::move(b)) {
  require(a_.square() && a_.rows() >= 1, ErrorKind::DimensionMismatch, "A must be square and nonempty");
  require(b_.rows() == a_.rows(), ErrorKind::DimensionMismatch, "B must have n rows");
  require(b_.cols() >= 1 && b_.cols() <= b_.rows(), ErrorKind::DimensionMismatch, "B must have 1 <= k <= n columns");
  for (const auto& z : a_.data())
    require(std::isfinite(z.re) && std::isfinite(z.im), ErrorKind::InvalidArgument, "A has non-finite entries");
  b_fro_ = numerics::frobenius_norm(b_);
  require(std::isfinite(b_fro_), ErrorKind::InvalidArgument, "B has non-finite entries");
}

int t_min(int n, int k) {
  require(k >= 1 && k <= n, ErrorKind::InvalidArgument, "t_min requires 1 <= k <= n");
  return (n + k - 1) / k - 1;
}

namespace {

template <class R>
Diagonalization general_route(const ComplexMatrix& a) {
  const CMatrix<R> wa = numerics::widen<R>(a);
  const auto eig = numerics::eig_general(wa);
  Diagonalization d;
  d.precision_bits = numerics::RealTraits<R>::bits();
  d.eigenvalues = numerics::narrow(eig.values);
  double cond = std::numeric_limits<double>::infinity();
  try {
    cond = numerics::to_double(numerics::cond2(eig.vectors));
    d.V = numerics::narrow(numerics::inverse(eig.vectors));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Singular) throw;
  }
  d.cond_V = cond;
  return d;
}

}  // namespace

Diagonalization diagonalize(const ComplexMatrix& a) {
  require(a.square() && a.rows() >= 1, ErrorKind::DimensionMismatch, "diagonalize: A must be square");
  if (numerics::is_hermitian(a)) {
    const auto eig = numerics::eig_hermitian(a);
    Diagonalization d;
    d.hermitian = true;
    d.V = numerics::adjoint(eig.vectors);
    for (double v : eig.values) d.eigenvalues.emplace_back(v);
    d.cond_V = 1;
    return d;
  }
  Diagonalization d = general_route<double>(a);
  if (d.cond_V <= kTolerance.defect_cond) return d;
  Diagonalization wide = numerics::with_precision(kTolerance.defect_recheck_bits, [&](auto zero) {
    using R = decltype(zero);
    return general_route<R>(a);
  });
  require(wide.cond_V <= kTolerance.defect_cond, ErrorKind::Defective,
          "A is not (numerically) diagonalizable: cond(V) > 1e8 at 256 bits");
  wide.defect_flag = true;
  return wide;
}

ComplexMatrix random_unitary(numerics::Rng& rng, std::size_t n) {
  ComplexMatrix g(n, n);
  for (auto& z : g.data()) z = numerics::from_std(rng.complex_normal());
  // Gram-Schmidt with one reorthogonalisation pass; on Gaussian columns this
  // is QR with a positive diagonal, which is Haar distributed.
  for (std::size_t j = 0; j < n; ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t i = 0; i < j; ++i) {
        cplx proj(0);
        for (std::size_t r = 0; r < n; ++r) numerics::add_adjoint_product(proj, g(r, i), g(r, j));
        for (std::size_t r = 0; r < n; ++r) g(r, j) -= g(r, i) * proj;
      }
    }
    double norm = 0;
    for (std::size_t r = 0; r < n; ++r) norm += numerics::norm2(g(r, j));
    norm = std::sqrt(norm);
    for (std::size_t r = 0; r < n; ++r) g(r, j) /= norm;
  }
  return g;
}

GeneratedSystem generate_with_structure(const SystemSpec& spec) {
  require(spec.n >= 1, ErrorKind::InfeasibleSpec, "n must be positive");
  require(spec.k >= 1 && spec.k <= spec.n, ErrorKind::InfeasibleSpec, "k must satisfy 1 <= k <= n");
  require(std::isfinite(spec.target_cond_V) && spec.target_cond_V >= 1, ErrorKind::InfeasibleSpec, "target_cond_V must be >= 1");
  require(std::isfinite(spec.b_fro) && spec.b_fro > 0, ErrorKind::InfeasibleSpec, "b_fro must be positive");
  const std::size_t n = static_cast<std::size_t>(spec.n);
  numerics::Rng rng(spec.seed);

  ComplexVector eig;
  eig.reserve(n);
  if (spec.hermitian) {
    require(spec.target_cond_V == 1, ErrorKind::InfeasibleSpec, "Hermitian systems require target_cond_V = 1");
    require(spec.region.real_subset(), ErrorKind::InfeasibleSpec, "Hermitian systems need a real eigenvalue region");
    const int m = spec.stable_count.value_or(spec.n);
    require(m >= 0 && m <= spec.n, ErrorKind::InfeasibleSpec, "stable_count must lie in [0, n]");
    if (m > 0) {
      for (const auto& z : spec.region.boundary_grid(64))
        require(std::abs(z.real()) <= 1 + 1e-12, ErrorKind::InfeasibleSpec,
                "stable eigenvalue region must lie within [-1, 1]");
    }
    for (int i = 0; i < m; ++i) eig.emplace_back(spec.region.sample(rng).real());
    for (int i = m; i < spec.n; ++i) {
      const double mag = 2.0 - rng.uniform();  // (1, 2]
      eig.emplace_back(rng.uniform() < 0.5 ? -mag : mag);
    }
  } else {
    require(!spec.stable_count || *spec.stable_count == spec.n, ErrorKind::InfeasibleSpec,
            "stable_count applies to Hermitian mode only");
    for (std::size_t i = 0; i < n; ++i) eig.push_back(numerics::from_std(spec.region.sample(rng)));
  }

  ComplexMatrix v, v_inv;
  if (spec.hermitian) {
    v = random_unitary(rng, n);
    v_inv = numerics::adjoint(v);
  } else {
    const ComplexMatrix u1 = random_unitary(rng, n);
    const ComplexMatrix u2 = random_unitary(rng, n);
    ComplexVector sigma(n), sigma_inv(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double frac = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
      const double s = std::pow(spec.target_cond_V, -frac);
      sigma[i] = cplx(s);
      sigma_inv[i] = cplx(1 / s);
    }
    v = numerics::multiply(numerics::multiply(u1, numerics::diagonal_matrix(sigma)), u2);
    v_inv = numerics::multiply(numerics::multiply(numerics::adjoint(u2), numerics::diagonal_matrix(sigma_inv)),
                               numerics::adjoint(u1));
  }
  ComplexMatrix a = numerics::multiply(numerics::multiply(v_inv, numerics::diagonal_matrix(eig)), v);
  if (spec.hermitian) {
    for (std::size_t i = 0; i < n; ++i) {
      a(i, i).im = 0;
      for (std::size_t j = i + 1; j < n; ++j) {
        const cplx avg = (a(i, j) + numerics::conj(a(j, i))) / 2.0;
        a(i, j) = avg;
        a(j, i) = numerics::conj(avg);
      }
    }
  }

  ComplexMatrix b(n, static_cast<std::size_t>(spec.k));
  for (auto& z : b.data()) z = numerics::from_std(rng.complex_normal());
  const double scale = spec.b_fro / numerics::frobenius_norm(b);
  for (auto& z : b.data()) z *= scale;

  const double cond = spec.hermitian ? 1.0 : spec.target_cond_V;
  return GeneratedSystem{LinearSystem(std::move(a), std::move(b)), std::move(v), std::move(eig), cond};
}

LinearSystem generate(const SystemSpec& spec) { return generate_with_structure(spec).system; }

ComplexVector simulate(const LinearSystem& sys, const ComplexVector& x0, const std::vector<ComplexVector>& inputs) {
  require(x0.size() == sys.n(), ErrorKind::DimensionMismatch, "simulate: x0 must have n entries");
  ComplexVector x = x0;
  for (const auto& u : inputs) {
    require(u.size() == sys.k(), ErrorKind::DimensionMismatch, "simulate: each input must have k entries");
    ComplexVector next = numerics::multiply(sys.A(), x);
    const ComplexVector bu = numerics::multiply(sys.B(), u);
    for (std::size_t i = 0; i < next.size(); ++i) next[i] += bu[i];
    x = std::move(next);
  }
  return x;
}

LinearSystem lower_shift_system(std::size_t n) {
  ComplexMatrix a(n, n);
  for (std::size_t i = 1; i < n; ++i) a(i, i - 1) = cplx(1);
  ComplexMatrix b(n, 1);
  b(0, 0) = cplx(1);
  return LinearSystem(std::move(a), std::move(b));
}

}  // namespace ctrlcap::system

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ctrlcap/capacity/region.hpp"
#include "ctrlcap/numerics/matrix.hpp"

namespace ctrlcap::system {

using numerics::ComplexMatrix;
using numerics::ComplexVector;
using numerics::cplx;

/// x(t+1) = A x(t) + B u(t), A n x n, B n x k, 1 <= k <= n.
class LinearSystem {
 public:
  LinearSystem(ComplexMatrix a, ComplexMatrix b);

  const ComplexMatrix& A() const { return a_; }
  const ComplexMatrix& B() const { return b_; }
  std::size_t n() const { return a_.rows(); }
  std::size_t k() const { return b_.cols(); }
  double b_fro() const { return b_fro_; }

 private:
  ComplexMatrix a_;
  ComplexMatrix b_;
  double b_fro_;
};

/// V A V^-1 = D with D = diag(eigenvalues).
struct Diagonalization {
  ComplexMatrix V;
  ComplexVector eigenvalues;
  double cond_V = 1;
  bool defect_flag = false;
  bool hermitian = false;
  int precision_bits = 53;
};

/// Hermitian input takes the unitary route (cond_V = 1). Otherwise the
/// eigenvectors come from a complex Schur form; if cond(V) > 1e8 at 53 bits
/// the decomposition is redone at 256 bits and Defective is thrown when the
/// conditioning persists.
Diagonalization diagonalize(const ComplexMatrix& a);

/// ceil(n/k) - 1
int t_min(int n, int k);

struct SystemSpec {
  int n = 0;
  int k = 1;
  capacity::Region region = capacity::Region::interval(-1, 1);
  double target_cond_V = 1;
  bool hermitian = false;
  std::optional<int> stable_count;  // Hermitian mode; defaults to n
  std::uint64_t seed = 0;
  double b_fro = 1;
};

/// A generated system together with the similarity used to build it:
/// V A V^-1 = diag(eigenvalues) holds by construction.
struct GeneratedSystem {
  LinearSystem system;
  ComplexMatrix V;
  ComplexVector eigenvalues;
  double cond_V;
};

GeneratedSystem generate_with_structure(const SystemSpec& spec);
LinearSystem generate(const SystemSpec& spec);

/// Haar-distributed n x n unitary.
ComplexMatrix random_unitary(numerics::Rng& rng, std::size_t n);

/// Returns x(t) after feeding inputs u(0..t-1) from x(0) = x0.
ComplexVector simulate(const LinearSystem& sys, const ComplexVector& x0, const std::vector<ComplexVector>& inputs);

/// Lower-shift A (ones on the subdiagonal) with b = e_1.
LinearSystem lower_shift_system(std::size_t n);

}  // namespace ctrlcap::system

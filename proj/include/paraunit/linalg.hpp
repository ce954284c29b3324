#pragma once

#include <cstddef>
#include <vector>

#include "paraunit/matrix.hpp"

/// Dense complex kernels sized for desk-scale systems (n <= 64).
namespace paraunit::linalg {

/// Module tolerances. Every routine takes these through an optional argument
/// so callers can re-threshold.
struct Tolerances {
  double isometry = 1e-10;          // unitary_completion input check
  double hermitian = 1e-10;         // hermitian_eig input check (relative)
  double jacobi_off_diagonal = 1e-13;
  double stein_hermitian = 1e-12;   // Q Hermitian check (relative to 1 + ||Q||)
  double schur_margin = 1e-9;       // rho(A) < 1 - margin
};

inline constexpr std::size_t kSteinSizeLimit = 64;
inline constexpr std::size_t kEigenSizeLimit = 64;

struct QrResult {
  ComplexMatrix q;  // k x k unitary
  ComplexMatrix r;  // k x c upper triangular
};

/// Householder QR of a k x c matrix with full Q.
QrResult householder_qr(const ComplexMatrix& a);

/// Orthonormal completion of a k x r isometry: returns W (k x (k - r)) with
/// [V W] unitary. Throws NotIsometric with the measured residual.
ComplexMatrix unitary_completion(const ComplexMatrix& v, const Tolerances& tol = {});
ComplexMatrix unitary_completion(const ComplexMatrix& v, double isometry_tol);

struct HermitianEig {
  std::vector<double> values;  // ascending
  ComplexMatrix vectors;       // columns are eigenvectors
};

/// Cyclic complex Jacobi.
HermitianEig hermitian_eig(const ComplexMatrix& m, const Tolerances& tol = {});

/// All eigenvalues of a general square matrix (Hessenberg + shifted QR).
std::vector<Complex> eigenvalues(const ComplexMatrix& a);

/// max |lambda_i(A)|; 0 for an empty matrix.
double spectral_radius(const ComplexMatrix& a);

struct LuFactorization {
  ComplexMatrix lu;                // unit-lower L below the diagonal, U on and above
  std::vector<std::size_t> perm;   // row i of PA is row perm[i] of A
  int sign = 1;
  double min_pivot = 0.0;
  double max_pivot = 0.0;
};

/// Partial-pivot LU. Row elimination runs in parallel for large systems.
/// Never throws on singular input; inspect min_pivot.
LuFactorization lu_factor(ComplexMatrix a);
ComplexMatrix lu_solve(const LuFactorization& f, const ComplexMatrix& b);
Complex determinant(const ComplexMatrix& a);

/// Solve A X = B; throws SingularMatrix when a pivot vanishes.
ComplexMatrix solve(const ComplexMatrix& a, const ComplexMatrix& b);

enum class SteinSide {
  Controllability,  // W - A W A* = Q
  Observability,    // W - A* W A = Q
};

/// Stein (discrete Lyapunov) equation by Kronecker vectorization.
ComplexMatrix solve_stein(const ComplexMatrix& a, const ComplexMatrix& q, SteinSide side,
                          const Tolerances& tol = {});

/// Principal square root of a Hermitian positive semidefinite matrix
/// (negative eigenvalues clamped to zero).
ComplexMatrix psd_sqrt(const ComplexMatrix& m);

}  // namespace paraunit::linalg

#include "paraunit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "paraunit/errors.hpp"

namespace paraunit::linalg {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Rows of work below which LU elimination stays single-threaded.
constexpr std::size_t kParallelLuRows = 96;

Complex unit_phase(Complex x) {
  const double a = std::abs(x);
  return a == 0.0 ? Complex{1.0, 0.0} : x / a;
}

void require_square(const ComplexMatrix& a, const char* who) {
  if (!a.is_square()) {
    throw Error(ErrorCode::DimensionMismatch, std::string(who) + ": matrix must be square");
  }
}

}  // namespace

QrResult householder_qr(const ComplexMatrix& a) {
  const std::size_t k = a.rows(), c = a.cols();
  ComplexMatrix r = a;
  ComplexMatrix q = ComplexMatrix::identity(k);
  std::vector<Complex> w(k);
  std::vector<Complex> tmp(std::max(k, c));
  for (std::size_t j = 0; j < std::min(k, c); ++j) {
    double alpha2 = 0.0;
    for (std::size_t i = j; i < k; ++i) alpha2 += std::norm(r(i, j));
    const double alpha = std::sqrt(alpha2);
    if (alpha == 0.0) continue;
    const Complex phase = unit_phase(r(j, j));
    for (std::size_t i = j; i < k; ++i) w[i] = r(i, j);
    w[j] += phase * alpha;
    double wnorm2 = 0.0;
    for (std::size_t i = j; i < k; ++i) wnorm2 += std::norm(w[i]);
    if (wnorm2 == 0.0) continue;
    const double tau = 2.0 / wnorm2;

    // R <- (I - tau w w*) R on rows j.., cols j..
    for (std::size_t col = j; col < c; ++col) {
      Complex s = 0.0;
      for (std::size_t i = j; i < k; ++i) s += std::conj(w[i]) * r(i, col);
      s *= tau;
      for (std::size_t i = j; i < k; ++i) r(i, col) -= w[i] * s;
    }
    // Q <- Q (I - tau w w*)
    for (std::size_t row = 0; row < k; ++row) {
      Complex s = 0.0;
      for (std::size_t i = j; i < k; ++i) s += q(row, i) * w[i];
      s *= tau;
      for (std::size_t i = j; i < k; ++i) q(row, i) -= s * std::conj(w[i]);
    }
    for (std::size_t i = j + 1; i < k; ++i) r(i, j) = 0.0;
  }
  return {std::move(q), std::move(r)};
}

ComplexMatrix unitary_completion(const ComplexMatrix& v, const Tolerances& tol) {
  return unitary_completion(v, tol.isometry);
}

ComplexMatrix unitary_completion(const ComplexMatrix& v, double isometry_tol) {
  const std::size_t k = v.rows(), r = v.cols();
  if (r > k) {
    throw Error(ErrorCode::DimensionMismatch, "unitary_completion: more columns than rows");
  }
  const double defect = isometry_defect(v);
  if (!(defect <= isometry_tol)) {
    throw Error(ErrorCode::NotIsometric,
                "unitary_completion: V*V - I has norm " + std::to_string(defect), defect);
  }
  if (r == 0) return ComplexMatrix::identity(k);
  const QrResult qr = householder_qr(v);
  return qr.q.block(0, r, k, k - r);
}

HermitianEig hermitian_eig(const ComplexMatrix& m, const Tolerances& tol) {
  require_square(m, "hermitian_eig");
  const std::size_t n = m.rows();
  const double scale = m.frobenius_norm();
  const double asym = (m - m.adjoint()).frobenius_norm();
  if (asym > tol.hermitian * scale) {
    throw Error(ErrorCode::NotHermitian, "hermitian_eig: ||M - M*|| = " + std::to_string(asym),
                asym);
  }
  ComplexMatrix a = hermitian_part(m);
  ComplexMatrix v = ComplexMatrix::identity(n);

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
  };

  constexpr int kMaxSweeps = 100;
  const double target = tol.jacobi_off_diagonal * scale;
  int sweep = 0;
  for (; sweep < kMaxSweeps && off_norm() > target; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;
        // Phase e^{-i phi} on column q makes the (p,q) entry real, then a real
        // symmetric rotation annihilates it.
        const Complex ph = std::conj(apq) / mag;
        const double app = a(p, p).real(), aqq = a(q, q).real();
        const double theta = (aqq - app) / (2.0 * mag);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // J restricted to (p,q): [[c, s], [-s ph, c ph]]
        const Complex j_pp = c, j_pq = s, j_qp = -s * ph, j_qq = c * ph;
        for (std::size_t i = 0; i < n; ++i) {  // A <- A J
          const Complex aip = a(i, p), aiq = a(i, q);
          a(i, p) = aip * j_pp + aiq * j_qp;
          a(i, q) = aip * j_pq + aiq * j_qq;
        }
        for (std::size_t i = 0; i < n; ++i) {  // A <- J* A
          const Complex api = a(p, i), aqi = a(q, i);
          a(p, i) = std::conj(j_pp) * api + std::conj(j_qp) * aqi;
          a(q, i) = std::conj(j_pq) * api + std::conj(j_qq) * aqi;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (std::size_t i = 0; i < n; ++i) {  // V <- V J
          const Complex vip = v(i, p), viq = v(i, q);
          v(i, p) = vip * j_pp + viq * j_qp;
          v(i, q) = vip * j_pq + viq * j_qq;
        }
      }
    }
  }
  if (sweep == kMaxSweeps && off_norm() > target) {
    throw Error(ErrorCode::ConvergenceFailure, "hermitian_eig: Jacobi sweeps exhausted");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });
  HermitianEig out{std::vector<double>(n), ComplexMatrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

namespace {

// Unitary similarity to upper Hessenberg form.
void reduce_to_hessenberg(ComplexMatrix& h) {
  const std::size_t n = h.rows();
  std::vector<Complex> w(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double alpha2 = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) alpha2 += std::norm(h(i, k));
    const double alpha = std::sqrt(alpha2);
    if (alpha == 0.0) continue;
    const Complex phase = unit_phase(h(k + 1, k));
    for (std::size_t i = k + 1; i < n; ++i) w[i] = h(i, k);
    w[k + 1] += phase * alpha;
    double wnorm2 = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) wnorm2 += std::norm(w[i]);
    const double tau = 2.0 / wnorm2;
    for (std::size_t col = 0; col < n; ++col) {  // rows k+1..
      Complex s = 0.0;
      for (std::size_t i = k + 1; i < n; ++i) s += std::conj(w[i]) * h(i, col);
      s *= tau;
      for (std::size_t i = k + 1; i < n; ++i) h(i, col) -= w[i] * s;
    }
    for (std::size_t row = 0; row < n; ++row) {  // cols k+1..
      Complex s = 0.0;
      for (std::size_t i = k + 1; i < n; ++i) s += h(row, i) * w[i];
      s *= tau;
      for (std::size_t i = k + 1; i < n; ++i) h(row, i) -= s * std::conj(w[i]);
    }
    for (std::size_t i = k + 2; i < n; ++i) h(i, k) = 0.0;
  }
}

Complex wilkinson_shift(Complex a, Complex b, Complex c, Complex d) {
  const Complex half_tr = 0.5 * (a + d);
  const Complex disc = std::sqrt(0.25 * (a - d) * (a - d) + b * c);
  const Complex l1 = half_tr + disc, l2 = half_tr - disc;
  return std::abs(l1 - d) <= std::abs(l2 - d) ? l1 : l2;
}

}  // namespace

std::vector<Complex> eigenvalues(const ComplexMatrix& a) {
  require_square(a, "eigenvalues");
  const std::size_t n = a.rows();
  if (n > kEigenSizeLimit) {
    throw Error(ErrorCode::SizeLimitExceeded, "eigenvalues: n > " + std::to_string(kEigenSizeLimit));
  }
  if (!a.all_finite()) throw Error(ErrorCode::InvalidArgument, "eigenvalues: non-finite entry");
  std::vector<Complex> eig(n);
  if (n == 0) return eig;
  ComplexMatrix h = a;
  reduce_to_hessenberg(h);
  const double norm_h = std::max(h.frobenius_norm(), std::numeric_limits<double>::min());

  const std::size_t cap = 100 * n * n;
  std::size_t total = 0;
  int iter = 0;
  std::ptrdiff_t iu = static_cast<std::ptrdiff_t>(n) - 1;
  while (iu >= 0) {
    std::ptrdiff_t l = iu;
    while (l > 0) {
      double s = std::abs(h(l - 1, l - 1)) + std::abs(h(l, l));
      if (s == 0.0) s = norm_h;
      if (std::abs(h(l, l - 1)) <= kEps * s) {
        h(l, l - 1) = 0.0;
        break;
      }
      --l;
    }
    if (l == iu) {
      eig[static_cast<std::size_t>(iu)] = h(iu, iu);
      --iu;
      iter = 0;
      continue;
    }
    if (++total > cap) {
      throw Error(ErrorCode::ConvergenceFailure, "eigenvalues: QR iteration cap reached");
    }
    ++iter;
    Complex shift;
    if (iter % 10 == 0) {
      // exceptional shift to break cycles
      double e = std::abs(h(iu, iu - 1).real());
      if (iu >= 2) e += std::abs(h(iu - 1, iu - 2).real());
      shift = h(iu, iu) + Complex(0.75 * e, 0.25 * e);
    } else {
      shift = wilkinson_shift(h(iu - 1, iu - 1), h(iu - 1, iu), h(iu, iu - 1), h(iu, iu));
    }

    const auto lo = static_cast<std::size_t>(l), hi = static_cast<std::size_t>(iu);
    for (std::size_t k = lo; k <= hi; ++k) h(k, k) -= shift;
    struct Rot {
      Complex g11, g12, g21, g22;
    };
    std::vector<Rot> rots(hi - lo);
    for (std::size_t k = lo; k < hi; ++k) {
      const Complex x = h(k, k), y = h(k + 1, k);
      const double r = std::hypot(std::abs(x), std::abs(y));
      Rot g{1.0, 0.0, 0.0, 1.0};
      if (r > 0.0) g = {std::conj(x) / r, std::conj(y) / r, -y / r, x / r};
      rots[k - lo] = g;
      for (std::size_t col = k; col <= hi; ++col) {
        const Complex u = h(k, col), v = h(k + 1, col);
        h(k, col) = g.g11 * u + g.g12 * v;
        h(k + 1, col) = g.g21 * u + g.g22 * v;
      }
    }
    for (std::size_t k = lo; k < hi; ++k) {
      const Rot& g = rots[k - lo];
      const std::size_t row_end = std::min(k + 2, hi);
      for (std::size_t row = lo; row <= row_end; ++row) {
        const Complex u = h(row, k), v = h(row, k + 1);
        h(row, k) = u * std::conj(g.g11) + v * std::conj(g.g12);
        h(row, k + 1) = u * std::conj(g.g21) + v * std::conj(g.g22);
      }
    }
    for (std::size_t k = lo; k <= hi; ++k) h(k, k) += shift;
  }
  return eig;
}

double spectral_radius(const ComplexMatrix& a) {
  double r = 0.0;
  for (const Complex& l : eigenvalues(a)) r = std::max(r, std::abs(l));
  return r;
}

LuFactorization lu_factor(ComplexMatrix a) {
  require_square(a, "lu_factor");
  const std::size_t n = a.rows();
  LuFactorization f;
  f.perm.resize(n);
  std::iota(f.perm.begin(), f.perm.end(), 0);
  f.min_pivot = n == 0 ? 1.0 : std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(a(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double v = std::abs(a(i, k));
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    f.min_pivot = std::min(f.min_pivot, best);
    f.max_pivot = std::max(f.max_pivot, best);
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      std::swap(f.perm[k], f.perm[piv]);
      f.sign = -f.sign;
    }
    if (best == 0.0) continue;
    const Complex inv = 1.0 / a(k, k);
    const long long first = static_cast<long long>(k + 1), last = static_cast<long long>(n);
#pragma omp parallel for schedule(static) if (n - k > kParallelLuRows)
    for (long long ii = first; ii < last; ++ii) {
      const auto i = static_cast<std::size_t>(ii);
      const Complex factor = a(i, k) * inv;
      a(i, k) = factor;
      if (factor == Complex{}) continue;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= factor * a(k, j);
    }
  }
  f.lu = std::move(a);
  return f;
}

ComplexMatrix lu_solve(const LuFactorization& f, const ComplexMatrix& b) {
  const std::size_t n = f.lu.rows();
  if (b.rows() != n) throw Error(ErrorCode::DimensionMismatch, "lu_solve: rhs row count");
  const std::size_t m = b.cols();
  ComplexMatrix x(n, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) x(i, j) = b(f.perm[i], j);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < i; ++k) {
      const Complex l = f.lu(i, k);
      if (l == Complex{}) continue;
      for (std::size_t j = 0; j < m; ++j) x(i, j) -= l * x(k, j);
    }
  for (std::size_t ii = n; ii-- > 0;) {
    for (std::size_t k = ii + 1; k < n; ++k) {
      const Complex u = f.lu(ii, k);
      if (u == Complex{}) continue;
      for (std::size_t j = 0; j < m; ++j) x(ii, j) -= u * x(k, j);
    }
    const Complex inv = 1.0 / f.lu(ii, ii);
    for (std::size_t j = 0; j < m; ++j) x(ii, j) *= inv;
  }
  return x;
}

Complex determinant(const ComplexMatrix& a) {
  const LuFactorization f = lu_factor(a);
  Complex d = static_cast<double>(f.sign);
  for (std::size_t i = 0; i < f.lu.rows(); ++i) d *= f.lu(i, i);
  return d;
}

ComplexMatrix solve(const ComplexMatrix& a, const ComplexMatrix& b) {
  const LuFactorization f = lu_factor(a);
  if (!(f.min_pivot > kEps * 16.0 * std::max(1.0, f.max_pivot))) {
    throw Error(ErrorCode::SingularMatrix, "solve: matrix is numerically singular");
  }
  return lu_solve(f, b);
}

ComplexMatrix solve_stein(const ComplexMatrix& a, const ComplexMatrix& q, SteinSide side,
                          const Tolerances& tol) {
  require_square(a, "solve_stein");
  const std::size_t n = a.rows();
  if (q.rows() != n || q.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch, "solve_stein: Q must match A");
  }
  if (n > kSteinSizeLimit) {
    throw Error(ErrorCode::SizeLimitExceeded, "solve_stein: n > " + std::to_string(kSteinSizeLimit));
  }
  const double asym = (q - q.adjoint()).frobenius_norm();
  if (asym > tol.stein_hermitian * (1.0 + q.frobenius_norm())) {
    throw Error(ErrorCode::NotHermitian, "solve_stein: Q is not Hermitian", asym);
  }
  if (n == 0) return {};
  const double rho = spectral_radius(a);
  if (!(rho < 1.0 - tol.schur_margin)) {
    throw Error(ErrorCode::NotSchurStable, "solve_stein: spectral radius " + std::to_string(rho), rho);
  }

  // Column-stacked vec: vec(X M Y) = (Y^T kron X) vec(M).
  //   W - A W A* = Q   ->  (I - conj(A) kron A) vec W = vec Q
  //   W - A* W A = Q   ->  (I - A^T kron A*) vec W = vec Q
  ComplexMatrix op = side == SteinSide::Controllability ? kron(a.conjugate(), a)
                                                        : kron(a.transpose(), a.adjoint());
  const std::size_t nn = n * n;
  for (std::size_t i = 0; i < nn; ++i)
    for (std::size_t j = 0; j < nn; ++j) op(i, j) = (i == j ? 1.0 : 0.0) - op(i, j);
  ComplexMatrix rhs(nn, 1);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) rhs(j * n + i, 0) = q(i, j);
  const ComplexMatrix x = solve(op, rhs);
  ComplexMatrix w(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) w(i, j) = x(j * n + i, 0);
  return hermitian_part(w);
}

ComplexMatrix psd_sqrt(const ComplexMatrix& m) {
  if (m.rows() == 0) return {};
  const HermitianEig e = hermitian_eig(m);
  const std::size_t n = m.rows();
  ComplexMatrix scaled = e.vectors;
  for (std::size_t k = 0; k < n; ++k) {
    const double s = std::sqrt(std::max(0.0, e.values[k]));
    for (std::size_t i = 0; i < n; ++i) scaled(i, k) *= s;
  }
  return scaled * e.vectors.adjoint();
}

}  // namespace paraunit::linalg

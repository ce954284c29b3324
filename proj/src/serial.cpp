#include "paraunit/serial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "paraunit/errors.hpp"

namespace paraunit::serial {

ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw Error(ErrorCode::DimensionMismatch, "multiply: inner dimensions differ");
  const std::size_t n = a.rows(), k = a.cols(), m = b.cols();
  ComplexMatrix c(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t l = 0; l < k; ++l) {
      const Complex aik = a(i, l);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < m; ++j) c(i, j) += aik * b(l, j);
    }
  }
  return c;
}

linalg::LuFactorization lu_factor(ComplexMatrix a) {
  if (!a.is_square()) throw Error(ErrorCode::DimensionMismatch, "lu_factor: matrix must be square");
  const std::size_t n = a.rows();
  linalg::LuFactorization f;
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
    for (std::size_t i = k + 1; i < n; ++i) {
      const Complex factor = a(i, k) * inv;
      a(i, k) = factor;
      if (factor == Complex{}) continue;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= factor * a(k, j);
    }
  }
  f.lu = std::move(a);
  return f;
}

Certificate circle_residual(const AnyForm& f, std::size_t samples, double tol) {
  if (samples < 8) throw Error(ErrorCode::InvalidArgument, "circle_residual needs at least 8 samples");
  ComplexMatrix witness(samples, 1);
  double worst = 0.0;
  for (std::size_t k = 0; k < samples; ++k) {
    const Complex z = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) /
                                          static_cast<double>(samples));
    const double d = unitarity_defect(eval(f, z));
    witness(k, 0) = d;
    worst = std::max(worst, d);
  }
  return make_certificate("circle", worst, tol, std::move(witness));
}

double objective(const BlaschkePotapovForm& f, const SampleSet& samples) {
  samples.validate();
  if (f.p() != samples.p || f.m() != samples.m) {
    throw Error(ErrorCode::DimensionMismatch, "objective: function and samples differ in shape");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double e = (eval(f, samples.points[i]) - samples.values[i]).frobenius_norm();
    total += e * e;
  }
  return total;
}

FitResult fit_lossless(const SampleSet& samples, std::size_t d, std::size_t p, std::size_t m,
                       Side side, std::uint64_t seed, std::size_t restarts, const NelderMeadOptions& opts) {
  samples.validate();
  if (samples.p != p || samples.m != m) {
    throw Error(ErrorCode::DimensionMismatch, "fit_lossless: samples are not p x m");
  }
  if (restarts == 0) throw Error(ErrorCode::InvalidArgument, "fit_lossless: restarts >= 1");
  if (samples.size() < 2 * d + 1) {
    throw Error(ErrorCode::InvalidArgument, "fit_lossless: need at least 2d + 1 samples");
  }
  FitResult best;
  best.objective = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < restarts; ++i) {
    const ParaunitaryParam pattern = fitdetail::restart_start(samples, d, side, seed, i);
    auto f = [&](std::span<const double> x) {
      return serial::objective(build_paraunitary(fitdetail::from_coordinates(pattern, x)), samples);
    };
    NelderMeadResult nm = nelder_mead(f, fitdetail::to_coordinates(pattern), opts);
    FitResult r;
    r.params = fitdetail::from_coordinates(pattern, nm.x);
    r.objective = serial::objective(build_paraunitary(r.params), samples);
    r.iterations = nm.iterations;
    r.converged = nm.converged;
    r.history = std::move(nm.history);
    if (r.objective < best.objective) best = std::move(r);
  }
  return best;
}

}  // namespace paraunit::serial

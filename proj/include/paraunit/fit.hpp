#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "paraunit/matrix.hpp"
#include "paraunit/param.hpp"
#include "paraunit/repr.hpp"

namespace paraunit {

/// Target samples (z_k, G_k); every G_k is p x m.
struct SampleSet {
  std::size_t p = 1, m = 1;
  std::vector<Complex> points;
  std::vector<ComplexMatrix> values;

  std::size_t size() const noexcept { return points.size(); }
  /// Throws DimensionMismatch.
  void validate() const;
};

/// Samples of f at the N-th roots of unity.
SampleSet circle_samples(const AnyForm& f, std::size_t n);

/// sum_k || F(z_k) - G_k ||_F^2
double objective(const BlaschkePotapovForm& f, const SampleSet& samples);
double objective(const ParaunitaryParam& params, const SampleSet& samples);

struct NelderMeadOptions {
  std::size_t max_evaluations = 200000;
  double diameter_tol = 1e-10;
  double objective_tol = 1e-12;
  double initial_step = 0.5;
  /// Times the simplex may be rebuilt around the best vertex after it
  /// collapses, as long as each rebuild still improves the best value.
  std::size_t max_rebuilds = 50;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
  bool converged = false;
  std::vector<double> history;  // best value after each iteration
};

/// Adaptive-coefficient Nelder-Mead. Non-finite values count as +inf.
NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                             std::vector<double> x0, const NelderMeadOptions& opts = {});

struct FitResult {
  ParaunitaryParam params;
  double objective = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<double> history;
};

/// Schur-stable degree-d fit by Nelder-Mead from `restarts` seeded starts.
/// Each start fixes its Zero/Polar pole pattern; radii and angles are free.
FitResult fit_lossless(const SampleSet& samples, std::size_t d, std::size_t p, std::size_t m,
                       Side side, std::uint64_t seed, std::size_t restarts,
                       const NelderMeadOptions& opts = {});

namespace fitdetail {

/// Unconstrained coordinates of a Schur-stable parameter set: for each
/// Polar slot (x, theta) with r = (1 - delta) / (1 + e^{-x}), then every
/// angle. Zero slots carry no coordinate.
std::vector<double> to_coordinates(const ParaunitaryParam& params);
/// Inverse of to_coordinates given the pattern's pole tags; angles wrapped
/// into [0, 2 pi).
ParaunitaryParam from_coordinates(const ParaunitaryParam& pattern, std::span<const double> x);
/// Seed of restart i.
std::uint64_t restart_seed(std::uint64_t seed, std::size_t i);
/// Starting point of restart i. Restart 0 uses Polar for every slot.
ParaunitaryParam restart_start(const SampleSet& samples, std::size_t d, Side side,
                               std::uint64_t seed, std::size_t i);

}  // namespace fitdetail

}  // namespace paraunit

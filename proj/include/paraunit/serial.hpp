#pragma once

// Single-threaded reference versions of the OpenMP kernels. Each performs
// the same floating-point operations in the same order as its parallel
// counterpart, so results agree bit for bit.

#include <cstddef>
#include <cstdint>

#include "paraunit/analysis.hpp"
#include "paraunit/fit.hpp"
#include "paraunit/linalg.hpp"
#include "paraunit/matrix.hpp"

namespace paraunit::serial {

ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b);
linalg::LuFactorization lu_factor(ComplexMatrix a);
Certificate circle_residual(const AnyForm& f, std::size_t samples, double tol);
double objective(const BlaschkePotapovForm& f, const SampleSet& samples);
FitResult fit_lossless(const SampleSet& samples, std::size_t d, std::size_t p, std::size_t m,
                       Side side, std::uint64_t seed, std::size_t restarts,
                       const NelderMeadOptions& opts = {});

}  // namespace paraunit::serial

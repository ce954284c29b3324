#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "paraunit/matrix.hpp"
#include "paraunit/repr.hpp"

namespace paraunit {

enum class Verdict { Pass, Fail };

/// Outcome of one para-unitarity test. Raw residuals are always kept so the
/// caller can re-threshold.
struct Certificate {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  Verdict verdict = Verdict::Fail;
  std::optional<ComplexMatrix> witness;

  bool passed() const noexcept { return verdict == Verdict::Pass; }
};

Certificate make_certificate(std::string name, double residual, double tolerance,
                             std::optional<ComplexMatrix> witness = std::nullopt);

bool all_pass(const std::vector<Certificate>& certs);
double worst_residual(const std::vector<Certificate>& certs);

namespace defaults {
inline constexpr std::size_t kCircleSamples = 64;
inline constexpr double kCircleTol = 1e-8;
inline constexpr double kRealizationTol = 1e-10;
inline constexpr double kGramianTol = 1e-8;
inline constexpr double kMfdTolScale = 1e-9;
inline constexpr double kLaurentTol = 1e-9;
inline constexpr double kDegreeThreshold = 1e-9;
}  // namespace defaults

/// ||F*F - I_m||_F when p >= m, ||FF* - I_p||_F otherwise.
double unitarity_defect(const ComplexMatrix& value);

/// max_k ||F(z_k)*F(z_k) - I_m||_F (p >= m) or ||F F* - I_p||_F (m > p)
/// over z_k = exp(2 pi i k / N). Samples are evaluated in parallel.
Certificate circle_residual(const AnyForm& f, std::size_t samples = defaults::kCircleSamples,
                            double tol = defaults::kCircleTol);

/// R* R = I (p >= m) and/or R R* = I (m >= p); both when p == m.
std::vector<Certificate> realization_check(const StateSpaceRealization& ss,
                                           double tol = defaults::kRealizationTol);

struct GramianReport {
  ComplexMatrix w_cont;
  ComplexMatrix w_obs;
  std::vector<Certificate> certificates;
};

/// Gramians from the two Stein equations plus the identity/PSD certificates
/// that a lossless realization must satisfy. Throws NotSchurStable.
GramianReport gramian_certificate(const StateSpaceRealization& ss,
                                  double tol = defaults::kGramianTol);

/// Block (i, j) = coeffs[i + j] when i + j <= L, zero otherwise.
ComplexMatrix block_hankel(const std::vector<ComplexMatrix>& coeffs);

/// Hankel test on a (possibly reducible) matrix fraction description.
/// Tolerance is tol_scale * (1 + sum ||Delta_j||_F^2).
Certificate mfd_check(const MFDForm& mfd, double tol_scale = defaults::kMfdTolScale);

/// Hankel test on z^q (B_0 + ... + z^gamma B_gamma); independent of q.
Certificate laurent_check(const LaurentPolyForm& lp, double tol = defaults::kLaurentTol);

/// Rank of W_cont W_obs (eigenvalues above threshold). Throws NotSchurStable.
std::size_t mcmillan_degree(const StateSpaceRealization& ss,
                            double threshold = defaults::kDegreeThreshold);

}  // namespace paraunit

#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "paraunit/matrix.hpp"

namespace paraunit {

/// Which dimension dominates: Iso for p >= m (F*F = I on the circle), Coiso
/// for m >= p (FF* = I). Square functions may use either.
enum class Side { Iso, Coiso };

/// Pole of a Blaschke-Potapov factor: a finite point off the unit circle or
/// the point at infinity.
class Pole {
 public:
  static constexpr double kCircleMargin = 1e-8;

  /// Throws InvalidArgument if | |alpha| - 1 | <= kCircleMargin.
  static Pole finite(Complex alpha);
  static Pole infinity() { return Pole(); }

  bool is_infinite() const noexcept { return infinite_; }
  /// Meaningless for the pole at infinity.
  Complex value() const noexcept { return value_; }
  bool inside_disk() const noexcept { return !infinite_ && std::abs(value_) < 1.0; }
  /// alpha -> 1 / conj(alpha); 0 <-> infinity.
  Pole reflected() const;

  friend bool operator==(const Pole&, const Pole&) = default;

 private:
  Pole() = default;
  bool infinite_ = true;
  Complex value_{};
};

/// phi_alpha(z) = (1 - conj(alpha) z) / (z - alpha); phi_inf(z) = z.
Complex blaschke_scalar(const Pole& alpha, Complex z);

/// 1 / phi_alpha(z) = phase * phi_beta(z) with beta = 1 / conj(alpha) and
/// |phase| = 1 (phase = alpha / conj(alpha), or 1 when alpha is 0 or inf).
struct ReciprocalBlaschke {
  Pole pole;
  Complex phase;
};
ReciprocalBlaschke reciprocal_blaschke(const Pole& alpha);

struct BlaschkeFactor {
  Pole pole;
  ComplexMatrix v;  // k x 1 unit vector, k = p (Iso) or m (Coiso)
};

/// Iso:   F(z) = prod_j (I_p + (phi_j(z) - 1) v_j v_j*) * U
/// Coiso: F(z) = U * prod_j (I_m + (phi_j(z) - 1) v_j v_j*)
/// factors[0] is leftmost in the product.
class BlaschkePotapovForm {
 public:
  static constexpr double kIsometryTol = 1e-10;
  static constexpr double kRenormalizeTol = 1e-6;

  /// Validates side vs. shape, the constant's (co)isometry and the
  /// directions' unit norm (renormalizing those within kRenormalizeTol).
  static BlaschkePotapovForm create(Side side, ComplexMatrix constant,
                                    std::vector<BlaschkeFactor> factors);
  /// No validation. Used to build deliberately broken inputs.
  static BlaschkePotapovForm unchecked(Side side, ComplexMatrix constant,
                                       std::vector<BlaschkeFactor> factors);

  Side side() const noexcept { return side_; }
  std::size_t p() const noexcept { return constant_.rows(); }
  std::size_t m() const noexcept { return constant_.cols(); }
  /// Dimension of the factor space: p for Iso, m for Coiso.
  std::size_t factor_dim() const noexcept { return side_ == Side::Iso ? p() : m(); }
  std::size_t degree() const noexcept { return factors_.size(); }
  const ComplexMatrix& constant() const noexcept { return constant_; }
  const std::vector<BlaschkeFactor>& factors() const noexcept { return factors_; }

  bool all_poles_inside() const;

 private:
  BlaschkePotapovForm(Side side, ComplexMatrix constant, std::vector<BlaschkeFactor> factors)
      : side_(side), constant_(std::move(constant)), factors_(std::move(factors)) {}

  Side side_ = Side::Iso;
  ComplexMatrix constant_;
  std::vector<BlaschkeFactor> factors_;
};

/// F(z) = C (zI - A)^{-1} B + D.
struct StateSpaceRealization {
  ComplexMatrix a, b, c, d;

  StateSpaceRealization() = default;
  /// Throws DimensionMismatch on inconsistent blocks.
  StateSpaceRealization(ComplexMatrix a, ComplexMatrix b, ComplexMatrix c, ComplexMatrix d);

  std::size_t n() const noexcept { return a.rows(); }
  std::size_t p() const noexcept { return d.rows(); }
  std::size_t m() const noexcept { return d.cols(); }

  /// [[A, B], [C, D]], (n + p) x (n + m).
  ComplexMatrix realization_matrix() const;
  static StateSpaceRealization from_realization_matrix(const ComplexMatrix& r, std::size_t n);
};

enum class MfdSide { Right, Left };

/// Right: F = N(z) Delta(z)^{-1}, Delta m x m.
/// Left:  F = Delta(z)^{-1} N(z), Delta p x p.
/// Both polynomials are stored padded to the same degree, coefficient j
/// multiplying z^j.
struct MFDForm {
  static constexpr double kDenominatorRankTol = 1e-12;

  MfdSide side = MfdSide::Right;
  std::size_t p = 0, m = 0;
  std::vector<ComplexMatrix> num;
  std::vector<ComplexMatrix> den;

  std::size_t degree() const noexcept { return num.empty() ? 0 : num.size() - 1; }
  /// Shapes, equal lengths, and det(den(z0)) != 0 at fixed probe points.
  void validate() const;
};

/// F(z) = z^q (B_0 + z B_1 + ... + z^gamma B_gamma).
struct LaurentPolyForm {
  int q = 0;
  std::vector<ComplexMatrix> coeffs;

  std::size_t gamma() const noexcept { return coeffs.empty() ? 0 : coeffs.size() - 1; }
  std::size_t p() const noexcept { return coeffs.empty() ? 0 : coeffs.front().rows(); }
  std::size_t m() const noexcept { return coeffs.empty() ? 0 : coeffs.front().cols(); }
  void validate() const;
};

using AnyForm = std::variant<BlaschkePotapovForm, StateSpaceRealization, MFDForm, LaurentPolyForm>;

/// Poles closer than this to z raise EvalAtPole.
inline constexpr double kPoleProximity = 1e-9;

ComplexMatrix eval(const BlaschkePotapovForm& f, Complex z);
ComplexMatrix eval(const StateSpaceRealization& f, Complex z);
ComplexMatrix eval(const MFDForm& f, Complex z);
ComplexMatrix eval(const LaurentPolyForm& f, Complex z);
ComplexMatrix eval(const AnyForm& f, Complex z);

std::size_t rows_of(const AnyForm& f);
std::size_t cols_of(const AnyForm& f);

/// F#(z) = (F(1/conj z))*. Sides swap, factor order reverses, poles reflect.
BlaschkePotapovForm conjugate(const BlaschkePotapovForm& f);

/// Factor generalised by a unimodular phase: I + (phase * phi(z) - 1) v v*.
/// Equal to (I + (phase - 1) v v*) (I + (phi(z) - 1) v v*), a constant
/// unitary that commutes with the factor.
struct PhasedFactor {
  Pole pole;
  ComplexMatrix v;
  Complex phase{1.0, 0.0};
};

/// Builds a Blaschke-Potapov form of the requested side equal to
/// prefix * X_1 * ... * X_d * suffix, where each X_j is a PhasedFactor.
/// For Iso the prefix must be a square unitary (it is pushed to the right
/// through the product); for Coiso the suffix must be square unitary.
BlaschkePotapovForm assemble(Side side, const ComplexMatrix& prefix,
                             const std::vector<PhasedFactor>& factors,
                             const ComplexMatrix& suffix);

}  // namespace paraunit

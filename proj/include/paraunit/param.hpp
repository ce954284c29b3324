#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "paraunit/matrix.hpp"
#include "paraunit/repr.hpp"

namespace paraunit {

/// Pole slot of the real parameter set: 0, infinity, or r e^{i theta} with
/// r > 0, r != 1.
struct PoleParam {
  enum class Kind { Zero, Infinity, Polar };
  Kind kind = Kind::Zero;
  double r = 0.0;
  double theta = 0.0;

  static PoleParam zero() { return {Kind::Zero, 0.0, 0.0}; }
  static PoleParam infinity() { return {Kind::Infinity, 0.0, 0.0}; }
  static PoleParam polar(double r, double theta) { return {Kind::Polar, r, theta}; }

  Pole to_pole() const;
  bool schur() const noexcept { return kind == Kind::Zero || (kind == Kind::Polar && r < 1.0); }

  friend bool operator==(const PoleParam&, const PoleParam&) = default;
};

/// Real description of a degree-d para-unitary function: d pole slots,
/// 2(k - 1) direction angles per factor (k = p for Iso, m for Coiso), and
/// m(2p - m) (resp. p(2m - p)) angles for the constant.
struct ParaunitaryParam {
  Side side = Side::Iso;
  std::size_t p = 1, m = 1;
  std::vector<PoleParam> poles;
  std::vector<std::vector<double>> directions;
  std::vector<double> frame;

  std::size_t degree() const noexcept { return poles.size(); }
  /// Directions then frame, flattened.
  std::vector<double> angles() const;
  /// Throws AngleCountMismatch / InvalidArgument.
  void validate() const;

  friend bool operator==(const ParaunitaryParam&, const ParaunitaryParam&) = default;
};

struct ParamCount {
  std::size_t pole_slots = 0;
  std::size_t angle_count = 0;
  friend bool operator==(const ParamCount&, const ParamCount&) = default;
};

ParamCount param_count(Side side, std::size_t p, std::size_t m, std::size_t d);

/// Hyperspherical unit vector: component j has magnitude
/// cos(t_j) * prod_{i<j} sin(t_i) (last one: prod of all sines) and phase
/// phases[j]. With fix_global_phase, phases[0] is ignored and taken as 0.
ComplexMatrix unit_vector_from_angles(std::size_t k, std::span<const double> polar,
                                      std::span<const double> phases, bool fix_global_phase);

/// Direction of a factor from its 2(k - 1) angles: k - 1 polar angles
/// followed by the k - 1 phases of components 2..k.
ComplexMatrix direction_from_angles(std::size_t k, std::span<const double> angles);

/// p x m isometry (p >= m) from m(2p - m) angles. Column c is a unit vector
/// of C^{p-c} (p - c - 1 polar angles, p - c phases) expressed in an
/// orthonormal basis of the complement of columns 0..c-1.
ComplexMatrix isometry_from_angles(std::size_t p, std::size_t m, std::span<const double> angles);

BlaschkePotapovForm build_paraunitary(const ParaunitaryParam& params);

/// Seeded draw. Pole slots: Zero with probability 1/8; otherwise a polar pole
/// with r in (0, 1 - delta) or, unless schur_only, Infinity (1/8) or
/// r in (1 + delta, 10]. Angles uniform in [0, 2 pi).
ParaunitaryParam random_params(std::uint64_t seed, Side side, std::size_t p, std::size_t m,
                               std::size_t d, bool schur_only);

inline constexpr double kPoleMargin = 1e-3;
inline constexpr double kMaxPolarRadius = 10.0;

}  // namespace paraunit

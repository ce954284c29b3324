#include "paraunit/param.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "paraunit/errors.hpp"
#include "paraunit/linalg.hpp"

namespace paraunit {

Pole PoleParam::to_pole() const {
  switch (kind) {
    case Kind::Zero: return Pole::finite(0.0);
    case Kind::Infinity: return Pole::infinity();
    case Kind::Polar: return Pole::finite(std::polar(r, theta));
  }
  return Pole::infinity();
}

namespace {

std::size_t factor_space(Side side, std::size_t p, std::size_t m) { return side == Side::Iso ? p : m; }

std::size_t frame_angles(Side side, std::size_t p, std::size_t m) {
  return side == Side::Iso ? m * (2 * p - m) : p * (2 * m - p);
}

}  // namespace

ParamCount param_count(Side side, std::size_t p, std::size_t m, std::size_t d) {
  if (p == 0 || m == 0) throw Error(ErrorCode::InvalidArgument, "param_count: p, m >= 1");
  if ((side == Side::Iso && p < m) || (side == Side::Coiso && m < p)) {
    throw Error(ErrorCode::SideMismatch, "param_count: side does not match shape");
  }
  const std::size_t k = factor_space(side, p, m);
  return {d, 2 * d * (k - 1) + frame_angles(side, p, m)};
}

std::vector<double> ParaunitaryParam::angles() const {
  std::vector<double> out;
  for (const auto& dir : directions) out.insert(out.end(), dir.begin(), dir.end());
  out.insert(out.end(), frame.begin(), frame.end());
  return out;
}

void ParaunitaryParam::validate() const {
  const ParamCount count = param_count(side, p, m, poles.size());
  const std::size_t k = factor_space(side, p, m);
  if (directions.size() != poles.size()) {
    throw Error(ErrorCode::AngleCountMismatch, "one direction angle list per pole slot required");
  }
  for (const auto& dir : directions) {
    if (dir.size() != 2 * (k - 1)) {
      throw Error(ErrorCode::AngleCountMismatch,
                  "direction needs " + std::to_string(2 * (k - 1)) + " angles, got " +
                      std::to_string(dir.size()));
    }
  }
  if (frame.size() != frame_angles(side, p, m)) {
    throw Error(ErrorCode::AngleCountMismatch,
                "frame needs " + std::to_string(frame_angles(side, p, m)) + " angles, got " +
                    std::to_string(frame.size()));
  }
  if (angles().size() != count.angle_count) {
    throw Error(ErrorCode::AngleCountMismatch, "total angle count mismatch");
  }
  for (double a : angles()) {
    if (!std::isfinite(a)) throw Error(ErrorCode::InvalidArgument, "non-finite angle");
  }
  for (const auto& pp : poles) {
    if (pp.kind != PoleParam::Kind::Polar) continue;
    if (!(pp.r > 0.0) || !std::isfinite(pp.r) || !std::isfinite(pp.theta) ||
        std::abs(pp.r - 1.0) <= Pole::kCircleMargin) {
      throw Error(ErrorCode::InvalidArgument, "polar pole needs r > 0, r != 1");
    }
  }
}

ComplexMatrix unit_vector_from_angles(std::size_t k, std::span<const double> polar,
                                      std::span<const double> phases, bool fix_global_phase) {
  if (k == 0 || polar.size() != k - 1 || phases.size() != k) {
    throw Error(ErrorCode::AngleCountMismatch, "unit_vector_from_angles: need k-1 polar and k phase angles");
  }
  ComplexMatrix v(k, 1);
  double sines = 1.0;
  for (std::size_t j = 0; j < k; ++j) {
    const double mag = j + 1 < k ? std::cos(polar[j]) * sines : sines;
    if (j + 1 < k) sines *= std::sin(polar[j]);
    const double phase = (j == 0 && fix_global_phase) ? 0.0 : phases[j];
    v(j, 0) = std::polar(mag, phase);
  }
  return v;
}

ComplexMatrix direction_from_angles(std::size_t k, std::span<const double> angles) {
  if (angles.size() != 2 * (k - 1)) {
    throw Error(ErrorCode::AngleCountMismatch, "direction_from_angles: need 2(k-1) angles");
  }
  std::vector<double> phases(k, 0.0);
  for (std::size_t j = 1; j < k; ++j) phases[j] = angles[k - 1 + (j - 1)];
  return unit_vector_from_angles(k, angles.subspan(0, k - 1), phases, true);
}

ComplexMatrix isometry_from_angles(std::size_t p, std::size_t m, std::span<const double> angles) {
  if (p < m || m == 0) throw Error(ErrorCode::InvalidArgument, "isometry_from_angles: need p >= m >= 1");
  if (angles.size() != m * (2 * p - m)) {
    throw Error(ErrorCode::AngleCountMismatch,
                "isometry_from_angles: need " + std::to_string(m * (2 * p - m)) + " angles, got " +
                    std::to_string(angles.size()));
  }
  ComplexMatrix u(p, m);
  std::size_t offset = 0;
  for (std::size_t c = 0; c < m; ++c) {
    const std::size_t q = p - c;
    const auto polar = angles.subspan(offset, q - 1);
    const auto phases = angles.subspan(offset + q - 1, q);
    offset += 2 * q - 1;
    const ComplexMatrix local = unit_vector_from_angles(q, polar, phases, false);
    const ComplexMatrix basis = linalg::unitary_completion(u.block(0, 0, p, c), 1e-8);
    u.set_block(0, c, basis * local);
  }
  return u;
}

BlaschkePotapovForm build_paraunitary(const ParaunitaryParam& params) {
  params.validate();
  const std::size_t k = factor_space(params.side, params.p, params.m);
  std::vector<BlaschkeFactor> factors;
  factors.reserve(params.degree());
  for (std::size_t j = 0; j < params.degree(); ++j) {
    factors.push_back({params.poles[j].to_pole(), direction_from_angles(k, params.directions[j])});
  }
  ComplexMatrix constant = params.side == Side::Iso
                               ? isometry_from_angles(params.p, params.m, params.frame)
                               : isometry_from_angles(params.m, params.p, params.frame).adjoint();
  return BlaschkePotapovForm::create(params.side, std::move(constant), std::move(factors));
}

namespace {

// Uniform in the open interval (0, 1), independent of the standard
// library's distribution implementations.
double open_unit(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

double angle(std::mt19937_64& rng) { return 2.0 * std::numbers::pi * open_unit(rng); }

}  // namespace

ParaunitaryParam random_params(std::uint64_t seed, Side side, std::size_t p, std::size_t m,
                               std::size_t d, bool schur_only) {
  param_count(side, p, m, d);  // shape check
  std::mt19937_64 rng(seed);
  ParaunitaryParam out;
  out.side = side;
  out.p = p;
  out.m = m;
  const std::size_t k = factor_space(side, p, m);
  for (std::size_t j = 0; j < d; ++j) {
    const double u = open_unit(rng);
    const double r = open_unit(rng);
    const double theta = angle(rng);
    if (u < 0.125) {
      out.poles.push_back(PoleParam::zero());
    } else if (schur_only) {
      out.poles.push_back(PoleParam::polar((1.0 - kPoleMargin) * r, theta));
    } else if (u < 0.25) {
      out.poles.push_back(PoleParam::infinity());
    } else if (u < 0.625) {
      out.poles.push_back(PoleParam::polar((1.0 - kPoleMargin) * r, theta));
    } else {
      out.poles.push_back(PoleParam::polar(1.0 + kPoleMargin + r * (kMaxPolarRadius - 1.0 - kPoleMargin), theta));
    }
  }
  for (std::size_t j = 0; j < d; ++j) {
    std::vector<double> dir(2 * (k - 1));
    for (auto& a : dir) a = angle(rng);
    out.directions.push_back(std::move(dir));
  }
  out.frame.resize(frame_angles(side, p, m));
  for (auto& a : out.frame) a = angle(rng);
  return out;
}

}  // namespace paraunit

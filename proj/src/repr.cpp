#include "paraunit/repr.hpp"

#include <cmath>
#include <string>

#include "paraunit/errors.hpp"
#include "paraunit/linalg.hpp"

namespace paraunit {

Pole Pole::finite(Complex alpha) {
  if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag())) {
    throw Error(ErrorCode::InvalidArgument, "pole must be finite; use Pole::infinity()");
  }
  if (std::abs(std::abs(alpha) - 1.0) <= kCircleMargin) {
    throw Error(ErrorCode::InvalidArgument,
                "pole within " + std::to_string(kCircleMargin) + " of the unit circle");
  }
  Pole p;
  p.infinite_ = false;
  p.value_ = alpha;
  return p;
}

Pole Pole::reflected() const {
  if (infinite_) return finite(0.0);
  if (value_ == Complex{}) return infinity();
  return finite(1.0 / std::conj(value_));
}

Complex blaschke_scalar(const Pole& alpha, Complex z) {
  if (alpha.is_infinite()) return z;
  const Complex a = alpha.value();
  if (std::abs(z - a) <= 1e-12) {
    throw Error(ErrorCode::EvalAtPole, "blaschke_scalar: z coincides with the pole");
  }
  return (1.0 - std::conj(a) * z) / (z - a);
}

ReciprocalBlaschke reciprocal_blaschke(const Pole& alpha) {
  if (alpha.is_infinite() || alpha.value() == Complex{}) return {alpha.reflected(), 1.0};
  const Complex a = alpha.value();
  return {alpha.reflected(), a / std::conj(a)};
}

namespace {

void require_finite(const ComplexMatrix& m, const char* what) {
  if (!m.all_finite()) {
    throw Error(ErrorCode::InvalidArgument, std::string(what) + " has non-finite entries");
  }
}

}  // namespace

BlaschkePotapovForm BlaschkePotapovForm::create(Side side, ComplexMatrix constant,
                                                std::vector<BlaschkeFactor> factors) {
  const std::size_t p = constant.rows(), m = constant.cols();
  if (p == 0 || m == 0) throw Error(ErrorCode::DimensionMismatch, "BP form needs p, m >= 1");
  if (side == Side::Iso && p < m) throw Error(ErrorCode::SideMismatch, "Iso form requires p >= m");
  if (side == Side::Coiso && m < p) {
    throw Error(ErrorCode::SideMismatch, "Coiso form requires m >= p");
  }
  require_finite(constant, "constant");
  const double defect = side == Side::Iso ? isometry_defect(constant) : coisometry_defect(constant);
  if (defect > kIsometryTol) {
    throw Error(ErrorCode::NotIsometric,
                "BP constant is not a " + std::string(side == Side::Iso ? "isometry" : "coisometry") +
                    " (residual " + std::to_string(defect) + ")",
                defect);
  }
  const std::size_t k = side == Side::Iso ? p : m;
  for (auto& f : factors) {
    if (f.v.rows() != k || f.v.cols() != 1) {
      throw Error(ErrorCode::DimensionMismatch,
                  "factor direction must be " + std::to_string(k) + " x 1");
    }
    require_finite(f.v, "factor direction");
    const double norm = f.v.frobenius_norm();
    if (std::abs(norm - 1.0) > kRenormalizeTol) {
      throw Error(ErrorCode::InvalidArgument,
                  "factor direction norm " + std::to_string(norm) + " is not unit");
    }
    if (std::abs(norm - 1.0) > 1e-15) f.v *= 1.0 / norm;
  }
  return {side, std::move(constant), std::move(factors)};
}

BlaschkePotapovForm BlaschkePotapovForm::unchecked(Side side, ComplexMatrix constant,
                                                   std::vector<BlaschkeFactor> factors) {
  return {side, std::move(constant), std::move(factors)};
}

bool BlaschkePotapovForm::all_poles_inside() const {
  for (const auto& f : factors_)
    if (!f.pole.inside_disk()) return false;
  return true;
}

StateSpaceRealization::StateSpaceRealization(ComplexMatrix a_, ComplexMatrix b_, ComplexMatrix c_,
                                             ComplexMatrix d_)
    : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), d(std::move(d_)) {
  const std::size_t n = a.rows();
  if (a.cols() != n || b.rows() != n || c.cols() != n || c.rows() != d.rows() ||
      b.cols() != d.cols()) {
    throw Error(ErrorCode::DimensionMismatch,
                "realization blocks: A " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                    ", B " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()) + ", C " +
                    std::to_string(c.rows()) + "x" + std::to_string(c.cols()) + ", D " +
                    std::to_string(d.rows()) + "x" + std::to_string(d.cols()));
  }
}

ComplexMatrix StateSpaceRealization::realization_matrix() const {
  ComplexMatrix r(n() + p(), n() + m());
  r.set_block(0, 0, a);
  r.set_block(0, n(), b);
  r.set_block(n(), 0, c);
  r.set_block(n(), n(), d);
  return r;
}

StateSpaceRealization StateSpaceRealization::from_realization_matrix(const ComplexMatrix& r,
                                                                     std::size_t n) {
  if (n > r.rows() || n > r.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "state dimension exceeds realization matrix");
  }
  const std::size_t p = r.rows() - n, m = r.cols() - n;
  return {r.block(0, 0, n, n), r.block(0, n, n, m), r.block(n, 0, p, n), r.block(n, n, p, m)};
}

namespace {

ComplexMatrix poly_at(const std::vector<ComplexMatrix>& coeffs, Complex z) {
  ComplexMatrix acc = coeffs.back();
  for (std::size_t j = coeffs.size() - 1; j-- > 0;) {
    acc *= z;
    acc += coeffs[j];
  }
  return acc;
}

const Complex kRankProbes[] = {{0.3, 0.4}, {1.7, 0.0}, {0.0, -0.9}};

}  // namespace

void MFDForm::validate() const {
  if (p == 0 || m == 0) throw Error(ErrorCode::DimensionMismatch, "MFD needs p, m >= 1");
  if (num.empty() || num.size() != den.size()) {
    throw Error(ErrorCode::DimensionMismatch, "MFD numerator and denominator must be padded to equal length");
  }
  const std::size_t k = side == MfdSide::Right ? m : p;
  for (const auto& c : num) {
    if (c.rows() != p || c.cols() != m) throw Error(ErrorCode::DimensionMismatch, "MFD numerator coefficient shape");
    require_finite(c, "MFD numerator");
  }
  for (const auto& c : den) {
    if (c.rows() != k || c.cols() != k) throw Error(ErrorCode::DimensionMismatch, "MFD denominator coefficient shape");
    require_finite(c, "MFD denominator");
  }
  for (Complex z0 : kRankProbes) {
    if (std::abs(linalg::determinant(poly_at(den, z0))) <= kDenominatorRankTol) {
      throw Error(ErrorCode::InvalidArgument, "MFD denominator lacks full normal rank");
    }
  }
}

void LaurentPolyForm::validate() const {
  if (coeffs.empty()) throw Error(ErrorCode::DimensionMismatch, "Laurent form needs at least one coefficient");
  for (const auto& c : coeffs) {
    if (c.rows() != p() || c.cols() != m()) {
      throw Error(ErrorCode::DimensionMismatch, "Laurent coefficients must share a shape");
    }
    require_finite(c, "Laurent coefficient");
  }
  if (p() == 0 || m() == 0) throw Error(ErrorCode::DimensionMismatch, "Laurent form needs p, m >= 1");
}

ComplexMatrix eval(const BlaschkePotapovForm& f, Complex z) {
  std::vector<Complex> phi(f.degree());
  for (std::size_t j = 0; j < f.degree(); ++j) {
    const Pole& pole = f.factors()[j].pole;
    if (!pole.is_infinite() && std::abs(z - pole.value()) <= kPoleProximity) {
      throw Error(ErrorCode::EvalAtPole, "eval: z is at a factor pole");
    }
    phi[j] = blaschke_scalar(pole, z);
  }
  ComplexMatrix acc = f.constant();
  const std::size_t p = f.p(), m = f.m();
  if (f.side() == Side::Iso) {
    // acc <- (I + (phi - 1) v v*) acc, rightmost factor first
    std::vector<Complex> w(m);
    for (std::size_t jj = f.degree(); jj-- > 0;) {
      const ComplexMatrix& v = f.factors()[jj].v;
      const Complex s = phi[jj] - 1.0;
      for (std::size_t c = 0; c < m; ++c) {
        Complex t = 0.0;
        for (std::size_t r = 0; r < p; ++r) t += std::conj(v(r, 0)) * acc(r, c);
        w[c] = s * t;
      }
      for (std::size_t r = 0; r < p; ++r)
        for (std::size_t c = 0; c < m; ++c) acc(r, c) += v(r, 0) * w[c];
    }
  } else {
    // acc <- acc (I + (phi - 1) v v*), leftmost factor first
    std::vector<Complex> w(p);
    for (std::size_t j = 0; j < f.degree(); ++j) {
      const ComplexMatrix& v = f.factors()[j].v;
      const Complex s = phi[j] - 1.0;
      for (std::size_t r = 0; r < p; ++r) {
        Complex t = 0.0;
        for (std::size_t c = 0; c < m; ++c) t += acc(r, c) * v(c, 0);
        w[r] = s * t;
      }
      for (std::size_t r = 0; r < p; ++r)
        for (std::size_t c = 0; c < m; ++c) acc(r, c) += w[r] * std::conj(v(c, 0));
    }
  }
  return acc;
}

ComplexMatrix eval(const StateSpaceRealization& f, Complex z) {
  if (f.n() == 0) return f.d;
  ComplexMatrix shifted = -1.0 * f.a;
  for (std::size_t i = 0; i < f.n(); ++i) shifted(i, i) += z;
  const auto lu = linalg::lu_factor(shifted);
  if (lu.min_pivot <= 1e-13 * std::max(1.0, lu.max_pivot)) {
    throw Error(ErrorCode::EvalAtPole, "eval: zI - A is singular");
  }
  return f.c * linalg::lu_solve(lu, f.b) + f.d;
}

ComplexMatrix eval(const MFDForm& f, Complex z) {
  const ComplexMatrix den = poly_at(f.den, z);
  const ComplexMatrix num = poly_at(f.num, z);
  const auto lu = linalg::lu_factor(den);
  if (lu.min_pivot <= 1e-13 * std::max(1.0, lu.max_pivot)) {
    throw Error(ErrorCode::SingularDenominator, "eval: denominator is singular at z");
  }
  if (f.side == MfdSide::Left) return linalg::lu_solve(lu, num);
  return num * linalg::lu_solve(lu, ComplexMatrix::identity(den.rows()));
}

ComplexMatrix eval(const LaurentPolyForm& f, Complex z) {
  if (f.q < 0 && std::abs(z) <= kPoleProximity) {
    throw Error(ErrorCode::EvalAtPole, "eval: Laurent form with q < 0 at z = 0");
  }
  ComplexMatrix acc = poly_at(f.coeffs, z);
  acc *= std::pow(z, f.q);
  return acc;
}

ComplexMatrix eval(const AnyForm& f, Complex z) {
  return std::visit([z](const auto& form) { return eval(form, z); }, f);
}

std::size_t rows_of(const AnyForm& f) {
  return std::visit(
      [](const auto& form) -> std::size_t {
        using T = std::decay_t<decltype(form)>;
        if constexpr (std::is_same_v<T, MFDForm>) return form.p;
        else return form.p();
      },
      f);
}

std::size_t cols_of(const AnyForm& f) {
  return std::visit(
      [](const auto& form) -> std::size_t {
        using T = std::decay_t<decltype(form)>;
        if constexpr (std::is_same_v<T, MFDForm>) return form.m;
        else return form.m();
      },
      f);
}

BlaschkePotapovForm assemble(Side side, const ComplexMatrix& prefix,
                             const std::vector<PhasedFactor>& factors,
                             const ComplexMatrix& suffix) {
  std::vector<BlaschkeFactor> out(factors.size(), BlaschkeFactor{Pole::infinity(), {}});
  if (side == Side::Iso) {
    // carry * X_j = (carry H_j carry*) (carry Q_j)
    ComplexMatrix carry = prefix;
    for (std::size_t j = 0; j < factors.size(); ++j) {
      const PhasedFactor& x = factors[j];
      const ComplexMatrix cv = carry * x.v;
      out[j] = {x.pole, cv};
      if (x.phase != Complex{1.0, 0.0}) carry += (x.phase - 1.0) * (cv * x.v.adjoint());
    }
    return BlaschkePotapovForm::create(side, carry * suffix, std::move(out));
  }
  // X_j * carry = (Q_j carry) (carry* H_j carry)
  ComplexMatrix carry = suffix;
  for (std::size_t jj = factors.size(); jj-- > 0;) {
    const PhasedFactor& x = factors[jj];
    const ComplexMatrix vc = x.v.adjoint() * carry;
    out[jj] = {x.pole, vc.adjoint()};
    if (x.phase != Complex{1.0, 0.0}) carry += (x.phase - 1.0) * (x.v * vc);
  }
  return BlaschkePotapovForm::create(side, prefix * carry, std::move(out));
}

BlaschkePotapovForm conjugate(const BlaschkePotapovForm& f) {
  std::vector<PhasedFactor> rev;
  rev.reserve(f.degree());
  for (std::size_t jj = f.degree(); jj-- > 0;) {
    const auto& fac = f.factors()[jj];
    const ReciprocalBlaschke r = reciprocal_blaschke(fac.pole);
    rev.push_back({r.pole, fac.v, r.phase});
  }
  const ComplexMatrix u_adj = f.constant().adjoint();
  if (f.side() == Side::Iso) {
    return assemble(Side::Coiso, u_adj, rev, ComplexMatrix::identity(f.p()));
  }
  return assemble(Side::Iso, ComplexMatrix::identity(f.m()), rev, u_adj);
}

}  // namespace paraunit

#include "paraunit/transforms.hpp"

#include <cmath>
#include <string>

#include "paraunit/errors.hpp"
#include "paraunit/linalg.hpp"

namespace paraunit {

StateSpaceRealization factor_realization(const Pole& alpha, const ComplexMatrix& v) {
  if (alpha.is_infinite() || !(std::abs(alpha.value()) < 1.0 - 1e-9)) {
    throw Error(ErrorCode::PoleNotInDisk, "factor_realization: pole must lie in the open unit disk");
  }
  if (v.cols() != 1 || v.rows() == 0) {
    throw Error(ErrorCode::DimensionMismatch, "factor_realization: v must be a column vector");
  }
  const Complex a = alpha.value();
  const double s = std::sqrt(1.0 - std::norm(a));
  const std::size_t k = v.rows();
  ComplexMatrix d = ComplexMatrix::identity(k) - (1.0 + std::conj(a)) * (v * v.adjoint());
  return {ComplexMatrix{{a}}, s * v.adjoint(), s * v, std::move(d)};
}

StateSpaceRealization cascade(const StateSpaceRealization& f2, const StateSpaceRealization& f1) {
  if (f2.m() != f1.p()) {
    throw Error(ErrorCode::DimensionMismatch, "cascade: inner dimensions differ");
  }
  const std::size_t n2 = f2.n(), n1 = f1.n();
  ComplexMatrix a(n2 + n1, n2 + n1);
  a.set_block(0, 0, f2.a);
  a.set_block(0, n2, f2.b * f1.c);
  a.set_block(n2, n2, f1.a);
  ComplexMatrix b = vstack(f2.b * f1.d, f1.b);
  ComplexMatrix c = hstack(f2.c, f2.d * f1.c);
  return {std::move(a), std::move(b), std::move(c), f2.d * f1.d};
}

StateSpaceRealization bp_to_realization(const BlaschkePotapovForm& f) {
  for (const auto& fac : f.factors()) {
    if (!fac.pole.inside_disk()) {
      throw Error(ErrorCode::ImproperFunction,
                  "bp_to_realization: pole at infinity or outside the disk; flip_poles first");
    }
  }
  const std::size_t k = f.factor_dim();
  StateSpaceRealization g{{}, ComplexMatrix(0, k), ComplexMatrix(k, 0), ComplexMatrix::identity(k)};
  for (const auto& fac : f.factors()) g = cascade(g, factor_realization(fac.pole, fac.v));
  const ComplexMatrix& u = f.constant();
  if (f.side() == Side::Iso) {
    g.b = g.b * u;
    g.d = g.d * u;
  } else {
    g.c = u * g.c;
    g.d = u * g.d;
  }
  return g;
}

StateSpaceRealization allpass_embed(const StateSpaceRealization& ss, double tol) {
  const std::size_t n = ss.n(), p = ss.p(), m = ss.m();
  if (p == m) return ss;
  const ComplexMatrix r = ss.realization_matrix();
  const double defect = p > m ? isometry_defect(r) : coisometry_defect(r);
  if (!(defect <= tol)) {
    throw Error(ErrorCode::NotCoIsometricRealization,
                "allpass_embed: realization matrix defect " + std::to_string(defect), defect);
  }
  StateSpaceRealization out = ss;
  if (p > m) {
    const ComplexMatrix w = linalg::unitary_completion(r, tol);
    out.b = hstack(ss.b, w.block(0, 0, n, p - m));
    out.d = hstack(ss.d, w.block(n, 0, p, p - m));
  } else {
    const ComplexMatrix w = linalg::unitary_completion(r.adjoint(), tol).adjoint();
    out.c = vstack(ss.c, w.block(0, 0, m - p, n));
    out.d = vstack(ss.d, w.block(0, n, m - p, m));
  }
  return out;
}

ComplexMatrix extract_constant(const ComplexMatrix& r_big, const StateSpaceRealization& ss,
                               double tol) {
  const std::size_t n = ss.n(), p = ss.p(), m = ss.m();
  const std::size_t big = n + std::max(p, m);
  if (r_big.rows() != big || r_big.cols() != big) {
    throw Error(ErrorCode::DimensionMismatch,
                "extract_constant: expected a " + std::to_string(big) + "x" + std::to_string(big) +
                    " unitary");
  }
  const double defect = isometry_defect(r_big);
  if (defect > 1e-10) {
    throw Error(ErrorCode::NotIsometric, "extract_constant: R_big is not unitary", defect);
  }
  const ComplexMatrix r = ss.realization_matrix();
  ComplexMatrix u;
  double residual = 0.0;
  if (p >= m) {
    u = (r_big.adjoint() * r).block(n, n, p, m);
    residual = (r - r_big * block_diag(ComplexMatrix::identity(n), u)).frobenius_norm();
  } else {
    u = (r * r_big.adjoint()).block(n, n, p, m);
    residual = (r - block_diag(ComplexMatrix::identity(n), u) * r_big).frobenius_norm();
  }
  if (!(residual <= tol)) {
    throw Error(ErrorCode::InconsistentPair,
                "extract_constant: reconstruction residual " + std::to_string(residual), residual);
  }
  return u;
}

SquareEmbedding embed_to_square(const BlaschkePotapovForm& f) {
  return {BlaschkePotapovForm::create(f.side(), ComplexMatrix::identity(f.factor_dim()), f.factors()),
          f.constant()};
}

namespace {

std::vector<PhasedFactor> as_phased(const BlaschkePotapovForm& f) {
  std::vector<PhasedFactor> out;
  out.reserve(f.degree());
  for (const auto& fac : f.factors()) out.push_back({fac.pole, fac.v, 1.0});
  return out;
}

ComplexMatrix times_constant(const ComplexMatrix& sq_const, const ComplexMatrix& u, bool right) {
  // Identity constants from embed_to_square keep the caller's constant bit-exact.
  if (sq_const == ComplexMatrix::identity(sq_const.rows())) return u;
  return right ? sq_const * u : u * sq_const;
}

}  // namespace

BlaschkePotapovForm truncate_to_rect(const BlaschkePotapovForm& square, const ComplexMatrix& constant) {
  if (square.p() != square.m()) {
    throw Error(ErrorCode::DimensionMismatch, "truncate_to_rect: first argument must be square");
  }
  const std::size_t k = square.p();
  Side side = square.side();
  if (constant.rows() > constant.cols()) side = Side::Iso;
  if (constant.rows() < constant.cols()) side = Side::Coiso;

  if (side == Side::Iso) {
    if (constant.rows() != k) throw Error(ErrorCode::DimensionMismatch, "truncate_to_rect: constant rows");
    const double defect = isometry_defect(constant);
    if (defect > BlaschkePotapovForm::kIsometryTol) {
      throw Error(ErrorCode::NotIsometricConstant, "truncate_to_rect: constant is not an isometry", defect);
    }
    if (square.side() == Side::Iso) {
      return BlaschkePotapovForm::create(Side::Iso, times_constant(square.constant(), constant, true),
                                         square.factors());
    }
    return assemble(Side::Iso, square.constant(), as_phased(square), constant);
  }
  if (constant.cols() != k) throw Error(ErrorCode::DimensionMismatch, "truncate_to_rect: constant cols");
  const double defect = coisometry_defect(constant);
  if (defect > BlaschkePotapovForm::kIsometryTol) {
    throw Error(ErrorCode::NotIsometricConstant, "truncate_to_rect: constant is not a coisometry", defect);
  }
  if (square.side() == Side::Coiso) {
    return BlaschkePotapovForm::create(Side::Coiso, times_constant(square.constant(), constant, false),
                                       square.factors());
  }
  return assemble(Side::Coiso, constant, as_phased(square), square.constant());
}

BlaschkePotapovForm flip_poles(const BlaschkePotapovForm& f) {
  if (f.all_poles_inside()) return f;
  // F_j * psi_j = (I - v v*) (c phi_beta) + v v* = prod over an orthonormal
  // basis u_k of v-perp of (I + (c phi_beta - 1) u_k u_k*).
  std::vector<PhasedFactor> out;
  for (const auto& fac : f.factors()) {
    if (fac.pole.inside_disk()) {
      out.push_back({fac.pole, fac.v, 1.0});
      continue;
    }
    const ReciprocalBlaschke rec = reciprocal_blaschke(fac.pole);
    // Empty basis when the factor space is 1-dimensional: F_j psi_j == 1.
    const ComplexMatrix basis = linalg::unitary_completion(fac.v, 1e-8);
    for (std::size_t k = 0; k < basis.cols(); ++k) out.push_back({rec.pole, basis.col(k), rec.phase});
  }
  const std::size_t k = f.factor_dim();
  if (f.side() == Side::Iso) return assemble(Side::Iso, ComplexMatrix::identity(k), out, f.constant());
  return assemble(Side::Coiso, f.constant(), out, ComplexMatrix::identity(k));
}

Complex flip_multiplier(const BlaschkePotapovForm& f, Complex z) {
  Complex psi = 1.0;
  for (const auto& fac : f.factors()) {
    if (fac.pole.inside_disk()) continue;
    psi /= blaschke_scalar(fac.pole, z);
  }
  return psi;
}

MFDForm ss_to_mfd(const StateSpaceRealization& ss, MfdSide side) {
  const std::size_t n = ss.n(), p = ss.p(), m = ss.m();
  if (n > linalg::kSteinSizeLimit) {
    throw Error(ErrorCode::SizeLimitExceeded, "ss_to_mfd: n > " + std::to_string(linalg::kSteinSizeLimit));
  }
  // Leverrier-Faddeev: S_0 = I, a_k = -tr(A S_{k-1}) / k, S_k = A S_{k-1} + a_k I.
  // chi(z) = z^n + a_1 z^{n-1} + ... + a_n, adj(zI - A) = sum_k S_k z^{n-1-k}.
  std::vector<Complex> chi(n + 1);  // chi[j] multiplies z^j
  chi[n] = 1.0;
  std::vector<ComplexMatrix> s_terms;
  s_terms.reserve(n);
  ComplexMatrix s = ComplexMatrix::identity(n);
  for (std::size_t k = 1; k <= n; ++k) {
    s_terms.push_back(s);
    const ComplexMatrix as = ss.a * s;
    const Complex ak = -as.trace() / static_cast<double>(k);
    chi[n - k] = ak;
    s = as;
    for (std::size_t i = 0; i < n; ++i) s(i, i) += ak;
  }

  MFDForm out;
  out.side = side;
  out.p = p;
  out.m = m;
  const std::size_t kden = side == MfdSide::Right ? m : p;
  for (std::size_t j = 0; j <= n; ++j) {
    ComplexMatrix nj = chi[j] * ss.d;
    if (j < n) nj += ss.c * s_terms[n - 1 - j] * ss.b;
    out.num.push_back(std::move(nj));
    out.den.push_back(chi[j] * ComplexMatrix::identity(kden));
  }
  return out;
}

LaurentPolyForm bp_to_laurent(const BlaschkePotapovForm& f) {
  const std::size_t k = f.factor_dim();
  std::vector<ComplexMatrix> poly{ComplexMatrix::identity(k)};
  int q = 0;
  for (const auto& fac : f.factors()) {
    const bool at_zero = !fac.pole.is_infinite() && fac.pole.value() == Complex{};
    if (!fac.pole.is_infinite() && !at_zero) {
      throw Error(ErrorCode::NotFIR, "bp_to_laurent: finite nonzero pole present");
    }
    const ComplexMatrix proj = fac.v * fac.v.adjoint();
    const ComplexMatrix rest = ComplexMatrix::identity(k) - proj;
    // pole inf: (I - P) + z P;  pole 0: z^{-1} (P + z (I - P))
    const ComplexMatrix& c0 = at_zero ? proj : rest;
    const ComplexMatrix& c1 = at_zero ? rest : proj;
    if (at_zero) --q;
    std::vector<ComplexMatrix> next(poly.size() + 1, ComplexMatrix(k, k));
    for (std::size_t j = 0; j < poly.size(); ++j) {
      next[j] += poly[j] * c0;
      next[j + 1] += poly[j] * c1;
    }
    poly = std::move(next);
  }
  LaurentPolyForm out;
  out.q = q;
  for (auto& c : poly) out.coeffs.push_back(f.side() == Side::Iso ? c * f.constant() : f.constant() * c);
  return out;
}

}  // namespace paraunit

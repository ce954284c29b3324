#include "paraunit/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>

#include "paraunit/errors.hpp"
#include "paraunit/linalg.hpp"

namespace paraunit {

Certificate make_certificate(std::string name, double residual, double tolerance,
                             std::optional<ComplexMatrix> witness) {
  Certificate c;
  c.name = std::move(name);
  c.residual = residual;
  c.tolerance = tolerance;
  c.verdict = residual <= tolerance ? Verdict::Pass : Verdict::Fail;
  c.witness = std::move(witness);
  return c;
}

bool all_pass(const std::vector<Certificate>& certs) {
  return std::all_of(certs.begin(), certs.end(), [](const Certificate& c) { return c.passed(); });
}

double worst_residual(const std::vector<Certificate>& certs) {
  double r = 0.0;
  for (const auto& c : certs) r = std::max(r, c.residual);
  return r;
}

double unitarity_defect(const ComplexMatrix& value) {
  return value.rows() >= value.cols() ? isometry_defect(value) : coisometry_defect(value);
}

Certificate circle_residual(const AnyForm& f, std::size_t samples, double tol) {
  if (samples < 8) throw Error(ErrorCode::InvalidArgument, "circle_residual needs at least 8 samples");
  std::vector<double> defect(samples, 0.0);
  std::exception_ptr failure;
  const long long count = static_cast<long long>(samples);
#pragma omp parallel for schedule(static)
  for (long long k = 0; k < count; ++k) {
    try {
      const Complex z = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) /
                                            static_cast<double>(samples));
      defect[static_cast<std::size_t>(k)] = unitarity_defect(eval(f, z));
    } catch (...) {
#pragma omp critical(paraunit_circle_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  ComplexMatrix witness(samples, 1);
  double worst = 0.0;
  for (std::size_t k = 0; k < samples; ++k) {
    witness(k, 0) = defect[k];
    worst = std::max(worst, defect[k]);
  }
  return make_certificate("circle", worst, tol, std::move(witness));
}

std::vector<Certificate> realization_check(const StateSpaceRealization& ss, double tol) {
  const ComplexMatrix r = ss.realization_matrix();
  std::vector<Certificate> out;
  if (ss.p() >= ss.m()) {
    ComplexMatrix res = r.adjoint() * r - ComplexMatrix::identity(r.cols());
    const double norm = res.frobenius_norm();
    out.push_back(make_certificate("realization-iso", norm, tol, std::move(res)));
  }
  if (ss.m() >= ss.p()) {
    ComplexMatrix res = r * r.adjoint() - ComplexMatrix::identity(r.rows());
    const double norm = res.frobenius_norm();
    out.push_back(make_certificate("realization-coiso", norm, tol, std::move(res)));
  }
  return out;
}

namespace {

Certificate identity_certificate(const std::string& name, const ComplexMatrix& w, double tol) {
  ComplexMatrix res = w - ComplexMatrix::identity(w.rows());
  const double norm = res.frobenius_norm();
  return make_certificate(name, norm, tol, std::move(res));
}

// I - W positive semidefinite up to -tol; witness is the eigenvalue list.
Certificate contraction_certificate(const std::string& name, const ComplexMatrix& w, double tol) {
  const std::size_t n = w.rows();
  if (n == 0) return make_certificate(name, 0.0, tol);
  const auto eig = linalg::hermitian_eig(ComplexMatrix::identity(n) - w);
  ComplexMatrix values(n, 1);
  for (std::size_t k = 0; k < n; ++k) values(k, 0) = eig.values[k];
  return make_certificate(name, std::max(0.0, -eig.values.front()), tol, std::move(values));
}

void require_schur_stable(const StateSpaceRealization& ss, const char* who) {
  if (ss.n() == 0) return;
  const double rho = linalg::spectral_radius(ss.a);
  if (!(rho < 1.0)) {
    throw Error(ErrorCode::NotSchurStable,
                std::string(who) + ": spectral radius " + std::to_string(rho), rho);
  }
}

}  // namespace

GramianReport gramian_certificate(const StateSpaceRealization& ss, double tol) {
  require_schur_stable(ss, "gramian_certificate");
  GramianReport rep;
  if (ss.n() > 0) {
    rep.w_cont = linalg::solve_stein(ss.a, ss.b * ss.b.adjoint(), linalg::SteinSide::Controllability);
    rep.w_obs = linalg::solve_stein(ss.a, ss.c.adjoint() * ss.c, linalg::SteinSide::Observability);
  }
  if (ss.p() == ss.m()) {
    rep.certificates.push_back(identity_certificate("gramian-cont-identity", rep.w_cont, tol));
    rep.certificates.push_back(identity_certificate("gramian-obs-identity", rep.w_obs, tol));
  } else if (ss.p() > ss.m()) {
    rep.certificates.push_back(identity_certificate("gramian-obs-identity", rep.w_obs, tol));
    rep.certificates.push_back(contraction_certificate("gramian-cont-contractive", rep.w_cont, tol));
  } else {
    rep.certificates.push_back(identity_certificate("gramian-cont-identity", rep.w_cont, tol));
    rep.certificates.push_back(contraction_certificate("gramian-obs-contractive", rep.w_obs, tol));
  }
  return rep;
}

ComplexMatrix block_hankel(const std::vector<ComplexMatrix>& coeffs) {
  if (coeffs.empty()) throw Error(ErrorCode::DimensionMismatch, "block_hankel: no coefficients");
  const std::size_t k1 = coeffs.front().rows(), k2 = coeffs.front().cols();
  for (const auto& c : coeffs) {
    if (c.rows() != k1 || c.cols() != k2) {
      throw Error(ErrorCode::DimensionMismatch, "block_hankel: coefficient shapes differ");
    }
  }
  const std::size_t l = coeffs.size();
  ComplexMatrix h(k1 * l, k2 * l);
  for (std::size_t i = 0; i < l; ++i)
    for (std::size_t j = 0; i + j < l; ++j) h.set_block(i * k1, j * k2, coeffs[i + j]);
  return h;
}

Certificate mfd_check(const MFDForm& mfd, double tol_scale) {
  mfd.validate();
  if (mfd.side == MfdSide::Right && mfd.p < mfd.m) {
    throw Error(ErrorCode::SideMismatch, "mfd_check: right MFD requires p >= m");
  }
  if (mfd.side == MfdSide::Left && mfd.m < mfd.p) {
    throw Error(ErrorCode::SideMismatch, "mfd_check: left MFD requires m >= p");
  }
  double den_mass = 0.0;
  for (const auto& c : mfd.den) den_mass += std::pow(c.frobenius_norm(), 2);
  const double tol = tol_scale * (1.0 + den_mass);

  const ComplexMatrix hd = block_hankel(mfd.den);
  const ComplexMatrix hn = block_hankel(mfd.num);
  ComplexMatrix res;
  if (mfd.side == MfdSide::Right) {
    // (H_D* H_D - H_N* H_N) (I_m; 0): the first block column only.
    const std::size_t m = mfd.m;
    res = hd.adjoint() * hd.block(0, 0, hd.rows(), m) - hn.adjoint() * hn.block(0, 0, hn.rows(), m);
  } else {
    const std::size_t p = mfd.p;
    res = hd * hd.block(0, 0, p, hd.cols()).adjoint() - hn * hn.block(0, 0, p, hn.cols()).adjoint();
  }
  const double norm = res.frobenius_norm();
  return make_certificate(mfd.side == MfdSide::Right ? "mfd-right" : "mfd-left", norm, tol,
                          std::move(res));
}

Certificate laurent_check(const LaurentPolyForm& lp, double tol) {
  lp.validate();
  const ComplexMatrix h0 = block_hankel(lp.coeffs);
  ComplexMatrix res;
  if (lp.p() >= lp.m()) {
    // (I - H0* H0) (I_m; 0)
    const std::size_t m = lp.m();
    res = ComplexMatrix::eye(h0.cols(), m) - h0.adjoint() * h0.block(0, 0, h0.rows(), m);
  } else {
    // (I_p 0) (I - H0 H0*)
    const std::size_t p = lp.p();
    res = ComplexMatrix::eye(p, h0.rows()) - h0.block(0, 0, p, h0.cols()) * h0.adjoint();
  }
  const double norm = res.frobenius_norm();
  return make_certificate("laurent", norm, tol, std::move(res));
}

std::size_t mcmillan_degree(const StateSpaceRealization& ss, double threshold) {
  require_schur_stable(ss, "mcmillan_degree");
  if (ss.n() == 0) return 0;
  const ComplexMatrix wc = linalg::solve_stein(ss.a, ss.b * ss.b.adjoint(), linalg::SteinSide::Controllability);
  const ComplexMatrix wo = linalg::solve_stein(ss.a, ss.c.adjoint() * ss.c, linalg::SteinSide::Observability);
  // Wc^{1/2} Wo Wc^{1/2} is Hermitian with the same spectrum as Wc Wo.
  const ComplexMatrix root = linalg::psd_sqrt(wc);
  const auto eig = linalg::hermitian_eig(hermitian_part(root * wo * root));
  return static_cast<std::size_t>(
      std::count_if(eig.values.begin(), eig.values.end(), [&](double v) { return v > threshold; }));
}

}  // namespace paraunit

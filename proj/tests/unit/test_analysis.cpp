#include <doctest.h>

#include <cmath>

#include "paraunit/analysis.hpp"
#include "paraunit/errors.hpp"
#include "paraunit/transforms.hpp"
#include "support/testing.hpp"

using namespace paraunit;
using testing::max_diff;
using testing::Rng;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::InvalidArgument;
}

const Certificate& named(const std::vector<Certificate>& certs, const std::string& name) {
  for (const auto& c : certs)
    if (c.name == name) return c;
  FAIL("missing certificate " << name);
  return certs.front();
}

// Left MFD of the half-pole row: Delta = z - 1/2, N = (1 - z/2, z - 1/2) / sqrt 2.
MFDForm example_left_mfd() {
  const double r = 1.0 / std::sqrt(2.0);
  return {MfdSide::Left, 1, 2, {ComplexMatrix{{r, -0.5 * r}}, ComplexMatrix{{-0.5 * r, r}}},
          {ComplexMatrix{{-0.5}}, ComplexMatrix{{1.0}}}};
}

}  // namespace

TEST_CASE("certificate verdict follows residual vs tolerance") {
  CHECK(make_certificate("x", 1e-9, 1e-9).passed());
  CHECK_FALSE(make_certificate("x", 2e-9, 1e-9).passed());
}

TEST_CASE("circle_residual examples") {
  Rng rng(1);
  const auto constant = BlaschkePotapovForm::create(Side::Iso, testing::random_isometry(rng, 3, 2), {});
  const Certificate c0 = circle_residual(constant);
  CHECK(c0.passed());
  CHECK(c0.residual <= 1e-14);
  CHECK(c0.tolerance == 1e-8);
  REQUIRE(c0.witness.has_value());
  CHECK(c0.witness->rows() == 64);

  const auto ex = testing::example_bp();
  CHECK(circle_residual(ex).passed());

  std::vector<BlaschkeFactor> shrunk = ex.factors();
  shrunk[0].v = 0.9 * shrunk[0].v;
  const Certificate bad = circle_residual(BlaschkePotapovForm::unchecked(Side::Coiso, ex.constant(), shrunk));
  CHECK_FALSE(bad.passed());
  CHECK(bad.residual > 1e-2);

  CHECK(code_of([&] { circle_residual(ex, 4); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("realization_check on the half-pole row") {
  const auto certs = realization_check(testing::example_r_hat());
  REQUIRE(certs.size() == 1);
  CHECK(certs[0].name == "realization-coiso");
  CHECK(certs[0].passed());
  CHECK(certs[0].residual <= 1e-15);

  const double r = 1.0 / std::sqrt(2.0);
  const StateSpaceRealization raw(ComplexMatrix{{0.5}}, ComplexMatrix{{0.75 * r, 0.0}}, ComplexMatrix{{1.0}},
                                  ComplexMatrix{{-0.5 * r, r}});
  const auto raw_certs = realization_check(raw);
  CHECK_FALSE(all_pass(raw_certs));
  CHECK(worst_residual(raw_certs) > 0.1);
}

TEST_CASE("realization_check passes any unitary split") {
  Rng rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = testing::pick(rng, 0, 4), p = testing::pick(rng, 1, 4);
    const ComplexMatrix r = testing::random_unitary(rng, n + p);
    const auto certs = realization_check(StateSpaceRealization::from_realization_matrix(r, n));
    CHECK(certs.size() == 2);
    CHECK(all_pass(certs));
  }
}

TEST_CASE("gramians of the half-pole row") {
  const GramianReport g = gramian_certificate(testing::example_r_hat());
  CHECK(std::abs(g.w_cont(0, 0) - 1.0) <= 1e-10);
  CHECK(std::abs(g.w_obs(0, 0) - 0.5) <= 1e-10);
  CHECK(all_pass(g.certificates));
  CHECK(named(g.certificates, "gramian-cont-identity").passed());
  CHECK(named(g.certificates, "gramian-obs-contractive").passed());
}

TEST_CASE("gramians of the shift") {
  const std::size_t n = 3;
  const StateSpaceRealization ss(ComplexMatrix::zeros(n, n), ComplexMatrix::identity(n), ComplexMatrix::identity(n),
                                 ComplexMatrix::zeros(n, n));
  const GramianReport g = gramian_certificate(ss);
  CHECK(max_diff(g.w_cont, ComplexMatrix::identity(n)) < 1e-15);
  CHECK(max_diff(g.w_obs, ComplexMatrix::identity(n)) < 1e-15);
  CHECK(all_pass(g.certificates));
  CHECK(g.certificates.size() == 2);
}

TEST_CASE("gramians of converted random BP forms") {
  Rng rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t p = testing::pick(rng, 1, 4), m = testing::pick(rng, 1, p);
    const auto f = testing::random_bp(rng, Side::Iso, p, m, testing::pick(rng, 1, 5), testing::PoleMix::Schur);
    const GramianReport g = gramian_certificate(bp_to_realization(f));
    CHECK(all_pass(g.certificates));
    CHECK(max_diff(g.w_obs, ComplexMatrix::identity(f.degree())) <= 1e-8);
  }
  const StateSpaceRealization unstable(ComplexMatrix{{1.5}}, ComplexMatrix{{1.0}}, ComplexMatrix{{1.0}},
                                       ComplexMatrix{{0.0}});
  CHECK(code_of([&] { gramian_certificate(unstable); }) == ErrorCode::NotSchurStable);
}

TEST_CASE("block_hankel layout") {
  const ComplexMatrix b0{{1.0, 2.0}}, b1{{3.0, 4.0}};
  CHECK(block_hankel({b0}) == b0);
  const ComplexMatrix h = block_hankel({b0, b1});
  const ComplexMatrix want{{1.0, 2.0, 3.0, 4.0}, {3.0, 4.0, 0.0, 0.0}};
  CHECK(h == want);
  const ComplexMatrix s = block_hankel({ComplexMatrix{{1.0}}, ComplexMatrix{{2.0}}, ComplexMatrix{{3.0}}});
  CHECK(s == ComplexMatrix{{1.0, 2.0, 3.0}, {2.0, 3.0, 0.0}, {3.0, 0.0, 0.0}});
  CHECK(code_of([&] { block_hankel({b0, ComplexMatrix{{1.0}}}); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("mfd_check on the half-pole row left MFD") {
  const MFDForm mfd = example_left_mfd();
  // Hand expansion: first block row mass 1/4 + 1 = 5/4 on both sides,
  // cross term -1/2 on both sides.
  const double r = 1.0 / std::sqrt(2.0);
  const ComplexMatrix n0 = mfd.num[0], n1 = mfd.num[1];
  CHECK(std::abs((n0 * n0.adjoint() + n1 * n1.adjoint())(0, 0) - 1.25) < 1e-15);
  CHECK(std::abs((n1 * n0.adjoint())(0, 0) - (-0.5 * r * r * 2.0)) < 1e-15);
  const Certificate c = mfd_check(mfd);
  CHECK(c.passed());
  CHECK(c.residual < 1e-15);
  CHECK(c.name == "mfd-left");
  CHECK(std::abs(c.tolerance - 1e-9 * (1.0 + 1.25)) < 1e-24);
}

TEST_CASE("mfd_check on a constant right MFD and a perturbation") {
  Rng rng(4);
  const ComplexMatrix u = testing::random_isometry(rng, 3, 2);
  MFDForm mfd{MfdSide::Right, 3, 2, {u}, {ComplexMatrix::identity(2)}};
  CHECK(mfd_check(mfd).passed());

  const auto f = testing::random_bp(rng, Side::Iso, 3, 2, 2, testing::PoleMix::Schur);
  MFDForm good = ss_to_mfd(bp_to_realization(f), MfdSide::Right);
  CHECK(mfd_check(good).passed());
  good.num[0](0, 0) += 1e-2;
  const Certificate bad = mfd_check(good);
  CHECK_FALSE(bad.passed());
  CHECK(bad.residual >= 1e-3);

  MFDForm wrong{MfdSide::Left, 3, 2, {u}, {ComplexMatrix::identity(3)}};
  CHECK(code_of([&] { mfd_check(wrong); }) == ErrorCode::SideMismatch);
}

TEST_CASE("laurent_check examples") {
  const LaurentPolyForm delay{0, {ComplexMatrix{{0.0, 0.0}, {0.0, 1.0}}, ComplexMatrix{{1.0, 0.0}, {0.0, 0.0}}}};
  CHECK(laurent_check(delay).passed());
  CHECK(laurent_check(delay).residual == 0.0);

  Rng rng(5);
  const ComplexMatrix u = testing::random_unitary(rng, 3);
  CHECK(laurent_check({2, {u}}).passed());
  CHECK_FALSE(laurent_check({0, {1.1 * u}}).passed());

  std::vector<BlaschkeFactor> factors;
  for (int j = 0; j < 3; ++j) factors.push_back({Pole::infinity(), testing::random_unit_vector(rng, 3)});
  const auto fir = BlaschkePotapovForm::create(Side::Iso, testing::random_isometry(rng, 3, 2), factors);
  LaurentPolyForm lp = bp_to_laurent(fir);
  CHECK(lp.gamma() == 3);
  CHECK(laurent_check(lp).passed());
  for (int q = -3; q <= 3; ++q) {
    lp.q = q;
    CHECK(laurent_check(lp).passed());
  }

  for (int trial = 0; trial < 20; ++trial) {
    std::vector<ComplexMatrix> coeffs;
    for (int j = 0; j < 3; ++j) coeffs.push_back(testing::random_matrix(rng, 2, 2));
    CHECK_FALSE(laurent_check({0, coeffs}).passed());
  }
}

TEST_CASE("mcmillan_degree examples") {
  CHECK(mcmillan_degree(testing::example_r_hat()) == 1);
  const StateSpaceRealization d_only({}, ComplexMatrix(0, 2), ComplexMatrix(2, 0), ComplexMatrix::identity(2));
  CHECK(mcmillan_degree(d_only) == 0);
  const StateSpaceRealization zero_dyn(ComplexMatrix::zeros(2, 2), ComplexMatrix::zeros(2, 1), ComplexMatrix::zeros(1, 2),
                                       ComplexMatrix{{1.0}});
  CHECK(mcmillan_degree(zero_dyn) == 0);
}

TEST_CASE("mcmillan_degree drops for a product annihilated by its constant") {
  // F = F1 (I + (phi2 - 1) e1 e1*) e2 = F1 e2: two factors, degree one.
  Rng rng(6);
  const ComplexMatrix e1{{1.0}, {0.0}}, e2{{0.0}, {1.0}};
  const ComplexMatrix v1 = testing::random_unit_vector(rng, 2);
  const auto f = BlaschkePotapovForm::create(Side::Iso, e2, {{Pole::finite(Complex(0.3, 0.2)), v1},
                                                             {Pole::finite(-0.6), e1}});
  const StateSpaceRealization ss = bp_to_realization(f);
  CHECK(ss.n() == 2);
  CHECK(mcmillan_degree(ss) == 1);

  // Constant e2 against a single e1 factor: degree zero.
  const auto g = BlaschkePotapovForm::create(Side::Iso, e2, {{Pole::finite(0.4), e1}});
  CHECK(mcmillan_degree(bp_to_realization(g)) == 0);
}

TEST_CASE("characterizations agree on random products and perturbations") {
  Rng rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t p = testing::pick(rng, 1, 4), m = testing::pick(rng, 1, 4);
    const Side side = testing::side_for(p, m);
    const std::size_t d = testing::pick(rng, 0, 6);
    const auto f = testing::random_bp(rng, side, p, m, d, testing::PoleMix::Schur);
    const StateSpaceRealization ss = bp_to_realization(f);
    const MFDForm mfd = ss_to_mfd(ss, side == Side::Iso ? MfdSide::Right : MfdSide::Left);
    CHECK(circle_residual(f).residual <= 1e-9);
    CHECK(worst_residual(realization_check(ss)) <= 1e-9);
    CHECK(mfd_check(mfd).passed());
    CHECK(mcmillan_degree(ss) <= d);
  }
}

#include <doctest.h>

#include <cstring>
#include <string>

#include "paraunit/errors.hpp"
#include "paraunit/io.hpp"
#include "paraunit/transforms.hpp"
#include "support/testing.hpp"

using namespace paraunit;
using testing::Rng;

namespace {

std::string parse_message(std::string_view text) {
  try {
    io::read_document(text);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParseError);
    return e.what();
  }
  FAIL("document was accepted");
  return {};
}

bool same_bits(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return std::memcmp(a.entries().data(), b.entries().data(), a.entries().size() * sizeof(Complex)) == 0;
}

bool same_bits(const std::vector<ComplexMatrix>& a, const std::vector<ComplexMatrix>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!same_bits(a[i], b[i])) return false;
  return true;
}

template <class T>
T round_trip(const T& value) {
  const std::string text = io::write_document(value);
  io::Document back = io::read_document(text);
  REQUIRE(std::holds_alternative<T>(back));
  CHECK(io::write_document(back) == text);
  return std::get<T>(back);
}

}  // namespace

TEST_CASE("documents round-trip bit for bit") {
  Rng rng(20);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t p = testing::pick(rng, 1, 3), m = testing::pick(rng, 1, 3);
    const Side side = testing::side_for(p, m);
    const auto bp = testing::random_bp(rng, side, p, m, testing::pick(rng, 0, 4), testing::PoleMix::Any);
    const auto bp2 = round_trip(bp);
    CHECK(bp2.side() == bp.side());
    CHECK(same_bits(bp2.constant(), bp.constant()));
    REQUIRE(bp2.degree() == bp.degree());
    for (std::size_t i = 0; i < bp.degree(); ++i) {
      CHECK(bp2.factors()[i].pole == bp.factors()[i].pole);
      CHECK(same_bits(bp2.factors()[i].v, bp.factors()[i].v));
    }

    const auto schur = testing::random_bp(rng, side, p, m, testing::pick(rng, 0, 3), testing::PoleMix::Schur);
    const auto ss = bp_to_realization(schur);
    const auto ss2 = round_trip(ss);
    CHECK((same_bits(ss2.a, ss.a) && same_bits(ss2.b, ss.b) && same_bits(ss2.c, ss.c) && same_bits(ss2.d, ss.d)));

    const auto mfd = ss_to_mfd(ss, p >= m ? MfdSide::Right : MfdSide::Left);
    const auto mfd2 = round_trip(mfd);
    CHECK(mfd2.side == mfd.side);
    CHECK(same_bits(mfd2.num, mfd.num));
    CHECK(same_bits(mfd2.den, mfd.den));

    const auto fir = testing::random_bp(rng, side, p, m, testing::pick(rng, 0, 4), testing::PoleMix::Fir);
    const auto lp = bp_to_laurent(fir);
    const auto lp2 = round_trip(lp);
    CHECK(lp2.q == lp.q);
    CHECK(same_bits(lp2.coeffs, lp.coeffs));

    const auto params = random_params(trial, side, p, m, testing::pick(rng, 0, 4), false);
    CHECK(round_trip(params) == params);

    SampleSet s = circle_samples(bp, 5);
    const auto s2 = round_trip(s);
    CHECK(s2.points == s.points);
    CHECK(same_bits(s2.values, s.values));
  }
}

TEST_CASE("awkward doubles survive") {
  const double values[] = {0.1, 1.0 / 3.0, 5e-324, 1.7976931348623157e308, -0.0, 2.2250738585072014e-308};
  for (double x : values) {
    SampleSet s;
    s.points.push_back({x, -x});
    s.values.push_back(ComplexMatrix{{Complex(x, x)}});
    const auto back = round_trip(s);
    CHECK(std::memcmp(&back.points[0], &s.points[0], sizeof(Complex)) == 0);
    CHECK(same_bits(back.values[0], s.values[0]));
  }
}

TEST_CASE("kind_of names every document") {
  CHECK(io::kind_of(testing::example_bp()) == "bp");
  CHECK(io::kind_of(testing::example_r_hat()) == "ss");
  CHECK(io::kind_of(SampleSet{}) == "samples");
  CHECK(io::kind_of(random_params(1, Side::Iso, 1, 1, 1, false)) == "params");
}

TEST_CASE("parse errors point at the problem") {
  CHECK(parse_message("{\n  \"kind\": \"bp\",\n  oops\n}").find("line 3") != std::string::npos);
  CHECK(parse_message("[1, 2]").find("field <root>") != std::string::npos);

  std::string text = io::write_document(testing::example_bp());
  CHECK(parse_message(std::string(text).replace(text.find("\"coiso\""), 7, "\"sideways\"")).find("field side") !=
        std::string::npos);
  CHECK(parse_message(std::string(text).replace(text.find("paraunit/1"), 10, "paraunit/9")).find("format_version") !=
        std::string::npos);
  const std::string no_kind = std::string(text).replace(text.find("\"kind\""), 6, "\"kinds\"");
  CHECK(parse_message(no_kind).find("field kind") != std::string::npos);

  // A direction of the wrong length is a shape error naming the factor.
  const auto bad = BlaschkePotapovForm::create(Side::Iso, ComplexMatrix::identity(2),
                                               {{Pole::finite(0.5), ComplexMatrix{{1.0}, {0.0}}}});
  std::string bad_text = io::write_document(bad);
  const auto pos = bad_text.find("\"v\"");
  REQUIRE(pos != std::string::npos);
  const auto rows = bad_text.find("\"rows\": 2", pos);
  REQUIRE(rows != std::string::npos);
  bad_text.replace(rows, 9, "\"rows\": 1");
  CHECK(parse_message(bad_text).find("factors[0].v") != std::string::npos);
}

TEST_CASE("unit norms are left to the certificates") {
  std::string text = io::write_document(testing::example_bp());
  // Scale the direction (1, 0) of the single factor to (2, 0).
  const auto v = text.find("\"v\"");
  const auto one = text.find("1", text.find("data", v) + 4);
  text.replace(one, 1, "2");
  const auto doc = io::read_document(text);
  REQUIRE(std::holds_alternative<BlaschkePotapovForm>(doc));
  CHECK(std::get<BlaschkePotapovForm>(doc).factors()[0].v(0, 0) == Complex(2.0));
}

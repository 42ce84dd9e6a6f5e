#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

#include "support.hpp"
#include "tfalg/algebra.hpp"
#include "tfalg/errors.hpp"
#include "tfalg/operator_io.hpp"

using namespace tfalg;
using tfalg::testing::Rng;

namespace {

double coeff_distance(const TFOperator& a, const TFOperator& b) {
  return norm_av(axpy(-1.0, a, b), Weight::constant());
}

}  // namespace

TEST_SUITE("point") {
  TEST_CASE("quantization identifies nearby coordinates") {
    CHECK(quantize(0.1 + 0.2) == quantize(0.3));
    CHECK(quantize(1.0) == 4294967296LL);
    CHECK(quantize(-0.5) == -2147483648LL);
    CHECK(TFPoint(0.1 + 0.2, 1.0) == TFPoint(0.3, 1.0));
    CHECK_FALSE(TFPoint(0.3, 1.0) == TFPoint(0.3 + 1e-8, 1.0));
  }

  TEST_CASE("coordinates must be finite and in range") {
    CHECK_THROWS_AS(quantize(std::nan("")), PreconditionError);
    CHECK_THROWS_AS(quantize(2.0 * kMaxCoordinate), PreconditionError);
    CHECK_THROWS_AS(TFPoint(std::vector<double>{1.0}, std::vector<double>{1.0, 2.0}), DimensionMismatch);
    CHECK_THROWS_AS(TFPoint(0), PreconditionError);
  }

  TEST_CASE("arithmetic and norm") {
    const TFPoint p(3.0, 4.0);
    CHECK(p.norm() == doctest::Approx(5.0));
    CHECK((p + (-p)).is_origin());
    CHECK(p - TFPoint(1.0, 1.0) == TFPoint(2.0, 3.0));
    CHECK(TFPoint({1.0, 2.0}, {3.0, 4.0}).key().size() == 4);
  }
}

TEST_SUITE("weight") {
  TEST_CASE("closed forms") {
    CHECK(Weight::constant().radial(7.0) == 1.0);
    CHECK(Weight::polynomial(2.0).radial(1.0) == doctest::Approx(4.0));
    CHECK(Weight::polynomial(1.0, 3.0).radial(1.0) == doctest::Approx(6.0));
    CHECK(Weight::subexponential(1.0, 0.5).radial(4.0) == doctest::Approx(std::exp(2.0)));
    CHECK(Weight::exponential(1.0).radial(2.0) == doctest::Approx(std::exp(2.0)));
    CHECK(Weight::exponential(1.0).log_radial(1e6) == doctest::Approx(1e6));
    CHECK(Weight::polynomial(3.0).log_radial(9.0) == doctest::Approx(3.0 * std::log(10.0)));
  }

  TEST_CASE("admissibility") {
    CHECK(Weight::constant().admissible());
    CHECK(Weight::polynomial(2.0).admissible());
    CHECK(Weight::subexponential(1.0, 0.5).admissible());
    CHECK_FALSE(Weight::exponential(1.0).admissible());
    CHECK_FALSE(Weight::polynomial(1.0, 0.5).submultiplicative());
  }

  TEST_CASE("parse and print round trip") {
    for (const char* text : {"constant", "poly:2", "poly:1.5,2", "subexp:1,0.5", "exp:0.25"}) {
      const Weight w = Weight::parse(text);
      const Weight back = Weight::parse(w.to_string());
      CHECK(back.kind() == w.kind());
      CHECK(back.radial(3.0) == doctest::Approx(w.radial(3.0)));
    }
    CHECK_THROWS_AS(Weight::parse("gauss:1"), ParseError);
    CHECK_THROWS_AS(Weight::parse("poly:x"), ParseError);
    CHECK_THROWS_AS(Weight::parse("subexp:1,2"), ParseError);
    CHECK_THROWS_AS(Weight::subexponential(1.0, 2.0), PreconditionError);
  }

  TEST_CASE("submultiplicative on random pairs") {
    Rng rng(11);
    std::uniform_real_distribution<double> u(0.0, 50.0);
    const Weight ws[] = {Weight::polynomial(2.0), Weight::subexponential(0.7, 0.5), Weight::exponential(0.3)};
    for (const auto& w : ws)
      for (int i = 0; i < 200; ++i) {
        const double a = u(rng), b = u(rng);
        CHECK(w.radial(a + b) <= w.radial(a) * w.radial(b) * (1.0 + 1e-12));
      }
  }
}

TEST_SUITE("operator") {
  TEST_CASE("accumulator merges and orders terms") {
    TermAccumulator acc(1);
    acc.add(TFPoint(1.0, 0.0), 2.0);
    acc.add(TFPoint(-1.0, 0.0), 1.0);
    acc.add(TFPoint(1.0, 0.0), cplx(0.0, 1.0));
    acc.add(TFPoint(0.0, 5.0), 1e-17);
    DropReport dropped;
    const TFOperator op = std::move(acc).build(&dropped);
    REQUIRE(op.size() == 2);
    CHECK(op.t(0)[0] == -1.0);
    CHECK(op.coefficient_at(TFPoint(1.0, 0.0)) == cplx(2.0, 1.0));
    CHECK(op.coefficient_at(TFPoint(2.0, 0.0)) == cplx(0.0));
    CHECK(dropped.count == 1);
    CHECK(dropped.max_radius == doctest::Approx(5.0));
  }

  TEST_CASE("cancellation removes the term") {
    TermAccumulator acc(1);
    acc.add(TFPoint(1.0, 1.0), 0.3);
    acc.add(TFPoint(1.0, 1.0), -0.3);
    CHECK(std::move(acc).build().empty());
  }

  TEST_CASE("io round trip") {
    Rng rng(5);
    const TFOperator op = testing::random_operator(rng, 2, 7, 3.0);
    const auto path = std::filesystem::temp_directory_path() / "tfalg_core_roundtrip.json";
    write_operator(path, op);
    CHECK(read_operator(path) == op);
    std::filesystem::remove(path);
  }

  TEST_CASE("malformed operator files") {
    CHECK_THROWS_AS(operator_from_json(nlohmann::json::parse(R"({"terms": []})")), ParseError);
    CHECK_THROWS_AS(operator_from_json(nlohmann::json::parse(R"({"dim": 1, "terms": [{"t": [0]}]})")),
                    ParseError);
    CHECK_THROWS_AS(
        operator_from_json(nlohmann::json::parse(R"({"dim": 1, "terms": [{"t": [0, 1], "omega": [0], "re": 1}]})")),
        ParseError);
    CHECK_THROWS_AS(read_operator("/nonexistent/op.json"), ParseError);
  }

  TEST_CASE("duplicate points in a file are summed") {
    const TFOperator op = operator_from_json(nlohmann::json::parse(
        R"({"dim": 1, "terms": [{"t": [1], "omega": [0], "re": 1, "im": 0},
                                {"t": [1], "omega": [0], "re": 0.5, "im": 2}]})"));
    REQUIRE(op.size() == 1);
    CHECK(op.coeff(0) == cplx(1.5, 2.0));
  }
}

TEST_SUITE("algebra") {
  TEST_CASE("composition phase") {
    // U_{1,0} U_{0,1} = e^{-i} U_{1,1}
    const TFOperator p = compose(TFOperator::single(TFPoint(1.0, 0.0)), TFOperator::single(TFPoint(0.0, 1.0)));
    REQUIRE(p.size() == 1);
    CHECK(std::abs(p.coefficient_at(TFPoint(1.0, 1.0)) - std::polar(1.0, -1.0)) < 1e-15);
    const TFOperator q = compose(TFOperator::single(TFPoint(0.0, 1.0)), TFOperator::single(TFPoint(1.0, 0.0)));
    CHECK(std::abs(q.coefficient_at(TFPoint(1.0, 1.0)) - 1.0) < 1e-15);
  }

  TEST_CASE("identity is neutral and the adjoint inverts a single shift") {
    Rng rng(3);
    const TFOperator a = testing::random_operator(rng, 1, 5, 2.0);
    const TFOperator one = TFOperator::identity(1);
    CHECK(coeff_distance(compose(one, a), a) == 0.0);
    CHECK(coeff_distance(compose(a, one), a) == 0.0);
    const TFOperator u = TFOperator::single(TFPoint(0.7, -1.3));
    CHECK(coeff_distance(compose(adjoint(u), u), one) < 1e-15);
    CHECK(coeff_distance(compose(u, adjoint(u)), one) < 1e-15);
  }

  TEST_CASE("associativity, involution and anti-homomorphism on random operators") {
    Rng rng(17);
    for (int trial = 0; trial < 30; ++trial) {
      const int d = 1 + trial % 2;
      const TFOperator a = testing::random_operator(rng, d, 4, 2.0);
      const TFOperator b = testing::random_operator(rng, d, 3, 2.0);
      const TFOperator c = testing::random_operator(rng, d, 3, 2.0);
      const double scale = norm_av(a, {}) * norm_av(b, {}) * norm_av(c, {});
      CHECK(coeff_distance(compose(compose(a, b), c), compose(a, compose(b, c))) <= 1e-13 * scale);
      CHECK(coeff_distance(adjoint(adjoint(a)), a) <= 1e-14 * norm_av(a, {}));
      CHECK(coeff_distance(adjoint(compose(a, b)), compose(adjoint(b), adjoint(a))) <=
            1e-13 * norm_av(a, {}) * norm_av(b, {}));
    }
  }

  TEST_CASE("weighted norm is submultiplicative") {
    Rng rng(23);
    const Weight ws[] = {Weight::constant(), Weight::polynomial(2.0), Weight::subexponential(1.0, 0.5),
                         Weight::exponential(0.5)};
    for (int trial = 0; trial < 20; ++trial) {
      const TFOperator a = testing::random_operator(rng, 1, 4, 3.0);
      const TFOperator b = testing::random_operator(rng, 1, 4, 3.0);
      for (const auto& w : ws) CHECK(norm_av(compose(a, b), w) <= norm_av(a, w) * norm_av(b, w) * (1 + 1e-12));
    }
  }

  TEST_CASE("coefficient norms") {
    TermAccumulator acc(1);
    acc.add(TFPoint(0.0, 0.0), 3.0);
    acc.add(TFPoint(1.0, 0.0), cplx(0.0, 4.0));
    const CoeffNorms n = coeff_norms(std::move(acc).build());
    CHECK(n.linf == 4.0);
    CHECK(n.l2 == doctest::Approx(5.0));
    CHECK(n.l1 == doctest::Approx(7.0));
    CHECK(support_radius(TFOperator::single(TFPoint(3.0, 4.0))) == doctest::Approx(5.0));
    CHECK_THROWS_AS(support_radius(TFOperator(1)), PreconditionError);
  }

  TEST_CASE("power of a shift") {
    const TFOperator p = power(scale(0.5, TFOperator::single(TFPoint(1.0, 0.0))), 4);
    REQUIRE(p.size() == 1);
    CHECK(std::abs(p.coefficient_at(TFPoint(4.0, 0.0)) - 0.0625) < 1e-16);
    CHECK(power(p, 0) == TFOperator::identity(1));
  }

  TEST_CASE("truncation stays within budget and drops the smallest mass first") {
    TermAccumulator acc(1);
    for (int k = 0; k < 10; ++k) acc.add(TFPoint(k, 0.0), std::pow(0.5, k));
    const TFOperator op = std::move(acc).build();
    const Weight v = Weight::polynomial(1.0);
    const Truncation tr = truncate(op, v, 0.05);
    CHECK(tr.discarded <= 0.05);
    CHECK(norm_av(op, v) - norm_av(tr.op, v) == doctest::Approx(tr.discarded));
    CHECK(tr.op.coefficient_at(TFPoint(0.0, 0.0)) == 1.0);
    CHECK(tr.op.coefficient_at(TFPoint(9.0, 0.0)) == 0.0);
    CHECK(truncate(op, v, 0.0).op == op);
  }

  TEST_CASE("dimension mismatch") {
    CHECK_THROWS_AS(compose(TFOperator::identity(1), TFOperator::identity(2)), DimensionMismatch);
  }
}

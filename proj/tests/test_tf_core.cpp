#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "netid/errors.hpp"
#include "netid/network.hpp"
#include "netid/tf_core.hpp"

using namespace netid;

namespace {

RationalTF random_tf(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> deg(0, 3);
  std::vector<double> num(static_cast<std::size_t>(deg(rng)) + 1), den(static_cast<std::size_t>(deg(rng)) + 1);
  for (double& c : num) c = u(rng);
  den[0] = 1.0;
  for (std::size_t k = 1; k < den.size(); ++k) den[k] = 0.3 * u(rng);
  return RationalTF(PolyQ(num), PolyQ(den));
}

const RationalTF g34 = RationalTF::fir({0.0, -0.3, 0.8});
const RationalTF g1110(PolyQ{0.0, 0.24710993}, PolyQ{1.0, -0.50578013});

}  // namespace

TEST_CASE("polynomial canonical form") {
  CHECK(PolyQ().coeffs().size() == 1);
  CHECK(PolyQ().is_zero());
  CHECK(PolyQ{1.0, 2.0, 0.0, 0.0}.degree() == 1);
  CHECK(PolyQ{0.0, 0.0}.is_zero());
  CHECK(PolyQ(std::vector<double>{}).is_zero());
  CHECK(PolyQ::monomial(2.0, 3) == PolyQ{0.0, 0.0, 0.0, 2.0});
  CHECK(PolyQ{0.0, 0.0, 4.0}.first_nonzero() == 2u);
  CHECK_FALSE(PolyQ().first_nonzero().has_value());
  CHECK(PolyQ{1.0, 2.0} * PolyQ{1.0, -2.0} == PolyQ{1.0, 0.0, -4.0});
  CHECK((PolyQ{1.0, 2.0} - PolyQ{1.0, 2.0}).is_zero());
}

TEST_CASE("rational normalization") {
  const RationalTF tf(PolyQ{2.0, 4.0}, PolyQ{2.0, -1.0});
  CHECK(tf.num() == PolyQ{1.0, 2.0});
  CHECK(tf.den() == PolyQ{1.0, -0.5});
  CHECK(tf.normalized() == tf);
  CHECK(tf.normalized().normalized() == tf.normalized());
  CHECK_THROWS_AS(RationalTF(PolyQ{1.0}, PolyQ{0.0, 1.0}), std::invalid_argument);

  CHECK(g34.relative_degree() == 1u);
  CHECK(RationalTF::fir({0.5, 1.0}).relative_degree() == 0u);
  CHECK(RationalTF::fir({0.5, 1.0}).feedthrough() == 0.5);
  CHECK_FALSE(RationalTF().relative_degree().has_value());
  CHECK(g34.is_fir());
  CHECK_FALSE(g1110.is_fir());
}

TEST_CASE("tf_eval") {
  const RationalTF one = RationalTF::fir({1.0});
  for (double w : {0.0, 0.7, 3.0, 5.9}) CHECK(tf_eval(one, w) == Complex(1.0, 0.0));

  CHECK(std::abs(tf_eval(g34, 0.0) - Complex(0.5, 0.0)) < 1e-15);

  // 0.24710993 / 0.49421987 to 20 digits
  const Complex v = tf_eval(g1110, 0.0);
  CHECK(std::abs(v.real() - 0.49999998988304537944) < 1e-15);
  CHECK(v.imag() == 0.0);

  const Complex w = tf_eval(g34, 1.0);
  const Complex expect = -0.3 * std::polar(1.0, -1.0) + 0.8 * std::polar(1.0, -2.0);
  CHECK(std::abs(w - expect) < 1e-15);

  const RationalTF pole_on_circle(PolyQ{1.0}, PolyQ{1.0, -1.0});
  CHECK_THROWS_AS(tf_eval(pole_on_circle, 0.0), EvaluationError);
  try {
    tf_eval(pole_on_circle, 0.0);
  } catch (const EvaluationError& e) {
    CHECK(e.omega() == 0.0);
  }
}

TEST_CASE("tf_arith examples") {
  const RationalTF zero;
  const RationalTF g35 = RationalTF::fir({0.0, -0.5});
  const RationalTF g54 = RationalTF::fir({0.0, 0.5});
  CHECK(tf_arith(zero, g35, ArithOp::add) == g35);
  CHECK(tf_arith(g54, g35, ArithOp::mul) == RationalTF::fir({0.0, 0.0, -0.25}));

  const NetworkModel cs = build_case_study();
  const RationalTF& a = cs.edge({NodeId{11}, NodeId{10}});
  const RationalTF& b = cs.edge({NodeId{11}, NodeId{12}});
  const RationalTF sum = tf_arith(a, b, ArithOp::add);
  CHECK(sum.den() == a.den() * b.den());
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> om(0.0, 2.0 * std::numbers::pi);
  double worst = 0.0;
  for (int k = 0; k < 16; ++k) {
    const double w = om(rng);
    worst = std::max(worst, std::abs(tf_eval(sum, w) - tf_eval(a, w) - tf_eval(b, w)));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("stability") {
  CHECK(is_stable(RationalTF(PolyQ{1.0}, PolyQ{1.0, -0.5})));
  CHECK_FALSE(is_stable(RationalTF(PolyQ{1.0}, PolyQ{1.0, -2.0})));
  CHECK(is_stable(g34));

  const RationalTF& g1817 = build_case_study().edge({NodeId{18}, NodeId{17}});
  const auto p = poles(g1817);
  REQUIRE(p.size() == 1);
  CHECK(std::abs(p[0] - Complex(0.52261494, 0.0)) < 1e-12);
  CHECK(is_stable(g1817));

  const auto two = poles(RationalTF(PolyQ{1.0}, PolyQ{1.0, 0.0, 0.25}));
  REQUIRE(two.size() == 2);
  for (const Complex& z : two) CHECK(std::abs(std::abs(z) - 0.5) < 1e-12);
}

TEST_CASE("impulse response by long division") {
  const auto h = impulse_response(RationalTF(PolyQ{1.0}, PolyQ{1.0, -0.5}), 5);
  REQUIRE(h.size() == 5);
  for (std::size_t k = 0; k < 5; ++k) CHECK(h[k] == doctest::Approx(std::pow(0.5, k)));
  const auto f = impulse_response(g34, 4);
  CHECK(f == std::vector<double>{0.0, -0.3, 0.8, 0.0});
}

TEST_CASE("frequency grid") {
  const FreqGrid g = FreqGrid::equispaced(4);
  REQUIRE(g.size() == 4);
  CHECK(g[0] == 0.0);
  CHECK(g[2] == doctest::Approx(std::numbers::pi));
  CHECK_THROWS(FreqGrid({}));
  CHECK_THROWS(FreqGrid({0.5, 0.1}));
  CHECK_THROWS(FreqGrid({0.0, 7.0}));
  CHECK_THROWS(FreqGrid::equispaced(0));
}

TEST_CASE("property: evaluation is a ring homomorphism") {
  std::mt19937_64 rng(2024);
  const FreqGrid grid = FreqGrid::equispaced(64);
  for (int trial = 0; trial < 200; ++trial) {
    const RationalTF a = random_tf(rng), b = random_tf(rng);
    const RationalTF prod = a * b, sum = a + b, diff = a - b;
    for (double w : grid.omegas()) {
      const Complex ea = tf_eval(a, w), eb = tf_eval(b, w);
      REQUIRE(std::abs(tf_eval(prod, w) - ea * eb) < 1e-12);
      REQUIRE(std::abs(tf_eval(sum, w) - (ea + eb)) < 1e-12);
      REQUIRE(std::abs(tf_eval(diff, w) - (ea - eb)) < 1e-12);
    }
  }
}

TEST_CASE("property: conjugate symmetry") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> om(0.01, std::numbers::pi);
  for (int trial = 0; trial < 200; ++trial) {
    const RationalTF a = random_tf(rng);
    const double w = om(rng);
    REQUIRE(std::abs(tf_eval(a, w) - std::conj(tf_eval(a, 2.0 * std::numbers::pi - w))) < 1e-12);
  }
}

TEST_CASE("property: normalization is idempotent") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.5, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    const RationalTF a = random_tf(rng);
    const double s = u(rng);
    const RationalTF scaled(s * a.num(), s * a.den());
    REQUIRE(scaled.normalized() == scaled.normalized().normalized());
    REQUIRE(scaled.den()[0] == 1.0);
  }
}

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "means/mean_spec.hpp"
#include "means/registry.hpp"

using namespace means;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// independent reference for the quasiarithmetic formula: apply the inverse
// by test-side bisection, never through the library's inversion path
double brute_quasiarithmetic(const std::function<double(double)>& phi,
                             const std::vector<double>& w,
                             const std::vector<double>& xs, double lo,
                             double hi) {
  double target = 0.0;
  for (std::size_t j = 0; j < xs.size(); ++j) target += w[j] * phi(xs[j]);
  const bool inc = phi(hi) > phi(lo);
  for (int i = 0; i < 500; ++i) {
    const double mid = 0.5 * (lo + hi);
    ((phi(mid) < target) == inc ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<std::vector<double>> random_tuples(std::size_t n, std::size_t arity,
                                               double lo, double hi,
                                               unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  std::vector<std::vector<double>> out(n, std::vector<double>(arity));
  for (auto& t : out)
    for (auto& x : t) x = std::exp(u(rng));
  return out;
}

}  // namespace

TEST_CASE("quasiarithmetic mean: worked examples") {
  const Weights half({0.5, 0.5});
  CHECK_THAT(eval_quasiarithmetic(identity_generator(), half, {2.0, 4.0}),
             WithinAbs(3.0, 1e-12));
  CHECK_THAT(eval_quasiarithmetic(log_generator(), half, {2.0, 8.0}),
             WithinRel(4.0, 1e-12));

  // phi = t^2, w = (1/4, 3/4), xs = (1, 3): sqrt(0.25*1 + 0.75*9) = sqrt(7)
  const double expect = std::sqrt(7.0);  // 2.6457513110645907
  CHECK_THAT(
      eval_quasiarithmetic(power_generator(2.0), Weights({0.25, 0.75}),
                           {1.0, 3.0}),
      WithinRel(expect, 1e-12));
  // cross-check the closed form against the bisection oracle
  const double oracle = brute_quasiarithmetic(
      [](double t) { return t * t; }, {0.25, 0.75}, {1.0, 3.0}, 1.0, 3.0);
  CHECK_THAT(oracle, WithinRel(expect, 1e-12));
}

TEST_CASE("quasiarithmetic mean: error paths") {
  const Weights half({0.5, 0.5});
  CHECK_THROWS_AS(eval_quasiarithmetic(log_generator(), half, {-1.0, 2.0}),
                  DomainError);
  CHECK_THROWS_AS(
      eval_quasiarithmetic(log_generator(), half, {1.0, 2.0, 3.0}),
      ArityMismatch);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(eval_quasiarithmetic(log_generator(), half, {nan, 2.0}),
                  DomainError);
}

TEST_CASE("power mean: worked examples and r=0 policy") {
  const Weights half({0.5, 0.5});
  CHECK_THAT(eval_power_mean(1.0, half, {2.0, 4.0}), WithinAbs(3.0, 1e-12));
  CHECK_THAT(eval_power_mean(0.0, Weights({0.3, 0.7}), {10.0, 10.0}),
             WithinAbs(10.0, 1e-12));
  // r=2: sqrt((1 + 49)/2) = 5
  CHECK_THAT(eval_power_mean(2.0, half, {1.0, 7.0}), WithinRel(5.0, 1e-12));
  // harmonic of (2, 8): 2/(1/2 + 1/8) = 16/5
  CHECK_THAT(eval_power_mean(-1.0, half, {2.0, 8.0}),
             WithinRel(3.2, 1e-12));
  CHECK_THROWS_AS(eval_power_mean(1.0, half, {-2.0, 4.0}), DomainError);
  CHECK_THROWS_AS(eval_power_mean(1.0, half, {2.0, 4.0, 6.0}),
                  ArityMismatch);
}

TEST_CASE("power mean is continuous at r=0") {
  for (const auto& xs : random_tuples(50, 3, 1e-6, 1e6, 11)) {
    const Weights w = Weights::uniform(3);
    const double g = eval_geometric(w, xs);
    for (double r : {-1e-6, 1e-6}) {
      CHECK_THAT(eval_power_mean(r, w, xs), WithinRel(g, 1e-4));
    }
    // inside the switch-over band the geometric branch is used verbatim
    CHECK(eval_power_mean(1e-9, w, xs) == g);
  }
}

TEST_CASE("power mean homogeneity across extreme scales") {
  for (const auto& xs : random_tuples(40, 2, 1e-3, 1e3, 12)) {
    const Weights w({0.2, 0.8});
    for (double r : {-2.0, -1.0, 0.0, 0.5, 2.0}) {
      const double m = eval_power_mean(r, w, xs);
      for (double t : {1e-3, 1.0, 1e3}) {
        std::vector<double> scaled = {t * xs[0], t * xs[1]};
        CHECK_THAT(eval_power_mean(r, w, scaled), WithinRel(t * m, 1e-10));
      }
    }
  }
}

TEST_CASE("geometric mean: worked examples, log-domain safety") {
  const Weights half({0.5, 0.5});
  CHECK_THAT(eval_geometric(half, {4.0, 0.25}), WithinAbs(1.0, 1e-12));
  // 8^(1/3) = 2
  CHECK_THAT(eval_geometric(Weights({1.0 / 3, 2.0 / 3}), {8.0, 1.0}),
             WithinRel(2.0, 1e-12));
  for (double c : {1e-8, 0.35, 1e9}) {
    CHECK_THAT(eval_geometric(Weights({0.2, 0.8}), {c, c}),
               WithinRel(c, 1e-12));
  }
  // would overflow term-by-term without the log-domain route
  CHECK_THAT(eval_geometric(half, {1e300, 1e-300}), WithinAbs(1.0, 1e-9));
  CHECK_THROWS_AS(eval_geometric(half, {0.0, 1.0}), DomainError);
}

TEST_CASE("quasigeometric mean: worked examples and log-composed equivalence") {
  const Weights half({0.5, 0.5});
  CHECK_THAT(eval_quasigeometric(identity_generator(), half, {2.0, 8.0}),
             WithinRel(4.0, 1e-12));
  // gamma = x^2 at (2, 8): sqrt(sqrt(4 * 64)) = 4
  CHECK_THAT(eval_quasigeometric(power_generator(2.0), half, {2.0, 8.0}),
             WithinRel(4.0, 1e-12));
  CHECK_THAT(eval_quasigeometric(identity_generator(),
                                 Weights({1.0 / 3, 2.0 / 3}), {8.0, 1.0}),
             WithinRel(2.0, 1e-12));

  // gamma with non-positive values is rejected
  CHECK_THROWS_AS(eval_quasigeometric(log_generator(), half, {0.5, 0.7}),
                  DomainError);

  for (const auto& xs : random_tuples(60, 2, 1e-4, 1e4, 13)) {
    for (const auto& gen : {identity_generator(), power_generator(2.0),
                            power_generator(0.5)}) {
      const double qg = eval_quasigeometric(gen, half, xs);
      const double qa = eval_quasiarithmetic(compose_log(gen), half, xs);
      CHECK_THAT(qg, WithinRel(qa, 1e-10));
    }
  }
}

TEST_CASE("generator equivalence: a*phi + b defines the same mean") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> coef(-3.0, 3.0);
  const Weights w({0.3, 0.7});
  // inputs where a*sum(p*phi) is not swamped by b in double precision;
  // the identity is exact, the float cancellation otherwise is not
  for (const auto& xs : random_tuples(40, 2, 0.5, 50.0, 22)) {
    double a = coef(rng);
    if (std::abs(a) < 0.1) a = 0.5;
    const double b = coef(rng);
    for (const auto& gen : {log_generator(), power_generator(2.0)}) {
      const double base = eval_quasiarithmetic(gen, w, xs);
      const double shifted =
          eval_quasiarithmetic(affine_of(a, b, gen), w, xs);
      CHECK_THAT(shifted, WithinRel(base, 1e-10));
    }
  }
  // the log case stays well-conditioned over the full default range
  for (const auto& xs : random_tuples(40, 2, 1e-6, 1e6, 23)) {
    const double base = eval_quasiarithmetic(log_generator(), w, xs);
    const double shifted = eval_quasiarithmetic(
        affine_of(-1.75, 2.5, log_generator()), w, xs);
    CHECK_THAT(shifted, WithinRel(base, 1e-10));
  }
}

TEST_CASE("homogeneous generator families reduce to power and geometric means") {
  const Weights w({0.4, 0.6});
  for (const auto& xs : random_tuples(30, 2, 1e-2, 1e2, 23)) {
    CHECK_THAT(eval_quasiarithmetic(power_generator(2.0), w, xs),
               WithinRel(eval_power_mean(2.0, w, xs), 1e-10));
    CHECK_THAT(eval_quasiarithmetic(affine_log_generator(2.5, -1.0), w, xs),
               WithinRel(eval_geometric(w, xs), 1e-10));
  }
}

TEST_CASE("generalized quasigeometric mean: worked examples") {
  std::vector<Generator> same = {power_generator(1.0), power_generator(1.0)};
  CHECK_THAT(eval_generalized_quasigeometric(same, {2.0, 8.0}),
             WithinRel(4.0, 1e-10));

  // (x^2, x^1) at (8, 1): product function x^3, value 64 -> 64^(1/3) = 4,
  // the geometric mean with weights (2/3, 1/3)
  std::vector<Generator> mixed = {power_generator(2.0), power_generator(1.0)};
  CHECK_THAT(eval_generalized_quasigeometric(mixed, {8.0, 1.0}),
             WithinRel(4.0, 1e-10));
  CHECK_THAT(eval_generalized_quasigeometric(mixed, {8.0, 1.0}),
             WithinRel(eval_geometric(Weights({2.0 / 3, 1.0 / 3}), {8.0, 1.0}),
                       1e-10));

  for (double c : {0.04, 1.0, 250.0}) {
    std::vector<double> xs = {c, c, c};
    std::vector<Generator> gs = {power_generator(0.5), power_generator(0.5),
                                 power_generator(0.5)};
    CHECK_THAT(eval_generalized_quasigeometric(gs, xs), WithinRel(c, 1e-12));
  }

  std::vector<Generator> clash = {power_generator(1.0), power_generator(-1.0)};
  CHECK_THROWS_AS(eval_generalized_quasigeometric(clash, {1.0, 2.0}),
                  InvariantError);
}

TEST_CASE("conjugate means: worked examples") {
  const Weights half({0.5, 0.5});
  const auto geo = MeanSpec::geometric(half);

  // ln G(1, 4) = ln 2
  CHECK_THAT(
      conjugate_eval(geo, Homeomorphism::exponential(), {0.0, std::log(4.0)}),
      WithinRel(std::log(2.0), 1e-12));

  // reciprocal conjugate of the arithmetic mean is the harmonic mean: 8/3
  const auto arith = MeanSpec::power(1.0, half);
  CHECK_THAT(conjugate_eval(arith, Homeomorphism::reciprocal(), {2.0, 4.0}),
             WithinRel(8.0 / 3.0, 1e-12));

  // identity conjugation changes nothing
  for (const auto& xs : random_tuples(20, 2, 1e-2, 1e2, 31)) {
    CHECK_THAT(conjugate_eval(arith, Homeomorphism::identity(), xs),
               WithinRel(arith.eval(xs), 1e-12));
  }
}

TEST_CASE("conjugating by h then h^{-1} restores the mean") {
  const auto base = MeanSpec::power(1.0, Weights({0.25, 0.75}));
  for (const auto& h :
       {Homeomorphism::reciprocal(), Homeomorphism::exponential()}) {
    const auto once = MeanSpec::conjugate(base, h);
    const auto back = MeanSpec::conjugate(once, h.inverse());
    for (const auto& xs : random_tuples(25, 2, 1e-2, 1e2, 32)) {
      CHECK_THAT(back.eval(xs), WithinRel(base.eval(xs), 1e-10));
    }
  }
}

TEST_CASE("conjugate construction validates the target against the inner domain") {
  // exp maps R onto (0, inf): fine over a positive-domain mean
  CHECK_NOTHROW(MeanSpec::conjugate(MeanSpec::geometric(Weights::uniform(2)),
                                    Homeomorphism::exponential()));
  // log maps (0, inf) onto R: the geometric mean does not cover R
  CHECK_THROWS_AS(MeanSpec::conjugate(MeanSpec::geometric(Weights::uniform(2)),
                                      Homeomorphism::logarithm()),
                  InvariantError);
}

TEST_CASE("reciprocal image") {
  const auto r = reciprocal_image({2.0, 8.0});
  CHECK(r == std::vector<double>{0.5, 0.125});
  CHECK(reciprocal_image({1.0, 1.0, 1.0}) ==
        std::vector<double>{1.0, 1.0, 1.0});
  const auto swapped = reciprocal_image({4.0, 0.25});
  CHECK(swapped == std::vector<double>{0.25, 4.0});
  CHECK_THROWS_AS(reciprocal_image({2.0, -1.0}), DomainError);
  CHECK_THROWS_AS(reciprocal_image({2.0, 0.0}), DomainError);

  for (const auto& xs : random_tuples(20, 4, 1e-6, 1e6, 33)) {
    const auto twice = reciprocal_image(reciprocal_image(xs));
    for (std::size_t j = 0; j < xs.size(); ++j)
      CHECK_THAT(twice[j], WithinRel(xs[j], 1e-15));
  }
}

TEST_CASE("every family satisfies the mean axiom and idempotence on samples") {
  const Weights w3 = Weights::uniform(3);
  const std::vector<MeanSpec> zoo = {
      MeanSpec::geometric(w3),
      MeanSpec::power(3.0, w3),
      MeanSpec::power(-2.0, w3),
      MeanSpec::quasiarithmetic(log_generator(), w3),
      MeanSpec::quasiarithmetic(poly_cube_generator(), w3),
      MeanSpec::quasigeometric(power_generator(2.0), w3),
      MeanSpec::generalized_quasigeometric(
          {power_generator(1.0), power_generator(2.0), power_generator(0.5)}),
      MeanSpec::conjugate(MeanSpec::power(1.0, w3),
                          Homeomorphism::reciprocal()),
  };
  for (const auto& spec : zoo) {
    for (const auto& xs : random_tuples(40, 3, 1e-2, 1e2, 41)) {
      const double m = spec.eval(xs);
      const double mn = *std::min_element(xs.begin(), xs.end());
      const double mx = *std::max_element(xs.begin(), xs.end());
      CHECK(m >= mn);
      CHECK(m <= mx);
      if (spec.is_strict() && mx > mn * (1 + 1e-9)) {
        CHECK(m > mn);
        CHECK(m < mx);
      }
    }
    for (double c : {0.01, 1.0, 42.0}) {
      const std::vector<double> xs(3, c);
      CHECK_THAT(spec.eval(xs), WithinRel(c, 1e-12));
    }
  }
}

TEST_CASE("mean spec names round-trip through the parser") {
  const std::vector<std::string> specs = {
      "geometric:0.5,0.5",
      "power:1:0.5,0.5",
      "power:-2:0.25,0.75",
      "quasiarithmetic:log:0.5,0.5",
      "quasiarithmetic:affine-log:2:1:0.3,0.7",
      "quasigeometric:power:2:0.5,0.5",
      "gqg:power:2;power:1",
      "conjugate:reciprocal:power:1:0.5,0.5",
      "conjugate:exp:geometric:0.5,0.5",
  };
  for (const auto& s : specs) {
    const auto spec = parse_mean(s);
    CHECK(spec.name() == s);
    const auto again = parse_mean(spec.name());
    CHECK(again.name() == s);
  }
}

TEST_CASE("mean spec parsing: defaults and failures") {
  // omitted weights become uniform over the hinted arity
  const auto p = parse_mean("power:1", 4);
  CHECK(p.arity() == 4);
  CHECK(p.weights() != nullptr);
  CHECK((*p.weights())[0] == 0.25);

  CHECK_THROWS_AS(parse_mean("nonsense"), SpecParseError);
  CHECK_THROWS_AS(parse_mean("power:1"), SpecParseError);  // no weights, no hint
  CHECK_THROWS_AS(parse_mean("power"), SpecParseError);
  CHECK_THROWS_AS(parse_mean("quasiarithmetic:nonsense:0.5,0.5"),
                  SpecParseError);
  CHECK_THROWS_AS(parse_mean("conjugate:reciprocal"), SpecParseError);
  CHECK_THROWS_AS(parse_mean("geometric:0.5,0.6"), InvariantError);
}

TEST_CASE("evaluation arity is enforced") {
  const auto spec = parse_mean("geometric:0.5,0.5");
  CHECK(spec.arity() == 2);
  CHECK_THROWS_AS(spec.eval({1.0, 2.0, 3.0}), ArityMismatch);
}

#include <doctest.h>

#include <cmath>
#include <limits>

#include "convexity_gate/functions.hpp"
#include "convexity_gate/random.hpp"
#include "support.hpp"

using namespace convexity_gate;
using test_support::r;

namespace {

const Interval wide(-100, 100);

std::vector<FunctionSpec> convex_catalog() {
    return {FunctionSpec::power(r(2)),
            FunctionSpec::power(r(4)),
            FunctionSpec::exp(),
            FunctionSpec::abs(),
            FunctionSpec::affine(r(3), r(-2)),
            FunctionSpec::piecewise_linear({{r(-2), r(5)}, {r(0), r(0)}, {r(1), r(1)}, {r(3), r(8)}},
                                           ConvexityClass::convex),
            FunctionSpec::polynomial({r(1), r(-2), r(3)}, ConvexityClass::convex),
            FunctionSpec::scaled(FunctionSpec::abs(), r(5, 2)),
            FunctionSpec::sum({FunctionSpec::exp(), FunctionSpec::power(r(2))})};
}

} // namespace

TEST_CASE("intervals") {
    CHECK_THROWS_AS(Interval(1, 1), InvalidArgument);
    CHECK_THROWS_AS(Interval(2, 1), InvalidArgument);
    const Interval i(0, 1);
    CHECK_FALSE(i.contains(0.0));
    CHECK(i.contains(0.5));
    CHECK_FALSE(i.contains(r(1)));
    CHECK(i.contains(r(1, 3)));
    CHECK(Interval::real_line().contains(1e300));
    CHECK_FALSE(Interval::real_line().is_bounded());

    const auto box = sampling_box(Interval(-10, 10));
    CHECK(box.lo == doctest::Approx(-10 + 2e-8));
    CHECK(box.hi == doctest::Approx(10 - 2e-8));
    CHECK(box.lo > -10);
    const auto half = sampling_box(Interval(0, std::numeric_limits<double>::infinity()), 4);
    CHECK(half.lo > 0);
    CHECK(half.hi == doctest::Approx(4));
    const auto line = sampling_box(Interval::real_line(), 10);
    CHECK(line.lo == -5);
    CHECK(line.hi == 5);
}

TEST_CASE("evaluate examples") {
    CHECK(evaluate(FunctionSpec::power(r(2)), r(3), wide) == r(9));
    CHECK(evaluate(FunctionSpec::exp(), Scalar(0.0), wide) == Scalar(1.0));
    CHECK(evaluate(FunctionSpec::neg_square(), r(2), wide) == r(-4));
    CHECK(evaluate(FunctionSpec::abs(), r(-7, 2), wide) == r(7, 2));
    CHECK(evaluate(FunctionSpec::polynomial({r(1), r(0), r(2)}), r(3), wide) == r(19));
    CHECK(evaluate(FunctionSpec::power(Scalar(1.5)), 4.0, wide) == doctest::Approx(8.0));
    CHECK(evaluate(FunctionSpec::power(r(3, 2)), Scalar(4.0), wide) == Scalar(8.0));
    CHECK_THROWS_AS(evaluate(FunctionSpec::power(r(3, 2)), Scalar(-4.0), wide), OutOfDomain);
    CHECK_THROWS_AS(evaluate(FunctionSpec::power(r(2)), r(200), wide), OutOfDomain);
    CHECK_THROWS_AS(evaluate(FunctionSpec::power(r(2)), r(-100), wide), OutOfDomain);
    CHECK_THROWS_AS(evaluate(FunctionSpec::exp(), r(1), wide), ModeMismatch);
    CHECK_THROWS_AS(evaluate(FunctionSpec::affine(Scalar(0.5), Scalar(0.0)), r(1), wide), ModeMismatch);
}

TEST_CASE("piecewise linear interpolation and extension") {
    const auto f = FunctionSpec::piecewise_linear({{r(0), r(0)}, {r(1), r(2)}, {r(3), r(3)}});
    CHECK(evaluate(f, r(1, 2), wide) == r(1));
    CHECK(evaluate(f, r(2), wide) == r(5, 2));
    CHECK(evaluate(f, r(-1), wide) == r(-2));
    CHECK(evaluate(f, r(5), wide) == r(4));
    CHECK(evaluate(f, 2.0, wide) == 2.5);
    CHECK_THROWS_AS(FunctionSpec::piecewise_linear({{r(1), r(0)}, {r(1), r(2)}}), InvalidArgument);
    CHECK_THROWS_AS(FunctionSpec::piecewise_linear({{r(1), r(0)}}), InvalidArgument);
    CHECK_THROWS_AS(f.check_within(Interval(0, 3)), InvalidArgument);
    CHECK_NOTHROW(f.check_within(Interval(-1, 4)));
}

TEST_CASE("catalog parameters") {
    CHECK_THROWS_AS(FunctionSpec::power(r(1, 2)), InvalidArgument);
    CHECK_THROWS_AS(FunctionSpec::polynomial(std::vector<Scalar>(10, r(1))), InvalidArgument);
    CHECK_NOTHROW(FunctionSpec::polynomial(std::vector<Scalar>(9, r(1))));
    CHECK_THROWS_AS(FunctionSpec::sum({}), InvalidArgument);
    CHECK(FunctionSpec::power(r(3)).convexity() == ConvexityClass::neither);
    CHECK(FunctionSpec::power(r(2)).convexity() == ConvexityClass::convex);
    CHECK(FunctionSpec::neg_square().convexity() == ConvexityClass::concave);
    CHECK(FunctionSpec::scaled(FunctionSpec::neg_square(), r(-1)).convexity() == ConvexityClass::convex);
    CHECK(convexity_from_string(to_string(ConvexityClass::unknown)) == ConvexityClass::unknown);
    CHECK_THROWS_AS(convexity_from_string("wobbly"), InvalidArgument);
}

TEST_CASE("t-convexity gap examples") {
    for (const auto& f : {FunctionSpec::power(r(2)), FunctionSpec::neg_square(), FunctionSpec::abs()}) {
        CHECK(t_convexity_gap(f, r(-3), r(5), r(0), wide).is_zero());
    }
    CHECK(t_convexity_gap(FunctionSpec::power(r(2)), r(0), r(2), r(1, 2), wide) == r(1));
    CHECK(t_convexity_gap(FunctionSpec::neg_square(), r(0), r(2), r(1, 2), wide) == r(-1));
    CHECK_THROWS_AS(t_convexity_gap(FunctionSpec::abs(), r(0), r(2), r(3, 2), wide), InvalidArgument);
    CHECK_THROWS_AS(t_convexity_gap(FunctionSpec::abs(), r(0), r(200), r(1, 2), wide), OutOfDomain);
}

TEST_CASE("t-convexity gap properties") {
    Rng rng(31);
    for (int trial = 0; trial < 500; ++trial) {
        const Scalar u = r(rng.uniform_int(-60, 60), 12);
        const Scalar v = r(rng.uniform_int(-60, 60), 12);
        const Scalar t = r(rng.uniform_int(0, 12), 12);
        const Scalar one_minus_t = r(1) - t;
        for (const auto& f : convex_catalog()) {
            if (f.kind() == "exp" || f.kind() == "sum") {
                const double uf = u.to_double(), vf = v.to_double(), tf = t.to_double();
                const Scalar g = t_convexity_gap(f, Scalar(uf), Scalar(vf), Scalar(tf), wide);
                CHECK(g.to_double() >= -1e-9);
                continue;
            }
            const Scalar g = t_convexity_gap(f, u, v, t, wide);
            CHECK(g.sign() >= 0);
            CHECK(g == t_convexity_gap(f, v, u, one_minus_t, wide));
            const Scalar c = r(rng.uniform_int(0, 20), 4);
            CHECK(t_convexity_gap(FunctionSpec::scaled(f, c), u, v, t, wide) == c * g);
        }
        CHECK(t_convexity_gap(FunctionSpec::affine(r(7, 3), r(-1, 5)), u, v, t, wide).is_zero());
        CHECK(t_convexity_gap(FunctionSpec::neg_square(), u, v, t, wide).sign() <= 0);
    }
}

#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "convexity_gate/random.hpp"
#include "support.hpp"

using namespace convexity_gate;
using test_support::r;

namespace {

Mat random_rational(Rng& rng, std::size_t rows, std::size_t cols, long long den = 12) {
    std::vector<Scalar> v;
    for (std::size_t i = 0; i < rows * cols; ++i) v.push_back(r(rng.uniform_int(-den, den), den));
    return Mat(rows, cols, std::move(v));
}

/// rows x cols with rank at most k.
Mat random_low_rank(Rng& rng, std::size_t rows, std::size_t cols, std::size_t k) {
    return random_rational(rng, rows, k, 4) * random_rational(rng, k, cols, 3);
}

} // namespace

TEST_CASE("exact scalars stay in lowest terms") {
    CHECK(r(3, -6).to_string() == "-1/2");
    CHECK(r(4, 2).to_string() == "2");
    CHECK(r(0, 5).to_string() == "0");
    CHECK((r(1, 3) + r(1, 6)).to_string() == "1/2");
    CHECK(r(2, 4) == r(1, 2));
    CHECK_THROWS_AS(Scalar::ratio(1, 0), Error);
}

TEST_CASE("parsing picks the mode from the literal") {
    CHECK(Scalar::parse("1/4").is_exact());
    CHECK(Scalar::parse("-3").is_exact());
    CHECK(Scalar::parse("-3").rational() == -3);
    CHECK_FALSE(Scalar::parse("0.25").is_exact());
    CHECK_FALSE(Scalar::parse("1e-3").is_exact());
    CHECK(Scalar::parse("0.25").to_double() == 0.25);
    CHECK_THROWS_AS(Scalar::parse("abc"), Error);
    CHECK_THROWS_AS(Scalar::parse("1/0"), Error);
    CHECK_THROWS_AS(Scalar::parse(""), Error);
}

TEST_CASE("mixing modes is rejected") {
    CHECK_THROWS_AS(r(1, 2) + Scalar(0.5), ModeMismatch);
    CHECK_THROWS_AS(r(1, 2) * Scalar(0.5), ModeMismatch);
    CHECK_THROWS_AS(Vec({r(1, 2), Scalar(0.5)}), ModeMismatch);
    CHECK_THROWS_AS(Scalar(0.5).rational(), ModeMismatch);
    CHECK(r(1, 2).converted(Mode::floating) == Scalar(0.5));
    CHECK(Scalar(0.1).converted(Mode::exact).rational() != oracle::q(1, 10));
}

TEST_CASE("floating scalars print round-trip") {
    const Scalar x(0.1);
    CHECK(Scalar::parse(x.to_string()) == x);
    CHECK_THROWS_AS(Scalar(std::nan("")), Error);
}

TEST_CASE("vector and matrix shape checks") {
    CHECK_THROWS_AS(Vec(std::vector<Scalar>{}), DimensionError);
    CHECK_THROWS_AS(Mat(2, 2, {r(1), r(2), r(3)}), DimensionError);
    CHECK_THROWS_AS(Mat(0, 0, {}), DimensionError);
    const Vec e2 = Vec::basis(3, 1, Mode::exact);
    CHECK(e2 == test_support::rv({{0, 1}, {1, 1}, {0, 1}}));
    CHECK_THROWS_AS(Mat::identity(2, Mode::exact) * Vec::ones(3, Mode::exact), DimensionError);
}

TEST_CASE("rank examples") {
    CHECK(rank(Mat::identity(3, Mode::exact)) == 3);
    CHECK(rank(Mat::filled(3, 3, r(1, 3))) == 1);
    // left-circulant of (1/3, 1/6, 1/3, 1/6): rows alternate between two vectors
    const Mat c = Mat::from_rows({{r(1, 3), r(1, 6), r(1, 3), r(1, 6)},
                                  {r(1, 6), r(1, 3), r(1, 6), r(1, 3)},
                                  {r(1, 3), r(1, 6), r(1, 3), r(1, 6)},
                                  {r(1, 6), r(1, 3), r(1, 6), r(1, 3)}});
    CHECK(rank(c) == 2);
    CHECK(rank(c.converted(Mode::floating)) == 2);
}

TEST_CASE("min_residual_solve examples") {
    SUBCASE("identity") {
        const auto sol = min_residual_solve(Mat::identity(2, Mode::exact), test_support::rv({{3, 1}, {5, 1}}));
        CHECK(sol.coeffs == test_support::rv({{3, 1}, {5, 1}}));
        CHECK(sol.residual_sq.is_zero());
    }
    SUBCASE("projection onto the ones direction") {
        const Vec v = Vec::basis(3, 0, Mode::exact) - Vec::basis(3, 1, Mode::exact);
        const auto sol = min_residual_solve(Mat::filled(3, 3, r(1, 3)), v);
        CHECK(sol.residual_sq == r(2));
        const auto fsol = min_residual_solve(Mat::filled(3, 3, Scalar(1.0 / 3)), v.converted(Mode::floating));
        CHECK(fsol.residual_norm == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    }
    SUBCASE("orthogonal complement") {
        const Mat m = Mat::from_rows({{r(1), r(0)}, {r(0), r(1)}, {r(0), r(0)}});
        const auto sol = min_residual_solve(m, Vec::basis(3, 2, Mode::exact));
        CHECK(sol.residual_sq == r(1));
        CHECK(sol.residual_norm == 1.0);
    }
    CHECK_THROWS_AS(min_residual_solve(Mat::identity(2, Mode::exact), Vec::ones(2, Mode::floating)), ModeMismatch);
    CHECK_THROWS_AS(min_residual_solve(Mat::identity(2, Mode::exact), Vec::ones(3, Mode::exact)), DimensionError);
}

TEST_CASE("exact rank agrees with plain Gaussian elimination") {
    Rng rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t rows = 1 + static_cast<std::size_t>(rng.uniform_int(0, 5));
        const std::size_t cols = 1 + static_cast<std::size_t>(rng.uniform_int(0, 5));
        const std::size_t k = 1 + static_cast<std::size_t>(rng.uniform_int(0, 3));
        const Mat m = trial % 2 ? random_rational(rng, rows, cols) : random_low_rank(rng, rows, cols, k);
        const std::size_t expected = oracle::gauss_rank(test_support::to_q(m));
        CHECK(rank(m) == expected);
        CHECK(rank(m) <= std::min(rows, cols));
        CHECK(rank(m.transpose()) == expected);
    }
}

TEST_CASE("rank is invariant under row permutation") {
    Rng rng(12);
    for (int trial = 0; trial < 100; ++trial) {
        const Mat m = random_low_rank(rng, 5, 5, 1 + static_cast<std::size_t>(rng.uniform_int(0, 4)));
        std::vector<std::size_t> order{0, 1, 2, 3, 4};
        for (std::size_t i = order.size(); i > 1; --i) {
            std::swap(order[i - 1], order[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i) - 1))]);
        }
        std::vector<std::vector<Scalar>> rows;
        for (auto i : order) {
            const Vec row = m.row(i);
            rows.emplace_back(row.entries().begin(), row.entries().end());
        }
        CHECK(rank(Mat::from_rows(rows)) == rank(m));
    }
}

TEST_CASE("exact and floating rank agree on small-denominator matrices") {
    Rng rng(13);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform_int(0, 5));
        const Mat m = trial % 3 ? random_low_rank(rng, n, n, 1 + static_cast<std::size_t>(rng.uniform_int(0, 5)))
                                : random_rational(rng, n, n);
        CHECK(rank(m.converted(Mode::floating)) == rank(m));
    }
}

TEST_CASE("zero residual iff the augmented rank does not grow") {
    Rng rng(14);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t rows = 2 + static_cast<std::size_t>(rng.uniform_int(0, 4));
        const std::size_t cols = 1 + static_cast<std::size_t>(rng.uniform_int(0, 4));
        const Mat m = random_low_rank(rng, rows, cols, 1 + static_cast<std::size_t>(rng.uniform_int(0, 2)));
        // half the targets are built inside the span
        const Vec v = trial % 2 ? m * Vec(std::vector<Scalar>(cols, r(rng.uniform_int(-3, 3), 2)))
                                : Vec(random_rational(rng, rows, 1).col(0));
        const auto q = test_support::to_q(m);
        std::vector<oracle::Q> qv;
        for (const auto& s : v.entries()) qv.push_back(s.rational());
        const bool in_span = oracle::in_span(q, qv);

        const auto sol = min_residual_solve(m, v);
        CHECK(sol.residual_sq.is_zero() == in_span);
        CHECK(residual_accepts(sol, v, {}) == in_span);
        CHECK((m * sol.coeffs - v).norm_sq() == sol.residual_sq);

        const ColumnSpace space(m);
        CHECK(space.dimension() == oracle::gauss_rank(q));
        CHECK(space.residual_sq(v) == sol.residual_sq);
        CHECK(space.contains(v) == in_span);

        const auto fsol = min_residual_solve(m.converted(Mode::floating), v.converted(Mode::floating));
        CHECK(fsol.residual_norm == doctest::Approx(std::sqrt(sol.residual_sq.to_double())).epsilon(1e-9));
        CHECK(residual_accepts(fsol, v.converted(Mode::floating), {}) == in_span);
        const ColumnSpace fspace(m.converted(Mode::floating));
        CHECK(fspace.contains(v.converted(Mode::floating)) == in_span);
    }
}

TEST_CASE("tolerances must be nonnegative") {
    ToleranceConfig tol;
    CHECK_NOTHROW(tol.validate());
    tol.gap_tol = -1;
    CHECK_THROWS_AS(tol.validate(), InvalidArgument);
}

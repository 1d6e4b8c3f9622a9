#include "convexity_gate/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "convexity_gate/random.hpp"

namespace convexity_gate {

namespace {

bool sum_is_one(const Scalar& s, const ToleranceConfig& tol) {
    if (s.is_exact()) {
        return s == Scalar::one(Mode::exact);
    }
    return std::abs(s.to_double() - 1.0) <= tol.stochastic_tol;
}

bool entry_nonnegative(const Scalar& s, const ToleranceConfig& tol) {
    if (s.is_exact()) {
        return s.sign() >= 0;
    }
    return s.to_double() >= -tol.stochastic_tol;
}

std::vector<std::size_t> random_permutation(std::size_t n, Rng& rng) {
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), std::size_t{0});
    for (std::size_t i = n; i > 1; --i) {
        auto j = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i) - 1));
        std::swap(p[i - 1], p[j]);
    }
    return p;
}

} // namespace

DoublyStochasticMatrix validate(const Mat& m, const ToleranceConfig& tol) {
    tol.validate();
    if (!m.is_square()) {
        throw StochasticError(StochasticViolation::not_square, 0, 0,
                              "matrix is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                                  ", not square");
    }
    const std::size_t n = m.rows();
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            if (!entry_nonnegative(m(r, c), tol)) {
                throw StochasticError(StochasticViolation::negative_entry, r + 1, c + 1,
                                      "negative entry at (" + std::to_string(r + 1) + "," +
                                          std::to_string(c + 1) + ")");
            }
        }
    }
    for (std::size_t r = 0; r < n; ++r) {
        if (!sum_is_one(m.row(r).sum(), tol)) {
            throw StochasticError(StochasticViolation::row_sum_off, r + 1, 0,
                                  "row " + std::to_string(r + 1) + " does not sum to 1");
        }
    }
    for (std::size_t c = 0; c < n; ++c) {
        if (!sum_is_one(m.col(c).sum(), tol)) {
            throw StochasticError(StochasticViolation::col_sum_off, 0, c + 1,
                                  "column " + std::to_string(c + 1) + " does not sum to 1");
        }
    }
    return DoublyStochasticMatrix(m);
}

DoublyStochasticMatrix DoublyStochasticMatrix::converted(Mode mode, const ToleranceConfig& tol) const {
    return validate(matrix_.converted(mode), tol);
}

DoublyStochasticMatrix uniform(std::size_t n, Mode mode) {
    if (n == 0) {
        throw InvalidArgument("n", "order must be at least 1");
    }
    Scalar entry = Scalar::one(mode) / Scalar::from_int(static_cast<long long>(n), mode);
    return validate(Mat::filled(n, n, entry));
}

Permutation::Permutation(std::vector<std::size_t> sigma) : sigma_(std::move(sigma)) {
    if (sigma_.empty()) {
        throw InvalidArgument("sigma", "permutation must be nonempty");
    }
    std::vector<bool> seen(sigma_.size(), false);
    for (std::size_t image : sigma_) {
        if (image < 1 || image > sigma_.size() || seen[image - 1]) {
            throw InvalidArgument("sigma", "not a bijection on {1..n}");
        }
        seen[image - 1] = true;
    }
}

Permutation Permutation::identity(std::size_t n) {
    std::vector<std::size_t> sigma(n);
    std::iota(sigma.begin(), sigma.end(), std::size_t{1});
    return Permutation(std::move(sigma));
}

DoublyStochasticMatrix permutation_matrix(const Permutation& sigma, Mode mode) {
    const std::size_t n = sigma.size();
    std::vector<Scalar> e(n * n, Scalar::zero(mode));
    for (std::size_t i = 1; i <= n; ++i) {
        e[(i - 1) * n + (sigma(i) - 1)] = Scalar::one(mode);
    }
    return validate(Mat(n, n, std::move(e)));
}

DoublyStochasticMatrix sample_birkhoff(std::size_t n, std::size_t k, std::uint64_t seed, Mode mode) {
    if (n == 0) {
        throw InvalidArgument("n", "order must be at least 1");
    }
    if (k == 0) {
        throw InvalidArgument("k", "need at least one permutation term");
    }
    Rng rng(seed);
    std::vector<std::vector<std::size_t>> perms;
    std::vector<Scalar> weights;
    for (std::size_t t = 0; t < k; ++t) {
        perms.push_back(random_permutation(n, rng));
        if (mode == Mode::exact) {
            weights.push_back(Scalar::from_int(rng.uniform_int(1, 1000), mode));
        } else {
            double w = 0.0;
            while (w == 0.0) {
                w = rng.uniform01();
            }
            weights.emplace_back(w);
        }
    }
    Scalar total = Scalar::zero(mode);
    for (const auto& w : weights) {
        total += w;
    }
    std::vector<Scalar> e(n * n, Scalar::zero(mode));
    for (std::size_t t = 0; t < k; ++t) {
        const Scalar w = weights[t] / total;
        for (std::size_t r = 0; r < n; ++r) {
            e[r * n + perms[t][r]] += w;
        }
    }
    return validate(Mat(n, n, std::move(e)));
}

} // namespace convexity_gate

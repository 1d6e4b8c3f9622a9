#include "convexity_gate/circulant.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace convexity_gate {

namespace {

bool same(const Scalar& a, const Scalar& b, const ToleranceConfig& tol) {
    if (a.is_exact()) {
        return a == b;
    }
    return std::abs(a.to_double() - b.to_double()) <= tol.stochastic_tol;
}

// cos and sin of t * 30 degrees, t in 0..11, as a + b*sqrt(3).
struct UnitPoint {
    QuadraticSqrt3 cos;
    QuadraticSqrt3 sin;
};

const std::array<UnitPoint, 12>& thirty_degree_points() {
    static const std::array<UnitPoint, 12> table = [] {
        const Rational half = Rational(1) / 2;
        const Rational zero = 0;
        const Rational one = 1;
        // {cos rational, cos sqrt3, sin rational, sin sqrt3}
        const std::array<std::array<Rational, 4>, 12> raw{{
            {one, zero, zero, zero},
            {zero, half, half, zero},
            {half, zero, zero, half},
            {zero, zero, one, zero},
            {-half, zero, zero, half},
            {zero, -half, half, zero},
            {-one, zero, zero, zero},
            {zero, -half, -half, zero},
            {-half, zero, zero, -half},
            {zero, zero, -one, zero},
            {half, zero, zero, -half},
            {zero, half, -half, zero},
        }};
        std::array<UnitPoint, 12> out;
        for (std::size_t t = 0; t < 12; ++t) {
            out[t] = UnitPoint{{raw[t][0], raw[t][1]}, {raw[t][2], raw[t][3]}};
        }
        return out;
    }();
    return table;
}

void require_order(const CirculantWeights& w, std::size_t n) {
    if (w.n() != n) {
        throw CirculantError(CirculantViolation::unsupported_order,
                             "defined only for n = " + std::to_string(n) + ", got n = " + std::to_string(w.n()));
    }
}

bool all_equal(const CirculantWeights& w, const ToleranceConfig& tol) {
    for (std::size_t j = 2; j <= w.n(); ++j) {
        if (!same(w(j), w(1), tol)) {
            return false;
        }
    }
    return true;
}

} // namespace

std::size_t truncated_sum(std::size_t i, std::size_t j, std::size_t n) {
    if (n == 0 || i < 1 || i > n) {
        throw InvalidArgument("i", "index i must lie in {1.." + std::to_string(n) + "}");
    }
    if (j >= n) {
        throw InvalidArgument("j", "shift j must lie in {0.." + std::to_string(n == 0 ? 0 : n - 1) + "}");
    }
    return i + j <= n ? i + j : i + j - n;
}

CirculantWeights::CirculantWeights(std::vector<Scalar> lambda, const ToleranceConfig& tol)
    : lambda_(std::move(lambda)) {
    if (lambda_.empty()) {
        throw CirculantError(CirculantViolation::invalid_weights, "at least one weight is required");
    }
    try {
        require_mode(lambda_, lambda_.front().mode(), "weights");
    } catch (const ModeMismatch&) {
        throw CirculantError(CirculantViolation::invalid_weights, "weights mix exact and floating values");
    }
    const Mode mode = lambda_.front().mode();
    Scalar total = Scalar::zero(mode);
    for (std::size_t j = 0; j < lambda_.size(); ++j) {
        const Scalar& l = lambda_[j];
        const bool in_range = mode == Mode::exact
                                  ? (l.sign() >= 0 && l <= Scalar::one(mode))
                                  : (l.to_double() >= -tol.stochastic_tol && l.to_double() <= 1.0 + tol.stochastic_tol);
        if (!in_range) {
            throw CirculantError(CirculantViolation::invalid_weights,
                                 "lambda" + std::to_string(j + 1) + " = " + l.to_string() + " is outside [0,1]");
        }
        total += l;
    }
    if (!same(total, Scalar::one(mode), tol)) {
        throw CirculantError(CirculantViolation::invalid_weights, "weights sum to " + total.to_string() + ", not 1");
    }
}

CirculantWeights leave_one_out_weights(std::size_t n, Mode mode) {
    if (n < 2) {
        throw InvalidArgument("n", "leave-one-out weights need n >= 2");
    }
    std::vector<Scalar> lambda(n, Scalar::one(mode) / Scalar::from_int(static_cast<long long>(n - 1), mode));
    lambda.back() = Scalar::zero(mode);
    return CirculantWeights(std::move(lambda));
}

DoublyStochasticMatrix build_matrix(const CirculantWeights& w, const ToleranceConfig& tol) {
    const std::size_t n = w.n();
    std::vector<Scalar> e;
    e.reserve(n * n);
    for (std::size_t i = 1; i <= n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            e.push_back(w(truncated_sum(i, j, n)));
        }
    }
    return validate(Mat(n, n, std::move(e)), tol);
}

double QuadraticSqrt3::to_double() const {
    return rational_part.convert_to<double>() + sqrt3_part.convert_to<double>() * std::numbers::sqrt3;
}

bool DftSpectrum::is_zero(std::size_t k, const ToleranceConfig& tol) const {
    if (exact) {
        return exact->at(k).is_zero();
    }
    return std::abs(values.at(k)) <= tol.residual_tol;
}

bool has_exact_spectrum(std::size_t n) {
    return n == 1 || n == 2 || n == 3 || n == 4 || n == 6;
}

DftSpectrum dft_spectrum(const CirculantWeights& w) {
    const std::size_t n = w.n();
    DftSpectrum spectrum;
    spectrum.n = n;
    spectrum.values.resize(n);

    if (w.mode() == Mode::exact && has_exact_spectrum(n)) {
        const auto& points = thirty_degree_points();
        std::vector<ExactComplex> exact(n);
        for (std::size_t k = 0; k < n; ++k) {
            ExactComplex value;
            for (std::size_t j = 1; j <= n; ++j) {
                const std::size_t t = (12 / n) * ((k * (j - 1)) % n);
                const Rational& l = w(j).rational();
                value.re.rational_part += l * points[t].cos.rational_part;
                value.re.sqrt3_part += l * points[t].cos.sqrt3_part;
                value.im.rational_part += l * points[t].sin.rational_part;
                value.im.sqrt3_part += l * points[t].sin.sqrt3_part;
            }
            spectrum.values[k] = value.to_complex();
            exact[k] = std::move(value);
        }
        spectrum.exact = std::move(exact);
        return spectrum;
    }

    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> value = 0.0;
        for (std::size_t j = 1; j <= n; ++j) {
            const double angle = 2.0 * std::numbers::pi * static_cast<double>((k * (j - 1)) % n) / static_cast<double>(n);
            value += w(j).to_double() * std::polar(1.0, angle);
        }
        spectrum.values[k] = value;
    }
    return spectrum;
}

bool is_invertible(const CirculantWeights& w, const ToleranceConfig& tol) {
    const DftSpectrum spectrum = dft_spectrum(w);
    for (std::size_t k = 1; k < w.n(); ++k) {
        if (spectrum.is_zero(k, tol)) {
            return false;
        }
    }
    return true;
}

ClosedFormVerdict closed_form_verdict(const CirculantWeights& w, const ToleranceConfig& tol) {
    ClosedFormVerdict verdict;
    switch (w.n()) {
    case 2:
        if (same(w(1), w(2), tol)) {
            verdict.failing_clauses.push_back("lambda1 == lambda2");
        }
        break;
    case 3:
        if (same(w(1), w(2), tol) && same(w(2), w(3), tol)) {
            verdict.failing_clauses.push_back("lambda1 == lambda2 == lambda3");
        }
        break;
    case 4:
        if (same(w(1), w(3), tol) && same(w(2), w(4), tol)) {
            verdict.failing_clauses.push_back("(lambda1-lambda3)^2+(lambda2-lambda4)^2 == 0");
        }
        if (same(w(1) + w(3), w(2) + w(4), tol)) {
            verdict.failing_clauses.push_back("lambda1+lambda3 == lambda2+lambda4");
        }
        break;
    default:
        throw CirculantError(CirculantViolation::unsupported_order,
                             "closed form is available for n in {2,3,4}, got n = " + std::to_string(w.n()));
    }
    verdict.holds = verdict.failing_clauses.empty();
    return verdict;
}

bool closed_form_check(const CirculantWeights& w, const ToleranceConfig& tol) {
    return closed_form_verdict(w, tol).holds;
}

std::optional<AlternatingSums> even_n_degeneracy(const CirculantWeights& w, const ToleranceConfig& tol) {
    if (w.n() % 2 != 0) {
        throw CirculantError(CirculantViolation::odd_order, "n = " + std::to_string(w.n()) + " is odd");
    }
    AlternatingSums sums{Scalar::zero(w.mode()), Scalar::zero(w.mode())};
    for (std::size_t j = 1; j <= w.n(); ++j) {
        (j % 2 == 1 ? sums.odd_sum : sums.even_sum) += w(j);
    }
    // The k = n/2 value is the alternating sum, since omega_n^(n/2) = -1.
    const Scalar middle = sums.odd_sum - sums.even_sum;
    const bool vanishes = middle.is_exact() ? middle.is_zero() : std::abs(middle.to_double()) <= tol.residual_tol;
    if (!vanishes) {
        return std::nullopt;
    }
    return sums;
}

Mat case2_system_matrix(const Scalar& l1, const Scalar& l2, const Scalar& l3) {
    const Scalar l4 = l1 + l3 - l2;
    return Mat(3, 3, {l1, l2, l3, l2, l3, l4, l3, l4, l1});
}

Scalar det3_case2(const Scalar& l1, const Scalar& l2, const Scalar& l3) {
    const Scalar d12 = l1 - l2;
    const Scalar d23 = l2 - l3;
    return -(l1 + l3) * (d12 * d12 + d23 * d23);
}

std::optional<SubsetPair> n4_degenerate_witness(const CirculantWeights& w, const ToleranceConfig& tol) {
    require_order(w, 4);
    if (all_equal(w, tol)) {
        throw CirculantError(CirculantViolation::all_equal_weights, "all weights equal 1/4");
    }
    if (closed_form_check(w, tol)) {
        throw CirculantError(CirculantViolation::not_degenerate,
                             "the circulant matrix is invertible; every pair is a witness");
    }
    std::optional<SubsetPair> pair;
    if (same(w(1), w(3), tol) && same(w(2), w(4), tol)) {
        pair.emplace(4, std::vector<std::size_t>{1, 3}, std::vector<std::size_t>{2, 4});
    } else {
        const Scalar det = det3_case2(w(1), w(2), w(3));
        const bool singular = det.is_exact() ? det.is_zero() : std::abs(det.to_double()) <= tol.residual_tol;
        if (singular) {
            return std::nullopt;
        }
        pair.emplace(4, std::vector<std::size_t>{1, 2}, std::vector<std::size_t>{3, 4});
    }
    if (!check_pair(build_matrix(w, tol), *pair, tol)) {
        return std::nullopt;
    }
    return pair;
}

} // namespace convexity_gate

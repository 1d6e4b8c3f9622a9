#include "convexity_gate/functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace convexity_gate {

namespace {

constexpr std::size_t max_polynomial_degree = 8;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// A parameter in the mode of the evaluation point.
Scalar in_mode(const Scalar& param, Mode mode) {
    if (param.mode() == mode) {
        return param;
    }
    if (mode == Mode::floating) {
        return param.converted(Mode::floating);
    }
    throw ModeMismatch("floating function parameter " + param.to_string() + " used at an exact point");
}

bool is_integral(const Scalar& s) {
    if (s.is_exact()) {
        return denominator(s.rational()) == 1;
    }
    const double d = s.to_double();
    return std::floor(d) == d;
}

Scalar finite_or_throw(double value, std::string_view what) {
    if (!std::isfinite(value)) {
        throw OutOfDomain(std::string(what) + " is not finite at this point");
    }
    return Scalar(value);
}

Scalar integer_power(Scalar base, unsigned long long exponent) {
    Scalar result = Scalar::one(base.mode());
    while (exponent > 0) {
        if (exponent & 1U) {
            result *= base;
        }
        exponent >>= 1U;
        if (exponent > 0) {
            base *= base;
        }
    }
    return result;
}

ConvexityClass flip(ConvexityClass c) {
    switch (c) {
    case ConvexityClass::convex:
        return ConvexityClass::concave;
    case ConvexityClass::concave:
        return ConvexityClass::convex;
    default:
        return c;
    }
}

Scalar eval_at(const FunctionSpec& f, const Scalar& x) {
    const Mode mode = x.mode();
    return std::visit(
        overloaded{
            [&](const fn::Power& p) -> Scalar {
                if (mode == Mode::exact) {
                    if (!p.p.is_exact() || !is_integral(p.p)) {
                        throw ModeMismatch("power with exponent " + p.p.to_string() +
                                           " has no exact evaluation");
                    }
                    return integer_power(x, numerator(p.p.rational()).convert_to<unsigned long long>());
                }
                const double e = p.p.to_double();
                const double xv = x.to_double();
                if (!is_integral(p.p) && xv < 0.0) {
                    throw OutOfDomain("non-integer power of a negative number");
                }
                return finite_or_throw(std::pow(xv, e), "power");
            },
            [&](const fn::Exp&) -> Scalar {
                if (mode == Mode::exact) {
                    throw ModeMismatch("exp has no exact evaluation");
                }
                return finite_or_throw(std::exp(x.to_double()), "exp");
            },
            [&](const fn::Abs&) -> Scalar { return x.abs(); },
            [&](const fn::NegSquare&) -> Scalar { return -(x * x); },
            [&](const fn::Affine& a) -> Scalar { return in_mode(a.a, mode) * x + in_mode(a.b, mode); },
            [&](const fn::PiecewiseLinear& pl) -> Scalar {
                const std::size_t m = pl.xs.size();
                std::size_t k = 0;
                while (k + 2 < m && x >= in_mode(pl.xs[k + 1], mode)) {
                    ++k;
                }
                const Scalar x0 = in_mode(pl.xs[k], mode);
                const Scalar x1 = in_mode(pl.xs[k + 1], mode);
                const Scalar y0 = in_mode(pl.ys[k], mode);
                const Scalar y1 = in_mode(pl.ys[k + 1], mode);
                return y0 + (y1 - y0) * ((x - x0) / (x1 - x0));
            },
            [&](const fn::Polynomial& poly) -> Scalar {
                Scalar acc = Scalar::zero(mode);
                for (auto it = poly.coeffs.rbegin(); it != poly.coeffs.rend(); ++it) {
                    acc = acc * x + in_mode(*it, mode);
                }
                return acc;
            },
            [&](const fn::Scaled& s) -> Scalar { return in_mode(s.factor, mode) * eval_at(*s.inner, x); },
            [&](const fn::Sum& s) -> Scalar {
                Scalar acc = Scalar::zero(mode);
                for (const auto& term : s.terms) {
                    acc += eval_at(term, x);
                }
                return acc;
            },
        },
        f.node());
}

} // namespace

// ---------------------------------------------------------------------------
// Interval

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi) {
    if (std::isnan(lo) || std::isnan(hi) || !(lo < hi)) {
        throw InvalidArgument("interval", "interval needs lo < hi");
    }
    if (lo == std::numeric_limits<double>::infinity() || hi == -std::numeric_limits<double>::infinity()) {
        throw InvalidArgument("interval", "interval is empty");
    }
}

Interval Interval::real_line() {
    return Interval(-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity());
}

bool Interval::is_bounded() const noexcept { return std::isfinite(lo_) && std::isfinite(hi_); }

bool Interval::contains(const Scalar& x) const {
    if (!x.is_exact()) {
        return contains(x.to_double());
    }
    const Rational& q = x.rational();
    const bool above = !std::isfinite(lo_) || Rational(lo_) < q;
    const bool below = !std::isfinite(hi_) || q < Rational(hi_);
    return above && below;
}

SamplingBox sampling_box(const Interval& interval, double radius) {
    const double lo = interval.lo();
    const double hi = interval.hi();
    if (interval.is_bounded()) {
        const double margin = 1e-9 * (hi - lo);
        return {lo + margin, hi - margin};
    }
    const double margin = 1e-9 * radius;
    if (std::isfinite(lo)) {
        return {lo + margin, lo + radius};
    }
    if (std::isfinite(hi)) {
        return {hi - radius, hi - margin};
    }
    return {-radius / 2.0, radius / 2.0};
}

std::string_view to_string(ConvexityClass c) {
    switch (c) {
    case ConvexityClass::convex:
        return "convex";
    case ConvexityClass::concave:
        return "concave";
    case ConvexityClass::neither:
        return "neither";
    case ConvexityClass::unknown:
        break;
    }
    return "unknown";
}

ConvexityClass convexity_from_string(std::string_view text) {
    if (text == "convex") return ConvexityClass::convex;
    if (text == "concave") return ConvexityClass::concave;
    if (text == "neither") return ConvexityClass::neither;
    if (text == "unknown") return ConvexityClass::unknown;
    throw InvalidArgument("convexity", "unknown convexity label '" + std::string(text) + "'");
}

// ---------------------------------------------------------------------------
// FunctionSpec

FunctionSpec FunctionSpec::power(Scalar p) {
    if (p < Scalar::one(p.mode())) {
        throw InvalidArgument("p", "power exponent must be at least 1");
    }
    ConvexityClass label = ConvexityClass::convex;
    if (is_integral(p) && p != Scalar::one(p.mode())) {
        const double e = p.to_double();
        label = std::fmod(e, 2.0) == 0.0 ? ConvexityClass::convex : ConvexityClass::neither;
    }
    return FunctionSpec(fn::Power{std::move(p)}, label);
}

FunctionSpec FunctionSpec::exp() { return FunctionSpec(fn::Exp{}, ConvexityClass::convex); }
FunctionSpec FunctionSpec::abs() { return FunctionSpec(fn::Abs{}, ConvexityClass::convex); }
FunctionSpec FunctionSpec::neg_square() { return FunctionSpec(fn::NegSquare{}, ConvexityClass::concave); }

FunctionSpec FunctionSpec::affine(Scalar a, Scalar b) {
    return FunctionSpec(fn::Affine{std::move(a), std::move(b)}, ConvexityClass::convex);
}

FunctionSpec FunctionSpec::piecewise_linear(std::vector<std::pair<Scalar, Scalar>> points, ConvexityClass label) {
    if (points.size() < 2) {
        throw InvalidArgument("points", "piecewise-linear function needs at least two breakpoints");
    }
    fn::PiecewiseLinear pl;
    for (auto& [x, y] : points) {
        pl.xs.push_back(std::move(x));
        pl.ys.push_back(std::move(y));
    }
    try {
        require_mode(pl.xs, pl.xs.front().mode(), "breakpoints");
    } catch (const ModeMismatch&) {
        throw InvalidArgument("points", "breakpoints mix exact and floating values");
    }
    for (std::size_t i = 1; i < pl.xs.size(); ++i) {
        if (!(pl.xs[i - 1] < pl.xs[i])) {
            throw InvalidArgument("points", "breakpoints must be strictly increasing");
        }
    }
    return FunctionSpec(std::move(pl), label);
}

FunctionSpec FunctionSpec::polynomial(std::vector<Scalar> coeffs, ConvexityClass label) {
    if (coeffs.empty() || coeffs.size() > max_polynomial_degree + 1) {
        throw InvalidArgument("coeffs", "polynomial needs 1 to 9 coefficients (degree <= 8)");
    }
    return FunctionSpec(fn::Polynomial{std::move(coeffs)}, label);
}

FunctionSpec FunctionSpec::scaled(FunctionSpec inner, Scalar factor) {
    const ConvexityClass label = factor.sign() >= 0 ? inner.convexity() : flip(inner.convexity());
    return FunctionSpec(fn::Scaled{std::make_shared<const FunctionSpec>(std::move(inner)), std::move(factor)}, label);
}

FunctionSpec FunctionSpec::sum(std::vector<FunctionSpec> terms) {
    if (terms.empty()) {
        throw InvalidArgument("terms", "sum needs at least one term");
    }
    ConvexityClass label = terms.front().convexity();
    for (const auto& t : terms) {
        if (t.convexity() != label) {
            label = ConvexityClass::unknown;
        }
    }
    if (label == ConvexityClass::neither) {
        label = ConvexityClass::unknown;
    }
    return FunctionSpec(fn::Sum{std::move(terms)}, label);
}

std::string_view FunctionSpec::kind() const noexcept {
    return std::visit(overloaded{
                          [](const fn::Power&) { return std::string_view("power"); },
                          [](const fn::Exp&) { return std::string_view("exp"); },
                          [](const fn::Abs&) { return std::string_view("abs"); },
                          [](const fn::NegSquare&) { return std::string_view("negsquare"); },
                          [](const fn::Affine&) { return std::string_view("affine"); },
                          [](const fn::PiecewiseLinear&) { return std::string_view("piecewise_linear"); },
                          [](const fn::Polynomial&) { return std::string_view("polynomial"); },
                          [](const fn::Scaled&) { return std::string_view("scaled"); },
                          [](const fn::Sum&) { return std::string_view("sum"); },
                      },
                      node_);
}

FunctionSpec FunctionSpec::with_convexity(ConvexityClass label) const {
    FunctionSpec copy = *this;
    copy.convexity_ = label;
    return copy;
}

void FunctionSpec::check_within(const Interval& interval) const {
    if (const auto* pl = std::get_if<fn::PiecewiseLinear>(&node_)) {
        for (const auto& x : pl->xs) {
            if (!interval.contains(x)) {
                throw InvalidArgument("points", "breakpoint " + x.to_string() + " lies outside the interval");
            }
        }
    } else if (const auto* s = std::get_if<fn::Scaled>(&node_)) {
        s->inner->check_within(interval);
    } else if (const auto* sum = std::get_if<fn::Sum>(&node_)) {
        for (const auto& t : sum->terms) {
            t.check_within(interval);
        }
    }
}

Scalar evaluate(const FunctionSpec& f, const Scalar& x, const Interval& interval) {
    if (!interval.contains(x)) {
        throw OutOfDomain("x = " + x.to_string() + " lies outside the interval");
    }
    return eval_at(f, x);
}

double evaluate(const FunctionSpec& f, double x, const Interval& interval) {
    return evaluate(f, Scalar(x), interval).to_double();
}

Scalar t_convexity_gap(const FunctionSpec& f, const Scalar& u, const Scalar& v, const Scalar& t,
                       const Interval& interval) {
    const Mode mode = u.mode();
    if (v.mode() != mode || t.mode() != mode) {
        throw ModeMismatch("u, v and t must share one mode");
    }
    const Scalar one = Scalar::one(mode);
    if (t.sign() < 0 || t > one) {
        throw InvalidArgument("t", "t must lie in [0,1]");
    }
    const Scalar fu = evaluate(f, u, interval);
    const Scalar fv = evaluate(f, v, interval);
    Scalar point = t * u + (one - t) * v;
    if (mode == Mode::floating) {
        point = std::clamp(point, std::min(u, v), std::max(u, v));
    }
    return t * fu + (one - t) * fv - evaluate(f, point, interval);
}

} // namespace convexity_gate

#pragma once

#include <memory>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "convexity_gate/numerics.hpp"

namespace convexity_gate {

/// Open interval (lo, hi); either end may be infinite.
class Interval {
public:
    Interval(double lo, double hi);
    static Interval real_line();

    double lo() const noexcept { return lo_; }
    double hi() const noexcept { return hi_; }
    bool is_bounded() const noexcept;

    bool contains(double x) const noexcept { return lo_ < x && x < hi_; }
    /// Exact values are compared exactly against the (dyadic) bounds.
    bool contains(const Scalar& x) const;

    friend bool operator==(const Interval&, const Interval&) = default;

private:
    double lo_;
    double hi_;
};

/// Finite box inside an interval, used for sampling.
struct SamplingBox {
    double lo;
    double hi;
};

/// Finite ends move inward by 1e-9 * (hi - lo). Infinite ends are replaced
/// by a window of width `radius` (around the origin when both are infinite).
SamplingBox sampling_box(const Interval& interval, double radius = 10.0);

/// Declared label; only test harnesses read it.
enum class ConvexityClass { convex, concave, neither, unknown };

std::string_view to_string(ConvexityClass c);
ConvexityClass convexity_from_string(std::string_view text);

class FunctionSpec;

namespace fn {

/// x^p with p >= 1; non-integer p requires x >= 0.
struct Power {
    Scalar p;
};
struct Exp {};
struct Abs {};
/// -x^2
struct NegSquare {};
/// a*x + b
struct Affine {
    Scalar a;
    Scalar b;
};
/// Linear interpolation through (xs[i], ys[i]); the end segments extend
/// linearly beyond the first and last breakpoints.
struct PiecewiseLinear {
    std::vector<Scalar> xs;
    std::vector<Scalar> ys;
};
/// sum_k coeffs[k] * x^k, degree at most 8.
struct Polynomial {
    std::vector<Scalar> coeffs;
};
struct Scaled {
    std::shared_ptr<const FunctionSpec> inner;
    Scalar factor;
};
struct Sum {
    std::vector<FunctionSpec> terms;
};

} // namespace fn

/// Finitely representable test function. Parameters may be exact or
/// floating; exact parameters are used as-is at floating points, but a
/// floating parameter cannot be used at an exact point.
class FunctionSpec {
public:
    using Node = std::variant<fn::Power, fn::Exp, fn::Abs, fn::NegSquare, fn::Affine, fn::PiecewiseLinear,
                              fn::Polynomial, fn::Scaled, fn::Sum>;

    static FunctionSpec power(Scalar p);
    static FunctionSpec exp();
    static FunctionSpec abs();
    static FunctionSpec neg_square();
    static FunctionSpec affine(Scalar a, Scalar b);
    static FunctionSpec piecewise_linear(std::vector<std::pair<Scalar, Scalar>> points,
                                         ConvexityClass label = ConvexityClass::unknown);
    static FunctionSpec polynomial(std::vector<Scalar> coeffs, ConvexityClass label = ConvexityClass::unknown);
    static FunctionSpec scaled(FunctionSpec inner, Scalar factor);
    static FunctionSpec sum(std::vector<FunctionSpec> terms);

    const Node& node() const noexcept { return node_; }
    ConvexityClass convexity() const noexcept { return convexity_; }
    std::string_view kind() const noexcept;

    FunctionSpec with_convexity(ConvexityClass label) const;

    /// Throws InvalidArgument when a piecewise-linear breakpoint lies outside
    /// the interval.
    void check_within(const Interval& interval) const;

private:
    FunctionSpec(Node node, ConvexityClass label) : node_(std::move(node)), convexity_(label) {}

    Node node_;
    ConvexityClass convexity_;
};

/// f(x); throws OutOfDomain when x is not in the open interval.
Scalar evaluate(const FunctionSpec& f, const Scalar& x, const Interval& interval);
double evaluate(const FunctionSpec& f, double x, const Interval& interval);

/// t f(u) + (1 - t) f(v) - f(t u + (1 - t) v); nonnegative for convex f.
Scalar t_convexity_gap(const FunctionSpec& f, const Scalar& u, const Scalar& v, const Scalar& t,
                       const Interval& interval);

} // namespace convexity_gate

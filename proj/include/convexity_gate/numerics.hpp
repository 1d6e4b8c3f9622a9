#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "convexity_gate/error.hpp"

namespace convexity_gate {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

enum class Mode { exact, floating };

std::string_view to_string(Mode mode);

/// A real number held either as an exact rational or as a binary64 value.
/// Arithmetic between the two modes throws ModeMismatch; use converted() to
/// switch modes explicitly.
class Scalar {
public:
    Scalar() : value_(Rational(0)) {}
    explicit Scalar(Rational value) : value_(std::move(value)) {}
    explicit Scalar(double value);

    static Scalar zero(Mode mode);
    static Scalar one(Mode mode);
    static Scalar from_int(long long value, Mode mode);
    /// Exact num/den; den must be nonzero.
    static Scalar ratio(long long num, long long den);
    /// "p/q" or an integer literal gives an exact value, a decimal literal
    /// ("0.25", "1e-3") a floating one.
    static Scalar parse(std::string_view text);

    Mode mode() const noexcept { return std::holds_alternative<Rational>(value_) ? Mode::exact : Mode::floating; }
    bool is_exact() const noexcept { return mode() == Mode::exact; }

    /// Throws ModeMismatch for floating values.
    const Rational& rational() const;
    double to_double() const;

    Scalar converted(Mode mode) const;

    bool is_zero() const;
    int sign() const;
    Scalar abs() const;

    /// Exact values print as "p/q" (or "p" when integral); floats use the
    /// shortest round-trip decimal form.
    std::string to_string() const;

    Scalar operator-() const;
    Scalar& operator+=(const Scalar& rhs);
    Scalar& operator-=(const Scalar& rhs);
    Scalar& operator*=(const Scalar& rhs);
    Scalar& operator/=(const Scalar& rhs);

    friend Scalar operator+(Scalar lhs, const Scalar& rhs) { return lhs += rhs; }
    friend Scalar operator-(Scalar lhs, const Scalar& rhs) { return lhs -= rhs; }
    friend Scalar operator*(Scalar lhs, const Scalar& rhs) { return lhs *= rhs; }
    friend Scalar operator/(Scalar lhs, const Scalar& rhs) { return lhs /= rhs; }

    friend bool operator==(const Scalar& lhs, const Scalar& rhs);
    friend std::partial_ordering operator<=>(const Scalar& lhs, const Scalar& rhs);

private:
    std::variant<Rational, double> value_;
};

/// Throws ModeMismatch unless every scalar has mode `expected`.
void require_mode(std::span<const Scalar> values, Mode expected, std::string_view what);

class Vec {
public:
    /// Throws DimensionError when empty and ModeMismatch when modes differ.
    explicit Vec(std::vector<Scalar> entries);
    Vec(std::initializer_list<Scalar> entries) : Vec(std::vector<Scalar>(entries)) {}

    static Vec zeros(std::size_t n, Mode mode);
    static Vec ones(std::size_t n, Mode mode);
    /// Natural basis vector with a one at the 0-based `index`.
    static Vec basis(std::size_t n, std::size_t index, Mode mode);
    static Vec from_doubles(std::span<const double> values);

    std::size_t size() const noexcept { return entries_.size(); }
    Mode mode() const noexcept { return entries_.front().mode(); }
    const Scalar& operator[](std::size_t i) const { return entries_[i]; }
    std::span<const Scalar> entries() const noexcept { return entries_; }

    Scalar sum() const;
    Scalar dot(const Vec& other) const;
    Scalar norm_sq() const { return dot(*this); }
    double norm() const;
    Scalar max_abs() const;
    Scalar min() const;
    Scalar max() const;

    Vec converted(Mode mode) const;
    std::vector<double> to_doubles() const;

    friend Vec operator+(const Vec& lhs, const Vec& rhs);
    friend Vec operator-(const Vec& lhs, const Vec& rhs);
    friend Vec operator*(const Scalar& factor, const Vec& v);
    friend bool operator==(const Vec& lhs, const Vec& rhs);

private:
    std::vector<Scalar> entries_;
};

/// Dense row-major matrix with at least one row and one column.
class Mat {
public:
    Mat(std::size_t rows, std::size_t cols, std::vector<Scalar> row_major);

    static Mat from_rows(const std::vector<std::vector<Scalar>>& rows);
    static Mat from_columns(std::span<const Vec> columns);
    static Mat identity(std::size_t n, Mode mode);
    static Mat filled(std::size_t rows, std::size_t cols, const Scalar& value);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool is_square() const noexcept { return rows_ == cols_; }
    Mode mode() const noexcept { return entries_.front().mode(); }

    const Scalar& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }
    std::span<const Scalar> entries() const noexcept { return entries_; }
    Vec row(std::size_t r) const;
    Vec col(std::size_t c) const;

    Mat transpose() const;
    Mat with_column(const Vec& extra) const;
    Mat converted(Mode mode) const;

    friend Vec operator*(const Mat& m, const Vec& v);
    friend Mat operator*(const Mat& lhs, const Mat& rhs);
    friend bool operator==(const Mat& lhs, const Mat& rhs);

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<Scalar> entries_;
};

/// Thresholds for floating mode. Exact computations ignore all of them.
struct ToleranceConfig {
    double rank_tol = 1e-10;
    double residual_tol = 1e-9;
    double gap_tol = 1e-12;
    double stochastic_tol = 1e-12;

    /// Throws InvalidArgument naming the first negative field.
    void validate() const;
};

/// Exact mode: fraction-free elimination over integers. Floating mode: partial
/// pivoting, counting pivots whose magnitude exceeds tol.rank_tol.
std::size_t rank(const Mat& m, const ToleranceConfig& tol = {});

struct LeastSquares {
    Vec coeffs;
    /// ||M coeffs - v||^2; exact in exact mode.
    Scalar residual_sq;
    double residual_norm;
};

/// Minimizer of ||M c - v||_2 (free variables set to zero). Exact mode solves
/// the normal equations over the rationals; floating mode uses Householder QR
/// with column pivoting.
LeastSquares min_residual_solve(const Mat& m, const Vec& v, const ToleranceConfig& tol = {});

/// Span acceptance: exact residual zero, or residual_norm <= residual_tol * (1 + ||v||).
bool residual_accepts(const LeastSquares& solution, const Vec& v, const ToleranceConfig& tol);

/// Precomputed orthogonal basis of a matrix's column space, for repeated
/// membership queries against the same matrix.
class ColumnSpace {
public:
    ColumnSpace(const Mat& m, const ToleranceConfig& tol = {});

    std::size_t dimension() const noexcept { return basis_.size(); }
    /// Squared distance from v to the column space (exact in exact mode).
    Scalar residual_sq(const Vec& v) const;
    bool contains(const Vec& v) const;

private:
    Mode mode_;
    ToleranceConfig tol_;
    std::vector<Vec> basis_;
    std::vector<Scalar> basis_norm_sq_;
};

} // namespace convexity_gate

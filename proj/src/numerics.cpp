#include "convexity_gate/numerics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <optional>
#include <sstream>

namespace convexity_gate {

std::string_view to_string(Mode mode) {
    return mode == Mode::exact ? "exact" : "float";
}

namespace {

void check_same_mode(const Scalar& a, const Scalar& b) {
    if (a.mode() != b.mode()) {
        throw ModeMismatch("cannot combine exact and floating values");
    }
}

BigInt parse_integer(std::string_view text) {
    if (text.empty()) {
        throw InvalidArgument("value", "empty integer literal");
    }
    std::size_t start = (text[0] == '-' || text[0] == '+') ? 1 : 0;
    if (start == text.size()) {
        throw InvalidArgument("value", "malformed integer '" + std::string(text) + "'");
    }
    for (std::size_t i = start; i < text.size(); ++i) {
        if (text[i] < '0' || text[i] > '9') {
            throw InvalidArgument("value", "malformed integer '" + std::string(text) + "'");
        }
    }
    std::string digits(text[0] == '+' ? text.substr(1) : text);
    return BigInt(digits);
}

std::string trim(std::string_view text) {
    auto first = text.find_first_not_of(" \t\n\r");
    if (first == std::string_view::npos) {
        return {};
    }
    auto last = text.find_last_not_of(" \t\n\r");
    return std::string(text.substr(first, last - first + 1));
}

} // namespace

Scalar::Scalar(double value) : value_(value) {
    if (!std::isfinite(value)) {
        throw InvalidArgument("value", "non-finite floating value");
    }
}

Scalar Scalar::zero(Mode mode) { return from_int(0, mode); }
Scalar Scalar::one(Mode mode) { return from_int(1, mode); }

Scalar Scalar::from_int(long long value, Mode mode) {
    if (mode == Mode::exact) {
        return Scalar(Rational(value));
    }
    return Scalar(static_cast<double>(value));
}

Scalar Scalar::ratio(long long num, long long den) {
    if (den == 0) {
        throw InvalidArgument("value", "zero denominator");
    }
    Rational r(num);
    r /= Rational(den);
    return Scalar(std::move(r));
}

Scalar Scalar::parse(std::string_view raw) {
    const std::string text = trim(raw);
    if (text.empty()) {
        throw InvalidArgument("value", "empty number");
    }
    if (auto slash = text.find('/'); slash != std::string::npos) {
        BigInt num = parse_integer(std::string_view(text).substr(0, slash));
        BigInt den = parse_integer(std::string_view(text).substr(slash + 1));
        if (den == 0) {
            throw InvalidArgument("value", "zero denominator in '" + text + "'");
        }
        Rational r(num);
        r /= Rational(den);
        return Scalar(std::move(r));
    }
    if (text.find_first_of(".eEnN") == std::string::npos) {
        return Scalar(Rational(parse_integer(text)));
    }
    double value = 0.0;
    const char* begin = text.data() + (text[0] == '+' ? 1 : 0);
    auto [ptr, ec] = std::from_chars(begin, text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw InvalidArgument("value", "malformed number '" + text + "'");
    }
    return Scalar(value);
}

const Rational& Scalar::rational() const {
    if (const auto* r = std::get_if<Rational>(&value_)) {
        return *r;
    }
    throw ModeMismatch("exact value requested from a floating scalar");
}

double Scalar::to_double() const {
    if (const auto* r = std::get_if<Rational>(&value_)) {
        return r->convert_to<double>();
    }
    return std::get<double>(value_);
}

Scalar Scalar::converted(Mode mode) const {
    if (mode == this->mode()) {
        return *this;
    }
    if (mode == Mode::floating) {
        return Scalar(to_double());
    }
    return Scalar(Rational(std::get<double>(value_)));
}

bool Scalar::is_zero() const { return sign() == 0; }

int Scalar::sign() const {
    if (const auto* r = std::get_if<Rational>(&value_)) {
        return r->sign();
    }
    double d = std::get<double>(value_);
    return (d > 0.0) - (d < 0.0);
}

Scalar Scalar::abs() const { return sign() < 0 ? -*this : *this; }

std::string Scalar::to_string() const {
    if (const auto* r = std::get_if<Rational>(&value_)) {
        std::ostringstream os;
        os << numerator(*r);
        if (denominator(*r) != 1) {
            os << '/' << denominator(*r);
        }
        return os.str();
    }
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, std::get<double>(value_));
    return std::string(buf, ptr);
}

Scalar Scalar::operator-() const {
    if (const auto* r = std::get_if<Rational>(&value_)) {
        return Scalar(Rational(-*r));
    }
    return Scalar(-std::get<double>(value_));
}

Scalar& Scalar::operator+=(const Scalar& rhs) {
    check_same_mode(*this, rhs);
    std::visit([&](auto& v) { v += std::get<std::decay_t<decltype(v)>>(rhs.value_); }, value_);
    return *this;
}

Scalar& Scalar::operator-=(const Scalar& rhs) {
    check_same_mode(*this, rhs);
    std::visit([&](auto& v) { v -= std::get<std::decay_t<decltype(v)>>(rhs.value_); }, value_);
    return *this;
}

Scalar& Scalar::operator*=(const Scalar& rhs) {
    check_same_mode(*this, rhs);
    std::visit([&](auto& v) { v *= std::get<std::decay_t<decltype(v)>>(rhs.value_); }, value_);
    return *this;
}

Scalar& Scalar::operator/=(const Scalar& rhs) {
    check_same_mode(*this, rhs);
    if (rhs.is_zero()) {
        throw InvalidArgument("value", "division by zero");
    }
    std::visit([&](auto& v) { v /= std::get<std::decay_t<decltype(v)>>(rhs.value_); }, value_);
    return *this;
}

bool operator==(const Scalar& lhs, const Scalar& rhs) {
    check_same_mode(lhs, rhs);
    return lhs.value_ == rhs.value_;
}

std::partial_ordering operator<=>(const Scalar& lhs, const Scalar& rhs) {
    check_same_mode(lhs, rhs);
    if (lhs.is_exact()) {
        const auto& a = std::get<Rational>(lhs.value_);
        const auto& b = std::get<Rational>(rhs.value_);
        if (a < b) return std::partial_ordering::less;
        if (b < a) return std::partial_ordering::greater;
        return std::partial_ordering::equivalent;
    }
    return std::get<double>(lhs.value_) <=> std::get<double>(rhs.value_);
}

void require_mode(std::span<const Scalar> values, Mode expected, std::string_view what) {
    for (const auto& v : values) {
        if (v.mode() != expected) {
            throw ModeMismatch(std::string(what) + ": expected " + std::string(to_string(expected)) +
                               " values");
        }
    }
}

// ---------------------------------------------------------------------------
// Vec

Vec::Vec(std::vector<Scalar> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) {
        throw DimensionError("vector must have at least one entry");
    }
    require_mode(entries_, entries_.front().mode(), "vector");
}

Vec Vec::zeros(std::size_t n, Mode mode) { return Vec(std::vector<Scalar>(n, Scalar::zero(mode))); }
Vec Vec::ones(std::size_t n, Mode mode) { return Vec(std::vector<Scalar>(n, Scalar::one(mode))); }

Vec Vec::basis(std::size_t n, std::size_t index, Mode mode) {
    if (index >= n) {
        throw DimensionError("basis index out of range");
    }
    std::vector<Scalar> e(n, Scalar::zero(mode));
    e[index] = Scalar::one(mode);
    return Vec(std::move(e));
}

Vec Vec::from_doubles(std::span<const double> values) {
    std::vector<Scalar> e;
    e.reserve(values.size());
    for (double d : values) {
        e.emplace_back(d);
    }
    return Vec(std::move(e));
}

Scalar Vec::sum() const {
    Scalar s = Scalar::zero(mode());
    for (const auto& e : entries_) {
        s += e;
    }
    return s;
}

Scalar Vec::dot(const Vec& other) const {
    if (other.size() != size()) {
        throw DimensionError("dot product of vectors with different lengths");
    }
    Scalar s = Scalar::zero(mode());
    for (std::size_t i = 0; i < size(); ++i) {
        s += entries_[i] * other.entries_[i];
    }
    return s;
}

double Vec::norm() const { return std::sqrt(norm_sq().to_double()); }

Scalar Vec::max_abs() const {
    Scalar best = Scalar::zero(mode());
    for (const auto& e : entries_) {
        best = std::max(best, e.abs());
    }
    return best;
}

Scalar Vec::min() const { return *std::min_element(entries_.begin(), entries_.end()); }
Scalar Vec::max() const { return *std::max_element(entries_.begin(), entries_.end()); }

Vec Vec::converted(Mode mode) const {
    std::vector<Scalar> e;
    e.reserve(size());
    for (const auto& s : entries_) {
        e.push_back(s.converted(mode));
    }
    return Vec(std::move(e));
}

std::vector<double> Vec::to_doubles() const {
    std::vector<double> out;
    out.reserve(size());
    for (const auto& s : entries_) {
        out.push_back(s.to_double());
    }
    return out;
}

Vec operator+(const Vec& lhs, const Vec& rhs) {
    if (lhs.size() != rhs.size()) {
        throw DimensionError("vector sum with different lengths");
    }
    std::vector<Scalar> e(lhs.entries_);
    for (std::size_t i = 0; i < e.size(); ++i) {
        e[i] += rhs.entries_[i];
    }
    return Vec(std::move(e));
}

Vec operator-(const Vec& lhs, const Vec& rhs) {
    if (lhs.size() != rhs.size()) {
        throw DimensionError("vector difference with different lengths");
    }
    std::vector<Scalar> e(lhs.entries_);
    for (std::size_t i = 0; i < e.size(); ++i) {
        e[i] -= rhs.entries_[i];
    }
    return Vec(std::move(e));
}

Vec operator*(const Scalar& factor, const Vec& v) {
    std::vector<Scalar> e(v.entries_);
    for (auto& s : e) {
        s *= factor;
    }
    return Vec(std::move(e));
}

bool operator==(const Vec& lhs, const Vec& rhs) {
    return lhs.size() == rhs.size() && std::equal(lhs.entries_.begin(), lhs.entries_.end(), rhs.entries_.begin());
}

// ---------------------------------------------------------------------------
// Mat

Mat::Mat(std::size_t rows, std::size_t cols, std::vector<Scalar> row_major)
    : rows_(rows), cols_(cols), entries_(std::move(row_major)) {
    if (rows_ == 0 || cols_ == 0) {
        throw DimensionError("matrix dimensions must be positive");
    }
    if (entries_.size() != rows_ * cols_) {
        throw DimensionError("entry count does not match matrix dimensions");
    }
    require_mode(entries_, entries_.front().mode(), "matrix");
}

Mat Mat::from_rows(const std::vector<std::vector<Scalar>>& rows) {
    if (rows.empty()) {
        throw DimensionError("matrix must have at least one row");
    }
    std::vector<Scalar> e;
    for (const auto& r : rows) {
        if (r.size() != rows.front().size()) {
            throw DimensionError("ragged matrix rows");
        }
        e.insert(e.end(), r.begin(), r.end());
    }
    return Mat(rows.size(), rows.front().size(), std::move(e));
}

Mat Mat::from_columns(std::span<const Vec> columns) {
    if (columns.empty()) {
        throw DimensionError("matrix must have at least one column");
    }
    const std::size_t m = columns.front().size();
    std::vector<Scalar> e;
    e.reserve(m * columns.size());
    for (std::size_t r = 0; r < m; ++r) {
        for (const auto& c : columns) {
            if (c.size() != m) {
                throw DimensionError("columns of different lengths");
            }
            e.push_back(c[r]);
        }
    }
    return Mat(m, columns.size(), std::move(e));
}

Mat Mat::identity(std::size_t n, Mode mode) {
    std::vector<Scalar> e(n * n, Scalar::zero(mode));
    for (std::size_t i = 0; i < n; ++i) {
        e[i * n + i] = Scalar::one(mode);
    }
    return Mat(n, n, std::move(e));
}

Mat Mat::filled(std::size_t rows, std::size_t cols, const Scalar& value) {
    return Mat(rows, cols, std::vector<Scalar>(rows * cols, value));
}

Vec Mat::row(std::size_t r) const {
    return Vec(std::vector<Scalar>(entries_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                                   entries_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_)));
}

Vec Mat::col(std::size_t c) const {
    std::vector<Scalar> e;
    e.reserve(rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        e.push_back((*this)(r, c));
    }
    return Vec(std::move(e));
}

Mat Mat::transpose() const {
    std::vector<Scalar> e;
    e.reserve(entries_.size());
    for (std::size_t c = 0; c < cols_; ++c) {
        for (std::size_t r = 0; r < rows_; ++r) {
            e.push_back((*this)(r, c));
        }
    }
    return Mat(cols_, rows_, std::move(e));
}

Mat Mat::with_column(const Vec& extra) const {
    if (extra.size() != rows_) {
        throw DimensionError("appended column has wrong length");
    }
    std::vector<Scalar> e;
    e.reserve(rows_ * (cols_ + 1));
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) {
            e.push_back((*this)(r, c));
        }
        e.push_back(extra[r]);
    }
    return Mat(rows_, cols_ + 1, std::move(e));
}

Mat Mat::converted(Mode mode) const {
    std::vector<Scalar> e;
    e.reserve(entries_.size());
    for (const auto& s : entries_) {
        e.push_back(s.converted(mode));
    }
    return Mat(rows_, cols_, std::move(e));
}

Vec operator*(const Mat& m, const Vec& v) {
    if (m.cols() != v.size()) {
        throw DimensionError("matrix-vector product with mismatched dimensions");
    }
    if (m.mode() != v.mode()) {
        throw ModeMismatch("matrix and vector modes differ");
    }
    std::vector<Scalar> out;
    out.reserve(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        Scalar s = Scalar::zero(m.mode());
        for (std::size_t c = 0; c < m.cols(); ++c) {
            s += m(r, c) * v[c];
        }
        out.push_back(std::move(s));
    }
    return Vec(std::move(out));
}

Mat operator*(const Mat& lhs, const Mat& rhs) {
    if (lhs.cols() != rhs.rows()) {
        throw DimensionError("matrix product with mismatched dimensions");
    }
    std::vector<Scalar> out;
    out.reserve(lhs.rows() * rhs.cols());
    for (std::size_t r = 0; r < lhs.rows(); ++r) {
        for (std::size_t c = 0; c < rhs.cols(); ++c) {
            Scalar s = Scalar::zero(lhs.mode());
            for (std::size_t k = 0; k < lhs.cols(); ++k) {
                s += lhs(r, k) * rhs(k, c);
            }
            out.push_back(std::move(s));
        }
    }
    return Mat(lhs.rows(), rhs.cols(), std::move(out));
}

bool operator==(const Mat& lhs, const Mat& rhs) {
    return lhs.rows_ == rhs.rows_ && lhs.cols_ == rhs.cols_ &&
           std::equal(lhs.entries_.begin(), lhs.entries_.end(), rhs.entries_.begin());
}

void ToleranceConfig::validate() const {
    auto check = [](double v, const char* name) {
        if (!(v >= 0.0)) {
            throw InvalidArgument(name, std::string(name) + " must be nonnegative");
        }
    };
    check(rank_tol, "rank_tol");
    check(residual_tol, "residual_tol");
    check(gap_tol, "gap_tol");
    check(stochastic_tol, "stochastic_tol");
}

// ---------------------------------------------------------------------------
// rank

namespace {

using DenseD = std::vector<std::vector<double>>;

DenseD to_dense(const Mat& m) {
    DenseD a(m.rows(), std::vector<double>(m.cols()));
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            a[r][c] = m(r, c).to_double();
        }
    }
    return a;
}

// Each row is scaled by the lcm of its denominators, then Bareiss elimination
// runs over the integers. Every intermediate entry is a minor of the scaled
// matrix, so the division by the previous pivot is exact.
std::size_t rank_exact(const Mat& m) {
    const std::size_t rows = m.rows();
    const std::size_t cols = m.cols();
    std::vector<std::vector<BigInt>> a(rows, std::vector<BigInt>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
        BigInt scale = 1;
        for (std::size_t c = 0; c < cols; ++c) {
            scale = boost::multiprecision::lcm(scale, denominator(m(r, c).rational()));
        }
        for (std::size_t c = 0; c < cols; ++c) {
            const Rational& q = m(r, c).rational();
            a[r][c] = numerator(q) * (scale / denominator(q));
        }
    }

    std::size_t pivot_row = 0;
    BigInt previous = 1;
    for (std::size_t c = 0; c < cols && pivot_row < rows; ++c) {
        std::size_t found = pivot_row;
        while (found < rows && a[found][c] == 0) {
            ++found;
        }
        if (found == rows) {
            continue;
        }
        std::swap(a[found], a[pivot_row]);
        const BigInt& pivot = a[pivot_row][c];
        for (std::size_t r = pivot_row + 1; r < rows; ++r) {
            for (std::size_t k = c + 1; k < cols; ++k) {
                a[r][k] = (pivot * a[r][k] - a[r][c] * a[pivot_row][k]) / previous;
            }
            a[r][c] = 0;
        }
        previous = pivot;
        ++pivot_row;
    }
    return pivot_row;
}

std::size_t rank_float(const Mat& m, double tol) {
    DenseD a = to_dense(m);
    const std::size_t rows = m.rows();
    const std::size_t cols = m.cols();
    std::size_t pivot_row = 0;
    for (std::size_t c = 0; c < cols && pivot_row < rows; ++c) {
        std::size_t best = pivot_row;
        for (std::size_t r = pivot_row + 1; r < rows; ++r) {
            if (std::abs(a[r][c]) > std::abs(a[best][c])) {
                best = r;
            }
        }
        if (std::abs(a[best][c]) <= tol) {
            continue;
        }
        std::swap(a[best], a[pivot_row]);
        for (std::size_t r = pivot_row + 1; r < rows; ++r) {
            const double factor = a[r][c] / a[pivot_row][c];
            for (std::size_t k = c; k < cols; ++k) {
                a[r][k] -= factor * a[pivot_row][k];
            }
        }
        ++pivot_row;
    }
    return pivot_row;
}

// Householder QR with column pivoting; columns whose remaining norm falls to
// rank_tol or below are treated as dependent.
struct PivotedQR {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t rank = 0;
    DenseD r;                               // overwritten input, R in the upper triangle
    std::vector<std::vector<double>> tau_v; // reflector vectors, index k acts on rows k..
    std::vector<std::size_t> perm;

    PivotedQR(const Mat& m, double tol) : rows(m.rows()), cols(m.cols()), r(to_dense(m)), perm(m.cols()) {
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        const std::size_t steps = std::min(rows, cols);
        for (std::size_t k = 0; k < steps; ++k) {
            std::size_t best = k;
            double best_norm = -1.0;
            for (std::size_t c = k; c < cols; ++c) {
                double s = 0.0;
                for (std::size_t i = k; i < rows; ++i) {
                    s += r[i][c] * r[i][c];
                }
                if (s > best_norm) {
                    best_norm = s;
                    best = c;
                }
            }
            if (std::sqrt(best_norm) <= tol) {
                break;
            }
            if (best != k) {
                for (std::size_t i = 0; i < rows; ++i) {
                    std::swap(r[i][k], r[i][best]);
                }
                std::swap(perm[k], perm[best]);
            }
            const double norm = std::sqrt(best_norm);
            const double alpha = r[k][k] > 0 ? -norm : norm;
            std::vector<double> v(rows - k);
            for (std::size_t i = k; i < rows; ++i) {
                v[i - k] = r[i][k];
            }
            v[0] -= alpha;
            double vnorm_sq = 0.0;
            for (double x : v) {
                vnorm_sq += x * x;
            }
            if (vnorm_sq > 0.0) {
                for (std::size_t c = k; c < cols; ++c) {
                    double d = 0.0;
                    for (std::size_t i = k; i < rows; ++i) {
                        d += v[i - k] * r[i][c];
                    }
                    d = 2.0 * d / vnorm_sq;
                    for (std::size_t i = k; i < rows; ++i) {
                        r[i][c] -= d * v[i - k];
                    }
                }
                const double inv = 1.0 / std::sqrt(vnorm_sq);
                for (double& x : v) {
                    x *= inv;
                }
            }
            tau_v.push_back(std::move(v));
            ++rank;
        }
    }

    // Applies Q^T (reflectors in order) to b in place.
    void apply_qt(std::vector<double>& b) const {
        for (std::size_t k = 0; k < tau_v.size(); ++k) {
            const auto& v = tau_v[k];
            double d = 0.0;
            for (std::size_t i = k; i < rows; ++i) {
                d += v[i - k] * b[i];
            }
            for (std::size_t i = k; i < rows; ++i) {
                b[i] -= 2.0 * d * v[i - k];
            }
        }
    }

    // Applies Q (reflectors in reverse order) to b in place.
    void apply_q(std::vector<double>& b) const {
        for (std::size_t k = tau_v.size(); k-- > 0;) {
            const auto& v = tau_v[k];
            double d = 0.0;
            for (std::size_t i = k; i < rows; ++i) {
                d += v[i - k] * b[i];
            }
            for (std::size_t i = k; i < rows; ++i) {
                b[i] -= 2.0 * d * v[i - k];
            }
        }
    }
};

// Reduced row echelon form of an augmented rational system; returns one
// solution of G x = h with free variables at zero, or nothing if inconsistent.
std::optional<std::vector<Rational>> solve_exact(std::vector<std::vector<Rational>> a, std::size_t unknowns) {
    const std::size_t rows = a.size();
    std::vector<std::size_t> pivot_cols;
    std::size_t pivot_row = 0;
    for (std::size_t c = 0; c < unknowns && pivot_row < rows; ++c) {
        std::size_t found = pivot_row;
        while (found < rows && a[found][c] == 0) {
            ++found;
        }
        if (found == rows) {
            continue;
        }
        std::swap(a[found], a[pivot_row]);
        const Rational inv = 1 / a[pivot_row][c];
        for (auto& x : a[pivot_row]) {
            x *= inv;
        }
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == pivot_row || a[r][c] == 0) {
                continue;
            }
            const Rational factor = a[r][c];
            for (std::size_t k = c; k <= unknowns; ++k) {
                a[r][k] -= factor * a[pivot_row][k];
            }
        }
        pivot_cols.push_back(c);
        ++pivot_row;
    }
    for (std::size_t r = pivot_row; r < rows; ++r) {
        if (a[r][unknowns] != 0) {
            return std::nullopt;
        }
    }
    std::vector<Rational> x(unknowns, Rational(0));
    for (std::size_t i = 0; i < pivot_cols.size(); ++i) {
        x[pivot_cols[i]] = a[i][unknowns];
    }
    return x;
}

} // namespace

std::size_t rank(const Mat& m, const ToleranceConfig& tol) {
    if (m.mode() == Mode::exact) {
        return rank_exact(m);
    }
    return rank_float(m, tol.rank_tol);
}

LeastSquares min_residual_solve(const Mat& m, const Vec& v, const ToleranceConfig& tol) {
    if (m.rows() != v.size()) {
        throw DimensionError("right-hand side length differs from matrix row count");
    }
    if (m.mode() != v.mode()) {
        throw ModeMismatch("matrix and right-hand side modes differ");
    }

    if (m.mode() == Mode::exact) {
        const std::size_t n = m.cols();
        std::vector<std::vector<Rational>> normal(n, std::vector<Rational>(n + 1));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                Rational s = 0;
                for (std::size_t r = 0; r < m.rows(); ++r) {
                    s += m(r, i).rational() * m(r, j).rational();
                }
                normal[i][j] = s;
            }
            Rational s = 0;
            for (std::size_t r = 0; r < m.rows(); ++r) {
                s += m(r, i).rational() * v[r].rational();
            }
            normal[i][n] = s;
        }
        // The normal equations are always consistent.
        auto solution = solve_exact(std::move(normal), n);
        std::vector<Scalar> coeffs;
        coeffs.reserve(n);
        for (auto& q : *solution) {
            coeffs.emplace_back(std::move(q));
        }
        Vec c(std::move(coeffs));
        Scalar residual_sq = (m * c - v).norm_sq();
        double norm = std::sqrt(residual_sq.to_double());
        return LeastSquares{std::move(c), std::move(residual_sq), norm};
    }

    PivotedQR qr(m, tol.rank_tol);
    std::vector<double> b = v.to_doubles();
    qr.apply_qt(b);
    std::vector<double> z(qr.rank, 0.0);
    for (std::size_t i = qr.rank; i-- > 0;) {
        double s = b[i];
        for (std::size_t k = i + 1; k < qr.rank; ++k) {
            s -= qr.r[i][k] * z[k];
        }
        z[i] = s / qr.r[i][i];
    }
    std::vector<double> coeffs(m.cols(), 0.0);
    for (std::size_t i = 0; i < qr.rank; ++i) {
        coeffs[qr.perm[i]] = z[i];
    }
    Vec c = Vec::from_doubles(coeffs);
    Scalar residual_sq = (m * c - v).norm_sq();
    double norm = std::sqrt(residual_sq.to_double());
    return LeastSquares{std::move(c), std::move(residual_sq), norm};
}

bool residual_accepts(const LeastSquares& solution, const Vec& v, const ToleranceConfig& tol) {
    if (solution.residual_sq.is_exact()) {
        return solution.residual_sq.is_zero();
    }
    return solution.residual_norm <= tol.residual_tol * (1.0 + v.norm());
}

// ---------------------------------------------------------------------------
// ColumnSpace

ColumnSpace::ColumnSpace(const Mat& m, const ToleranceConfig& tol) : mode_(m.mode()), tol_(tol) {
    if (mode_ == Mode::exact) {
        // Gram-Schmidt over the rationals, without normalization.
        for (std::size_t c = 0; c < m.cols(); ++c) {
            Vec w = m.col(c);
            for (std::size_t k = 0; k < basis_.size(); ++k) {
                w = w - (w.dot(basis_[k]) / basis_norm_sq_[k]) * basis_[k];
            }
            Scalar nsq = w.norm_sq();
            if (!nsq.is_zero()) {
                basis_.push_back(std::move(w));
                basis_norm_sq_.push_back(std::move(nsq));
            }
        }
        return;
    }
    PivotedQR qr(m, tol.rank_tol);
    for (std::size_t k = 0; k < qr.rank; ++k) {
        std::vector<double> e(m.rows(), 0.0);
        e[k] = 1.0;
        qr.apply_q(e);
        basis_.push_back(Vec::from_doubles(e));
        basis_norm_sq_.push_back(Scalar(1.0));
    }
}

Scalar ColumnSpace::residual_sq(const Vec& v) const {
    if (v.mode() != mode_) {
        throw ModeMismatch("column space and vector modes differ");
    }
    Vec w = v;
    for (std::size_t k = 0; k < basis_.size(); ++k) {
        w = w - (w.dot(basis_[k]) / basis_norm_sq_[k]) * basis_[k];
    }
    return w.norm_sq();
}

bool ColumnSpace::contains(const Vec& v) const {
    Scalar r = residual_sq(v);
    if (mode_ == Mode::exact) {
        return r.is_zero();
    }
    return std::sqrt(r.to_double()) <= tol_.residual_tol * (1.0 + v.norm());
}

} // namespace convexity_gate

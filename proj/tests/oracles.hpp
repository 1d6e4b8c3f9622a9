#pragma once

// Reference implementations used only by the tests. They are deliberately
// naive and share no code with the library.

#include <algorithm>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace oracle {

using Q = boost::multiprecision::cpp_rational;
using QMatrix = std::vector<std::vector<Q>>;

inline Q q(long long num, long long den = 1) {
    Q r(num);
    r /= Q(den);
    return r;
}

struct Pair {
    std::vector<std::size_t> a;
    std::vector<std::size_t> b;
    friend bool operator==(const Pair&, const Pair&) = default;
    friend auto operator<=>(const Pair&, const Pair&) = default;
};

/// Every ordered pair of disjoint nonempty subsets of {1..n}, found by
/// labelling each index 0 (unused), 1 (in A) or 2 (in B).
inline std::vector<Pair> all_pairs(std::size_t n) {
    std::vector<Pair> out;
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < n; ++i) {
        total *= 3;
    }
    for (std::uint64_t code = 0; code < total; ++code) {
        Pair p;
        std::uint64_t c = code;
        for (std::size_t i = 1; i <= n; ++i) {
            const auto digit = c % 3;
            c /= 3;
            if (digit == 1) p.a.push_back(i);
            if (digit == 2) p.b.push_back(i);
        }
        if (!p.a.empty() && !p.b.empty()) {
            out.push_back(std::move(p));
        }
    }
    return out;
}

/// Laplace expansion along the first row.
inline Q cofactor_det(const QMatrix& m) {
    const std::size_t n = m.size();
    if (n == 1) {
        return m[0][0];
    }
    Q det = 0;
    for (std::size_t c = 0; c < n; ++c) {
        QMatrix minor;
        for (std::size_t r = 1; r < n; ++r) {
            std::vector<Q> row;
            for (std::size_t k = 0; k < n; ++k) {
                if (k != c) row.push_back(m[r][k]);
            }
            minor.push_back(std::move(row));
        }
        const Q term = m[0][c] * cofactor_det(minor);
        det += (c % 2 == 0) ? term : Q(-term);
    }
    return det;
}

/// Plain Gaussian elimination over the rationals.
inline std::size_t gauss_rank(QMatrix m) {
    const std::size_t rows = m.size();
    const std::size_t cols = rows ? m[0].size() : 0;
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t pivot = rank;
        while (pivot < rows && m[pivot][c] == 0) ++pivot;
        if (pivot == rows) continue;
        std::swap(m[pivot], m[rank]);
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == rank || m[r][c] == 0) continue;
            const Q factor = m[r][c] / m[rank][c];
            for (std::size_t k = c; k < cols; ++k) {
                m[r][k] -= factor * m[rank][k];
            }
        }
        ++rank;
    }
    return rank;
}

inline QMatrix with_column(QMatrix m, const std::vector<Q>& v) {
    for (std::size_t r = 0; r < m.size(); ++r) {
        m[r].push_back(v[r]);
    }
    return m;
}

inline std::vector<Q> indicator(std::size_t n, const Pair& p) {
    std::vector<Q> v(n, Q(0));
    for (auto i : p.a) v[i - 1] = q(1, static_cast<long long>(p.a.size()));
    for (auto i : p.b) v[i - 1] = q(-1, static_cast<long long>(p.b.size()));
    return v;
}

/// Span membership by the rank test rank([M | v]) == rank(M).
inline bool in_span(const QMatrix& m, const std::vector<Q>& v) {
    return gauss_rank(with_column(m, v)) == gauss_rank(m);
}

inline bool has_witness(const QMatrix& m) {
    for (const auto& p : all_pairs(m.size())) {
        if (in_span(m, indicator(m.size(), p))) return true;
    }
    return false;
}

/// sum_j w_j * exp(2 pi i k (j - 1) / n) evaluated term by term.
inline std::vector<std::complex<double>> direct_dft(const std::vector<double>& w) {
    const std::size_t n = w.size();
    std::vector<std::complex<double>> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t j = 0; j < n; ++j) {
            const double angle = 2.0 * std::numbers::pi * static_cast<double>((k * j) % n) / static_cast<double>(n);
            out[k] += w[j] * std::polar(1.0, angle);
        }
    }
    return out;
}

/// Row i (1-based) of the table is 1..n rotated left by i - 1, so entry
/// (i, j) for j = 0..n-1 is i (+) j.
inline std::vector<std::vector<std::size_t>> oplus_table(std::size_t n) {
    std::vector<std::size_t> base(n);
    for (std::size_t i = 0; i < n; ++i) base[i] = i + 1;
    std::vector<std::vector<std::size_t>> table;
    for (std::size_t i = 0; i < n; ++i) {
        auto row = base;
        std::rotate(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(i), row.end());
        table.push_back(std::move(row));
    }
    return table;
}

/// All (k_1, ..., k_n) of nonnegative integers summing to `den`.
inline std::vector<std::vector<long long>> simplex_grid(std::size_t n, long long den) {
    std::vector<std::vector<long long>> out;
    std::vector<long long> cur(n, 0);
    auto rec = [&](auto&& self, std::size_t i, long long left) -> void {
        if (i + 1 == n) {
            cur[i] = left;
            out.push_back(cur);
            return;
        }
        for (long long k = 0; k <= left; ++k) {
            cur[i] = k;
            self(self, i + 1, left - k);
        }
    };
    rec(rec, 0, den);
    return out;
}

inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    std::uint64_t r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
    }
    return r;
}

} // namespace oracle

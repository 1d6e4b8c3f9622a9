#pragma once

#include <string>
#include <vector>

#include "convexity_gate/numerics.hpp"
#include "oracles.hpp"

namespace test_support {

using namespace convexity_gate;

inline Scalar r(long long num, long long den = 1) { return Scalar::ratio(num, den); }
inline Scalar d(double v) { return Scalar(v); }

inline Vec rv(std::initializer_list<std::pair<long long, long long>> values) {
    std::vector<Scalar> out;
    for (const auto& [num, den] : values) out.push_back(r(num, den));
    return Vec(std::move(out));
}

inline oracle::QMatrix to_q(const Mat& m) {
    oracle::QMatrix out(m.rows(), std::vector<oracle::Q>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = m(i, j).rational();
    return out;
}

inline Mat from_q(const oracle::QMatrix& m) {
    std::vector<std::vector<Scalar>> rows;
    for (const auto& row : m) {
        std::vector<Scalar> out;
        for (const auto& v : row) out.emplace_back(v);
        rows.push_back(std::move(out));
    }
    return Mat::from_rows(rows);
}

} // namespace test_support

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "convexity_gate/numerics.hpp"

namespace convexity_gate {

enum class StochasticViolation { not_square, negative_entry, row_sum_off, col_sum_off };

/// Validation failure. Row and column indices are 1-based; unused ones are 0.
class StochasticError : public Error {
public:
    StochasticError(StochasticViolation kind, std::size_t row, std::size_t col, const std::string& what)
        : Error("matrix", what), kind_(kind), row_(row), col_(col) {}

    StochasticViolation kind() const noexcept { return kind_; }
    std::size_t row() const noexcept { return row_; }
    std::size_t col() const noexcept { return col_; }

private:
    StochasticViolation kind_;
    std::size_t row_;
    std::size_t col_;
};

class DoublyStochasticMatrix;

/// Checks, in order: squareness, signs, row sums, column sums. The error
/// names the first offending index. Exact matrices are checked exactly.
DoublyStochasticMatrix validate(const Mat& m, const ToleranceConfig& tol = {});

/// Square matrix with nonnegative entries and unit row and column sums. Only
/// obtainable through validate() and the constructors below, so holding one
/// means the invariants were checked.
class DoublyStochasticMatrix {
public:
    std::size_t n() const noexcept { return matrix_.rows(); }
    Mode mode() const noexcept { return matrix_.mode(); }
    const Mat& matrix() const noexcept { return matrix_; }
    const Scalar& operator()(std::size_t r, std::size_t c) const { return matrix_(r, c); }

    /// Re-validates after conversion (an exact matrix always survives).
    DoublyStochasticMatrix converted(Mode mode, const ToleranceConfig& tol = {}) const;

    friend bool operator==(const DoublyStochasticMatrix& a, const DoublyStochasticMatrix& b) {
        return a.matrix_ == b.matrix_;
    }

private:
    explicit DoublyStochasticMatrix(Mat m) : matrix_(std::move(m)) {}
    friend DoublyStochasticMatrix validate(const Mat& m, const ToleranceConfig& tol);

    Mat matrix_;
};

/// S_n: every entry 1/n.
DoublyStochasticMatrix uniform(std::size_t n, Mode mode = Mode::exact);

/// A bijection on {1..n}, stored 1-based.
class Permutation {
public:
    explicit Permutation(std::vector<std::size_t> sigma);
    static Permutation identity(std::size_t n);

    std::size_t size() const noexcept { return sigma_.size(); }
    /// Image of the 1-based index i.
    std::size_t operator()(std::size_t i) const { return sigma_.at(i - 1); }
    const std::vector<std::size_t>& images() const noexcept { return sigma_; }

private:
    std::vector<std::size_t> sigma_;
};

/// Row i has its one in column sigma(i).
DoublyStochasticMatrix permutation_matrix(const Permutation& sigma, Mode mode = Mode::exact);

/// Convex combination of k uniformly drawn permutation matrices with weights
/// from k normalized uniform draws. Exact mode draws integer weights in
/// [1, 1000] so the result is rational. Deterministic for a fixed seed.
DoublyStochasticMatrix sample_birkhoff(std::size_t n, std::size_t k, std::uint64_t seed,
                                       Mode mode = Mode::floating);

} // namespace convexity_gate

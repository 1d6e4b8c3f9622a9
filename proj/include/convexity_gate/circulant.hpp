#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "convexity_gate/hypothesis.hpp"
#include "convexity_gate/numerics.hpp"
#include "convexity_gate/stochastic.hpp"

namespace convexity_gate {

enum class CirculantViolation { invalid_weights, unsupported_order, odd_order, all_equal_weights, not_degenerate };

class CirculantError : public Error {
public:
    CirculantError(CirculantViolation kind, const std::string& what) : Error("weights", what), kind_(kind) {}
    CirculantViolation kind() const noexcept { return kind_; }

private:
    CirculantViolation kind_;
};

/// Cyclic index addition on {1..n}: i + j, wrapped once past n.
/// Requires i in {1..n} and j in {0..n-1}.
std::size_t truncated_sum(std::size_t i, std::size_t j, std::size_t n);

/// A probability vector (lambda_1, ..., lambda_n).
class CirculantWeights {
public:
    explicit CirculantWeights(std::vector<Scalar> lambda, const ToleranceConfig& tol = {});

    std::size_t n() const noexcept { return lambda_.size(); }
    Mode mode() const noexcept { return lambda_.front().mode(); }
    /// 1-based, matching lambda_1..lambda_n.
    const Scalar& operator()(std::size_t j) const { return lambda_.at(j - 1); }
    const std::vector<Scalar>& values() const noexcept { return lambda_; }

private:
    std::vector<Scalar> lambda_;
};

/// Weights (1/(n-1), ..., 1/(n-1), 0).
CirculantWeights leave_one_out_weights(std::size_t n, Mode mode = Mode::exact);

/// Left-circulant matrix: entry (i, j) for j in {0..n-1} is lambda_{i (+) j}.
DoublyStochasticMatrix build_matrix(const CirculantWeights& w, const ToleranceConfig& tol = {});

/// a + b*sqrt(3) with rational a, b.
struct QuadraticSqrt3 {
    Rational rational_part = 0;
    Rational sqrt3_part = 0;

    bool is_zero() const { return rational_part == 0 && sqrt3_part == 0; }
    double to_double() const;
    friend bool operator==(const QuadraticSqrt3&, const QuadraticSqrt3&) = default;
};

struct ExactComplex {
    QuadraticSqrt3 re;
    QuadraticSqrt3 im;

    bool is_zero() const { return re.is_zero() && im.is_zero(); }
    std::complex<double> to_complex() const { return {re.to_double(), im.to_double()}; }
    friend bool operator==(const ExactComplex&, const ExactComplex&) = default;
};

/// values[k] = sum_j lambda_j * omega_n^(k(j-1)), omega_n = exp(2 pi i / n).
struct DftSpectrum {
    std::size_t n = 0;
    std::vector<std::complex<double>> values;
    /// Present for exact weights with n in {1, 2, 3, 4, 6}, where the roots
    /// of unity have coordinates in Q(sqrt 3).
    std::optional<std::vector<ExactComplex>> exact;

    /// Exact test when available, otherwise |value| <= tol.residual_tol.
    bool is_zero(std::size_t k, const ToleranceConfig& tol = {}) const;
};

bool has_exact_spectrum(std::size_t n);

DftSpectrum dft_spectrum(const CirculantWeights& w);

/// True iff every spectrum value for k = 1..n-1 is nonzero.
bool is_invertible(const CirculantWeights& w, const ToleranceConfig& tol = {});

struct ClosedFormVerdict {
    bool holds = true;
    std::vector<std::string> failing_clauses;
};

/// Explicit invertibility conditions for n = 2, 3, 4. Floating weights compare
/// equal within tol.stochastic_tol. Throws CirculantError(unsupported_order)
/// for other n.
ClosedFormVerdict closed_form_verdict(const CirculantWeights& w, const ToleranceConfig& tol = {});
bool closed_form_check(const CirculantWeights& w, const ToleranceConfig& tol = {});

struct AlternatingSums {
    Scalar odd_sum;  // lambda_1 + lambda_3 + ...
    Scalar even_sum; // lambda_2 + lambda_4 + ...
};

/// For even n: the alternating sums when the k = n/2 spectrum value vanishes
/// (both are then 1/2), nothing otherwise. Throws for odd n.
std::optional<AlternatingSums> even_n_degeneracy(const CirculantWeights& w, const ToleranceConfig& tol = {});

/// For a singular n = 4 circulant with weights not all 1/4, the subset pair
/// whose indicator lies in the column span: ({1,3},{2,4}) when lambda_1 =
/// lambda_3 and lambda_2 = lambda_4, otherwise ({1,2},{3,4}). The pair is
/// confirmed with check_pair before it is returned.
std::optional<SubsetPair> n4_degenerate_witness(const CirculantWeights& w, const ToleranceConfig& tol = {});

/// Coefficient matrix of the 3x3 system solved for the ({1,2},{3,4}) pair
/// once lambda_4 = lambda_1 + lambda_3 - lambda_2 has been substituted.
Mat case2_system_matrix(const Scalar& l1, const Scalar& l2, const Scalar& l3);

/// Closed form of det(case2_system_matrix):
/// -(l1 + l3) * ((l1 - l2)^2 + (l2 - l3)^2).
Scalar det3_case2(const Scalar& l1, const Scalar& l2, const Scalar& l3);

} // namespace convexity_gate

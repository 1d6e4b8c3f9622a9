#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "convexity_gate/numerics.hpp"
#include "convexity_gate/stochastic.hpp"

namespace convexity_gate {

/// Disjoint nonempty index sets A, B of {1..n}, kept sorted.
class SubsetPair {
public:
    /// Indices are 1-based. Throws InvalidArgument on empty, overlapping,
    /// duplicated or out-of-range sets.
    SubsetPair(std::size_t n, std::vector<std::size_t> a, std::vector<std::size_t> b);

    std::size_t n() const noexcept { return n_; }
    const std::vector<std::size_t>& a() const noexcept { return a_; }
    const std::vector<std::size_t>& b() const noexcept { return b_; }
    std::size_t a_size() const noexcept { return a_.size(); }
    std::size_t b_size() const noexcept { return b_.size(); }

    friend bool operator==(const SubsetPair&, const SubsetPair&) = default;

private:
    std::size_t n_;
    std::vector<std::size_t> a_;
    std::vector<std::size_t> b_;
};

/// (1/|A|) sum_{i in A} e_i - (1/|B|) sum_{i in B} e_i.
Vec indicator_vector(const SubsetPair& pair, Mode mode = Mode::exact);

/// Evidence that indicator_vector(pair) = P * coeffs.
struct WitnessCertificate {
    SubsetPair pair;
    Vec coeffs;
    Scalar residual_sq;
    double residual_norm;

    Mode mode() const noexcept { return coeffs.mode(); }
};

/// Recomputes P * coeffs and compares with the indicator vector: exactly in
/// exact mode, against residual_tol * (1 + ||v||) in floating mode.
bool recheck(const DoublyStochasticMatrix& p, const WitnessCertificate& cert, const ToleranceConfig& tol = {});

std::optional<WitnessCertificate> check_pair(const DoublyStochasticMatrix& p, const SubsetPair& pair,
                                             const ToleranceConfig& tol = {});

/// Largest order for which find_witness enumerates all pairs.
inline constexpr std::size_t max_enumeration_order = 14;

/// Visits every ordered pair (A, B) in canonical order: increasing |A|+|B|,
/// then A lexicographically, then B lexicographically. The visitor returns
/// false to stop. Returns the number of pairs visited.
std::uint64_t for_each_candidate_pair(std::size_t n, const std::function<bool(const SubsetPair&)>& visit);

struct WitnessScan {
    std::optional<WitnessCertificate> witness;
    std::size_t rank = 0;
    std::uint64_t pairs_checked = 0;
    bool rank_shortcut = false;
};

/// Full-rank matrices return the pair ({1},{2}) immediately; otherwise pairs
/// are enumerated in canonical order. Throws InvalidArgument when enumeration
/// would be needed above max_enumeration_order.
WitnessScan scan_for_witness(const DoublyStochasticMatrix& p, const ToleranceConfig& tol = {});

std::optional<WitnessCertificate> find_witness(const DoublyStochasticMatrix& p, const ToleranceConfig& tol = {});

/// 3^n - 2*2^n + 1: the number of ordered pairs of disjoint nonempty subsets.
BigInt candidate_count(std::size_t n);

/// Matrices from `family` with rank >= 2 and no witness pair.
std::vector<DoublyStochasticMatrix> open_problem_candidates(std::span<const DoublyStochasticMatrix> family,
                                                            const ToleranceConfig& tol = {});

/// Samples uniform(n), Birkhoff mixtures with few terms, and mixtures of
/// block-averaging matrices, then keeps the open_problem_candidates. An empty
/// result carries no claim.
std::vector<DoublyStochasticMatrix> explore_open_problem(std::size_t n, std::size_t num_samples, std::uint64_t seed,
                                                         const ToleranceConfig& tol = {}, Mode mode = Mode::exact);

} // namespace convexity_gate

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "convexity_gate/functions.hpp"
#include "convexity_gate/numerics.hpp"
#include "convexity_gate/stochastic.hpp"

namespace convexity_gate {

/// Both sides of f(mean(x)) <= (1/n) sum_i f((P x)_i) at one point.
struct SideEvaluation {
    Scalar lhs;
    Scalar rhs;
    Scalar gap; // rhs - lhs
    Vec y;      // P x
};

/// Exact mode: gap < 0. Floating mode: gap < -gap_tol * (1 + |lhs| + |rhs|).
bool is_violation(const SideEvaluation& eval, const ToleranceConfig& tol = {});

/// In floating mode each y_i is clamped to [min x, max x] to absorb rounding.
SideEvaluation evaluate_sides(const DoublyStochasticMatrix& p, const FunctionSpec& f, const Interval& interval,
                              const Vec& x);

/// Same inequality with y_i = (x_1 + ... + x_n - x_i) / (n - 1). Needs n >= 2.
SideEvaluation leave_one_out_sides(const FunctionSpec& f, const Interval& interval, const Vec& x);

struct SamplerConfig {
    /// Window width used for infinite interval ends (see sampling_box).
    double radius = 10.0;
};

struct VerifyReport {
    double min_gap = 0.0;
    std::vector<double> argmin_x;
    std::size_t violations = 0;
    std::size_t samples = 0;
};

/// Samples per shard; shard s draws from Rng::for_shard(seed, s), so results
/// do not depend on the thread count.
inline constexpr std::size_t verify_shard_size = 256;

/// Evaluates the inequality at num_samples points drawn uniformly from the
/// sampling box of I^n. Floating mode only. Ties for the minimum resolve to
/// the earliest sample.
VerifyReport verify(const DoublyStochasticMatrix& p, const FunctionSpec& f, const Interval& interval,
                    const SamplerConfig& sampler, std::size_t num_samples, std::uint64_t seed,
                    const ToleranceConfig& tol = {}, unsigned threads = 1);

struct ViolationWitness {
    Vec x;
    SideEvaluation evaluation;
    DoublyStochasticMatrix matrix;
    FunctionSpec function;
    Interval interval;

    /// Re-evaluates at x: still a violation and gap reproduced within 1e-12
    /// relative.
    bool recheck(const ToleranceConfig& tol = {}) const;
};

/// Random multistart with per-coordinate golden-section refinement of the
/// gap. `budget` caps the number of gap evaluations. Floating mode only.
std::optional<ViolationWitness> search_violation(const DoublyStochasticMatrix& p, const FunctionSpec& f,
                                                 const Interval& interval, std::size_t budget, std::uint64_t seed,
                                                 const ToleranceConfig& tol = {}, const SamplerConfig& sampler = {});

struct SchurForms {
    Scalar form_I_gap;          // F(P x) - F(S_n x)
    Scalar form_III_gap_at_Px;  // F(P x) - F(S_n P x)
    Scalar s_n_absorption_error; // ||S_n P x - S_n x||_inf
    bool forms_agree = false;
};

/// F(x) = f(x_1) + ... + f(x_n). forms_agree compares the two gaps exactly,
/// or within n * gap_tol * (1 + |form_I_gap| + |form_III_gap_at_Px|) in
/// floating mode.
SchurForms schur_forms_check(const DoublyStochasticMatrix& p, const FunctionSpec& f, const Interval& interval,
                             const Vec& x, const ToleranceConfig& tol = {});

} // namespace convexity_gate

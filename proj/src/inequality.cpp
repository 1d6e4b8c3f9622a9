#include "convexity_gate/inequality.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "convexity_gate/random.hpp"

namespace convexity_gate {

namespace {

void require_points_in(const Vec& x, const Interval& interval) {
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!interval.contains(x[i])) {
            throw OutOfDomain("x" + std::to_string(i + 1) + " = " + x[i].to_string() + " lies outside the interval");
        }
    }
}

Vec clamp_to_range(const Vec& y, const Vec& x) {
    if (y.mode() == Mode::exact) {
        return y;
    }
    const Scalar lo = x.min();
    const Scalar hi = x.max();
    std::vector<Scalar> out(y.entries().begin(), y.entries().end());
    for (auto& v : out) {
        v = std::clamp(v, lo, hi);
    }
    return Vec(std::move(out));
}

Scalar mean_of(const Vec& x) { return x.sum() / Scalar::from_int(static_cast<long long>(x.size()), x.mode()); }

SideEvaluation sides_from_y(const FunctionSpec& f, const Interval& interval, const Vec& x, Vec y) {
    const Mode mode = x.mode();
    Scalar lhs = evaluate(f, mean_of(x), interval);
    Scalar rhs = Scalar::zero(mode);
    for (const auto& yi : y.entries()) {
        rhs += evaluate(f, yi, interval);
    }
    rhs /= Scalar::from_int(static_cast<long long>(x.size()), mode);
    Scalar gap = rhs - lhs;
    return SideEvaluation{std::move(lhs), std::move(rhs), std::move(gap), std::move(y)};
}

void require_floating(const DoublyStochasticMatrix& p, const char* what) {
    if (p.mode() != Mode::floating) {
        throw ModeMismatch(std::string(what) + " samples floating points; convert the matrix to floating mode first");
    }
}

Vec random_point(std::size_t n, const SamplingBox& box, Rng& rng) {
    std::vector<double> x(n);
    for (auto& xi : x) {
        xi = rng.uniform(box.lo, box.hi);
    }
    return Vec::from_doubles(x);
}

struct ShardResult {
    double min_gap = 0.0;
    std::vector<double> argmin_x;
    std::size_t violations = 0;
    bool any = false;
};

Scalar F_of(const FunctionSpec& f, const Interval& interval, const Vec& v) {
    Scalar s = Scalar::zero(v.mode());
    for (const auto& vi : v.entries()) {
        s += evaluate(f, vi, interval);
    }
    return s;
}

} // namespace

bool is_violation(const SideEvaluation& eval, const ToleranceConfig& tol) {
    if (eval.gap.is_exact()) {
        return eval.gap.sign() < 0;
    }
    const double scale = 1.0 + std::abs(eval.lhs.to_double()) + std::abs(eval.rhs.to_double());
    return eval.gap.to_double() < -tol.gap_tol * scale;
}

SideEvaluation evaluate_sides(const DoublyStochasticMatrix& p, const FunctionSpec& f, const Interval& interval,
                              const Vec& x) {
    if (x.size() != p.n()) {
        throw DimensionError("x has length " + std::to_string(x.size()) + " but the matrix has order " +
                             std::to_string(p.n()));
    }
    require_points_in(x, interval);
    Vec y = clamp_to_range(p.matrix() * x, x);
    return sides_from_y(f, interval, x, std::move(y));
}

SideEvaluation leave_one_out_sides(const FunctionSpec& f, const Interval& interval, const Vec& x) {
    const std::size_t n = x.size();
    if (n < 2) {
        throw InvalidArgument("x", "the leave-one-out form needs n >= 2");
    }
    require_points_in(x, interval);
    const Scalar total = x.sum();
    const Scalar divisor = Scalar::from_int(static_cast<long long>(n - 1), x.mode());
    std::vector<Scalar> y;
    y.reserve(n);
    for (const auto& xi : x.entries()) {
        y.push_back((total - xi) / divisor);
    }
    return sides_from_y(f, interval, x, clamp_to_range(Vec(std::move(y)), x));
}

VerifyReport verify(const DoublyStochasticMatrix& p, const FunctionSpec& f, const Interval& interval,
                    const SamplerConfig& sampler, std::size_t num_samples, std::uint64_t seed,
                    const ToleranceConfig& tol, unsigned threads) {
    require_floating(p, "verify");
    const SamplingBox box = sampling_box(interval, sampler.radius);
    const std::size_t n = p.n();
    const std::size_t shards = (num_samples + verify_shard_size - 1) / verify_shard_size;
    std::vector<ShardResult> results(shards);

    auto run_shard = [&](std::size_t s) {
        Rng rng = Rng::for_shard(seed, s);
        ShardResult& out = results[s];
        const std::size_t begin = s * verify_shard_size;
        const std::size_t end = std::min(num_samples, begin + verify_shard_size);
        for (std::size_t i = begin; i < end; ++i) {
            const Vec x = random_point(n, box, rng);
            const SideEvaluation eval = evaluate_sides(p, f, interval, x);
            const double gap = eval.gap.to_double();
            if (is_violation(eval, tol)) {
                ++out.violations;
            }
            if (!out.any || gap < out.min_gap) {
                out.any = true;
                out.min_gap = gap;
                out.argmin_x = x.to_doubles();
            }
        }
    };

    const unsigned workers = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(shards)));
    if (workers <= 1) {
        for (std::size_t s = 0; s < shards; ++s) {
            run_shard(s);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::exception_ptr> errors(workers);
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t s = next++; s < shards; s = next++) {
                        run_shard(s);
                    }
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto& t : pool) {
            t.join();
        }
        for (auto& e : errors) {
            if (e) {
                std::rethrow_exception(e);
            }
        }
    }

    VerifyReport report;
    report.samples = num_samples;
    bool any = false;
    for (const auto& r : results) {
        report.violations += r.violations;
        if (r.any && (!any || r.min_gap < report.min_gap)) {
            any = true;
            report.min_gap = r.min_gap;
            report.argmin_x = r.argmin_x;
        }
    }
    return report;
}

bool ViolationWitness::recheck(const ToleranceConfig& tol) const {
    const SideEvaluation again = evaluate_sides(matrix, function, interval, x);
    if (!is_violation(again, tol)) {
        return false;
    }
    const double a = again.gap.to_double();
    const double b = evaluation.gap.to_double();
    return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b));
}

std::optional<ViolationWitness> search_violation(const DoublyStochasticMatrix& p, const FunctionSpec& f,
                                                 const Interval& interval, std::size_t budget, std::uint64_t seed,
                                                 const ToleranceConfig& tol, const SamplerConfig& sampler) {
    require_floating(p, "search");
    if (budget == 0) {
        throw InvalidArgument("budget", "budget must be at least 1");
    }
    const SamplingBox box = sampling_box(interval, sampler.radius);
    const std::size_t n = p.n();
    Rng rng(seed);
    std::size_t used = 0;

    auto gap_at = [&](const std::vector<double>& x) -> std::optional<double> {
        if (used >= budget) {
            return std::nullopt;
        }
        ++used;
        return evaluate_sides(p, f, interval, Vec::from_doubles(x)).gap.to_double();
    };

    // One coordinate sweep of golden-section line searches; keeps a move only
    // when it lowers the gap.
    constexpr double inv_phi = 0.6180339887498949;
    constexpr int max_line_iterations = 32;
    auto refine = [&](std::vector<double>& x, double& gap) {
        for (std::size_t i = 0; i < n && used < budget; ++i) {
            double a = box.lo;
            double b = box.hi;
            std::vector<double> probe = x;
            double c = b - inv_phi * (b - a);
            double d = a + inv_phi * (b - a);
            probe[i] = c;
            auto fc = gap_at(probe);
            probe[i] = d;
            auto fd = gap_at(probe);
            if (!fc || !fd) {
                return;
            }
            for (int it = 0; it < max_line_iterations; ++it) {
                if (*fc < *fd) {
                    b = d;
                    d = c;
                    fd = fc;
                    c = b - inv_phi * (b - a);
                    probe[i] = c;
                    fc = gap_at(probe);
                } else {
                    a = c;
                    c = d;
                    fc = fd;
                    d = a + inv_phi * (b - a);
                    probe[i] = d;
                    fd = gap_at(probe);
                }
                if (!fc || !fd) {
                    break;
                }
            }
            const double candidate_point = (fc && fd && *fd < *fc) ? d : c;
            const double candidate_gap = (fc && fd && *fd < *fc) ? *fd : fc.value_or(gap);
            if (candidate_gap < gap) {
                x[i] = candidate_point;
                gap = candidate_gap;
            }
        }
    };

    while (used < budget) {
        std::vector<double> x(n);
        for (auto& xi : x) {
            xi = rng.uniform(box.lo, box.hi);
        }
        auto start = gap_at(x);
        if (!start) {
            break;
        }
        double gap = *start;
        refine(x, gap);
        Vec point = Vec::from_doubles(x);
        SideEvaluation eval = evaluate_sides(p, f, interval, point);
        if (is_violation(eval, tol)) {
            ViolationWitness witness{std::move(point), std::move(eval), p, f, interval};
            if (witness.recheck(tol)) {
                return witness;
            }
        }
    }
    return std::nullopt;
}

SchurForms schur_forms_check(const DoublyStochasticMatrix& p, const FunctionSpec& f, const Interval& interval,
                             const Vec& x, const ToleranceConfig& tol) {
    if (x.size() != p.n()) {
        throw DimensionError("x length differs from matrix order");
    }
    require_points_in(x, interval);
    const std::size_t n = p.n();
    const DoublyStochasticMatrix s_n = uniform(n, p.mode());
    const Vec px = clamp_to_range(p.matrix() * x, x);
    const Vec sx = clamp_to_range(s_n.matrix() * x, x);
    const Vec spx = clamp_to_range(s_n.matrix() * px, x);

    const Scalar f_px = F_of(f, interval, px);
    SchurForms forms{f_px - F_of(f, interval, sx), f_px - F_of(f, interval, spx), (spx - sx).max_abs(), false};
    if (forms.form_I_gap.is_exact()) {
        forms.forms_agree = forms.form_I_gap == forms.form_III_gap_at_Px;
    } else {
        const double a = forms.form_I_gap.to_double();
        const double b = forms.form_III_gap_at_Px.to_double();
        forms.forms_agree = std::abs(a - b) <= tol.gap_tol * (1.0 + std::abs(a) + std::abs(b)) * static_cast<double>(n);
    }
    return forms;
}

} // namespace convexity_gate

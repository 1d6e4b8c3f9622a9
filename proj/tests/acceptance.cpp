// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "convexity_gate/circulant.hpp"
#include "convexity_gate/hypothesis.hpp"
#include "convexity_gate/inequality.hpp"
#include "convexity_gate/random.hpp"
#include "oracles.hpp"

using namespace convexity_gate;

namespace {

Scalar r(long long num, long long den = 1) { return Scalar::ratio(num, den); }

struct Outcome {
    bool ok = true;
    std::string detail;

    void require(bool condition, const std::string& what) {
        if (!condition && ok) {
            ok = false;
            detail = what;
        }
    }
};

// Matrices used by the forward and contrapositive criteria, reused by the
// rank criterion.
std::vector<DoublyStochasticMatrix> sampled_matrices;

Vec random_rational_x(Rng& rng, std::size_t n) {
    std::vector<Scalar> x;
    for (std::size_t i = 0; i < n; ++i) x.push_back(r(rng.uniform_int(-119, 119), 12));
    return Vec(x);
}

CirculantWeights weights(std::initializer_list<Scalar> w) { return CirculantWeights(std::vector<Scalar>(w)); }

Outcome candidate_counts() {
    Outcome out;
    const long long expected[] = {0, 2, 12, 50, 180};
    for (std::size_t n = 1; n <= 5; ++n) {
        const auto brute = oracle::all_pairs(n).size();
        const BigInt formula = boost::multiprecision::pow(BigInt(3), static_cast<unsigned>(n)) -
                               2 * boost::multiprecision::pow(BigInt(2), static_cast<unsigned>(n)) + 1;
        out.require(BigInt(brute) == formula, "enumeration differs from 3^n - 2*2^n + 1 at n=" + std::to_string(n));
        out.require(candidate_count(n) == formula, "candidate_count wrong at n=" + std::to_string(n));
        out.require(formula == expected[n - 1], "formula value wrong at n=" + std::to_string(n));
        const auto visited = for_each_candidate_pair(n, [](const SubsetPair&) { return true; });
        out.require(visited == brute, "library enumeration count wrong at n=" + std::to_string(n));
    }
    return out;
}

Outcome circulant_equivalence() {
    Outcome out;
    std::size_t points_n4 = 0;
    std::size_t mismatches = 0;
    for (std::size_t n = 2; n <= 4; ++n) {
        for (const auto& ks : oracle::simplex_grid(n, 12)) {
            std::vector<Scalar> lambda;
            for (auto k : ks) lambda.push_back(r(k, 12));
            const CirculantWeights w(lambda);
            if (n == 4) ++points_n4;
            out.require(dft_spectrum(w).exact.has_value(), "exact spectrum unavailable");
            const bool closed = closed_form_check(w);
            const bool dft = is_invertible(w);
            const bool full_rank = rank(build_matrix(w).matrix()) == n;
            if (closed != dft || dft != full_rank) ++mismatches;
        }
    }
    out.require(points_n4 >= 455, "grid at n=4 has only " + std::to_string(points_n4) + " points");
    out.require(mismatches == 0, std::to_string(mismatches) + " mismatches");
    if (out.ok) out.detail = std::to_string(points_n4) + " points at n=4, 0 mismatches";
    return out;
}

Outcome degenerate_examples() {
    Outcome out;
    struct Case {
        CirculantWeights w;
        std::string failing;
        SubsetPair pair;
    };
    const Case cases[] = {
        {weights({r(1, 4), r(1, 6), r(1, 4), r(1, 3)}), "lambda1+lambda3 == lambda2+lambda4",
         SubsetPair(4, {1, 2}, {3, 4})},
        {weights({r(1, 3), r(1, 6), r(1, 3), r(1, 6)}), "(lambda1-lambda3)^2+(lambda2-lambda4)^2 == 0",
         SubsetPair(4, {1, 3}, {2, 4})},
    };
    for (const auto& c : cases) {
        const auto verdict = closed_form_verdict(c.w);
        out.require(!verdict.holds, "closed form unexpectedly holds");
        out.require(verdict.failing_clauses == std::vector<std::string>{c.failing}, "wrong failing clauses");
        const auto pair = n4_degenerate_witness(c.w);
        out.require(pair && *pair == c.pair, "wrong degenerate pair");
        const auto cert = check_pair(build_matrix(c.w), c.pair);
        out.require(cert && cert->mode() == Mode::exact && cert->residual_sq.is_zero(),
                    "check_pair did not certify with zero residual");
        out.require(cert && recheck(build_matrix(c.w), *cert), "certificate recheck failed");
    }
    return out;
}

Outcome forward_direction() {
    Outcome out;
    const Interval interval(-10, 10);
    const std::vector<FunctionSpec> convex{
        FunctionSpec::power(r(2)), FunctionSpec::power(r(4)), FunctionSpec::exp(), FunctionSpec::abs(),
        FunctionSpec::piecewise_linear({{r(-6), r(4)}, {r(-1), r(0)}, {r(1), r(1)}, {r(5), r(10)}},
                                       ConvexityClass::convex)};
    double min_gap = 0.0;
    for (std::uint64_t i = 0; i < 200; ++i) {
        const std::size_t n = 2 + i % 5;
        const std::size_t k = 1 + (i / 5) % n;
        const auto exact = sample_birkhoff(n, k, 1000 + i, Mode::exact);
        sampled_matrices.push_back(exact);
        const auto p = exact.converted(Mode::floating);
        for (std::size_t j = 0; j < convex.size(); ++j) {
            const auto rep = verify(p, convex[j], interval, {}, 100, 7000 + 10 * i + j);
            min_gap = std::min(min_gap, rep.min_gap);
            out.require(rep.samples == 100, "sample count wrong");
        }
    }
    out.require(min_gap >= -1e-10, "min gap " + std::to_string(min_gap));
    if (out.ok) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "min gap %.3g over 100000 evaluations", min_gap);
        out.detail = buf;
    }
    return out;
}

Outcome contrapositive_direction() {
    Outcome out;
    const Interval interval(-10, 10);
    const auto f = FunctionSpec::neg_square();
    const std::vector<DoublyStochasticMatrix> violated{
        validate(Mat::identity(2, Mode::exact)),
        build_matrix(weights({r(3, 4), r(1, 4)})),
        build_matrix(weights({r(1, 2), r(1, 3), r(1, 6)})),
    };
    double worst = -1e300;
    for (const auto& p : violated) {
        sampled_matrices.push_back(p);
        const auto w = search_violation(p.converted(Mode::floating), f, interval, 1000, 1);
        out.require(w.has_value(), "no witness found");
        if (!w) continue;
        out.require(w->recheck(), "witness failed re-evaluation");
        out.require(w->evaluation.gap.to_double() <= -0.5, "witness gap above -0.5");
        worst = std::max(worst, w->evaluation.gap.to_double());
    }
    for (std::size_t n = 2; n <= 6; ++n) {
        sampled_matrices.push_back(uniform(n));
        out.require(!search_violation(uniform(n, Mode::floating), f, interval, 1000, 1),
                    "witness reported for uniform(" + std::to_string(n) + ")");
    }
    if (out.ok) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "largest witness gap %.3g", worst);
        out.detail = buf;
    }
    return out;
}

Outcome leave_one_out() {
    Outcome out;
    Rng rng(606);
    const Interval interval(-10, 10);
    const std::vector<FunctionSpec> fs{FunctionSpec::power(r(2)), FunctionSpec::neg_square(), FunctionSpec::abs(),
                                       FunctionSpec::power(r(3))};
    for (std::size_t n = 2; n <= 6; ++n) {
        const auto p = build_matrix(leave_one_out_weights(n));
        for (int t = 0; t < 50; ++t) {
            const Vec x = random_rational_x(rng, n);
            for (const auto& f : fs) {
                const auto a = leave_one_out_sides(f, interval, x);
                const auto b = evaluate_sides(p, f, interval, x);
                out.require(a.lhs.is_exact() && a.lhs == b.lhs && a.rhs == b.rhs && a.gap == b.gap,
                            "sides differ at n=" + std::to_string(n));
            }
        }
    }
    const Vec x{r(1), r(2), r(3)};
    out.require(leave_one_out_sides(FunctionSpec::power(r(2)), interval, x).gap == r(1, 6), "worked case gap != 1/6");
    return out;
}

Outcome schur_reformulation() {
    Outcome out;
    Rng rng(707);
    const Interval interval(-10, 10);
    const std::vector<FunctionSpec> fs{FunctionSpec::power(r(2)), FunctionSpec::neg_square(), FunctionSpec::abs(),
                                       FunctionSpec::power(r(3))};
    for (int i = 0; i < 100; ++i) {
        const std::size_t n = 2 + static_cast<std::size_t>(i % 5);
        const auto p = sample_birkhoff(n, 1 + static_cast<std::size_t>(i % 4), 5000 + static_cast<std::uint64_t>(i),
                                       Mode::exact);
        const Vec x = random_rational_x(rng, n);
        const auto& f = fs[static_cast<std::size_t>(i) % fs.size()];
        const auto forms = schur_forms_check(p, f, interval, x);
        const auto sides = evaluate_sides(p, f, interval, x);
        out.require(forms.s_n_absorption_error.is_exact() && forms.s_n_absorption_error.is_zero(),
                    "absorption error nonzero");
        out.require(forms.form_I_gap == Scalar::from_int(static_cast<long long>(n), Mode::exact) * sides.gap,
                    "form I gap != n * gap");
        out.require(forms.form_I_gap == forms.form_III_gap_at_Px, "forms I and III differ");
    }
    return out;
}

Outcome rank_necessity() {
    Outcome out;
    std::size_t with_witness = 0;
    for (const auto& p : sampled_matrices) {
        const auto scan = scan_for_witness(p);
        if (scan.witness) {
            ++with_witness;
            out.require(scan.rank >= 2, "witness found for a rank " + std::to_string(scan.rank) + " matrix");
            out.require(recheck(p, *scan.witness), "witness failed recheck");
        }
    }
    for (std::size_t n = 2; n <= 6; ++n) {
        const auto scan = scan_for_witness(uniform(n));
        out.require(scan.rank == 1, "uniform rank != 1");
        out.require(!scan.witness, "uniform(" + std::to_string(n) + ") has a witness");
        out.require(BigInt(scan.pairs_checked) == candidate_count(n), "enumeration incomplete");
    }
    if (out.ok) {
        out.detail = std::to_string(sampled_matrices.size()) + " matrices, " + std::to_string(with_witness) +
                     " with witnesses";
    }
    return out;
}

Outcome determinant_closed_form() {
    Outcome out;
    Rng rng(909);
    for (int i = 0; i < 1000; ++i) {
        const Scalar l1 = r(rng.uniform_int(0, 60), rng.uniform_int(1, 60));
        const Scalar l2 = r(rng.uniform_int(0, 60), rng.uniform_int(1, 60));
        const Scalar l3 = r(rng.uniform_int(0, 60), rng.uniform_int(1, 60));
        const Mat m = case2_system_matrix(l1, l2, l3);
        oracle::QMatrix q(3, std::vector<oracle::Q>(3));
        for (std::size_t a = 0; a < 3; ++a)
            for (std::size_t b = 0; b < 3; ++b) q[a][b] = m(a, b).rational();
        // the system matrix itself, written out independently
        const auto l4 = l1.rational() + l3.rational() - l2.rational();
        const oracle::QMatrix written{{l1.rational(), l2.rational(), l3.rational()},
                                      {l2.rational(), l3.rational(), l4},
                                      {l3.rational(), l4, l1.rational()}};
        out.require(q == written, "system matrix differs from the written-out form");
        out.require(det3_case2(l1, l2, l3).rational() == oracle::cofactor_det(written), "determinant mismatch");
    }
    return out;
}

} // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double limit_seconds; // 0 means no limit
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "candidate count matches brute-force enumeration, n = 1..5", 1.0, candidate_counts},
        {2, "circulant closed form = DFT criterion = full rank on the 1/12 grid", 10.0, circulant_equivalence},
        {3, "n = 4 degenerate examples and their witness pairs", 0.0, degenerate_examples},
        {4, "convex functions never violate the inequality", 30.0, forward_direction},
        {5, "negative square is violated with certified witnesses", 0.0, contrapositive_direction},
        {6, "leave-one-out form equals the circulant form exactly", 0.0, leave_one_out},
        {7, "Schur reformulation identities hold exactly", 0.0, schur_reformulation},
        {8, "every matrix with a witness has rank >= 2", 0.0, rank_necessity},
        {9, "3x3 determinant closed form matches cofactor expansion", 0.0, determinant_closed_form},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.run();
        } catch (const std::exception& e) {
            out.ok = false;
            out.detail = std::string("exception: ") + e.what();
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (out.ok && c.limit_seconds > 0 && seconds >= c.limit_seconds) {
            out.ok = false;
            out.detail = "took longer than " + std::to_string(c.limit_seconds) + " s";
        }
        failures += out.ok ? 0 : 1;
        std::printf("criterion %d: %s  %s (%.3f s)%s%s\n", c.id, out.ok ? "PASS" : "FAIL", c.name, seconds,
                    out.detail.empty() ? "" : "  ", out.detail.c_str());
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}

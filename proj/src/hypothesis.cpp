#include "convexity_gate/hypothesis.hpp"

#include <algorithm>
#include <numeric>

#include "convexity_gate/random.hpp"

namespace convexity_gate {

SubsetPair::SubsetPair(std::size_t n, std::vector<std::size_t> a, std::vector<std::size_t> b)
    : n_(n), a_(std::move(a)), b_(std::move(b)) {
    if (a_.empty() || b_.empty()) {
        throw InvalidArgument("pair", "A and B must be nonempty");
    }
    std::sort(a_.begin(), a_.end());
    std::sort(b_.begin(), b_.end());
    std::vector<bool> used(n_ + 1, false);
    for (const auto* set : {&a_, &b_}) {
        for (std::size_t i : *set) {
            if (i < 1 || i > n_) {
                throw InvalidArgument("pair", "index " + std::to_string(i) + " outside {1.." + std::to_string(n_) + "}");
            }
            if (used[i]) {
                throw InvalidArgument("pair", "index " + std::to_string(i) + " repeated or shared by A and B");
            }
            used[i] = true;
        }
    }
}

Vec indicator_vector(const SubsetPair& pair, Mode mode) {
    std::vector<Scalar> v(pair.n(), Scalar::zero(mode));
    const Scalar one = Scalar::one(mode);
    const Scalar wa = one / Scalar::from_int(static_cast<long long>(pair.a_size()), mode);
    const Scalar wb = one / Scalar::from_int(static_cast<long long>(pair.b_size()), mode);
    for (std::size_t i : pair.a()) {
        v[i - 1] = wa;
    }
    for (std::size_t i : pair.b()) {
        v[i - 1] = -wb;
    }
    return Vec(std::move(v));
}

bool recheck(const DoublyStochasticMatrix& p, const WitnessCertificate& cert, const ToleranceConfig& tol) {
    if (cert.pair.n() != p.n() || cert.coeffs.size() != p.n() || cert.mode() != p.mode()) {
        return false;
    }
    const Vec target = indicator_vector(cert.pair, p.mode());
    const Vec diff = p.matrix() * cert.coeffs - target;
    if (p.mode() == Mode::exact) {
        return diff.norm_sq().is_zero();
    }
    return diff.norm() <= tol.residual_tol * (1.0 + target.norm());
}

std::optional<WitnessCertificate> check_pair(const DoublyStochasticMatrix& p, const SubsetPair& pair,
                                             const ToleranceConfig& tol) {
    if (pair.n() != p.n()) {
        throw DimensionError("pair order " + std::to_string(pair.n()) + " differs from matrix order " +
                             std::to_string(p.n()));
    }
    const Vec target = indicator_vector(pair, p.mode());
    LeastSquares solution = min_residual_solve(p.matrix(), target, tol);
    if (!residual_accepts(solution, target, tol)) {
        return std::nullopt;
    }
    return WitnessCertificate{pair, std::move(solution.coeffs), std::move(solution.residual_sq),
                              solution.residual_norm};
}

namespace {

// Emits all size-`count` subsets of `pool` in lexicographic order.
bool for_each_combination(const std::vector<std::size_t>& pool, std::size_t count, std::size_t start,
                          std::vector<std::size_t>& chosen, const std::function<bool()>& emit) {
    if (chosen.size() == count) {
        return emit();
    }
    const std::size_t needed = count - chosen.size();
    for (std::size_t i = start; i + needed <= pool.size(); ++i) {
        chosen.push_back(pool[i]);
        const bool go_on = for_each_combination(pool, count, i + 1, chosen, emit);
        chosen.pop_back();
        if (!go_on) {
            return false;
        }
    }
    return true;
}

struct PairEnumerator {
    std::size_t n;
    std::size_t total;
    const std::function<bool(const SubsetPair&)>& visit;
    std::uint64_t visited = 0;

    // Depth-first over sorted prefixes, emitting each prefix before its
    // extensions, which is exactly lexicographic order on sorted sets.
    bool over_a(std::vector<std::size_t>& a, std::size_t start) {
        if (!a.empty() && !with_a(a)) {
            return false;
        }
        if (a.size() + 1 == total) {
            return true;
        }
        for (std::size_t i = start; i <= n; ++i) {
            a.push_back(i);
            const bool go_on = over_a(a, i + 1);
            a.pop_back();
            if (!go_on) {
                return false;
            }
        }
        return true;
    }

    bool with_a(const std::vector<std::size_t>& a) {
        std::vector<std::size_t> rest;
        for (std::size_t i = 1; i <= n; ++i) {
            if (!std::binary_search(a.begin(), a.end(), i)) {
                rest.push_back(i);
            }
        }
        std::vector<std::size_t> b;
        return for_each_combination(rest, total - a.size(), 0, b, [&] {
            ++visited;
            return visit(SubsetPair(n, a, b));
        });
    }
};

} // namespace

std::uint64_t for_each_candidate_pair(std::size_t n, const std::function<bool(const SubsetPair&)>& visit) {
    PairEnumerator e{n, 0, visit};
    for (std::size_t total = 2; total <= n; ++total) {
        e.total = total;
        std::vector<std::size_t> a;
        if (!e.over_a(a, 1)) {
            break;
        }
    }
    return e.visited;
}

WitnessScan scan_for_witness(const DoublyStochasticMatrix& p, const ToleranceConfig& tol) {
    WitnessScan scan;
    const std::size_t n = p.n();
    scan.rank = rank(p.matrix(), tol);
    if (n < 2) {
        return scan;
    }
    if (scan.rank == n) {
        scan.rank_shortcut = true;
        scan.pairs_checked = 1;
        scan.witness = check_pair(p, SubsetPair(n, {1}, {2}), tol);
        return scan;
    }
    if (n > max_enumeration_order) {
        throw InvalidArgument("n", "enumeration over all pairs is limited to n <= " +
                                       std::to_string(max_enumeration_order) + "; supply an explicit pair");
    }
    // Rank-1 matrices span only the all-ones direction, which never contains
    // an indicator vector, but they are still enumerated so the count holds.
    const ColumnSpace space(p.matrix(), tol);
    scan.pairs_checked = for_each_candidate_pair(n, [&](const SubsetPair& pair) {
        if (!space.contains(indicator_vector(pair, p.mode()))) {
            return true;
        }
        scan.witness = check_pair(p, pair, tol);
        return !scan.witness.has_value();
    });
    return scan;
}

std::optional<WitnessCertificate> find_witness(const DoublyStochasticMatrix& p, const ToleranceConfig& tol) {
    return scan_for_witness(p, tol).witness;
}

BigInt candidate_count(std::size_t n) {
    BigInt three = boost::multiprecision::pow(BigInt(3), static_cast<unsigned>(n));
    BigInt two = boost::multiprecision::pow(BigInt(2), static_cast<unsigned>(n));
    return three - 2 * two + 1;
}

std::vector<DoublyStochasticMatrix> open_problem_candidates(std::span<const DoublyStochasticMatrix> family,
                                                            const ToleranceConfig& tol) {
    std::vector<DoublyStochasticMatrix> kept;
    for (const auto& p : family) {
        if (rank(p.matrix(), tol) < 2) {
            continue;
        }
        if (!find_witness(p, tol)) {
            kept.push_back(p);
        }
    }
    return kept;
}

namespace {

// Averaging within the blocks of a random partition of a random relabelling.
Mat block_average(std::size_t n, Rng& rng, Mode mode) {
    std::vector<std::size_t> labels(n);
    std::iota(labels.begin(), labels.end(), std::size_t{0});
    for (std::size_t i = n; i > 1; --i) {
        std::swap(labels[i - 1], labels[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i) - 1))]);
    }
    std::vector<std::size_t> block_of(n);
    std::size_t block = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0 && rng.uniform_int(0, 2) == 0) {
            ++block;
        }
        block_of[labels[i]] = block;
    }
    std::vector<std::size_t> block_size(block + 1, 0);
    for (std::size_t b : block_of) {
        ++block_size[b];
    }
    std::vector<Scalar> e(n * n, Scalar::zero(mode));
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            if (block_of[r] == block_of[c]) {
                e[r * n + c] =
                    Scalar::one(mode) / Scalar::from_int(static_cast<long long>(block_size[block_of[r]]), mode);
            }
        }
    }
    return Mat(n, n, std::move(e));
}

DoublyStochasticMatrix block_mixture(std::size_t n, Rng& rng, Mode mode, const ToleranceConfig& tol) {
    const std::size_t terms = 2;
    Scalar total = Scalar::zero(mode);
    std::vector<Scalar> weights;
    std::vector<Mat> parts;
    for (std::size_t t = 0; t < terms; ++t) {
        weights.push_back(Scalar::from_int(rng.uniform_int(1, 100), mode));
        total += weights.back();
        parts.push_back(block_average(n, rng, mode));
    }
    std::vector<Scalar> e(n * n, Scalar::zero(mode));
    for (std::size_t t = 0; t < terms; ++t) {
        const Scalar w = weights[t] / total;
        for (std::size_t i = 0; i < n * n; ++i) {
            e[i] += w * parts[t].entries()[i];
        }
    }
    return validate(Mat(n, n, std::move(e)), tol);
}

} // namespace

std::vector<DoublyStochasticMatrix> explore_open_problem(std::size_t n, std::size_t num_samples, std::uint64_t seed,
                                                         const ToleranceConfig& tol, Mode mode) {
    if (n < 2) {
        throw InvalidArgument("n", "the explorer needs n >= 2");
    }
    std::vector<DoublyStochasticMatrix> family;
    family.reserve(num_samples);
    for (std::size_t s = 0; s < num_samples; ++s) {
        Rng rng = Rng::for_shard(seed, s);
        if (s == 0) {
            family.push_back(uniform(n, mode));
        } else if (s % 2 == 1) {
            const auto k = static_cast<std::size_t>(rng.uniform_int(1, static_cast<std::int64_t>(n)));
            family.push_back(sample_birkhoff(n, k, rng.next(), mode));
        } else {
            family.push_back(block_mixture(n, rng, mode, tol));
        }
    }
    return open_problem_candidates(family, tol);
}

} // namespace convexity_gate

#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "convexity_gate/circulant.hpp"
#include "convexity_gate/functions.hpp"
#include "convexity_gate/hypothesis.hpp"
#include "convexity_gate/inequality.hpp"
#include "convexity_gate/stochastic.hpp"

namespace convexity_gate {

using Json = nlohmann::ordered_json;

/// How input numbers pick their mode. In `automatic`, rational strings
/// ("p/q", "3") are exact, decimals are floating, bare JSON integers follow
/// the others (exact if alone), and exact plus decimal inputs together are
/// rejected. `floating` converts everything; `exact` rejects decimals.
enum class ModeRequest { automatic, exact, floating };

ModeRequest mode_request_from_string(std::string_view text);

/// Throws ModeMismatch naming `field` when the inputs cannot share a mode.
std::vector<Scalar> read_scalars(std::span<const Json> values, ModeRequest request, std::string_view field);

/// Comma-separated numbers, e.g. "1/4,1/6,1/4,1/3" or "0.5,0.5".
std::vector<Scalar> parse_scalar_list(std::string_view csv, ModeRequest request, std::string_view field);

/// Exact values become "p/q" strings, floating values JSON numbers.
Json to_json(const Scalar& s);
Json to_json(const Vec& v);

/// { "n": int, "entries": [[...], ...] }
Json matrix_to_json(const DoublyStochasticMatrix& p);
/// Accepts nested rows or a flat row-major list; validates the result.
DoublyStochasticMatrix matrix_from_json(const Json& j, ModeRequest request = ModeRequest::automatic,
                                        const ToleranceConfig& tol = {});

/// { "A": [...], "B": [...], "coeffs": [...], "residual": "0" | number, "mode": ... }
Json witness_to_json(const WitnessCertificate& w);
WitnessCertificate witness_from_json(const Json& j);

/// { "min_gap": number, "argmin_x": [...], "violations": int, "samples": int, "mode": "float" }
Json report_to_json(const VerifyReport& r);
VerifyReport report_from_json(const Json& j);

struct ViolationPoint {
    Vec x;
    SideEvaluation evaluation;
};

/// { "x": [...], "y": [...], "lhs": ..., "rhs": ..., "gap": ..., "mode": ... }
Json violation_to_json(const ViolationWitness& w);
ViolationPoint violation_from_json(const Json& j);

/// [lo, hi] with "-inf" / "inf" string sentinels for infinite ends.
Json interval_to_json(const Interval& interval);
Interval interval_from_json(const Json& j);
/// "lo,hi", e.g. "-10,10" or "0,inf".
Interval parse_interval(std::string_view text);

struct ParsedFunction {
    FunctionSpec function;
    std::optional<Interval> interval;
};

/// { "kind": ..., "params": {...}, "interval": [lo, hi], "convexity": label }.
/// "interval" and "convexity" are optional.
Json function_to_json(const FunctionSpec& f, const std::optional<Interval>& interval = std::nullopt);
ParsedFunction function_from_json(const Json& j);

/// Catalog shorthand: "negsquare", "exp", "abs", "power:P", "affine:A:B".
FunctionSpec function_from_shorthand(std::string_view text);

} // namespace convexity_gate

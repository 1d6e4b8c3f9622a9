#include "convexity_gate/json_io.hpp"

#include <cmath>
#include <limits>

namespace convexity_gate {

namespace {

enum class TokenKind { exact, floating, neutral };

struct Token {
    TokenKind kind;
    Scalar value;
};

Token classify(const Json& j, std::string_view field) {
    if (j.is_string()) {
        Scalar s = Scalar::parse(j.get<std::string>());
        return {s.is_exact() ? TokenKind::exact : TokenKind::floating, std::move(s)};
    }
    if (j.is_number_integer()) {
        return {TokenKind::neutral, Scalar(Rational(j.get<long long>()))};
    }
    if (j.is_number_unsigned()) {
        return {TokenKind::neutral, Scalar(Rational(j.get<unsigned long long>()))};
    }
    if (j.is_number_float()) {
        return {TokenKind::floating, Scalar(j.get<double>())};
    }
    throw InvalidArgument(std::string(field), "expected a number or a rational string, got " + j.dump());
}

[[noreturn]] void bad(std::string_view field, const std::string& what) {
    throw InvalidArgument(std::string(field), what);
}

const Json& member(const Json& j, const char* key, std::string_view field) {
    if (!j.is_object() || !j.contains(key)) {
        bad(field, std::string("missing \"") + key + "\"");
    }
    return j.at(key);
}

std::vector<Json> as_list(const Json& j, std::string_view field) {
    if (!j.is_array()) {
        bad(field, "expected an array");
    }
    return std::vector<Json>(j.begin(), j.end());
}

Scalar read_one(const Json& j, std::string_view field) {
    std::vector<Json> one{j};
    return read_scalars(one, ModeRequest::automatic, field).front();
}

std::vector<std::size_t> read_indices(const Json& j, std::string_view field) {
    std::vector<std::size_t> out;
    for (const auto& v : as_list(j, field)) {
        if (!v.is_number_integer() || v.get<long long>() < 1) {
            bad(field, "indices must be positive integers");
        }
        out.push_back(v.get<std::size_t>());
    }
    return out;
}

Json bound_to_json(double b) {
    if (b == std::numeric_limits<double>::infinity()) {
        return "inf";
    }
    if (b == -std::numeric_limits<double>::infinity()) {
        return "-inf";
    }
    return b;
}

double bound_from_text(std::string_view text) {
    if (text == "inf" || text == "+inf") {
        return std::numeric_limits<double>::infinity();
    }
    if (text == "-inf") {
        return -std::numeric_limits<double>::infinity();
    }
    return Scalar::parse(text).to_double();
}

double bound_from_json(const Json& j) {
    if (j.is_string()) {
        return bound_from_text(j.get<std::string>());
    }
    if (j.is_number()) {
        return j.get<double>();
    }
    bad("interval", "interval bounds must be numbers or \"-inf\"/\"inf\"");
}

Mode mode_from_json(const Json& j, std::string_view field) {
    const auto text = member(j, "mode", field).get<std::string>();
    if (text == "exact") return Mode::exact;
    if (text == "float") return Mode::floating;
    bad(field, "mode must be \"exact\" or \"float\"");
}

} // namespace

ModeRequest mode_request_from_string(std::string_view text) {
    if (text == "auto") return ModeRequest::automatic;
    if (text == "exact") return ModeRequest::exact;
    if (text == "float") return ModeRequest::floating;
    throw InvalidArgument("mode", "mode must be auto, exact or float");
}

std::vector<Scalar> read_scalars(std::span<const Json> values, ModeRequest request, std::string_view field) {
    std::vector<Token> tokens;
    tokens.reserve(values.size());
    bool has_exact = false;
    bool has_float = false;
    for (const auto& v : values) {
        tokens.push_back(classify(v, field));
        has_exact |= tokens.back().kind == TokenKind::exact;
        has_float |= tokens.back().kind == TokenKind::floating;
    }
    Mode mode = Mode::exact;
    switch (request) {
    case ModeRequest::floating:
        mode = Mode::floating;
        break;
    case ModeRequest::exact:
        if (has_float) {
            throw ModeMismatch(std::string(field), "decimal values cannot be used in exact mode");
        }
        break;
    case ModeRequest::automatic:
        if (has_exact && has_float) {
            throw ModeMismatch(std::string(field), "rational strings and decimal values are mixed");
        }
        mode = has_float ? Mode::floating : Mode::exact;
        break;
    }
    std::vector<Scalar> out;
    out.reserve(tokens.size());
    for (auto& t : tokens) {
        out.push_back(t.value.converted(mode));
    }
    return out;
}

std::vector<Scalar> parse_scalar_list(std::string_view csv, ModeRequest request, std::string_view field) {
    std::vector<Json> items;
    std::size_t start = 0;
    while (start <= csv.size()) {
        const std::size_t comma = csv.find(',', start);
        const std::string_view item = csv.substr(start, comma == std::string_view::npos ? csv.npos : comma - start);
        items.emplace_back(std::string(item));
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    try {
        return read_scalars(items, request, field);
    } catch (const ModeMismatch&) {
        throw;
    } catch (const Error& e) {
        throw InvalidArgument(std::string(field), e.what());
    }
}

Json to_json(const Scalar& s) {
    if (s.is_exact()) {
        return s.to_string();
    }
    // -0.0 would otherwise print as "-0.0"
    return s.is_zero() ? 0.0 : s.to_double();
}

Json to_json(const Vec& v) {
    Json out = Json::array();
    for (const auto& s : v.entries()) {
        out.push_back(to_json(s));
    }
    return out;
}

Json matrix_to_json(const DoublyStochasticMatrix& p) {
    Json rows = Json::array();
    for (std::size_t r = 0; r < p.n(); ++r) {
        rows.push_back(to_json(p.matrix().row(r)));
    }
    Json out;
    out["n"] = p.n();
    out["entries"] = std::move(rows);
    return out;
}

DoublyStochasticMatrix matrix_from_json(const Json& j, ModeRequest request, const ToleranceConfig& tol) {
    const Json& entries = member(j, "entries", "matrix");
    std::vector<Json> flat;
    std::size_t rows = 0;
    std::size_t cols = 0;
    for (const auto& row : as_list(entries, "matrix")) {
        if (row.is_array()) {
            if (rows > 0 && row.size() != cols) {
                bad("matrix", "ragged matrix rows");
            }
            cols = row.size();
            ++rows;
            flat.insert(flat.end(), row.begin(), row.end());
        } else {
            flat.push_back(row);
        }
    }
    std::size_t n = 0;
    if (j.contains("n")) {
        if (!j.at("n").is_number_integer() || j.at("n").get<long long>() < 1) {
            bad("matrix", "\"n\" must be a positive integer");
        }
        n = j.at("n").get<std::size_t>();
    }
    if (rows == 0) {
        // flat row-major list
        if (n == 0) {
            const auto root = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(flat.size()))));
            n = root;
        }
        rows = n;
        cols = n;
    }
    if (flat.empty() || rows * cols != flat.size()) {
        bad("matrix", "entry count does not match the matrix shape");
    }
    if (n != 0 && (rows != n || cols != n)) {
        bad("matrix", "\"n\" disagrees with the entries");
    }
    auto values = read_scalars(flat, request, "matrix");
    return validate(Mat(rows, cols, std::move(values)), tol);
}

Json witness_to_json(const WitnessCertificate& w) {
    Json out;
    out["A"] = w.pair.a();
    out["B"] = w.pair.b();
    out["coeffs"] = to_json(w.coeffs);
    if (w.mode() == Mode::exact) {
        out["residual"] = w.residual_sq.to_string();
    } else {
        out["residual"] = w.residual_norm;
    }
    out["mode"] = std::string(to_string(w.mode()));
    return out;
}

WitnessCertificate witness_from_json(const Json& j) {
    const Mode mode = mode_from_json(j, "witness");
    const ModeRequest request = mode == Mode::exact ? ModeRequest::exact : ModeRequest::floating;
    auto coeffs = read_scalars(as_list(member(j, "coeffs", "witness"), "witness"), request, "witness");
    const std::size_t n = coeffs.size();
    SubsetPair pair(n, read_indices(member(j, "A", "witness"), "witness"),
                    read_indices(member(j, "B", "witness"), "witness"));
    std::vector<Json> residual{member(j, "residual", "witness")};
    Scalar r = read_scalars(residual, request, "witness").front();
    Scalar residual_sq = r;
    double norm = r.to_double();
    if (mode == Mode::floating) {
        residual_sq = r * r;
    } else {
        norm = std::sqrt(r.to_double());
    }
    return WitnessCertificate{std::move(pair), Vec(std::move(coeffs)), std::move(residual_sq), norm};
}

Json report_to_json(const VerifyReport& r) {
    Json out;
    out["min_gap"] = r.min_gap;
    out["argmin_x"] = r.argmin_x;
    out["violations"] = r.violations;
    out["samples"] = r.samples;
    out["mode"] = "float";
    return out;
}

VerifyReport report_from_json(const Json& j) {
    VerifyReport r;
    r.min_gap = read_one(member(j, "min_gap", "report"), "report").to_double();
    for (const auto& v : as_list(member(j, "argmin_x", "report"), "report")) {
        r.argmin_x.push_back(read_one(v, "report").to_double());
    }
    r.violations = member(j, "violations", "report").get<std::size_t>();
    if (j.contains("samples")) {
        r.samples = j.at("samples").get<std::size_t>();
    }
    return r;
}

Json violation_to_json(const ViolationWitness& w) {
    Json out;
    out["x"] = to_json(w.x);
    out["y"] = to_json(w.evaluation.y);
    out["lhs"] = to_json(w.evaluation.lhs);
    out["rhs"] = to_json(w.evaluation.rhs);
    out["gap"] = to_json(w.evaluation.gap);
    out["mode"] = std::string(to_string(w.x.mode()));
    return out;
}

ViolationPoint violation_from_json(const Json& j) {
    const Mode mode = mode_from_json(j, "violation");
    const ModeRequest request = mode == Mode::exact ? ModeRequest::exact : ModeRequest::floating;
    auto list = [&](const char* key) {
        return Vec(read_scalars(as_list(member(j, key, "violation"), "violation"), request, "violation"));
    };
    auto one = [&](const char* key) {
        std::vector<Json> v{member(j, key, "violation")};
        return read_scalars(v, request, "violation").front();
    };
    return ViolationPoint{list("x"), SideEvaluation{one("lhs"), one("rhs"), one("gap"), list("y")}};
}

Json interval_to_json(const Interval& interval) {
    return Json::array({bound_to_json(interval.lo()), bound_to_json(interval.hi())});
}

Interval interval_from_json(const Json& j) {
    if (!j.is_array() || j.size() != 2) {
        bad("interval", "interval must be [lo, hi]");
    }
    return Interval(bound_from_json(j[0]), bound_from_json(j[1]));
}

Interval parse_interval(std::string_view text) {
    const auto comma = text.find(',');
    if (comma == std::string_view::npos) {
        bad("interval", "interval must be given as lo,hi");
    }
    try {
        return Interval(bound_from_text(text.substr(0, comma)), bound_from_text(text.substr(comma + 1)));
    } catch (const Error& e) {
        bad("interval", e.what());
    }
}

namespace {

Json params_to_json(const FunctionSpec& f);

Json function_node_to_json(const FunctionSpec& f) {
    Json out;
    out["kind"] = std::string(f.kind());
    out["params"] = params_to_json(f);
    out["convexity"] = std::string(to_string(f.convexity()));
    return out;
}

Json params_to_json(const FunctionSpec& f) {
    Json p = Json::object();
    const auto& node = f.node();
    if (const auto* pw = std::get_if<fn::Power>(&node)) {
        p["p"] = to_json(pw->p);
    } else if (const auto* af = std::get_if<fn::Affine>(&node)) {
        p["a"] = to_json(af->a);
        p["b"] = to_json(af->b);
    } else if (const auto* pl = std::get_if<fn::PiecewiseLinear>(&node)) {
        Json points = Json::array();
        for (std::size_t i = 0; i < pl->xs.size(); ++i) {
            points.push_back(Json::array({to_json(pl->xs[i]), to_json(pl->ys[i])}));
        }
        p["points"] = std::move(points);
    } else if (const auto* poly = std::get_if<fn::Polynomial>(&node)) {
        Json c = Json::array();
        for (const auto& s : poly->coeffs) {
            c.push_back(to_json(s));
        }
        p["coeffs"] = std::move(c);
    } else if (const auto* sc = std::get_if<fn::Scaled>(&node)) {
        p["factor"] = to_json(sc->factor);
        p["inner"] = function_node_to_json(*sc->inner);
    } else if (const auto* sum = std::get_if<fn::Sum>(&node)) {
        Json terms = Json::array();
        for (const auto& t : sum->terms) {
            terms.push_back(function_node_to_json(t));
        }
        p["terms"] = std::move(terms);
    }
    return p;
}

FunctionSpec function_node_from_json(const Json& j) {
    if (!j.is_object()) {
        bad("function", "function spec must be an object");
    }
    const auto kind = member(j, "kind", "function").get<std::string>();
    const Json params = j.contains("params") ? j.at("params") : Json::object();
    auto param = [&](const char* key) { return read_one(member(params, key, "function"), "function"); };

    std::optional<FunctionSpec> f;
    if (kind == "power") {
        f = FunctionSpec::power(param("p"));
    } else if (kind == "exp") {
        f = FunctionSpec::exp();
    } else if (kind == "abs") {
        f = FunctionSpec::abs();
    } else if (kind == "negsquare" || kind == "neg_square") {
        f = FunctionSpec::neg_square();
    } else if (kind == "affine") {
        f = FunctionSpec::affine(param("a"), param("b"));
    } else if (kind == "piecewise_linear") {
        std::vector<Json> flat;
        for (const auto& pt : as_list(member(params, "points", "function"), "function")) {
            if (!pt.is_array() || pt.size() != 2) {
                bad("function", "each point must be [x, y]");
            }
            flat.push_back(pt[0]);
            flat.push_back(pt[1]);
        }
        auto values = read_scalars(flat, ModeRequest::automatic, "function");
        std::vector<std::pair<Scalar, Scalar>> points;
        for (std::size_t i = 0; i + 1 < values.size(); i += 2) {
            points.emplace_back(values[i], values[i + 1]);
        }
        f = FunctionSpec::piecewise_linear(std::move(points));
    } else if (kind == "polynomial") {
        f = FunctionSpec::polynomial(
            read_scalars(as_list(member(params, "coeffs", "function"), "function"), ModeRequest::automatic,
                         "function"));
    } else if (kind == "scaled") {
        f = FunctionSpec::scaled(function_node_from_json(member(params, "inner", "function")), param("factor"));
    } else if (kind == "sum") {
        std::vector<FunctionSpec> terms;
        for (const auto& t : as_list(member(params, "terms", "function"), "function")) {
            terms.push_back(function_node_from_json(t));
        }
        f = FunctionSpec::sum(std::move(terms));
    } else {
        bad("function", "unknown function kind '" + kind + "'");
    }
    if (j.contains("convexity")) {
        f = f->with_convexity(convexity_from_string(j.at("convexity").get<std::string>()));
    }
    return *f;
}

} // namespace

Json function_to_json(const FunctionSpec& f, const std::optional<Interval>& interval) {
    Json out = function_node_to_json(f);
    if (interval) {
        out["interval"] = interval_to_json(*interval);
    }
    return out;
}

ParsedFunction function_from_json(const Json& j) {
    ParsedFunction parsed{function_node_from_json(j), std::nullopt};
    if (j.contains("interval")) {
        parsed.interval = interval_from_json(j.at("interval"));
        parsed.function.check_within(*parsed.interval);
    }
    return parsed;
}

FunctionSpec function_from_shorthand(std::string_view text) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const auto colon = text.find(':', start);
        parts.emplace_back(text.substr(start, colon == std::string_view::npos ? text.npos : colon - start));
        if (colon == std::string_view::npos) {
            break;
        }
        start = colon + 1;
    }
    const std::string& kind = parts.front();
    auto arg = [&](std::size_t i) {
        if (parts.size() <= i) {
            bad("function", "'" + kind + "' needs more parameters");
        }
        return Scalar::parse(parts[i]);
    };
    auto arity = [&](std::size_t n) {
        if (parts.size() != n + 1) {
            bad("function", "'" + kind + "' takes " + std::to_string(n) + " parameter(s)");
        }
    };
    if (kind == "negsquare") {
        arity(0);
        return FunctionSpec::neg_square();
    }
    if (kind == "exp") {
        arity(0);
        return FunctionSpec::exp();
    }
    if (kind == "abs") {
        arity(0);
        return FunctionSpec::abs();
    }
    if (kind == "power") {
        arity(1);
        return FunctionSpec::power(arg(1));
    }
    if (kind == "affine") {
        arity(2);
        return FunctionSpec::affine(arg(1), arg(2));
    }
    bad("function", "unknown function '" + std::string(text) + "'");
}

} // namespace convexity_gate

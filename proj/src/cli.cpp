#include "convexity_gate/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <regex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "convexity_gate/json_io.hpp"

namespace convexity_gate {

namespace {

struct Options {
    std::string mode = "auto";
    std::optional<std::uint64_t> seed;
    std::optional<double> rank_tol;
    std::optional<double> residual_tol;
    std::optional<double> gap_tol;
    std::optional<double> stochastic_tol;

    std::string matrix;
    std::string function;
    std::string interval;
    std::string weights;
    std::string pair_a;
    std::string pair_b;
    std::size_t n = 0;
    std::size_t samples = 1000;
    std::size_t budget = 1000;
    double radius = 10.0;
};

ToleranceConfig tolerances(const Options& o) {
    ToleranceConfig tol;
    if (o.rank_tol) tol.rank_tol = *o.rank_tol;
    if (o.residual_tol) tol.residual_tol = *o.residual_tol;
    if (o.gap_tol) tol.gap_tol = *o.gap_tol;
    if (o.stochastic_tol) tol.stochastic_tol = *o.stochastic_tol;
    tol.validate();
    return tol;
}

std::uint64_t require_seed(const Options& o) {
    if (!o.seed) {
        throw InvalidArgument("seed", "--seed is required for this subcommand");
    }
    return *o.seed;
}

unsigned worker_count() {
    unsigned n = std::max(1U, std::thread::hardware_concurrency());
    if (const char* cap = std::getenv("CONVEXITY_GATE_THREADS")) {
        char* end = nullptr;
        const unsigned long v = std::strtoul(cap, &end, 10);
        if (end == cap || *end != '\0' || v == 0) {
            throw InvalidArgument("CONVEXITY_GATE_THREADS", "must be a positive integer");
        }
        n = std::min<unsigned>(n, static_cast<unsigned>(std::min<unsigned long>(v, 1024)));
    }
    return n;
}

bool looks_inline(const std::string& text) {
    const auto pos = text.find_first_not_of(" \t\r\n");
    return pos != std::string::npos && (text[pos] == '{' || text[pos] == '[');
}

Json parse_json_text(const std::string& text, const char* field) {
    try {
        return Json::parse(text);
    } catch (const Json::exception& e) {
        throw InvalidArgument(field, std::string("malformed JSON: ") + e.what());
    }
}

Json load_json(const std::string& value, const char* field) {
    if (value.empty()) {
        throw InvalidArgument(field, std::string("--") + field + " is required");
    }
    if (looks_inline(value)) {
        return parse_json_text(value, field);
    }
    std::ifstream in(value);
    if (!in) {
        throw InvalidArgument(field, "cannot read file '" + value + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_json_text(buffer.str(), field);
}

DoublyStochasticMatrix load_matrix(const Options& o, const ToleranceConfig& tol) {
    Json j = load_json(o.matrix, "matrix");
    if (j.is_array()) {
        j = Json{{"entries", j}};
    }
    return matrix_from_json(j, mode_request_from_string(o.mode), tol);
}

ParsedFunction load_function(const Options& o) {
    if (o.function.empty()) {
        throw InvalidArgument("function", "--function is required");
    }
    if (looks_inline(o.function) || std::filesystem::is_regular_file(o.function)) {
        return function_from_json(load_json(o.function, "function"));
    }
    return ParsedFunction{function_from_shorthand(o.function), std::nullopt};
}

Interval resolve_interval(const Options& o, const ParsedFunction& f) {
    Interval interval = Interval::real_line();
    if (!o.interval.empty()) {
        interval = parse_interval(o.interval);
    } else if (f.interval) {
        interval = *f.interval;
    }
    f.function.check_within(interval);
    return interval;
}

std::vector<std::size_t> parse_indices(const std::string& text, const char* field) {
    std::vector<std::size_t> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        std::size_t used = 0;
        long long v = 0;
        try {
            v = std::stoll(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != item.size() || used == 0 || v < 1) {
            throw InvalidArgument(field, "expected comma-separated positive indices, got '" + text + "'");
        }
        out.push_back(static_cast<std::size_t>(v));
    }
    return out;
}

CirculantWeights load_weights(const Options& o, const ToleranceConfig& tol) {
    if (o.weights.empty()) {
        throw InvalidArgument("weights", "--weights is required");
    }
    return CirculantWeights(parse_scalar_list(o.weights, mode_request_from_string(o.mode), "weights"), tol);
}

Json pair_to_json(const SubsetPair& pair) { return Json{{"A", pair.a()}, {"B", pair.b()}}; }

int check_matrix(const Options& o, Json& out) {
    const ToleranceConfig tol = tolerances(o);
    const DoublyStochasticMatrix p = load_matrix(o, tol);
    out["n"] = p.n();
    out["mode"] = std::string(to_string(p.mode()));
    out["rank"] = rank(p.matrix(), tol);
    if (!o.pair_a.empty() || !o.pair_b.empty()) {
        if (o.pair_a.empty() || o.pair_b.empty()) {
            throw InvalidArgument(o.pair_a.empty() ? "pair-a" : "pair-b", "--pair-a and --pair-b go together");
        }
        const SubsetPair pair(p.n(), parse_indices(o.pair_a, "pair-a"), parse_indices(o.pair_b, "pair-b"));
        const auto cert = check_pair(p, pair, tol);
        out["holds"] = cert.has_value();
        out["witness"] = cert ? witness_to_json(*cert) : Json(nullptr);
        return cert ? 0 : 1;
    }
    const WitnessScan scan = scan_for_witness(p, tol);
    out["holds"] = scan.witness.has_value();
    out["rank_shortcut"] = scan.rank_shortcut;
    out["pairs_checked"] = scan.pairs_checked;
    out["witness"] = scan.witness ? witness_to_json(*scan.witness) : Json(nullptr);
    return scan.witness ? 0 : 1;
}

int check_circulant(const Options& o, Json& out) {
    const ToleranceConfig tol = tolerances(o);
    const CirculantWeights w = load_weights(o, tol);
    const std::size_t n = w.n();
    out["n"] = n;
    out["mode"] = std::string(to_string(w.mode()));
    out["weights"] = to_json(Vec(w.values()));

    if (n >= 2 && n <= 4) {
        const ClosedFormVerdict verdict = closed_form_verdict(w, tol);
        out["closed_form"] = Json{{"holds", verdict.holds}, {"failing_clauses", verdict.failing_clauses}};
    } else {
        out["closed_form"] = nullptr;
    }

    const DftSpectrum spectrum = dft_spectrum(w);
    Json values = Json::array();
    for (std::size_t k = 0; k < n; ++k) {
        values.push_back(Json{{"k", k},
                              {"re", spectrum.values[k].real()},
                              {"im", spectrum.values[k].imag()},
                              {"zero", spectrum.is_zero(k, tol)}});
    }
    const bool invertible = is_invertible(w, tol);
    out["dft"] = Json{{"invertible", invertible}, {"exact", spectrum.exact.has_value()}, {"spectrum", values}};

    const DoublyStochasticMatrix p = build_matrix(w, tol);
    out["rank"] = rank(p.matrix(), tol);

    if (n % 2 == 0) {
        const auto sums = even_n_degeneracy(w, tol);
        Json d{{"degenerate", sums.has_value()}};
        if (sums) {
            d["odd_sum"] = to_json(sums->odd_sum);
            d["even_sum"] = to_json(sums->even_sum);
        }
        out["even_degeneracy"] = d;
    } else {
        out["even_degeneracy"] = nullptr;
    }

    if (n == 4 && !invertible) {
        std::optional<SubsetPair> pair;
        try {
            pair = n4_degenerate_witness(w, tol);
        } catch (const CirculantError&) {
            pair.reset();
        }
        out["degenerate_witness"] = pair ? pair_to_json(*pair) : Json(nullptr);
    } else {
        out["degenerate_witness"] = nullptr;
    }
    out["holds"] = invertible;
    return invertible ? 0 : 1;
}

int build_circulant(const Options& o, Json& out) {
    const ToleranceConfig tol = tolerances(o);
    out = matrix_to_json(build_matrix(load_weights(o, tol), tol));
    return 0;
}

int verify_command(const Options& o, Json& out) {
    const ToleranceConfig tol = tolerances(o);
    const std::uint64_t seed = require_seed(o);
    if (o.samples == 0) {
        throw InvalidArgument("samples", "--samples must be at least 1");
    }
    const DoublyStochasticMatrix p = load_matrix(o, tol).converted(Mode::floating, tol);
    const ParsedFunction f = load_function(o);
    const Interval interval = resolve_interval(o, f);
    const VerifyReport report =
        verify(p, f.function, interval, SamplerConfig{o.radius}, o.samples, seed, tol, worker_count());
    out = report_to_json(report);
    return report.violations > 0 ? 1 : 0;
}

int search_command(const Options& o, Json& out) {
    const ToleranceConfig tol = tolerances(o);
    const std::uint64_t seed = require_seed(o);
    if (o.budget == 0) {
        throw InvalidArgument("budget", "--budget must be at least 1");
    }
    const DoublyStochasticMatrix p = load_matrix(o, tol).converted(Mode::floating, tol);
    const ParsedFunction f = load_function(o);
    const Interval interval = resolve_interval(o, f);
    const auto witness = search_violation(p, f.function, interval, o.budget, seed, tol, SamplerConfig{o.radius});
    out["found"] = witness.has_value();
    out["witness"] = witness ? violation_to_json(*witness) : Json(nullptr);
    return witness ? 1 : 0;
}

int count_candidates(const Options& o, Json& out) {
    const BigInt count = candidate_count(o.n);
    if (count <= BigInt(std::numeric_limits<std::int64_t>::max())) {
        out["count"] = count.convert_to<std::int64_t>();
    } else {
        out["count"] = count.str();
    }
    return 0;
}

int explore_open(const Options& o, Json& out) {
    const ToleranceConfig tol = tolerances(o);
    const std::uint64_t seed = require_seed(o);
    if (o.n < 2) {
        throw InvalidArgument("n", "--n must be at least 2");
    }
    const ModeRequest request = mode_request_from_string(o.mode);
    const Mode mode = request == ModeRequest::floating ? Mode::floating : Mode::exact;
    const auto found = explore_open_problem(o.n, o.samples, seed, tol, mode);
    Json list = Json::array();
    for (const auto& p : found) {
        list.push_back(matrix_to_json(p));
    }
    out["n"] = o.n;
    out["samples"] = o.samples;
    out["mode"] = std::string(to_string(mode));
    out["count"] = found.size();
    out["candidates"] = std::move(list);
    return found.empty() ? 0 : 1;
}

void emit(std::ostream& out, const Json& j) { out << j.dump(2) << '\n'; }

int fail(std::ostream& out, const std::string& field, const std::string& message) {
    emit(out, Json{{"error", Json{{"field", field}, {"message", message}}}});
    return 2;
}

/// Best guess at the flag a CLI11 message is about, e.g. "--seed".
std::string field_of(const std::string& message) {
    static const std::regex flag("--([A-Za-z0-9-]+)");
    std::smatch m;
    if (std::regex_search(message, m, flag)) {
        return m[1];
    }
    return "arguments";
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Doubly stochastic matrix hypothesis checks and convexity inequality tests", "convexity-gate"};
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default();

    auto add_common = [&](CLI::App* sub, bool stochastic) {
        sub->add_option("--mode", o.mode, "auto, exact or float")->check(CLI::IsMember({"auto", "exact", "float"}));
        sub->add_option("--rank-tol", o.rank_tol, "Pivot threshold in floating mode");
        sub->add_option("--residual-tol", o.residual_tol, "Span membership threshold in floating mode");
        sub->add_option("--gap-tol", o.gap_tol, "Violation threshold");
        sub->add_option("--stochastic-tol", o.stochastic_tol, "Row and column sum tolerance");
        if (stochastic) {
            sub->add_option("--seed", o.seed, "Random seed (required)");
        }
    };

    auto* check_matrix_cmd = app.add_subcommand("check-matrix", "Search for a witness pair (A, B)");
    add_common(check_matrix_cmd, false);
    check_matrix_cmd->add_option("--matrix", o.matrix, "JSON file or inline JSON");
    check_matrix_cmd->add_option("--pair-a", o.pair_a, "Check only this A, e.g. 1,3");
    check_matrix_cmd->add_option("--pair-b", o.pair_b, "Check only this B, e.g. 2,4");

    auto* check_circulant_cmd = app.add_subcommand("check-circulant", "Invertibility of a left-circulant matrix");
    add_common(check_circulant_cmd, false);
    check_circulant_cmd->add_option("--weights", o.weights, "Comma-separated weights, e.g. 1/4,1/6,1/4,1/3");

    auto* build_circulant_cmd = app.add_subcommand("build-circulant", "Print the left-circulant matrix");
    add_common(build_circulant_cmd, false);
    build_circulant_cmd->add_option("--weights", o.weights, "Comma-separated weights");

    auto* verify_cmd = app.add_subcommand("verify", "Sample the inequality at random points");
    add_common(verify_cmd, true);
    verify_cmd->add_option("--matrix", o.matrix, "JSON file or inline JSON");
    verify_cmd->add_option("--function", o.function, "Shorthand (negsquare, power:4, ...), JSON or file");
    verify_cmd->add_option("--interval", o.interval, "lo,hi (default: the function's, else the real line)");
    verify_cmd->add_option("--samples", o.samples, "Number of sample points");
    verify_cmd->add_option("--radius", o.radius, "Window width for infinite interval ends");

    auto* search_cmd = app.add_subcommand("search", "Search for a violation of the inequality");
    add_common(search_cmd, true);
    search_cmd->add_option("--matrix", o.matrix, "JSON file or inline JSON");
    search_cmd->add_option("--function", o.function, "Shorthand, JSON or file");
    search_cmd->add_option("--interval", o.interval, "lo,hi");
    search_cmd->add_option("--budget", o.budget, "Maximum number of gap evaluations");
    search_cmd->add_option("--radius", o.radius, "Window width for infinite interval ends");

    auto* count_cmd = app.add_subcommand("count-candidates", "Number of ordered disjoint nonempty pairs");
    count_cmd->add_option("--n", o.n, "Order")->required();

    auto* explore_cmd = app.add_subcommand("explore-open", "Look for rank >= 2 matrices without a witness");
    add_common(explore_cmd, true);
    explore_cmd->add_option("--n", o.n, "Order")->required();
    explore_cmd->add_option("--samples", o.samples, "Number of sampled matrices");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        err << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        err << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        return fail(out, field_of(e.what()), e.what());
    }

    Json result = Json::object();
    int code = 0;
    try {
        if (check_matrix_cmd->parsed()) {
            code = check_matrix(o, result);
        } else if (check_circulant_cmd->parsed()) {
            code = check_circulant(o, result);
        } else if (build_circulant_cmd->parsed()) {
            code = build_circulant(o, result);
        } else if (verify_cmd->parsed()) {
            code = verify_command(o, result);
        } else if (search_cmd->parsed()) {
            code = search_command(o, result);
        } else if (count_cmd->parsed()) {
            code = count_candidates(o, result);
        } else {
            code = explore_open(o, result);
        }
    } catch (const Error& e) {
        return fail(out, e.field(), e.what());
    } catch (const std::exception& e) {
        return fail(out, "arguments", e.what());
    }
    emit(out, result);
    return code;
}

} // namespace convexity_gate

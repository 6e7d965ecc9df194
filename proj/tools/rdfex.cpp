#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rdfex/chase.hpp"
#include "rdfex/consistency.hpp"
#include "rdfex/oracle.hpp"
#include "rdfex/query.hpp"
#include "rdfex/solution.hpp"
#include "rdfex/textio.hpp"

namespace {

// 0 success/consistent/true; 1 inconsistent/false/no solution; 2 usage or
// parse error; 3 inconclusive (sequence budget exhausted).
constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kUsage = 2;
constexpr int kInconclusive = 3;

std::optional<std::string> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

template <typename T>
std::optional<T> load(const rdfex::Parsed<T>& parsed) {
    if (!parsed.ok()) {
        std::cerr << rdfex::join_diagnostics(parsed.diagnostics);
        return std::nullopt;
    }
    return *parsed;
}

std::optional<rdfex::Setting> load_setting(const std::string& path) {
    auto text = read_file(path);
    if (!text) {
        std::cerr << "cannot read " << path << "\n";
        return std::nullopt;
    }
    return load(rdfex::parse_setting(*text, path));
}

std::optional<rdfex::SourceInstance> load_instance(const std::string& path,
                                                   const rdfex::RelationalSchema& schema) {
    auto text = read_file(path);
    if (!text) {
        std::cerr << "cannot read " << path << "\n";
        return std::nullopt;
    }
    return load(rdfex::parse_instance(*text, schema, path));
}

nlohmann::json witness_json(const rdfex::ValueWitness& w) {
    nlohmann::json j;
    j["sort"] = {{"type", w.type}, {"constructor", w.ctor}, {"predicate", w.pred}};
    j["pi"] = w.pi.steps;
    j["sigma"] = w.sigma;
    j["sigma_prime"] = w.sigma_prime;
    j["tableau"] = rdfex::render_instance(w.tableau);
    j["objects"] = {w.object1.describe(), w.object2.describe()};
    return j;
}

int run_check(const std::string& path, size_t max_sequences, bool exhaustive, bool as_json) {
    auto setting = load_setting(path);
    if (!setting) return kUsage;
    rdfex::CheckOptions opts;
    opts.max_sequences = max_sequences;
    opts.exhaustive = exhaustive;
    rdfex::Verdict v = rdfex::check_consistency(*setting, opts);

    if (as_json) {
        nlohmann::json j;
        j["verdict"] = v.status == rdfex::Verdict::Consistent     ? "consistent"
                       : v.status == rdfex::Verdict::Inconsistent ? "inconsistent"
                                                                  : "inconclusive";
        j["value_witnesses"] = nlohmann::json::array();
        for (const auto& w : v.value.witnesses) j["value_witnesses"].push_back(witness_json(w));
        j["mixed_cotype_witnesses"] = nlohmann::json::array();
        for (const auto& w : v.kind.mixed)
            j["mixed_cotype_witnesses"].push_back(rdfex::to_display(w));
        j["direct_clashes"] = nlohmann::json::array();
        for (const auto& w : v.kind.clashes) j["direct_clashes"].push_back(rdfex::to_display(w));
        std::cout << j.dump(2) << "\n";
    } else {
        switch (v.status) {
            case rdfex::Verdict::Consistent: std::cout << "consistent\n"; break;
            case rdfex::Verdict::Inconsistent: std::cout << "inconsistent\n"; break;
            case rdfex::Verdict::Inconclusive: std::cout << "inconclusive\n"; break;
        }
        for (const auto& w : v.value.witnesses) {
            std::cout << "value witness: " << rdfex::to_display(w) << "\n";
            std::cout << "witness tableau:\n" << rdfex::render_instance(w.tableau);
        }
        for (const auto& w : v.kind.mixed)
            std::cout << "node-kind witness: " << rdfex::to_display(w) << "\n";
        for (const auto& w : v.kind.clashes)
            std::cout << "direct kind clash: " << rdfex::to_display(w) << "\n";
    }
    switch (v.status) {
        case rdfex::Verdict::Consistent: return kOk;
        case rdfex::Verdict::Inconsistent: return kNegative;
        default: return kInconclusive;
    }
}

int run_chase(const std::string& setting_path, const std::string& instance_path) {
    auto setting = load_setting(setting_path);
    if (!setting) return kUsage;
    auto inst = load_instance(instance_path, setting->source);
    if (!inst) return kUsage;

    auto result = rdfex::core_pre_solution(*setting, *inst);
    if (auto* src = std::get_if<rdfex::SourceInconsistent>(&result)) {
        std::cerr << rdfex::NoSolution{*src}.describe() << "\n";
        return kNegative;
    }
    if (auto* kc = std::get_if<rdfex::KindClash>(&result)) {
        std::cerr << rdfex::NoSolution{*kc}.describe() << "\n";
        return kNegative;
    }
    const auto& g = std::get<rdfex::TypedGraph>(result);
    std::cout << rdfex::render_graph(g);
    auto violations = rdfex::check_pf(g, setting->shapes);
    for (const auto& v : violations) std::cerr << rdfex::to_display(v) << "\n";
    return violations.empty() ? kOk : kNegative;
}

int run_solve(const std::string& setting_path, const std::string& instance_path) {
    auto setting = load_setting(setting_path);
    if (!setting) return kUsage;
    auto inst = load_instance(instance_path, setting->source);
    if (!inst) return kUsage;

    auto result = rdfex::universal_solution(*setting, *inst);
    if (auto* err = std::get_if<rdfex::NoSolution>(&result)) {
        std::cerr << "no solution: " << err->describe() << "\n";
        return kNegative;
    }
    std::cout << rdfex::render_graph(std::get<rdfex::TypedGraph>(result));
    return kOk;
}

int run_query(const std::string& setting_path, const std::string& instance_path,
              const std::string& expr, bool boolean) {
    auto setting = load_setting(setting_path);
    if (!setting) return kUsage;
    auto inst = load_instance(instance_path, setting->source);
    if (!inst) return kUsage;
    auto parsed = rdfex::parse_nre(expr);
    auto nre = load(parsed);
    if (!nre) return kUsage;

    if (boolean) {
        auto result = rdfex::certain_bool(*setting, *inst, *nre);
        if (auto* err = std::get_if<rdfex::CertainError>(&result)) {
            if (auto* nf = std::get_if<rdfex::NotForward>(err)) {
                std::cerr << "not a forward expression: " << rdfex::to_string(nf->expr) << "\n";
                return kUsage;
            }
            std::cerr << "no solution: " << std::get<rdfex::NoSolution>(*err).describe() << "\n";
            return kNegative;
        }
        bool ans = std::get<bool>(result);
        std::cout << (ans ? "true" : "false") << "\n";
        return ans ? kOk : kNegative;
    }

    auto result = rdfex::certain_pairs(*setting, *inst, *nre);
    if (auto* err = std::get_if<rdfex::CertainError>(&result)) {
        if (auto* nf = std::get_if<rdfex::NotForward>(err)) {
            std::cerr << "not a forward expression: " << rdfex::to_string(nf->expr) << "\n";
            return kUsage;
        }
        std::cerr << "no solution: " << std::get<rdfex::NoSolution>(*err).describe() << "\n";
        return kNegative;
    }
    for (const auto& [n, m] : std::get<rdfex::NodePairs>(result))
        std::cout << "(" << rdfex::to_display(n) << ", " << rdfex::to_display(m) << ")\n";
    return kOk;
}

int run_validate(const std::string& setting_path, const std::string& graph_path) {
    auto setting = load_setting(setting_path);
    if (!setting) return kUsage;
    auto text = read_file(graph_path);
    if (!text) {
        std::cerr << "cannot read " << graph_path << "\n";
        return kUsage;
    }
    auto graph = load(rdfex::parse_graph(*text, graph_path));
    if (!graph) return kUsage;

    auto violations = rdfex::validate_shapes(*graph, setting->shapes);
    for (const auto& v : violations) std::cout << rdfex::to_display(v) << "\n";
    return violations.empty() ? kOk : kNegative;
}

int run_gen_sat(const std::string& cnf_path) {
    auto text = read_file(cnf_path);
    if (!text) {
        std::cerr << "cannot read " << cnf_path << "\n";
        return kUsage;
    }
    auto cnf = load(rdfex::parse_dimacs(*text, cnf_path));
    if (!cnf) return kUsage;
    std::cout << rdfex::render_setting(rdfex::sat_setting(*cnf));
    return kOk;
}

int run_counterexample(const std::string& path, size_t max_sequences) {
    auto setting = load_setting(path);
    if (!setting) return kUsage;
    rdfex::CheckOptions opts;
    opts.max_sequences = max_sequences;
    rdfex::Verdict v = rdfex::check_consistency(*setting, opts);
    if (v.status == rdfex::Verdict::Consistent) {
        std::cerr << "setting is consistent; no counterexample exists\n";
        return kOk;
    }
    if (v.status == rdfex::Verdict::Inconclusive) {
        std::cerr << "inconclusive under the sequence budget\n";
        return kInconclusive;
    }
    if (!v.value.witnesses.empty()) {
        std::cout << rdfex::render_instance(
            rdfex::materialize_counterexample(*setting, v.value.witnesses.front()));
        return kNegative;
    }
    // Kind-inconsistent only: the saturated single-constant instance realizes
    // every accessible pair, so the clash is reproduced on it.
    rdfex::SourceInstance inst;
    for (const auto& [rel, attrs] : setting->source.relations)
        inst.add(rel, rdfex::Tuple(attrs.size(), rdfex::Value::lit("c0")));
    std::cout << rdfex::render_instance(inst);
    return kNegative;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Relational-to-RDF exchange engine"};
    app.require_subcommand(1);

    std::string setting_path, instance_path, graph_path, cnf_path, expr;
    size_t max_sequences = 0;
    bool as_json = false, exhaustive = false, boolean = false;

    auto* check = app.add_subcommand("check", "Check consistency of a setting");
    check->add_option("setting", setting_path)->required();
    check->add_option("--max-sequences", max_sequences,
                      "Cap on access sequences per sort (0 = unlimited)");
    check->add_flag("--json", as_json, "Emit a structured report");
    check->add_flag("--exhaustive", exhaustive, "Collect every witness");

    auto* chase = app.add_subcommand("chase", "Materialize the core pre-solution");
    chase->add_option("setting", setting_path)->required();
    chase->add_option("instance", instance_path)->required();

    auto* solve = app.add_subcommand("solve", "Materialize the universal simulation solution");
    solve->add_option("setting", setting_path)->required();
    solve->add_option("instance", instance_path)->required();

    auto* query = app.add_subcommand("query", "Certain answers to a forward expression");
    query->add_option("setting", setting_path)->required();
    query->add_option("instance", instance_path)->required();
    query->add_option("-e,--expr", expr, "Nested regular expression")->required();
    query->add_flag("--boolean", boolean, "Boolean certain answer");

    auto* validate = app.add_subcommand("validate", "Validate a graph against the shape schema");
    validate->add_option("setting", setting_path)->required();
    validate->add_option("graph", graph_path)->required();

    auto* gen_sat = app.add_subcommand("gen-sat", "Emit the SAT-reduction setting for a CNF");
    gen_sat->add_option("cnf", cnf_path)->required();

    auto* counter = app.add_subcommand("counterexample",
                                       "Materialize an inconsistency witness instance");
    counter->add_option("setting", setting_path)->required();
    counter->add_option("--max-sequences", max_sequences,
                        "Cap on access sequences per sort (0 = unlimited)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    if (check->parsed()) return run_check(setting_path, max_sequences, exhaustive, as_json);
    if (chase->parsed()) return run_chase(setting_path, instance_path);
    if (solve->parsed()) return run_solve(setting_path, instance_path);
    if (query->parsed()) return run_query(setting_path, instance_path, expr, boolean);
    if (validate->parsed()) return run_validate(setting_path, graph_path);
    if (gen_sat->parsed()) return run_gen_sat(cnf_path);
    if (counter->parsed()) return run_counterexample(setting_path, max_sequences);
    return kUsage;
}

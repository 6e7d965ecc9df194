#include "rdfex/oracle.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "rdfex/chase.hpp"
#include "rdfex/textio.hpp"

namespace rdfex {

Setting sat_setting(const Cnf& cnf) {
    const int m = static_cast<int>(cnf.clauses.size());
    Setting s;

    auto rel = [&](const std::string& name) {
        s.source.relations[name] = {"A", "B"};
        s.source.fds.push_back({name, {"A"}, {"B"}});
    };
    rel("V_t");
    rel("V_f");
    for (int i = 1; i <= cnf.num_vars; ++i) rel("R_" + std::to_string(i));

    for (int j = 1; j <= m + 1; ++j) {
        std::string name = "f" + std::to_string(j);
        s.library.add(
            IriConstructor::simple(name, {"x"}, {std::to_string(j) + ":", ""}));
    }

    for (int j = 1; j <= m + 1; ++j) s.shapes.types.insert("T" + std::to_string(j));
    for (int j = 1; j <= m; ++j)
        s.shapes.delta[{"T" + std::to_string(j), ":a"}] =
            ShapeConstraint{ShapeTarget::of_type("T" + std::to_string(j + 1)), Mult::Star};
    s.shapes.delta[{"T" + std::to_string(m + 1), ":a"}] =
        ShapeConstraint{ShapeTarget::literal_mark(), Mult::One};

    auto app = [](const std::string& ctor, std::vector<std::string> vars) {
        IriApp a;
        a.ctor = ctor;
        a.vars = std::move(vars);
        return a;
    };
    std::string f_last = "f" + std::to_string(m + 1);
    std::vector<RawRule> rules;

    RawRule vt;
    vt.label = "VT";
    vt.body = {{"V_t", {"x", "y"}}};
    vt.heads = {HeadAtom::triple(app(f_last, {"x"}), ":a", Term::var("y"))};
    rules.push_back(vt);

    RawRule vf;
    vf.label = "VF";
    vf.body = {{"V_f", {"x", "y"}}};
    vf.heads = {HeadAtom::triple(app(f_last, {"x"}), ":a", Term::var("y"))};
    rules.push_back(vf);

    for (int j = 1; j <= m; ++j) {
        const auto& clause = cnf.clauses[j - 1];
        for (size_t k = 0; k < clause.size(); ++k) {
            int lit = clause[k];
            int var = lit > 0 ? lit : -lit;
            RawRule r;
            r.label = (lit > 0 ? "RT_" : "RF_") + std::to_string(j) + "_" + std::to_string(k + 1);
            r.body = {{"R_" + std::to_string(var), {"x", "y"}},
                      {lit > 0 ? "V_t" : "V_f", {"x", "y"}}};
            r.heads = {HeadAtom::triple(app("f" + std::to_string(j), {"x"}), ":a",
                                        Term::iri_app(app("f" + std::to_string(j + 1), {"x"})))};
            rules.push_back(std::move(r));
        }
    }

    RawRule st;
    st.label = "seedT";
    st.body = {{"V_t", {"x", "y"}}};
    st.heads = {HeadAtom::type_atom("T1", app("f1", {"x"}))};
    rules.push_back(st);

    RawRule sf;
    sf.label = "seedF";
    sf.body = {{"V_f", {"x", "y"}}};
    sf.heads = {HeadAtom::type_atom("T1", app("f1", {"x"}))};
    rules.push_back(sf);

    auto normalized = normalize_tgds(rules);
    s.tgds = std::get<std::vector<StTgd>>(std::move(normalized));
    return s;
}

std::optional<bool> brute_sat(const Cnf& cnf) {
    if (cnf.num_vars > 24) return std::nullopt;
    const uint64_t total = uint64_t{1} << cnf.num_vars;
    for (uint64_t bits = 0; bits < total; ++bits) {
        bool all = true;
        for (const auto& clause : cnf.clauses) {
            bool sat = false;
            for (int lit : clause) {
                int var = lit > 0 ? lit : -lit;
                bool val = (bits >> (var - 1)) & 1;
                if ((lit > 0) == val) {
                    sat = true;
                    break;
                }
            }
            if (!sat) {
                all = false;
                break;
            }
        }
        if (all) return true;
    }
    return false;
}

// ---------------------------------------------------------------------------
// Alternative solutions

namespace {

/// Cycle unrolling of the completion component: type-set nodes are duplicated
/// per level 0..depth, edges advance the level and saturate at the last one.
TypedGraph unrolled_solution(const TypedGraph& j0, const ShapeSchema& shapes, int depth) {
    auto front = frontier(j0, shapes);

    using Key = std::pair<TypeSet, int>;
    std::map<Key, Value> node_of;
    uint64_t next_iri = 0;
    uint64_t next_lit = 0;
    TypedGraph g = j0;

    std::deque<Key> work;
    auto materialize = [&](const TypeSet& x, int level) -> Value {
        Key key{x, level};
        auto it = node_of.find(key);
        if (it != node_of.end()) return it->second;
        Value node = Value::null_iri(next_iri++);
        node_of.emplace(key, node);
        for (const auto& t : x.types) g.add_type(node, t);
        work.push_back(key);
        return node;
    };

    for (const auto& [node, pred] : front) {
        TypeSet x;
        x.types = j0.types_of(node);
        TypeSet target = delta(x, pred, shapes);
        if (target.pure_literal()) g.add_triple(node, pred, Value::null_lit(next_lit++));
        else g.add_triple(node, pred, materialize(target, 0));
    }
    while (!work.empty()) {
        auto [x, level] = work.front();
        work.pop_front();
        Value node = node_of.at({x, level});
        for (const auto& p : req(x, shapes)) {
            TypeSet target = delta(x, p, shapes);
            if (target.pure_literal()) {
                g.add_triple(node, p, Value::null_lit(next_lit++));
            } else {
                int next_level = std::min(level + 1, depth);
                g.add_triple(node, p, materialize(target, next_level));
            }
        }
    }
    return g;
}

}  // namespace

std::variant<std::vector<TypedGraph>, NoSolution> alt_solutions(const Setting& s,
                                                                const SourceInstance& inst,
                                                                int depth) {
    auto solved = universal_solution(s, inst);
    if (auto* err = std::get_if<NoSolution>(&solved)) return *err;

    std::vector<TypedGraph> out;
    std::set<std::string> seen;
    auto push = [&](TypedGraph g) {
        std::string key = render_graph(g);
        if (seen.insert(key).second) out.push_back(std::move(g));
    };

    push(std::get<TypedGraph>(std::move(solved)));

    auto core = core_pre_solution(s, inst);
    TypedGraph j0 = std::get<TypedGraph>(std::move(core));
    auto completion = completion_graph(j0, s.shapes);
    TypedGraph unquotiented = j0;
    unquotiented.merge(std::get<TypedGraph>(completion));
    push(std::move(unquotiented));

    for (int k = 1; k <= depth; ++k) push(unrolled_solution(j0, s.shapes, k));
    return out;
}

bool satisfies_tgds(const Setting& s, const SourceInstance& inst, const TypedGraph& g) {
    for (const auto& tgd : s.tgds) {
        bool ok = true;
        for_each_body_match(tgd.body, inst, [&](const std::map<std::string, Value>& binding) {
            if (!ok) return;
            Value subject = head_value(s, Term::iri_app(tgd.head.subject), binding);
            if (tgd.head.kind == HeadAtom::Type) {
                if (!g.has_type(subject, tgd.head.type)) ok = false;
            } else {
                if (!g.has_triple(subject, tgd.head.pred,
                                  head_value(s, tgd.head.object, binding)))
                    ok = false;
            }
        });
        if (!ok) return false;
    }
    return true;
}

}  // namespace rdfex

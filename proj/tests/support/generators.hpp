#pragma once

// Seeded random generators for property and acceptance tests.

#include <random>
#include <string>
#include <vector>

#include "rdfex/constructor.hpp"
#include "rdfex/graph.hpp"
#include "rdfex/instance.hpp"
#include "rdfex/nre.hpp"
#include "rdfex/setting.hpp"

namespace testsupport {

using namespace rdfex;
using Rng = std::mt19937_64;

inline size_t pick(Rng& rng, size_t lo, size_t hi) {
    return std::uniform_int_distribution<size_t>(lo, hi)(rng);
}
inline bool coin(Rng& rng, double p = 0.5) {
    return std::uniform_real_distribution<double>(0, 1)(rng) < p;
}

/// Small random settings within the desk-scale oracle's class: up to three
/// relations of arity <= 3, up to two single-attribute FDs on distinct
/// relations, up to three types, up to four single-head full tgds.
inline Setting random_setting(Rng& rng) {
    Setting s;

    size_t n_rel = pick(rng, 1, 3);
    std::vector<std::string> rel_names;
    std::vector<size_t> arities;
    for (size_t i = 0; i < n_rel; ++i) {
        std::string name = "R" + std::to_string(i);
        size_t arity = pick(rng, 1, 3);
        std::vector<std::string> attrs;
        for (size_t a = 0; a < arity; ++a) attrs.push_back("a" + std::to_string(a));
        s.source.relations[name] = attrs;
        rel_names.push_back(name);
        arities.push_back(arity);
    }

    size_t n_fds = pick(rng, 0, 2);
    std::set<std::string> fd_rels;
    for (size_t i = 0; i < n_fds; ++i) {
        size_t r = pick(rng, 0, n_rel - 1);
        if (arities[r] < 2 || !fd_rels.insert(rel_names[r]).second) continue;
        size_t lhs = pick(rng, 0, arities[r] - 1);
        size_t rhs = pick(rng, 0, arities[r] - 1);
        if (lhs == rhs) rhs = (rhs + 1) % arities[r];
        s.source.fds.push_back({rel_names[r],
                                {"a" + std::to_string(lhs)},
                                {"a" + std::to_string(rhs)}});
    }

    size_t n_types = pick(rng, 1, 3);
    std::vector<std::string> types;
    for (size_t i = 0; i < n_types; ++i) {
        types.push_back("T" + std::to_string(i));
        s.shapes.types.insert(types.back());
    }

    size_t n_ctors = pick(rng, 1, 3);
    std::vector<std::string> ctors;
    for (size_t i = 0; i < n_ctors; ++i) {
        std::string name = "f" + std::to_string(i);
        size_t arity = pick(rng, 1, 2);
        std::vector<std::string> params;
        std::vector<std::string> segments{name + ":"};
        for (size_t a = 0; a < arity; ++a) {
            params.push_back("x" + std::to_string(a));
            segments.push_back(a + 1 < arity ? "-" : "");
        }
        s.library.add(IriConstructor::simple(name, params, segments));
        ctors.push_back(name);
    }

    std::vector<std::string> preds{":p", ":q", ":r"};
    static const Mult mults[] = {Mult::One, Mult::Opt, Mult::Star, Mult::Plus};
    size_t n_delta = pick(rng, 1, 5);
    for (size_t i = 0; i < n_delta; ++i) {
        std::string type = types[pick(rng, 0, types.size() - 1)];
        std::string pred = preds[pick(rng, 0, preds.size() - 1)];
        ShapeConstraint c;
        c.mult = mults[pick(rng, 0, 3)];
        c.target = coin(rng, 0.4) ? ShapeTarget::literal_mark()
                                  : ShapeTarget::of_type(types[pick(rng, 0, types.size() - 1)]);
        s.shapes.delta.emplace(std::make_pair(type, pred), c);  // keeps the first entry
    }

    size_t n_rules = pick(rng, 1, 4);
    std::vector<RawRule> rules;
    for (size_t i = 0; i < n_rules; ++i) {
        RawRule rule;
        rule.label = "g" + std::to_string(i);
        size_t n_atoms = pick(rng, 1, 2);
        std::vector<std::string> vars;
        for (size_t a = 0; a < n_atoms; ++a) {
            size_t r = pick(rng, 0, n_rel - 1);
            RelAtom atom;
            atom.relation = rel_names[r];
            for (size_t k = 0; k < arities[r]; ++k) {
                // Reusing variables across atoms creates joins.
                std::string v =
                    !vars.empty() && coin(rng, 0.5) ? vars[pick(rng, 0, vars.size() - 1)]
                                                    : "v" + std::to_string(vars.size());
                if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
                atom.vars.push_back(v);
            }
            rule.body.push_back(std::move(atom));
        }
        auto random_app = [&]() {
            const std::string& name = ctors[pick(rng, 0, ctors.size() - 1)];
            IriApp app;
            app.ctor = name;
            size_t arity = 0;
            for (const auto& c : s.library.ctors)
                if (c.name == name) arity = c.arity();
            for (size_t k = 0; k < arity; ++k) app.vars.push_back(vars[pick(rng, 0, vars.size() - 1)]);
            return app;
        };
        if (coin(rng, 0.35)) {
            rule.heads = {HeadAtom::type_atom(types[pick(rng, 0, types.size() - 1)], random_app())};
        } else {
            Term obj;
            double roll = std::uniform_real_distribution<double>(0, 1)(rng);
            if (roll < 0.45) obj = Term::var(vars[pick(rng, 0, vars.size() - 1)]);
            else if (roll < 0.6) obj = Term::lit("k" + std::to_string(pick(rng, 0, 1)));
            else obj = Term::iri_app(random_app());
            rule.heads = {HeadAtom::triple(random_app(), preds[pick(rng, 0, preds.size() - 1)],
                                           std::move(obj))};
        }
        rules.push_back(std::move(rule));
    }
    s.tgds = std::get<std::vector<StTgd>>(normalize_tgds(rules));
    return s;
}

/// Random concrete instance over a small constant domain; FD-violating draws
/// are filtered by the caller.
inline SourceInstance random_instance(Rng& rng, const RelationalSchema& schema,
                                      const std::vector<Value>& domain, size_t max_facts) {
    SourceInstance inst;
    size_t n = pick(rng, 0, max_facts);
    std::vector<std::string> rels;
    for (const auto& [name, attrs] : schema.relations) rels.push_back(name);
    if (rels.empty()) return inst;
    for (size_t i = 0; i < n; ++i) {
        const std::string& rel = rels[pick(rng, 0, rels.size() - 1)];
        Tuple t;
        for (size_t k = 0; k < schema.relations.at(rel).size(); ++k)
            t.push_back(domain[pick(rng, 0, domain.size() - 1)]);
        inst.add(rel, std::move(t));
    }
    return inst;
}

/// Random typed graph over a few predicates, with a mix of node kinds.
inline TypedGraph random_graph(Rng& rng, size_t max_nodes, size_t max_edges) {
    TypedGraph g;
    size_t n_nodes = pick(rng, 1, max_nodes);
    std::vector<Value> nodes;
    for (size_t i = 0; i < n_nodes; ++i) {
        switch (pick(rng, 0, 3)) {
            case 0: nodes.push_back(Value::iri("n" + std::to_string(i))); break;
            case 1: nodes.push_back(Value::null_iri(i)); break;
            case 2: nodes.push_back(Value::lit("v" + std::to_string(i))); break;
            default: nodes.push_back(Value::null_lit(i)); break;
        }
    }
    std::vector<std::string> preds{":p", ":q", ":r"};
    for (size_t i = 0, n = pick(rng, 0, max_edges); i < n; ++i) {
        const Value& s = nodes[pick(rng, 0, nodes.size() - 1)];
        if (s.is_literal()) continue;
        g.add_triple(s, preds[pick(rng, 0, preds.size() - 1)],
                     nodes[pick(rng, 0, nodes.size() - 1)]);
    }
    // Anchor isolated nodes so they stay part of the graph.
    for (const auto& v : nodes)
        if (!v.is_literal() && coin(rng, 0.3)) g.add_type(v, "T");
    return g;
}

/// A graph simulated by `h`: drop edges, then consistently relabel some
/// nodes as fresh nulls of the same kind.
inline TypedGraph simulated_variant(Rng& rng, const TypedGraph& h) {
    std::map<Value, Value> relabel;
    uint64_t next_null = 1000;  // clear of h's ids
    for (const auto& n : h.nodes()) {
        if (coin(rng, 0.4))
            relabel[n] = n.is_literal() ? Value::null_lit(next_null++)
                                        : Value::null_iri(next_null++);
        else
            relabel[n] = n;
    }
    TypedGraph g;
    for (const auto& t : h.triples()) {
        if (coin(rng, 0.3)) continue;  // dropping edges preserves simulation
        g.add_triple(relabel.at(t.subject), t.pred, relabel.at(t.object));
    }
    for (const auto& [node, types] : h.typing())
        for (const auto& ty : types)
            if (coin(rng, 0.7)) g.add_type(relabel.at(node), ty);
    return g;
}

/// Random forward NRE of bounded depth over the given predicates/nodes.
inline Nre random_forward_nre(Rng& rng, const std::vector<std::string>& preds,
                              const std::vector<Value>& constants, size_t depth) {
    if (depth == 0 || coin(rng, 0.3)) {
        switch (pick(rng, 0, 3)) {
            case 0: return Nre::eps();
            case 1: return Nre::any();
            case 2:
                if (!constants.empty() && coin(rng, 0.5))
                    return Nre::node_test(constants[pick(rng, 0, constants.size() - 1)]);
                [[fallthrough]];
            default: return Nre::predicate(preds[pick(rng, 0, preds.size() - 1)]);
        }
    }
    switch (pick(rng, 0, 3)) {
        case 0:
            return Nre::concat(random_forward_nre(rng, preds, constants, depth - 1),
                               random_forward_nre(rng, preds, constants, depth - 1));
        case 1:
            return Nre::alt(random_forward_nre(rng, preds, constants, depth - 1),
                            random_forward_nre(rng, preds, constants, depth - 1));
        case 2: return Nre::star(random_forward_nre(rng, preds, constants, depth - 1));
        default: return Nre::nest(random_forward_nre(rng, preds, constants, depth - 1));
    }
}

}  // namespace testsupport

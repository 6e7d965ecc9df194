#include "rdfex/solution.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <sstream>

namespace rdfex {

std::string to_display(const TypeSet& x) {
    std::string out = "{";
    bool first = true;
    for (const auto& t : x.types) {
        if (!first) out += ", ";
        out += t;
        first = false;
    }
    if (x.literal) {
        if (!first) out += ", ";
        out += "Literal";
    }
    return out + "}";
}

TypeSet delta(const TypeSet& x, const std::string& pred, const ShapeSchema& shapes) {
    TypeSet out;
    for (const auto& t : x.types) {
        const ShapeConstraint* c = shapes.constraint(t, pred);
        if (!c) continue;
        if (c->target.literal) out.literal = true;
        else out.types.insert(c->target.type);
    }
    return out;
}

std::set<std::string> req(const TypeSet& x, const ShapeSchema& shapes) {
    std::set<std::string> out;
    for (const auto& t : x.types)
        for (const auto& [key, c] : shapes.delta)
            if (key.first == t && mult_required(c.mult)) out.insert(key.second);
    return out;
}

std::set<std::pair<Value, std::string>> frontier(const TypedGraph& g, const ShapeSchema& shapes) {
    std::set<std::pair<Value, std::string>> out;
    for (const auto& [node, types] : g.typing()) {
        TypeSet x;
        x.types = types;
        for (const auto& p : req(x, shapes))
            if (!g.has_edge(node, p)) out.insert({node, p});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Completion graph

namespace {

struct NFixpoint {
    // Reachable type sets with their first discovery chain (innermost first).
    std::map<TypeSet, std::vector<std::pair<TypeSet, std::string>>> sets;
};

NFixpoint close_type_sets(const std::vector<TypeSet>& roots, const ShapeSchema& shapes) {
    NFixpoint out;
    std::deque<TypeSet> work;
    auto visit = [&](const TypeSet& x, std::vector<std::pair<TypeSet, std::string>> chain) {
        if (x.empty() || out.sets.count(x)) return;
        out.sets.emplace(x, std::move(chain));
        work.push_back(x);
    };
    for (const auto& r : roots) visit(r, {});
    // Only subsets of the finite type universe arise, so this terminates.
    while (!work.empty()) {
        TypeSet x = work.front();
        work.pop_front();
        auto chain = out.sets.at(x);
        for (const auto& p : req(x, shapes)) {
            auto next_chain = chain;
            next_chain.push_back({x, p});
            visit(delta(x, p, shapes), std::move(next_chain));
        }
    }
    return out;
}

}  // namespace

std::variant<TypedGraph, MixedKindSet> completion_graph(const TypedGraph& j0,
                                                        const ShapeSchema& shapes) {
    auto front = frontier(j0, shapes);
    std::vector<TypeSet> roots;
    for (const auto& [node, pred] : front) {
        TypeSet x;
        x.types = j0.types_of(node);
        roots.push_back(delta(x, pred, shapes));
    }
    NFixpoint n = close_type_sets(roots, shapes);
    for (const auto& [x, chain] : n.sets)
        if (x.mixed()) return MixedKindSet{x, chain};

    // One null IRI per type set, in canonical set order; literal leaves get
    // ids after them, one per creating edge.
    TypedGraph g;
    std::map<TypeSet, Value> set_node;
    uint64_t next_iri = 0;
    for (const auto& [x, chain] : n.sets) {
        if (x.pure_literal()) continue;
        Value node = Value::null_iri(next_iri++);
        for (const auto& t : x.types) g.add_type(node, t);
        set_node.emplace(x, node);
    }
    uint64_t next_lit = 0;

    for (const auto& [node, pred] : front) {
        TypeSet x;
        x.types = j0.types_of(node);
        TypeSet target = delta(x, pred, shapes);
        if (target.pure_literal()) g.add_triple(node, pred, Value::null_lit(next_lit++));
        else g.add_triple(node, pred, set_node.at(target));
    }
    for (const auto& [x, node] : set_node) {
        for (const auto& p : req(x, shapes)) {
            TypeSet target = delta(x, p, shapes);
            if (target.pure_literal()) g.add_triple(node, p, Value::null_lit(next_lit++));
            else g.add_triple(node, p, set_node.at(target));
        }
    }
    return g;
}

// ---------------------------------------------------------------------------
// Simulation

namespace {

bool kind_compatible(const Value& n, const Value& m) {
    if (n.is_literal() != m.is_literal()) return false;
    if (!n.is_null()) return n == m;
    return true;
}

/// Shared refinement loop: drops pairs whose left node has an unmatched edge;
/// when `symmetric`, checks both directions and keeps the relation symmetric.
std::set<std::pair<Value, Value>> refine(const TypedGraph& g, const TypedGraph& h,
                                         std::set<std::pair<Value, Value>> pairs,
                                         bool symmetric) {
    auto matched = [&pairs](const TypedGraph& a, const Value& n, const TypedGraph& b,
                            const Value& m) {
        for (const auto& [pred, objs] : a.out_edges(n)) {
            for (const Value& np : objs) {
                bool found = false;
                for (const Value& mp : b.objects(m, pred)) {
                    if (pairs.count({np, mp})) {
                        found = true;
                        break;
                    }
                }
                if (!found) return false;
            }
        }
        return true;
    };

    bool changed = true;
    while (changed) {
        std::vector<std::pair<Value, Value>> drop;
        for (const auto& [n, m] : pairs) {
            if (!matched(g, n, h, m) || (symmetric && !matched(h, m, g, n))) {
                drop.push_back({n, m});
                if (symmetric) drop.push_back({m, n});
            }
        }
        changed = false;
        for (const auto& p : drop) changed |= pairs.erase(p) > 0;
    }
    return pairs;
}

}  // namespace

SimulationRelation max_simulation(const TypedGraph& g, const TypedGraph& h) {
    std::set<std::pair<Value, Value>> pairs;
    auto h_nodes = h.nodes();
    for (const auto& n : g.nodes()) {
        if (!n.is_null()) {
            if (h_nodes.count(n)) pairs.insert({n, n});
            continue;
        }
        for (const auto& m : h_nodes)
            if (kind_compatible(n, m)) pairs.insert({n, m});
    }
    return SimulationRelation{refine(g, h, std::move(pairs), false)};
}

bool is_simulated(const TypedGraph& g, const TypedGraph& h) {
    SimulationRelation r = max_simulation(g, h);
    for (const auto& n : g.nodes()) {
        bool found = false;
        for (const auto& [a, b] : r.pairs) {
            if (a == n) {
                found = true;
                break;
            }
        }
        if (!found) return false;
    }
    return true;
}

TypedGraph bisim_quotient(const TypedGraph& g) {
    // Partition refinement on edge signatures. Non-null nodes are bisimilar
    // only to themselves and start in singleton blocks; nulls start in one
    // block per kind and split until every block's members carry the same
    // (predicate, target-block) edge sets. The maximal bisimulation here is
    // the maximal symmetric self-simulation, which coincides with strong
    // bisimilarity, so the coarsest stable partition is exactly its set of
    // classes.
    std::set<Value> nodes = g.nodes();
    std::map<Value, int> block;
    int next_block = 0;
    int lit_block = -1, iri_block = -1;
    for (const auto& n : nodes) {
        if (!n.is_null()) {
            block[n] = next_block++;
        } else if (n.is_literal()) {
            if (lit_block == -1) lit_block = next_block++;
            block[n] = lit_block;
        } else {
            if (iri_block == -1) iri_block = next_block++;
            block[n] = iri_block;
        }
    }

    using Signature = std::pair<int, std::set<std::pair<std::string, int>>>;
    bool changed = true;
    while (changed) {
        changed = false;
        std::map<Signature, std::vector<Value>> groups;
        for (const auto& n : nodes) {
            if (!n.is_null()) continue;
            Signature sig{block.at(n), {}};
            for (const auto& [pred, objs] : g.out_edges(n))
                for (const auto& o : objs) sig.second.insert({pred, block.at(o)});
            groups[sig].push_back(n);
        }
        // A block splits when its members fall into several signature groups;
        // each group then gets a fresh id.
        std::map<int, int> group_count;
        for (const auto& [sig, members] : groups) ++group_count[sig.first];
        int fresh = next_block;
        for (const auto& [sig, members] : groups) {
            if (group_count[sig.first] == 1) continue;
            int id = fresh++;
            for (const auto& m : members) block[m] = id;
            changed = true;
        }
        next_block = fresh;
    }

    // Lowest-id member represents each null block.
    std::map<int, Value> rep;
    for (const auto& n : nodes) {
        if (!n.is_null()) continue;
        auto [it, inserted] = rep.emplace(block.at(n), n);
        if (!inserted && n < it->second) it->second = n;
    }
    auto canon = [&](const Value& v) {
        if (!v.is_null()) return v;
        return rep.at(block.at(v));
    };

    TypedGraph out;
    for (const auto& t : g.triples()) out.add_triple(canon(t.subject), t.pred, canon(t.object));
    for (const auto& [node, types] : g.typing())
        for (const auto& ty : types) out.add_type(canon(node), ty);
    return out;
}

// ---------------------------------------------------------------------------
// Universal solution

std::string NoSolution::describe() const {
    std::ostringstream os;
    if (auto* src = std::get_if<SourceInconsistent>(&evidence)) {
        if (src->failure)
            os << "source instance violates fd " << src->failure->fd.relation << ": "
               << to_display(src->failure->clash.first) << " vs "
               << to_display(src->failure->clash.second);
        else
            os << "source instance is not concrete";
    } else if (auto* kc = std::get_if<KindClash>(&evidence)) {
        os << "type propagation forces "
           << (kc->type.empty() ? std::string("the literal mark") : "type " + kc->type)
           << " onto " << kc->node << " via " << kc->pred;
    } else if (auto* pf = std::get_if<std::vector<ShapeViolation>>(&evidence)) {
        os << "core pre-solution violates predicate functionality:";
        for (const auto& v : *pf) os << "\n  " << to_display(v);
    } else if (auto* mixed = std::get_if<MixedKindSet>(&evidence)) {
        os << "completion requires the mixed type set " << to_display(mixed->set);
    }
    return os.str();
}

std::variant<TypedGraph, NoSolution> universal_solution(const Setting& s,
                                                        const SourceInstance& inst) {
    auto core = core_pre_solution(s, inst);
    if (auto* src = std::get_if<SourceInconsistent>(&core)) return NoSolution{*src};
    if (auto* kc = std::get_if<KindClash>(&core)) return NoSolution{*kc};
    TypedGraph j0 = std::move(std::get<TypedGraph>(core));

    auto pf = check_pf(j0, s.shapes);
    if (!pf.empty()) return NoSolution{std::move(pf)};

    auto completion = completion_graph(j0, s.shapes);
    if (auto* mixed = std::get_if<MixedKindSet>(&completion)) return NoSolution{*mixed};

    TypedGraph combined = std::move(j0);
    combined.merge(std::get<TypedGraph>(completion));
    return bisim_quotient(combined);
}

}  // namespace rdfex

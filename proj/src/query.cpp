#include "rdfex/query.hpp"

#include <deque>
#include <map>

namespace rdfex {

NodePairs eval_nre(const Nre& e, const TypedGraph& g) {
    switch (e.kind) {
        case Nre::Eps: {
            NodePairs out;
            for (const auto& n : g.nodes()) out.insert({n, n});
            return out;
        }
        case Nre::Pred: {
            NodePairs out;
            for (const auto& t : g.triples())
                if (t.pred == e.pred) out.insert({t.subject, t.object});
            return out;
        }
        case Nre::Any: {
            NodePairs out;
            for (const auto& t : g.triples()) out.insert({t.subject, t.object});
            return out;
        }
        case Nre::NodeTest: {
            NodePairs out;
            if (!e.test.is_null() && g.nodes().count(e.test)) out.insert({e.test, e.test});
            return out;
        }
        case Nre::Nest: {
            NodePairs inner = eval_nre(e.kids[0], g);
            NodePairs out;
            for (const auto& [n, m] : inner) out.insert({n, n});
            return out;
        }
        case Nre::Star: {
            NodePairs inner = eval_nre(e.kids[0], g);
            std::map<Value, std::vector<Value>> adj;
            for (const auto& [n, m] : inner) adj[n].push_back(m);
            NodePairs out;
            for (const auto& n : g.nodes()) {
                // BFS closure from each node; the reflexive pair comes free.
                std::set<Value> seen{n};
                std::deque<Value> work{n};
                while (!work.empty()) {
                    Value cur = work.front();
                    work.pop_front();
                    auto it = adj.find(cur);
                    if (it == adj.end()) continue;
                    for (const auto& next : it->second)
                        if (seen.insert(next).second) work.push_back(next);
                }
                for (const auto& m : seen) out.insert({n, m});
            }
            return out;
        }
        case Nre::Inv: {
            NodePairs inner = eval_nre(e.kids[0], g);
            NodePairs out;
            for (const auto& [n, m] : inner) out.insert({m, n});
            return out;
        }
        case Nre::Concat: {
            NodePairs lhs = eval_nre(e.kids[0], g);
            NodePairs rhs = eval_nre(e.kids[1], g);
            std::map<Value, std::vector<Value>> by_first;
            for (const auto& [n, m] : rhs) by_first[n].push_back(m);
            NodePairs out;
            for (const auto& [n, mid] : lhs) {
                auto it = by_first.find(mid);
                if (it == by_first.end()) continue;
                for (const auto& m : it->second) out.insert({n, m});
            }
            return out;
        }
        case Nre::Union: {
            NodePairs out = eval_nre(e.kids[0], g);
            NodePairs rhs = eval_nre(e.kids[1], g);
            out.insert(rhs.begin(), rhs.end());
            return out;
        }
    }
    return {};
}

namespace {

std::variant<TypedGraph, CertainError> solve_for_query(const Setting& s,
                                                       const SourceInstance& inst, const Nre& e) {
    if (!is_forward(e)) return CertainError{NotForward{e}};
    auto solved = universal_solution(s, inst);
    if (auto* err = std::get_if<NoSolution>(&solved)) return CertainError{*err};
    return std::get<TypedGraph>(std::move(solved));
}

}  // namespace

std::variant<NodePairs, CertainError> certain_pairs(const Setting& s, const SourceInstance& inst,
                                                    const Nre& e) {
    auto solved = solve_for_query(s, inst, e);
    if (auto* err = std::get_if<CertainError>(&solved)) return *err;
    NodePairs all = eval_nre(e, std::get<TypedGraph>(solved));
    NodePairs out;
    for (const auto& [n, m] : all)
        if (!n.is_null() && !m.is_null()) out.insert({n, m});
    return out;
}

std::variant<bool, CertainError> certain_bool(const Setting& s, const SourceInstance& inst,
                                              const Nre& e) {
    auto solved = solve_for_query(s, inst, e);
    if (auto* err = std::get_if<CertainError>(&solved)) return *err;
    return !eval_nre(e, std::get<TypedGraph>(solved)).empty();
}

}  // namespace rdfex

#include "rdfex/consistency.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <sstream>

#include "rdfex/chase.hpp"

namespace rdfex {

namespace {

struct AccessEdge {
    std::string label;        // tgd
    std::string pred;         // p_i
    std::string target_type;  // T_i
    std::string target_ctor;  // f_i
};

/// Seeds and edges of the access graph over (type, ctor) states.
struct AccessGraph {
    // label, T_0, f_0 for every type-atom head
    std::vector<std::tuple<std::string, std::string, std::string>> seeds;
    // (T_{i-1}, f_{i-1}) -> possible steps
    std::map<std::pair<std::string, std::string>, std::vector<AccessEdge>> edges;
};

AccessGraph build_access_graph(const Setting& s) {
    AccessGraph g;
    for (const auto& tgd : s.tgds)
        if (tgd.head.kind == HeadAtom::Type)
            g.seeds.push_back({tgd.label, tgd.head.type, tgd.head.subject.ctor});

    // A triple head Triple(f(..), p, g(..)) steps from (T, f) to (T', g)
    // whenever delta(T, p) targets the type T'.
    for (const auto& tgd : s.tgds) {
        if (tgd.head.kind != HeadAtom::Triple || tgd.head.object.kind != Term::App) continue;
        const std::string& f = tgd.head.subject.ctor;
        const std::string& p = tgd.head.pred;
        for (const auto& [key, c] : s.shapes.delta) {
            if (key.second != p || c.target.literal) continue;
            g.edges[{key.first, f}].push_back(
                {tgd.label, p, c.target.type, tgd.head.object.app.ctor});
        }
    }
    for (auto& [state, edges] : g.edges)
        std::sort(edges.begin(), edges.end(),
                  [](const AccessEdge& a, const AccessEdge& b) { return a.label < b.label; });
    std::sort(g.seeds.begin(), g.seeds.end());
    return g;
}

}  // namespace

std::set<std::pair<std::string, std::string>> access_pairs(const Setting& s) {
    AccessGraph g = build_access_graph(s);
    std::set<std::pair<std::string, std::string>> reached;
    std::deque<std::pair<std::string, std::string>> work;
    for (const auto& [label, t, f] : g.seeds)
        if (reached.insert({t, f}).second) work.push_back({t, f});
    while (!work.empty()) {
        auto state = work.front();
        work.pop_front();
        auto it = g.edges.find(state);
        if (it == g.edges.end()) continue;
        for (const auto& e : it->second)
            if (reached.insert({e.target_type, e.target_ctor}).second)
                work.push_back({e.target_type, e.target_ctor});
    }
    return reached;
}

bool access_sequences(const Setting& s, const std::string& type, const std::string& ctor,
                      size_t limit, const std::function<bool(const AccessSequence&)>& sink) {
    AccessGraph g = build_access_graph(s);

    // States from which (type, ctor) stays reachable; prunes dead branches of
    // the iterative deepening below. Over-approximate for elementary
    // sequences, which is all pruning needs.
    std::set<std::pair<std::string, std::string>> useful;
    {
        bool grew = true;
        useful.insert({type, ctor});
        while (grew) {
            grew = false;
            for (const auto& [state, edges] : g.edges) {
                if (useful.count(state)) continue;
                for (const auto& e : edges) {
                    if (useful.count({e.target_type, e.target_ctor})) {
                        useful.insert(state);
                        grew = true;
                        break;
                    }
                }
            }
        }
    }

    size_t emitted = 0;
    bool stopped = false;

    AccessSequence cur;
    std::set<std::string> used;

    // Emits all elementary sequences of exactly target_len steps, in
    // lexicographic label order, by extending cur from the given state.
    std::function<bool(const std::pair<std::string, std::string>&, size_t)> extend =
        [&](const std::pair<std::string, std::string>& state, size_t target_len) -> bool {
        if (cur.steps.size() == target_len) {
            if (state.first == type && state.second == ctor) {
                ++emitted;
                if (!sink(cur) || (limit && emitted >= limit)) {
                    stopped = true;
                    return false;
                }
            }
            return true;
        }
        auto it = g.edges.find(state);
        if (it == g.edges.end()) return true;
        for (const auto& e : it->second) {
            if (used.count(e.label)) continue;
            std::pair<std::string, std::string> next{e.target_type, e.target_ctor};
            if (!useful.count(next)) continue;
            used.insert(e.label);
            cur.steps.push_back(e.label);
            cur.type_chain.push_back(e.target_type);
            cur.ctor_chain.push_back(e.target_ctor);
            cur.pred_chain.push_back(e.pred);
            bool keep_going = extend(next, target_len);
            cur.steps.pop_back();
            cur.type_chain.pop_back();
            cur.ctor_chain.pop_back();
            cur.pred_chain.pop_back();
            used.erase(e.label);
            if (!keep_going) return false;
        }
        return true;
    };

    // Elementary sequences never repeat a label, so their length is bounded
    // by the number of tgds.
    for (size_t len = 1; len <= s.tgds.size() && !stopped; ++len) {
        for (const auto& [label, t0, f0] : g.seeds) {
            std::pair<std::string, std::string> state{t0, f0};
            if (!useful.count(state)) continue;
            cur = AccessSequence{};
            used.clear();
            cur.steps.push_back(label);
            cur.type_chain.push_back(t0);
            cur.ctor_chain.push_back(f0);
            used.insert(label);
            if (!extend(state, len)) break;
        }
    }
    return !stopped;
}

std::vector<AccessSequence> access_sequences(const Setting& s, const std::string& type,
                                             const std::string& ctor, size_t limit) {
    std::vector<AccessSequence> out;
    access_sequences(s, type, ctor, limit, [&out](const AccessSequence& seq) {
        out.push_back(seq);
        return true;
    });
    return out;
}

std::vector<ContentiousPair> contentious(const Setting& s) {
    auto pairs = access_pairs(s);
    std::vector<ContentiousPair> out;
    // Producers of p-triples per subject constructor.
    for (const auto& [key, c] : s.shapes.delta) {
        if (!mult_functional(c.mult)) continue;
        const auto& [type, pred] = key;
        std::set<std::string> ctors;
        for (const auto& tgd : s.tgds)
            if (tgd.head.kind == HeadAtom::Triple && tgd.head.pred == pred)
                ctors.insert(tgd.head.subject.ctor);
        for (const auto& f : ctors) {
            if (!pairs.count({type, f})) continue;
            std::vector<std::string> producers;
            for (const auto& tgd : s.tgds)
                if (tgd.head.kind == HeadAtom::Triple && tgd.head.pred == pred &&
                    tgd.head.subject.ctor == f)
                    producers.push_back(tgd.label);
            std::sort(producers.begin(), producers.end());
            for (size_t i = 0; i < producers.size(); ++i)
                for (size_t j = i; j < producers.size(); ++j)
                    out.push_back({type, f, pred, producers[i], producers[j]});
        }
    }
    std::sort(out.begin(), out.end(), [](const ContentiousPair& a, const ContentiousPair& b) {
        return std::tie(a.type, a.ctor, a.pred, a.sigma, a.sigma_prime) <
               std::tie(b.type, b.ctor, b.pred, b.sigma, b.sigma_prime);
    });
    return out;
}

// ---------------------------------------------------------------------------
// Violation instance ladder

namespace {

/// Union-find over null ids; the lower id is the representative.
struct NullUnion {
    std::map<uint64_t, uint64_t> parent;

    uint64_t find(uint64_t x) {
        auto it = parent.find(x);
        if (it == parent.end()) return x;
        uint64_t r = find(it->second);
        parent[x] = r;
        return r;
    }
    void merge(uint64_t a, uint64_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (b < a) std::swap(a, b);
        parent[b] = a;
    }
};

std::string qualify(const std::string& var, size_t step) {
    return var + "@" + std::to_string(step);
}

/// Variables of a tgd in ladder order: body atoms left to right, then head.
std::vector<std::string> ladder_vars(const StTgd& tgd) { return tgd.variables(); }

}  // namespace

ViolationInstance violation_instance(const Setting& s, const AccessSequence& pi,
                                     const StTgd& sigma, const StTgd& sigma_prime) {
    std::vector<const StTgd*> steps;
    for (const auto& label : pi.steps) {
        const StTgd* t = s.tgd_by_label(label);
        assert(t && "access sequence labels come from the setting");
        steps.push_back(t);
    }
    steps.push_back(&sigma);
    steps.push_back(&sigma_prime);
    const size_t n = pi.steps.size() - 1;  // sigma_0..sigma_n, then n+1, n+2

    std::map<std::string, uint64_t> var_null;  // qualified var -> null id
    NullUnion uf;
    uint64_t next_null = 0;

    // The object variables of step i-1's head (the subject of step i must
    // bind to them).
    auto head_object_vars = [&](size_t i) -> const std::vector<std::string>& {
        const HeadAtom& h = steps[i]->head;
        return h.kind == HeadAtom::Type ? h.subject.vars : h.object.app.vars;
    };

    for (size_t i = 0; i < steps.size(); ++i) {
        // Bind the join positions first, exactly like h_i(x_i) = h_{i-1}(y_{i-1}).
        if (i >= 1) {
            size_t prev = i <= n ? i - 1 : n;  // sigma and sigma' both join to step n
            const std::vector<std::string>& prev_vars = head_object_vars(prev);
            const std::vector<std::string>& subj = steps[i]->head.subject.vars;
            if (prev_vars.size() != subj.size())
                throw std::invalid_argument("constructor arity mismatch in access sequence");
            for (size_t k = 0; k < subj.size(); ++k) {
                uint64_t bound = uf.find(var_null.at(qualify(prev_vars[k], prev)));
                auto [it, inserted] = var_null.emplace(qualify(subj[k], i), bound);
                if (!inserted) uf.merge(it->second, bound);
            }
        }
        for (const auto& v : ladder_vars(*steps[i]))
            if (var_null.emplace(qualify(v, i), next_null).second) ++next_null;
    }

    ViolationInstance out;
    for (auto& [var, id] : var_null) out.assignment.emplace(var, Value::null_lit(uf.find(id)));
    for (size_t i = 0; i < steps.size(); ++i) {
        for (const auto& atom : steps[i]->body) {
            Tuple t;
            for (const auto& v : atom.vars) t.push_back(out.assignment.at(qualify(v, i)));
            out.tableau.add(atom.relation, std::move(t));
        }
    }

    auto qualified_object = [&](size_t i) -> Term {
        const Term& obj = steps[i]->head.object;
        switch (obj.kind) {
            case Term::LitConst: return obj;
            case Term::Var: return Term::var(qualify(obj.text, i));
            case Term::App: {
                IriApp app;
                app.ctor = obj.app.ctor;
                for (const auto& v : obj.app.vars) app.vars.push_back(qualify(v, i));
                return Term::iri_app(std::move(app));
            }
        }
        return obj;
    };
    out.object1 = qualified_object(n + 1);
    out.object2 = qualified_object(n + 2);
    return out;
}

// ---------------------------------------------------------------------------
// Value consistency

namespace {

ChasedTerm chase_term(const Term& t, const std::map<std::string, Value>& assignment,
                      const std::map<Value, Value>& unifier) {
    auto rep = [&unifier](const Value& v) {
        auto it = unifier.find(v);
        return it == unifier.end() ? v : it->second;
    };
    ChasedTerm out;
    switch (t.kind) {
        case Term::Var:
            out.kind = ChasedTerm::Null;
            out.null_rep = rep(assignment.at(t.text));
            break;
        case Term::LitConst:
            out.kind = ChasedTerm::Lit;
            out.text = t.text;
            break;
        case Term::App:
            out.kind = ChasedTerm::App;
            out.ctor = t.app.ctor;
            for (const auto& v : t.app.vars) out.arg_reps.push_back(rep(assignment.at(v)));
            break;
    }
    return out;
}

}  // namespace

bool ChasedTerm::equals(const ChasedTerm& o) const {
    // Distinct categories can always be driven apart: a null class never
    // co-occurs with a constant in the tableau, constructors are injective
    // and pairwise non-overlapping.
    if (kind != o.kind) return false;
    switch (kind) {
        case Null: return null_rep == o.null_rep;
        case Lit: return text == o.text;
        case App: return ctor == o.ctor && arg_reps == o.arg_reps;
    }
    return false;
}

std::string ChasedTerm::describe() const {
    switch (kind) {
        case Null: return to_display(null_rep);
        case Lit: return "\"" + text + "\"";
        case App: {
            std::string out = ctor + "(";
            for (size_t i = 0; i < arg_reps.size(); ++i)
                out += (i ? ", " : "") + to_display(arg_reps[i]);
            return out + ")";
        }
    }
    return {};
}

ValueReport check_value_consistency(const Setting& s, const CheckOptions& opts) {
    ValueReport report;
    bool truncated = false;

    auto pairs = contentious(s);

    // Group pairs by sort so each (type, ctor)'s sequences are enumerated once.
    std::map<std::pair<std::string, std::string>, std::vector<const ContentiousPair*>> by_tf;
    for (const auto& p : pairs) by_tf[{p.type, p.ctor}].push_back(&p);

    for (const auto& [tf, sort_pairs] : by_tf) {
        std::vector<AccessSequence> seqs;
        bool exhaustive_enum =
            access_sequences(s, tf.first, tf.second, opts.max_sequences,
                             [&seqs](const AccessSequence& seq) {
                                 seqs.push_back(seq);
                                 return true;
                             });
        if (!exhaustive_enum) truncated = true;

        for (const ContentiousPair* cp : sort_pairs) {
            const StTgd* sigma = s.tgd_by_label(cp->sigma);
            const StTgd* sigma_prime = s.tgd_by_label(cp->sigma_prime);
            assert(sigma && sigma_prime);
            for (const auto& pi : seqs) {
                ViolationInstance vi = violation_instance(s, pi, *sigma, *sigma_prime);
                auto chased = fd_chase(vi.tableau, s.source);
                // A tableau holds nulls only, so the chase cannot fail.
                const auto& done = std::get<FdChaseDone>(chased);
                ChasedTerm a = chase_term(vi.object1, vi.assignment, done.unifier);
                ChasedTerm b = chase_term(vi.object2, vi.assignment, done.unifier);
                if (!a.equals(b)) {
                    ValueWitness w;
                    w.type = cp->type;
                    w.ctor = cp->ctor;
                    w.pred = cp->pred;
                    w.pi = pi;
                    w.sigma = cp->sigma;
                    w.sigma_prime = cp->sigma_prime;
                    w.tableau = vi.tableau;
                    w.assignment = vi.assignment;
                    w.object1 = a;
                    w.object2 = b;
                    report.witnesses.push_back(std::move(w));
                    if (!opts.exhaustive) {
                        report.status = ValueReport::Inconsistent;
                        return report;
                    }
                }
            }
        }
    }

    if (!report.witnesses.empty()) report.status = ValueReport::Inconsistent;
    else report.status = truncated ? ValueReport::Inconclusive : ValueReport::Consistent;
    return report;
}

// ---------------------------------------------------------------------------
// Node-kind consistency

std::set<TypeSet> cotypes_of_graph(const TypedGraph& g, const ShapeSchema& shapes) {
    std::set<TypeSet> out;
    std::deque<TypeSet> work;
    auto visit = [&](const TypeSet& x) {
        if (x.empty() || !out.insert(x).second) return;
        work.push_back(x);
    };
    for (const auto& [node, pred] : frontier(g, shapes)) {
        TypeSet x;
        x.types = g.types_of(node);
        visit(delta(x, pred, shapes));
    }
    while (!work.empty()) {
        TypeSet x = work.front();
        work.pop_front();
        for (const auto& p : req(x, shapes)) visit(delta(x, p, shapes));
    }
    return out;
}

std::vector<std::pair<TypeSet, std::string>> CotypeProvenance::chain_to(const TypeSet& x) const {
    std::vector<std::pair<TypeSet, std::string>> chain;
    TypeSet cur = x;
    while (true) {
        auto it = origins.find(cur);
        if (it == origins.end() || it->second.root_ctor) break;
        chain.push_back({it->second.parent, it->second.pred});
        cur = it->second.parent;
    }
    std::reverse(chain.begin(), chain.end());
    return chain;
}

KindReport check_node_kind(const Setting& s) {
    KindReport report;
    auto pairs = access_pairs(s);

    // Roots: the full accessible type set of each constructor.
    std::map<std::string, TypeSet> roots;
    for (const auto& [t, f] : pairs) roots[f].types.insert(t);

    std::deque<TypeSet> work;
    auto visit = [&](const TypeSet& x, CotypeProvenance::Origin origin) {
        if (x.empty() || report.provenance.origins.count(x)) return;
        report.provenance.origins.emplace(x, std::move(origin));
        work.push_back(x);
    };
    for (const auto& [f, x] : roots) visit(x, {f, {}, {}});
    while (!work.empty()) {
        TypeSet x = work.front();
        work.pop_front();
        for (const auto& p : req(x, s.shapes))
            visit(delta(x, p, s.shapes), {std::nullopt, x, p});
    }

    for (const auto& [x, origin] : report.provenance.origins) {
        if (!x.mixed()) continue;
        MixedCotypesWitness w;
        w.mixed = x;
        w.chain = report.provenance.chain_to(x);
        TypeSet root = w.chain.empty() ? x : w.chain.front().first;
        w.root_ctor = *report.provenance.origins.at(root).root_ctor;
        report.mixed.push_back(std::move(w));
    }

    // Direct-clash scan: a triple head whose object kind contradicts what
    // delta demands for an accessible subject type.
    for (const auto& tgd : s.tgds) {
        if (tgd.head.kind != HeadAtom::Triple) continue;
        const std::string& f = tgd.head.subject.ctor;
        bool literal_object = tgd.head.object.kind != Term::App;
        for (const auto& [key, c] : s.shapes.delta) {
            if (key.second != tgd.head.pred || !pairs.count({key.first, f})) continue;
            if (c.target.literal != literal_object)
                report.clashes.push_back(
                    {tgd.label, key.first, f, tgd.head.pred, literal_object, c.target});
        }
    }

    report.status = report.mixed.empty() && report.clashes.empty() ? KindReport::Consistent
                                                                   : KindReport::Inconsistent;
    return report;
}

Verdict check_consistency(const Setting& s, const CheckOptions& opts) {
    Verdict v;
    v.value = check_value_consistency(s, opts);
    v.kind = check_node_kind(s);
    if (v.value.status == ValueReport::Inconsistent || v.kind.status == KindReport::Inconsistent)
        v.status = Verdict::Inconsistent;
    else if (v.value.status == ValueReport::Inconclusive)
        v.status = Verdict::Inconclusive;
    else
        v.status = Verdict::Consistent;
    return v;
}

SourceInstance materialize_counterexample(const Setting& s, const ValueWitness& w) {
    auto chased = fd_chase(w.tableau, s.source);
    const auto& done = std::get<FdChaseDone>(chased);

    // Dense numbering of the representative nulls, in id order.
    std::map<uint64_t, uint64_t> number;
    for (const auto& [rel, tuples] : done.instance.facts())
        for (const auto& t : tuples)
            for (const auto& v : t) number.emplace(v.null_id(), 0);
    uint64_t next = 0;
    for (auto& [id, num] : number) num = next++;

    SourceInstance out;
    for (const auto& [rel, tuples] : done.instance.facts()) {
        for (const auto& t : tuples) {
            Tuple grounded;
            for (const auto& v : t)
                grounded.push_back(Value::lit("c" + std::to_string(number.at(v.null_id()))));
            out.add(rel, std::move(grounded));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Display

std::string to_display(const ValueWitness& w) {
    std::ostringstream os;
    os << "sort (" << w.type << ", " << w.ctor << ", " << w.pred << "), rules " << w.sigma
       << " and " << w.sigma_prime << " via";
    for (const auto& step : w.pi.steps) os << " " << step;
    os << "; objects " << w.object1.describe() << " vs " << w.object2.describe();
    return os.str();
}

std::string to_display(const MixedCotypesWitness& w) {
    std::ostringstream os;
    os << "constructor " << w.root_ctor << " leads to the mixed type set "
       << to_display(w.mixed);
    if (!w.chain.empty()) {
        os << " via";
        for (const auto& [x, p] : w.chain) os << " " << to_display(x) << " -" << p << "->";
    }
    return os.str();
}

std::string to_display(const DirectClashWitness& w) {
    std::ostringstream os;
    os << "rule " << w.tgd << " emits a " << (w.literal_object ? "literal" : "non-literal") << " "
       << w.pred << " object on " << w.ctor << " nodes, but type " << w.type << " demands "
       << (w.demanded.literal ? std::string("a literal") : "type " + w.demanded.type);
    return os.str();
}

}  // namespace rdfex

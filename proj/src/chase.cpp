#include "rdfex/chase.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <functional>
#include <sstream>
#include <utility>

#include "rdfex/constructor.hpp"

namespace rdfex {

namespace {

/// Union-find over values with the chase's representative policy: a constant
/// beats a null; among nulls the lower id wins; two distinct constants clash.
class ValueUnifier {
public:
    Value find(const Value& v) {
        auto it = parent_.find(v);
        if (it == parent_.end()) return v;
        Value root = find(it->second);
        parent_[v] = root;
        return root;
    }

    /// Returns the clashing pair when both representatives are constants.
    std::optional<std::pair<Value, Value>> merge(const Value& a, const Value& b) {
        Value ra = find(a), rb = find(b);
        if (ra == rb) return std::nullopt;
        if (!ra.is_null() && !rb.is_null()) return std::make_pair(ra, rb);
        if (ra.is_null() && (!rb.is_null() || rb.null_id() < ra.null_id())) std::swap(ra, rb);
        parent_[rb] = ra;
        changed_ = true;
        return std::nullopt;
    }

    bool take_changed() { return std::exchange(changed_, false); }

    /// Non-identity entries only.
    std::map<Value, Value> mapping() {
        std::map<Value, Value> out;
        for (const auto& [v, p] : parent_) {
            Value r = find(v);
            if (r != v) out[v] = r;
        }
        return out;
    }

private:
    std::map<Value, Value> parent_;
    bool changed_ = false;
};

struct ResolvedFd {
    const FunctionalDependency* fd;
    std::vector<size_t> lhs, rhs;
};

std::vector<ResolvedFd> resolve_fds(const RelationalSchema& schema) {
    std::vector<ResolvedFd> out;
    for (const auto& fd : schema.fds) {
        ResolvedFd r{&fd, {}, {}};
        bool ok = schema.has_relation(fd.relation);
        for (const auto& a : fd.lhs) {
            int idx = schema.attribute_index(fd.relation, a);
            if (idx < 0) ok = false;
            else r.lhs.push_back(static_cast<size_t>(idx));
        }
        for (const auto& a : fd.rhs) {
            int idx = schema.attribute_index(fd.relation, a);
            if (idx < 0) ok = false;
            else r.rhs.push_back(static_cast<size_t>(idx));
        }
        if (ok) out.push_back(std::move(r));
    }
    return out;
}

SourceInstance apply_unifier(const SourceInstance& inst, ValueUnifier& u) {
    SourceInstance out;
    for (const auto& [rel, tuples] : inst.facts()) {
        for (const auto& t : tuples) {
            Tuple mapped;
            mapped.reserve(t.size());
            for (const auto& v : t) mapped.push_back(u.find(v));
            out.add(rel, std::move(mapped));
        }
    }
    return out;
}

}  // namespace

FdChaseResult fd_chase(const SourceInstance& inst, const RelationalSchema& schema) {
    const auto resolved = resolve_fds(schema);
    ValueUnifier u;

    // Repeatedly group tuples by their lhs projection under the current
    // unifier and merge rhs values until nothing changes. FDs over nulls are
    // confluent, so the iteration order does not matter.
    bool dirty = true;
    while (dirty) {
        dirty = false;
        for (const auto& r : resolved) {
            auto it = inst.facts().find(r.fd->relation);
            if (it == inst.facts().end()) continue;
            std::map<Tuple, Tuple> key_to_rhs;  // lhs projection -> rhs projection
            for (const auto& t : it->second) {
                Tuple key, rhs;
                for (size_t i : r.lhs) key.push_back(u.find(t[i]));
                for (size_t i : r.rhs) rhs.push_back(u.find(t[i]));
                auto [slot, inserted] = key_to_rhs.emplace(std::move(key), rhs);
                if (inserted) continue;
                for (size_t k = 0; k < rhs.size(); ++k) {
                    if (auto clash = u.merge(slot->second[k], rhs[k]))
                        return FdFailure{*r.fd, *clash};
                }
            }
            if (u.take_changed()) dirty = true;
        }
    }

    FdChaseDone done;
    done.unifier = u.mapping();
    done.instance = apply_unifier(inst, u);
    return done;
}

// ---------------------------------------------------------------------------
// Core pre-solution

/// Enumerates all homomorphisms from a rule body into the instance and calls
/// the sink with each complete variable binding. Later atoms are probed
/// through hash indexes on their join positions, so a two-atom join costs
/// input plus output rather than the cross product.
void for_each_body_match(const std::vector<RelAtom>& body, const SourceInstance& inst,
                         const std::function<void(const std::map<std::string, Value>&)>& sink) {
    struct AtomPlan {
        const RelAtom* atom;
        std::vector<size_t> key_positions;  // bound by earlier atoms
        std::map<Tuple, std::vector<const Tuple*>> index;
    };
    std::vector<AtomPlan> plans;
    std::set<std::string> bound_vars;
    for (const auto& atom : body) {
        AtomPlan plan;
        plan.atom = &atom;
        for (size_t i = 0; i < atom.vars.size(); ++i)
            if (bound_vars.count(atom.vars[i])) plan.key_positions.push_back(i);
        for (const Tuple& t : inst.tuples(atom.relation)) {
            if (t.size() != atom.vars.size()) continue;
            Tuple key;
            for (size_t i : plan.key_positions) key.push_back(t[i]);
            plan.index[key].push_back(&t);
        }
        bound_vars.insert(atom.vars.begin(), atom.vars.end());
        plans.push_back(std::move(plan));
    }

    std::map<std::string, Value> binding;
    std::function<void(size_t)> go = [&](size_t atom_idx) {
        if (atom_idx == plans.size()) {
            sink(binding);
            return;
        }
        const AtomPlan& plan = plans[atom_idx];
        Tuple key;
        for (size_t i : plan.key_positions) key.push_back(binding.at(plan.atom->vars[i]));
        auto bucket = plan.index.find(key);
        if (bucket == plan.index.end()) return;
        for (const Tuple* t : bucket->second) {
            std::vector<std::string> bound_here;
            bool ok = true;
            for (size_t i = 0; i < t->size() && ok; ++i) {
                auto it = binding.find(plan.atom->vars[i]);
                if (it == binding.end()) {
                    binding.emplace(plan.atom->vars[i], (*t)[i]);
                    bound_here.push_back(plan.atom->vars[i]);
                } else if (it->second != (*t)[i]) {
                    ok = false;  // repeated variable inside this atom
                }
            }
            if (ok) go(atom_idx + 1);
            for (const auto& v : bound_here) binding.erase(v);
        }
    };
    go(0);
}

namespace {

Value instantiate_app(const Setting& s, const IriApp& app,
                      const std::map<std::string, Value>& binding) {
    const IriConstructor* c = s.library.find(app.ctor);
    assert(c && "validated settings declare every constructor");
    std::vector<std::string> args;
    args.reserve(app.vars.size());
    for (const auto& v : app.vars) args.push_back(binding.at(v).text());
    return Value::iri(make_iri(*c, args));
}

}  // namespace

Value head_value(const Setting& s, const Term& t, const std::map<std::string, Value>& binding) {
    switch (t.kind) {
        case Term::Var: return binding.at(t.text);
        case Term::LitConst: return Value::lit(t.text);
        case Term::App: return instantiate_app(s, t.app, binding);
    }
    return {};
}

CorePreSolutionResult core_pre_solution(const Setting& s, const SourceInstance& inst) {
    if (!inst.concrete()) return SourceInconsistent{std::nullopt};
    auto chased = fd_chase(inst, s.source);
    if (auto* fail = std::get_if<FdFailure>(&chased)) return SourceInconsistent{*fail};

    TypedGraph g;

    // St-tgds touch only source relations in their bodies, so a single pass
    // per rule is complete; recursion happens only in type propagation.
    for (const auto& tgd : s.tgds) {
        for_each_body_match(tgd.body, inst, [&](const std::map<std::string, Value>& binding) {
            Value subject = instantiate_app(s, tgd.head.subject, binding);
            if (tgd.head.kind == HeadAtom::Type) {
                g.add_type(subject, tgd.head.type);
            } else {
                g.add_triple(std::move(subject), tgd.head.pred,
                             head_value(s, tgd.head.object, binding));
            }
        });
    }

    // TP saturation: worklist of typed nodes whose constraints have not been
    // propagated over their current edges yet.
    std::deque<Value> work;
    std::set<Value> queued;
    for (const auto& [node, types] : g.typing()) {
        work.push_back(node);
        queued.insert(node);
    }
    while (!work.empty()) {
        Value node = work.front();
        work.pop_front();
        queued.erase(node);
        // Copy: add_type below may invalidate iterators into typing().
        std::set<std::string> types = g.types_of(node);
        for (const auto& type : types) {
            for (const auto& [pred, objects] : g.out_edges(node)) {
                const ShapeConstraint* c = s.shapes.constraint(type, pred);
                if (!c) continue;
                for (const Value& obj : objects) {
                    if (c->target.literal) {
                        if (!obj.is_literal()) return KindClash{obj, "", pred};
                        continue;  // literal mark is implicit
                    }
                    if (obj.is_literal()) return KindClash{obj, c->target.type, pred};
                    if (!g.has_type(obj, c->target.type)) {
                        g.add_type(obj, c->target.type);
                        if (queued.insert(obj).second) work.push_back(obj);
                    }
                }
            }
        }
    }
    return g;
}

// ---------------------------------------------------------------------------
// Shape checks

std::vector<ShapeViolation> check_pf(const TypedGraph& g, const ShapeSchema& shapes) {
    std::vector<ShapeViolation> out;
    for (const auto& [node, types] : g.typing()) {
        for (const auto& type : types) {
            for (const auto& [pred, objects] : g.out_edges(node)) {
                const ShapeConstraint* c = shapes.constraint(type, pred);
                if (!c || !mult_functional(c->mult)) continue;
                if (objects.size() > 1) {
                    ShapeViolation v{ShapeViolation::PF, node, type, pred, {}};
                    v.witnesses.assign(objects.begin(), objects.end());
                    out.push_back(std::move(v));
                }
            }
        }
    }
    return out;
}

std::vector<ShapeViolation> validate_shapes(const TypedGraph& g, const ShapeSchema& shapes) {
    std::vector<ShapeViolation> out;
    for (const auto& [node, types] : g.typing()) {
        for (const auto& type : types) {
            // PE: required predicates must have at least one edge.
            for (const auto& [key, c] : shapes.delta) {
                if (key.first != type || !mult_required(c.mult)) continue;
                if (!g.has_edge(node, key.second))
                    out.push_back({ShapeViolation::PE, node, type, key.second, {}});
            }
            for (const auto& [pred, objects] : g.out_edges(node)) {
                const ShapeConstraint* c = shapes.constraint(type, pred);
                if (!c) continue;
                if (mult_functional(c->mult) && objects.size() > 1) {
                    ShapeViolation v{ShapeViolation::PF, node, type, pred, {}};
                    v.witnesses.assign(objects.begin(), objects.end());
                    out.push_back(std::move(v));
                }
                for (const Value& obj : objects) {
                    bool ok = c->target.literal
                                  ? obj.is_literal()
                                  : !obj.is_literal() && g.has_type(obj, c->target.type);
                    if (!ok)
                        out.push_back({ShapeViolation::TpKindClash, node,
                                       c->target.literal ? "Literal" : c->target.type, pred,
                                       {obj}});
                }
            }
        }
    }
    return out;
}

std::string to_display(const ShapeViolation& v) {
    std::ostringstream os;
    switch (v.kind) {
        case ShapeViolation::PF:
            os << "PF violation: node " << v.node << " of type " << v.type << " has "
               << v.witnesses.size() << " distinct " << v.pred << " objects";
            break;
        case ShapeViolation::PE:
            os << "PE violation: node " << v.node << " of type " << v.type << " is missing a "
               << v.pred << " edge";
            break;
        case ShapeViolation::TpKindClash:
            os << "type violation: " << v.pred << " object";
            if (!v.witnesses.empty()) os << " " << v.witnesses.front();
            os << " of node " << v.node << " does not satisfy " << v.type;
            break;
    }
    return os.str();
}

}  // namespace rdfex

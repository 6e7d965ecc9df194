#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "rdfex/constructor.hpp"
#include "rdfex/graph.hpp"
#include "rdfex/instance.hpp"
#include "rdfex/schema.hpp"
#include "rdfex/setting.hpp"
#include "rdfex/term.hpp"
#include "rdfex/value.hpp"

namespace rdfex {

std::string to_display(const Value& v) {
    switch (v.kind()) {
        case ValueKind::ConstLit: {
            std::string out = "\"";
            for (char c : v.text()) {
                if (c == '"' || c == '\\') out += '\\';
                out += c;
            }
            out += '"';
            return out;
        }
        case ValueKind::Iri:
            return "<" + v.text() + ">";
        case ValueKind::NullIri:
            return "_:n" + std::to_string(v.null_id());
        case ValueKind::NullLit:
            return "_?n" + std::to_string(v.null_id());
    }
    return {};
}

std::ostream& operator<<(std::ostream& os, const Value& v) { return os << to_display(v); }

int RelationalSchema::attribute_index(const std::string& rel, const std::string& attr) const {
    auto it = relations.find(rel);
    if (it == relations.end()) return -1;
    const auto& attrs = it->second;
    auto pos = std::find(attrs.begin(), attrs.end(), attr);
    return pos == attrs.end() ? -1 : static_cast<int>(pos - attrs.begin());
}

const char* mult_token(Mult m) {
    switch (m) {
        case Mult::One: return "[1]";
        case Mult::Opt: return "[?]";
        case Mult::Star: return "[*]";
        case Mult::Plus: return "[+]";
    }
    return "[*]";
}

std::vector<ShapeDependency> shape_dependencies(const ShapeSchema& shapes) {
    std::vector<ShapeDependency> out;
    for (const auto& [key, c] : shapes.delta) {
        out.push_back({ShapeDependency::TP, key.first, key.second, c.target});
        if (mult_functional(c.mult))
            out.push_back({ShapeDependency::PF, key.first, key.second, {}});
        if (mult_required(c.mult))
            out.push_back({ShapeDependency::PE, key.first, key.second, {}});
    }
    return out;
}

std::vector<std::string> StTgd::variables() const {
    std::vector<std::string> out;
    auto push = [&out](const std::string& v) {
        if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
    };
    for (const auto& atom : body)
        for (const auto& v : atom.vars) push(v);
    for (const auto& v : head.subject.vars) push(v);
    if (head.kind == HeadAtom::Triple && head.object.kind == Term::Var) push(head.object.text);
    if (head.kind == HeadAtom::Triple && head.object.kind == Term::App)
        for (const auto& v : head.object.app.vars) push(v);
    return out;
}

bool StTgd::uses_variable(const std::string& v) const {
    auto vars = variables();
    return std::find(vars.begin(), vars.end(), v) != vars.end();
}

// ---------------------------------------------------------------------------
// IRI constructors

IriConstructor IriConstructor::simple(std::string name, std::vector<std::string> params,
                                      std::vector<std::string> segments) {
    IriConstructor c;
    c.name = std::move(name);
    c.params = std::move(params);
    c.segments = std::move(segments);
    for (size_t i = 0; i < c.params.size(); ++i) c.slot_param.push_back(i);
    return c;
}

std::string IriConstructor::template_text() const {
    std::string out = segments.empty() ? std::string() : segments[0];
    for (size_t i = 0; i < slot_param.size(); ++i) {
        out += "{" + params[slot_param[i]] + "}";
        out += segments[i + 1];
    }
    return out;
}

std::optional<std::string> IriConstructor::well_formed_error() const {
    if (segments.size() != slot_param.size() + 1)
        return "malformed template for constructor " + name;
    std::set<std::string> seen;
    for (const auto& p : params) {
        if (!seen.insert(p).second)
            return "duplicate parameter " + p + " in constructor " + name;
    }
    std::vector<bool> used(params.size(), false);
    for (size_t idx : slot_param) {
        if (idx >= params.size()) return "malformed template for constructor " + name;
        if (used[idx])
            return "constructor " + name + ": parameter " + params[idx] + " used twice";
        used[idx] = true;
    }
    for (size_t i = 0; i < used.size(); ++i)
        if (!used[i]) return "constructor " + name + ": parameter " + params[i] + " unused";
    // A slot must be separated from the next by at least one constant char.
    for (size_t i = 1; i + 1 < segments.size(); ++i) {
        if (segments[i].empty())
            return "constructor " + name + " has adjacent slots with no separator";
    }
    return std::nullopt;
}

namespace {

bool unreserved(char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
           c == '-' || c == '.' || c == '_' || c == '~';
}

void percent_encode(std::string& out, const std::string& s, char guard) {
    static const char* hex = "0123456789ABCDEF";
    for (char c : s) {
        if (unreserved(c) && c != guard) {
            out += c;
        } else {
            unsigned char u = static_cast<unsigned char>(c);
            out += '%';
            out += hex[u >> 4];
            out += hex[u & 0xF];
        }
    }
}

}  // namespace

std::string make_iri(const IriConstructor& c, const std::vector<std::string>& args) {
    if (args.size() != c.arity())
        throw std::invalid_argument("make_iri: arity mismatch for " + c.name);
    std::string out = c.segments[0];
    for (size_t i = 0; i < c.slot_param.size(); ++i) {
        const std::string& next = c.segments[i + 1];
        // Guarding the next segment's first character keeps the expansion
        // injective: the slot boundary is its first occurrence.
        char guard = next.empty() ? '\0' : next[0];
        percent_encode(out, args[c.slot_param[i]], guard);
        out += next;
    }
    return out;
}

const IriConstructor* ConstructorLibrary::find(const std::string& name) const {
    for (const auto& c : ctors)
        if (c.name == name) return &c;
    return nullptr;
}

bool ConstructorLibrary::add(IriConstructor c) {
    if (find(c.name)) return false;
    ctors.push_back(std::move(c));
    return true;
}

std::optional<OverlapError> check_library(const ConstructorLibrary& lib) {
    for (size_t i = 0; i < lib.ctors.size(); ++i) {
        for (size_t j = i + 1; j < lib.ctors.size(); ++j) {
            const std::string& a = lib.ctors[i].prefix();
            const std::string& b = lib.ctors[j].prefix();
            if (a.compare(0, b.size(), b) == 0 || b.compare(0, a.size(), a) == 0)
                return OverlapError{lib.ctors[i].name, lib.ctors[j].name};
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Instances and graphs

void SourceInstance::add(const std::string& relation, Tuple tuple) {
    facts_[relation].insert(std::move(tuple));
}

bool SourceInstance::contains(const std::string& relation, const Tuple& tuple) const {
    auto it = facts_.find(relation);
    return it != facts_.end() && it->second.count(tuple) != 0;
}

const std::set<Tuple>& SourceInstance::tuples(const std::string& relation) const {
    static const std::set<Tuple> empty;
    auto it = facts_.find(relation);
    return it == facts_.end() ? empty : it->second;
}

size_t SourceInstance::fact_count() const {
    size_t n = 0;
    for (const auto& [rel, tuples] : facts_) n += tuples.size();
    return n;
}

bool SourceInstance::concrete() const {
    for (const auto& [rel, tuples] : facts_)
        for (const auto& t : tuples)
            for (const auto& v : t)
                if (v.is_null()) return false;
    return true;
}

std::set<Value> SourceInstance::active_domain() const {
    std::set<Value> out;
    for (const auto& [rel, tuples] : facts_)
        for (const auto& t : tuples) out.insert(t.begin(), t.end());
    return out;
}

void TypedGraph::add_triple(Value subject, std::string pred, Value object) {
    if (subject.is_literal())
        throw std::invalid_argument("triple subject must be a non-literal node");
    out_[subject][pred].insert(object);
    triples_.insert(Triple{std::move(subject), std::move(pred), std::move(object)});
}

void TypedGraph::add_type(const Value& node, const std::string& type) {
    typing_[node].insert(type);
}

bool TypedGraph::has_triple(const Value& s, const std::string& p, const Value& o) const {
    return triples_.count(Triple{s, p, o}) != 0;
}

bool TypedGraph::has_type(const Value& node, const std::string& type) const {
    auto it = typing_.find(node);
    return it != typing_.end() && it->second.count(type) != 0;
}

const std::set<std::string>& TypedGraph::types_of(const Value& node) const {
    static const std::set<std::string> empty;
    auto it = typing_.find(node);
    return it == typing_.end() ? empty : it->second;
}

std::vector<Value> TypedGraph::objects(const Value& node, const std::string& pred) const {
    std::vector<Value> out;
    auto it = out_.find(node);
    if (it == out_.end()) return out;
    auto jt = it->second.find(pred);
    if (jt == it->second.end()) return out;
    out.assign(jt->second.begin(), jt->second.end());
    return out;
}

bool TypedGraph::has_edge(const Value& node, const std::string& pred) const {
    auto it = out_.find(node);
    if (it == out_.end()) return false;
    auto jt = it->second.find(pred);
    return jt != it->second.end() && !jt->second.empty();
}

const std::map<std::string, std::set<Value>>& TypedGraph::out_edges(const Value& node) const {
    static const std::map<std::string, std::set<Value>> empty;
    auto it = out_.find(node);
    return it == out_.end() ? empty : it->second;
}

std::set<Value> TypedGraph::nodes() const {
    std::set<Value> out;
    for (const auto& t : triples_) {
        out.insert(t.subject);
        out.insert(t.object);
    }
    for (const auto& [node, types] : typing_)
        if (!types.empty()) out.insert(node);
    return out;
}

size_t TypedGraph::type_fact_count() const {
    size_t n = 0;
    for (const auto& [node, types] : typing_) n += types.size();
    return n;
}

bool TypedGraph::null_free() const {
    for (const auto& n : nodes())
        if (n.is_null()) return false;
    return true;
}

void TypedGraph::merge(const TypedGraph& other) {
    for (const auto& t : other.triples_) add_triple(t.subject, t.pred, t.object);
    for (const auto& [node, types] : other.typing_)
        for (const auto& ty : types) add_type(node, ty);
}

// ---------------------------------------------------------------------------
// Setting

const StTgd* Setting::tgd_by_label(const std::string& label) const {
    for (const auto& t : tgds)
        if (t.label == label) return &t;
    return nullptr;
}

std::variant<std::vector<StTgd>, NotFullError> normalize_tgds(const std::vector<RawRule>& rules) {
    std::vector<StTgd> out;
    for (const auto& rule : rules) {
        std::set<std::string> body_vars;
        for (const auto& atom : rule.body) body_vars.insert(atom.vars.begin(), atom.vars.end());

        auto check_vars = [&](const std::vector<std::string>& vars) -> const std::string* {
            for (const auto& v : vars)
                if (!body_vars.count(v)) return &v;
            return nullptr;
        };
        for (const auto& head : rule.heads) {
            if (const std::string* v = check_vars(head.subject.vars))
                return NotFullError{rule.label, *v};
            if (head.kind == HeadAtom::Triple) {
                if (head.object.kind == Term::Var && !body_vars.count(head.object.text))
                    return NotFullError{rule.label, head.object.text};
                if (head.object.kind == Term::App)
                    if (const std::string* v = check_vars(head.object.app.vars))
                        return NotFullError{rule.label, *v};
            }
        }

        for (size_t i = 0; i < rule.heads.size(); ++i) {
            StTgd t;
            t.label = rule.heads.size() == 1 ? rule.label
                                             : rule.label + "#" + std::to_string(i + 1);
            t.body = rule.body;
            t.head = rule.heads[i];
            out.push_back(std::move(t));
        }
    }
    return out;
}

namespace {

void check_iri_app(const Setting& s, const std::string& rule, const IriApp& app,
                   const std::set<std::string>& body_vars, Diagnostics& out) {
    const IriConstructor* c = s.library.find(app.ctor);
    if (!c) {
        out.push_back({{}, "rule " + rule + ": unknown constructor " + app.ctor});
    } else if (c->arity() != app.vars.size()) {
        out.push_back({{}, "rule " + rule + ": constructor " + app.ctor + " expects " +
                               std::to_string(c->arity()) + " arguments, got " +
                               std::to_string(app.vars.size())});
    }
    for (const auto& v : app.vars)
        if (!body_vars.count(v))
            out.push_back({{}, "rule " + rule + ": head variable " + v + " not bound in body"});
}

}  // namespace

Diagnostics validate_setting(const Setting& s) {
    Diagnostics out;

    for (const auto& [rel, attrs] : s.source.relations) {
        std::set<std::string> seen;
        for (const auto& a : attrs)
            if (!seen.insert(a).second)
                out.push_back({{}, "relation " + rel + ": duplicate attribute " + a});
    }

    for (const auto& fd : s.source.fds) {
        if (!s.source.has_relation(fd.relation)) {
            out.push_back({{}, "fd over unknown relation " + fd.relation});
            continue;
        }
        if (fd.lhs.empty() || fd.rhs.empty())
            out.push_back({{}, "fd over " + fd.relation + " with empty side"});
        for (const auto& a : fd.lhs)
            if (s.source.attribute_index(fd.relation, a) < 0)
                out.push_back({{}, "fd over " + fd.relation + ": unknown attribute " + a});
        for (const auto& a : fd.rhs)
            if (s.source.attribute_index(fd.relation, a) < 0)
                out.push_back({{}, "fd over " + fd.relation + ": unknown attribute " + a});
    }

    for (const auto& c : s.library.ctors)
        if (auto err = c.well_formed_error()) out.push_back({{}, *err});
    if (auto overlap = check_library(s.library))
        out.push_back({{}, "constructors " + overlap->name1 + " and " + overlap->name2 +
                               " have overlapping ranges"});

    for (const auto& [key, c] : s.shapes.delta) {
        if (!s.shapes.has_type(key.first))
            out.push_back({{}, "unknown type " + key.first});
        if (!c.target.literal && !s.shapes.has_type(c.target.type))
            out.push_back({{}, "unknown type " + c.target.type});
    }

    for (const auto& tgd : s.tgds) {
        std::set<std::string> body_vars;
        for (const auto& atom : tgd.body) {
            if (!s.source.has_relation(atom.relation)) {
                out.push_back({{}, "rule " + tgd.label + ": unknown relation " + atom.relation});
            } else if (s.source.arity(atom.relation) != atom.vars.size()) {
                out.push_back({{}, "rule " + tgd.label + ": relation " + atom.relation +
                                       " expects " + std::to_string(s.source.arity(atom.relation)) +
                                       " arguments, got " + std::to_string(atom.vars.size())});
            }
            body_vars.insert(atom.vars.begin(), atom.vars.end());
        }
        check_iri_app(s, tgd.label, tgd.head.subject, body_vars, out);
        if (tgd.head.kind == HeadAtom::Type) {
            if (!s.shapes.has_type(tgd.head.type))
                out.push_back({{}, "unknown type " + tgd.head.type});
        } else {
            if (tgd.head.object.kind == Term::Var && !body_vars.count(tgd.head.object.text))
                out.push_back({{}, "rule " + tgd.label + ": head variable " +
                                       tgd.head.object.text + " not bound in body"});
            if (tgd.head.object.kind == Term::App)
                check_iri_app(s, tgd.label, tgd.head.object.app, body_vars, out);
        }
    }

    return out;
}

}  // namespace rdfex

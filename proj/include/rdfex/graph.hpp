#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "rdfex/value.hpp"

namespace rdfex {

struct Triple {
    Value subject;  // non-literal
    std::string pred;
    Value object;

    friend bool operator==(const Triple&, const Triple&) = default;
    friend auto operator<=>(const Triple&, const Triple&) = default;
};

/// An RDF graph under the unique name assumption (nodes are their labels)
/// together with a typing of non-literal nodes. Literal nodes never carry a
/// schema type; their type is implicitly the literal mark.
class TypedGraph {
public:
    /// Adding a triple with a literal subject is a programming error and
    /// throws; parsers report it as a diagnostic instead.
    void add_triple(Value subject, std::string pred, Value object);
    void add_type(const Value& node, const std::string& type);

    bool has_triple(const Value& s, const std::string& p, const Value& o) const;
    bool has_type(const Value& node, const std::string& type) const;

    const std::set<Triple>& triples() const { return triples_; }
    const std::map<Value, std::set<std::string>>& typing() const { return typing_; }

    const std::set<std::string>& types_of(const Value& node) const;
    /// Objects of p-edges leaving node, in deterministic order.
    std::vector<Value> objects(const Value& node, const std::string& pred) const;
    bool has_edge(const Value& node, const std::string& pred) const;
    /// All (pred, object) pairs leaving node.
    const std::map<std::string, std::set<Value>>& out_edges(const Value& node) const;

    /// Subjects and objects of triples plus all typed nodes.
    std::set<Value> nodes() const;

    size_t triple_count() const { return triples_.size(); }
    size_t type_fact_count() const;
    bool null_free() const;

    void merge(const TypedGraph& other);

    friend bool operator==(const TypedGraph&, const TypedGraph&) = default;

private:
    std::set<Triple> triples_;
    std::map<Value, std::set<std::string>> typing_;
    std::map<Value, std::map<std::string, std::set<Value>>> out_;
};

}  // namespace rdfex

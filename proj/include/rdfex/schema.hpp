#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

namespace rdfex {

/// R : lhs -> rhs over attribute names of one relation.
struct FunctionalDependency {
    std::string relation;
    std::set<std::string> lhs;
    std::set<std::string> rhs;

    friend bool operator==(const FunctionalDependency&, const FunctionalDependency&) = default;
    friend auto operator<=>(const FunctionalDependency&, const FunctionalDependency&) = default;
};

struct RelationalSchema {
    // relation name -> attribute names, in declaration order
    std::map<std::string, std::vector<std::string>> relations;
    std::vector<FunctionalDependency> fds;

    bool has_relation(const std::string& name) const { return relations.count(name) != 0; }
    size_t arity(const std::string& name) const { return relations.at(name).size(); }
    /// Attribute position, or -1 when the attribute is not declared.
    int attribute_index(const std::string& rel, const std::string& attr) const;
};

enum class Mult : uint8_t { One, Opt, Star, Plus };

const char* mult_token(Mult m);  // "[1]" "[?]" "[*]" "[+]"

inline bool mult_functional(Mult m) { return m == Mult::One || m == Mult::Opt; }
inline bool mult_required(Mult m) { return m == Mult::One || m == Mult::Plus; }

/// Target of a shape constraint: a type name from the schema or the literal mark.
struct ShapeTarget {
    bool literal = false;
    std::string type;  // empty when literal

    static ShapeTarget literal_mark() { return ShapeTarget{true, {}}; }
    static ShapeTarget of_type(std::string t) { return ShapeTarget{false, std::move(t)}; }

    friend bool operator==(const ShapeTarget&, const ShapeTarget&) = default;
};

struct ShapeConstraint {
    ShapeTarget target;
    Mult mult = Mult::Star;
};

/// Deterministic shape schema: at most one constraint per (type, predicate),
/// enforced by the map key.
struct ShapeSchema {
    std::set<std::string> types;
    std::map<std::pair<std::string, std::string>, ShapeConstraint> delta;

    bool has_type(const std::string& t) const { return types.count(t) != 0; }
    const ShapeConstraint* constraint(const std::string& type, const std::string& pred) const {
        auto it = delta.find({type, pred});
        return it == delta.end() ? nullptr : &it->second;
    }
};

/// The dependencies a shape schema encodes: type propagation, predicate
/// functionality (mult 1/?), predicate existence (mult 1/+).
struct ShapeDependency {
    enum Kind : uint8_t { TP, PF, PE } kind;
    std::string type;
    std::string pred;
    ShapeTarget target;  // meaningful for TP only
};

std::vector<ShapeDependency> shape_dependencies(const ShapeSchema& shapes);

}  // namespace rdfex

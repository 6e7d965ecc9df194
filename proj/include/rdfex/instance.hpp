#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "rdfex/value.hpp"

namespace rdfex {

using Tuple = std::vector<Value>;

/// A set of relational facts. Concrete instances hold only literal constants;
/// tableau instances (consistency checker) may hold literal nulls. IRIs never
/// appear on the source side.
class SourceInstance {
public:
    void add(const std::string& relation, Tuple tuple);
    bool contains(const std::string& relation, const Tuple& tuple) const;

    const std::map<std::string, std::set<Tuple>>& facts() const { return facts_; }
    const std::set<Tuple>& tuples(const std::string& relation) const;

    size_t fact_count() const;
    bool empty() const { return fact_count() == 0; }
    bool concrete() const;  // no nulls anywhere

    /// All values appearing in some fact, in deterministic order.
    std::set<Value> active_domain() const;

    friend bool operator==(const SourceInstance&, const SourceInstance&) = default;

private:
    std::map<std::string, std::set<Tuple>> facts_;
};

}  // namespace rdfex

#pragma once

#include <vector>

namespace rdfex {

/// CNF over variables 1..num_vars; clauses are lists of signed indexes.
struct Cnf {
    int num_vars = 0;
    std::vector<std::vector<int>> clauses;
};

}  // namespace rdfex

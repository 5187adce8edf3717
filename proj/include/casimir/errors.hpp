#pragma once

#include <stdexcept>
#include <string>

namespace casimir {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IndexOutOfRange : std::out_of_range {
    using std::out_of_range::out_of_range;
};

// A configured size cap (terms, monomials, solver entries, depth) was hit.
struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotExpressible : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnassignedSymbol : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EmbeddingCheckFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace casimir

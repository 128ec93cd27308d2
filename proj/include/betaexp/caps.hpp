#pragma once

#include <cstddef>

namespace betaexp {

// Resource guards.  Defaults are safe for interactive use; callers raise them
// deliberately (the CLI reads BETAEXP_* environment overrides).
struct caps {
    int depth_cap = 30;                    // orbit-based prefix counting
    int oracle_depth_cap = 22;             // full 2^n word enumeration
    int measure_depth_cap = 24;            // level measure construction
    std::size_t enum_cap = 1'000'000;      // max words materialized
    std::size_t piece_budget = 2'000'000;  // max pieces per density
};

} // namespace betaexp

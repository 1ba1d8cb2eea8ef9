#pragma once

#include <string>
#include <vector>

namespace stac {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

/// Self-contained correctness checks runnable from any install: exact EDT vs
/// exhaustive search, sphere SDF fidelity, the zero-strength identity warp,
/// and the boundary enlargement magnitude. Used by the `verify` CLI command.
std::vector<CheckResult> run_verify_suite();

} // namespace stac

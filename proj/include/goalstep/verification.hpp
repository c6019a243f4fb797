#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "goalstep/schemes.hpp"

namespace goalstep {

struct CheckRow {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Built-in verification battery: order conditions of the RK4 pair, theta
/// pair settings, seminorm identities and toy exact-solution residuals.
/// The RK4 pair is a parameter so a tampered copy can serve as a negative
/// control.
std::vector<CheckRow> run_check_battery(const SchemePair& rk4 = builtin_rk4_pair());

/// Prints an aligned pass/fail table; returns true when every row passed.
bool print_check_table(const std::vector<CheckRow>& rows, std::ostream& out);

}  // namespace goalstep

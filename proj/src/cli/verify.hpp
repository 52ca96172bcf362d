#pragma once

#include <string>
#include <vector>

#include "meanper/cli.hpp"

namespace meanper::cli {

struct Check {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

/// Fixture suites behind `verify`: bessel | tent | weighted.
std::vector<Check> run_suite(const std::string& suite, const RunConfig& cfg);

}  // namespace meanper::cli

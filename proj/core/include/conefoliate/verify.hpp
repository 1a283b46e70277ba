#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace conefoliate {

struct CheckResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string summary;
    std::vector<std::pair<std::string, double>> metrics;
    double seconds = 0;
};

/// Names of the acceptance checks in order.
std::vector<std::string> acceptance_suite_names();

/// Runs the named checks (all when empty). Independent evaluations inside a
/// check are spread over `threads` workers with results gathered in order;
/// `seed` drives the random probes.
std::vector<CheckResult> run_acceptance(const std::vector<std::string>& names = {}, int threads = 1,
                                        unsigned seed = 1, std::ostream* log = nullptr);

/// Orbit-formula mean curvature against the embedding oracle at sample
/// points, in the dilation-normalized frame (differences times the cone radius).
double oracle_mismatch(const std::string& family, int points = 20);

}  // namespace conefoliate

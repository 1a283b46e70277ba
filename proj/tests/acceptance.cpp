// Runs every acceptance criterion and prints one line per criterion.

#include <cstdlib>
#include <iostream>

#include "conefoliate/io.hpp"
#include "conefoliate/verify.hpp"

int main() {
    int threads = 1;
    try {
        threads = conefoliate::resolve_threads(1);
    } catch (const std::exception& e) {
        std::cerr << e.what() << '\n';
        return 2;
    }
    const auto results = conefoliate::run_acceptance({}, threads, 1, &std::cout);
    int failed = 0;
    for (const auto& r : results) failed += r.pass ? 0 : 1;
    std::cout << results.size() - failed << '/' << results.size() << " criteria pass\n";
    return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}

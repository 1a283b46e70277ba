#pragma once

#include <cmath>

#include "conefoliate/jet.hpp"

namespace conefoliate {

/// 6x^5 - 15x^4 + 10x^3 on [0,1], clamped outside.
template <class T>
T smoothstep(const T& x) {
    if (value_of(x) <= 0.0) return T(0.0);
    if (value_of(x) >= 1.0) return T(1.0);
    return x * x * x * (10.0 - 15.0 * x + 6.0 * x * x);
}

/// 1 for r <= r_lambda, 0 for r >= 2 r_lambda; smoothstep in log r.
template <class T>
T cutoff_gamma1(const T& r, double r_lambda) {
    using std::log;
    return 1.0 - smoothstep((log(r) - std::log(r_lambda)) / std::log(2.0));
}

template <class T>
T cutoff_gamma2(const T& r, double r_lambda) {
    return 1.0 - cutoff_gamma1(r, r_lambda);
}

/// Generic log-radial step: 0 at r <= r_from, 1 at r >= r_to (r_from < r_to),
/// or the mirror image when r_from > r_to.
template <class T>
T cutoff_log_step(const T& r, double r_from, double r_to) {
    using std::log;
    return smoothstep((log(r) - std::log(r_from)) / (std::log(r_to) - std::log(r_from)));
}

}  // namespace conefoliate

#pragma once

// Endpoint grading for the theta chart. When 2 alpha is not an integer the
// density sin^(2 alpha)(theta) is not smooth at theta = 0, pi; composing with
// the sin^2 map x -> x - sin(2 pi x) / (2 pi) twice makes theta vanish like
// u^9 at both ends, so the integrand in u becomes a high power of u.

#include <cmath>
#include <numbers>

namespace meanper::detail {

/// Largest d theta / d u of the graded map; node budgets scale by it.
inline constexpr double kGradingStretch = 4.0;

inline bool needs_grading(double alpha) {
    const double twice = 2.0 * alpha;
    return std::abs(twice - std::nearbyint(twice)) > 1e-12;
}

namespace grading {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// x - sin(2 pi x) / (2 pi) for x in [0, 1/2], without cancellation near 0.
inline double half_map(double x) {
    const double y = kTwoPi * x;
    if (y < 0.5) {
        const double y2 = y * y;
        double series = 1.0 / 6227020800.0;
        series = 1.0 / 39916800.0 - y2 * series;
        series = 1.0 / 362880.0 - y2 * series;
        series = 1.0 / 5040.0 - y2 * series;
        series = 1.0 / 120.0 - y2 * series;
        series = 1.0 / 6.0 - y2 * series;
        return y * y2 * series / kTwoPi;
    }
    return x - std::sin(y) / kTwoPi;
}

inline double map(double x) { return x <= 0.5 ? half_map(x) : 1.0 - half_map(1.0 - x); }

inline double slope(double x) {
    const double s = std::sin(std::numbers::pi * std::min(x, 1.0 - x));
    return 2.0 * s * s;
}

inline double inverse(double y) {
    if (y > 0.5) return 1.0 - inverse(1.0 - y);
    double lo = 0.0;
    double hi = 0.5;
    while (true) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) return mid;
        (half_map(mid) < y ? lo : hi) = mid;
    }
}

}  // namespace grading

struct GradedTheta {
    double theta;        // in [0, pi]
    double complement;   // pi - theta, accurate near pi
    double dtheta;       // d theta / d u
};

/// theta = pi Phi(u / pi), Phi the twice-composed map.
inline GradedTheta graded_theta(double u) {
    const double x = std::clamp(u / std::numbers::pi, 0.0, 1.0);
    const double near = std::min(x, 1.0 - x);
    const double inner = grading::half_map(near);
    const double small = grading::half_map(inner);
    const double dtheta = grading::slope(inner) * grading::slope(near);
    if (x <= 0.5) return {std::numbers::pi * small, std::numbers::pi * (1.0 - small), dtheta};
    return {std::numbers::pi * (1.0 - small), std::numbers::pi * small, dtheta};
}

inline double graded_inverse(double theta) {
    const double y = std::clamp(theta / std::numbers::pi, 0.0, 1.0);
    return std::numbers::pi * grading::inverse(grading::inverse(y));
}

}  // namespace meanper::detail

#include "meanper/quad.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

#include "detail/chart.hpp"
#include "meanper/convolver.hpp"
#include "meanper/error.hpp"
#include "meanper/simd/kernels.hpp"

namespace meanper {

QuadratureRule gauss_legendre(std::size_t order) {
    require(order >= 1, ErrorKind::InvalidArgument, "gauss_legendre: order must be positive");
    const std::size_t n = order;
    const double nd = static_cast<double>(n);
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);

    // Legendre P_n and its derivative at x by the three-term recurrence.
    auto legendre = [n](double x, double& dp) {
        double p0 = 1.0;
        double p1 = x;
        for (std::size_t k = 2; k <= n; ++k) {
            const double kd = static_cast<double>(k);
            const double p2 = ((2.0 * kd - 1.0) * x * p1 - (kd - 1.0) * p0) / kd;
            p0 = p1;
            p1 = p2;
        }
        dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
        return p1;
    };

    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (nd + 0.5));
        double dp = 1.0;
        for (int iter = 0; iter < 100; ++iter) {
            const double p = legendre(x, dp);
            const double dx = p / dp;
            x -= dx;
            if (std::abs(dx) <= 1e-16) break;
        }
        if (2 * i + 1 == n) x = 0.0;
        legendre(x, dp);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[n - 1 - i] = x;
        rule.nodes[i] = -x;
        rule.weights[n - 1 - i] = w;
        rule.weights[i] = w;
    }
    return rule;
}

std::shared_ptr<const QuadratureRule> cached_gauss_legendre(std::size_t order) {
    static std::mutex mutex;
    static std::map<std::size_t, std::shared_ptr<const QuadratureRule>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[order];
    if (!slot) slot = std::make_shared<const QuadratureRule>(gauss_legendre(order));
    return slot;
}

Estimate integrate_weighted(const std::function<cplx(double)>& g, double alpha, double r, std::size_t order) {
    require(alpha > -0.5, ErrorKind::InvalidArgument, "integrate_weighted: alpha must exceed -1/2 (non-integrable weight)");
    require(r > 0.0, ErrorKind::InvalidArgument, "integrate_weighted: r must be positive");
    require(order >= 1, ErrorKind::InvalidArgument, "integrate_weighted: order must be positive");
    const double scale = std::pow(r, 2.0 * alpha);
    const bool graded = detail::needs_grading(alpha);
    auto with_order = [&](std::size_t n) {
        const auto rule = cached_gauss_legendre(n);
        cplx sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double u = 0.5 * std::numbers::pi * (rule->nodes[i] + 1.0);
            if (!graded) {
                const double s = std::sin(u);
                const double weight = alpha == 0.5 ? s : std::pow(s, 2.0 * alpha);
                sum += rule->weights[i] * weight * g(r * std::cos(u));
                continue;
            }
            const detail::GradedTheta th = detail::graded_theta(u);
            const double s = std::sin(std::min(th.theta, th.complement));
            if (s == 0.0 || th.dtheta == 0.0) continue;
            const double c = th.theta <= 0.5 * std::numbers::pi ? std::cos(th.theta) : -std::cos(th.complement);
            sum += rule->weights[i] * std::pow(s, 2.0 * alpha) * th.dtheta * g(r * c);
        }
        return 0.5 * std::numbers::pi * scale * sum;
    };
    const cplx fine = with_order(order);
    const cplx coarse = with_order(std::max<std::size_t>(1, order / 2));
    return {fine, std::abs(fine - coarse)};
}

std::vector<std::vector<cplx>> cumulative_moments(const Convolver& T, cplx lambda, std::span<const double> grid,
                                                  std::size_t moments) {
    require(moments >= 1 && moments <= simd::kMaxMoments, ErrorKind::InvalidArgument,
            "cumulative_moments: moment count out of range");
    const double r = T.radius();
    const double slack = 1e-12 * r;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        require(grid[i] >= -r - slack && grid[i] <= r + slack, ErrorKind::InvalidArgument,
                "cumulative_weighted: grid point outside the support [-r, r]");
        require(i == 0 || grid[i] >= grid[i - 1], ErrorKind::InvalidArgument,
                "cumulative_weighted: grid must be sorted ascending");
    }

    const detail::Chart chart(T);
    const double turns = std::ceil(std::abs(lambda) * r / std::numbers::pi);
    const double panels_total = 8.0 + 2.0 * chart.stretch() * turns;
    const double max_width = (chart.hi() - chart.lo()) / panels_total;
    const auto base = cached_gauss_legendre(16);
    const std::vector<double> ends = chart.segment_ends();

    std::vector<std::vector<cplx>> out(moments, std::vector<cplx>(grid.size()));
    std::vector<cplx> running(moments, 0.0);
    std::vector<cplx> part(moments);
    NodeSet segment;
    double u = chart.lo();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double target = chart.u_of(grid[i]);
        while (u < target) {
            const double stop = *std::upper_bound(ends.begin(), ends.end(), u);
            const double b = std::min(target, stop);
            const auto panels = static_cast<std::size_t>(std::max(1.0, std::ceil((b - u) / max_width)));
            segment.t.clear();
            segment.w.clear();
            chart.append(u, b, panels, *base, segment);
            simd::exp_moments(segment.t, segment.w, lambda, part);
            for (std::size_t p = 0; p < moments; ++p) running[p] += part[p];
            u = b;
        }
        for (std::size_t p = 0; p < moments; ++p) out[p][i] = running[p];
    }
    return out;
}

std::vector<cplx> cumulative_weighted(const Convolver& T, cplx lambda, std::span<const double> grid) {
    return std::move(cumulative_moments(T, lambda, grid, 1).front());
}

}  // namespace meanper

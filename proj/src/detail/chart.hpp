#pragma once

// Integration variable for a convolver's support. Weighted profiles use
// theta with t = -r cos(theta), which absorbs the algebraic endpoint
// singularity; the tent integrates in t directly with a break at its apex.

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <vector>

#include "detail/grading.hpp"
#include "meanper/convolver.hpp"

namespace meanper::detail {

class Chart {
public:
    explicit Chart(const Convolver& T) : T_(T) {
        if (T.kind() == ConvolverKind::Tent) {
            lo_ = -T.radius();
            hi_ = T.radius();
            breaks_ = {0.0};
        } else {
            lo_ = 0.0;
            hi_ = std::numbers::pi;
            scale_ = std::pow(T.radius(), 2.0 * T.alpha());
            graded_ = needs_grading(T.alpha());
        }
    }

    /// Bound on |dt/du| / r, used to scale node budgets.
    double stretch() const { return graded_ ? kGradingStretch : 1.0; }

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    const std::vector<double>& breaks() const { return breaks_; }

    double t_of(double u) const {
        if (T_.kind() == ConvolverKind::Tent) return u;
        if (!graded_) return -T_.radius() * std::cos(u);
        const GradedTheta g = graded_theta(u);
        const double c = g.theta <= 0.5 * std::numbers::pi ? std::cos(g.theta) : -std::cos(g.complement);
        return -T_.radius() * c;
    }

    double u_of(double t) const {
        const double r = T_.radius();
        if (T_.kind() == ConvolverKind::Tent) return std::clamp(t, -r, r);
        const double theta = std::acos(std::clamp(-t / r, -1.0, 1.0));
        return graded_ ? graded_inverse(theta) : theta;
    }

    /// T(t(u)) dt/du
    double density(double u) const {
        if (T_.kind() == ConvolverKind::Tent) return std::max(0.0, 1.0 - std::abs(u) / T_.radius());
        if (!graded_) {
            const double s = std::sin(u);
            const double weight = T_.alpha() == 0.5 ? s : std::pow(s, 2.0 * T_.alpha());
            return scale_ * weight * T_.h(t_of(u));
        }
        const GradedTheta g = graded_theta(u);
        const double s = std::sin(std::min(g.theta, g.complement));
        if (g.dtheta == 0.0 || s == 0.0) return 0.0;
        return scale_ * std::pow(s, 2.0 * T_.alpha()) * T_.h(t_of(u)) * g.dtheta;
    }

    /// dt/du
    double jacobian(double u) const {
        if (T_.kind() == ConvolverKind::Tent) return 1.0;
        if (!graded_) return T_.radius() * std::sin(u);
        const GradedTheta g = graded_theta(u);
        return T_.radius() * std::sin(std::min(g.theta, g.complement)) * g.dtheta;
    }

    /// Appends `panels` equal panels of `base` over [ua, ub] (ua < ub, no
    /// interior break assumed). Weights carry T(t) dt/du, or only dt/du when
    /// `with_profile` is false.
    void append(double ua, double ub, std::size_t panels, const QuadratureRule& base, NodeSet& out,
                bool with_profile = true) const {
        const double width = (ub - ua) / static_cast<double>(panels);
        for (std::size_t k = 0; k < panels; ++k) {
            const double a = ua + width * static_cast<double>(k);
            const double half = 0.5 * width;
            const double mid = a + half;
            for (std::size_t i = 0; i < base.order(); ++i) {
                const double u = mid + half * base.nodes[i];
                out.t.push_back(t_of(u));
                out.w.push_back(half * base.weights[i] * (with_profile ? density(u) : jacobian(u)));
            }
        }
    }

    /// Whole support, `panels_per_segment` panels between consecutive breaks.
    NodeSet composite(std::size_t panels_per_segment, const QuadratureRule& base, bool with_profile = true) const {
        NodeSet out;
        double a = lo_;
        for (double b : segment_ends()) {
            append(a, b, panels_per_segment, base, out, with_profile);
            a = b;
        }
        return out;
    }

    std::vector<double> segment_ends() const {
        std::vector<double> ends = breaks_;
        ends.push_back(hi_);
        return ends;
    }

    std::size_t segment_count() const { return breaks_.size() + 1; }

private:
    const Convolver& T_;
    double lo_ = 0.0;
    double hi_ = 0.0;
    double scale_ = 1.0;
    bool graded_ = false;
    std::vector<double> breaks_;
};

/// Per-convolver memo of the single-panel transform rules, keyed by order.
struct RuleCache {
    std::mutex mutex;
    std::map<std::size_t, std::shared_ptr<const NodeSet>> transform_rules;
};

}  // namespace meanper::detail

#include "meanper/convolver.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "detail/chart.hpp"
#include "meanper/error.hpp"
#include "meanper/simd/kernels.hpp"

namespace meanper {

Convolver::Convolver(ConvolverKind kind, double alpha, double r, std::vector<double> h)
    : kind_(kind), alpha_(alpha), r_(r), h_(std::move(h)), cache_(std::make_shared<detail::RuleCache>()) {
    require(std::isfinite(r) && r > 0.0, ErrorKind::InvalidArgument, "convolver: r must be positive");
    require(std::isfinite(alpha) && alpha > -0.5, ErrorKind::InvalidArgument, "convolver: alpha > -1/2 required");
    for (double c : h_) require(std::isfinite(c), ErrorKind::InvalidArgument, "convolver: h coefficients must be finite");
}

Convolver Convolver::gegenbauer(double alpha, double r) { return {ConvolverKind::Gegenbauer, alpha, r, {}}; }

Convolver Convolver::weighted(double alpha, double r, std::vector<double> h_coeffs) {
    require(!h_coeffs.empty(), ErrorKind::InvalidArgument, "convolver: weighted kind needs h coefficients");
    return {ConvolverKind::Weighted, alpha, r, std::move(h_coeffs)};
}

Convolver Convolver::tent(double r) { return {ConvolverKind::Tent, 0.5, r, {}}; }

double Convolver::h(double t) const {
    if (kind_ != ConvolverKind::Weighted) return 1.0;
    const double t2 = t * t;
    double acc = 0.0;
    for (auto it = h_.rbegin(); it != h_.rend(); ++it) acc = acc * t2 + *it;
    return acc;
}

double Convolver::operator()(double t) const {
    if (std::abs(t) > r_) return 0.0;
    if (kind_ == ConvolverKind::Tent) return std::max(0.0, 1.0 - std::abs(t) / r_);
    const double base = r_ * r_ - t * t;
    const double weight = alpha_ == 0.5 ? 1.0 : std::pow(base, alpha_ - 0.5);
    return weight * h(t);
}

std::string Convolver::describe() const {
    std::ostringstream out;
    switch (kind_) {
    case ConvolverKind::Gegenbauer: out << "gegenbauer(alpha=" << alpha_ << ", r=" << r_ << ")"; break;
    case ConvolverKind::Weighted:
        out << "weighted(alpha=" << alpha_ << ", r=" << r_ << ", h=[";
        for (std::size_t j = 0; j < h_.size(); ++j) out << (j ? "," : "") << h_[j];
        out << "])";
        break;
    case ConvolverKind::Tent: out << "tent(r=" << r_ << ")"; break;
    }
    return out.str();
}

double eval_convolver(const Convolver& T, double t) { return T(t); }

NodeSet support_nodes(const Convolver& T, std::size_t panels, std::size_t nodes) {
    const detail::Chart chart(T);
    const std::size_t per_segment = std::max<std::size_t>(1, (panels + chart.segment_count() - 1) / chart.segment_count());
    return chart.composite(per_segment, *cached_gauss_legendre(nodes));
}

cplx integrate_against(const Convolver& T, const std::function<cplx(double)>& g, std::size_t panels) {
    const NodeSet set = support_nodes(T, panels);
    cplx sum = 0.0;
    for (std::size_t i = 0; i < set.t.size(); ++i) sum += set.w[i] * g(set.t[i]);
    return sum;
}

std::size_t effective_order(const Convolver& T, cplx z, std::size_t order) {
    const double stretch = detail::Chart(T).stretch();
    const auto needed = static_cast<std::size_t>(std::ceil(0.9 * stretch * std::abs(z) * T.radius())) + 48;
    if (needed <= order) return order;
    return (needed + 31) / 32 * 32;
}

namespace {

std::shared_ptr<const NodeSet> transform_rule(const Convolver& T, std::size_t order) {
    auto& cache = T.rule_cache();
    std::lock_guard lock(cache.mutex);
    auto& slot = cache.transform_rules[order];
    if (!slot) slot = std::make_shared<const NodeSet>(detail::Chart(T).composite(1, *cached_gauss_legendre(order)));
    return slot;
}

// (-i)^p
cplx minus_i_power(std::size_t p) {
    static constexpr cplx table[4] = {{1.0, 0.0}, {0.0, -1.0}, {-1.0, 0.0}, {0.0, 1.0}};
    return table[p % 4];
}

std::vector<cplx> moments_at(const Convolver& T, cplx z, std::size_t count, std::size_t order) {
    const auto rule = transform_rule(T, order);
    std::vector<cplx> out(count);
    simd::exp_moments(rule->t, rule->w, z, out);
    for (std::size_t p = 0; p < count; ++p) out[p] *= minus_i_power(p);
    return out;
}

}  // namespace

std::vector<cplx> transform_derivatives(const Convolver& T, cplx z, std::size_t count, std::size_t order) {
    require(count >= 1 && count <= simd::kMaxMoments, ErrorKind::InvalidArgument,
            "transform_derivatives: derivative count out of range");
    return moments_at(T, z, count, effective_order(T, z, order));
}

TransformValue fourier_derivative(const Convolver& T, cplx z, int n, std::size_t order) {
    require(n >= 0 && n <= kMaxDerivativeOrder, ErrorKind::InvalidArgument,
            "fourier_derivative: order must lie in [0, " + std::to_string(kMaxDerivativeOrder) + "]");
    const std::size_t count = static_cast<std::size_t>(n) + 1;
    const std::size_t base = effective_order(T, z, order);
    const cplx value = moments_at(T, z, count, base)[count - 1];
    const cplx finer = moments_at(T, z, count, 2 * base)[count - 1];
    return {value, std::abs(finer - value)};
}

TransformValue fourier(const Convolver& T, cplx z, std::size_t order) { return fourier_derivative(T, z, 0, order); }

cplx fourier_closed_form(const Convolver& T, cplx z) {
    require(T.kind() == ConvolverKind::Gegenbauer, ErrorKind::InvalidArgument,
            "fourier_closed_form: only defined for the Gegenbauer convolver");
    require(z != cplx(0.0), ErrorKind::InvalidArgument, "fourier_closed_form: z = 0 (use fourier for the limit)");
    // T^ is even; folding to Re z >= 0 keeps z^alpha on the principal branch.
    if (z.real() < 0.0) z = -z;
    const double alpha = T.alpha();
    const double r = T.radius();
    const double c = std::sqrt(std::numbers::pi) * gamma_fn(alpha + 0.5) * std::pow(2.0 * r, alpha);
    if (z.imag() == 0.0) return c * bessel_j(alpha, r * z.real()) / std::pow(z.real(), alpha);
    return c * bessel_j(alpha, r * z) / std::pow(z, alpha);
}

}  // namespace meanper

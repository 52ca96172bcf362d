#include "meanper/coeff.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "detail/chart.hpp"
#include "meanper/csv.hpp"
#include "meanper/error.hpp"
#include "meanper/parallel.hpp"
#include "meanper/simd/kernels.hpp"

namespace meanper {

namespace {

constexpr cplx kI{0.0, 1.0};

double factorial(std::size_t n) {
    double f = 1.0;
    for (std::size_t k = 2; k <= n; ++k) f *= static_cast<double>(k);
    return f;
}

cplx i_power(int m) {
    static constexpr std::array<cplx, 4> table = {cplx{1.0, 0.0}, cplx{0.0, 1.0}, cplx{-1.0, 0.0}, cplx{0.0, -1.0}};
    return table[static_cast<std::size_t>(m % 4)];
}

std::string show(cplx z) {
    std::ostringstream out;
    out.precision(10);
    out << z.real();
    if (z.imag() != 0.0) out << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
    return out.str();
}

void merge_term(std::vector<ExponentialTerm>& terms, const ExponentialTerm& term) {
    for (ExponentialTerm& existing : terms) {
        if (existing.lambda == term.lambda && existing.m == term.m) {
            existing.c += term.c;
            return;
        }
    }
    terms.push_back(term);
}

}  // namespace

FunctionSpec FunctionSpec::exponential_sum(std::vector<ExponentialTerm> terms, double half_width) {
    require(std::isfinite(half_width) && half_width > 0.0, ErrorKind::InvalidArgument,
            "function: half_width must be positive");
    for (std::size_t i = 0; i < terms.size(); ++i) {
        require(terms[i].m >= 0, ErrorKind::InvalidArgument, "function: monomial degree must be nonnegative");
        for (std::size_t j = 0; j < i; ++j) {
            require(!(terms[i].lambda == terms[j].lambda && terms[i].m == terms[j].m), ErrorKind::InvalidArgument,
                    "function: duplicate (lambda, m) term");
        }
    }
    return FunctionSpec(Terms{std::move(terms)}, half_width);
}

FunctionSpec FunctionSpec::sampled(std::vector<double> grid, std::vector<cplx> values, int smoothness_k) {
    require(grid.size() >= 4, ErrorKind::InvalidArgument, "function: at least 4 samples required");
    require(grid.size() == values.size(), ErrorKind::InvalidArgument, "function: grid/value size mismatch");
    require(smoothness_k >= 0, ErrorKind::InvalidArgument, "function: smoothness_k must be nonnegative");
    for (std::size_t i = 1; i < grid.size(); ++i) {
        require(grid[i] > grid[i - 1], ErrorKind::InvalidArgument, "function: sample grid must be strictly increasing");
    }
    for (cplx v : values) {
        require(std::isfinite(v.real()) && std::isfinite(v.imag()), ErrorKind::InvalidArgument,
                "function: sample values must be finite");
    }
    const double half_width = grid.back();
    require(half_width > 0.0 && std::abs(grid.front() + half_width) <= 1e-12 * std::max(1.0, half_width),
            ErrorKind::InvalidArgument, "function: sample grid must span a symmetric interval [-r, r]");
    return FunctionSpec(Samples{std::move(grid), std::move(values), smoothness_k}, half_width);
}

std::optional<int> FunctionSpec::smoothness_k() const {
    if (const auto* s = std::get_if<Samples>(&data_)) return s->smoothness_k;
    return std::nullopt;
}

const std::vector<ExponentialTerm>& FunctionSpec::terms() const {
    require(!is_sampled(), ErrorKind::InvalidArgument, "function: not an exponential sum");
    return std::get<Terms>(data_).terms;
}

const std::vector<double>& FunctionSpec::grid() const {
    require(is_sampled(), ErrorKind::InvalidArgument, "function: not sampled");
    return std::get<Samples>(data_).grid;
}

const std::vector<cplx>& FunctionSpec::values() const {
    require(is_sampled(), ErrorKind::InvalidArgument, "function: not sampled");
    return std::get<Samples>(data_).values;
}

cplx FunctionSpec::operator()(double t) const {
    cplx out;
    evaluate(std::span<const double>(&t, 1), std::span<cplx>(&out, 1));
    return out;
}

void FunctionSpec::evaluate(std::span<const double> t, std::span<cplx> out) const {
    const double slack = 1e-12 * std::max(1.0, half_width_);
    for (double x : t) {
        if (!(std::abs(x) <= half_width_ + slack)) {
            std::ostringstream msg;
            msg << "function: value requested at t=" << x << " outside [-" << half_width_ << ", " << half_width_ << "]";
            throw Error(ErrorKind::Domain, msg.str());
        }
    }
    if (const auto* s = std::get_if<Samples>(&data_)) {
        for (std::size_t j = 0; j < t.size(); ++j) {
            out[j] = interpolate_cubic(s->grid, s->values, std::clamp(t[j], -half_width_, half_width_));
        }
        return;
    }
    const auto& terms = std::get<Terms>(data_).terms;
    std::vector<simd::SeriesTerm> series;
    series.reserve(terms.size());
    for (const auto& term : terms) series.push_back({term.lambda, term.c * i_power(term.m), term.m});
    simd::exp_series(t, series, out);
}

double FunctionSpec::bandwidth() const {
    if (const auto* s = std::get_if<Samples>(&data_)) {
        double peak = 0.0;
        double slope = 0.0;
        for (std::size_t i = 0; i < s->values.size(); ++i) {
            peak = std::max(peak, std::abs(s->values[i]));
            if (i > 0) slope = std::max(slope, std::abs(s->values[i] - s->values[i - 1]) / (s->grid[i] - s->grid[i - 1]));
        }
        return peak > 0.0 ? slope / peak : 0.0;
    }
    double band = 0.0;
    for (const auto& term : std::get<Terms>(data_).terms) band = std::max(band, std::abs(term.lambda));
    return band;
}

FunctionSpec apply_differential(const FunctionSpec& f, std::span<const cplx> poly) {
    std::vector<ExponentialTerm> current = f.terms();
    std::vector<ExponentialTerm> result;
    for (std::size_t k = 0; k < poly.size(); ++k) {
        if (k > 0) {
            // d/dt [(it)^m e^{i lambda t}] = i m (it)^{m-1} e^{i lambda t} + i lambda (it)^m e^{i lambda t}
            std::vector<ExponentialTerm> next;
            for (const auto& term : current) {
                if (term.m > 0) merge_term(next, {term.lambda, term.m - 1, term.c * kI * static_cast<double>(term.m)});
                merge_term(next, {term.lambda, term.m, term.c * kI * term.lambda});
            }
            current = std::move(next);
        }
        if (poly[k] == cplx(0.0)) continue;
        for (const auto& term : current) merge_term(result, {term.lambda, term.m, poly[k] * term.c});
    }
    return FunctionSpec::exponential_sum(std::move(result), f.half_width());
}

cplx interpolate_cubic(std::span<const double> grid, std::span<const cplx> values, double t) {
    const std::size_t n = grid.size();
    require(n >= 4 && values.size() == n, ErrorKind::InvalidArgument, "interpolate_cubic: need at least 4 samples");
    const auto upper = std::upper_bound(grid.begin(), grid.end(), t);
    const std::size_t interval = upper == grid.begin() ? 0 : static_cast<std::size_t>(upper - grid.begin()) - 1;
    const std::size_t start = std::min(interval > 0 ? interval - 1 : 0, n - 4);
    cplx sum = 0.0;
    for (std::size_t a = start; a < start + 4; ++a) {
        double basis = 1.0;
        for (std::size_t b = start; b < start + 4; ++b) {
            if (b != a) basis *= (t - grid[b]) / (grid[a] - grid[b]);
        }
        sum += basis * values[a];
    }
    return sum;
}

const CoefficientEntry* CoefficientTable::find(std::size_t index, int eta) const {
    const auto it = std::lower_bound(entries.begin(), entries.end(), std::pair{index, eta},
                                     [](const CoefficientEntry& e, const std::pair<std::size_t, int>& key) {
                                         return std::pair{e.index, e.eta} < key;
                                     });
    if (it == entries.end() || it->index != index || it->eta != eta) return nullptr;
    return &*it;
}

double CoefficientTable::max_abs(std::size_t index) const {
    double best = 0.0;
    for (int eta = 0; const CoefficientEntry* e = find(index, eta); ++eta) best = std::max(best, std::abs(e->c));
    return best;
}

std::vector<cplx> a_sequence(const SpectralPoint& sp, int eta) {
    const auto n = static_cast<std::size_t>(sp.multiplicity);
    require(n >= 1, ErrorKind::InvalidArgument, "a_sequence: multiplicity must be positive");
    require(eta >= 0 && eta <= sp.m, ErrorKind::InvalidArgument, "a_sequence: eta outside [0, m]");
    require(sp.derivs.size() >= 2 * n, ErrorKind::InvalidArgument, "a_sequence: derivatives through 2n-1 required");
    const cplx lead = sp.derivs[n];
    if (std::abs(lead) < 1e-12 * sp.scale()) {
        throw Error(ErrorKind::DegenerateZero, "a_sequence: T^(n)(lambda) vanishes at lambda=" + show(sp.lambda));
    }
    const double n_fact = factorial(n);
    std::vector<cplx> a(n);
    for (std::size_t j = 0; j < n; ++j) {
        cplx bracket = (static_cast<int>(j) == eta) ? cplx(1.0 / factorial(j)) : cplx(0.0);
        for (std::size_t s = 0; s < j; ++s) {
            const std::size_t order = n - s + j;
            bracket -= a[s] * sp.derivs[order] / factorial(order);
        }
        a[j] = n_fact / lead * bracket;
    }
    return a;
}

double sigma(const SpectralPoint& sp) {
    double total = 0.0;
    for (cplx a : a_sequence(sp, 0)) total += std::abs(a);
    return total;
}

void fill_sigma(Spectrum& S) {
    for (SpectralPoint& sp : S.points) sp.sigma = sigma(sp);
}

cplx interpolating_entire(const Convolver& T, const SpectralPoint& sp, int eta, cplx z) {
    const auto a = a_sequence(sp, eta);
    const auto n = static_cast<std::size_t>(sp.multiplicity);
    const cplx w = z - sp.lambda;
    if (std::abs(w) >= 0.25) {
        const cplx value = transform_derivatives(T, z, 1)[0];
        cplx sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) sum += a[j] * value / std::pow(w, static_cast<int>(n - j));
        return sum;
    }
    // Local development: T^(z) = sum_p T^(p)(lambda) w^p / p!, p >= n.
    const std::size_t count = std::min<std::size_t>(n + 32, simd::kMaxMoments);
    const auto d = transform_derivatives(T, sp.lambda, count);
    cplx sum = 0.0;
    cplx power = 1.0;
    for (std::size_t q = 0; q + n < count; ++q) {
        cplx coeff = 0.0;
        for (std::size_t j = 0; j <= std::min(q, n - 1); ++j) {
            const std::size_t order = n + q - j;
            coeff += a[j] * d[order] / factorial(order);
        }
        sum += coeff * power;
        power *= w;
    }
    return sum;
}

std::vector<cplx> kernel_values(const Convolver& T, const SpectralPoint& sp, std::span<const double> s) {
    if (sp.multiplicity > 2) {
        throw Error(ErrorKind::UnsupportedMultiplicity,
                    "build_kernel: multiplicity " + std::to_string(sp.multiplicity) + " at " + show(sp.lambda) +
                        " exceeds the supported maximum of 2");
    }
    const auto a = a_sequence(sp, 0);
    const auto g = cumulative_moments(T, sp.lambda, s, static_cast<std::size_t>(sp.multiplicity));
    std::vector<cplx> out(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        const cplx phase = std::exp(kI * sp.lambda * s[i]);
        // K1 has transform T^/(z - lambda); K2 = T^/(z - lambda)^2.
        const cplx k1 = kI * phase * g[0][i];
        if (sp.multiplicity == 1) {
            out[i] = a[0] * k1;
        } else {
            const cplx k2 = -phase * (s[i] * g[0][i] - g[1][i]);
            out[i] = a[0] * k2 + a[1] * k1;
        }
    }
    return out;
}

BiorthogonalKernel build_kernel(const Convolver& T, const SpectralPoint& sp, std::size_t grid_size) {
    require(grid_size >= 2, ErrorKind::InvalidArgument, "build_kernel: grid_size must be at least 2");
    const double r = T.radius();
    BiorthogonalKernel kernel;
    kernel.lambda = sp.lambda;
    kernel.grid.resize(grid_size);
    for (std::size_t i = 0; i < grid_size; ++i) {
        kernel.grid[i] = -r + 2.0 * r * static_cast<double>(i) / static_cast<double>(grid_size - 1);
    }
    kernel.grid.back() = r;
    kernel.values = kernel_values(T, sp, kernel.grid);
    kernel.a0 = a_sequence(sp, 0)[0];
    return kernel;
}

std::vector<double> default_probes(const FunctionSpec& f, const Convolver& T) {
    const double reach = f.half_width() - T.radius();
    require(reach > 0.0, ErrorKind::InvalidArgument,
            "default_probes: f's interval is not wider than supp T, so (a,b)_T is empty");
    return {-0.5 * reach, 0.0, 0.5 * reach};
}

CoefficientTable extract_coefficients(const FunctionSpec& f, const Convolver& T, const Spectrum& S,
                                      std::span<const double> probes) {
    const double r = T.radius();
    const double reach = f.half_width() - r;
    require(!probes.empty(), ErrorKind::InvalidArgument, "extract_coefficients: no probes");
    for (double t : probes) {
        require(std::abs(t) <= reach + 1e-12 * std::max(1.0, f.half_width()), ErrorKind::InvalidArgument,
                "extract_coefficients: probe outside (a,b)_T");
    }

    const detail::Chart chart(T);
    const auto base = cached_gauss_legendre(16);
    std::vector<std::vector<CoefficientEntry>> per_point(S.points.size());
    parallel_for(S.points.size(), [&](std::size_t i) {
        const SpectralPoint& sp = S.points[i];
        require(probes.size() >= static_cast<std::size_t>(sp.multiplicity), ErrorKind::InvalidArgument,
                "extract_coefficients: need at least m + 1 probes");
        const double turns = std::ceil((std::abs(sp.lambda) + f.bandwidth()) * r / std::numbers::pi);
        const auto panels = static_cast<std::size_t>(32.0 + 4.0 * chart.stretch() * turns);
        const std::size_t per_segment = (panels + chart.segment_count() - 1) / chart.segment_count();
        const NodeSet nodes = chart.composite(per_segment, *base, false);
        const auto kernel = kernel_values(T, sp, nodes.t);

        std::vector<cplx> v(probes.size());
        std::vector<double> shifted(nodes.t.size());
        std::vector<cplx> fv(nodes.t.size());
        for (std::size_t p = 0; p < probes.size(); ++p) {
            for (std::size_t j = 0; j < nodes.t.size(); ++j) shifted[j] = probes[p] - nodes.t[j];
            f.evaluate(shifted, fv);
            cplx conv = 0.0;
            for (std::size_t j = 0; j < nodes.t.size(); ++j) conv += nodes.w[j] * fv[j] * kernel[j];
            v[p] = conv * std::exp(-kI * sp.lambda * probes[p]);
        }

        std::vector<CoefficientEntry>& out = per_point[i];
        double spread = 0.0;
        double size = 0.0;
        if (sp.multiplicity == 1) {
            cplx mean = 0.0;
            for (cplx x : v) mean += x;
            mean /= static_cast<double>(v.size());
            for (cplx x : v) spread = std::max(spread, std::abs(x - mean));
            size = std::abs(mean);
            out.push_back({sp.index, 0, sp.lambda, mean, spread});
        } else {
            // v(t) = c0 + c1 (i t): least-squares line in t.
            double st = 0.0;
            double stt = 0.0;
            cplx sv = 0.0;
            cplx stv = 0.0;
            for (std::size_t p = 0; p < v.size(); ++p) {
                st += probes[p];
                stt += probes[p] * probes[p];
                sv += v[p];
                stv += probes[p] * v[p];
            }
            const double count = static_cast<double>(v.size());
            const double det = count * stt - st * st;
            require(det > 0.0, ErrorKind::InvalidArgument, "extract_coefficients: probes must be distinct");
            const cplx slope = (count * stv - st * sv) / det;
            const cplx intercept = (sv - slope * st) / count;
            for (std::size_t p = 0; p < v.size(); ++p) {
                spread = std::max(spread, std::abs(v[p] - intercept - slope * probes[p]));
            }
            const cplx c1 = -kI * slope;
            size = std::max(std::abs(intercept), std::abs(c1));
            out.push_back({sp.index, 0, sp.lambda, intercept, spread});
            out.push_back({sp.index, 1, sp.lambda, c1, spread});
        }
        if (spread > kProbeSpreadTolerance * (1.0 + size)) {
            std::ostringstream msg;
            msg << "f not mean-periodic for T: probe spread " << spread << " at lambda=" << show(sp.lambda);
            throw Error(ErrorKind::InconsistentProbe, msg.str());
        }
    });

    CoefficientTable table{{}, std::make_shared<const FunctionSpec>(f), T};
    for (auto& entries : per_point) {
        for (auto& e : entries) table.entries.push_back(e);
    }
    std::sort(table.entries.begin(), table.entries.end(), [](const CoefficientEntry& a, const CoefficientEntry& b) {
        return std::pair{a.index, a.eta} < std::pair{b.index, b.eta};
    });
    return table;
}

DecayReport decay_report(const CoefficientTable& table, const Spectrum& S, int k) {
    std::vector<std::pair<double, double>> samples;  // (log|lambda|, log ratio)
    for (const SpectralPoint& sp : S.points) {
        const double c = table.max_abs(sp.index);
        const double mod = std::abs(sp.lambda);
        if (c <= 0.0 || mod <= 0.0) continue;
        const double s = sp.sigma ? *sp.sigma : sigma(sp);
        if (s <= 0.0) continue;
        samples.emplace_back(std::log(mod), std::log(c) + k * std::log(mod) - std::log(s));
    }
    std::stable_sort(samples.begin(), samples.end(), [](auto& a, auto& b) { return a.first < b.first; });
    samples.erase(samples.begin(), samples.begin() + static_cast<std::ptrdiff_t>(samples.size() / 2));
    if (samples.size() < 4) {
        throw Error(ErrorKind::InsufficientData,
                    "decay_report: " + std::to_string(samples.size()) + " usable points, at least 4 required");
    }
    double mx = 0.0;
    double my = 0.0;
    for (auto [x, y] : samples) {
        mx += x;
        my += y;
    }
    const double count = static_cast<double>(samples.size());
    mx /= count;
    my /= count;
    double sxx = 0.0;
    double sxy = 0.0;
    for (auto [x, y] : samples) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    require(sxx > 0.0, ErrorKind::InsufficientData, "decay_report: all points share one |lambda|");
    DecayReport report;
    report.slope = sxy / sxx;
    report.intercept = my - report.slope * mx;
    report.points_used = samples.size();
    for (auto [x, y] : samples) {
        report.max_residual = std::max(report.max_residual, std::abs(y - report.intercept - report.slope * x));
    }
    return report;
}

void write_coefficients_csv(std::ostream& out, std::span<const CoefficientEntry> entries) {
    csv::Writer w(out, {"index", "re_lambda", "im_lambda", "eta", "re_c", "im_c", "probe_spread"});
    for (const CoefficientEntry& e : entries) {
        w << e.index << e.lambda.real() << e.lambda.imag() << e.eta << e.c.real() << e.c.imag() << e.probe_spread;
        w.row();
    }
}

}  // namespace meanper

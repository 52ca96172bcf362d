#include "meanper/tail.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace meanper {

std::string_view verdict_name(Verdict verdict) {
    switch (verdict) {
    case Verdict::Converging: return "converging";
    case Verdict::Marginal: return "marginal";
    case Verdict::Diverging: return "diverging";
    }
    return "unknown";
}

Verdict classify(double tail_ratio, double tail_fraction) {
    if (tail_fraction <= kNegligibleTail) return Verdict::Converging;
    if (tail_ratio < kConvergingBelow) return Verdict::Converging;
    if (tail_ratio > kDivergingAbove) return Verdict::Diverging;
    return Verdict::Marginal;
}

TailSummary summarize_tail(std::span<const double> terms) {
    TailSummary out;
    const std::size_t n = terms.size();
    if (n == 0) {
        out.partial_sums = {0.0};
        return out;
    }
    out.partial_sums.reserve(n);
    double sum = 0.0;
    for (double t : terms) {
        sum += t;
        out.partial_sums.push_back(sum);
    }
    const double nd = static_cast<double>(n);
    // partial sum through 1-based index k
    auto through = [&](double k) {
        const auto idx = static_cast<std::size_t>(std::floor(k));
        return idx == 0 ? 0.0 : out.partial_sums[std::min(idx, n) - 1];
    };
    const double s_half = through(std::sqrt(nd));
    const double s_three = through(std::pow(nd, 0.75));
    const double previous = s_three - s_half;
    const double last = sum - s_three;
    if (previous > 0.0) {
        out.tail_ratio = last / previous;
    } else {
        out.tail_ratio = last > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    }
    out.tail_fraction = sum > 0.0 ? (previous + last) / sum : 0.0;
    out.verdict = classify(out.tail_ratio, out.tail_fraction);
    return out;
}

}  // namespace meanper

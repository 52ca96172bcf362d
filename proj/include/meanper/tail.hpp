#pragma once

#include <span>
#include <string_view>
#include <vector>

namespace meanper {

enum class Verdict { Converging, Marginal, Diverging };

std::string_view verdict_name(Verdict verdict);

inline constexpr double kConvergingBelow = 0.9;
inline constexpr double kDivergingAbove = 0.97;
/// Tails carrying at most this fraction of the total are treated as
/// converged regardless of their ratio (round-off floor).
inline constexpr double kNegligibleTail = 1e-6;

/// Partial sums of a nonnegative series together with a tail-ratio verdict.
///
/// The ratio compares the increment over the last quarter of the index range
/// on a logarithmic scale, k in (N^{3/4}, N], with the quarter before it,
/// k in (N^{1/2}, N^{3/4}]. A harmonic tail has ratio ~1 at every N, while
/// any p-series with p > 1 drives it towards 0.
struct TailSummary {
    std::vector<double> partial_sums;
    double tail_ratio = 0.0;
    double tail_fraction = 0.0;
    Verdict verdict = Verdict::Converging;
};

TailSummary summarize_tail(std::span<const double> terms);

Verdict classify(double tail_ratio, double tail_fraction);

}  // namespace meanper

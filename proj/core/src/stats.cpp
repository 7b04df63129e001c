#include "bellctx/stats.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "bellctx/errors.hpp"

namespace bellctx::stats {

MomentReport moments(std::span<const double> samples) {
    const std::size_t n = samples.size();
    if (n < 2) throw input_error("moment estimation needs at least 2 samples");

    // Welford's online update keeps the variance accumulation stable.
    double mean = 0.0;
    double m2 = 0.0;
    std::size_t count = 0;
    for (const double x : samples) {
        ++count;
        const double d1 = x - mean;
        mean += d1 / static_cast<double>(count);
        m2 += d1 * (x - mean);
    }
    const double variance = m2 / static_cast<double>(n - 1);

    MomentReport report;
    report.n = n;
    report.mean = mean;
    report.variance = variance;
    report.se_mean = std::sqrt(variance / static_cast<double>(n));
    report.se_variance = variance * std::sqrt(2.0 / static_cast<double>(n - 1));
    return report;
}

std::vector<double> linear_edges(double lo, double hi, std::size_t bins) {
    if (!(lo < hi) || bins == 0) throw input_error("histogram needs lo < hi and bins > 0");
    std::vector<double> edges(bins + 1);
    for (std::size_t i = 0; i <= bins; ++i) {
        edges[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bins);
    }
    return edges;
}

Histogram histogram(std::span<const double> samples, std::vector<double> edges) {
    if (edges.size() < 2 || !std::is_sorted(edges.begin(), edges.end()) ||
        std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
        throw input_error("histogram edges must be strictly increasing");
    }
    Histogram h;
    h.edges = std::move(edges);
    h.counts.assign(h.edges.size() - 1, 0);
    for (const double x : samples) {
        if (x < h.edges.front() || x > h.edges.back()) continue;
        const auto it = std::upper_bound(h.edges.begin(), h.edges.end(), x);
        std::size_t bin = static_cast<std::size_t>(it - h.edges.begin());
        bin = bin == 0 ? 0 : bin - 1;
        if (bin >= h.counts.size()) bin = h.counts.size() - 1;  // x == last edge
        ++h.counts[bin];
        ++h.total;
    }
    return h;
}

KsResult two_sample_ks(std::span<const double> a, std::span<const double> b, double alpha) {
    if (a.empty() || b.empty()) throw input_error("KS test needs non-empty samples");
    if (a.size() < 100 || b.size() < 100) {
        throw input_error("KS test uses asymptotic critical values; need n >= 100 per sample");
    }
    if (!(alpha > 0.0) || !(alpha < 1.0)) throw input_error("alpha must be in (0, 1)");

    std::vector<double> sa(a.begin(), a.end());
    std::vector<double> sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());

    const double n = static_cast<double>(sa.size());
    const double m = static_cast<double>(sb.size());
    double statistic = 0.0;
    std::size_t i = 0, j = 0;
    while (i < sa.size() && j < sb.size()) {
        // advance through ties on both sides before comparing the CDFs
        const double x = std::min(sa[i], sb[j]);
        while (i < sa.size() && sa[i] == x) ++i;
        while (j < sb.size() && sb[j] == x) ++j;
        const double gap =
            std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m);
        statistic = std::max(statistic, gap);
    }
    // past this point one CDF is pinned at 1, the other only grows toward it

    KsResult result;
    result.statistic = statistic;
    result.critical_value =
        std::sqrt(-std::log(alpha / 2.0) / 2.0) * std::sqrt((n + m) / (n * m));
    result.reject = statistic > result.critical_value;
    return result;
}

bool within_3se(const MomentReport& report, double target, Stat which) {
    const double estimate = which == Stat::Mean ? report.mean : report.variance;
    const double se = which == Stat::Mean ? report.se_mean : report.se_variance;
    return std::abs(estimate - target) <= 3.0 * se;
}

}  // namespace bellctx::stats

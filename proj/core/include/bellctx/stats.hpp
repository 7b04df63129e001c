#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace bellctx::stats {

// Sample moments with the standard errors used by the 3-sigma acceptance
// bands: se_mean = sqrt(variance/n), se_variance = variance * sqrt(2/(n-1)).
struct MomentReport {
    std::size_t n = 0;
    double mean = 0.0;
    double variance = 0.0;  // unbiased, n-1 divisor
    double se_mean = 0.0;
    double se_variance = 0.0;
};

// Throws input_error for n < 2.
MomentReport moments(std::span<const double> samples);

struct Histogram {
    std::vector<double> edges;   // strictly increasing bin boundaries
    std::vector<std::size_t> counts;
    std::size_t total = 0;       // == sum of counts (samples outside the edges are dropped)
};

std::vector<double> linear_edges(double lo, double hi, std::size_t bins);
Histogram histogram(std::span<const double> samples, std::vector<double> edges);

struct KsResult {
    double statistic = 0.0;       // sup_x |F_a(x) - F_b(x)|
    double critical_value = 0.0;  // asymptotic threshold at the given alpha
    bool reject = false;
};

// Two-sample Kolmogorov-Smirnov test with the asymptotic critical value
// c(alpha) sqrt((n+m)/(n m)), c(alpha) = sqrt(-ln(alpha/2)/2). Requires at
// least 100 samples per side (the asymptotic regime this library uses).
KsResult two_sample_ks(std::span<const double> a, std::span<const double> b, double alpha);

enum class Stat { Mean, Variance };

// |estimate - target| <= 3 * (corresponding standard error).
bool within_3se(const MomentReport& report, double target, Stat which);

}  // namespace bellctx::stats

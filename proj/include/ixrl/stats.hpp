#pragma once

#include <span>
#include <vector>

namespace ixrl {

// Normalized Shannon entropy of p over n categories, in [0, 1]. Zero when
// n == 1. Throws NumericError for negative entries or a sum away from 1.
double evenness(std::span<const double> p, int n);
inline double evenness(std::span<const double> p) { return evenness(p, static_cast<int>(p.size())); }

// Same, from nonnegative counts.
double evenness_of_counts(std::span<const double> counts, int n);

// Jensen-Shannon divergence with base-2 logs, in [0, 1].
double jsd(std::span<const double> p, std::span<const double> q);

// Per-category terms of jsd(p, q); they are nonnegative and sum to the total.
std::vector<double> jsd_terms(std::span<const double> p, std::span<const double> q);

// Shift a row so its minimum becomes eps, then divide by the sum.
std::vector<double> shift_normalize(std::span<const double> row, double eps = 1e-6);

struct OutlierSplit {
    std::vector<std::size_t> high;  // indices above mean + lambda * sd
    std::vector<std::size_t> low;   // indices below mean - lambda * sd
    double mean = 0.0;
    double stddev = 0.0;  // population
};

// Values strictly more than lambda population standard deviations from the
// mean. Zero variance or fewer than two values yields no outliers.
OutlierSplit outliers(std::span<const double> values, double lambda);

double mean(std::span<const double> v);
double population_stddev(std::span<const double> v);

}  // namespace ixrl

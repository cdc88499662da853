#include "ixrl/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ixrl/errors.hpp"

namespace ixrl {

namespace {

void check_distribution(std::span<const double> p) {
    double sum = 0.0;
    for (double x : p) {
        if (!std::isfinite(x) || x < 0.0) throw NumericError("distribution entries must be finite and nonnegative");
        sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw NumericError("distribution does not sum to 1 (sum " + std::to_string(sum) + ")");
}

}  // namespace

double evenness(std::span<const double> p, int n) {
    if (n < 1) throw NumericError("evenness needs at least one category");
    if (static_cast<int>(p.size()) > n) throw NumericError("more probabilities than categories");
    check_distribution(p);
    if (n == 1) return 0.0;
    double h = 0.0;
    for (double x : p)
        if (x > 0.0) h -= x * std::log(x);
    return std::clamp(h / std::log(static_cast<double>(n)), 0.0, 1.0);
}

double evenness_of_counts(std::span<const double> counts, int n) {
    double total = 0.0;
    for (double c : counts) {
        if (!std::isfinite(c) || c < 0.0) throw NumericError("counts must be finite and nonnegative");
        total += c;
    }
    if (total <= 0.0) throw NumericError("evenness of an empty histogram");
    std::vector<double> p(counts.begin(), counts.end());
    for (double& x : p) x /= total;
    // Renormalize away rounding so the sum check cannot trip on long histograms.
    const double s = std::accumulate(p.begin(), p.end(), 0.0);
    for (double& x : p) x /= s;
    return evenness(p, n);
}

std::vector<double> jsd_terms(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) throw NumericError("JSD over distributions of different sizes");
    check_distribution(p);
    check_distribution(q);
    std::vector<double> terms(p.size(), 0.0);
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double m = 0.5 * (p[i] + q[i]);
        if (p[i] > 0.0) terms[i] += 0.5 * p[i] * std::log2(p[i] / m);
        if (q[i] > 0.0) terms[i] += 0.5 * q[i] * std::log2(q[i] / m);
    }
    return terms;
}

double jsd(std::span<const double> p, std::span<const double> q) {
    const auto t = jsd_terms(p, q);
    return std::clamp(std::accumulate(t.begin(), t.end(), 0.0), 0.0, 1.0);
}

std::vector<double> shift_normalize(std::span<const double> row, double eps) {
    if (row.empty()) throw NumericError("cannot normalize an empty row");
    if (!(eps > 0.0)) throw NumericError("normalization epsilon must be positive");
    for (double x : row)
        if (!std::isfinite(x)) throw NumericError("non-finite value in normalized row");
    const double lo = *std::min_element(row.begin(), row.end());
    std::vector<double> out(row.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < row.size(); ++i) sum += out[i] = row[i] - lo + eps;
    for (double& x : out) x /= sum;
    return out;
}

double mean(std::span<const double> v) {
    if (v.empty()) return 0.0;
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double population_stddev(std::span<const double> v) {
    if (v.empty()) return 0.0;
    const double m = mean(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(v.size()));
}

OutlierSplit outliers(std::span<const double> values, double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw NumericError("outlier lambda must be positive");
    for (double x : values)
        if (!std::isfinite(x)) throw NumericError("non-finite value in outlier scan");
    OutlierSplit out;
    if (values.size() < 2) return out;
    out.mean = mean(values);
    out.stddev = population_stddev(values);
    // Values that are equal up to rounding must not produce outliers.
    const double scale = std::max(std::abs(out.mean), 1.0);
    if (out.stddev <= 1e-12 * scale) {
        out.stddev = 0.0;
        return out;
    }
    const double cut = lambda * out.stddev;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double d = values[i] - out.mean;
        if (d > cut) out.high.push_back(i);
        else if (-d > cut) out.low.push_back(i);
    }
    return out;
}

}  // namespace ixrl

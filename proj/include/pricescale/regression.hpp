#pragma once

#include <span>
#include <vector>

namespace pricescale {

/// Ordinary least-squares line y = intercept + slope * x.
struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_err = 0.0;  // standard error of the slope; 0 for two points
    std::size_t points = 0;
};

/// Unweighted OLS. Requires at least two points with distinct x.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

/// Weighted least squares with non-negative weights (at least two positive).
LinearFit fit_line(std::span<const double> x, std::span<const double> y,
                   std::span<const double> weights);

namespace stats {

double mean(std::span<const double> v);
// n - 1 denominator; 0 for fewer than two values.
double sample_stddev(std::span<const double> v);
double median(std::vector<double> v);
// Linear interpolation between order statistics, p in [0, 1].
double quantile(std::vector<double> v, double p);
double median_absolute_deviation(std::span<const double> v);

}  // namespace stats
}  // namespace pricescale

#pragma once

#include "pricescale/series.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace pricescale::pareto {

struct PriceRange {
    double lo = 0.0;
    double hi = 0.0;
};

/// Uniform-width histogram normalized to unit probability mass.
class Histogram {
public:
    /// Validates ascending edges, non-negative density and unit mass (1e-9).
    Histogram(std::vector<double> bin_edges, std::vector<double> density,
              std::size_t total_count);

    const std::vector<double>& bin_edges() const noexcept { return edges_; }
    const std::vector<double>& density() const noexcept { return density_; }
    std::size_t total_count() const noexcept { return total_count_; }
    std::size_t bins() const noexcept { return density_.size(); }
    double bin_width(std::size_t i) const { return edges_[i + 1] - edges_[i]; }
    double bin_center(std::size_t i) const { return 0.5 * (edges_[i] + edges_[i + 1]); }
    /// Sample count implied by density * width * total.
    double count(std::size_t i) const;

private:
    std::vector<double> edges_;
    std::vector<double> density_;
    std::size_t total_count_;
};

struct ParetoEstimate {
    double gamma = 0.0;
    double gamma_err = 0.0;
    PriceRange price_range;
    std::size_t bins_used = 0;
};

enum class MomentClass { NoMean, MeanOnly, MeanAndVariance };

std::string_view to_string(MomentClass c) noexcept;

enum class Weighting { Unweighted, CountWeighted };

/// Bins of `bin_width` anchored at range.lo; a trailing partial bin is not
/// formed. Samples outside the covered interval are excluded from normalization.
Histogram histogram(std::span<const double> samples, double bin_width, PriceRange range);
Histogram histogram(const PriceSeries& series, double bin_width, PriceRange range);

/// Log-log OLS of density against bin center over nonzero bins whose centers
/// lie in `range`; gamma = -slope - 1.
ParetoEstimate pareto_fit(const Histogram& hist, PriceRange range,
                          Weighting weighting = Weighting::Unweighted);

/// gamma <= 1: no mean; 1 < gamma <= 2: mean only; gamma > 2: mean and variance.
MomentClass classify_moments(double gamma) noexcept;
MomentClass classify_moments(const ParetoEstimate& est) noexcept;

struct TwoRangeReport {
    std::array<PriceRange, 2> ranges;
    std::array<std::optional<ParetoEstimate>, 2> estimates;  // nullopt when too few bins
};

TwoRangeReport two_range_report(const PriceSeries& series, std::array<PriceRange, 2> ranges,
                                double bin_width, Weighting weighting = Weighting::Unweighted);
TwoRangeReport two_range_report(std::span<const double> samples, std::array<PriceRange, 2> ranges,
                                double bin_width, Weighting weighting = Weighting::Unweighted);

/// Hill maximum-likelihood tail index over samples >= x_min. Cross-check only.
double hill_estimate(std::span<const double> samples, double x_min);

}  // namespace pricescale::pareto

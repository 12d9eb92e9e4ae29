#ifndef PLIS_TWOGROUP_HPP
#define PLIS_TWOGROUP_HPP

#include <optional>
#include <span>
#include <vector>

#include "plis/baseline.hpp"
#include "plis/distributions.hpp"
#include "plis/scores.hpp"

namespace plis {

/// Smallest bandwidth used when the data have no spread.
inline constexpr double kde_min_bandwidth = 1e-3;

/// Score assigned when the estimated density vanishes; ranks as least significant.
inline constexpr double density_ratio_sentinel = 1e300;

/**
 * Gaussian kernel density estimate. Points are kept sorted so that evaluation only visits
 * samples within `kde_cutoff_sds` bandwidths of the query; the omitted kernel mass is below 1e-18.
 */
class KdeEstimate {
public:
    double operator()(double v) const;
    double bandwidth() const { return bandwidth_; }
    std::size_t size() const { return points_.size(); }
    /// The data had zero spread and the bandwidth was floored.
    bool degenerate() const { return degenerate_; }

private:
    friend KdeEstimate kde_fit(std::span<const double>, std::optional<double>);
    std::vector<double> points_;
    double bandwidth_ = 1.0;
    bool degenerate_ = false;
};

inline constexpr double kde_cutoff_sds = 9.0;

/// Silverman's rule 1.06 * sd * n^(-1/5), with sd the sample standard deviation.
double silverman_bandwidth(std::span<const double> data);

/// Needs at least two finite points; `bandwidth`, when given, must be positive.
KdeEstimate kde_fit(std::span<const double> data, std::optional<double> bandwidth = std::nullopt);

/// Density ratio f0(v) / f(v); `density_ratio_sentinel` when f(v) < 1e-300.
struct RatioScore {
    double value;
    bool sentinel;
};

class DensityRatio {
public:
    /// f0 given as a null distribution.
    DensityRatio(NullDistribution f0, KdeEstimate f);
    /// f0 estimated by a second kernel estimate, for the semi-supervised setting.
    DensityRatio(KdeEstimate f0, KdeEstimate f);

    RatioScore operator()(double v) const;

private:
    std::optional<NullDistribution> f0_;
    std::optional<KdeEstimate> f0_kde_;
    KdeEstimate f_;
};

struct DensityRatioScores {
    ScorePairVector scores;
    std::size_t n_sentinel = 0;
};

/// s^X_i = r(x_i), s^Y_i = r(y_i).
DensityRatioScores density_ratio_scores(const PairedData& paired, const DensityRatio& ratio);

} // namespace plis

#endif // PLIS_TWOGROUP_HPP

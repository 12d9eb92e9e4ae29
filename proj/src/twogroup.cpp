#include "plis/twogroup.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "plis/core.hpp"
#include "plis/error.hpp"

namespace plis {

double silverman_bandwidth(std::span<const double> data) {
    const double n = static_cast<double>(data.size());
    double mean = 0.0;
    for (double v : data) {
        mean += v;
    }
    mean /= n;
    double ss = 0.0;
    for (double v : data) {
        ss += (v - mean) * (v - mean);
    }
    const double sd = std::sqrt(ss / (n - 1.0));
    return 1.06 * sd * std::pow(n, -0.2);
}

KdeEstimate kde_fit(std::span<const double> data, std::optional<double> bandwidth) {
    if (data.size() < 2) {
        throw Error(ErrorKind::invalid_argument, "kernel density estimate needs at least two points");
    }
    require_finite(data, "density estimation data");
    KdeEstimate kde;
    kde.points_.assign(data.begin(), data.end());
    std::sort(kde.points_.begin(), kde.points_.end());
    if (bandwidth) {
        if (!(*bandwidth > 0.0) || !std::isfinite(*bandwidth)) {
            throw Error(ErrorKind::invalid_argument, "bandwidth must be positive");
        }
        kde.bandwidth_ = *bandwidth;
    } else {
        kde.bandwidth_ = silverman_bandwidth(kde.points_);
    }
    if (!(kde.bandwidth_ >= kde_min_bandwidth)) {
        kde.degenerate_ = kde.points_.front() == kde.points_.back();
        kde.bandwidth_ = std::max(kde.bandwidth_, kde_min_bandwidth);
    }
    return kde;
}

double KdeEstimate::operator()(double v) const {
    const double reach = kde_cutoff_sds * bandwidth_;
    auto lo = std::lower_bound(points_.begin(), points_.end(), v - reach);
    auto hi = std::upper_bound(lo, points_.end(), v + reach);
    double sum = 0.0;
    for (auto it = lo; it != hi; ++it) {
        const double u = (v - *it) / bandwidth_;
        sum += std::exp(-0.5 * u * u);
    }
    const double norm = std::numbers::inv_sqrtpi / std::numbers::sqrt2;
    return sum * norm / (bandwidth_ * static_cast<double>(points_.size()));
}

DensityRatio::DensityRatio(NullDistribution f0, KdeEstimate f) : f0_(f0), f_(std::move(f)) {}

DensityRatio::DensityRatio(KdeEstimate f0, KdeEstimate f) : f0_kde_(std::move(f0)), f_(std::move(f)) {}

RatioScore DensityRatio::operator()(double v) const {
    const double denominator = f_(v);
    if (denominator < 1e-300) {
        return {density_ratio_sentinel, true};
    }
    const double numerator = f0_ ? f0_->density(v) : (*f0_kde_)(v);
    return {numerator / denominator, false};
}

DensityRatioScores density_ratio_scores(const PairedData& paired, const DensityRatio& ratio) {
    const std::size_t m = paired.size();
    std::vector<double> sx(m), sy(m);
    std::size_t n_sentinel = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const auto rx = ratio(paired.x()[i]);
        const auto ry = ratio(paired.y()[i]);
        sx[i] = rx.value;
        sy[i] = ry.value;
        n_sentinel += rx.sentinel + ry.sentinel;
    }
    return {ScorePairVector(std::move(sx), std::move(sy)), n_sentinel};
}

} // namespace plis

#include "plis/verification.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace plis::oracle {

namespace {

constexpr double pi = 3.14159265358979323846;

double gaussian(double x, double mean, double sd) {
    const double u = (x - mean) / sd;
    return std::exp(-0.5 * u * u) / (sd * std::sqrt(2.0 * pi));
}

void check_size(std::size_t m) {
    if (m == 0 || m > 16) {
        throw std::invalid_argument("path enumeration supports 1 <= m <= 16");
    }
}

/// Joint probability of every path; bit t of the path index is theta_t. Emissions are divided
/// by a per-position constant so long sequences stay in range; the constant cancels in ratios.
std::vector<double> path_weights(const std::vector<double>& seq, const Hmm& hmm, double& log_scale) {
    const std::size_t m = seq.size();
    std::vector<std::vector<double>> emission(m, std::vector<double>(2));
    log_scale = 0.0;
    for (std::size_t t = 0; t < m; ++t) {
        const double e0 = gaussian(seq[t], hmm.mean[0], hmm.sd[0]);
        const double e1 = gaussian(seq[t], hmm.mean[1], hmm.sd[1]);
        const double c = std::max(e0, e1) > 0.0 ? std::max(e0, e1) : 1.0;
        emission[t][0] = e0 / c;
        emission[t][1] = e1 / c;
        log_scale += std::log(c);
    }
    std::vector<double> weights(std::size_t{1} << m);
    for (std::size_t path = 0; path < weights.size(); ++path) {
        int prev = path & 1;
        double w = hmm.initial[prev] * emission[0][prev];
        for (std::size_t t = 1; t < m; ++t) {
            const int state = (path >> t) & 1;
            w *= hmm.transition[prev][state] * emission[t][state];
            prev = state;
        }
        weights[path] = w;
    }
    return weights;
}

} // namespace

std::vector<double> posterior(const std::vector<double>& seq, const Hmm& hmm) {
    check_size(seq.size());
    double log_scale = 0.0;
    const auto weights = path_weights(seq, hmm, log_scale);
    std::vector<double> null_mass(seq.size(), 0.0);
    double total = 0.0;
    for (std::size_t path = 0; path < weights.size(); ++path) {
        total += weights[path];
        for (std::size_t t = 0; t < seq.size(); ++t) {
            if (((path >> t) & 1) == 0) {
                null_mass[t] += weights[path];
            }
        }
    }
    for (auto& v : null_mass) {
        v /= total;
    }
    return null_mass;
}

double log_likelihood(const std::vector<double>& seq, const Hmm& hmm) {
    check_size(seq.size());
    double log_scale = 0.0;
    const auto weights = path_weights(seq, hmm, log_scale);
    double total = 0.0;
    for (double w : weights) {
        total += w;
    }
    return std::log(total) + log_scale;
}

double threshold(const std::vector<double>& sx, const std::vector<double>& sy, double alpha) {
    if (sx.size() != sy.size() || sx.size() > 1000) {
        throw std::invalid_argument("threshold oracle needs equal lengths up to 1000");
    }
    std::vector<double> candidates(sx);
    candidates.insert(candidates.end(), sy.begin(), sy.end());
    double best = -std::numeric_limits<double>::infinity();
    for (double t : candidates) {
        int mirrored = 0;
        int selected = 0;
        for (std::size_t j = 0; j < sx.size(); ++j) {
            if (sy[j] < sx[j] && sy[j] <= t) {
                ++mirrored;
            }
            if (sx[j] < sy[j] && sx[j] <= t) {
                ++selected;
            }
        }
        const double q = double(1 + mirrored) / double(selected > 1 ? selected : 1);
        if (q <= alpha && t > best) {
            best = t;
        }
    }
    return best;
}

std::vector<std::uint8_t> mirror_rejections(const std::vector<double>& sx, const std::vector<double>& sy,
                                            double alpha) {
    const double t = threshold(sx, sy, alpha);
    std::vector<std::uint8_t> out(sx.size(), 0);
    for (std::size_t i = 0; i < sx.size(); ++i) {
        out[i] = sx[i] < sy[i] && sx[i] <= t;
    }
    return out;
}

} // namespace plis::oracle

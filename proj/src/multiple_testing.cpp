#include "plis/multiple_testing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "plis/distributions.hpp"
#include "plis/error.hpp"

namespace plis {

namespace {

std::vector<std::size_t> order_by(std::size_t n, auto less) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), less);
    return order;
}

void require_alpha(double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw Error(ErrorKind::invalid_argument, "alpha must be positive");
    }
}

} // namespace

DecisionVector bh(std::span<const double> p, double alpha) {
    require_alpha(alpha);
    const std::size_t m = p.size();
    const auto order = order_by(m, [&](std::size_t a, std::size_t b) { return p[a] < p[b]; });
    std::size_t k = 0;
    for (std::size_t i = m; i > 0; --i) {
        if (p[order[i - 1]] <= static_cast<double>(i) * alpha / static_cast<double>(m)) {
            k = i;
            break;
        }
    }
    DecisionVector out(m, 0);
    for (std::size_t i = 0; i < k; ++i) {
        out[order[i]] = 1;
    }
    return out;
}

DecisionVector e_bh(std::span<const double> e, double alpha) {
    require_alpha(alpha);
    const std::size_t m = e.size();
    const auto order = order_by(m, [&](std::size_t a, std::size_t b) { return e[a] > e[b]; });
    const double target = static_cast<double>(m) / alpha * (1.0 - e_bh_slack);
    DecisionVector out(m, 0);
    for (std::size_t i = m; i > 0; --i) {
        const double cutoff = e[order[i - 1]];
        if (static_cast<double>(i) * cutoff >= target && cutoff > 0.0) {
            for (std::size_t j = 0; j < m; ++j) {
                out[j] = e[j] >= cutoff;
            }
            break;
        }
    }
    return out;
}

std::vector<double> two_sided_p_values(std::span<const double> z) {
    std::vector<double> p(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
        p[i] = 2.0 * normal_cdf(-std::fabs(z[i]));
    }
    return p;
}

std::vector<double> conformal_p_values(std::span<const double> sx, std::span<const double> sy) {
    std::vector<double> sorted(sy.begin(), sy.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    std::vector<double> p(sx.size());
    for (std::size_t i = 0; i < sx.size(); ++i) {
        const auto below = std::lower_bound(sorted.begin(), sorted.end(), sx[i]) - sorted.begin();
        p[i] = (1.0 + static_cast<double>(below)) / (1.0 + n);
    }
    return p;
}

double storey_adaptive_factor(std::span<const double> p, double lambda) {
    if (!(lambda > 0.0 && lambda < 1.0)) {
        throw Error(ErrorKind::invalid_argument, "Storey lambda must lie in (0, 1)");
    }
    const auto above = std::count_if(p.begin(), p.end(), [&](double v) { return v > lambda; });
    const double pi0 = (1.0 + static_cast<double>(above)) / (static_cast<double>(p.size()) * (1.0 - lambda));
    return std::max(1.0, 1.0 / pi0);
}

DecisionVector conformal_bh(std::span<const double> sx, std::span<const double> sy, double alpha,
                            double adaptive_factor) {
    return bh(conformal_p_values(sx, sy), alpha * adaptive_factor);
}

DecisionVector plis_cbh(const ScorePairVector& scores, double alpha) {
    require_alpha(alpha);
    std::vector<double> sx(scores.sx().begin(), scores.sx().end());
    std::vector<double> sy(scores.sy().begin(), scores.sy().end());
    std::sort(sx.begin(), sx.end());
    std::sort(sy.begin(), sy.end());
    double threshold = -std::numeric_limits<double>::infinity();
    for (std::size_t k = sx.size(); k > 0; --k) {
        const double t = sx[k - 1];
        if (k < sx.size() && sx[k] == t) {
            continue;
        }
        const auto mirrors = std::upper_bound(sy.begin(), sy.end(), t) - sy.begin();
        const double q = static_cast<double>(1 + mirrors) / static_cast<double>(k);
        if (q <= alpha) {
            threshold = t;
            break;
        }
    }
    DecisionVector out(scores.size(), 0);
    for (std::size_t i = 0; i < scores.size(); ++i) {
        out[i] = scores.sx(i) <= threshold;
    }
    return out;
}

DecisionVector plis_sym(const ScorePairVector& scores, double alpha) {
    require_alpha(alpha);
    const std::size_t m = scores.size();
    std::vector<double> positive, negative;
    for (std::size_t j = 0; j < m; ++j) {
        const double t = scores.sy(j) - scores.sx(j);
        if (t > 0.0) {
            positive.push_back(t);
        } else if (t < 0.0) {
            negative.push_back(-t);
        }
    }
    std::vector<double> grid = positive;
    grid.insert(grid.end(), negative.begin(), negative.end());
    std::sort(grid.begin(), grid.end());
    std::sort(positive.begin(), positive.end());
    std::sort(negative.begin(), negative.end());

    double threshold = std::numeric_limits<double>::infinity();
    for (double t : grid) {
        const auto above = positive.end() - std::lower_bound(positive.begin(), positive.end(), t);
        if (above == 0) {
            continue;
        }
        const auto below = negative.end() - std::lower_bound(negative.begin(), negative.end(), t);
        if (static_cast<double>(1 + below) / static_cast<double>(above) <= alpha) {
            threshold = t;
            break;
        }
    }
    DecisionVector out(m, 0);
    for (std::size_t j = 0; j < m; ++j) {
        out[j] = scores.sy(j) - scores.sx(j) >= threshold;
    }
    return out;
}

DecisionVector selective_seqstep_plus(std::span<const double> p, double c, double alpha,
                                      std::span<const std::size_t> stops) {
    if (!(c > 0.0 && c < 1.0)) {
        throw Error(ErrorKind::invalid_argument, "Selective SeqStep+ needs c in (0, 1)");
    }
    require_alpha(alpha);
    const double level = (1.0 - c) / c * alpha;
    std::vector<std::size_t> small(p.size() + 1, 0), large(p.size() + 1, 0);
    for (std::size_t j = 0; j < p.size(); ++j) {
        small[j + 1] = small[j] + (p[j] <= c);
        large[j + 1] = large[j] + (p[j] > c);
    }
    std::size_t chosen = 0;
    for (std::size_t s = stops.size(); s > 0; --s) {
        const std::size_t k = stops[s - 1];
        if (k == 0 || k > p.size()) {
            throw Error(ErrorKind::out_of_range, "stopping size " + std::to_string(k) + " outside the ranking");
        }
        const double ratio = static_cast<double>(1 + large[k]) / static_cast<double>(std::max<std::size_t>(small[k], 1));
        if (ratio <= level) {
            chosen = k;
            break;
        }
    }
    DecisionVector out(p.size(), 0);
    for (std::size_t j = 0; j < chosen; ++j) {
        out[j] = p[j] <= c;
    }
    return out;
}

std::vector<double> one_bit_p_values(std::span<const double> t) {
    std::vector<double> p(t.size());
    for (std::size_t j = 0; j < t.size(); ++j) {
        p[j] = t[j] > 0.0 ? 0.5 : 1.0;
    }
    return p;
}

DecisionVector knockoff_plus(std::span<const double> t, double alpha) {
    std::vector<std::size_t> order;
    for (std::size_t j = 0; j < t.size(); ++j) {
        if (t[j] != 0.0) {
            order.push_back(j);
        }
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return std::fabs(t[a]) > std::fabs(t[b]); });
    std::vector<double> ranked(order.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
        ranked[k] = t[order[k]];
    }
    std::vector<std::size_t> stops;
    for (std::size_t k = 0; k < order.size(); ++k) {
        if (k + 1 == order.size() || std::fabs(ranked[k + 1]) != std::fabs(ranked[k])) {
            stops.push_back(k + 1);
        }
    }
    DecisionVector out(t.size(), 0);
    if (stops.empty()) {
        return out;
    }
    const auto ranked_decisions = selective_seqstep_plus(one_bit_p_values(ranked), 0.5, alpha, stops);
    for (std::size_t k = 0; k < order.size(); ++k) {
        out[order[k]] = ranked_decisions[k];
    }
    return out;
}

std::vector<double> antisymmetric_statistics(const ScorePairVector& scores) {
    std::vector<double> t(scores.size());
    for (std::size_t j = 0; j < scores.size(); ++j) {
        const double d = scores.sy(j) - scores.sx(j);
        const double sign = d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0);
        t[j] = sign * std::max(std::exp(-scores.sx(j)), std::exp(-scores.sy(j)));
    }
    return t;
}

DecisionVector lis_rule(std::span<const double> lis, double alpha) {
    require_alpha(alpha);
    const std::size_t m = lis.size();
    const auto order = order_by(m, [&](std::size_t a, std::size_t b) { return lis[a] < lis[b]; });
    double running = 0.0;
    std::size_t k = 0;
    for (std::size_t i = 0; i < m; ++i) {
        running += lis[order[i]];
        if (running / static_cast<double>(i + 1) <= alpha) {
            k = i + 1;
        }
    }
    DecisionVector out(m, 0);
    for (std::size_t i = 0; i < k; ++i) {
        out[order[i]] = 1;
    }
    return out;
}

} // namespace plis

#include "plis/mirror.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "plis/error.hpp"

namespace plis {

ScorePairVector::ScorePairVector(std::vector<double> sx, std::vector<double> sy) : sx_(std::move(sx)), sy_(std::move(sy)) {
    if (sx_.size() != sy_.size()) {
        throw Error(ErrorKind::length_mismatch, "test scores have " + std::to_string(sx_.size()) +
                                                    " entries but calibration scores have " + std::to_string(sy_.size()));
    }
    for (std::size_t i = 0; i < sx_.size(); ++i) {
        if (std::isnan(sx_[i]) || std::isnan(sy_[i])) {
            throw Error(ErrorKind::non_finite_input, "score pair " + std::to_string(i) + " contains NaN");
        }
    }
}

std::size_t ScorePairVector::count(Membership which) const {
    std::size_t n = 0;
    for (std::size_t i = 0; i < size(); ++i) {
        n += membership(i) == which;
    }
    return n;
}

double mirror_q(double t, const ScorePairVector& scores) {
    std::size_t numerator = 1, denominator = 0;
    for (std::size_t j = 0; j < scores.size(); ++j) {
        switch (scores.membership(j)) {
        case Membership::candidate:
            denominator += scores.sx(j) <= t;
            break;
        case Membership::calibration:
            numerator += scores.sy(j) <= t;
            break;
        case Membership::tie:
            break;
        }
    }
    return static_cast<double>(numerator) / static_cast<double>(std::max<std::size_t>(denominator, 1));
}

MirrorPath mirror_path(const ScorePairVector& scores) {
    struct Event {
        double value;
        int effect; // 0 = grid point only, 1 = candidate count, 2 = mirror count
    };
    std::vector<Event> events;
    events.reserve(2 * scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const auto which = scores.membership(i);
        events.push_back({scores.sx(i), which == Membership::candidate ? 1 : 0});
        events.push_back({scores.sy(i), which == Membership::calibration ? 2 : 0});
    }
    std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) { return a.value < b.value; });

    MirrorPath path;
    std::size_t candidates = 0, mirrors = 0;
    for (std::size_t k = 0; k < events.size();) {
        const double value = events[k].value;
        for (; k < events.size() && events[k].value == value; ++k) {
            candidates += events[k].effect == 1;
            mirrors += events[k].effect == 2;
        }
        path.grid.push_back(value);
        path.mirror_count.push_back(mirrors);
        path.candidate_count.push_back(candidates);
        path.q.push_back(static_cast<double>(1 + mirrors) / static_cast<double>(std::max<std::size_t>(candidates, 1)));
    }

    path.suffix_min.resize(path.q.size());
    double running = std::numeric_limits<double>::infinity();
    for (std::size_t k = path.q.size(); k-- > 0;) {
        running = std::min(running, path.q[k]);
        path.suffix_min[k] = running;
    }
    return path;
}

double select_threshold(const MirrorPath& path, double alpha) {
    for (std::size_t k = path.grid.size(); k-- > 0;) {
        if (path.q[k] <= alpha) {
            return path.grid[k];
        }
    }
    return no_threshold;
}

double select_threshold(const ScorePairVector& scores, double alpha) {
    return select_threshold(mirror_path(scores), alpha);
}

DecisionVector decisions_at(const ScorePairVector& scores, double tau) {
    DecisionVector out(scores.size(), 0);
    for (std::size_t i = 0; i < scores.size(); ++i) {
        out[i] = scores.membership(i) == Membership::candidate && scores.sx(i) <= tau;
    }
    return out;
}

MirrorDecision mirror_decide(const ScorePairVector& scores, double alpha) {
    MirrorDecision out;
    out.tau = select_threshold(scores, alpha);
    out.decisions = decisions_at(scores, out.tau);
    out.n_rejected = count_ones(out.decisions);
    for (std::size_t i = 0; i < scores.size(); ++i) {
        switch (scores.membership(i)) {
        case Membership::candidate:
            ++out.n_candidates;
            break;
        case Membership::calibration:
            ++out.n_calibration;
            out.mirror_count_at_tau += scores.sy(i) <= out.tau;
            break;
        case Membership::tie:
            break;
        }
    }
    return out;
}

std::vector<double> conformal_q_values(const ScorePairVector& scores, const MirrorPath& path) {
    std::vector<double> q(scores.size(), 1.0);
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (scores.membership(i) != Membership::candidate) {
            continue;
        }
        const auto it = std::lower_bound(path.grid.begin(), path.grid.end(), scores.sx(i));
        q[i] = path.suffix_min[static_cast<std::size_t>(it - path.grid.begin())];
    }
    return q;
}

std::vector<double> conformal_q_values(const ScorePairVector& scores) {
    return conformal_q_values(scores, mirror_path(scores));
}

std::vector<double> generalized_e_values(const ScorePairVector& scores, double tau, std::size_t m) {
    std::vector<double> e(scores.size(), 0.0);
    if (tau == no_threshold) {
        return e;
    }
    std::size_t mirrors = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        mirrors += scores.membership(i) == Membership::calibration && scores.sy(i) <= tau;
    }
    const double value = static_cast<double>(m) / static_cast<double>(1 + mirrors);
    for (std::size_t j = 0; j < scores.size(); ++j) {
        if (scores.membership(j) == Membership::candidate && scores.sx(j) <= tau) {
            e[j] = value;
        }
    }
    return e;
}

} // namespace plis

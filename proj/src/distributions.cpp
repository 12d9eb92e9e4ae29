#include "plis/distributions.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <regex>
#include <sstream>

#include "plis/error.hpp"

namespace plis {

double normal_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

double normal_log_pdf(double x, double mean, double sd) {
    const double z = (x - mean) / sd;
    return -0.5 * z * z - std::log(sd) - 0.5 * std::log(2.0 * std::numbers::pi);
}

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double normal_quantile(double p) {
    if (std::isnan(p) || p < 0.0 || p > 1.0) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    if (p == 0.0) {
        return -std::numeric_limits<double>::infinity();
    }
    if (p == 1.0) {
        return std::numeric_limits<double>::infinity();
    }

    const double q = p - 0.5;
    if (std::fabs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        return q *
               (((((((r * 2509.0809287301226727 + 33430.575583588128105) * r + 67265.770927008700853) * r +
                    45921.953931549871457) * r + 13731.693765509461125) * r + 1971.5909503065514427) * r +
                 133.14166789178437745) * r + 3.387132872796366608) /
               (((((((r * 5226.495278852545925 + 28729.085735721942674) * r + 39307.89580009271061) * r +
                    21213.794301586595867) * r + 5394.1960214247511077) * r + 687.1870074920579083) * r +
                 42.313330701600911252) * r + 1.0);
    }

    double r = q < 0.0 ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double value;
    if (r <= 5.0) {
        r -= 1.6;
        value = (((((((r * 7.7454501427834140764e-4 + 0.0227238449892691845833) * r + 0.24178072517745061177) * r +
                     1.27045825245236838258) * r + 3.64784832476320460504) * r + 5.7694972214606914055) * r +
                  4.6303378461565452959) * r + 1.42343711074968357734) /
                (((((((r * 1.05075007164441684324e-9 + 5.475938084995344946e-4) * r + 0.0151986665636164571966) * r +
                     0.14810397642748007459) * r + 0.68976733498510000455) * r + 1.6763848301838038494) * r +
                  2.05319162663775882187) * r + 1.0);
    } else {
        r -= 5.0;
        value = (((((((r * 2.01033439929228813265e-7 + 2.71155556874348757815e-5) * r + 0.0012426609473880784386) * r +
                     0.026532189526576123093) * r + 0.29656057182850489123) * r + 1.7848265399172913358) * r +
                  5.4637849111641143699) * r + 6.6579046435011037772) /
                (((((((r * 2.04426310338993978564e-15 + 1.4215117583164458887e-7) * r + 1.8463183175100546818e-5) * r +
                     7.868691311456132591e-4) * r + 0.0148753612908506148525) * r + 0.13692988092273580531) * r +
                  0.59983220655588793769) * r + 1.0);
    }
    return q < 0.0 ? -value : value;
}

NullDistribution NullDistribution::normal(double mean, double sd) {
    if (!std::isfinite(mean) || !(sd > 0.0) || !std::isfinite(sd)) {
        throw Error(ErrorKind::invalid_argument, "normal null needs finite mean and positive sd");
    }
    return {Family::normal, mean, sd};
}

NullDistribution NullDistribution::uniform(double lower, double upper) {
    if (!std::isfinite(lower) || !std::isfinite(upper) || !(upper > lower)) {
        throw Error(ErrorKind::invalid_argument, "uniform null needs finite lower < upper");
    }
    return {Family::uniform, lower, upper};
}

NullDistribution NullDistribution::chi_squared(double df) {
    if (!(df > 0.0) || !std::isfinite(df)) {
        throw Error(ErrorKind::invalid_argument, "chi-squared null needs positive degrees of freedom");
    }
    return {Family::chi_squared, df, 0.0};
}

NullDistribution NullDistribution::parse(const std::string& text) {
    static const std::regex pattern(R"(\s*(normal|uniform|chisq)\s*\(\s*([^,\s)]+)\s*(?:,\s*([^,\s)]+)\s*)?\)\s*)");
    std::smatch match;
    if (!std::regex_match(text, match, pattern)) {
        throw Error(ErrorKind::config_error, "cannot parse null distribution '" + text + "'");
    }
    try {
        const double a = std::stod(match[2].str());
        const bool has_b = match[3].matched;
        const double b = has_b ? std::stod(match[3].str()) : 0.0;
        if (match[1] == "chisq") {
            if (has_b) {
                throw Error(ErrorKind::config_error, "chisq takes one parameter");
            }
            return chi_squared(a);
        }
        if (!has_b) {
            throw Error(ErrorKind::config_error, match[1].str() + " takes two parameters");
        }
        return match[1] == "normal" ? normal(a, b) : uniform(a, b);
    } catch (const std::logic_error&) {
        throw Error(ErrorKind::config_error, "bad number in null distribution '" + text + "'");
    }
}

double NullDistribution::density(double x) const {
    switch (family_) {
    case Family::normal:
        return normal_pdf((x - a_) / b_) / b_;
    case Family::uniform:
        return (x >= a_ && x <= b_) ? 1.0 / (b_ - a_) : 0.0;
    case Family::chi_squared:
        if (x <= 0.0) {
            return 0.0;
        }
        return 0.5 * boost::math::gamma_p_derivative(0.5 * a_, 0.5 * x);
    }
    return 0.0;
}

double NullDistribution::cdf(double x) const {
    switch (family_) {
    case Family::normal:
        return normal_cdf((x - a_) / b_);
    case Family::uniform:
        if (x <= a_) {
            return 0.0;
        }
        return x >= b_ ? 1.0 : (x - a_) / (b_ - a_);
    case Family::chi_squared:
        return x <= 0.0 ? 0.0 : boost::math::gamma_p(0.5 * a_, 0.5 * x);
    }
    return 0.0;
}

double NullDistribution::sample(Rng& rng) const {
    switch (family_) {
    case Family::normal:
        return rng.normal(a_, b_);
    case Family::uniform:
        return a_ + (b_ - a_) * rng.uniform();
    case Family::chi_squared: {
        // Inversion keeps one uniform per draw for non-integer degrees of freedom too.
        return 2.0 * boost::math::gamma_p_inv(0.5 * a_, rng.uniform());
    }
    }
    return 0.0;
}

std::string NullDistribution::to_string() const {
    std::ostringstream out;
    out.precision(17);
    switch (family_) {
    case Family::normal:
        out << "normal(" << a_ << "," << b_ << ")";
        break;
    case Family::uniform:
        out << "uniform(" << a_ << "," << b_ << ")";
        break;
    case Family::chi_squared:
        out << "chisq(" << a_ << ")";
        break;
    }
    return out.str();
}

ZValue z_transform(double x, const NullDistribution& f0) {
    if (f0.is_standard_normal()) {
        return {x, false};
    }
    if (f0.family() == NullDistribution::Family::normal) {
        return {(x - f0.first()) / f0.second(), false};
    }
    double u = f0.cdf(x);
    ZValue out;
    if (u < z_transform_epsilon) {
        u = z_transform_epsilon;
        out.clamped = true;
    } else if (u > 1.0 - z_transform_epsilon) {
        u = 1.0 - z_transform_epsilon;
        out.clamped = true;
    }
    out.z = normal_quantile(u);
    return out;
}

} // namespace plis

#ifndef PLIS_DISTRIBUTIONS_HPP
#define PLIS_DISTRIBUTIONS_HPP

#include <string>

#include "plis/rng.hpp"

namespace plis {

double normal_pdf(double x);
double normal_log_pdf(double x, double mean, double sd);
double normal_cdf(double x);

/**
 * Standard normal quantile, Wichura's AS241 (PPND16) rational approximation.
 * Relative accuracy is about 1e-16 over (0, 1). Returns -inf/+inf at 0/1 and NaN outside [0, 1].
 */
double normal_quantile(double p);

/**
 * Null distribution F0 of the observations.
 *
 * Supported families are normal(mean, sd), uniform(lower, upper) and chi-squared(df); the
 * default is the standard normal. Text form is `normal(0,1)`, `uniform(0,1)` or `chisq(1)`.
 */
class NullDistribution {
public:
    enum class Family { normal, uniform, chi_squared };

    NullDistribution() = default;

    static NullDistribution normal(double mean = 0.0, double sd = 1.0);
    static NullDistribution uniform(double lower = 0.0, double upper = 1.0);
    static NullDistribution chi_squared(double df);
    static NullDistribution parse(const std::string& text);

    Family family() const { return family_; }
    double first() const { return a_; }
    double second() const { return b_; }

    double density(double x) const;
    double cdf(double x) const;
    double sample(Rng& rng) const;

    bool is_standard_normal() const { return family_ == Family::normal && a_ == 0.0 && b_ == 1.0; }

    std::string to_string() const;

private:
    NullDistribution(Family family, double a, double b) : family_(family), a_(a), b_(b) {}

    Family family_ = Family::normal;
    double a_ = 0.0;
    double b_ = 1.0;
};

struct ZValue {
    double z = 0.0;
    bool clamped = false;
};

/// Lower bound used to keep F0(x) inside the domain of the normal quantile.
inline constexpr double z_transform_epsilon = 1e-15;

/**
 * z = Phi^{-1}(F0(x)). When F0(x) falls within `z_transform_epsilon` of 0 or 1 it is clamped
 * to [eps, 1 - eps] and `clamped` is set. For a standard normal F0 the input is returned as is.
 */
ZValue z_transform(double x, const NullDistribution& f0);

} // namespace plis

#endif // PLIS_DISTRIBUTIONS_HPP

#include "rlam/analysis/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rlam::analysis {

namespace {

// Continued fraction for the incomplete beta (modified Lentz evaluation).
double beta_continued_fraction(double a, double b, double x) {
    constexpr double kTiny = 1e-300;
    constexpr double kEps = 1e-15;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 300; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) return h;
    }
    throw std::runtime_error("incomplete beta did not converge");
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0))
        throw std::invalid_argument("incomplete beta needs positive shape parameters");
    if (x < 0.0 || x > 1.0) throw std::invalid_argument("incomplete beta needs x in [0,1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double front = std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                                  a * std::log(x) + b * std::log1p(-x));
    // Use the expansion on the side where it converges fast.
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
    return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, int df) {
    if (df < 1) throw std::invalid_argument("t distribution needs df >= 1");
    const double nu = static_cast<double>(df);
    const double x = nu / (nu + t * t);
    return regularized_incomplete_beta(nu / 2.0, 0.5, x);
}

PairedTestResult paired_t_test(const std::vector<double>& xs,
                               const std::vector<double>& ys) {
    if (xs.size() != ys.size())
        throw std::invalid_argument("paired_t_test: length mismatch");
    const std::size_t n = xs.size();
    if (n < 2) throw std::invalid_argument("paired_t_test: need at least two pairs");

    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += xs[i] - ys[i];
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = (xs[i] - ys[i]) - mean;
        ss += d * d;
    }
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));

    PairedTestResult result;
    result.df = static_cast<int>(n) - 1;
    if (sd == 0.0) {
        result.degenerate = true;
        return result;
    }
    result.t = mean / (sd / std::sqrt(static_cast<double>(n)));
    result.p_two_sided = student_t_two_sided_p(result.t, result.df);
    const double upper_tail = result.p_two_sided / 2.0;
    result.p_one_sided = result.t >= 0.0 ? upper_tail : 1.0 - upper_tail;
    return result;
}

std::vector<TestResult> bonferroni(std::vector<TestResult> results, double alpha) {
    if (results.empty()) throw std::invalid_argument("bonferroni: empty family");
    const double k = static_cast<double>(results.size());
    for (TestResult& r : results) {
        r.p_adjusted = std::min(1.0, r.p_raw * k);
        r.significant = r.p_adjusted < alpha;
    }
    return results;
}

}  // namespace rlam::analysis

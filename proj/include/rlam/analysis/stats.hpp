#pragma once

#include <string>
#include <vector>

namespace rlam::analysis {

// Paired t over the differences x_i - y_i, df = n - 1. Both tail variants
// are reported because published write-ups disagree on which was used: the
// two-sided p and the one-sided p for the alternative mean(x - y) > 0.
// Zero-variance differences are degenerate: t = 0, p = 1, flag set.
struct PairedTestResult {
    double t = 0.0;
    int df = 0;
    double p_two_sided = 1.0;
    double p_one_sided = 1.0;
    bool degenerate = false;
};

PairedTestResult paired_t_test(const std::vector<double>& xs,
                               const std::vector<double>& ys);

struct TestResult {
    std::string metric_name;
    double t_statistic = 0.0;
    double p_raw = 1.0;
    double p_adjusted = 1.0;
    bool significant = false;
    bool degenerate = false;
};

// Family-wise correction: p_adjusted = min(1, p_raw * k) for family size k;
// significant iff p_adjusted < alpha.
std::vector<TestResult> bonferroni(std::vector<TestResult> results, double alpha);

// Regularized incomplete beta I_x(a, b), evaluated with a continued fraction;
// absolute error well under 1e-10 for the arguments used here.
double regularized_incomplete_beta(double a, double b, double x);

// Two-sided tail of Student's t with df degrees of freedom.
double student_t_two_sided_p(double t, int df);

}  // namespace rlam::analysis

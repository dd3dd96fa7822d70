#pragma once

namespace emotrend {

double log_gamma(double x);

// Regularized incomplete beta I_x(a, b).
double incomplete_beta(double a, double b, double x);

// CDF of Student's t with nu degrees of freedom.
double student_t_cdf(double t, double nu);

// Two-sided tail probability of |T_nu| >= |t|.
double student_t_two_sided_p(double t, double nu);

// Smallest q with CDF(q) = p, found by bisection; p in (0, 1).
double student_t_quantile(double p, double nu);

}  // namespace emotrend

#pragma once

namespace arise {

// Standard normal CDF and quantile (quantile refined to full double precision).
double normal_cdf(double z);
double normal_quantile(double p);

// Regularized incomplete beta I_x(a, b).
double incomplete_beta(double a, double b, double x);

// Student-t CDF and quantile for nu > 0.
double student_t_cdf(double t, double nu);
double student_t_quantile(double p, double nu);

} // namespace arise

#pragma once

namespace oscbm::gue {

// P(largest eigenvalue <= s) for the n x n Gaussian unitary ensemble with
// joint eigenvalue density ~ prod_{i<j} (l_i - l_j)^2 exp(-sum_i l_i^2 / 2),
// as a ratio of Hankel determinants of incomplete Gaussian moments.  n <= 6.
double cdf_lambda_max(int n, double s);

// Same probability for n = 2 by literal two-dimensional tensor quadrature of
// the eigenvalue density; independent of the Hankel route.
double cdf_lambda_max_quad2(double s);

}  // namespace oscbm::gue

#pragma once

namespace mhviz {

double normal_pdf(double x) noexcept;

// Standard normal CDF via erfc; accurate in both tails.
double normal_cdf(double x) noexcept;

// Inverse standard normal CDF for p in (0, 1). Throws InputError otherwise.
// Rational approximation refined by one Halley step; absolute error well below 1e-9.
double normal_quantile(double p);

}  // namespace mhviz

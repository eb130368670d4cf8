#pragma once

namespace tradeoff {

double norm_pdf(double x);
double norm_cdf(double x);

/// Inverse standard normal CDF. Acklam's rational approximation (relative error
/// below 1.15e-9) followed by one Halley step against erfc, which brings the
/// absolute error under 1e-15 on (1e-300, 1 - 1e-16).
double norm_quantile(double p);

}  // namespace tradeoff

/*
 * Copyright 2026 The sdns Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sdns::stats {

/// Pairwise (cascade) summation; the result depends only on the order of
/// the input, not on how callers batch it.
double pairwise_sum(std::span<const double> values);

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;  ///< standard error of the mean (sample sd / sqrt(n))
  std::size_t n = 0;
};

MeanSe mean_se(std::span<const double> values);

/// Trapezoidal integral of samples y(t_i) over [t_0, t_last].
double trapezoid(std::span<const double> times, std::span<const double> values);

/// Sample autocorrelation at lags 0..max_lag.
std::vector<double> autocorrelation(std::span<const double> values, std::size_t max_lag);

/// Effective sample size from Geyer's initial positive sequence estimate of
/// the integrated autocorrelation time, capped at the sample count.
double effective_sample_size(std::span<const double> values);

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
double ks_statistic(std::span<const double> a, std::span<const double> b);

/// Kolmogorov survival function Q(x) = 2 sum_{j>=1} (-1)^{j-1} exp(-2 j^2 x^2).
double kolmogorov_survival(double x);

/// Asymptotic two-sample KS p-value for sizes n_a, n_b (effective sizes may be
/// non-integer), with Stephens' small-sample correction.
double ks_pvalue(double statistic, double n_a, double n_b);

/// Least-squares slope and intercept of y against x.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
};
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

}  // namespace sdns::stats

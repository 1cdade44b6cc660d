// Copyright 2026 The m2mpower Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef M2M_POISSON_HPP
#define M2M_POISSON_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "m2m/error.hpp"

namespace m2m {

/**
 * Tabulated Poisson distribution over the window mean ± (40 sd + 50).
 *
 * The pmf is built by the ratio recursion outward from the mode and then
 * renormalized, so it stays accurate for means far beyond the range where
 * exp(-mean) underflows. Mass outside the window is below 1e-300.
 */
class PoissonTable {
public:
	explicit PoissonTable(double mean) : mean_(mean)
	{
		if (!(mean > 0.0) || !std::isfinite(mean))
			throw InvalidArgument("poisson mean must be positive and finite");

		const double spread = 40.0 * std::sqrt(mean) + 50.0;
		lo_ = static_cast<std::int64_t>(std::max(0.0, std::floor(mean - spread)));
		const auto hi = static_cast<std::int64_t>(std::ceil(mean + spread));
		const auto mode = static_cast<std::int64_t>(std::floor(mean));

		pmf_.assign(static_cast<std::size_t>(hi - lo_ + 1), 0.0);
		const auto at = [this](std::int64_t n) -> double& { return pmf_[static_cast<std::size_t>(n - lo_)]; };

		const double md = static_cast<double>(mode);
		at(mode) = std::exp(-mean + md * std::log(mean) - std::lgamma(md + 1.0));
		for (std::int64_t n = mode; n < hi; ++n)
			at(n + 1) = at(n) * mean / static_cast<double>(n + 1);
		for (std::int64_t n = mode; n > lo_; --n)
			at(n - 1) = at(n) * static_cast<double>(n) / mean;

		// summing smallest terms first
		double total = 0.0;
		for (std::int64_t n = lo_; n < mode; ++n)
			total += at(n);
		double upper = 0.0;
		for (std::int64_t n = hi; n >= mode; --n)
			upper += at(n);
		total += upper;
		for (double& p : pmf_)
			p /= total;

		// tail_[j] = P[N > lo_ + j]
		tail_.assign(pmf_.size(), 0.0);
		double acc = 0.0;
		for (std::size_t j = pmf_.size(); j-- > 0;) {
			tail_[j] = std::min(acc, 1.0);
			acc += pmf_[j];
		}
	}

	double mean() const noexcept { return mean_; }

	double pmf(std::int64_t n) const noexcept
	{
		if (n < lo_ || n >= lo_ + static_cast<std::int64_t>(pmf_.size()))
			return 0.0;
		return pmf_[static_cast<std::size_t>(n - lo_)];
	}

	/// P[N > n].
	double tail(std::int64_t n) const noexcept
	{
		if (n < lo_)
			return 1.0;
		if (n >= lo_ + static_cast<std::int64_t>(tail_.size()))
			return 0.0;
		return tail_[static_cast<std::size_t>(n - lo_)];
	}

	double cdf(std::int64_t n) const noexcept { return 1.0 - tail(n); }

	/// Smallest n with P[N > n] <= eps.
	std::int64_t upper_quantile(double eps) const
	{
		if (!(eps > 0.0))
			throw InvalidArgument("tail probability must be positive");
		if (eps >= 1.0)
			return 0;
		// tail_ is nonincreasing; find first index with tail <= eps
		const auto it = std::partition_point(tail_.begin(), tail_.end(), [eps](double t) { return t > eps; });
		const auto n = lo_ + static_cast<std::int64_t>(it - tail_.begin());
		return std::max<std::int64_t>(n, 0);
	}

	/// Smallest n with P[N <= n] >= u; inverse-transform sampling for u uniform on [0,1).
	std::int64_t inverse_cdf(double u) const
	{
		const double t = 1.0 - u;
		if (t >= 1.0)
			return 0;
		return upper_quantile(std::max(t, 0x1.0p-1074));
	}

private:
	double mean_;
	std::int64_t lo_ = 0;
	std::vector<double> pmf_;
	std::vector<double> tail_;
};

/// Design percentile of a Poisson arrival count: smallest n with P[Pois(mean) > n] <= epsilon.
inline std::int64_t poisson_quantile(double mean, double epsilon)
{
	if (!(epsilon > 0.0 && epsilon < 1.0))
		throw InvalidArgument("epsilon must lie in (0, 1)");
	return PoissonTable(mean).upper_quantile(epsilon);
}

} // namespace m2m

#endif // M2M_POISSON_HPP

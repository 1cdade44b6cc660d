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

/**
 * \file m2m/optsolve.hpp
 *
 * \brief Separable convex minimization over a budget with per-variable floors.
 *
 *     minimize   sum_i cost_i(x_i)
 *     subject to sum_i x_i <= budget,  x_i >= floor_i
 *
 * Every cost_i is strictly convex and decreasing, so the budget is always
 * exhausted and the KKT conditions reduce to a single multiplier nu > 0:
 * either x_i = floor_i and |cost_i'(floor_i)| <= nu, or |cost_i'(x_i)| = nu.
 * solve_dual_bisection() searches nu; brute_force_oracle() is an independent
 * grid search used to validate it.
 */

#ifndef M2M_OPTSOLVE_HPP
#define M2M_OPTSOLVE_HPP

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "m2m/error.hpp"

namespace m2m::opt {

template <class C>
concept SeparableCost = requires(const C& c, std::size_t i, double x) {
	{ c.size() } -> std::convertible_to<std::size_t>;
	{ c.value(i, x) } -> std::convertible_to<double>;
	{ c.slope(i, x) } -> std::convertible_to<double>;
};

/// Costs that also expose the second derivative get Newton steps in the inner solve.
template <class C>
concept CurvedCost = SeparableCost<C> && requires(const C& c, std::size_t i, double x) {
	{ c.curvature(i, x) } -> std::convertible_to<double>;
};

/// Type-erased cost built from per-index callables.
struct FunctionCost {
	std::vector<std::function<double(double)>> values;
	std::vector<std::function<double(double)>> slopes;

	std::size_t size() const noexcept { return values.size(); }
	double value(std::size_t i, double x) const { return values[i](x); }
	double slope(std::size_t i, double x) const { return slopes[i](x); }
};

template <SeparableCost C>
struct SeparableProblem {
	C cost;
	std::vector<double> floors;
	double budget = 0.0;

	std::size_t size() const noexcept { return floors.size(); }

	double total_cost(std::span<const double> shares) const
	{
		double sum = 0.0;
		for (std::size_t i = 0; i < shares.size(); ++i)
			sum += cost.value(i, shares[i]);
		return sum;
	}

	double floor_sum() const { return std::accumulate(floors.begin(), floors.end(), 0.0); }

	void validate() const
	{
		if (floors.empty())
			throw InvalidArgument("separable problem needs at least one variable");
		if (cost.size() != floors.size())
			throw InvalidArgument("cost and floor counts differ");
		if (!(budget > 0.0) || !std::isfinite(budget))
			throw InvalidArgument("budget must be positive and finite");
		for (double f : floors)
			if (!(f > 0.0) || !std::isfinite(f))
				throw InvalidArgument("floors must be positive and finite");
		if (floor_sum() > budget * (1.0 + 1e-12))
			throw Infeasible("sum of floors exceeds budget");
	}
};

struct SolverOptions {
	double tol = 1e-10; ///< relative slope residual and relative budget residual
	int max_outer = 200;
	int max_inner = 100;
};

struct DualSolution {
	std::vector<double> shares;
	double multiplier = 0.0; ///< nu; 0 when every share sits on its floor
	int outer_iterations = 0;
};

namespace detail {

/// Largest x >= floor with |slope(x)| >= nu, i.e. the share that index i takes at multiplier nu.
template <SeparableCost C>
double share_at(const C& cost, std::size_t i, double floor, double nu, double guess, int max_inner)
{
	const auto mag = [&](double x) { return -cost.slope(i, x); };
	if (mag(floor) <= nu)
		return floor;
	const double log_nu = std::log(nu);
	const auto h = [&](double x) { return std::log(mag(x)) - log_nu; };

	double lo = floor;
	double hi = guess > floor ? guess : 2.0 * floor;
	double h_hi = h(hi);
	for (int k = 0; h_hi > 0.0; ++k) {
		if (k > 4000)
			throw NonConvergence("optsolve: cannot bracket share");
		lo = hi;
		hi *= 2.0;
		h_hi = h(hi);
	}
	if (h_hi == 0.0)
		return hi;
	// h(lo) > 0 > h(hi)

	double x = (guess > lo && guess < hi) ? guess : 0.5 * (lo + hi);
	for (int it = 0; it < max_inner; ++it) {
		const double mx = mag(x);
		const double hx = std::log(mx) - log_nu;
		if (std::abs(hx) <= 1e-14)
			return x;
		if (hx > 0.0)
			lo = x;
		else
			hi = x;
		if (hi - lo <= 2.0 * std::numeric_limits<double>::epsilon() * hi)
			return 0.5 * (lo + hi);
		double next = 0.5 * (lo + hi);
		if constexpr (CurvedCost<C>) {
			// d/dx log|slope| = -curvature / |slope|
			const double step = hx * mx / cost.curvature(i, x);
			const double cand = x + step;
			if (cand > lo && cand < hi)
				next = cand;
		}
		x = next;
	}
	throw NonConvergence("optsolve: inner iteration cap reached");
}

} // namespace detail

/**
 * Solve by searching the multiplier nu.
 *
 * For fixed nu each share is found independently by inverting its monotone
 * slope magnitude (Newton inside a bisection bracket when the cost exposes
 * curvature, plain bisection otherwise). The outer search brackets log(nu)
 * and narrows it with Illinois-modified regula falsi until the shares use the
 * budget to a relative tolerance of tol.
 */
template <SeparableCost C>
DualSolution solve_dual_bisection(const SeparableProblem<C>& p, SolverOptions opts = {})
{
	p.validate();
	const std::size_t k = p.size();
	const double budget = p.budget;

	DualSolution sol;
	if (p.floor_sum() >= budget * (1.0 - 1e-15)) {
		sol.shares = p.floors;
		return sol;
	}
	if (k == 1) {
		sol.shares = {budget};
		sol.multiplier = -p.cost.slope(0, budget);
		return sol;
	}

	// start every share from the equal split of the slack
	const double slack = (budget - p.floor_sum()) / static_cast<double>(k);
	std::vector<double> guess(k);
	for (std::size_t i = 0; i < k; ++i)
		guess[i] = p.floors[i] + slack;
	std::vector<double> shares(k, 0.0);
	const auto excess = [&](double log_nu) {
		const double nu = std::exp(log_nu);
		double sum = 0.0;
		for (std::size_t i = 0; i < k; ++i) {
			shares[i] = detail::share_at(p.cost, i, p.floors[i], nu, guess[i], opts.max_inner);
			if (shares[i] > p.floors[i])
				guess[i] = shares[i];
			sum += shares[i];
		}
		return sum - budget;
	};

	double max_mag = 0.0;
	for (std::size_t i = 0; i < k; ++i)
		max_mag = std::max(max_mag, -p.cost.slope(i, p.floors[i]));

	// at nu = max_mag every share is on its floor, so the excess is <= 0
	double t_hi = std::log(max_mag);
	double e_hi = p.floor_sum() - budget;
	if (!std::isfinite(max_mag)) {
		// some slope overflows at its floor; start from the largest finite multiplier
		t_hi = std::log(std::numeric_limits<double>::max());
		e_hi = excess(t_hi);
		if (e_hi > 0.0)
			throw NonConvergence("optsolve: cost slopes overflow near the floors");
	}

	// first probe: mean log slope at the starting shares, usually close to the answer
	double t_lo = 0.0;
	for (std::size_t i = 0; i < k; ++i)
		t_lo += std::log(-p.cost.slope(i, guess[i])) / static_cast<double>(k);
	if (!(std::isfinite(t_lo) && t_lo < t_hi))
		t_lo = t_hi - 1.0;
	double e_lo = excess(t_lo);
	for (double step = 1.0; e_lo <= 0.0; step *= 2.0) {
		if (e_lo == 0.0) {
			sol.shares = shares;
			sol.multiplier = std::exp(t_lo);
			return sol;
		}
		t_hi = t_lo;
		e_hi = e_lo;
		t_lo = t_hi - step;
		if (t_lo < -745.0)
			throw NonConvergence("optsolve: multiplier underflow while bracketing");
		e_lo = excess(t_lo);
	}

	const double target = 0.5 * opts.tol * budget;
	int side = 0;
	for (int it = 1; it <= opts.max_outer; ++it) {
		double t = (t_lo * e_hi - t_hi * e_lo) / (e_hi - e_lo);
		if (!(t > t_lo && t < t_hi))
			t = 0.5 * (t_lo + t_hi);
		const double e = excess(t);
		sol.outer_iterations = it;
		const bool collapsed = t_hi - t_lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t));
		if (std::abs(e) <= target || collapsed) {
			sol.shares = shares;
			sol.multiplier = std::exp(t);
			return sol;
		}
		if (e > 0.0) {
			t_lo = t;
			e_lo = e;
			if (side == -1)
				e_hi *= 0.5;
			side = -1;
		} else {
			t_hi = t;
			e_hi = e;
			if (side == 1)
				e_lo *= 0.5;
			side = 1;
		}
	}
	throw NonConvergence("optsolve: outer iteration cap reached");
}

/**
 * Largest relative KKT violation of `shares` with multiplier `nu`:
 * stationarity ||slope_i| - nu| / nu off the floor, complementarity
 * max(0, |slope_i(floor_i)| - nu) / nu on it.
 */
template <SeparableCost C>
double kkt_residual(const SeparableProblem<C>& p, std::span<const double> shares, double nu)
{
	double worst = 0.0;
	for (std::size_t i = 0; i < shares.size(); ++i) {
		const double mag = -p.cost.slope(i, shares[i]);
		const double r = shares[i] <= p.floors[i] ? std::max(0.0, mag - nu) / nu : std::abs(mag - nu) / nu;
		worst = std::max(worst, r);
	}
	return worst;
}

inline double budget_residual(std::span<const double> shares, double budget)
{
	return std::abs(std::accumulate(shares.begin(), shares.end(), 0.0) - budget) / budget;
}

/**
 * Local improvement by transferring resource between pairs of variables.
 * Each pass tries every ordered pair with the current step; the step halves
 * when no transfer helps. Works for any k and needs only cost values.
 */
template <SeparableCost C>
std::vector<double> refine_pairwise(const SeparableProblem<C>& p, std::vector<double> x, double initial_step)
{
	const std::size_t k = p.size();
	std::vector<double> val(k);
	for (std::size_t i = 0; i < k; ++i)
		val[i] = p.cost.value(i, x[i]);

	const double min_step = 1e-15 * p.budget;
	for (double step = initial_step; step > min_step;) {
		bool improved = false;
		for (std::size_t i = 0; i < k; ++i) {
			for (std::size_t j = 0; j < k; ++j) {
				if (i == j)
					continue;
				for (;;) {
					const double d = std::min(step, x[i] - p.floors[i]);
					if (!(d > 0.0))
						break;
					const double vi = p.cost.value(i, x[i] - d);
					const double vj = p.cost.value(j, x[j] + d);
					if (!(vi + vj < val[i] + val[j]))
						break;
					x[i] -= d;
					x[j] += d;
					val[i] = vi;
					val[j] = vj;
					improved = true;
				}
			}
		}
		if (!improved)
			step *= 0.5;
	}
	return x;
}

/**
 * Exhaustive grid search over the budget simplex (shares = floors plus a
 * grid-quantized split of the slack) followed by pairwise refinement.
 * Limited to k <= 4; the grid has C(grid + k - 1, k - 1) points.
 */
template <SeparableCost C>
std::vector<double> brute_force_oracle(const SeparableProblem<C>& p, int grid)
{
	p.validate();
	const std::size_t k = p.size();
	if (k > 4)
		throw InvalidArgument("brute_force_oracle supports at most 4 variables");
	if (grid < 1)
		throw InvalidArgument("grid must be positive");

	const double slack = std::max(0.0, p.budget - p.floor_sum());
	std::vector<int> counts(k, 0);
	std::vector<double> x(k), best;
	double best_cost = std::numeric_limits<double>::infinity();

	const std::function<void(std::size_t, int)> walk = [&](std::size_t idx, int left) {
		if (idx + 1 == k) {
			counts[idx] = left;
			for (std::size_t i = 0; i < k; ++i)
				x[i] = p.floors[i] + slack * counts[i] / grid;
			const double c = p.total_cost(x);
			if (c < best_cost) {
				best_cost = c;
				best = x;
			}
			return;
		}
		for (int n = 0; n <= left; ++n) {
			counts[idx] = n;
			walk(idx + 1, left - n);
		}
	};
	walk(0, grid);

	if (k == 1 || slack == 0.0)
		return best;
	return refine_pairwise(p, std::move(best), slack / grid);
}

} // namespace m2m::opt

#endif // M2M_OPTSOLVE_HPP

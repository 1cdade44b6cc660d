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
 * \file m2m/coordinated.hpp
 *
 * \brief Scheduled uplink: the base station knows every arrival's gain and
 * hands out orthogonal time (TDMA) or bandwidth (FDMA) shares, or decodes
 * all devices jointly with successive interference cancellation (SIC).
 *
 * With x = L / (W tau_s) the per-device costs are
 *
 *   TDMA power   (2^(L / (W tau)) - 1) / (mu g)
 *   TDMA energy  (tau / L) (2^(L / (W tau)) - 1) / (mu g)
 *   FDMA power   (w / W) (2^(L / (w tau_s)) - 1) / (mu g)
 *
 * (FDMA energy is FDMA power times tau_s / L, so one schedule serves both.)
 * The p_max cap becomes a floor on each share: tau_min for TDMA, w_min for FDMA.
 */

#ifndef M2M_COORDINATED_HPP
#define M2M_COORDINATED_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <numeric>
#include <queue>
#include <span>
#include <string_view>
#include <vector>

#include "m2m/channel.hpp"
#include "m2m/error.hpp"
#include "m2m/optsolve.hpp"
#include "m2m/poisson.hpp"
#include "m2m/random.hpp"

namespace m2m {

enum class Resource { tdma_time, fdma_band };
enum class Objective { power, energy };
enum class AllocationMode { optimal, equal, closed_form };

inline std::string_view to_string(Resource r) noexcept { return r == Resource::tdma_time ? "tdma" : "fdma"; }
inline std::string_view to_string(Objective o) noexcept { return o == Objective::power ? "power" : "energy"; }

inline std::string_view to_string(AllocationMode m) noexcept
{
	switch (m) {
	case AllocationMode::optimal: return "optimal";
	case AllocationMode::equal: return "equal";
	case AllocationMode::closed_form: return "closed-form";
	}
	return "?";
}

struct Allocation {
	Resource kind = Resource::tdma_time;
	std::vector<double> shares; ///< s (TDMA) or Hz (FDMA), aligned with the gains
	std::vector<double> floors; ///< tau_min or w_min per device
	double budget = 0.0;        ///< tau_s or W
};

struct ScheduleResult {
	std::vector<double> per_device_power; ///< W
	double total_power = 0.0;             ///< W
	double total_energy = 0.0;            ///< J over the slot
	double energy_per_bit = 0.0;          ///< J/bit, total_energy / (K L)
	double sum_energy_per_bit = 0.0;      ///< J/bit, total_energy / L (sum of per-device energies per bit)
	std::vector<std::size_t> dropped;     ///< device indices not served
	std::vector<std::size_t> over_cap;    ///< served devices whose power exceeds p_max
};

// ---------------------------------------------------------------------------
// Costs

/// Rate-inversion cost weight_i * x^e * (2^(a / x) - 1) with e in {0, 1}.
/// e = 0 is the TDMA power integrand; e = 1 covers TDMA energy and FDMA.
struct RateCost {
	std::vector<double> weight;
	double a = 0.0;
	bool times_share = false;

	std::size_t size() const noexcept { return weight.size(); }

	double value(std::size_t i, double x) const
	{
		const double s = a * std::numbers::ln2 / x;
		return times_share ? weight[i] * x * std::expm1(s) : weight[i] * std::expm1(s);
	}

	double slope(std::size_t i, double x) const
	{
		const double s = a * std::numbers::ln2 / x;
		if (times_share)
			return weight[i] * excess_derivative(s);
		return -weight[i] * std::exp(s) * s / x;
	}

	double curvature(std::size_t i, double x) const
	{
		const double s = a * std::numbers::ln2 / x;
		if (times_share)
			return weight[i] * s * s * std::exp(s) / x;
		return weight[i] * std::exp(s) * s * (s + 2.0) / (x * x);
	}

	/// d/dx [x (e^(c/x) - 1)] = expm1(s) - s e^s with s = c / x; negative for s > 0.
	static double excess_derivative(double s)
	{
		if (s < 0.5) {
			// -sum_{n>=2} (n - 1) s^n / n!
			double term = s; // s^n / n! at n = 1
			double sum = 0.0;
			for (int n = 2; n < 60; ++n) {
				term *= s / n;
				const double t = (n - 1) * term;
				sum += t;
				if (t <= 1e-18 * sum)
					break;
			}
			return -sum;
		}
		const double em1 = std::expm1(s);
		return em1 - s * (1.0 + em1);
	}
};

using RateProblem = opt::SeparableProblem<RateCost>;

inline std::vector<double> tdma_floors(std::span<const double> gains, const Scenario& s)
{
	std::vector<double> f;
	f.reserve(gains.size());
	for (double g : gains)
		f.push_back(tau_min(g, s));
	return f;
}

/// w_min for every device; throws Infeasible if some device cannot be served at any bandwidth.
inline std::vector<double> fdma_floors(std::span<const double> gains, const Scenario& s)
{
	std::vector<double> f;
	f.reserve(gains.size());
	for (double g : gains) {
		const auto w = w_min(g, s);
		if (!w)
			throw Infeasible("device cannot reach L / tau_s at any bandwidth; drop it first");
		f.push_back(*w);
	}
	return f;
}

inline RateProblem make_tdma_problem(std::span<const double> gains, const Scenario& s, Objective obj)
{
	RateProblem p;
	p.cost.a = s.payload_bits / s.w_total;
	p.cost.times_share = obj == Objective::energy;
	for (double g : gains)
		p.cost.weight.push_back(obj == Objective::energy ? s.p_max / (s.mu_ref * g * s.payload_bits)
								 : s.p_max / (s.mu_ref * g));
	p.floors = tdma_floors(gains, s);
	p.budget = s.tau_slot;
	return p;
}

inline RateProblem make_fdma_problem(std::span<const double> gains, const Scenario& s)
{
	RateProblem p;
	p.cost.a = s.required_rate();
	p.cost.times_share = true;
	for (double g : gains)
		p.cost.weight.push_back(s.p_max / (s.mu_ref * g * s.w_total));
	p.floors = fdma_floors(gains, s);
	p.budget = s.w_total;
	return p;
}

// ---------------------------------------------------------------------------
// Schedules

/// Exponent n of the closed-form share tau ~ g^(-1/n): 2 at light load (lambda tau_s < 100), 3 otherwise.
inline int closed_form_exponent(const Scenario& s) noexcept
{
	return s.mean_arrivals() < 100.0 ? 2 : 3;
}

/**
 * Closed-form time share of a device at distance r when shares scale as
 * g^(-1/n) and the normalizer sum_j f(g_j) is replaced by its expectation
 * lambda E[f(g)] over the annulus (no fading).
 */
inline double closed_form_time(double distance, const Scenario& s, int n)
{
	const double e = s.gamma / n;
	const double ri = s.r_inner, r0 = s.r_outer;
	return (2.0 + e) / (2.0 * s.lambda_rate) * std::pow(distance, e) * (r0 * r0 - ri * ri) /
	       (std::pow(r0, 2.0 + e) - std::pow(ri, 2.0 + e));
}

/**
 * Shares max(floor_i, c * weight_i) with c chosen so they sum exactly to the
 * budget. Solved in closed form over the sorted breakpoints floor_i / weight_i.
 */
inline std::vector<double> proportional_with_floors(std::span<const double> weights, std::span<const double> floors,
						    double budget)
{
	const std::size_t k = weights.size();
	if (std::accumulate(floors.begin(), floors.end(), 0.0) > budget * (1.0 + 1e-12))
		throw Infeasible("sum of floors exceeds budget");

	std::vector<std::size_t> order(k);
	std::iota(order.begin(), order.end(), std::size_t{0});
	const auto brk = [&](std::size_t i) { return floors[i] / weights[i]; };
	std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return brk(x) < brk(y); });

	double rest = std::accumulate(floors.begin(), floors.end(), 0.0);
	double active = 0.0;
	double c = 0.0;
	for (std::size_t j = 0; j < k; ++j) {
		active += weights[order[j]];
		rest -= floors[order[j]];
		c = (budget - rest) / active;
		if (j + 1 == k || c <= brk(order[j + 1]))
			break;
	}
	std::vector<double> x(k);
	for (std::size_t i = 0; i < k; ++i)
		x[i] = std::max(floors[i], c * weights[i]);
	return x;
}

namespace detail {

inline Allocation equal_allocation(Resource kind, std::vector<double> floors, double budget)
{
	Allocation a{kind, {}, std::move(floors), budget};
	const double share = budget / static_cast<double>(a.floors.size());
	for (double f : a.floors)
		if (share < f)
			throw FloorViolation("equal share below a device's minimum resource");
	a.shares.assign(a.floors.size(), share);
	return a;
}

inline void check_gains(std::span<const double> gains)
{
	if (gains.empty())
		throw InvalidArgument("need at least one device");
	for (double g : gains)
		if (!(g > 0.0) || !std::isfinite(g))
			throw InvalidArgument("gains must be positive and finite");
}

} // namespace detail

inline Allocation tdma_schedule(std::span<const double> gains, const Scenario& s, Objective obj, AllocationMode mode,
				opt::SolverOptions opts = {})
{
	detail::check_gains(gains);
	RateProblem p = make_tdma_problem(gains, s, obj);
	if (p.floor_sum() > p.budget * (1.0 + 1e-12))
		throw Infeasible("TDMA: sum of tau_min exceeds tau_s");

	switch (mode) {
	case AllocationMode::equal:
		return detail::equal_allocation(Resource::tdma_time, std::move(p.floors), p.budget);
	case AllocationMode::closed_form: {
		const double n = closed_form_exponent(s);
		std::vector<double> w;
		for (double g : gains)
			w.push_back(std::pow(g, -1.0 / n));
		auto x = proportional_with_floors(w, p.floors, p.budget);
		return Allocation{Resource::tdma_time, std::move(x), std::move(p.floors), p.budget};
	}
	case AllocationMode::optimal:
		break;
	}
	auto sol = opt::solve_dual_bisection(p, opts);
	return Allocation{Resource::tdma_time, std::move(sol.shares), std::move(p.floors), p.budget};
}

/// FDMA power and energy optima coincide, so there is no objective argument.
inline Allocation fdma_schedule(std::span<const double> gains, const Scenario& s, AllocationMode mode,
				opt::SolverOptions opts = {})
{
	detail::check_gains(gains);
	RateProblem p = make_fdma_problem(gains, s);
	if (p.floor_sum() > p.budget * (1.0 + 1e-12))
		throw Infeasible("FDMA: sum of w_min exceeds W");

	switch (mode) {
	case AllocationMode::equal:
		return detail::equal_allocation(Resource::fdma_band, std::move(p.floors), p.budget);
	case AllocationMode::closed_form:
		throw InvalidArgument("closed-form shares are defined for TDMA only");
	case AllocationMode::optimal:
		break;
	}
	auto sol = opt::solve_dual_bisection(p, opts);
	return Allocation{Resource::fdma_band, std::move(sol.shares), std::move(p.floors), p.budget};
}

/// Exact per-device power and energy of an allocation. Powers above p_max are flagged, not clipped.
inline ScheduleResult allocation_cost(const Allocation& a, std::span<const double> gains, const Scenario& s)
{
	if (a.shares.size() != gains.size())
		throw InvalidArgument("allocation and gains differ in length");
	ScheduleResult r;
	r.per_device_power.reserve(gains.size());
	for (std::size_t i = 0; i < gains.size(); ++i) {
		const double x = a.shares[i];
		double p = 0.0;
		double e = 0.0;
		if (a.kind == Resource::tdma_time) {
			p = s.p_max * std::expm1(std::numbers::ln2 * s.payload_bits / (s.w_total * x)) / (s.mu_ref * gains[i]);
			e = p * x;
		} else {
			p = s.p_max * (x / s.w_total) * std::expm1(std::numbers::ln2 * s.payload_bits / (x * s.tau_slot)) /
			    (s.mu_ref * gains[i]);
			e = p * s.tau_slot;
		}
		r.per_device_power.push_back(p);
		r.total_power += p;
		r.total_energy += e;
		if (p > s.p_max * (1.0 + 1e-9))
			r.over_cap.push_back(i);
	}
	r.sum_energy_per_bit = r.total_energy / s.payload_bits;
	r.energy_per_bit = gains.empty() ? 0.0 : r.sum_energy_per_bit / static_cast<double>(gains.size());
	return r;
}

// ---------------------------------------------------------------------------
// SIC

/**
 * Weakest-last SIC: the strongest device is decoded first against all the
 * others as noise, so device k (gains ascending) sees only devices 1..k-1 and
 * needs P_k = 2^((k-1) x) (2^x - 1) / (mu g_k) with x = L / (W tau_s).
 * No p_max cap is applied; devices above it are flagged in over_cap.
 */
inline ScheduleResult sic_sum_power(std::span<const double> gains, const Scenario& s)
{
	detail::check_gains(gains);
	if (!std::is_sorted(gains.begin(), gains.end()))
		throw InvalidArgument("sic_sum_power: gains must be sorted ascending");
	const double x = s.spectral_load() * std::numbers::ln2;
	const double step = std::expm1(x);
	ScheduleResult r;
	for (std::size_t k = 0; k < gains.size(); ++k) {
		const double p = s.p_max * std::exp(x * static_cast<double>(k)) * step / (s.mu_ref * gains[k]);
		r.per_device_power.push_back(p);
		r.total_power += p;
		if (p > s.p_max * (1.0 + 1e-9))
			r.over_cap.push_back(k);
	}
	r.total_energy = r.total_power * s.tau_slot;
	r.sum_energy_per_bit = r.total_energy / s.payload_bits;
	r.energy_per_bit = r.sum_energy_per_bit / static_cast<double>(gains.size());
	return r;
}

// ---------------------------------------------------------------------------
// Equal-vs-optimal bounds

/// Upper bound on (equal-time TDMA power) / (optimal TDMA power).
inline double tdma_power_ratio_bound(std::span<const double> gains, const Scenario& s)
{
	detail::check_gains(gains);
	const double g1 = *std::min_element(gains.begin(), gains.end());
	double sum = 0.0;
	for (double g : gains)
		sum += std::sqrt(g1 / g);
	const double x = s.spectral_load() * std::numbers::ln2;
	return std::expm1(x * static_cast<double>(gains.size())) / std::expm1(x * sum);
}

/// Upper bound on equal/optimal TDMA energy and on equal/optimal FDMA power (and energy).
inline double energy_ratio_bound(std::span<const double> gains, const Scenario& s)
{
	detail::check_gains(gains);
	const double g1 = *std::min_element(gains.begin(), gains.end());
	double sum = 0.0;
	for (double g : gains)
		sum += g1 / g;
	const double k = static_cast<double>(gains.size());
	const double x = s.spectral_load() * std::numbers::ln2;
	return sum / k * std::expm1(x * k) / std::expm1(x * sum);
}

/// Equal-bandwidth FDMA power over SIC power for gains sorted ascending; tends to 1 as L / (W tau_s) -> 0.
inline double fdma_vs_sic_ratio(std::span<const double> gains, const Scenario& s)
{
	detail::check_gains(gains);
	if (!std::is_sorted(gains.begin(), gains.end()))
		throw InvalidArgument("fdma_vs_sic_ratio: gains must be sorted ascending");
	const double x = s.spectral_load() * std::numbers::ln2;
	const double k = static_cast<double>(gains.size());
	double inv = 0.0, weighted = 0.0;
	for (std::size_t i = 0; i < gains.size(); ++i) {
		inv += 1.0 / gains[i];
		weighted += std::exp(x * static_cast<double>(i)) / gains[i];
	}
	return std::expm1(x * k) / (k * std::expm1(x)) * inv / weighted;
}

// ---------------------------------------------------------------------------
// Dropping, outage, load

struct DropResult {
	std::vector<std::size_t> kept;    ///< indices in input order
	std::vector<std::size_t> dropped; ///< indices, weakest first

	std::vector<double> kept_gains(std::span<const double> gains) const
	{
		std::vector<double> g;
		g.reserve(kept.size());
		for (std::size_t i : kept)
			g.push_back(gains[i]);
		return g;
	}
};

/// Number of arrivals always dropped: floor(delta1 * n), guarded against representation error.
inline std::size_t drop_count(double delta1, std::size_t n) noexcept
{
	return static_cast<std::size_t>(std::floor(delta1 * static_cast<double>(n) + 1e-9));
}

/// Drops the floor(delta1 * N) smallest-gain devices.
inline DropResult drop_devices(std::span<const double> gains, double delta1)
{
	if (!(delta1 >= 0.0 && delta1 < 1.0))
		throw InvalidArgument("delta1 must lie in [0, 1)");
	std::vector<std::size_t> order(gains.size());
	std::iota(order.begin(), order.end(), std::size_t{0});
	std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return gains[a] < gains[b]; });

	const std::size_t n_drop = drop_count(delta1, gains.size());
	DropResult r;
	r.dropped.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_drop));
	r.kept.assign(order.begin() + static_cast<std::ptrdiff_t>(n_drop), order.end());
	std::sort(r.kept.begin(), r.kept.end());
	return r;
}

/// Whether a device could be served alone within the slot under the given partitioning.
inline bool servable_alone(double gain, const Scenario& s, Resource kind)
{
	if (kind == Resource::tdma_time)
		return tau_min(gain, s) <= s.tau_slot;
	const auto w = w_min(gain, s);
	return w && *w <= s.w_total;
}

/// As drop_devices(gains, delta1), plus every remaining device that cannot be served even alone.
inline DropResult drop_devices(std::span<const double> gains, double delta1, const Scenario& s, Resource kind)
{
	DropResult r = drop_devices(gains, delta1);
	std::vector<std::size_t> kept;
	std::vector<std::size_t> unservable;
	for (std::size_t i : r.kept)
		(servable_alone(gains[i], s, kind) ? kept : unservable).push_back(i);
	r.kept = std::move(kept);
	r.dropped.insert(r.dropped.end(), unservable.begin(), unservable.end());
	return r;
}

/**
 * Drops the weakest of `gains` until the floors of the rest fit the budget
 * (optimal mode) or until budget / K covers every remaining floor (equal
 * mode). Returns how many of the weakest were dropped.
 */
inline std::size_t trim_to_fit(std::span<const double> sorted_floors_weakest_first, double budget, bool equal_mode)
{
	const std::size_t n = sorted_floors_weakest_first.size();
	if (equal_mode) {
		for (std::size_t d = 0; d < n; ++d) {
			const double share = budget / static_cast<double>(n - d);
			if (sorted_floors_weakest_first[d] <= share) {
				bool ok = true;
				for (std::size_t j = d; j < n && ok; ++j)
					ok = sorted_floors_weakest_first[j] <= share;
				if (ok)
					return d;
			}
		}
		return n;
	}
	double sum = std::accumulate(sorted_floors_weakest_first.begin(), sorted_floors_weakest_first.end(), 0.0);
	std::size_t d = 0;
	while (d < n && sum > budget * (1.0 + 1e-12))
		sum -= sorted_floors_weakest_first[d++];
	return d;
}

struct LoadPolicy {
	double delta1 = 0.0;      ///< fraction of arrivals always dropped
	double eps1 = 0.01;       ///< allowed probability that the kept arrivals do not fit
	double delta_total = 0.01; ///< system outage target

	/// Throws InvalidArgument unless eps1 + delta1 (1 - eps1) <= delta_total.
	static LoadPolicy make(double delta1, double eps1, double delta_total)
	{
		if (!(delta1 >= 0.0 && delta1 < 1.0) || !(eps1 >= 0.0 && eps1 <= 1.0) ||
		    !(delta_total >= 0.0 && delta_total <= 1.0))
			throw InvalidArgument("load policy probabilities out of range");
		if (eps1 + delta1 * (1.0 - eps1) > delta_total * (1.0 + 1e-12))
			throw InvalidArgument("eps1 + delta1 (1 - eps1) exceeds delta_total");
		return LoadPolicy{delta1, eps1, delta_total};
	}
};

/// Upper bound eps1 + delta1 (1 - eps1) on the system outage.
inline double outage_bound(const LoadPolicy& p)
{
	return p.eps1 + p.delta1 * (1.0 - p.eps1);
}

struct CoordinatedMaxLoad {
	Resource kind = Resource::tdma_time;
	double lambda_max = 0.0;
	double lambda_slln = 0.0; ///< budget / E[floor] / ((1 - delta1) tau_s)
	double k_slln = 0.0;      ///< budget / E[floor]
	std::size_t trials = 0;
	std::uint64_t seed = 0;
};

/**
 * Arrivals that one device stream can absorb: feeds devices from `rng` one at
 * a time, keeps the strongest n - floor(delta1 n) of the first n, and returns
 * the largest n before the kept floors stop fitting the budget (or some kept
 * device is unservable). Also accumulates finite floors for the SLLN estimate.
 */
inline std::int64_t stream_capacity(const Scenario& s, Resource kind, double delta1, Rng& rng, double& floor_sum,
				    std::size_t& floor_count)
{
	struct Item {
		double gain;
		double floor;
	};
	const auto weaker = [](const Item& a, const Item& b) { return a.gain > b.gain; };   // min-heap on gain
	const auto stronger = [](const Item& a, const Item& b) { return a.gain < b.gain; }; // max-heap on gain
	std::priority_queue<Item, std::vector<Item>, decltype(weaker)> kept(weaker);
	std::priority_queue<Item, std::vector<Item>, decltype(stronger)> dropped(stronger);

	const double budget = kind == Resource::tdma_time ? s.tau_slot : s.w_total;
	long double sum = 0.0L;
	std::int64_t unservable = 0;
	const auto add = [&](const Item& it) {
		if (std::isfinite(it.floor))
			sum += it.floor;
		else
			++unservable;
		kept.push(it);
	};
	const auto remove = [&]() {
		const Item it = kept.top();
		kept.pop();
		if (std::isfinite(it.floor))
			sum -= it.floor;
		else
			--unservable;
		return it;
	};

	for (std::int64_t n = 1;; ++n) {
		if (n > 100'000'000)
			throw NonConvergence("stream_capacity: budget never exhausted");
		const Device d = sample_device(s, rng);
		double f = std::numeric_limits<double>::infinity();
		if (kind == Resource::tdma_time) {
			f = tau_min(d.gain, s);
		} else if (const auto w = w_min(d.gain, s)) {
			f = *w;
		}
		if (std::isfinite(f)) {
			floor_sum += f;
			++floor_count;
		}
		const Item it{d.gain, f};
		if (!kept.empty() && it.gain < kept.top().gain)
			dropped.push(it);
		else
			add(it);

		const auto target = static_cast<std::size_t>(n) - drop_count(delta1, static_cast<std::size_t>(n));
		while (kept.size() > target)
			dropped.push(remove());
		while (kept.size() < target) {
			add(dropped.top());
			dropped.pop();
		}
		if (unservable > 0 || static_cast<double>(sum) > budget)
			return n - 1;
	}
}

struct CoordinatedLoadOptions {
	double lambda_cap = 1.0e9;
	int iterations = 60;
};

/**
 * Largest arrival rate at which the kept arrivals fit the slot with
 * probability at least 1 - eps1.
 *
 * Each trial owns a device stream and a uniform u_t; the arrival count at
 * rate lambda is the Poisson inverse CDF of u_t, so every trial's count grows
 * monotonically with lambda and the empirical outage is monotone too. A trial
 * is in outage when its count exceeds the stream's capacity. The search
 * doubles lambda until the outage exceeds eps1, then bisects.
 */
inline CoordinatedMaxLoad coordinated_max_load(Resource kind, const Scenario& s, const LoadPolicy& policy,
					       std::size_t trials, std::uint64_t seed, CoordinatedLoadOptions opts = {})
{
	s.validate();
	if (trials == 0)
		throw InvalidArgument("coordinated_max_load needs at least one trial");

	std::vector<double> u(trials);
	std::vector<std::int64_t> capacity(trials);
	double floor_sum = 0.0;
	std::size_t floor_count = 0;
	for (std::size_t t = 0; t < trials; ++t) {
		Rng rng(derive_seed(seed, {t}));
		u[t] = uniform01(rng);
		capacity[t] = stream_capacity(s, kind, policy.delta1, rng, floor_sum, floor_count);
	}

	const auto outage = [&](double lambda) {
		const PoissonTable table(lambda * s.tau_slot);
		std::size_t hits = 0;
		for (std::size_t t = 0; t < trials; ++t)
			hits += table.inverse_cdf(u[t]) > capacity[t] ? 1 : 0;
		return static_cast<double>(hits) / static_cast<double>(trials);
	};
	const auto feasible = [&](double lambda) { return outage(lambda) <= policy.eps1; };

	double lo = 0.0;
	double hi = 1.0;
	while (feasible(hi)) {
		lo = hi;
		hi *= 2.0;
		if (hi > opts.lambda_cap)
			throw NonConvergence("coordinated_max_load: load cap exceeded");
	}
	for (int it = 0; it < opts.iterations && hi - lo > 1e-9 * hi; ++it) {
		const double mid = 0.5 * (lo + hi);
		if (feasible(mid))
			lo = mid;
		else
			hi = mid;
	}

	CoordinatedMaxLoad r;
	r.kind = kind;
	r.lambda_max = lo;
	r.trials = trials;
	r.seed = seed;
	const double budget = kind == Resource::tdma_time ? s.tau_slot : s.w_total;
	if (floor_count > 0) {
		r.k_slln = budget / (floor_sum / static_cast<double>(floor_count));
		r.lambda_slln = r.k_slln / ((1.0 - policy.delta1) * s.tau_slot);
	}
	return r;
}

} // namespace m2m

#endif // M2M_COORDINATED_HPP

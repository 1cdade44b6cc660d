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
 * \file m2m/montecarlo.hpp
 *
 * \brief Load sweeps comparing access strategies slot by slot.
 *
 * Every (lambda, trial) pair owns a seed derived from the sweep seed, so all
 * strategies see the same arrivals and the same devices. Per trial the
 * engine records the total transmit power of the slot and the energy spent
 * per delivered bit; results aggregate the mean and the nearest-rank 95th
 * percentile across trials.
 */

#ifndef M2M_MONTECARLO_HPP
#define M2M_MONTECARLO_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "m2m/channel.hpp"
#include "m2m/coordinated.hpp"
#include "m2m/error.hpp"
#include "m2m/poisson.hpp"
#include "m2m/random.hpp"
#include "m2m/uncoordinated.hpp"

namespace m2m {

/// Nearest-rank quantile: the ceil(q n)-th smallest sample.
inline double percentile(std::span<const double> samples, double q)
{
	if (samples.empty())
		throw InvalidArgument("percentile of an empty sample");
	if (!(q > 0.0 && q < 1.0))
		throw InvalidArgument("percentile level must lie in (0, 1)");
	std::vector<double> v(samples.begin(), samples.end());
	const auto n = v.size();
	auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(n) - 1e-9));
	rank = std::clamp<std::size_t>(rank, 1, n);
	std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(rank - 1), v.end());
	return v[rank - 1];
}

enum class Strategy { cdma_ra, fdma_ra, tdma_opt, tdma_equal, fdma_opt, fdma_equal, sic };

inline constexpr Strategy all_strategies[] = {Strategy::cdma_ra,  Strategy::fdma_ra,    Strategy::tdma_opt,
					      Strategy::tdma_equal, Strategy::fdma_opt, Strategy::fdma_equal,
					      Strategy::sic};

inline std::string_view to_string(Strategy s) noexcept
{
	switch (s) {
	case Strategy::cdma_ra: return "cdma_ra";
	case Strategy::fdma_ra: return "fdma_ra";
	case Strategy::tdma_opt: return "tdma_opt";
	case Strategy::tdma_equal: return "tdma_equal";
	case Strategy::fdma_opt: return "fdma_opt";
	case Strategy::fdma_equal: return "fdma_equal";
	case Strategy::sic: return "sic";
	}
	return "?";
}

inline std::optional<Strategy> parse_strategy(std::string_view name) noexcept
{
	for (Strategy s : all_strategies)
		if (to_string(s) == name)
			return s;
	return std::nullopt;
}

struct SweepResult {
	Strategy strategy = Strategy::cdma_ra;
	double lambda = 0.0;
	std::size_t trials = 0;
	std::uint64_t seed = 0;
	double mean_power_w = 0.0;
	double p95_power_w = 0.0;
	double mean_eb_j = 0.0; ///< 0 when no trial delivered a bit
	double p95_eb_j = 0.0;
	double outage_frac = 0.0; ///< outaged or dropped devices over all arrivals
};

struct SweepOptions {
	double p_f = 0.05;
	double eps = 0.01;
	double delta = 0.0;
	double delta1 = 0.0; ///< fraction always dropped by coordinated strategies
	Objective tdma_objective = Objective::energy;
};

/// One slot under one strategy.
struct TrialOutcome {
	double power = 0.0;  ///< W, summed over arrivals (outaged and dropped devices at p_max)
	double energy = 0.0; ///< J, summed over arrivals
	std::size_t served = 0;
	std::size_t outage = 0;
};

namespace detail {

inline TrialOutcome random_access_trial(Strategy st, const Scenario& s, std::span<const double> gains,
					const CdmaDesign& cdma, const FdmaRaDesign& fdma)
{
	TrialOutcome t;
	const double cdma_headroom = cdma.code_len / cdma.target_sinr - static_cast<double>(cdma.n_bar - 1);
	for (double g : gains) {
		double p = 0.0;
		if (st == Strategy::cdma_ra)
			p = cdma_headroom > 0.0 ? cdma_transmit_power(g, cdma, s).required : s.p_max * 2.0;
		else
			p = fdma_ra_transmit_power(g, fdma.num_channels, s);
		if (p > s.p_max) {
			p = s.p_max;
			++t.outage;
		} else {
			++t.served;
		}
		t.power += p;
		t.energy += p * s.tau_slot;
	}
	return t;
}

inline TrialOutcome coordinated_trial(Strategy st, const Scenario& s, std::span<const double> gains,
				      const SweepOptions& o)
{
	TrialOutcome t;
	if (gains.empty())
		return t;
	const bool tdma = st == Strategy::tdma_opt || st == Strategy::tdma_equal;
	const bool equal = st == Strategy::tdma_equal || st == Strategy::fdma_equal;
	const Resource kind = tdma ? Resource::tdma_time : Resource::fdma_band;

	DropResult dr = drop_devices(gains, o.delta1, s, kind);
	std::vector<double> kept = dr.kept_gains(gains);
	std::sort(kept.begin(), kept.end());

	std::size_t n_drop = dr.dropped.size();
	if (!kept.empty()) {
		const std::vector<double> floors = tdma ? tdma_floors(kept, s) : fdma_floors(kept, s);
		const std::size_t extra = trim_to_fit(floors, tdma ? s.tau_slot : s.w_total, equal);
		kept.erase(kept.begin(), kept.begin() + static_cast<std::ptrdiff_t>(extra));
		n_drop += extra;
	}

	t.outage = n_drop;
	t.power = static_cast<double>(n_drop) * s.p_max;
	t.energy = t.power * s.tau_slot;
	if (kept.empty())
		return t;

	const AllocationMode mode = equal ? AllocationMode::equal : AllocationMode::optimal;
	const Allocation a = tdma ? tdma_schedule(kept, s, o.tdma_objective, mode) : fdma_schedule(kept, s, mode);
	const ScheduleResult r = allocation_cost(a, kept, s);
	t.power += r.total_power;
	t.energy += r.total_energy;
	t.served = kept.size();
	return t;
}

/// SIC serves everyone; powers above p_max are reported uncapped and counted as outage.
inline TrialOutcome sic_trial(const Scenario& s, std::vector<double> gains)
{
	TrialOutcome t;
	if (gains.empty())
		return t;
	std::sort(gains.begin(), gains.end());
	const ScheduleResult r = sic_sum_power(gains, s);
	t.power = r.total_power;
	t.energy = r.total_energy;
	t.outage = r.over_cap.size();
	t.served = gains.size() - t.outage;
	return t;
}

} // namespace detail

/// Runs one strategy on one slot's gains.
inline TrialOutcome run_trial(Strategy st, const Scenario& s, std::span<const double> gains, const SweepOptions& o,
			      const CdmaDesign& cdma, const FdmaRaDesign& fdma)
{
	switch (st) {
	case Strategy::cdma_ra:
	case Strategy::fdma_ra:
		return detail::random_access_trial(st, s, gains, cdma, fdma);
	case Strategy::sic:
		return detail::sic_trial(s, std::vector<double>(gains.begin(), gains.end()));
	default:
		return detail::coordinated_trial(st, s, gains, o);
	}
}

/// Seed of the slot drawn for trial `trial` at the `lambda_index`-th load.
inline std::uint64_t trial_seed(std::uint64_t seed, std::size_t lambda_index, std::size_t trial) noexcept
{
	return derive_seed(seed, {static_cast<std::uint64_t>(lambda_index), static_cast<std::uint64_t>(trial)});
}

/// Arrivals of one slot and their gains.
inline std::vector<double> draw_slot(const Scenario& s, const PoissonTable& arrivals, std::uint64_t slot_seed)
{
	Rng rng(slot_seed);
	const std::int64_t n = arrivals.inverse_cdf(uniform01(rng));
	std::vector<double> g;
	g.reserve(static_cast<std::size_t>(n));
	for (std::int64_t i = 0; i < n; ++i)
		g.push_back(sample_device(s, rng).gain);
	return g;
}

/**
 * Sweeps the arrival rate. Random-access designs are sized once per lambda
 * from (p_f, eps, delta); results are ordered by lambda, then by the order
 * of `strategies`.
 */
inline std::vector<SweepResult> run_sweep(const Scenario& scenario, std::span<const double> lambdas,
					  std::span<const Strategy> strategies, std::size_t trials, std::uint64_t seed,
					  const SweepOptions& o = {})
{
	scenario.validate();
	if (trials == 0)
		throw InvalidArgument("run_sweep needs at least one trial");
	const double pc = collision_budget(o.p_f, o.eps, o.delta);

	std::vector<SweepResult> out;
	for (std::size_t li = 0; li < lambdas.size(); ++li) {
		Scenario s = scenario;
		s.lambda_rate = lambdas[li];
		s.validate();
		const PoissonTable arrivals(s.mean_arrivals());
		const CdmaDesign cdma = design_cdma(s, s.lambda_rate, o.eps, pc, o.delta);
		const FdmaRaDesign fdma = design_fdma_ra(s, s.lambda_rate, o.eps, pc, o.delta);

		std::vector<std::vector<double>> power(strategies.size()), eb(strategies.size());
		std::vector<std::size_t> outaged(strategies.size(), 0), arrived(strategies.size(), 0);
		for (std::size_t t = 0; t < trials; ++t) {
			const std::vector<double> gains = draw_slot(s, arrivals, trial_seed(seed, li, t));
			for (std::size_t k = 0; k < strategies.size(); ++k) {
				const TrialOutcome r = run_trial(strategies[k], s, gains, o, cdma, fdma);
				power[k].push_back(r.power);
				if (r.served > 0)
					eb[k].push_back(r.energy / (static_cast<double>(r.served) * s.payload_bits));
				outaged[k] += r.outage;
				arrived[k] += gains.size();
			}
		}

		for (std::size_t k = 0; k < strategies.size(); ++k) {
			SweepResult r;
			r.strategy = strategies[k];
			r.lambda = s.lambda_rate;
			r.trials = trials;
			r.seed = seed;
			double sum = 0.0;
			for (double p : power[k])
				sum += p;
			r.mean_power_w = sum / static_cast<double>(trials);
			r.p95_power_w = percentile(power[k], 0.95);
			if (!eb[k].empty()) {
				double esum = 0.0;
				for (double e : eb[k])
					esum += e;
				r.mean_eb_j = esum / static_cast<double>(eb[k].size());
				r.p95_eb_j = percentile(eb[k], 0.95);
			}
			r.outage_frac = arrived[k] == 0 ? 0.0 : static_cast<double>(outaged[k]) / static_cast<double>(arrived[k]);
			out.push_back(r);
		}
	}
	return out;
}

} // namespace m2m

#endif // M2M_MONTECARLO_HPP

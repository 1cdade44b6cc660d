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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "m2m/coordinated.hpp"
#include "test_util.hpp"

using namespace m2m;
using m2m::test::rel_err;
using m2m::test::unit_scenario;

namespace {

// generated once from this library and frozen; the test also checks it against a direct sum
constexpr double GOLDEN_FDMA_EQUAL_K1000 = 0.82382449635763833;

std::vector<double> random_gains(Rng& rng, std::size_t k, double decades = 3.0)
{
	std::vector<double> g;
	for (std::size_t i = 0; i < k; ++i)
		g.push_back(std::pow(10.0, decades * uniform01(rng)));
	return g;
}

/// Sum power when devices are decoded in `order` (first entry decoded first),
/// each seeing every later-decoded device as noise.
double decode_order_power(const std::vector<double>& g, const std::vector<std::size_t>& order, const Scenario& s)
{
	const double step = std::pow(2.0, s.spectral_load()) - 1.0;
	double later_rx = 0.0; // received SNR of devices decoded after the current one
	double total = 0.0;
	for (std::size_t j = order.size(); j-- > 0;) {
		const double rx = step * (1.0 + later_rx);
		total += rx / (s.mu_ref * g[order[j]]);
		later_rx += rx;
	}
	return total * s.p_max;
}

double total_power(const Allocation& a, const std::vector<double>& g, const Scenario& s)
{
	return allocation_cost(a, g, s).total_power;
}

} // namespace

TEST(Sic, SingleUserInversion)
{
	EXPECT_NEAR(sic_sum_power(std::vector<double>{1.0}, unit_scenario(1.0)).total_power, 1.0, 1e-15);
}

TEST(Sic, TwoEqualUsers)
{
	EXPECT_NEAR(sic_sum_power(std::vector<double>{1.0, 1.0}, unit_scenario(1.0)).total_power, 3.0, 1e-14);
}

TEST(Sic, WeakestLastIsOptimalOrder)
{
	Rng rng(21);
	const Scenario s = unit_scenario(0.3);
	for (int inst = 0; inst < 200; ++inst) {
		auto g = random_gains(rng, 2 + inst % 3);
		std::sort(g.begin(), g.end());
		const double sic = sic_sum_power(g, s).total_power;
		std::vector<std::size_t> order(g.size());
		std::iota(order.begin(), order.end(), std::size_t{0});
		std::reverse(order.begin(), order.end()); // strongest decoded first
		EXPECT_LT(rel_err(decode_order_power(g, order, s), sic), 1e-12);
		std::sort(order.begin(), order.end());
		do {
			EXPECT_LE(sic, decode_order_power(g, order, s) * (1 + 1e-12));
		} while (std::next_permutation(order.begin(), order.end()));
	}
}

TEST(Sic, RejectsUnsortedAndFlagsCap)
{
	const Scenario s;
	EXPECT_THROW(sic_sum_power(std::vector<double>{2.0, 1.0}, s), InvalidArgument);
	const auto r = sic_sum_power(std::vector<double>{1e-4, 1.0}, s);
	ASSERT_EQ(r.over_cap.size(), 1u);
	EXPECT_EQ(r.over_cap[0], 0u);
	EXPECT_GT(r.per_device_power[0], s.p_max);
}

TEST(Tdma, SingleDeviceTakesWholeSlot)
{
	const Scenario s;
	for (auto mode : {AllocationMode::optimal, AllocationMode::equal, AllocationMode::closed_form})
		for (auto obj : {Objective::power, Objective::energy})
			EXPECT_DOUBLE_EQ(tdma_schedule(std::vector<double>{2.0}, s, obj, mode).shares[0], s.tau_slot);
}

TEST(Tdma, SymmetricEqualsOptimal)
{
	const Scenario s;
	const std::vector<double> g{1.0, 1.0};
	for (auto obj : {Objective::power, Objective::energy}) {
		const auto a = tdma_schedule(g, s, obj, AllocationMode::optimal);
		const auto b = tdma_schedule(g, s, obj, AllocationMode::equal);
		EXPECT_NEAR(a.shares[0], b.shares[0], 1e-12);
		EXPECT_NEAR(a.shares[1], b.shares[1], 1e-12);
	}
}

TEST(Tdma, ClosedFormTimeExample)
{
	Scenario s;
	s.r_inner = 1e-9;
	s.lambda_rate = 1000;
	EXPECT_LT(rel_err(closed_form_time(1000.0, s, 3), 1.5e-3), 1e-12);
}

TEST(Tdma, ClosedFormTimeIntegratesToSlot)
{
	// lambda E[tau(r)] = 1 over the area-uniform annulus
	Scenario s;
	s.lambda_rate = 700;
	for (int n : {2, 3}) {
		const int m = 200000;
		double acc = 0.0;
		const double ri2 = s.r_inner * s.r_inner, span = s.r_outer * s.r_outer - ri2;
		for (int i = 0; i < m; ++i) {
			const double u = (i + 0.5) / m;
			acc += closed_form_time(std::sqrt(ri2 + u * span), s, n);
		}
		EXPECT_NEAR(s.lambda_rate * acc / m, s.tau_slot, 1e-6);
	}
}

TEST(Tdma, ClosedFormSharesExhaustBudget)
{
	Rng rng(4);
	Scenario s;
	s.lambda_rate = 500;
	const auto g = gains_of(sample_devices(s, 500, 31));
	const auto a = tdma_schedule(g, s, Objective::energy, AllocationMode::closed_form);
	EXPECT_NEAR(std::accumulate(a.shares.begin(), a.shares.end(), 0.0), s.tau_slot, 1e-12);
	for (std::size_t i = 0; i < g.size(); ++i)
		EXPECT_GE(a.shares[i], a.floors[i]);
}

TEST(Tdma, EqualBelowFloorRaises)
{
	Scenario s;
	std::vector<double> g(400, 1.0); // tau_min 1.7 ms each, equal share 2.5 ms
	EXPECT_NO_THROW(tdma_schedule(g, s, Objective::power, AllocationMode::equal));
	g.back() = 0.05; // tau_min about 29 ms
	EXPECT_THROW(tdma_schedule(g, s, Objective::power, AllocationMode::equal), FloorViolation);
	EXPECT_NO_THROW(tdma_schedule(g, s, Objective::power, AllocationMode::optimal));
}

TEST(Fdma, SingleDeviceTakesWholeBand)
{
	const Scenario s;
	EXPECT_DOUBLE_EQ(fdma_schedule(std::vector<double>{2.0}, s, AllocationMode::optimal).shares[0], s.w_total);
	EXPECT_DOUBLE_EQ(fdma_schedule(std::vector<double>{2.0}, s, AllocationMode::equal).shares[0], s.w_total);
}

TEST(Fdma, TwoEqualUsersExample)
{
	const Scenario s = unit_scenario(1e-3);
	const std::vector<double> g{1.0, 1.0};
	const auto a = fdma_schedule(g, s, AllocationMode::optimal);
	EXPECT_NEAR(a.shares[0], s.w_total / 2, 1e-6);
	// mpmath: 2^0.002 - 1
	EXPECT_LT(rel_err(total_power(fdma_schedule(g, s, AllocationMode::equal), g, s), 1.38725571133453e-3), 1e-12);
}

TEST(Fdma, ClosedFormNotOffered)
{
	EXPECT_THROW(fdma_schedule(std::vector<double>{1.0}, Scenario{}, AllocationMode::closed_form), InvalidArgument);
}

TEST(Fdma, UnservableDeviceRaises)
{
	EXPECT_THROW(fdma_schedule(std::vector<double>{1e-9}, Scenario{}, AllocationMode::optimal), Infeasible);
}

TEST(Dominance, OptimalBeatsEqualAndClosedForm)
{
	Rng rng(99);
	const Scenario s;
	for (int inst = 0; inst < 300; ++inst) {
		const std::size_t k = 2 + static_cast<std::size_t>(uniform01(rng) * 49);
		auto g = random_gains(rng, k, 2.5);
		const double fo = total_power(fdma_schedule(g, s, AllocationMode::optimal), g, s);
		const double fe = total_power(fdma_schedule(g, s, AllocationMode::equal), g, s);
		EXPECT_LE(fo, fe * (1 + 1e-9)) << inst;
		std::sort(g.begin(), g.end());
		EXPECT_LE(sic_sum_power(g, s).total_power, fo * (1 + 1e-9)) << inst;

		Scenario t = s;
		t.lambda_rate = static_cast<double>(k);
		for (auto obj : {Objective::power, Objective::energy}) {
			const auto cost = [&](AllocationMode m) {
				const auto r = allocation_cost(tdma_schedule(g, t, obj, m), g, t);
				return obj == Objective::power ? r.total_power : r.total_energy;
			};
			const double o = cost(AllocationMode::optimal);
			EXPECT_LE(o, cost(AllocationMode::equal) * (1 + 1e-9));
			EXPECT_LE(o, cost(AllocationMode::closed_form) * (1 + 1e-9));
		}
	}
}

TEST(AllocationCost, TauMinGivesPeakPower)
{
	const Scenario s;
	const std::vector<double> g{0.5, 3.0};
	Allocation a{Resource::tdma_time, tdma_floors(g, s), tdma_floors(g, s), s.tau_slot};
	const auto r = allocation_cost(a, g, s);
	for (double p : r.per_device_power)
		EXPECT_LT(rel_err(p, s.p_max), 1e-12);
	EXPECT_TRUE(r.over_cap.empty());
	Allocation b{Resource::fdma_band, fdma_floors(g, s), fdma_floors(g, s), s.w_total};
	for (double p : allocation_cost(b, g, s).per_device_power)
		EXPECT_LT(rel_err(p, s.p_max), 1e-9);
}

TEST(AllocationCost, FdmaEnergyPowerIdentity)
{
	Rng rng(5);
	const Scenario s;
	const auto g = random_gains(rng, 40);
	const auto r = allocation_cost(fdma_schedule(g, s, AllocationMode::optimal), g, s);
	EXPECT_LT(rel_err(r.sum_energy_per_bit, s.tau_slot / s.payload_bits * r.total_power), 1e-12);
	EXPECT_LT(rel_err(r.energy_per_bit * 40, r.sum_energy_per_bit), 1e-12);
	EXPECT_LT(rel_err(r.total_power, std::accumulate(r.per_device_power.begin(), r.per_device_power.end(), 0.0)), 1e-12);
}

TEST(AllocationCost, FdmaEqualGoldenFixture)
{
	// K = 1000 area-uniform devices, L / (W tau_s) = 1e-3, seed 2024
	const Scenario s;
	const auto g = gains_of(sample_devices(s, 1000, 2024));
	const auto r = allocation_cost(fdma_schedule(g, s, AllocationMode::equal), g, s);
	// direct sum: (1/K)(2^(K L / (W tau)) - 1) / (mu g_i)
	double direct = 0.0;
	for (double gi : g)
		direct += (std::pow(2.0, 1000.0 * 1e-3) - 1.0) / (1000.0 * s.mu_ref * gi);
	EXPECT_LT(rel_err(r.total_power, direct), 1e-12);
	EXPECT_LT(rel_err(r.total_power, GOLDEN_FDMA_EQUAL_K1000), 1e-9);
}

TEST(Bounds, EqualGainsGiveOne)
{
	const Scenario s;
	const std::vector<double> g(50, 3.0);
	EXPECT_NEAR(tdma_power_ratio_bound(g, s), 1.0, 1e-12);
	EXPECT_NEAR(energy_ratio_bound(g, s), 1.0, 1e-12);
}

TEST(Bounds, LargeKNearAnalyticValues)
{
	Scenario s;
	s.r_inner = 1.0;
	const auto g = gains_of(sample_devices(s, 1000, 6));
	// mpmath with E[(r/r0)^1.5] = 4/7 and E[(r/r0)^3] = 2/5
	EXPECT_NEAR(tdma_power_ratio_bound(g, s), 2.0576373475, 0.1);
	EXPECT_NEAR(energy_ratio_bound(g, s), 1.2519251841, 0.03);
}

TEST(Bounds, EnergyBoundVanishesWithLoad)
{
	Rng rng(2);
	const Scenario s = unit_scenario(1e-6);
	EXPECT_LE(std::abs(energy_ratio_bound(random_gains(rng, 1000), s) - 1.0), 1e-3);
}

TEST(Bounds, DominateRealizedRatios)
{
	Rng rng(31);
	for (int inst = 0; inst < 100; ++inst) {
		Scenario s;
		s.payload_bits = 1000.0 + 30000.0 * uniform01(rng);
		const auto g = random_gains(rng, 2 + inst % 9, 1.5);
		const auto cost = [&](Objective obj, AllocationMode m) {
			const auto r = allocation_cost(tdma_schedule(g, s, obj, m), g, s);
			return obj == Objective::power ? r.total_power : r.total_energy;
		};
		const double up = cost(Objective::power, AllocationMode::equal) / cost(Objective::power, AllocationMode::optimal);
		const double ue = cost(Objective::energy, AllocationMode::equal) / cost(Objective::energy, AllocationMode::optimal);
		EXPECT_LE(up, tdma_power_ratio_bound(g, s) * (1 + 1e-9)) << inst;
		EXPECT_LE(ue, energy_ratio_bound(g, s) * (1 + 1e-9)) << inst;
		const double uf = total_power(fdma_schedule(g, s, AllocationMode::equal), g, s) /
				  total_power(fdma_schedule(g, s, AllocationMode::optimal), g, s);
		EXPECT_LE(uf, energy_ratio_bound(g, s) * (1 + 1e-9)) << inst;
	}
}

TEST(FdmaVsSic, SingleDevice)
{
	EXPECT_NEAR(fdma_vs_sic_ratio(std::vector<double>{4.0}, Scenario{}), 1.0, 1e-15);
}

TEST(FdmaVsSic, MatchesScheduledRatio)
{
	Rng rng(10);
	const Scenario s;
	auto g = random_gains(rng, 60);
	std::sort(g.begin(), g.end());
	const double direct = total_power(fdma_schedule(g, s, AllocationMode::equal), g, s) / sic_sum_power(g, s).total_power;
	EXPECT_LT(rel_err(fdma_vs_sic_ratio(g, s), direct), 1e-12);
}

TEST(FdmaVsSic, CollapsesMonotonically)
{
	Rng rng(14);
	auto g = random_gains(rng, 100);
	std::sort(g.begin(), g.end());
	double prev = 1e300;
	for (double x : {1e-3, 1e-4, 1e-5, 1e-6}) {
		const double r = fdma_vs_sic_ratio(g, unit_scenario(x));
		EXPECT_LT(r, prev);
		EXPECT_GE(r, 1.0);
		prev = r;
	}
	EXPECT_LE(prev - 1.0, 1e-3);
}

TEST(Drop, Examples)
{
	const std::vector<double> g{5, 1, 9, 3, 7, 2, 8, 4, 6, 10};
	const auto none = drop_devices(g, 0.0);
	EXPECT_EQ(none.kept.size(), 10u);
	EXPECT_TRUE(none.dropped.empty());
	const auto r = drop_devices(g, 0.25);
	ASSERT_EQ(r.dropped.size(), 2u);
	EXPECT_EQ(g[r.dropped[0]], 1.0);
	EXPECT_EQ(g[r.dropped[1]], 2.0);
	double kept_min = 1e300, dropped_max = 0.0;
	for (auto i : r.kept)
		kept_min = std::min(kept_min, g[i]);
	for (auto i : r.dropped)
		dropped_max = std::max(dropped_max, g[i]);
	EXPECT_GE(kept_min, dropped_max);
	EXPECT_EQ(drop_devices(g, 0.3).dropped.size(), 3u);
	EXPECT_THROW(drop_devices(g, 1.0), InvalidArgument);
}

TEST(Drop, UnservableDevicesGo)
{
	const Scenario s;
	const std::vector<double> g{1.0, 1e-9, 2.0};
	const auto r = drop_devices(g, 0.0, s, Resource::fdma_band);
	EXPECT_EQ(r.kept, (std::vector<std::size_t>{0, 2}));
	EXPECT_EQ(r.dropped, (std::vector<std::size_t>{1}));
}

TEST(Drop, TrimToFit)
{
	const std::vector<double> f{0.5, 0.3, 0.2, 0.2};
	EXPECT_EQ(trim_to_fit(f, 1.0, false), 1u);
	EXPECT_EQ(trim_to_fit(f, 1.0, true), 1u);
	EXPECT_EQ(trim_to_fit(f, 0.1, false), 4u);
	const std::vector<double> g{0.1, 0.1, 0.4};
	EXPECT_EQ(trim_to_fit(g, 1.0, false), 0u);
	EXPECT_EQ(trim_to_fit(g, 1.0, true), 1u);
}

TEST(Outage, Examples)
{
	EXPECT_DOUBLE_EQ(outage_bound(LoadPolicy{0.02, 0.0, 0.05}), 0.02);
	EXPECT_DOUBLE_EQ(outage_bound(LoadPolicy{0.0, 0.01, 0.05}), 0.01);
	EXPECT_NEAR(outage_bound(LoadPolicy::make(0.02, 0.01, 0.03)), 0.0298, 1e-15);
	EXPECT_THROW(LoadPolicy::make(0.02, 0.01, 0.029), InvalidArgument);
}

TEST(ProportionalShares, ExactBudgetWithFloors)
{
	Rng rng(40);
	for (int inst = 0; inst < 200; ++inst) {
		const std::size_t k = 1 + inst % 30;
		std::vector<double> w, f;
		for (std::size_t i = 0; i < k; ++i) {
			w.push_back(0.1 + uniform01(rng));
			f.push_back(uniform01(rng) / k);
		}
		const auto x = proportional_with_floors(w, f, 1.0);
		EXPECT_NEAR(std::accumulate(x.begin(), x.end(), 0.0), 1.0, 1e-12);
		// shares above their floor keep a common ratio to the weight
		double c = -1.0;
		for (std::size_t i = 0; i < k; ++i) {
			ASSERT_GE(x[i], f[i]);
			if (x[i] > f[i]) {
				if (c < 0)
					c = x[i] / w[i];
				EXPECT_LT(rel_err(x[i] / w[i], c), 1e-12);
			}
		}
	}
}

TEST(CoordinatedLoad, FrequencyBeatsTime)
{
	Scenario s;
	s.payload_bits = 20000; // keeps streams short
	const LoadPolicy p = LoadPolicy::make(0.0, 0.01, 0.01);
	const auto t = coordinated_max_load(Resource::tdma_time, s, p, 100, 3);
	const auto f = coordinated_max_load(Resource::fdma_band, s, p, 100, 3);
	EXPECT_GT(t.lambda_max, 0.0);
	EXPECT_GT(f.lambda_max, t.lambda_max);
	EXPECT_LT(t.lambda_max, t.lambda_slln);
	EXPECT_LT(f.lambda_max, f.lambda_slln);
}

TEST(CoordinatedLoad, DroppingRaisesLoad)
{
	Scenario s;
	s.payload_bits = 20000;
	const auto a = coordinated_max_load(Resource::tdma_time, s, LoadPolicy::make(0.0, 0.01, 0.01), 100, 9);
	const auto b = coordinated_max_load(Resource::tdma_time, s, LoadPolicy::make(0.05, 0.01, 0.06), 100, 9);
	EXPECT_GT(b.lambda_max, a.lambda_max);
}

TEST(CoordinatedLoad, Deterministic)
{
	Scenario s;
	s.payload_bits = 20000;
	const LoadPolicy p{};
	EXPECT_EQ(coordinated_max_load(Resource::tdma_time, s, p, 50, 1).lambda_max,
		  coordinated_max_load(Resource::tdma_time, s, p, 50, 1).lambda_max);
}

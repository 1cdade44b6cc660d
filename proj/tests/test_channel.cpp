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
#include <numbers>
#include <set>

#include <gtest/gtest.h>

#include "m2m/channel.hpp"
#include "m2m/poisson.hpp"
#include "m2m/random.hpp"
#include "test_util.hpp"

using namespace m2m;
using m2m::test::rel_err;

namespace {

double rate_at(double w, double gain, const Scenario& s)
{
	return w * std::log2(1.0 + s.mu_ref * s.w_total * gain / w);
}

} // namespace

TEST(Random, DerivedSeedsDifferAcrossCounters)
{
	std::set<std::uint64_t> seen;
	for (std::uint64_t a = 0; a < 50; ++a)
		for (std::uint64_t b = 0; b < 50; ++b)
			seen.insert(derive_seed(42, {a, b}));
	EXPECT_EQ(seen.size(), 2500u);
	EXPECT_EQ(derive_seed(42, {3, 4}), derive_seed(42, {3, 4}));
	EXPECT_NE(derive_seed(42, {3, 4}), derive_seed(43, {3, 4}));
}

TEST(Random, Uniform01IsHalfOpen)
{
	Rng rng(5);
	for (int i = 0; i < 100000; ++i) {
		const double u = uniform01(rng);
		ASSERT_GE(u, 0.0);
		ASSERT_LT(u, 1.0);
	}
}

TEST(Scenario, DefaultsValidate)
{
	EXPECT_NO_THROW(Scenario{}.validate());
	EXPECT_NEAR(linear_to_db(Scenario{}.mu_ref), -3.0, 1e-12);
}

TEST(Scenario, ValidationNamesKey)
{
	Scenario s;
	s.r_inner = 2000.0;
	try {
		s.validate();
		FAIL() << "expected ConfigError";
	} catch (const ConfigError& e) {
		EXPECT_EQ(e.key(), "r_inner");
	}
	s = Scenario{};
	s.gamma = 1.5;
	EXPECT_THROW(s.validate(), ConfigError);
	s = Scenario{};
	s.w_total = 0.0;
	EXPECT_THROW(s.validate(), ConfigError);
	s = Scenario{};
	s.fading = Fading::custom;
	EXPECT_THROW(s.validate(), ConfigError);
}

TEST(Decibels, RoundTrip)
{
	for (double db : {-30.0, -3.0, 0.0, 7.5, 40.0})
		EXPECT_NEAR(linear_to_db(db_to_linear(db)), db, 1e-12 * std::max(1.0, std::abs(db)));
	EXPECT_DOUBLE_EQ(watts_to_dbm(1.0), 30.0);
}

TEST(SampleDevices, EmptyForZeroCount)
{
	EXPECT_TRUE(sample_devices(Scenario{}, 0, 1).empty());
}

TEST(SampleDevices, DistanceSquaredMoment)
{
	const Scenario s;
	const auto devs = sample_devices(s, 100000, 11);
	double sum = 0.0;
	for (const auto& d : devs) {
		ASSERT_GE(d.distance, s.r_inner);
		ASSERT_LE(d.distance, s.r_outer);
		sum += d.distance * d.distance;
	}
	const double want = (s.r_inner * s.r_inner + s.r_outer * s.r_outer) / 2.0;
	EXPECT_LT(rel_err(sum / 1e5, want), 0.01);
}

TEST(SampleDevices, AreaUniformKolmogorovSmirnov)
{
	const Scenario s;
	const std::size_t n = 20000;
	auto devs = sample_devices(s, n, 99);
	std::vector<double> d;
	for (const auto& x : devs)
		d.push_back(x.distance);
	std::sort(d.begin(), d.end());
	const double ri2 = s.r_inner * s.r_inner, span = s.r_outer * s.r_outer - ri2;
	double ks = 0.0;
	for (std::size_t i = 0; i < n; ++i) {
		const double f = (d[i] * d[i] - ri2) / span;
		ks = std::max({ks, std::abs(f - static_cast<double>(i) / n), std::abs(f - static_cast<double>(i + 1) / n)});
	}
	// 1% critical value
	EXPECT_LT(ks, 1.628 / std::sqrt(static_cast<double>(n)));
}

TEST(SampleDevices, CellEdgeGainIsOne)
{
	const Scenario s;
	EXPECT_DOUBLE_EQ(make_device(s, s.r_outer).gain, 1.0);
	EXPECT_DOUBLE_EQ(path_gain(s, 500.0), 8.0);
}

TEST(SampleDevices, Deterministic)
{
	const auto a = gains_of(sample_devices(Scenario{}, 1000, 3));
	const auto b = gains_of(sample_devices(Scenario{}, 1000, 3));
	EXPECT_EQ(a, b);
	EXPECT_NE(a, gains_of(sample_devices(Scenario{}, 1000, 4)));
}

TEST(SampleDevices, FadingHookMultipliesGain)
{
	Scenario s;
	s.fading = Fading::custom;
	s.fading_hook = [](double, Rng& rng) { return FadingDraw{0.5, 1.0 + uniform01(rng)}; };
	const auto a = sample_devices(s, 500, 8);
	for (const auto& d : a) {
		EXPECT_DOUBLE_EQ(d.shadow_gain, 0.5);
		EXPECT_GE(d.fade_gain, 1.0);
		EXPECT_DOUBLE_EQ(d.gain, 0.5 * d.fade_gain * path_gain(s, d.distance));
	}
	const auto b = sample_devices(s, 500, 8);
	EXPECT_EQ(gains_of(a), gains_of(b));
}

TEST(ReceivedSnr, Examples)
{
	Scenario s;
	EXPECT_DOUBLE_EQ(received_snr(s.p_max, 1.0, s, s.w_total), s.mu_ref);
	EXPECT_DOUBLE_EQ(received_snr(s.p_max, 1.0, s, s.w_total / 2), 2.0 * s.mu_ref);
	s.mu_ref = 0.5;
	EXPECT_NEAR(received_snr(0.5 * s.p_max, 0.1, s, s.w_total), 0.025, 1e-15);
	EXPECT_THROW(received_snr(1.0, 1.0, s, 0.0), InvalidArgument);
	EXPECT_THROW(received_snr(1.0, 1.0, s, 2.0 * s.w_total), InvalidArgument);
}

TEST(TauMin, UnitSnrGivesPayloadOverBandwidth)
{
	Scenario s;
	s.mu_ref = 1.0;
	EXPECT_NEAR(tau_min(1.0, s), 1e-3, 1e-15);
}

TEST(TauMin, MinusThreeDb)
{
	// mpmath: 1000 ln2 / (1e6 ln(1 + 10^-0.3))
	EXPECT_LT(rel_err(tau_min(1.0, Scenario{}), 1.70618205215734e-3), 1e-12);
}

TEST(TauMin, DecreasesToZero)
{
	const Scenario s;
	double prev = tau_min(1e-3, s);
	for (double g = 1e-2; g < 1e12; g *= 10) {
		const double t = tau_min(g, s);
		EXPECT_LT(t, prev);
		prev = t;
	}
	EXPECT_LT(prev, 1e-4);
}

TEST(WMin, ExactWhenBandEqualsReceivedPower)
{
	Scenario s;
	s.mu_ref = 1.0;
	const auto w = w_min(1e-3, s); // mu W g = 1000 = L / tau
	ASSERT_TRUE(w);
	EXPECT_LT(rel_err(*w, 1000.0), 1e-10);
}

TEST(WMin, InfeasibleBelowRateCeiling)
{
	Scenario s;
	s.mu_ref = 1.0;
	const double g = 0.9 * s.required_rate() * std::numbers::ln2 / (s.mu_ref * s.w_total);
	EXPECT_FALSE(w_min(g, s).has_value());
}

TEST(WMin, MinusThreeDbMatchesOracle)
{
	const Scenario s;
	const auto w = w_min(1.0, s);
	ASSERT_TRUE(w);
	EXPECT_LT(rel_err(*w, 79.1891881875077), 1e-10);
	const double f = rate_at(*w, 1.0, s) - s.required_rate();
	EXPECT_GE(f, 0.0);
	EXPECT_LE(f, 1e-6 * s.required_rate());
}

TEST(WMin, RateIdentityAcrossGains)
{
	const Scenario s;
	for (double g = 2e-3; g < 1e9; g *= 3.7) {
		const auto w = w_min(g, s);
		if (!w)
			continue;
		EXPECT_NEAR(rate_at(*w, g, s) / s.required_rate(), 1.0, 1e-9) << g;
	}
}

TEST(WMin, LargeBandNeededNearCeiling)
{
	const Scenario s;
	const double g = 1.0001 * s.required_rate() * std::numbers::ln2 / (s.mu_ref * s.w_total);
	const auto w = w_min(g, s);
	ASSERT_TRUE(w);
	EXPECT_GT(*w, s.w_total);
	EXPECT_NEAR(rate_at(*w, g, s) / s.required_rate(), 1.0, 1e-9);
}

TEST(Poisson, Examples)
{
	EXPECT_EQ(poisson_quantile(10, 0.01), 18);
	EXPECT_EQ(poisson_quantile(10, 0.99999), 0);
	EXPECT_EQ(poisson_quantile(1000, 0.01), 1074);
	const PoissonTable t(1000);
	EXPECT_LE(t.tail(1074), 0.01);
	EXPECT_GT(t.tail(1073), 0.01);
}

TEST(Poisson, PmfSumsToOneAndTailMonotone)
{
	for (double mean : {0.3, 7.0, 160.0, 14700.0, 1e6}) {
		const PoissonTable t(mean);
		double sum = 0.0, mean_est = 0.0;
		const auto lo = static_cast<std::int64_t>(std::max(0.0, mean - 60 * std::sqrt(mean) - 60));
		const auto hi = static_cast<std::int64_t>(mean + 60 * std::sqrt(mean) + 60);
		double prev = 1.0;
		for (std::int64_t n = lo; n <= hi; ++n) {
			sum += t.pmf(n);
			mean_est += n * t.pmf(n);
			ASSERT_LE(t.tail(n), prev);
			prev = t.tail(n);
		}
		EXPECT_NEAR(sum, 1.0, 1e-12) << mean;
		EXPECT_LT(rel_err(mean_est, mean), 1e-10) << mean;
	}
}

TEST(Poisson, SmallMeanMatchesClosedForm)
{
	const PoissonTable t(2.5);
	for (int n = 0; n < 10; ++n)
		EXPECT_LT(rel_err(t.pmf(n), std::exp(-2.5 + n * std::log(2.5) - std::lgamma(n + 1.0))), 1e-13);
}

TEST(Poisson, LargeMeanNormalApproximation)
{
	const double m = 1e6;
	const auto q = poisson_quantile(m, 0.01);
	EXPECT_NEAR(static_cast<double>(q), m + 2.3263 * std::sqrt(m), 5.0);
}

TEST(Poisson, InverseCdfIsMonotoneInU)
{
	const PoissonTable t(50);
	std::int64_t prev = 0;
	for (double u = 0.0; u < 1.0; u += 0.001) {
		const auto n = t.inverse_cdf(u);
		ASSERT_GE(n, prev);
		ASSERT_GE(t.cdf(n), u);
		if (n > 0) {
			ASSERT_LT(t.cdf(n - 1), u);
		}
		prev = n;
	}
}

TEST(Poisson, RejectsBadArguments)
{
	EXPECT_THROW(PoissonTable(0.0), InvalidArgument);
	EXPECT_THROW(poisson_quantile(10, 0.0), InvalidArgument);
	EXPECT_THROW(poisson_quantile(10, 1.0), InvalidArgument);
}

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

#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "m2m/m2m.hpp"

namespace m2mpower {

namespace {

using namespace m2m;

struct Common {
	std::string config_path;
	std::string output_path;
	std::optional<std::uint64_t> seed;
	std::vector<std::string> sets;
	bool quiet = false;
};

std::uint64_t parse_seed(std::string_view key, std::string_view text)
{
	std::uint64_t v = 0;
	const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
	if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
		throw ConfigError(std::string(key), "not an unsigned integer: '" + std::string(text) + "'");
	return v;
}

std::vector<std::string> split(std::string_view text, char sep)
{
	std::vector<std::string> parts;
	for (;;) {
		const auto p = text.find(sep);
		parts.emplace_back(text.substr(0, p));
		if (p == std::string_view::npos)
			break;
		text.remove_prefix(p + 1);
	}
	return parts;
}

double parse_real(std::string_view key, std::string_view text)
{
	double v = 0.0;
	const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
	if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty() || !std::isfinite(v))
		throw ConfigError(std::string(key), "not a finite number: '" + std::string(text) + "'");
	return v;
}

class Sink {
public:
	Sink(const std::string& path, std::ostream& fallback)
	{
		if (path.empty()) {
			os_ = &fallback;
			return;
		}
		file_.open(path);
		if (!file_)
			throw ConfigError("output", "cannot open '" + path + "' for writing");
		os_ = &file_;
	}
	std::ostream& operator*() { return *os_; }

private:
	std::ofstream file_;
	std::ostream* os_ = nullptr;
};

} // namespace

std::vector<double> parse_lambda_range(std::string_view text)
{
	const auto parts = split(text, ':');
	if (parts.size() == 1)
		return {parse_real("lambdas", parts[0])};
	if (parts.size() != 3)
		throw ConfigError("lambdas", "expected a:b:step or a single value");
	const double a = parse_real("lambdas", parts[0]);
	const double b = parse_real("lambdas", parts[1]);
	const double step = parse_real("lambdas", parts[2]);
	if (!(a > 0.0) || !(step > 0.0) || b < a)
		throw ConfigError("lambdas", "need 0 < a <= b and step > 0");
	std::vector<double> out;
	for (std::size_t i = 0;; ++i) {
		const double v = a + static_cast<double>(i) * step;
		if (v > b + 1e-9 * step)
			break;
		out.push_back(v);
		if (out.size() > 100000)
			throw ConfigError("lambdas", "more than 100000 points");
	}
	return out;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
	    std::optional<std::string> env_seed)
{
	CLI::App app{"Uplink power and load analysis for machine-type devices", "m2mpower"};
	app.require_subcommand(1);
	app.fallthrough();

	Common common;
	app.add_option("--config", common.config_path, "scenario file (key = value)");
	app.add_option("--output,-o", common.output_path, "write CSV here instead of stdout");
	app.add_option("--seed", common.seed, "base seed (default: $M2M_SEED, else 1)");
	app.add_option("--set", common.sets, "override a config key, key=value (repeatable)");
	app.add_flag("--quiet,-q", common.quiet, "suppress the summary on stderr");

	// design
	auto* design = app.add_subcommand("design", "size a random-access design for one load");
	std::string design_kind;
	std::optional<double> d_lambda, d_pf, d_eps, d_delta;
	design->add_option("--kind", design_kind)->required()->check(CLI::IsMember({"cdma", "fdma"}));
	design->add_option("--lambda", d_lambda, "arrivals/s (default: lambda_rate)");
	design->add_option("--pf", d_pf, "failure target");
	design->add_option("--eps", d_eps, "arrival-count overflow probability");
	design->add_option("--delta", d_delta, "power outage probability");

	// schedule
	auto* schedule = app.add_subcommand("schedule", "schedule K random devices");
	std::string s_kind, s_objective = "power", s_mode = "optimal";
	std::size_t s_k = 0;
	schedule->add_option("--kind", s_kind)->required()->check(CLI::IsMember({"tdma", "fdma", "sic"}));
	schedule->add_option("--objective", s_objective)->check(CLI::IsMember({"power", "energy"}));
	schedule->add_option("--mode", s_mode)->check(CLI::IsMember({"optimal", "equal", "closed-form"}));
	schedule->add_option("--k", s_k, "device count")->required()->check(CLI::Range(std::size_t{1}, std::size_t{10000000}));

	// sweep
	auto* sweep = app.add_subcommand("sweep", "Monte Carlo sweep over arrival rates");
	std::string w_lambdas, w_strategies = "cdma_ra,fdma_ra,tdma_opt,tdma_equal,fdma_opt,fdma_equal,sic";
	std::size_t w_trials = 1000;
	sweep->add_option("--lambdas", w_lambdas, "a:b:step or a single value")->required();
	sweep->add_option("--strategies", w_strategies, "comma-separated strategy names");
	sweep->add_option("--trials", w_trials)->check(CLI::Range(std::size_t{1}, std::size_t{100000000}));

	// maxload
	auto* maxload = app.add_subcommand("maxload", "largest supported arrival rate");
	std::string m_kind;
	std::size_t m_draws = 100000, m_trials = 1000;
	maxload->add_option("--kind", m_kind)->required()->check(CLI::IsMember({"cdma", "fdma", "tdma", "fdma-coord"}));
	maxload->add_option("--draws", m_draws, "gain draws for random access")->check(CLI::Range(std::size_t{1}, std::size_t{100000000}));
	maxload->add_option("--trials", m_trials, "trials for coordinated access")->check(CLI::Range(std::size_t{1}, std::size_t{100000000}));

	// bounds
	auto* bounds = app.add_subcommand("bounds", "equal-vs-optimal ratio bounds for K random devices");
	std::size_t b_k = 0;
	bounds->add_option("--k", b_k)->required()->check(CLI::Range(std::size_t{1}, std::size_t{10000000}));

	try {
		std::vector<const char*> argv;
		for (const auto& a : args)
			argv.push_back(a.c_str());
		app.parse(static_cast<int>(argv.size()), argv.data());
	} catch (const CLI::CallForHelp& e) {
		return app.exit(e, out, err);
	} catch (const CLI::CallForAllHelp& e) {
		return app.exit(e, out, err);
	} catch (const CLI::ParseError& e) {
		app.exit(e, out, err);
		err << app.help();
		return exit_usage;
	}

	try {
		RunConfig cfg;
		if (!common.config_path.empty())
			cfg = load_config(common.config_path);
		for (const auto& s : common.sets)
			apply_override(cfg, s);
		cfg.validate();
		Scenario& sc = cfg.scenario;

		std::uint64_t seed = default_seed;
		if (common.seed)
			seed = *common.seed;
		else if (env_seed && !env_seed->empty())
			seed = parse_seed(seed_env, *env_seed);

		Sink sink(common.output_path, out);
		std::ostream& csv_out = *sink;
		const auto summary = [&](const std::string& line) {
			if (!common.quiet)
				err << line << '\n';
		};

		if (app.got_subcommand(design)) {
			const double lambda = d_lambda.value_or(sc.lambda_rate);
			const double pf = d_pf.value_or(cfg.p_f), eps = d_eps.value_or(cfg.eps), delta = d_delta.value_or(cfg.delta);
			if (!(lambda > 0.0) || !std::isfinite(lambda))
				throw ConfigError("lambda", "must be positive and finite");
			if (!(eps > 0.0 && eps < 1.0))
				throw ConfigError("eps", "must lie in (0, 1)");
			const double pc = collision_budget(pf, eps, delta);
			csv_out << csv::design_header << '\n';
			if (design_kind == "cdma") {
				const CdmaDesign d = design_cdma(sc, lambda, eps, pc, delta);
				csv::write_design(csv_out, d, lambda);
				summary("cdma: n_bar=" + std::to_string(d.n_bar) + " N_c=" + std::to_string(d.code_len) +
					" target SINR " + csv::num(linear_to_db(d.target_sinr)) + " dB, p_coll=" + csv::num(pc));
			} else {
				const FdmaRaDesign d = design_fdma_ra(sc, lambda, eps, pc, delta);
				csv::write_design(csv_out, d, sc, lambda);
				summary("fdma: n_bar=" + std::to_string(d.n_bar) + " N_f=" + std::to_string(d.num_channels) +
					" p_coll=" + csv::num(pc));
			}
		} else if (app.got_subcommand(schedule)) {
			sc.lambda_rate = static_cast<double>(s_k) / sc.tau_slot;
			const std::vector<double> gains = gains_of(sample_devices(sc, s_k, seed));
			const Objective obj = s_objective == "energy" ? Objective::energy : Objective::power;
			const AllocationMode mode = s_mode == "equal"	    ? AllocationMode::equal
						    : s_mode == "closed-form" ? AllocationMode::closed_form
									      : AllocationMode::optimal;
			ScheduleResult r;
			std::string name = s_kind;
			if (s_kind == "sic") {
				std::vector<double> sorted = gains;
				std::sort(sorted.begin(), sorted.end());
				r = sic_sum_power(sorted, sc);
			} else {
				const Resource kind = s_kind == "tdma" ? Resource::tdma_time : Resource::fdma_band;
				if (kind == Resource::fdma_band && mode == AllocationMode::closed_form)
					throw ConfigError("mode", "closed-form is available for tdma only");
				const DropResult dr = drop_devices(gains, cfg.delta1, sc, kind);
				const std::vector<double> kept = dr.kept_gains(gains);
				if (kept.empty())
					throw Infeasible("no device can be served");
				const Allocation a = kind == Resource::tdma_time ? tdma_schedule(kept, sc, obj, mode)
										 : fdma_schedule(kept, sc, mode);
				r = allocation_cost(a, kept, sc);
				r.dropped = dr.dropped;
				name += "_" + std::string(to_string(mode)) + "_" + std::string(to_string(obj));
			}
			csv_out << csv::schedule_header << '\n';
			csv::write_schedule(csv_out, name, s_k, r);
			summary(name + ": K=" + std::to_string(s_k) + " total power " + csv::num(r.total_power) + " W (" +
				csv::num(watts_to_dbm(r.total_power)) + " dBm), dropped " + std::to_string(r.dropped.size()) +
				", above p_max " + std::to_string(r.over_cap.size()));
		} else if (app.got_subcommand(sweep)) {
			const std::vector<double> lambdas = parse_lambda_range(w_lambdas);
			std::vector<Strategy> strategies;
			for (const auto& name : split(w_strategies, ',')) {
				const auto st = parse_strategy(name);
				if (!st)
					throw ConfigError("strategies", "unknown strategy '" + name + "'");
				strategies.push_back(*st);
			}
			SweepOptions o;
			o.p_f = cfg.p_f;
			o.eps = cfg.eps;
			o.delta = cfg.delta;
			o.delta1 = cfg.delta1;
			const auto rows = run_sweep(sc, lambdas, strategies, w_trials, seed, o);
			csv::write_sweep(csv_out, rows);
			summary("sweep: " + std::to_string(lambdas.size()) + " loads x " + std::to_string(strategies.size()) +
				" strategies x " + std::to_string(w_trials) + " trials, seed " + std::to_string(seed));
		} else if (app.got_subcommand(maxload)) {
			if (m_kind == "cdma" || m_kind == "fdma") {
				const AccessKind kind = m_kind == "cdma" ? AccessKind::cdma : AccessKind::fdma;
				if (!(cfg.eps > 0.0 && cfg.eps < 1.0))
					throw ConfigError("eps", "must lie in (0, 1)");
				const RaMaxLoad r = ra_max_load(kind, sc, cfg.p_f, cfg.eps, cfg.delta, m_draws, seed);
				csv_out << csv::design_header << '\n';
				if (kind == AccessKind::cdma) {
					const CdmaDesign d = design_cdma(sc, r.lambda_max > 0 ? r.lambda_max : 1.0, cfg.eps, r.p_coll, cfg.delta);
					csv::write_design(csv_out, d, r.lambda_max, r.lambda_max);
				} else {
					const FdmaRaDesign d = design_fdma_ra(sc, r.lambda_max > 0 ? r.lambda_max : 1.0, cfg.eps, r.p_coll, cfg.delta);
					csv::write_design(csv_out, d, sc, r.lambda_max, r.lambda_max);
				}
				summary(m_kind + " random access: lambda_max = " + csv::num(r.lambda_max) + " arrivals/s");
			} else {
				const Resource kind = m_kind == "tdma" ? Resource::tdma_time : Resource::fdma_band;
				const LoadPolicy policy = cfg.policy();
				const CoordinatedMaxLoad r = coordinated_max_load(kind, sc, policy, m_trials, seed);
				csv_out << csv::coordinated_load_header << '\n';
				csv::write_coordinated_load(csv_out, r, policy);
				summary(m_kind + " coordinated: lambda_max = " + csv::num(r.lambda_max) +
					" arrivals/s (law-of-large-numbers estimate " + csv::num(r.lambda_slln) + ")");
			}
		} else if (app.got_subcommand(bounds)) {
			const std::vector<double> gains = gains_of(sample_devices(sc, b_k, seed));
			const double pb = tdma_power_ratio_bound(gains, sc);
			const double eb = energy_ratio_bound(gains, sc);
			csv_out << csv::bounds_header << '\n';
			csv::write_bounds(csv_out, b_k, pb, eb, seed);
			summary("K=" + std::to_string(b_k) + ": TDMA power ratio bound " + csv::num(pb) +
				", energy ratio bound " + csv::num(eb));
		}
		csv_out.flush();
		return exit_ok;
	} catch (const ConfigError& e) {
		err << "config error: " << e.what() << '\n';
		return exit_usage;
	} catch (const Infeasible& e) {
		err << "infeasible: " << e.what() << '\n';
		return exit_infeasible;
	} catch (const InvalidArgument& e) {
		err << "invalid argument: " << e.what() << '\n';
		return exit_usage;
	} catch (const Error& e) {
		err << "error: " << e.what() << '\n';
		return exit_usage;
	}
}

} // namespace m2mpower

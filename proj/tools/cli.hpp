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

#ifndef M2MPOWER_CLI_HPP
#define M2MPOWER_CLI_HPP

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace m2mpower {

inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 1;      ///< bad flags, config keys or arguments
inline constexpr int exit_infeasible = 2; ///< the requested design or schedule cannot be met

/// Environment variable holding the default seed.
inline constexpr const char* seed_env = "M2M_SEED";
inline constexpr std::uint64_t default_seed = 1;

/// Runs the command line `args` (args[0] is the program name). CSV goes to
/// `out` unless --output names a file; summaries and diagnostics go to `err`.
/// `env_seed` stands in for the M2M_SEED variable.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
	    std::optional<std::string> env_seed = std::nullopt);

/// Parses "a:b:step" (inclusive) or a single value.
std::vector<double> parse_lambda_range(std::string_view text);

} // namespace m2mpower

#endif // M2MPOWER_CLI_HPP

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

#ifndef M2M_ERROR_HPP
#define M2M_ERROR_HPP

#include <stdexcept>
#include <string>
#include <utility>

namespace m2m {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

/// A precondition on an argument does not hold (bad probability, unsorted gains, ...).
class InvalidArgument : public Error {
public:
	using Error::Error;
};

/// Scenario or configuration values violate their invariants.
class ConfigError : public Error {
public:
	ConfigError(std::string key, const std::string& what)
		: Error(key + ": " + what), key_(std::move(key)) {}

	const std::string& key() const noexcept { return key_; }

private:
	std::string key_;
};

/// A design or schedule cannot satisfy its constraints.
class Infeasible : public Error {
public:
	using Error::Error;
};

/// Target SINR cannot be reached at any transmit power.
class InterferenceLimited : public Infeasible {
public:
	using Infeasible::Infeasible;
};

/// Equal allocation gives some device less than its minimum resource.
class FloorViolation : public Infeasible {
public:
	using Infeasible::Infeasible;
};

/// An iterative method hit its iteration cap.
class NonConvergence : public Error {
public:
	using Error::Error;
};

} // namespace m2m

#endif // M2M_ERROR_HPP

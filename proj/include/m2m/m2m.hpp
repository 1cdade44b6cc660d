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

#ifndef M2M_M2M_HPP
#define M2M_M2M_HPP

#include "m2m/channel.hpp"
#include "m2m/config.hpp"
#include "m2m/coordinated.hpp"
#include "m2m/csv.hpp"
#include "m2m/error.hpp"
#include "m2m/montecarlo.hpp"
#include "m2m/optsolve.hpp"
#include "m2m/poisson.hpp"
#include "m2m/random.hpp"
#include "m2m/uncoordinated.hpp"

#endif // M2M_M2M_HPP

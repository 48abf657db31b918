// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------


#pragma once

#include "fluidkey/types.hpp"
#include "fluidkey/rng.hpp"
#include "fluidkey/channel.hpp"
#include "fluidkey/linalg.hpp"
#include "fluidkey/kgr.hpp"
#include "fluidkey/constraints.hpp"
#include "fluidkey/pso.hpp"
#include "fluidkey/baselines.hpp"
#include "fluidkey/ao.hpp"
#include "fluidkey/serialization.hpp"
#include "fluidkey/experiment.hpp"

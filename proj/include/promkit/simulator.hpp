// Copyright 2026 The promkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "promkit/simulator/bfa_check.hpp"
#include "promkit/simulator/circuit.hpp"
#include "promkit/simulator/gate.hpp"
#include "promkit/simulator/noise.hpp"
#include "promkit/simulator/observable.hpp"
#include "promkit/simulator/oracle.hpp"
#include "promkit/simulator/shot_runner.hpp"
#include "promkit/simulator/state_vector.hpp"

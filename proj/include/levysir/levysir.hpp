/*
   Copyright 2026 The levysir Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include "levysir/analytics.hpp"
#include "levysir/errors.hpp"
#include "levysir/experiment_io.hpp"
#include "levysir/levy_model.hpp"
#include "levysir/params.hpp"
#include "levysir/quadrature.hpp"
#include "levysir/rng.hpp"
#include "levysir/sde_engine.hpp"
#include "levysir/special_functions.hpp"
#include "levysir/ts_sampler.hpp"

// Copyright 2026 The hsps Authors
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

#include "hsps/coincidence.hpp"
#include "hsps/config.hpp"
#include "hsps/detector.hpp"
#include "hsps/errors.hpp"
#include "hsps/experiment.hpp"
#include "hsps/g2.hpp"
#include "hsps/report.hpp"
#include "hsps/rng.hpp"
#include "hsps/spdc.hpp"
#include "hsps/timetag.hpp"
#include "hsps/ttag_io.hpp"

// Copyright 2026 The noon-forge Authors
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

#include "noon/numerics.hpp"
#include "noon/circuit.hpp"
#include "noon/engines.hpp"
#include "noon/phase.hpp"
#include "noon/feedforward.hpp"
#include "noon/quality.hpp"
#include "noon/parallel.hpp"
#include "noon/efficiency.hpp"
#include "noon/metrology.hpp"

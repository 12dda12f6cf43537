// SPDX-License-Identifier: Apache-2.0
//
// hapsnoma: link-level simulator for HAPS MIMO-NOMA downlinks
// Copyright (C) 2026 The hapsnoma authors
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

#ifndef HAPSNOMA_HPP
#define HAPSNOMA_HPP

#include "channel.hpp"
#include "channel_io.hpp"
#include "clustering.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "linkproc.hpp"
#include "powalloc.hpp"
#include "quadrature.hpp"
#include "types.hpp"

#include "experiments/config.hpp"
#include "experiments/metrics.hpp"
#include "experiments/scenario.hpp"
#include "experiments/sweeps.hpp"

#endif

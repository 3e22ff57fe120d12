// SPDX-License-Identifier: Apache-2.0
//
// uwbrt - deterministic polarimetric ray tracer for UWB coverage in shelf warehouses
// Copyright (C) 2026 The uwbrt Authors
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

#ifndef UWBRT_UWBRT_HPP
#define UWBRT_UWBRT_HPP

#include "antenna.hpp"
#include "diffraction.hpp"
#include "geometry.hpp"
#include "io.hpp"
#include "link.hpp"
#include "materials.hpp"
#include "pathfinder.hpp"
#include "scenario.hpp"
#include "validation.hpp"

#endif

// Copyright 2026 The rdesign Authors
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

#pragma once

#include "rdesign/box.hpp"
#include "rdesign/contour.hpp"
#include "rdesign/ds.hpp"
#include "rdesign/error.hpp"
#include "rdesign/expr.hpp"
#include "rdesign/format.hpp"
#include "rdesign/geometry.hpp"
#include "rdesign/polyfit.hpp"
#include "rdesign/reactor.hpp"
#include "rdesign/region.hpp"
#include "rdesign/serialize.hpp"
#include "rdesign/sobol.hpp"
#include "rdesign/stiff.hpp"

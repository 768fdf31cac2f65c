// Copyright 2026 The covchan Authors
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

#include "covchan/capacity.hpp"
#include "covchan/covariant.hpp"
#include "covchan/errors.hpp"
#include "covchan/fock.hpp"
#include "covchan/matcore.hpp"
#include "covchan/philox.hpp"
#include "covchan/spectrum.hpp"
#include "covchan/timing.hpp"

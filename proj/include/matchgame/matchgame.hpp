// Copyright 2026 The matchgame Authors
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

#ifndef MATCHGAME_MATCHGAME_HPP_
#define MATCHGAME_MATCHGAME_HPP_

#include "matchgame/core.hpp"
#include "matchgame/da.hpp"
#include "matchgame/dynamics.hpp"
#include "matchgame/gen.hpp"
#include "matchgame/harness.hpp"
#include "matchgame/io.hpp"
#include "matchgame/manipulation.hpp"
#include "matchgame/stability.hpp"

#endif  // MATCHGAME_MATCHGAME_HPP_

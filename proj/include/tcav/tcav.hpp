/* Copyright 2026 The TCAV Audit Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

// Umbrella header.

#include "tcav/audit.hpp"
#include "tcav/concepts.hpp"
#include "tcav/engine.hpp"
#include "tcav/error.hpp"
#include "tcav/lexicon.hpp"
#include "tcav/model.hpp"
#include "tcav/probes.hpp"
#include "tcav/random.hpp"
#include "tcav/rep_store.hpp"
#include "tcav/report.hpp"
#include "tcav/serialize.hpp"
#include "tcav/stats.hpp"
#include "tcav/synth.hpp"
#include "tcav/train.hpp"

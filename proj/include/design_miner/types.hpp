// Copyright 2026 The design-miner Authors
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

#include <string>
#include <vector>

#include "design_miner/errors.hpp"

namespace dminer {

// Binary class of a discussion. "design" is the positive class everywhere.
enum class Label { design, general };

inline const char* to_string(Label l) { return l == Label::design ? "design" : "general"; }

inline Label label_from_string(const std::string& s) {
  if (s == "design") return Label::design;
  if (s == "general") return Label::general;
  throw InvalidDataError("unknown label \"" + s + "\" (expected design|general)");
}

// Ordered token list produced by the text pipeline.
using TokenSeq = std::vector<std::string>;

}  // namespace dminer

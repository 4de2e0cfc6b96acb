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

#include <stdexcept>
#include <string>

namespace dminer {

// Input data violates a documented contract (bad record, single-class labels,
// non-finite feature, ...). Messages carry line/row locations where known.
struct InvalidDataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A referenced file, model, or other on-disk artifact is absent or unreadable.
struct MissingArtifactError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A persisted format failed to parse (version mismatch, truncation, bad field).
struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace dminer

// Copyright 2026 The QLM Authors
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

#include <cstdint>

#include "qlm/encoder.hpp"

namespace qlm {

/// Two-class synthetic "protein level" data. For class c in {0, 1}:
///   log x_j = c * mean_shift * s_j + log_sd * e_j
/// where s_j alternates +1/-1 across features and e is standard normal with
/// equicorrelation `correlation`.
/// Rows hold all class-0 samples, then all class-1 samples.
struct TwoClassOptions {
  int features = 9;
  int per_class = 100;
  double mean_shift = 0.3;
  double correlation = 0.6;
  double log_sd = 0.5;
  std::uint64_t seed = 0;
};

RawDataset generate_two_class(const TwoClassOptions& options);

}  // namespace qlm

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

#include "qlm/datagen.hpp"

#include <cmath>
#include <random>

#include "qlm/error.hpp"

namespace qlm {

RawDataset generate_two_class(const TwoClassOptions& options) {
  require(options.features >= 1, "at least one feature is required");
  require(options.per_class >= 1, "at least one sample per class is required");
  require(options.correlation >= 0.0 && options.correlation < 1.0, "correlation must be in [0, 1)");
  require(options.log_sd > 0.0, "log_sd must be positive");
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double shared = std::sqrt(options.correlation);
  const double own = std::sqrt(1.0 - options.correlation);

  const int d = options.features;
  RawDataset raw;
  raw.features.resize(2 * options.per_class, d);
  for (int c = 0; c < 2; ++c) {
    for (int i = 0; i < options.per_class; ++i) {
      const int row = c * options.per_class + i;
      const double common = normal(rng);
      for (int j = 0; j < d; ++j) {
        const double sign = (j % 2 == 0) ? 1.0 : -1.0;
        const double noise = shared * common + own * normal(rng);
        const double log_level = c * options.mean_shift * sign + options.log_sd * noise;
        raw.features(row, j) = std::exp(log_level);
      }
      raw.labels.push_back(c);
    }
  }
  return raw;
}

}  // namespace qlm

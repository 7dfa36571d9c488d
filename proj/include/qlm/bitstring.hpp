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
#include <string>
#include <string_view>

#include "qlm/error.hpp"

namespace qlm {

/// A fixed-width computational-basis label.
///
/// Bit k of `value` is qubit k (qubit 0 is the least-significant bit). The
/// textual form is written most-significant first, so "10" on two qubits is
/// qubit1=1, qubit0=0, i.e. value 2.
struct BitString {
  std::uint64_t value = 0;
  int width = 0;

  static constexpr int kMaxWidth = 62;

  BitString() = default;
  BitString(std::uint64_t v, int w) : value(v), width(w) {
    require(w >= 0 && w <= kMaxWidth, "bit string width out of range");
    require(w == kMaxWidth || (v >> w) == 0, "bit string value exceeds width");
  }

  static BitString parse(std::string_view text) {
    require(static_cast<int>(text.size()) <= kMaxWidth, "bit string too long");
    std::uint64_t v = 0;
    for (char c : text) {
      require(c == '0' || c == '1', "bit string must contain only 0 and 1: '" + std::string(text) + "'");
      v = (v << 1) | static_cast<std::uint64_t>(c == '1');
    }
    return BitString(v, static_cast<int>(text.size()));
  }

  bool bit(int qubit) const { return (value >> qubit) & 1U; }

  std::string str() const {
    std::string out(static_cast<std::size_t>(width), '0');
    for (int q = 0; q < width; ++q) {
      if (bit(q)) out[static_cast<std::size_t>(width - 1 - q)] = '1';
    }
    return out;
  }

  friend bool operator==(const BitString&, const BitString&) = default;
};

}  // namespace qlm

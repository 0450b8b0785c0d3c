// Copyright 2026 The Silverner Authors.
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

#ifndef SILVERNER_SPAN_H_
#define SILVERNER_SPAN_H_

#include <compare>
#include <cstddef>

namespace silverner {

// Half-open interval [begin, end) of UTF-8 byte offsets into a string.
// Offsets always fall on code point boundaries.
struct Span {
  size_t begin = 0;
  size_t end = 0;

  size_t size() const { return end - begin; }
  bool empty() const { return end <= begin; }

  bool Overlaps(const Span &other) const {
    return begin < other.end && other.begin < end;
  }
  bool Contains(const Span &other) const {
    return begin <= other.begin && other.end <= end;
  }

  auto operator<=>(const Span &) const = default;
};

}  // namespace silverner

#endif  // SILVERNER_SPAN_H_

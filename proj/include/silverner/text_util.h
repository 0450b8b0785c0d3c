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

#ifndef SILVERNER_TEXT_UTIL_H_
#define SILVERNER_TEXT_UTIL_H_

#include <string>
#include <string_view>
#include <vector>

namespace silverner {

// Decodes the code point starting at byte `pos`. Invalid sequences decode
// as U+FFFD with length 1. `*length` receives the number of bytes consumed.
char32_t DecodeUtf8At(std::string_view text, size_t pos, size_t *length);

// Decodes the code point that ends right before byte `pos`. Returns 0 when
// `pos` is the start of the text.
char32_t DecodeUtf8Before(std::string_view text, size_t pos);

void AppendUtf8(std::string *out, char32_t cp);

// True for letters, digits and combining marks.
bool IsWordChar(char32_t cp);
bool IsUppercase(char32_t cp);
bool IsDigit(char32_t cp);
bool IsSpace(char32_t cp);

// Unicode NFC. Invalid UTF-8 is replaced by U+FFFD.
std::string NormalizeNfc(std::string_view text);

// Collapses whitespace runs to one ASCII space and trims both ends.
std::string CollapseWhitespace(std::string_view text);

// Full Unicode case folding.
std::string FoldCase(std::string_view text);

// Trims ASCII whitespace.
std::string_view Trim(std::string_view text);

// Entry i is the byte offset of the i-th scalar value; the last entry is
// text.size(). Size is (number of scalar values + 1).
std::vector<size_t> ScalarByteOffsets(std::string_view text);

// Case-insensitive ASCII prefix test.
bool StartsWithIgnoreCase(std::string_view text, std::string_view prefix);

// Splits a text on '\n' and returns lines with '#' comments and blanks
// removed and surrounding whitespace trimmed.
std::vector<std::string> ReadListLines(std::string_view contents);

}  // namespace silverner

#endif  // SILVERNER_TEXT_UTIL_H_

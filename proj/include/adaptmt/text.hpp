// Copyright 2026 the adaptmt authors
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

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace adaptmt::text {

bool is_valid_utf8(std::string_view s) noexcept;

/// Decodes UTF-8 into code points. Invalid sequences decode to U+FFFD.
std::u32string decode_utf8(std::string_view s);
void append_utf8(char32_t cp, std::string& out);
std::string encode_utf8(std::u32string_view s);

/// Simple case folding for Latin, Greek and Cyrillic blocks.
char32_t to_lower(char32_t cp) noexcept;
std::string to_lower(std::string_view s);

/// Unicode White_Space code points (the set Python's str.split() uses).
bool is_space(char32_t cp) noexcept;

/// Splits on runs of whitespace; no empty tokens.
std::vector<std::string> split_whitespace(std::string_view s);

/// Number of maximal non-whitespace runs.
std::size_t count_words(std::string_view s);

std::string_view trim_right(std::string_view s) noexcept;
std::string_view trim(std::string_view s) noexcept;

/// Replaces CR/LF characters with single spaces.
std::string flatten_newlines(std::string_view s);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

}  // namespace adaptmt::text

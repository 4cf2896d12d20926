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

#include "adaptmt/text.hpp"

#include "doctest.h"

using namespace adaptmt;

TEST_CASE("utf8 round trip and validation") {
  const std::string s = "año €x 𝄞";
  CHECK(text::is_valid_utf8(s));
  CHECK(text::encode_utf8(text::decode_utf8(s)) == s);
  CHECK(text::decode_utf8(s).size() == 8);
  CHECK_FALSE(text::is_valid_utf8("\xC3"));
  CHECK_FALSE(text::is_valid_utf8("\xC0\xAF"));       // overlong
  CHECK_FALSE(text::is_valid_utf8("\xED\xA0\x80"));   // surrogate
  CHECK(text::decode_utf8("\xFF") == std::u32string(1, U'�'));
}

TEST_CASE("whitespace splitting matches unicode white space") {
  CHECK(text::split_whitespace("  a\tb c　d \n").size() == 4);
  CHECK(text::count_words("") == 0);
  CHECK(text::count_words("   ") == 0);
  CHECK(text::count_words("one two  three") == 3);
  CHECK(text::is_space(U' '));
  CHECK_FALSE(text::is_space(U'​'));  // zero width space is not White_Space
}

TEST_CASE("trim and newline flattening") {
  CHECK(text::trim("  x y \t") == "x y");
  CHECK(text::trim_right("  x  ") == "  x");
  CHECK(text::flatten_newlines("a\nb\r\nc") == "a b c");
  CHECK(text::join({"a", "b", "c"}, ", ") == "a, b, c");
  CHECK(text::to_lower("ÁRBOL Ωμ") == "árbol ωμ");
}

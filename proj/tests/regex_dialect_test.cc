/*
 * Copyright 2026 The Herald Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#include "herald/regex_dialect.h"

#include <gtest/gtest.h>

#include "herald/error.h"

namespace herald {
namespace {

std::string Rejection(const std::string& pattern) {
  try {
    CheckPortableRegex(pattern);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kConfig);
    return e.what();
  }
  ADD_FAILURE() << pattern << " was accepted";
  return "";
}

TEST(PortableRegex, AcceptsTheDialect) {
  for (const char* pattern :
       {"abc", "^no\\.?$", "(?i)you('re| are) dumb", "[a-z0-9_]+", "[^.?!]*",
        "\\bbye\\b", "(?:a|b){2,3}?", "x{3}", "x{2,}", "\\d\\D\\w\\W\\s\\S", "a.*?b",
        "\\(literal\\)", "[\\]x]"}) {
    EXPECT_NO_THROW(PortableRegex{pattern}) << pattern;
  }
}

TEST(PortableRegex, NamesRejectedConstructWithPosition) {
  EXPECT_NE(Rejection("(?<=x)y").find("lookbehind not in portable dialect at position 0"),
            std::string::npos);
  EXPECT_NE(Rejection("a(?!b)").find("lookahead"), std::string::npos);
  EXPECT_NE(Rejection("(a)\\1").find("backreference"), std::string::npos);
  EXPECT_NE(Rejection("(?<n>a)").find("named group"), std::string::npos);
  EXPECT_NE(Rejection("a++").find("possessive quantifier"), std::string::npos);
  EXPECT_NE(Rejection("[[:alpha:]]").find("POSIX bracket class"), std::string::npos);
  EXPECT_NE(Rejection("ab(?i)c").find("inline flag"), std::string::npos);
  EXPECT_NE(Rejection("*a").find("quantifier without operand"), std::string::npos);
  EXPECT_NE(Rejection("[abc").find("unterminated character class"), std::string::npos);
  EXPECT_NE(Rejection("\\p{L}").find("escape \\p"), std::string::npos);
}

TEST(PortableRegex, CaseFlagOnlyAtStart) {
  const DialectCheck check = CheckPortableRegex("(?i)hello");
  EXPECT_TRUE(check.case_insensitive);
  EXPECT_EQ(check.body, "hello");
  EXPECT_TRUE(PortableRegex("(?i)hello").Search("Oh HELLO there"));
  EXPECT_FALSE(PortableRegex("hello").Search("HELLO"));
}

TEST(PortableRegex, UnanchoredSearch) {
  const PortableRegex regex("\\bbye\\b");
  EXPECT_TRUE(regex.Search("ok bye now"));
  EXPECT_FALSE(regex.Search("goodbyes"));
  EXPECT_TRUE(PortableRegex("^no\\.?$").Search("no."));
  EXPECT_FALSE(PortableRegex("^no\\.?$").Search("no way"));
}

}  // namespace
}  // namespace herald

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

// The portable regex dialect used by rule files.
//
// Allowed: literals, escaped metacharacters, \d \D \w \W \s \S \t \n \r \f \v,
// character classes with ranges and negation, '.', alternation, capturing and
// (?:...) groups, the quantifiers * + ? {n} {n,} {n,m} (optionally lazy),
// the anchors ^ $ \b \B, and a leading (?i) case-insensitivity flag.
// Everything else (backreferences, lookaround, named groups, possessive
// quantifiers, POSIX bracket classes, inline flags elsewhere) is rejected so a
// rule file means the same thing to every regex engine.

#ifndef HERALD_REGEX_DIALECT_H_
#define HERALD_REGEX_DIALECT_H_

#include <regex>
#include <string>
#include <string_view>

namespace herald {

struct DialectCheck {
  bool case_insensitive = false;
  // Pattern body with the leading (?i) flag removed.
  std::string body;
};

// Throws ConfigError("<construct> not in portable dialect at position N ...").
DialectCheck CheckPortableRegex(std::string_view pattern);

class PortableRegex {
 public:
  explicit PortableRegex(std::string_view pattern);

  const std::string& source() const { return source_; }
  // Unanchored search.
  bool Search(std::string_view text) const;

 private:
  std::string source_;
  std::regex regex_;
};

}  // namespace herald

#endif  // HERALD_REGEX_DIALECT_H_

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

#include <cctype>
#include <string>

#include "herald/error.h"

namespace herald {
namespace {

class DialectScanner {
 public:
  explicit DialectScanner(std::string_view pattern) : pattern_(pattern) {}

  DialectCheck Run() {
    DialectCheck check;
    if (pattern_.substr(0, 4) == "(?i)") {
      check.case_insensitive = true;
      pos_ = 4;
    }
    const std::size_t body_begin = pos_;
    bool can_quantify = false;
    int depth = 0;
    while (pos_ < pattern_.size()) {
      const char c = pattern_[pos_];
      switch (c) {
        case '\\':
          can_quantify = ScanEscape(/*in_class=*/false);
          break;
        case '[':
          ScanClass();
          can_quantify = true;
          break;
        case '(':
          ScanGroupOpen();
          ++depth;
          can_quantify = false;
          break;
        case ')':
          if (depth == 0) Fail("unbalanced ')'");
          --depth;
          ++pos_;
          can_quantify = true;
          break;
        case '*':
        case '+':
        case '?':
          if (!can_quantify) Fail("quantifier without operand");
          ++pos_;
          ScanQuantifierSuffix();
          can_quantify = false;
          break;
        case '{':
          if (!can_quantify) Fail("quantifier without operand");
          ScanBraces();
          ScanQuantifierSuffix();
          can_quantify = false;
          break;
        case '|':
          ++pos_;
          can_quantify = false;
          break;
        case '^':
        case '$':
          ++pos_;
          can_quantify = false;
          break;
        default:
          ++pos_;
          can_quantify = true;
      }
    }
    if (depth != 0) Fail("unbalanced '('");
    check.body = std::string(pattern_.substr(body_begin));
    return check;
  }

 private:
  [[noreturn]] void Fail(const std::string& what) const {
    throw ConfigError(what + " not in portable dialect at position " +
                      std::to_string(pos_) + " in pattern '" +
                      std::string(pattern_) + "'");
  }

  // Returns whether the escape is quantifiable (anchors are not).
  bool ScanEscape(bool in_class) {
    if (pos_ + 1 >= pattern_.size()) Fail("trailing backslash");
    const char e = pattern_[pos_ + 1];
    if (e >= '1' && e <= '9') Fail("backreference");
    if (e == 'k') Fail("named backreference");
    if (std::isalnum(static_cast<unsigned char>(e))) {
      static constexpr std::string_view kClassEscapes = "dDwWsStnrfv";
      static constexpr std::string_view kAnchors = "bB";
      if (kAnchors.find(e) != std::string_view::npos && !in_class) {
        pos_ += 2;
        return false;
      }
      if (kClassEscapes.find(e) == std::string_view::npos) {
        Fail(std::string("escape \\") + e);
      }
    }
    pos_ += 2;
    return true;
  }

  void ScanClass() {
    ++pos_;  // '['
    if (pos_ < pattern_.size() && pattern_[pos_] == '^') ++pos_;
    bool first = true;
    while (pos_ < pattern_.size()) {
      const char c = pattern_[pos_];
      if (c == ']' && !first) {
        ++pos_;
        return;
      }
      if (c == '[' && pos_ + 1 < pattern_.size() &&
          (pattern_[pos_ + 1] == ':' || pattern_[pos_ + 1] == '=' ||
           pattern_[pos_ + 1] == '.')) {
        Fail("POSIX bracket class");
      }
      if (c == '\\') {
        ScanEscape(/*in_class=*/true);
      } else {
        ++pos_;
      }
      first = false;
    }
    Fail("unterminated character class");
  }

  void ScanGroupOpen() {
    if (pos_ + 1 < pattern_.size() && pattern_[pos_ + 1] == '?') {
      const std::string_view rest = pattern_.substr(pos_ + 2);
      if (rest.starts_with(":")) {
        pos_ += 3;
        return;
      }
      if (rest.starts_with("=") || rest.starts_with("!")) Fail("lookahead");
      if (rest.starts_with("<=") || rest.starts_with("<!")) Fail("lookbehind");
      if (rest.starts_with("<") || rest.starts_with("P<")) Fail("named group");
      if (rest.starts_with(">")) Fail("atomic group");
      if (rest.starts_with("i)")) Fail("inline flag after pattern start");
      Fail("group construct");
    }
    ++pos_;
  }

  void ScanBraces() {
    const std::size_t open = pos_;
    ++pos_;
    auto read_number = [&]() -> long {
      const std::size_t begin = pos_;
      while (pos_ < pattern_.size() &&
             std::isdigit(static_cast<unsigned char>(pattern_[pos_]))) {
        ++pos_;
      }
      if (pos_ == begin) return -1;
      return std::stol(std::string(pattern_.substr(begin, pos_ - begin)));
    };
    const long low = read_number();
    long high = low;
    if (low < 0) {
      pos_ = open;
      Fail("malformed repetition");
    }
    if (pos_ < pattern_.size() && pattern_[pos_] == ',') {
      ++pos_;
      high = read_number();  // -1: unbounded above.
    }
    if (pos_ >= pattern_.size() || pattern_[pos_] != '}') {
      pos_ = open;
      Fail("malformed repetition");
    }
    if (high >= 0 && high < low) {
      pos_ = open;
      Fail("repetition with max < min");
    }
    ++pos_;
  }

  void ScanQuantifierSuffix() {
    if (pos_ < pattern_.size() && pattern_[pos_] == '?') {
      ++pos_;  // Lazy: same match/no-match semantics.
    } else if (pos_ < pattern_.size() && pattern_[pos_] == '+') {
      Fail("possessive quantifier");
    }
    if (pos_ < pattern_.size() &&
        (pattern_[pos_] == '*' || pattern_[pos_] == '+' ||
         pattern_[pos_] == '?' || pattern_[pos_] == '{')) {
      Fail("stacked quantifier");
    }
  }

  std::string_view pattern_;
  std::size_t pos_ = 0;
};

}  // namespace

DialectCheck CheckPortableRegex(std::string_view pattern) {
  return DialectScanner(pattern).Run();
}

PortableRegex::PortableRegex(std::string_view pattern) : source_(pattern) {
  const DialectCheck check = CheckPortableRegex(pattern);
  auto flags = std::regex::ECMAScript | std::regex::optimize;
  if (check.case_insensitive) flags |= std::regex::icase;
  try {
    regex_ = std::regex(check.body, flags);
  } catch (const std::regex_error& e) {
    throw ConfigError("pattern '" + source_ + "' failed to compile: " +
                      e.what());
  }
}

bool PortableRegex::Search(std::string_view text) const {
  return std::regex_search(text.begin(), text.end(), regex_);
}

}  // namespace herald

// Copyright 2026 The flybelt Authors
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

// Coefficient file formats:
//
//   <?xml version="1.0" encoding="UTF-8"?>
//   <shaper Ts="0.01" n="3">
//     <coef i="1">0.25</coef>
//     ...
//   </shaper>
//
//   {"format": "flybelt-shaper", "version": 1, "Ts": 0.01, "n": 3, "h": [...]}

#include <map>
#include <optional>
#include <string>

#include <fmt/format.h>
#include <json.hpp>

#include "flybelt/csv.hpp"
#include "flybelt/error.hpp"
#include "flybelt/shaper.hpp"

namespace flybelt {
namespace {

constexpr int kJsonVersion = 1;
// Loaded shapers must be usable as motion filters: nonnegative taps and unit
// static gain, up to rounding in files written by other tools.
constexpr double kLoadTolerance = 1e-9;

// Minimal scanner for the flat coefficient schema above.
class XmlScanner {
 public:
  explicit XmlScanner(std::string_view text) : text_(text) {}

  // Next element start tag; skips declarations and comments. Returns the tag
  // name and fills attributes. Empty name at end of input.
  std::string next_start(std::map<std::string, std::string>& attrs, bool& self_closing) {
    attrs.clear();
    self_closing = false;
    while (true) {
      const auto lt = text_.find('<', pos_);
      if (lt == std::string_view::npos) {
        pos_ = text_.size();
        return {};
      }
      pos_ = lt + 1;
      if (starts_with("?")) {
        skip_past("?>");
        continue;
      }
      if (starts_with("!--")) {
        skip_past("-->");
        continue;
      }
      if (starts_with("/")) {
        skip_past(">");
        continue;
      }
      std::string name = read_name();
      while (true) {
        skip_ws();
        if (starts_with("/>")) {
          pos_ += 2;
          self_closing = true;
          return name;
        }
        if (starts_with(">")) {
          ++pos_;
          return name;
        }
        const std::string key = read_name();
        skip_ws();
        expect('=');
        skip_ws();
        const char quote = peek();
        if (quote != '"' && quote != '\'') {
          fail("attribute value must be quoted");
        }
        ++pos_;
        const auto end = text_.find(quote, pos_);
        if (end == std::string_view::npos) {
          fail("unterminated attribute value");
        }
        attrs[key] = std::string(text_.substr(pos_, end - pos_));
        pos_ = end + 1;
      }
    }
  }

  // Character data up to the closing tag of `name`.
  std::string text_until_close(const std::string& name) {
    const std::string close = "</" + name;
    const auto end = text_.find(close, pos_);
    if (end == std::string_view::npos) {
      fail(fmt::format("missing </{}>", name));
    }
    std::string body(text_.substr(pos_, end - pos_));
    pos_ = end;
    skip_past(">");
    return body;
  }

 private:
  bool starts_with(std::string_view s) const { return text_.substr(pos_, s.size()) == s; }
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }
  void skip_past(std::string_view s) {
    const auto at = text_.find(s, pos_);
    if (at == std::string_view::npos) {
      fail("unterminated markup");
    }
    pos_ = at + s.size();
  }
  void expect(char c) {
    if (peek() != c) {
      fail(fmt::format("expected '{}'", c));
    }
    ++pos_;
  }
  std::string read_name() {
    const auto start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                   text_[pos_] == '_' || text_[pos_] == '-' ||
                                   text_[pos_] == ':' || text_[pos_] == '.')) {
      ++pos_;
    }
    if (pos_ == start) {
      fail("expected a name");
    }
    return std::string(text_.substr(start, pos_ - start));
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw ValidationError(fmt::format("shaper XML: {} at offset {}", what, pos_));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  const auto e = s.find_last_not_of(" \t\r\n");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

}  // namespace

std::string shaper_to_xml(const ShaperFir& sh) {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += fmt::format("<shaper Ts=\"{}\" n=\"{}\">\n", format_real(sh.ts), sh.h.size());
  for (std::size_t i = 0; i < sh.h.size(); ++i) {
    out += fmt::format("  <coef i=\"{}\">{}</coef>\n", i + 1, format_real(sh.h[i]));
  }
  out += "</shaper>\n";
  return out;
}

ShaperFir shaper_from_xml(std::string_view xml) {
  XmlScanner scan(xml);
  std::map<std::string, std::string> attrs;
  bool self_closing = false;
  if (scan.next_start(attrs, self_closing) != "shaper") {
    throw ValidationError("shaper XML: root element must be <shaper>");
  }
  if (!attrs.count("Ts") || !attrs.count("n")) {
    throw ValidationError("shaper XML: <shaper> needs Ts and n attributes");
  }
  ShaperFir sh;
  sh.ts = parse_real(attrs["Ts"]);
  const double n_real = parse_real(attrs["n"]);
  if (!(n_real >= 1.0) || n_real != std::floor(n_real)) {
    throw ValidationError(fmt::format("shaper XML: invalid n '{}'", attrs["n"]));
  }
  const std::size_t n = std::size_t(n_real);
  std::vector<std::optional<double>> taps(n);
  while (!self_closing) {
    const std::string name = scan.next_start(attrs, self_closing);
    if (name.empty()) {
      break;
    }
    if (name != "coef") {
      throw ValidationError(fmt::format("shaper XML: unexpected element <{}>", name));
    }
    if (!attrs.count("i")) {
      throw ValidationError("shaper XML: <coef> without index attribute i");
    }
    const double idx = parse_real(attrs["i"]);
    if (idx < 1.0 || idx > double(n) || idx != std::floor(idx)) {
      throw ValidationError(fmt::format("shaper XML: coefficient index {} outside 1..{}",
                                        attrs["i"], n));
    }
    auto& slot = taps[std::size_t(idx) - 1];
    if (slot) {
      throw ValidationError(fmt::format("shaper XML: duplicate coefficient {}", attrs["i"]));
    }
    slot = parse_real(trim(self_closing ? std::string() : scan.text_until_close("coef")));
    self_closing = false;
  }
  sh.h.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!taps[i]) {
      throw ValidationError(fmt::format("shaper XML: coefficient {} missing", i + 1));
    }
    sh.h.push_back(*taps[i]);
  }
  sh.validate(kLoadTolerance);
  return sh;
}

std::string shaper_to_json(const ShaperFir& sh) {
  // Numbers are emitted by hand so they keep 17 significant digits.
  std::string out = fmt::format(
      "{{\n  \"format\": \"flybelt-shaper\",\n  \"version\": {},\n  \"Ts\": {},\n  \"n\": {},\n"
      "  \"duration\": {},\n  \"h\": [",
      kJsonVersion, format_real(sh.ts), sh.h.size(), format_real(sh.duration()));
  for (std::size_t i = 0; i < sh.h.size(); ++i) {
    out += (i ? ", " : "");
    out += format_real(sh.h[i]);
  }
  out += "]\n}\n";
  return out;
}

ShaperFir shaper_from_json(std::string_view json) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(fmt::format("shaper JSON: {}", e.what()));
  }
  if (j.value("format", "") != "flybelt-shaper" || j.value("version", 0) != kJsonVersion) {
    throw ValidationError("shaper JSON: unsupported format or version");
  }
  ShaperFir sh;
  try {
    sh.ts = j.at("Ts").get<double>();
    sh.h = j.at("h").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(fmt::format("shaper JSON: {}", e.what()));
  }
  if (j.contains("n") && j["n"].get<std::size_t>() != sh.h.size()) {
    throw ValidationError("shaper JSON: n does not match the number of taps");
  }
  sh.validate(kLoadTolerance);
  return sh;
}

}  // namespace flybelt

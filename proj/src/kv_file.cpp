/*
 * Copyright 2026 The sisverify Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "sisv/kv_file.hpp"

#include <charconv>

#include "sisv/errors.hpp"

namespace sisv {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace

KvFile KvFile::parse(std::string_view text, std::string_view kind) {
  KvFile out;
  std::size_t line_number = 0;
  std::size_t pos = 0;
  const std::string header_prefix = "# sisv ";
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++line_number;
    auto line = text.substr(pos, end - pos);
    pos = end + 1;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      const auto comment = trim(line.substr(hash));
      if (comment.starts_with(header_prefix)) {
        const std::string expected = header_prefix + std::string(kind) + " v1";
        if (comment != expected) {
          throw ParseError("expected header '" + expected + "'", line_number);
        }
      }
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError("expected 'key = value'", line_number, 0, {"="});
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty() || value.empty()) {
      throw ParseError("expected 'key = value'", line_number);
    }
    if (out.values_.contains(key)) {
      throw ParseError("duplicate key '" + key + "'", line_number);
    }
    out.values_.emplace(key, Entry{value, line_number});
  }
  return out;
}

double KvFile::get_double(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const auto& v = it->second.value;
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ParseError("'" + key + "' is not a number: " + v, it->second.line);
  }
  return out;
}

int KvFile::get_int(const std::string& key, int fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const auto& v = it->second.value;
  int out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ParseError("'" + key + "' is not an integer: " + v, it->second.line);
  }
  return out;
}

void KvFile::reject_unknown(const std::set<std::string>& known) const {
  for (const auto& [key, entry] : values_) {
    if (!known.contains(key)) {
      throw ParseError("unknown key '" + key + "'", entry.line);
    }
  }
}

}  // namespace sisv

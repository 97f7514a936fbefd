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

#ifndef SISV_KV_FILE_HPP_
#define SISV_KV_FILE_HPP_

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>

namespace sisv {

/**
 * `key = value` lines with `#` comments, as used by scenario and controller
 * files. A `# sisv <kind> vN` header, when present, must name `kind` and v1.
 */
class KvFile {
 public:
  static KvFile parse(std::string_view text, std::string_view kind);

  bool has(const std::string& key) const { return values_.contains(key); }
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  /// Throws ParseError (with its line) for any key outside `known`.
  void reject_unknown(const std::set<std::string>& known) const;

 private:
  struct Entry {
    std::string value;
    std::size_t line;
  };
  std::map<std::string, Entry> values_;
};

}  // namespace sisv

#endif  // SISV_KV_FILE_HPP_

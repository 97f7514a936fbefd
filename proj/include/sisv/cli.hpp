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

#ifndef SISV_CLI_HPP_
#define SISV_CLI_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace sisv {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailure = 1;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitResourceError = 3;

/// Environment variable holding the default `--jobs` for `simulate`.
inline constexpr const char* kJobsEnv = "SISV_JOBS";

/// Largest chain `analyze` and `simulate` will build.
inline constexpr std::size_t kMaxChainStates = 5'000'000;

/**
 * Runs one `sisv` command. `args` excludes the program name. Reports go to
 * `out`, diagnostics to `err`; `in` backs the `-` trace argument of `monitor`.
 * Returns the process exit status.
 */
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err);

/// 64-bit FNV-1a, continuing from `seed`.
std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ULL);

}  // namespace sisv

#endif  // SISV_CLI_HPP_

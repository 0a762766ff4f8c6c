/* Copyright 2026 The alias_scope Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

// Command-line front end. RunCli is the whole program minus process setup so
// tests can drive it in-process.
#ifndef ALIAS_SCOPE_TOOLS_CLI_H_
#define ALIAS_SCOPE_TOOLS_CLI_H_

#include <filesystem>
#include <ostream>
#include <string>

namespace alias_scope::cli {

inline constexpr const char* kToolVersion = "0.1.0";

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInvariant = 3;

// Lower-case hex SHA-256 of a file's bytes. Throws IoError.
std::string FileSha256(const std::filesystem::path& path);

// Parses argv, runs one subcommand and returns the exit code. Reports go to
// `out` unless --out names a file; diagnostics go to `err`.
int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err);

}  // namespace alias_scope::cli

#endif  // ALIAS_SCOPE_TOOLS_CLI_H_

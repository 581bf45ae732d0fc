// Copyright 2026 The semloc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SEMLOC_TEXT_HPP_
#define SEMLOC_TEXT_HPP_

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace semloc {

// 1-based physical line number.
using LineNo = int;

// Splits on '\n', dropping a trailing '\r' from each line. A final newline
// does not start an extra empty line.
std::vector<std::string> SplitLines(std::string_view text);

// Joins the given 1-based lines of `lines` with '\n'. Out-of-range numbers
// are skipped.
std::string JoinSelectedLines(const std::vector<std::string>& lines,
                              std::span<const LineNo> numbers);

std::string Trim(std::string_view s);

// Collapses every whitespace run to one space and trims both ends.
std::string NormalizeWhitespace(std::string_view s);

bool StartsWith(std::string_view s, std::string_view prefix);

// Lowercase hex SHA-256.
std::string Sha256Hex(std::string_view data);

std::string ReadFile(const std::filesystem::path& path);
void WriteFile(const std::filesystem::path& path, std::string_view contents);

}  // namespace semloc

#endif  // SEMLOC_TEXT_HPP_

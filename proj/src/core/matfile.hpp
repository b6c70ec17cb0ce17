// Copyright 2026 The DeepSSIM Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DEEPSSIM_CORE_MATFILE_HPP_
#define DEEPSSIM_CORE_MATFILE_HPP_

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace deepssim::mat {

// A top-level variable from a MATLAB level-5 file. Numeric and logical
// arrays land in `numbers` (column-major), char arrays in `text`, and cell
// arrays of char in `cells`.
struct Variable {
  std::vector<int> dims;
  std::vector<double> numbers;
  std::string text;
  std::vector<std::string> cells;
};

// Reads the subset of MAT v5 that score files use: little-endian, optionally
// zlib-compressed elements holding numeric, logical, char or cell-of-char
// arrays. Other classes are skipped.
std::map<std::string, Variable> ReadMatFile(const std::filesystem::path& path);

}  // namespace deepssim::mat

#endif  // DEEPSSIM_CORE_MATFILE_HPP_

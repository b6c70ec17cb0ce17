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

#ifndef DEEPSSIM_CORE_MANIFEST_HPP_
#define DEEPSSIM_CORE_MANIFEST_HPP_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace deepssim {

enum class Polarity { kHigherBetter, kLowerBetter };

struct EvalRecord {
  std::filesystem::path ref_path;
  std::filesystem::path test_path;
  double subjective = 0.0;
  Polarity polarity = Polarity::kHigherBetter;
  std::optional<std::string> group_id;

  bool operator==(const EvalRecord&) const = default;
};

// One retargeted image and the number of votes it received within its group.
// In a votes manifest the group id is the path of the group's source image,
// relative to the manifest, so the group doubles as the reference.
struct VoteRecord {
  std::string group_id;
  std::filesystem::path test_path;
  long votes = 0;

  bool operator==(const VoteRecord&) const = default;
};

enum class ManifestKind { kScores, kVotes };

struct Manifest {
  ManifestKind kind = ManifestKind::kScores;
  std::filesystem::path base_dir;
  std::vector<EvalRecord> records;  // kScores
  std::vector<VoteRecord> votes;    // kVotes
  std::size_t skipped = 0;          // rows dropped for missing or unreadable images

  std::size_t size() const { return kind == ManifestKind::kScores ? records.size() : votes.size(); }
};

inline constexpr std::string_view kScoresHeader = "ref_path,test_path,subjective,polarity,group_id";
inline constexpr std::string_view kVotesHeader = "group_id,test_path,votes";

// Paths in the returned records are absolute. Rows naming a missing or
// unreadable image are skipped with a warning; an empty result throws.
Manifest LoadManifest(const std::filesystem::path& path);

// Writes paths relative to the manifest's directory.
void WriteManifest(const std::vector<EvalRecord>& records, const std::filesystem::path& path);
void WriteVoteManifest(const std::vector<VoteRecord>& votes, const std::filesystem::path& path);

// Expands a votes manifest into records: reference = group source image,
// subjective = votes (higher is better), group id kept for per-group KRCC.
std::vector<EvalRecord> VotesToRecords(const Manifest& manifest);

std::string PolarityName(Polarity polarity);
Polarity ParsePolarity(std::string_view text);

// Minimal RFC 4180 field handling shared with the adapters.
std::vector<std::string> SplitCsvLine(std::string_view line);
std::string CsvField(std::string_view value);

}  // namespace deepssim

#endif  // DEEPSSIM_CORE_MANIFEST_HPP_

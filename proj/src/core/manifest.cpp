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

#include "core/manifest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>

#include <opencv2/imgcodecs.hpp>

#include "core/error.hpp"

namespace fs = std::filesystem;

namespace deepssim {
namespace {

std::string Lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return char(std::tolower(c)); });
  return out;
}

std::string Trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

fs::path Resolve(const fs::path& base, const std::string& field) {
  fs::path p(field);
  if (p.is_relative()) p = base / p;
  return p.lexically_normal();
}

bool Readable(const fs::path& p) {
  std::error_code ec;
  return fs::is_regular_file(p, ec) && cv::haveImageReader(p.string());
}

std::string Relative(const fs::path& p, const fs::path& base) {
  const fs::path abs = fs::absolute(p).lexically_normal();
  const fs::path rel = abs.lexically_relative(base);
  return (rel.empty() ? abs : rel).generic_string();
}

std::ofstream OpenForWrite(const fs::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) Fail(ErrorKind::kIo, "cannot write manifest " + path.string());
  return out;
}

[[noreturn]] void RowError(const fs::path& path, std::size_t line, const std::string& what) {
  Fail(ErrorKind::kValidation, path.string() + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

std::string PolarityName(Polarity polarity) {
  return polarity == Polarity::kHigherBetter ? "HigherBetter" : "LowerBetter";
}

Polarity ParsePolarity(std::string_view text) {
  const std::string t = Lower(Trim(text));
  if (t == "higherbetter" || t == "higher" || t == "mos") return Polarity::kHigherBetter;
  if (t == "lowerbetter" || t == "lower" || t == "dmos") return Polarity::kLowerBetter;
  Fail(ErrorKind::kValidation, "unknown polarity '" + std::string(text) + "'");
}

std::vector<std::string> SplitCsvLine(std::string_view line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

std::string CsvField(std::string_view value) {
  if (value.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(value);
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

Manifest LoadManifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorKind::kIo, "cannot read manifest " + path.string());

  Manifest m;
  m.base_dir = fs::absolute(path).parent_path().lexically_normal();

  std::string line;
  if (!std::getline(in, line)) Fail(ErrorKind::kValidation, path.string() + ": no records");
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
  const std::string header = Trim(line);
  if (header == kScoresHeader) {
    m.kind = ManifestKind::kScores;
  } else if (header == kVotesHeader) {
    m.kind = ManifestKind::kVotes;
  } else {
    Fail(ErrorKind::kValidation, path.string() + ": header mismatch, expected '" +
                                     std::string(kScoresHeader) + "' or '" +
                                     std::string(kVotesHeader) + "'");
  }

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (Trim(line).empty()) continue;
    const auto f = SplitCsvLine(line);

    if (m.kind == ManifestKind::kScores) {
      if (f.size() != 5) RowError(path, line_no, "expected 5 fields");
      EvalRecord r;
      r.ref_path = Resolve(m.base_dir, Trim(f[0]));
      r.test_path = Resolve(m.base_dir, Trim(f[1]));
      const std::string score = Trim(f[2]);
      auto [ptr, ec] = std::from_chars(score.data(), score.data() + score.size(), r.subjective);
      if (ec != std::errc() || ptr != score.data() + score.size() || !std::isfinite(r.subjective)) {
        RowError(path, line_no, "subjective score '" + score + "' is not a finite number");
      }
      r.polarity = ParsePolarity(f[3]);
      if (const std::string g = Trim(f[4]); !g.empty()) r.group_id = g;
      if (!Readable(r.ref_path) || !Readable(r.test_path)) {
        Warn(path.string() + ":" + std::to_string(line_no) + ": missing or unreadable image, row skipped");
        ++m.skipped;
        continue;
      }
      m.records.push_back(std::move(r));
    } else {
      if (f.size() != 3) RowError(path, line_no, "expected 3 fields");
      VoteRecord v;
      v.group_id = Trim(f[0]);
      if (v.group_id.empty()) RowError(path, line_no, "empty group_id");
      v.test_path = Resolve(m.base_dir, Trim(f[1]));
      const std::string votes = Trim(f[2]);
      auto [ptr, ec] = std::from_chars(votes.data(), votes.data() + votes.size(), v.votes);
      if (ec != std::errc() || ptr != votes.data() + votes.size() || v.votes < 0) {
        RowError(path, line_no, "votes '" + votes + "' is not a non-negative integer");
      }
      if (!Readable(v.test_path) || !Readable(Resolve(m.base_dir, v.group_id))) {
        Warn(path.string() + ":" + std::to_string(line_no) + ": missing or unreadable image, row skipped");
        ++m.skipped;
        continue;
      }
      m.votes.push_back(std::move(v));
    }
  }

  if (m.kind == ManifestKind::kVotes) {
    std::map<std::string, std::size_t> members;
    for (const auto& v : m.votes) ++members[v.group_id];
    const auto before = m.votes.size();
    std::erase_if(m.votes, [&](const VoteRecord& v) { return members[v.group_id] < 2; });
    if (m.votes.size() != before) {
      Warn(path.string() + ": dropped " + std::to_string(before - m.votes.size()) +
           " vote rows from groups with fewer than 2 members");
      m.skipped += before - m.votes.size();
    }
  }

  if (m.size() == 0) Fail(ErrorKind::kValidation, path.string() + ": no records");
  return m;
}

void WriteManifest(const std::vector<EvalRecord>& records, const fs::path& path) {
  const fs::path base = fs::absolute(path).parent_path().lexically_normal();
  auto out = OpenForWrite(path);
  out << kScoresHeader << '\n';
  char buf[64];
  for (const auto& r : records) {
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), r.subjective);
    out << CsvField(Relative(r.ref_path, base)) << ',' << CsvField(Relative(r.test_path, base)) << ','
        << std::string_view(buf, std::size_t(end - buf)) << ',' << PolarityName(r.polarity) << ','
        << CsvField(r.group_id.value_or("")) << '\n';
  }
  if (!out) Fail(ErrorKind::kIo, "short write to " + path.string());
}

void WriteVoteManifest(const std::vector<VoteRecord>& votes, const fs::path& path) {
  const fs::path base = fs::absolute(path).parent_path().lexically_normal();
  auto out = OpenForWrite(path);
  out << kVotesHeader << '\n';
  for (const auto& v : votes) {
    out << CsvField(v.group_id) << ',' << CsvField(Relative(v.test_path, base)) << ',' << v.votes << '\n';
  }
  if (!out) Fail(ErrorKind::kIo, "short write to " + path.string());
}

std::vector<EvalRecord> VotesToRecords(const Manifest& manifest) {
  if (manifest.kind == ManifestKind::kScores) return manifest.records;
  std::vector<EvalRecord> out;
  out.reserve(manifest.votes.size());
  for (const auto& v : manifest.votes) {
    EvalRecord r;
    r.ref_path = Resolve(manifest.base_dir, v.group_id);
    r.test_path = v.test_path;
    r.subjective = double(v.votes);
    r.polarity = Polarity::kHigherBetter;
    r.group_id = v.group_id;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace deepssim

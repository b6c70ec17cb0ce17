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

#include "core/adapters.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "core/error.hpp"
#include "core/matfile.hpp"

namespace fs = std::filesystem;

namespace deepssim {
namespace {

struct KindInfo {
  DatasetKind kind;
  std::string_view name;
};

constexpr std::array<KindInfo, 11> kKinds = {{
    {DatasetKind::kLive, "LIVE"},         {DatasetKind::kCsiq, "CSIQ"},
    {DatasetKind::kTid2013, "TID2013"},   {DatasetKind::kKadid10k, "KADID10K"},
    {DatasetKind::kQads, "QADS"},         {DatasetKind::kCviu, "CVIU"},
    {DatasetKind::kSisar, "SISAR"},       {DatasetKind::kCuhk, "CUHK"},
    {DatasetKind::kRetargetMe, "RETARGETME"}, {DatasetKind::kNrid, "NRID"},
    {DatasetKind::kPipal, "PIPAL"},
}};

std::string Lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return char(std::tolower(c)); });
  return out;
}

std::string Upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return char(std::toupper(c)); });
  return out;
}

std::string Trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

double ToDouble(const std::string& text, const fs::path& file) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size() && std::isfinite(v)) return v;
  } catch (const std::exception&) {
  }
  Fail(ErrorKind::kValidation, file.string() + ": bad number '" + text + "'");
}

// Case-insensitive view of one directory's entries.
class DirIndex {
 public:
  explicit DirIndex(fs::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    for (const auto& e : fs::directory_iterator(dir_, ec)) {
      const std::string name = e.path().filename().string();
      by_name_.emplace(Lower(name), name);
      by_stem_.emplace(Lower(e.path().stem().string()), name);
    }
  }

  // Falls back to the literal name when absent; the manifest loader reports it.
  fs::path Find(const std::string& name) const {
    auto it = by_name_.find(Lower(name));
    return dir_ / (it == by_name_.end() ? name : it->second);
  }

  std::optional<fs::path> FindStem(const std::string& stem) const {
    auto it = by_stem_.find(Lower(stem));
    if (it == by_stem_.end()) return std::nullopt;
    return dir_ / it->second;
  }

  std::vector<fs::path> Files() const {
    std::vector<fs::path> out;
    for (const auto& [lower, name] : by_name_) out.push_back(dir_ / name);
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  fs::path dir_;
  std::map<std::string, std::string> by_name_;
  std::map<std::string, std::string> by_stem_;
};

class Layout {
 public:
  Layout(DatasetKind kind, fs::path root) : kind_(kind), root_(std::move(root)) {}

  [[noreturn]] void Unrecognized(const std::string& expected) const {
    Fail(ErrorKind::kValidation, "unrecognized " + DatasetName(kind_) + " layout under " +
                                     root_.string() + ": expected " + expected);
  }

  // Resolves a child of the root case-insensitively, or fails naming it.
  fs::path Require(const std::string& name, bool directory, const std::string& expected) const {
    const fs::path p = DirIndex(root_).Find(name);
    std::error_code ec;
    if (directory ? !fs::is_directory(p, ec) : !fs::is_regular_file(p, ec)) Unrecognized(expected);
    return p;
  }

  std::optional<fs::path> Optional(const std::string& name) const {
    const fs::path p = DirIndex(root_).Find(name);
    std::error_code ec;
    if (fs::exists(p, ec)) return p;
    return std::nullopt;
  }

  const fs::path& root() const { return root_; }
  DatasetKind kind() const { return kind_; }

 private:
  DatasetKind kind_;
  fs::path root_;
};

std::vector<std::string> ReadLines(const fs::path& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorKind::kIo, "cannot read " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (lines.empty() && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (!Trim(line).empty()) lines.push_back(line);
  }
  return lines;
}

std::vector<std::string> Whitespace(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  for (std::string tok; ss >> tok;) out.push_back(tok);
  return out;
}

// Maps named CSV columns onto indices; fails when one is missing.
std::vector<std::size_t> Columns(const Layout& layout, const fs::path& file, const std::string& header,
                                 std::initializer_list<std::string_view> wanted) {
  const auto fields = SplitCsvLine(header);
  std::vector<std::size_t> idx;
  for (auto w : wanted) {
    auto it = std::find_if(fields.begin(), fields.end(),
                           [&](const std::string& f) { return Lower(Trim(f)) == w; });
    if (it == fields.end()) {
      layout.Unrecognized(file.filename().string() + " with a '" + std::string(w) + "' column");
    }
    idx.push_back(std::size_t(it - fields.begin()));
  }
  return idx;
}

EvalRecord Record(fs::path ref, fs::path test, double subjective, DatasetKind kind, std::string group) {
  EvalRecord r;
  r.ref_path = std::move(ref);
  r.test_path = std::move(test);
  r.subjective = subjective;
  r.polarity = DatasetPolarity(kind);
  r.group_id = std::move(group);
  return r;
}

std::vector<EvalRecord> AdaptLive(const Layout& layout) {
  const std::string expected =
      "dmos.mat, refnames_all.mat, refimgs/, jp2k/, jpeg/, wn/, gblur/, fastfading/";
  const auto dmos_file = layout.Require("dmos.mat", false, expected);
  const auto names_file = layout.Require("refnames_all.mat", false, expected);
  const auto refs = DirIndex(layout.Require("refimgs", true, expected));

  auto dmos_vars = mat::ReadMatFile(dmos_file);
  auto name_vars = mat::ReadMatFile(names_file);
  if (!dmos_vars.count("dmos") || !dmos_vars.count("orgs") || !name_vars.count("refnames_all")) {
    layout.Unrecognized("variables dmos, orgs in dmos.mat and refnames_all in refnames_all.mat");
  }
  const auto& dmos = dmos_vars["dmos"].numbers;
  const auto& orgs = dmos_vars["orgs"].numbers;
  const auto& names = name_vars["refnames_all"].cells;

  // Image order inside dmos.mat: the five distortion folders back to back.
  const std::array<std::pair<const char*, int>, 5> folders = {
      {{"jp2k", 227}, {"jpeg", 233}, {"wn", 174}, {"gblur", 174}, {"fastfading", 174}}};
  std::size_t total = 0;
  for (const auto& f : folders) total += std::size_t(f.second);
  if (dmos.size() != total || orgs.size() != total || names.size() != total) {
    layout.Unrecognized(std::to_string(total) + " entries in dmos, orgs and refnames_all");
  }

  std::vector<EvalRecord> out;
  std::size_t i = 0;
  for (const auto& [folder, count] : folders) {
    const DirIndex dir(layout.Require(folder, true, expected));
    for (int k = 1; k <= count; ++k, ++i) {
      if (orgs[i] != 0.0) continue;
      out.push_back(Record(refs.Find(names[i]), dir.Find("img" + std::to_string(k) + ".bmp"), dmos[i],
                           layout.kind(), names[i]));
    }
  }
  return out;
}

std::vector<EvalRecord> AdaptCsiq(const Layout& layout) {
  const std::string expected = "csiq.DMOS.csv (image,dst_idx,dst_type,dst_lev,dmos_std,dmos), src_imgs/, dst_imgs/";
  const auto table = layout.Require("csiq.DMOS.csv", false, expected);
  const DirIndex src(layout.Require("src_imgs", true, expected));
  const fs::path dst_root = layout.Require("dst_imgs", true, expected);
  const DirIndex dst_dirs(dst_root);

  // dst_type label -> (folder, file tag)
  const std::map<std::string, std::pair<std::string, std::string>> types = {
      {"noise", {"awgn", "AWGN"}},        {"awgn", {"awgn", "AWGN"}},
      {"jpeg", {"jpeg", "JPEG"}},         {"jpeg 2000", {"jpeg2000", "jpeg2000"}},
      {"jpeg2000", {"jpeg2000", "jpeg2000"}}, {"1/f noise", {"fnoise", "fnoise"}},
      {"fnoise", {"fnoise", "fnoise"}},   {"blur", {"blur", "BLUR"}},
      {"contrast", {"contrast", "contrast"}}};

  const auto lines = ReadLines(table);
  if (lines.empty()) layout.Unrecognized(expected);
  const auto col = Columns(layout, table, lines[0], {"image", "dst_type", "dst_lev", "dmos"});
  std::map<std::string, DirIndex> dirs;
  std::vector<EvalRecord> out;
  for (std::size_t n = 1; n < lines.size(); ++n) {
    const auto f = SplitCsvLine(lines[n]);
    if (f.size() <= *std::max_element(col.begin(), col.end())) continue;
    const std::string image = Trim(f[col[0]]);
    const auto type = types.find(Lower(Trim(f[col[1]])));
    if (type == types.end()) {
      Fail(ErrorKind::kValidation, table.string() + ": unknown dst_type '" + f[col[1]] + "'");
    }
    const auto& [folder, tag] = type->second;
    auto it = dirs.find(folder);
    if (it == dirs.end()) it = dirs.emplace(folder, DirIndex(dst_dirs.Find(folder))).first;
    const std::string level = Trim(f[col[2]]);
    const fs::path ref = src.FindStem(image).value_or(src.Find(image + ".png"));
    out.push_back(Record(ref, it->second.Find(image + "." + tag + "." + level + ".png"),
                         ToDouble(Trim(f[col[3]]), table), layout.kind(), image));
  }
  return out;
}

std::vector<EvalRecord> AdaptTid2013(const Layout& layout) {
  const std::string expected = "mos_with_names.txt or mos.txt, reference_images/, distorted_images/";
  const DirIndex refs(layout.Require("reference_images", true, expected));
  const DirIndex dist(layout.Require("distorted_images", true, expected));

  std::vector<std::pair<double, std::string>> rows;
  if (auto named = layout.Optional("mos_with_names.txt")) {
    for (const auto& line : ReadLines(*named)) {
      const auto tok = Whitespace(line);
      if (tok.size() != 2) continue;
      rows.emplace_back(ToDouble(tok[0], *named), tok[1]);
    }
  } else if (auto plain = layout.Optional("mos.txt")) {
    // 25 references x 24 distortion types x 5 levels, in that nesting.
    const auto lines = ReadLines(*plain);
    if (lines.size() != 3000) layout.Unrecognized("3000 scores in mos.txt");
    std::size_t n = 0;
    char name[32];
    for (int r = 1; r <= 25; ++r) {
      for (int d = 1; d <= 24; ++d) {
        for (int l = 1; l <= 5; ++l) {
          std::snprintf(name, sizeof(name), "i%02d_%02d_%d.bmp", r, d, l);
          rows.emplace_back(ToDouble(Trim(lines[n++]), *plain), name);
        }
      }
    }
  } else {
    layout.Unrecognized(expected);
  }

  std::vector<EvalRecord> out;
  for (const auto& [mos, name] : rows) {
    const std::string group = Upper(name.substr(0, name.find('_')));
    const fs::path ref = refs.FindStem(group).value_or(refs.Find(group + ".BMP"));
    out.push_back(Record(ref, dist.Find(name), mos, layout.kind(), group));
  }
  return out;
}

std::vector<EvalRecord> AdaptKadid(const Layout& layout) {
  const std::string expected = "dmos.csv (dist_img,ref_img,dmos,var), images/";
  const auto table = layout.Require("dmos.csv", false, expected);
  const DirIndex images(layout.Require("images", true, expected));
  const auto lines = ReadLines(table);
  if (lines.empty()) layout.Unrecognized(expected);
  const auto col = Columns(layout, table, lines[0], {"dist_img", "ref_img", "dmos"});
  std::vector<EvalRecord> out;
  for (std::size_t n = 1; n < lines.size(); ++n) {
    const auto f = SplitCsvLine(lines[n]);
    if (f.size() < 3) continue;
    const std::string ref = Trim(f[col[1]]);
    out.push_back(Record(images.Find(ref), images.Find(Trim(f[col[0]])), ToDouble(Trim(f[col[2]]), table),
                         layout.kind(), ref));
  }
  return out;
}

std::vector<EvalRecord> AdaptQads(const Layout& layout) {
  const std::string expected = "mos_with_names.txt, super-resolved_images/, source_images/";
  const auto table = layout.Require("mos_with_names.txt", false, expected);
  const DirIndex sr(layout.Require("super-resolved_images", true, expected));
  const DirIndex src(layout.Require("source_images", true, expected));
  std::vector<EvalRecord> out;
  for (const auto& line : ReadLines(table)) {
    const auto tok = Whitespace(line);
    if (tok.size() != 2) continue;
    const std::string stem = tok[1].substr(0, tok[1].find('_'));
    const auto ref = src.FindStem(stem);
    if (!ref) layout.Unrecognized("source_images/" + stem + ".* for " + tok[1]);
    out.push_back(Record(*ref, sr.Find(tok[1]), ToDouble(tok[0], table), layout.kind(),
                         ref->filename().string()));
  }
  return out;
}

std::vector<EvalRecord> AdaptPairTable(const Layout& layout) {
  const std::string file = Lower(DatasetName(layout.kind())) + "_mos.csv";
  const auto table = layout.Require(file, false, file + " (image,reference,mos)");
  const auto lines = ReadLines(table);
  if (lines.empty()) layout.Unrecognized(file + " (image,reference,mos)");
  const auto col = Columns(layout, table, lines[0], {"image", "reference", "mos"});
  std::vector<EvalRecord> out;
  for (std::size_t n = 1; n < lines.size(); ++n) {
    const auto f = SplitCsvLine(lines[n]);
    if (f.size() < 3) continue;
    const std::string ref = Trim(f[col[1]]);
    out.push_back(Record(layout.root() / ref, layout.root() / Trim(f[col[0]]),
                         ToDouble(Trim(f[col[2]]), table), layout.kind(), ref));
  }
  return out;
}

std::vector<EvalRecord> AdaptPipal(const Layout& layout) {
  const std::string expected = "Train_Ref/, Train_Dist/, Train_Label/*.txt";
  const DirIndex refs(layout.Require("Train_Ref", true, expected));
  const DirIndex dist(layout.Require("Train_Dist", true, expected));
  const DirIndex labels(layout.Require("Train_Label", true, expected));
  std::vector<EvalRecord> out;
  for (const fs::path& label : labels.Files()) {
    if (Lower(label.extension().string()) != ".txt") continue;
    for (const auto& line : ReadLines(label)) {
      const auto f = SplitCsvLine(line);
      if (f.size() < 2) continue;
      const std::string name = Trim(f[0]);
      const std::string stem = name.substr(0, name.find('_'));
      const fs::path ref = refs.FindStem(stem).value_or(refs.Find(stem + ".bmp"));
      out.push_back(Record(ref, dist.Find(name), ToDouble(Trim(f[1]), label), layout.kind(), stem));
    }
  }
  if (out.empty()) layout.Unrecognized("label lines 'name,score' under Train_Label/");
  return out;
}

std::vector<VoteRecord> AdaptVotes(const Layout& layout, const fs::path& manifest_dir) {
  const std::string file = Lower(DatasetName(layout.kind())) + "_votes.csv";
  const auto table = layout.Require(file, false, file + " (set,image,votes) and one directory per set");
  const auto lines = ReadLines(table);
  if (lines.empty()) layout.Unrecognized(file + " (set,image,votes)");
  const auto col = Columns(layout, table, lines[0], {"set", "image", "votes"});
  std::map<std::string, DirIndex> sets;
  std::vector<VoteRecord> out;
  for (std::size_t n = 1; n < lines.size(); ++n) {
    const auto f = SplitCsvLine(lines[n]);
    if (f.size() < 3) continue;
    const std::string set = Trim(f[col[0]]);
    auto it = sets.find(set);
    if (it == sets.end()) {
      const fs::path dir = layout.Require(set, true, "directory " + set + "/ listed in " + file);
      it = sets.emplace(set, DirIndex(dir)).first;
    }
    const auto source = it->second.FindStem(set);
    if (!source) layout.Unrecognized("source image " + set + "/" + set + ".*");
    VoteRecord v;
    v.group_id = fs::absolute(*source).lexically_normal().lexically_relative(manifest_dir).generic_string();
    v.test_path = it->second.Find(Trim(f[col[1]]));
    const double votes = ToDouble(Trim(f[col[2]]), table);
    if (votes < 0 || votes != std::floor(votes)) {
      Fail(ErrorKind::kValidation, table.string() + ": votes must be a non-negative integer");
    }
    v.votes = long(votes);
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace

std::optional<DatasetKind> ParseDatasetKind(std::string_view name) {
  std::string key = Upper(name);
  std::erase_if(key, [](char c) { return c == '-' || c == '_'; });
  for (const auto& k : kKinds) {
    if (k.name == key) return k.kind;
  }
  return std::nullopt;
}

std::string DatasetName(DatasetKind kind) {
  for (const auto& k : kKinds) {
    if (k.kind == kind) return std::string(k.name);
  }
  return "UNKNOWN";
}

Polarity DatasetPolarity(DatasetKind kind) {
  switch (kind) {
    case DatasetKind::kLive:
    case DatasetKind::kCsiq:
      return Polarity::kLowerBetter;
    // KADID-10k's dmos column grows with quality.
    case DatasetKind::kKadid10k:
    default:
      return Polarity::kHigherBetter;
  }
}

AdaptResult AdaptDataset(DatasetKind kind, const fs::path& root, const fs::path& out) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) Fail(ErrorKind::kIo, "dataset root " + root.string() + " is not a directory");
  const Layout layout(kind, root);

  AdaptResult result;
  std::vector<EvalRecord> records;
  switch (kind) {
    case DatasetKind::kLive: records = AdaptLive(layout); break;
    case DatasetKind::kCsiq: records = AdaptCsiq(layout); break;
    case DatasetKind::kTid2013: records = AdaptTid2013(layout); break;
    case DatasetKind::kKadid10k: records = AdaptKadid(layout); break;
    case DatasetKind::kQads: records = AdaptQads(layout); break;
    case DatasetKind::kCviu:
    case DatasetKind::kSisar:
    case DatasetKind::kCuhk: records = AdaptPairTable(layout); break;
    case DatasetKind::kPipal: records = AdaptPipal(layout); break;
    case DatasetKind::kRetargetMe:
    case DatasetKind::kNrid: {
      const auto votes = AdaptVotes(layout, fs::absolute(out).parent_path().lexically_normal());
      if (votes.empty()) layout.Unrecognized("at least one vote row");
      std::set<std::string> groups;
      for (const auto& v : votes) groups.insert(v.group_id);
      WriteVoteManifest(votes, out);
      result.kind = ManifestKind::kVotes;
      result.rows = votes.size();
      result.groups = groups.size();
      return result;
    }
  }
  if (records.empty()) layout.Unrecognized("at least one scored image");
  std::set<std::string> groups;
  for (const auto& r : records) groups.insert(r.group_id.value_or(""));
  WriteManifest(records, out);
  result.rows = records.size();
  result.groups = groups.size();
  return result;
}

}  // namespace deepssim

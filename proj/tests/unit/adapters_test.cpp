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

#include <fstream>
#include <set>

#include <gtest/gtest.h>

#include "core/adapters.hpp"
#include "core/error.hpp"
#include "core/manifest.hpp"
#include "core/matfile.hpp"
#include "test_common.hpp"

namespace deepssim {
namespace {

namespace fs = std::filesystem;
using testing::TempDir;

const fs::path kDataDir = DEEPSSIM_TEST_DATA_DIR;

void WriteText(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream(p) << text;
}

void Touch(const fs::path& p) { WriteText(p, ""); }

std::vector<std::vector<std::string>> ReadCsv(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::vector<std::string>> rows;
  for (std::string line; std::getline(in, line);) rows.push_back(SplitCsvLine(line));
  return rows;
}

std::string ExpectLayoutError(DatasetKind kind, const fs::path& root, const fs::path& out) {
  try {
    AdaptDataset(kind, root, out);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kValidation);
    return e.what();
  }
  ADD_FAILURE() << "no error";
  return {};
}

TEST(DatasetKind, ParsesNamesLoosely) {
  EXPECT_EQ(ParseDatasetKind("kadid-10k"), DatasetKind::kKadid10k);
  EXPECT_EQ(ParseDatasetKind("RetargetMe"), DatasetKind::kRetargetMe);
  EXPECT_EQ(ParseDatasetKind("tid_2013"), DatasetKind::kTid2013);
  EXPECT_FALSE(ParseDatasetKind("imagenet").has_value());
  EXPECT_EQ(DatasetName(DatasetKind::kQads), "QADS");
}

TEST(DatasetKind, PolarityFollowsScoreSemantics) {
  EXPECT_EQ(DatasetPolarity(DatasetKind::kLive), Polarity::kLowerBetter);
  EXPECT_EQ(DatasetPolarity(DatasetKind::kCsiq), Polarity::kLowerBetter);
  EXPECT_EQ(DatasetPolarity(DatasetKind::kTid2013), Polarity::kHigherBetter);
  EXPECT_EQ(DatasetPolarity(DatasetKind::kCuhk), Polarity::kHigherBetter);
}

TEST(MatFile, ReadsNumericLogicalAndCharVariables) {
  auto vars = mat::ReadMatFile(kDataDir / "live_mat/mixed.mat");
  ASSERT_TRUE(vars.count("matrix"));
  EXPECT_EQ(vars["matrix"].dims, (std::vector<int>{2, 3}));
  // Column-major storage.
  EXPECT_EQ(vars["matrix"].numbers, (std::vector<double>{1.5, 4.0, -2.0, 5.0, 3.0, 6.25}));
  EXPECT_EQ(vars["ints"].numbers, (std::vector<double>{7, 8, 9}));
  EXPECT_EQ(vars["flag"].numbers, (std::vector<double>{1, 0}));
  EXPECT_EQ(vars["label"].text, "hello");
}

TEST(MatFile, RejectsNonMatInput) {
  TempDir dir;
  WriteText(dir / "x.mat", "not a mat file at all");
  EXPECT_THROW(mat::ReadMatFile(dir / "x.mat"), Error);
  EXPECT_THROW(mat::ReadMatFile(dir / "missing.mat"), Error);
}

TEST(Adapters, LiveFromMatFiles) {
  TempDir dir;
  const fs::path root = dir / "live";
  fs::create_directories(root);
  fs::copy_file(kDataDir / "live_mat/dmos.mat", root / "dmos.mat");
  fs::copy_file(kDataDir / "live_mat/refnames_all.mat", root / "refnames_all.mat");
  for (const char* d : {"refimgs", "jp2k", "jpeg", "wn", "gblur", "fastfading"}) fs::create_directories(root / d);
  Touch(root / "refimgs/ref03.bmp");

  const auto result = AdaptDataset(DatasetKind::kLive, root, dir / "live.csv");
  // 982 entries, every sixth one is a pristine copy.
  EXPECT_EQ(result.rows, 982u - 982u / 6);
  EXPECT_EQ(result.groups, 29u);
  const auto rows = ReadCsv(dir / "live.csv");
  ASSERT_EQ(rows.size(), result.rows + 1);
  EXPECT_EQ(rows[1], (std::vector<std::string>{"live/refimgs/ref00.bmp", "live/jp2k/img1.bmp", "0",
                                               "LowerBetter", "ref00.bmp"}));
  // Index 228 is the second JPEG entry: dmos 228 * 0.125. Index 227 is pristine.
  bool found = false;
  for (const auto& r : rows) {
    EXPECT_NE(r[1], "live/jpeg/img1.bmp");
    if (r[1] == "live/jpeg/img2.bmp") {
      EXPECT_EQ(r[2], "28.5");
      EXPECT_EQ(r[0], "live/refimgs/ref25.bmp");
      found = true;
    }
  }
  EXPECT_TRUE(found);
}

TEST(Adapters, Tid2013CanonicalOrderGives3000Rows) {
  TempDir dir;
  const fs::path root = dir / "tid";
  fs::create_directories(root / "reference_images");
  fs::create_directories(root / "distorted_images");
  std::string mos;
  for (int i = 0; i < 3000; ++i) mos += std::to_string(i % 9) + ".5\n";
  WriteText(root / "mos.txt", mos);
  const auto result = AdaptDataset(DatasetKind::kTid2013, root, dir / "tid.csv");
  EXPECT_EQ(result.rows, 3000u);
  EXPECT_EQ(result.groups, 25u);
  const auto rows = ReadCsv(dir / "tid.csv");
  EXPECT_EQ(rows[1][1], "tid/distorted_images/i01_01_1.bmp");
  EXPECT_EQ(rows[1][0], "tid/reference_images/I01.BMP");
  EXPECT_EQ(rows[3000][1], "tid/distorted_images/i25_24_5.bmp");
  EXPECT_EQ(rows[3000][3], "HigherBetter");
}

TEST(Adapters, Tid2013NamedScoresResolveCaseInsensitively) {
  TempDir dir;
  const fs::path root = dir / "tid";
  Touch(root / "reference_images/i07.bmp");
  Touch(root / "distorted_images/I07_03_2.BMP");
  WriteText(root / "MOS_WITH_NAMES.TXT", "5.1 i07_03_2.bmp\n");
  EXPECT_EQ(AdaptDataset(DatasetKind::kTid2013, root, dir / "t.csv").rows, 1u);
  const auto rows = ReadCsv(dir / "t.csv");
  EXPECT_EQ(rows[1][0], "tid/reference_images/i07.bmp");
  EXPECT_EQ(rows[1][1], "tid/distorted_images/I07_03_2.BMP");
}

TEST(Adapters, Kadid10kGives10125Rows) {
  TempDir dir;
  const fs::path root = dir / "kadid";
  fs::create_directories(root / "images");
  std::string csv = "dist_img,ref_img,dmos,var\n";
  for (int r = 1; r <= 81; ++r) {
    for (int d = 1; d <= 25; ++d) {
      for (int l = 1; l <= 5; ++l) {
        char line[96];
        std::snprintf(line, sizeof(line), "I%02d_%02d_%02d.png,I%02d.png,%.2f,0.1\n", r, d, l, r, 5.0 - l * 0.7);
        csv += line;
      }
    }
  }
  WriteText(root / "dmos.csv", csv);
  const auto result = AdaptDataset(DatasetKind::kKadid10k, root, dir / "k.csv");
  EXPECT_EQ(result.rows, 10125u);
  EXPECT_EQ(result.groups, 81u);
}

TEST(Adapters, CsiqExportedSheet) {
  TempDir dir;
  const fs::path root = dir / "csiq";
  Touch(root / "src_imgs/1600.png");
  Touch(root / "dst_imgs/awgn/1600.AWGN.1.png");
  Touch(root / "dst_imgs/jpeg2000/1600.jpeg2000.3.png");
  WriteText(root / "csiq.DMOS.csv",
            "image,dst_idx,dst_type,dst_lev,dmos_std,dmos\n"
            "1600,1,noise,1,0.01,0.06\n"
            "1600,3,jpeg 2000,3,0.02,0.3\n");
  EXPECT_EQ(AdaptDataset(DatasetKind::kCsiq, root, dir / "c.csv").rows, 2u);
  const auto rows = ReadCsv(dir / "c.csv");
  EXPECT_EQ(rows[1], (std::vector<std::string>{"csiq/src_imgs/1600.png", "csiq/dst_imgs/awgn/1600.AWGN.1.png",
                                               "0.06", "LowerBetter", "1600"}));
  EXPECT_EQ(rows[2][1], "csiq/dst_imgs/jpeg2000/1600.jpeg2000.3.png");
}

TEST(Adapters, QadsMatchesSourceByPrefix) {
  TempDir dir;
  const fs::path root = dir / "qads";
  Touch(root / "source_images/img0001.bmp");
  Touch(root / "super-resolved_images/img0001_a01_x2.bmp");
  WriteText(root / "mos_with_names.txt", "0.71 img0001_a01_x2.bmp\n");
  EXPECT_EQ(AdaptDataset(DatasetKind::kQads, root, dir / "q.csv").rows, 1u);
  EXPECT_EQ(ReadCsv(dir / "q.csv")[1][0], "qads/source_images/img0001.bmp");
}

TEST(Adapters, PairTableDatasets) {
  TempDir dir;
  for (auto kind : {DatasetKind::kCviu, DatasetKind::kSisar, DatasetKind::kCuhk}) {
    const std::string name = DatasetName(kind);
    std::string lower = name;
    std::transform(lower.begin(), lower.end(), lower.begin(), ::tolower);
    const fs::path root = dir / name;
    WriteText(root / (lower + "_mos.csv"), "image,reference,mos\nsr/a.png,ref/a.png,3.5\nsr/b.png,ref/a.png,2\n");
    const auto result = AdaptDataset(kind, root, dir / (lower + ".csv"));
    EXPECT_EQ(result.rows, 2u) << name;
    EXPECT_EQ(result.groups, 1u) << name;
  }
}

TEST(Adapters, PipalLabelFiles) {
  TempDir dir;
  const fs::path root = dir / "pipal";
  Touch(root / "Train_Ref/A0001.bmp");
  fs::create_directories(root / "Train_Dist");
  WriteText(root / "Train_Label/A0001.txt", "A0001_00_00.bmp,1500.5\nA0001_01_00.bmp,1320\n");
  EXPECT_EQ(AdaptDataset(DatasetKind::kPipal, root, dir / "p.csv").rows, 2u);
  EXPECT_EQ(ReadCsv(dir / "p.csv")[1][0], "pipal/Train_Ref/A0001.bmp");
}

TEST(Adapters, RetargetMeVotesGive296RowsIn37Groups) {
  TempDir dir;
  const fs::path root = dir / "retargetme";
  std::string csv = "set,image,votes\n";
  const char* ops[] = {"cr", "lg", "mop", "qp", "scl", "sm", "sv", "sns"};
  for (int s = 0; s < 37; ++s) {
    const std::string set = "set" + std::to_string(s);
    Touch(root / set / (set + ".png"));
    for (int o = 0; o < 8; ++o) csv += set + "," + set + "_" + ops[o] + ".png," + std::to_string((s + o) % 11) + "\n";
  }
  WriteText(root / "retargetme_votes.csv", csv);
  const auto result = AdaptDataset(DatasetKind::kRetargetMe, root, dir / "r.csv");
  EXPECT_EQ(result.kind, ManifestKind::kVotes);
  EXPECT_EQ(result.rows, 296u);
  EXPECT_EQ(result.groups, 37u);
  const auto rows = ReadCsv(dir / "r.csv");
  EXPECT_EQ(rows[0], (std::vector<std::string>{"group_id", "test_path", "votes"}));
  EXPECT_EQ(rows[1], (std::vector<std::string>{"retargetme/set0/set0.png", "retargetme/set0/set0_cr.png", "0"}));
}

TEST(Adapters, AdaptedManifestLoadsWhenImagesExist) {
  TempDir dir;
  const fs::path root = dir / "nrid";
  std::string csv = "set,image,votes\n";
  for (int s = 0; s < 2; ++s) {
    const std::string set = "s" + std::to_string(s);
    fs::create_directories(root / set);
    SaveImage(testing::RandomImage(8, 8, s), root / set / (set + ".png"));
    for (int o = 0; o < 3; ++o) {
      const std::string img = set + "_" + std::to_string(o) + ".png";
      SaveImage(testing::RandomImage(8, 8, 10 * s + o), root / set / img);
      csv += set + "," + img + "," + std::to_string(o) + "\n";
    }
  }
  WriteText(root / "nrid_votes.csv", csv);
  fs::create_directories(dir / "out");
  AdaptDataset(DatasetKind::kNrid, root, dir / "out/n.csv");
  const Manifest m = LoadManifest(dir / "out/n.csv");
  EXPECT_EQ(m.votes.size(), 6u);
  EXPECT_EQ(m.skipped, 0u);
  const auto records = VotesToRecords(m);
  EXPECT_EQ(records[0].ref_path, (root / "s0/s0.png").lexically_normal());
}

TEST(Adapters, UnrecognizedLayoutNamesExpectedFiles) {
  TempDir dir;
  fs::create_directories(dir / "empty");
  std::string msg = ExpectLayoutError(DatasetKind::kLive, dir / "empty", dir / "o.csv");
  EXPECT_NE(msg.find("unrecognized LIVE layout"), std::string::npos) << msg;
  EXPECT_NE(msg.find("dmos.mat"), std::string::npos) << msg;
  msg = ExpectLayoutError(DatasetKind::kKadid10k, dir / "empty", dir / "o.csv");
  EXPECT_NE(msg.find("dmos.csv"), std::string::npos) << msg;
  msg = ExpectLayoutError(DatasetKind::kRetargetMe, dir / "empty", dir / "o.csv");
  EXPECT_NE(msg.find("retargetme_votes.csv"), std::string::npos) << msg;
  try {
    AdaptDataset(DatasetKind::kCsiq, dir / "nowhere", dir / "o.csv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kIo);
  }
}

TEST(Adapters, MissingCsvColumnIsReported) {
  TempDir dir;
  const fs::path root = dir / "kadid";
  fs::create_directories(root / "images");
  WriteText(root / "dmos.csv", "distorted,reference,score\na,b,1\n");
  const auto msg = ExpectLayoutError(DatasetKind::kKadid10k, root, dir / "o.csv");
  EXPECT_NE(msg.find("dist_img"), std::string::npos) << msg;
}

}  // namespace
}  // namespace deepssim

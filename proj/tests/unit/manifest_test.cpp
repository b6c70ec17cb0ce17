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
#include <random>

#include <gtest/gtest.h>

#include "core/error.hpp"
#include "core/manifest.hpp"
#include "test_common.hpp"

namespace deepssim {
namespace {

namespace fs = std::filesystem;
using testing::TempDir;

void WriteText(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream(p) << text;
}

void WriteTinyPng(const fs::path& p, int seed = 0) {
  fs::create_directories(p.parent_path());
  SaveImage(testing::RandomImage(8, 8, seed), p);
}

class WarningCapture {
 public:
  WarningCapture() { SetWarningSink(&WarningCapture::Sink, this); }
  ~WarningCapture() { SetWarningSink(nullptr, nullptr); }
  const std::vector<std::string>& messages() const { return messages_; }

 private:
  static void Sink(const std::string& msg, void* self) { static_cast<WarningCapture*>(self)->messages_.push_back(msg); }
  std::vector<std::string> messages_;
};

TEST(Manifest, LoadsScoreRowsWithRelativePaths) {
  TempDir dir;
  WriteTinyPng(dir / "ref/a.png");
  WriteTinyPng(dir / "dist/a1.png", 1);
  WriteTinyPng(dir / "dist/a2.png", 2);
  WriteTinyPng(dir / "dist/a3.png", 3);
  WriteText(dir / "m.csv",
            "ref_path,test_path,subjective,polarity,group_id\n"
            "ref/a.png,dist/a1.png,1.5,LowerBetter,\n"
            "ref/a.png,dist/a2.png,2.25,LowerBetter,g1\n"
            "ref/a.png,\"dist/a3.png\",3,HigherBetter,\n");
  const Manifest m = LoadManifest(dir / "m.csv");
  ASSERT_EQ(m.kind, ManifestKind::kScores);
  ASSERT_EQ(m.records.size(), 3u);
  EXPECT_EQ(m.skipped, 0u);
  EXPECT_EQ(m.records[0].ref_path, (dir / "ref/a.png").lexically_normal());
  EXPECT_EQ(m.records[1].subjective, 2.25);
  EXPECT_EQ(m.records[1].group_id, std::optional<std::string>("g1"));
  EXPECT_FALSE(m.records[0].group_id.has_value());
  EXPECT_EQ(m.records[0].polarity, Polarity::kLowerBetter);
  EXPECT_EQ(m.records[2].polarity, Polarity::kHigherBetter);
}

TEST(Manifest, MissingImageRowIsSkippedWithWarning) {
  TempDir dir;
  WriteTinyPng(dir / "r.png");
  WriteTinyPng(dir / "t1.png", 1);
  WriteTinyPng(dir / "t3.png", 3);
  WriteText(dir / "m.csv",
            "ref_path,test_path,subjective,polarity,group_id\n"
            "r.png,t1.png,1,HigherBetter,\n"
            "r.png,t2.png,2,HigherBetter,\n"
            "r.png,t3.png,3,HigherBetter,\n");
  WarningCapture warnings;
  const Manifest m = LoadManifest(dir / "m.csv");
  EXPECT_EQ(m.records.size(), 2u);
  EXPECT_EQ(m.skipped, 1u);
  ASSERT_EQ(warnings.messages().size(), 1u);
  EXPECT_NE(warnings.messages()[0].find("m.csv:3"), std::string::npos) << warnings.messages()[0];
}

TEST(Manifest, NonImageFileCountsAsUnreadable) {
  TempDir dir;
  WriteTinyPng(dir / "r.png");
  WriteTinyPng(dir / "t.png");
  WriteText(dir / "notes.png", "this is not an image");
  WriteText(dir / "m.csv",
            "ref_path,test_path,subjective,polarity,group_id\n"
            "r.png,t.png,1,HigherBetter,\n"
            "r.png,notes.png,1,HigherBetter,\n");
  WarningCapture warnings;
  EXPECT_EQ(LoadManifest(dir / "m.csv").skipped, 1u);
}

TEST(Manifest, EmptyManifestIsRejected) {
  TempDir dir;
  WriteText(dir / "empty.csv", "ref_path,test_path,subjective,polarity,group_id\n");
  try {
    LoadManifest(dir / "empty.csv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kValidation);
    EXPECT_NE(std::string(e.what()).find("no records"), std::string::npos);
  }
  WriteText(dir / "blank.csv", "");
  EXPECT_THROW(LoadManifest(dir / "blank.csv"), Error);
}

TEST(Manifest, MalformedInputIsRejected) {
  TempDir dir;
  WriteTinyPng(dir / "r.png");
  WriteText(dir / "hdr.csv", "ref,test,score\nr.png,r.png,1\n");
  EXPECT_THROW(LoadManifest(dir / "hdr.csv"), Error);
  WriteText(dir / "num.csv", "ref_path,test_path,subjective,polarity,group_id\nr.png,r.png,abc,HigherBetter,\n");
  EXPECT_THROW(LoadManifest(dir / "num.csv"), Error);
  WriteText(dir / "pol.csv", "ref_path,test_path,subjective,polarity,group_id\nr.png,r.png,1,Sideways,\n");
  EXPECT_THROW(LoadManifest(dir / "pol.csv"), Error);
  WriteText(dir / "cols.csv", "ref_path,test_path,subjective,polarity,group_id\nr.png,r.png,1\n");
  EXPECT_THROW(LoadManifest(dir / "cols.csv"), Error);
  try {
    LoadManifest(dir / "absent.csv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kIo);
  }
}

TEST(Manifest, VoteRowsGroupAndDropSingletons) {
  TempDir dir;
  WriteTinyPng(dir / "s1/s1.png");
  WriteTinyPng(dir / "s1/op_a.png", 1);
  WriteTinyPng(dir / "s1/op_b.png", 2);
  WriteTinyPng(dir / "s2/s2.png");
  WriteTinyPng(dir / "s2/op_a.png", 3);
  WriteText(dir / "v.csv",
            "group_id,test_path,votes\n"
            "s1/s1.png,s1/op_a.png,7\n"
            "s1/s1.png,s1/op_b.png,2\n"
            "s2/s2.png,s2/op_a.png,4\n");
  WarningCapture warnings;
  const Manifest m = LoadManifest(dir / "v.csv");
  ASSERT_EQ(m.kind, ManifestKind::kVotes);
  ASSERT_EQ(m.votes.size(), 2u);
  EXPECT_EQ(m.skipped, 1u);
  const auto records = VotesToRecords(m);
  ASSERT_EQ(records.size(), 2u);
  EXPECT_EQ(records[0].ref_path, (dir / "s1/s1.png").lexically_normal());
  EXPECT_EQ(records[0].subjective, 7.0);
  EXPECT_EQ(records[1].group_id, std::optional<std::string>("s1/s1.png"));
}

TEST(Manifest, NegativeVotesAreRejected) {
  TempDir dir;
  WriteText(dir / "v.csv", "group_id,test_path,votes\na.png,b.png,-1\n");
  EXPECT_THROW(LoadManifest(dir / "v.csv"), Error);
}

TEST(Manifest, WriteThenLoadRoundTripsRandomRecords) {
  TempDir dir;
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-100.0, 100.0);
  std::vector<EvalRecord> records;
  for (int i = 0; i < 25; ++i) {
    const fs::path ref = dir / ("ref " + std::to_string(i % 3) + ".png");
    const fs::path test = dir / "sub,dir" / ("t\"" + std::to_string(i) + ".png");
    if (!fs::exists(ref)) WriteTinyPng(ref, i);
    WriteTinyPng(test, 100 + i);
    EvalRecord r;
    r.ref_path = ref;
    r.test_path = test;
    r.subjective = u(rng);
    r.polarity = i % 2 ? Polarity::kLowerBetter : Polarity::kHigherBetter;
    if (i % 3 == 0) r.group_id = "group," + std::to_string(i);
    records.push_back(r);
  }
  fs::create_directories(dir / "out");
  WriteManifest(records, dir / "out/m.csv");
  const Manifest m = LoadManifest(dir / "out/m.csv");
  EXPECT_EQ(m.records, records);

  std::ifstream in(dir / "out/m.csv");
  std::string header, first;
  std::getline(in, header);
  std::getline(in, first);
  EXPECT_EQ(header, kScoresHeader);
  EXPECT_EQ(first.rfind("\"../ref 0.png\"", 0), std::string::npos);  // spaces need no quoting
  EXPECT_EQ(first.rfind("../ref 0.png,", 0), 0u) << first;
}

TEST(Manifest, VoteManifestRoundTrips) {
  TempDir dir;
  std::vector<VoteRecord> votes;
  WriteTinyPng(dir / "g/g.png");
  for (int i = 0; i < 4; ++i) {
    WriteTinyPng(dir / "g" / ("o" + std::to_string(i) + ".png"), i);
    votes.push_back({"g/g.png", dir / "g" / ("o" + std::to_string(i) + ".png"), i * 3});
  }
  WriteVoteManifest(votes, dir / "v.csv");
  EXPECT_EQ(LoadManifest(dir / "v.csv").votes, votes);
}

TEST(Manifest, CsvFieldQuotesOnlyWhenNeeded) {
  EXPECT_EQ(CsvField("plain"), "plain");
  EXPECT_EQ(CsvField("a,b"), "\"a,b\"");
  EXPECT_EQ(CsvField("say \"hi\""), "\"say \"\"hi\"\"\"");
  const auto f = SplitCsvLine("x,\"a,b\",\"q\"\"q\",");
  ASSERT_EQ(f.size(), 4u);
  EXPECT_EQ(f[1], "a,b");
  EXPECT_EQ(f[2], "q\"q");
  EXPECT_EQ(f[3], "");
}

TEST(Manifest, PolarityAliases) {
  EXPECT_EQ(ParsePolarity("DMOS"), Polarity::kLowerBetter);
  EXPECT_EQ(ParsePolarity(" higherbetter "), Polarity::kHigherBetter);
  EXPECT_EQ(PolarityName(Polarity::kLowerBetter), "LowerBetter");
}

}  // namespace
}  // namespace deepssim

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

#include "core/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <opencv2/imgproc.hpp>

#include "core/backbone.hpp"
#include "core/error.hpp"
#include "core/manifest.hpp"
#include "json.hpp"

namespace deepssim {
namespace {

std::string Number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

double ParseNumber(const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size() && std::isfinite(v)) return v;
  } catch (const std::exception&) {
  }
  Fail(ErrorKind::kInvalidArgument, "bad grid value '" + text + "'");
}

std::vector<std::string> Split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

void CheckRange(const Transform& t) {
  bool ok = true;
  switch (t.kind) {
    case Transform::Kind::kRotate: ok = std::abs(t.a) <= kMaxRotationDeg; break;
    case Transform::Kind::kTranslate:
      ok = std::abs(t.a) <= kMaxTranslationPx && std::abs(t.b) <= kMaxTranslationPx;
      break;
    case Transform::Kind::kScale: ok = t.a >= kMinScale && t.a <= kMaxScale; break;
    case Transform::Kind::kShear: ok = std::abs(t.a) <= kMaxShear; break;
  }
  if (!ok) Fail(ErrorKind::kInvalidArgument, t.Name() + " parameter " + t.Param() + " outside bench range");
}

}  // namespace

bool Transform::IsIdentity() const {
  switch (kind) {
    case Kind::kRotate: return a == 0.0;
    case Kind::kTranslate: return a == 0.0 && b == 0.0;
    case Kind::kScale: return a == 1.0;
    case Kind::kShear: return a == 0.0;
  }
  return false;
}

std::string Transform::Name() const {
  switch (kind) {
    case Kind::kRotate: return "rotate";
    case Kind::kTranslate: return "translate";
    case Kind::kScale: return "scale";
    case Kind::kShear: return "shear";
  }
  return "?";
}

std::string Transform::Param() const {
  if (kind == Kind::kTranslate) return Number(a) + ":" + Number(b);
  return Number(a);
}

Image ApplyTransform(const Image& image, const Transform& t) {
  ValidateImage(image);
  if (t.IsIdentity()) return image;

  const cv::Mat src = ImageToMat(image);
  cv::Mat dst;
  const int w = image.width;
  const int h = image.height;
  switch (t.kind) {
    case Transform::Kind::kRotate: {
      const cv::Mat m = cv::getRotationMatrix2D(cv::Point2f(0.5f * (w - 1), 0.5f * (h - 1)), t.a, 1.0);
      cv::warpAffine(src, dst, m, src.size(), cv::INTER_LINEAR, cv::BORDER_REPLICATE);
      break;
    }
    case Transform::Kind::kTranslate: {
      const cv::Mat m = (cv::Mat_<double>(2, 3) << 1, 0, t.a, 0, 1, t.b);
      cv::warpAffine(src, dst, m, src.size(), cv::INTER_LINEAR, cv::BORDER_REPLICATE);
      break;
    }
    case Transform::Kind::kScale: {
      const int nw = int(std::lround(w * t.a));
      const int nh = int(std::lround(h * t.a));
      if (nw < kMinImageSide || nh < kMinImageSide) {
        Fail(ErrorKind::kValidation, "scale " + Number(t.a) + " shrinks " + std::to_string(w) + "x" +
                                         std::to_string(h) + " below the minimum image side");
      }
      cv::resize(src, dst, cv::Size(nw, nh), 0, 0, cv::INTER_LINEAR);
      break;
    }
    case Transform::Kind::kShear: {
      // x' = x + f * y, shifted so the sheared image starts at column 0.
      const double extent = std::abs(t.a) * (h - 1);
      const int nw = w + int(std::ceil(extent));
      const double shift = t.a < 0 ? extent : 0.0;
      const cv::Mat m = (cv::Mat_<double>(2, 3) << 1, t.a, shift, 0, 1, 0);
      cv::warpAffine(src, dst, m, cv::Size(nw, h), cv::INTER_LINEAR, cv::BORDER_REPLICATE);
      break;
    }
  }
  Image out = ImageFromMat(dst);
  ValidateImage(out, kMinImageSide);
  return out;
}

std::vector<Transform> ParseGrid(std::string_view text) {
  std::vector<Transform> grid;
  for (const std::string& item : Split(text, ';')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) Fail(ErrorKind::kInvalidArgument, "grid item '" + item + "' lacks '='");
    const std::string name = item.substr(0, eq);
    const std::string spec = item.substr(eq + 1);

    std::vector<double> values;
    const auto range = Split(spec, ':');
    if (range.size() == 3) {
      const double start = ParseNumber(range[0]);
      const double stop = ParseNumber(range[1]);
      const double step = ParseNumber(range[2]);
      if (!(step > 0.0) || stop < start) {
        Fail(ErrorKind::kInvalidArgument, "grid range '" + spec + "' needs step > 0 and stop >= start");
      }
      const long count = long(std::floor((stop - start) / step + 1e-9)) + 1;
      for (long i = 0; i < count; ++i) values.push_back(start + double(i) * step);
    } else if (range.size() == 1) {
      for (const std::string& v : Split(spec, ',')) values.push_back(ParseNumber(v));
    } else {
      Fail(ErrorKind::kInvalidArgument, "grid item '" + item + "' is neither a range nor a list");
    }

    for (double v : values) {
      Transform t;
      if (name == "rotate") {
        t = Transform::Rotate(v);
      } else if (name == "translate" || name == "translate_x") {
        t = Transform::Translate(v, 0.0);
      } else if (name == "translate_y") {
        t = Transform::Translate(0.0, v);
      } else if (name == "scale") {
        t = Transform::Scale(v);
      } else if (name == "shear") {
        t = Transform::Shear(v);
      } else {
        Fail(ErrorKind::kInvalidArgument, "unknown transform '" + name + "'");
      }
      CheckRange(t);
      grid.push_back(t);
    }
  }
  if (grid.empty()) Fail(ErrorKind::kInvalidArgument, "empty transform grid");
  return grid;
}

BenchResult RobustnessBench(const std::vector<NamedImage>& images, const DeepSsim& scorer,
                            const std::vector<Transform>& grid, bool skip_invalid) {
  BenchResult result;
  for (const NamedImage& item : images) {
    GramMatrix reference;
    try {
      reference = scorer.Represent(item.image);
    } catch (const Error& e) {
      if (!skip_invalid || e.kind() != ErrorKind::kValidation) throw;
      result.skipped.push_back(item.name + ": " + e.what());
      continue;
    }
    for (const Transform& t : grid) {
      Image moved;
      try {
        moved = ApplyTransform(item.image, t);
      } catch (const Error& e) {
        if (!skip_invalid || e.kind() != ErrorKind::kValidation) throw;
        result.skipped.push_back(item.name + " " + t.Name() + "(" + t.Param() + "): " + e.what());
        continue;
      }
      result.cases.push_back({item.name, t, scorer.Compare(reference, scorer.Represent(moved))});
    }
  }
  return result;
}

std::string BenchCsv(const std::vector<RobustnessCase>& cases) {
  std::ostringstream out;
  out << "image,transform,param,score\n";
  char score[32];
  for (const auto& c : cases) {
    std::snprintf(score, sizeof(score), "%.6f", c.score);
    out << CsvField(c.image) << ',' << c.transform.Name() << ',' << c.transform.Param() << ',' << score << '\n';
  }
  return out.str();
}

std::string BenchJson(const std::vector<RobustnessCase>& cases) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& c : cases) {
    rows.push_back({{"image", c.image},
                    {"transform", c.transform.Name()},
                    {"param", c.transform.Param()},
                    {"score", c.score}});
  }
  return rows.dump(2);
}

}  // namespace deepssim

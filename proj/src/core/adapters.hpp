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

#ifndef DEEPSSIM_CORE_ADAPTERS_HPP_
#define DEEPSSIM_CORE_ADAPTERS_HPP_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "core/manifest.hpp"

namespace deepssim {

// Assumed on-disk layouts (file names are matched case-insensitively):
//
//   LIVE        dmos.mat {dmos, orgs}, refnames_all.mat {refnames_all},
//               jp2k/ jpeg/ wn/ gblur/ fastfading/ (img<k>.bmp), refimgs/
//   CSIQ        csiq.DMOS.csv (the "all_by_image" sheet exported as CSV:
//               image,dst_idx,dst_type,dst_lev,dmos_std,dmos), src_imgs/,
//               dst_imgs/<type>/<image>.<TYPE>.<level>.png
//   TID2013     mos_with_names.txt (or mos.txt in canonical order),
//               reference_images/I<rr>.BMP, distorted_images/i<rr>_<dd>_<l>.bmp
//   KADID10K    dmos.csv (dist_img,ref_img,dmos,var), images/
//   QADS        mos_with_names.txt, super-resolved_images/, source_images/
//               (reference = source image whose stem is the name prefix
//               before the first '_')
//   CVIU, SISAR, CUHK
//               <kind>_mos.csv (image,reference,mos), paths relative to root
//   RETARGETME, NRID
//               <kind>_votes.csv (set,image,votes); set directory <set>/
//               holds the source image <set>.<ext> and the retargeted images
//   PIPAL       Train_Ref/, Train_Dist/, Train_Label/*.txt (name,score)
enum class DatasetKind {
  kLive, kCsiq, kTid2013, kKadid10k, kQads, kCviu, kSisar, kCuhk, kRetargetMe, kNrid, kPipal,
};

std::optional<DatasetKind> ParseDatasetKind(std::string_view name);
std::string DatasetName(DatasetKind kind);

// Judgement polarity used when emitting records for `kind`.
Polarity DatasetPolarity(DatasetKind kind);

struct AdaptResult {
  ManifestKind kind = ManifestKind::kScores;
  std::size_t rows = 0;
  std::size_t groups = 0;
};

// Reads a dataset in its published layout and writes the generic manifest to
// `out`. Unrecognized layouts throw kValidation naming the files expected.
AdaptResult AdaptDataset(DatasetKind kind, const std::filesystem::path& root,
                         const std::filesystem::path& out);

}  // namespace deepssim

#endif  // DEEPSSIM_CORE_ADAPTERS_HPP_

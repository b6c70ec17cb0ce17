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

// Writes a VGG16-shaped weight container with seeded He-normal kernels, for
// trying the CLI without an exported checkpoint.

#include <cstdint>
#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "deepssim/deepssim.h"

int main(int argc, char** argv) {
  CLI::App app{"Write a VGG16-shaped weight container with seeded He-normal kernels"};
  std::string out;
  std::uint64_t seed = 0;
  app.add_option("out", out, "Container to write")->required();
  app.add_option("--seed", seed, "Kernel seed")->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  dsim_weights* weights = nullptr;
  if (dsim_weights_synthesize(seed, &weights) != DSIM_OK || dsim_weights_save(weights, out.c_str()) != DSIM_OK) {
    std::fprintf(stderr, "error: %s\n", dsim_last_error());
    dsim_weights_free(weights);
    return 2;
  }
  dsim_weights_free(weights);
  std::printf("wrote %s (seed %llu)\n", out.c_str(), static_cast<unsigned long long>(seed));
  return 0;
}

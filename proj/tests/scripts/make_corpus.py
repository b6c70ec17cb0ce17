# Copyright 2026 The DeepSSIM Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#    http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Builds the natural-image corpus under tests/data/corpus from the sample
images that ship with scikit-image (public domain / CC0 sources)."""

import pathlib
import sys

import numpy as np
from skimage import data, transform, util
from skimage.io import imsave

LONG_SIDE = 192

SOURCES = [
    ("astronaut", lambda: data.astronaut()),
    ("camera", lambda: data.camera()),
    ("chelsea", lambda: data.chelsea()),
    ("coffee", lambda: data.coffee()),
    ("brick", lambda: data.brick()),
    ("grass", lambda: data.grass()),
    ("gravel", lambda: data.gravel()),
    ("rocket", lambda: data.rocket()),
    ("retina", lambda: data.retina()),
    ("hubble", lambda: data.hubble_deep_field()),
    ("motorcycle", lambda: data.stereo_motorcycle()[0]),
    ("moon", lambda: data.moon()),
    ("page", lambda: data.page()),
    ("coins", lambda: data.coins()),
    ("text", lambda: data.text()),
    ("ihc", lambda: data.immunohistochemistry()),
    ("cell", lambda: data.cell()),
    ("astronaut_face", lambda: data.astronaut()[20:220, 140:360]),
    ("coffee_crop", lambda: data.coffee()[100:350, 150:450]),
    ("chelsea_face", lambda: data.chelsea()[30:270, 60:340]),
]


def to_rgb8(img):
    img = util.img_as_float(img)
    if img.ndim == 2:
        img = np.stack([img] * 3, axis=-1)
    img = img[..., :3]
    h, w = img.shape[:2]
    scale = LONG_SIDE / max(h, w)
    out = transform.resize(img, (round(h * scale), round(w * scale)), anti_aliasing=True)
    return util.img_as_ubyte(np.clip(out, 0, 1))


def main(out_dir):
    out = pathlib.Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for i, (name, load) in enumerate(SOURCES):
        imsave(out / ("%02d_%s.png" % (i, name)), to_rgb8(load()), check_contrast=False)


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "tests/data/corpus")

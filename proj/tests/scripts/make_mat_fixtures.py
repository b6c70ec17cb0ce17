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

"""Writes the MAT-file fixtures used by the dataset adapter tests."""

import pathlib
import sys

import numpy as np
import scipy.io

TOTAL = 227 + 233 + 174 + 174 + 174


def main(out_dir):
    out = pathlib.Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    idx = np.arange(TOTAL)
    dmos = (idx * 0.125).reshape(1, TOTAL)
    orgs = (idx % 6 == 5).astype(np.float64).reshape(1, TOTAL)
    names = np.empty((1, TOTAL), dtype=object)
    for i in idx:
        names[0, i] = "ref%02d.bmp" % (i % 29)
    scipy.io.savemat(out / "dmos.mat", {"dmos": dmos, "orgs": orgs}, do_compression=False)
    scipy.io.savemat(out / "refnames_all.mat", {"refnames_all": names}, do_compression=True)

    # Small mixed file for the reader itself.
    scipy.io.savemat(
        out / "mixed.mat",
        {
            "matrix": np.array([[1.5, -2.0, 3.0], [4.0, 5.0, 6.25]]),
            "ints": np.array([[7, 8, 9]], dtype=np.int16),
            "flag": np.array([[True, False]]),
            "label": "hello",
        },
        do_compression=True,
    )


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "tests/data/live_mat")

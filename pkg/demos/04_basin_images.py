"""Basin-of-attraction images written as binary PPM files.

Each pixel centre is used as a seed (x_{-1}, x_0) and coloured by its fate:
one colour per root, black for a periodic orbit, white for a pixel whose
cell contains a focal point, dark grey when the iteration budget runs out.

Three pictures are produced in the current directory:

* basins_cubic.ppm      x (x - 2) (x - 3) on [-1, 5]^2, shaded by iteration count
* basins_period4.ppm    the period-four polynomial; black regions are the
                        basin of the attracting four-cycle
* basins_zoom_2_2.ppm   x^3/3 - 4x + 3 close to (2, 2), where orbits drift
                        onto the three-cycle through infinity

Run:  python demos/04_basin_images.py [outdir]
"""

import sys
import time
from pathlib import Path

from secant_dynamics import GOLDEN_QUADRUPLE, Polynomial, RenderConfig, construct_period4, render, write_ppm

outdir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(".")
outdir.mkdir(parents=True, exist_ok=True)

jobs = [
    ("basins_cubic.ppm", Polynomial([0.0, 6.0, -5.0, 1.0]), RenderConfig((-1, 5, -1, 5), 600, 600), True),
    ("basins_period4.ppm", construct_period4(*GOLDEN_QUADRUPLE), RenderConfig((-1, 5, -1, 5), 600, 600), False),
    ("basins_zoom_2_2.ppm", Polynomial([3.0, -4.0, 0.0, 1.0 / 3.0]), RenderConfig((1.92, 2.08, 1.92, 2.08), 400, 400), False),
]

for name, p, cfg, shade in jobs:
    t0 = time.perf_counter()
    grid = render(p, cfg)
    write_ppm(outdir / name, grid, shade=shade, max_iter=cfg.max_iter)
    print(f"{name}: {time.perf_counter() - t0:.2f}s  {grid.counts()}")

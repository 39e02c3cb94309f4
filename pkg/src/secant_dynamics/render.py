"""Basin-of-attraction images."""

from __future__ import annotations

import os
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .dynamics import (
    CONV_TOL,
    CYCLE,
    CYCLE_TOL,
    EXHAUSTED,
    FOCAL_HIT,
    MAX_ITER,
    ROOT,
    critical_points,
    iterate_orbit,
    orbit_batch,
)
from .focal import focal_points
from .poly import Polynomial, RootList, real_roots

ROOT_COLOURS = [
    (220, 40, 40),  # red
    (40, 170, 60),  # green
    (40, 80, 220),  # blue
    (240, 210, 40),  # yellow
    (245, 140, 30),  # orange
    (240, 140, 200),  # pink
    (140, 90, 40),  # brown
    (150, 150, 150),  # grey
    (140, 60, 190),  # purple
    (40, 200, 210),  # cyan
]
_PPM_HEADER = re.compile(rb"P6\s+(\d+)\s+(\d+)\s+(\d+)\s")

CYCLE_COLOUR = (0, 0, 0)
FOCAL_COLOUR = (255, 255, 255)
EXHAUSTED_COLOUR = (64, 64, 64)


@dataclass(frozen=True)
class RenderConfig:
    window: tuple[float, float, float, float] = (-1.0, 5.0, -1.0, 5.0)  # xmin, xmax, ymin, ymax
    width: int = 600
    height: int = 600
    max_iter: int = MAX_ITER
    conv_tol: float = CONV_TOL
    cycle_tol: float = CYCLE_TOL

    def centers(self) -> tuple[np.ndarray, np.ndarray]:
        """Pixel-centre abscissae (left to right) and ordinates (top to bottom)."""
        xmin, xmax, ymin, ymax = self.window
        i = np.arange(self.width)
        j = np.arange(self.height)
        # the fraction is rounded once, so grids whose centres coincide as
        # rationals (e.g. a 3x coarser grid) produce bitwise-equal abscissae
        xs = xmin + (xmax - xmin) * ((2 * i + 1) / (2 * self.width))
        ys = ymax - (ymax - ymin) * ((2 * j + 1) / (2 * self.height))
        return xs, ys

    @property
    def cell(self) -> tuple[float, float]:
        xmin, xmax, ymin, ymax = self.window
        return (xmax - xmin) / self.width, (ymax - ymin) / self.height


@dataclass
class BasinGrid:
    """Per-pixel class ids.

    Ids ``0 .. n_roots - 1`` are root basins, then ``n_roots`` for a cycle,
    ``n_roots + 1`` for a focal hit and ``n_roots + 2`` for an exhausted
    budget. Row 0 is the top of the window.
    """

    classes: np.ndarray
    iterations: np.ndarray
    periods: np.ndarray
    n_roots: int

    @property
    def cycle_id(self) -> int:
        return self.n_roots

    @property
    def focal_id(self) -> int:
        return self.n_roots + 1

    @property
    def exhausted_id(self) -> int:
        return self.n_roots + 2

    def counts(self) -> dict[str, int]:
        out = {f"root{k}": int((self.classes == k).sum()) for k in range(self.n_roots)}
        out["cycle"] = int((self.classes == self.cycle_id).sum())
        out["focal"] = int((self.classes == self.focal_id).sum())
        out["exhausted"] = int((self.classes == self.exhausted_id).sum())
        for q in np.unique(self.periods[self.classes == self.cycle_id]):
            out[f"cycle{int(q)}"] = int(((self.classes == self.cycle_id) & (self.periods == q)).sum())
        return out


def _class_ids(kind: np.ndarray, root_index: np.ndarray, n: int) -> np.ndarray:
    ids = np.full(kind.shape, n + 2, dtype=np.int16)
    ids[kind == ROOT] = root_index[kind == ROOT]
    ids[kind == CYCLE] = n
    ids[kind == FOCAL_HIT] = n + 1
    ids[kind == EXHAUSTED] = n + 2
    return ids


def _focal_mask(xs, ys, roots: RootList, cfg: RenderConfig, p: Polynomial) -> np.ndarray:
    """Pixels whose cell contains a focal point (or whose centre is within conv_tol of one)."""
    hx, hy = cfg.cell
    mask = np.zeros((ys.size, xs.size), dtype=bool)
    for Q in focal_points(p, roots):
        cx = np.abs(xs - Q.x) <= max(0.5 * hx, cfg.conv_tol)
        cy = np.abs(ys - Q.y) <= max(0.5 * hy, cfg.conv_tol)
        mask |= cy[:, None] & cx[None, :]
    return mask


def _worker_count(workers: int | None) -> int:
    cap = os.environ.get("SECANT_THREADS")
    n = workers if workers is not None else (os.cpu_count() or 1)
    if cap:
        n = min(n, int(cap))
    return max(1, n)


def render(p: Polynomial, cfg: RenderConfig, workers: int | None = None, roots: RootList | None = None) -> BasinGrid:
    """Classify every pixel centre of ``cfg.window``.

    Rows are split into bands handled by a thread pool; each pixel's result
    depends only on its own orbit, so the output is identical for any worker
    count. ``SECANT_THREADS`` caps the number of threads.
    """
    if roots is None:
        roots = real_roots(p)
    n = len(roots)
    xs, ys = cfg.centers()
    focal = _focal_mask(xs, ys, roots, cfg, p)
    crit = critical_points(p)
    classes = np.empty((cfg.height, cfg.width), dtype=np.int16)
    iters = np.zeros((cfg.height, cfg.width), dtype=np.int32)
    periods = np.zeros((cfg.height, cfg.width), dtype=np.int16)

    def band(rows: np.ndarray) -> None:
        X, Y = np.meshgrid(xs, ys[rows])
        free = ~focal[rows]
        res = orbit_batch(p, roots, X[free], Y[free], cfg.max_iter, cfg.conv_tol, cfg.cycle_tol, crit=crit)
        c = np.full(X.shape, n + 1, dtype=np.int16)
        it = np.zeros(X.shape, dtype=np.int32)
        per = np.zeros(X.shape, dtype=np.int16)
        c[free] = _class_ids(res.kind, res.root_index, n)
        it[free] = res.iterations
        per[free] = res.period
        classes[rows], iters[rows], periods[rows] = c, it, per

    nw = _worker_count(workers)
    bands = [b for b in np.array_split(np.arange(cfg.height), max(nw * 4, 1)) if b.size]
    if nw == 1:
        for b in bands:
            band(b)
    else:
        with ThreadPoolExecutor(max_workers=nw) as ex:
            list(ex.map(band, bands))
    return BasinGrid(classes, iters, periods, n)


def classify_pixel(p: Polynomial, cfg: RenderConfig, col: int, row: int, roots: RootList | None = None) -> tuple[int, int]:
    """Class id and iteration count of one pixel, computed on its own."""
    if roots is None:
        roots = real_roots(p)
    n = len(roots)
    xs, ys = cfg.centers()
    x, y = xs[col : col + 1], ys[row : row + 1]
    if _focal_mask(x, y, roots, cfg, p)[0, 0]:
        return n + 1, 0
    out = iterate_orbit(p, (x[0], y[0]), cfg.max_iter, cfg.conv_tol, cfg.cycle_tol, roots=roots, keep_trace=False)
    ids = {"root": out.root_index, "cycle": n, "focal": n + 1, "exhausted": n + 2}
    return ids[out.kind], out.iterations


def default_palette(n_roots: int) -> list[tuple[int, int, int]]:
    roots = [ROOT_COLOURS[k % len(ROOT_COLOURS)] for k in range(n_roots)]
    return roots + [CYCLE_COLOUR, FOCAL_COLOUR, EXHAUSTED_COLOUR]


def to_rgb(grid: BasinGrid, palette=None, shade: bool = False, max_iter: int | None = None) -> np.ndarray:
    """``(H, W, 3)`` uint8 image; with ``shade`` root basins darken with iteration count."""
    pal = np.array(palette or default_palette(grid.n_roots), dtype=float)
    img = pal[grid.classes]
    if shade:
        top = max_iter or max(int(grid.iterations.max()), 1)
        f = 0.55 + 0.45 * (1.0 - np.clip(grid.iterations / top, 0.0, 1.0))
        is_root = grid.classes < grid.n_roots
        img[is_root] *= f[is_root][:, None]
    return np.rint(img).astype(np.uint8)


def write_ppm(path, grid: BasinGrid, palette=None, shade: bool = False, max_iter: int | None = None) -> None:
    img = to_rgb(grid, palette, shade, max_iter)
    h, w, _ = img.shape
    with open(path, "wb") as fh:
        fh.write(f"P6\n{w} {h}\n255\n".encode("ascii"))
        fh.write(img.tobytes())


def read_ppm(path) -> np.ndarray:
    data = Path(path).read_bytes()
    m = _PPM_HEADER.match(data)
    if m is None:
        raise ValueError("not a binary PPM")
    w, h, maxval = (int(g) for g in m.groups())
    if maxval != 255:
        raise ValueError("only 8-bit PPM is supported")
    pixels = np.frombuffer(data, dtype=np.uint8, count=w * h * 3, offset=m.end())
    return pixels.reshape(h, w, 3)


def write_class_csv(path, grid: BasinGrid) -> None:
    np.savetxt(path, grid.classes, fmt="%d", delimiter=",")

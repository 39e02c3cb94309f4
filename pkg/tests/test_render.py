import numpy as np
import pytest

from secant_dynamics.dynamics import GOLDEN_QUADRUPLE, construct_period4
from secant_dynamics.poly import real_roots
from secant_dynamics.render import (
    BasinGrid,
    RenderConfig,
    classify_pixel,
    default_palette,
    read_ppm,
    render,
    write_class_csv,
    write_ppm,
)


def centred_on(x, y, w=1, h=1):
    return RenderConfig((x - 0.5, x + 0.5, y - 0.5, y + 0.5), w, h)


class TestClassifyPixel:
    def test_root_line(self, cubic):
        cls, its = classify_pixel(cubic, centred_on(5.0, 3.0), 0, 0)
        assert cls == 2 and its <= 2

    def test_horizontal_root_line(self, cubic):
        cls, its = classify_pixel(cubic, centred_on(0.5, 0.0), 0, 0)
        assert cls == 0 and its <= 2

    def test_focal(self, cubic):
        assert classify_pixel(cubic, centred_on(2.0, 3.0), 0, 0) == (4, 0)

    def test_row_zero_is_top(self):
        xs, ys = RenderConfig((0, 1, 0, 1), 2, 2).centers()
        assert list(xs) == [0.25, 0.75] and list(ys) == [0.75, 0.25]


class TestRender:
    def test_cubic_mostly_roots(self, cubic):
        g = render(cubic, RenderConfig((-1, 5, -1, 5), 200, 200))
        assert (g.classes < 3).mean() >= 0.9
        assert (g.classes == g.focal_id).sum() > 0

    def test_agrees_with_single_pixels(self, pstar):
        cfg = RenderConfig((-1, 5, -1, 5), 90, 70)
        roots = real_roots(pstar)
        g = render(pstar, cfg, roots=roots)
        rng = np.random.default_rng(1)
        for i, j in zip(rng.integers(0, 90, 40), rng.integers(0, 70, 40)):
            assert classify_pixel(pstar, cfg, i, j, roots=roots) == (g.classes[j, i], g.iterations[j, i])

    def test_workers_do_not_matter(self, cubic):
        cfg = RenderConfig((-1, 5, -1, 5), 80, 60)
        a, b = render(cubic, cfg, workers=1), render(cubic, cfg, workers=3)
        assert np.array_equal(a.classes, b.classes) and np.array_equal(a.iterations, b.iterations)

    def test_env_cap(self, cubic, monkeypatch):
        monkeypatch.setenv("SECANT_THREADS", "1")
        g = render(cubic, RenderConfig((-1, 5, -1, 5), 20, 20), workers=8)
        assert g.classes.shape == (20, 20)

    def test_subsampled_grid(self, cubic):
        fine = render(cubic, RenderConfig((-1, 5, -1, 5), 150, 120))
        coarse = render(cubic, RenderConfig((-1, 5, -1, 5), 50, 40))
        # with a 3x factor every coarse centre is a fine centre
        sub = fine.classes[1::3, 1::3]
        shared = (sub != fine.focal_id) & (coarse.classes != coarse.focal_id)
        assert np.array_equal(sub[shared], coarse.classes[shared])

    def test_root_lines(self, cubic):
        roots = real_roots(cubic)
        for k, a in enumerate(roots.roots):
            g = render(cubic, RenderConfig((-1, 5, a - 0.01, a + 0.01), 600, 1), roots=roots)
            row = g.classes[0]
            row = row[row != g.focal_id]
            assert (row == k).mean() >= 0.99

    def test_cycle_four_pixels(self):
        p = construct_period4(*GOLDEN_QUADRUPLE)
        g = render(p, RenderConfig((-1, 5, -1, 5), 200, 200))
        assert ((g.classes == g.cycle_id) & (g.periods == 4)).sum() > 0

    def test_cycle_three_near_critical_point(self, torus_cubic):
        cfg = RenderConfig((1.92, 2.08, 1.92, 2.08), 60, 60)
        g = render(torus_cubic, cfg)
        assert ((g.classes == g.cycle_id) & (g.periods == 3)).sum() > 0


class TestPPM:
    def grid(self, classes):
        c = np.array(classes, dtype=np.int16)
        return BasinGrid(c, np.zeros(c.shape, np.int32), np.zeros(c.shape, np.int16), 1)

    def test_single_pixel_bytes(self, tmp_path):
        path = tmp_path / "one.ppm"
        write_ppm(path, self.grid([[0]]), palette=[(255, 0, 0), (0, 0, 0), (255, 255, 255), (64, 64, 64)])
        assert path.read_bytes() == b"P6\n1 1\n255\n\xff\x00\x00"

    def test_round_trip(self, tmp_path):
        path = tmp_path / "two.ppm"
        g = self.grid([[0, 2]])
        write_ppm(path, g)
        img = read_ppm(path)
        assert img.shape == (1, 2, 3)
        assert [tuple(px) for px in img[0]] == [default_palette(1)[0], default_palette(1)[2]]

    def test_reference_reader(self, tmp_path):
        Image = pytest.importorskip("PIL.Image")
        path = tmp_path / "two.ppm"
        write_ppm(path, self.grid([[1, 3]]))
        with Image.open(path) as im:
            assert im.size == (2, 1)
            assert im.tobytes() == bytes(default_palette(1)[1] + default_palette(1)[3])

    def test_whitespace_pixel_values(self, tmp_path):
        path = tmp_path / "ws.ppm"
        write_ppm(path, self.grid([[0]]), palette=[(10, 32, 9), (0, 0, 0), (0, 0, 0), (0, 0, 0)])
        assert tuple(read_ppm(path)[0, 0]) == (10, 32, 9)

    def test_shading(self, tmp_path):
        c = np.array([[0, 0]], dtype=np.int16)
        g = BasinGrid(c, np.array([[0, 100]], np.int32), np.zeros(c.shape, np.int16), 1)
        path = tmp_path / "shade.ppm"
        write_ppm(path, g, palette=[(200, 100, 0), (0, 0, 0), (0, 0, 0), (0, 0, 0)], shade=True, max_iter=200)
        img = read_ppm(path)
        assert tuple(img[0, 0]) == (200, 100, 0)
        assert tuple(img[0, 1]) == (155, 78, 0)  # factor 0.775

    def test_full_size_and_determinism(self, cubic, tmp_path):
        cfg = RenderConfig((-1, 5, -1, 5), 600, 600)
        a, b = tmp_path / "a.ppm", tmp_path / "b.ppm"
        write_ppm(a, render(cubic, cfg), shade=True, max_iter=200)
        write_ppm(b, render(cubic, cfg, workers=2), shade=True, max_iter=200)
        assert a.stat().st_size == 15 + 3 * 600 * 600
        assert a.read_bytes() == b.read_bytes()

    def test_csv(self, tmp_path):
        path = tmp_path / "c.csv"
        write_class_csv(path, self.grid([[0, 1], [2, 3]]))
        assert path.read_text().splitlines() == ["0,1", "2,3"]

import os

import pytest

from majdepth.plots import render

TINY_ROWS = {
    "crossing": [
        (16, "tree", 0, 8, 2.0),
        (16, "path", 0, 10, 2.5),
        (16, "matching", 0, 6, 1.5),
        (64, "tree", 0, 16, 2.0),
        (64, "path", 0, 20, 2.5),
        (64, "matching", 0, 12, 1.5),
    ],
    "approx-error": [
        (256, 0, 4, 0, 0, 1),
        (256, 0, 8, 1, 5, 1),
        (256, 0, 16, 2, 11, 1),
        (256, 1, 4, 0, 0, 1),
        (256, 1, 8, 1, 7, 1),
        (256, 1, 16, 2, 13, 1),
    ],
    "side-query-cost": [
        (64, 0, 100, 30.0, 55.0, 40.0, 70.0),
        (256, 0, 100, 45.0, 80.0, 90.0, 160.0),
    ],
    "estimator-error": [
        (256, 500, 0, 0.03),
        (256, 500, 1, 0.06),
        (256, 500, 2, 0.01),
    ],
    "level-histogram": [
        (16, 1, 12, 12),
        (16, 2, 40, 52),
        (16, 3, 68, 120),
    ],
}


@pytest.mark.parametrize("experiment", sorted(TINY_ROWS))
def test_render_writes_png(experiment, tmp_path):
    path = str(tmp_path / f"{experiment}.png")
    out = render(experiment, TINY_ROWS[experiment], path)
    assert out == path
    assert os.path.getsize(path) > 1000
    with open(path, "rb") as fh:
        assert fh.read(8) == b"\x89PNG\r\n\x1a\n"


def test_render_rejects_unknown_experiment(tmp_path):
    with pytest.raises(ValueError):
        render("sorting", [], str(tmp_path / "x.png"))

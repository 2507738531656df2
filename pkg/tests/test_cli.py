import csv
import io
import json
import math

import numpy as np
import pytest

from mcsf import Image, diagonalize, direct_bilateral, read_image, write_image, SpatialKernel
from mcsf.cli import main


@pytest.fixture
def rgb_file(tmp_path):
    rng = np.random.default_rng(0)
    img = Image(np.clip(rng.normal(120, 40, size=(3, 24, 20)), 0, 255).round())
    path = tmp_path / "in.ppm"
    write_image(img, path)
    return path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_filter_mcsf(capsys, rgb_file, tmp_path):
    out_path = tmp_path / "out.ppm"
    code, out, _ = run(capsys, "filter", rgb_file, "-o", out_path, "--method", "mcsf", "--sigma-s", 5,
                       "--sigma-r", 50, "--order", 10, "--trials", 200, "--seed", 1)
    assert code == 0
    rec = json.loads(out)
    assert rec["convolutions"] == 800
    assert set(rec["timings"]) == {"transform_ms", "trials_ms", "divide_ms", "total_ms"}
    assert rec["z_min"] > 0 and rec["imag_max"] >= 0
    assert read_image(out_path).shape == (3, 24, 20)


def test_filter_direct_is_blur_for_huge_range(capsys, rgb_file, tmp_path):
    out_path = tmp_path / "out.ppm"
    code, _, _ = run(capsys, "filter", rgb_file, "-o", out_path, "--method", "direct",
                     "--sigma-s", 1, "--sigma-r", 255000000)
    assert code == 0
    img = read_image(rgb_file)
    # the default boundary follows the default (recursive) engine: replicate-edge
    blur = direct_bilateral(img, SpatialKernel.gaussian(1.0), diagonalize(np.eye(3) * 1e30), "replicate-edge")
    assert np.max(np.abs(read_image(out_path).data - blur.data)) <= 1.0


def test_filter_lab_and_cov_file(capsys, rgb_file, tmp_path):
    cov = tmp_path / "cov.txt"
    cov.write_text("3\n400 0 0\n0 900 0\n0 0 900\n")
    code, out, _ = run(capsys, "filter", rgb_file, "-o", tmp_path / "o.png", "--cov", cov,
                       "--colorspace", "lab", "--sigma-s", 2, "--trials", 20, "--conv", "fir")
    assert code == 0
    assert read_image(tmp_path / "o.png").shape == (3, 24, 20)


def test_missing_input_names_path(capsys, tmp_path):
    missing = tmp_path / "does-not-exist.ppm"
    code, _, err = run(capsys, "filter", missing, "-o", tmp_path / "o.ppm", "--sigma-r", 30)
    assert code == 3
    assert str(missing) in err


def test_usage_errors(capsys, rgb_file, tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["filter", str(rgb_file), "-o", "x.ppm"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["filter", str(rgb_file), "-o", "x.ppm", "--sigma-r", "3", "--order", "7"])
    assert exc.value.code == 2
    code, _, err = run(capsys, "filter", rgb_file, "-o", tmp_path / "o.ppm", "--sigma-r", 30,
                       "--conv", "recursive", "--boundary", "symmetric")
    assert code == 2 and "replicate" in err
    cov = tmp_path / "cov.txt"
    cov.write_text("1\n100\n")
    code, _, _ = run(capsys, "filter", rgb_file, "-o", tmp_path / "o.ppm", "--cov", cov)
    assert code == 2


def test_data_errors(capsys, tmp_path):
    bad = tmp_path / "bad.ppm"
    bad.write_bytes(b"P6\n4 4\n255\n\x00")
    code, _, err = run(capsys, "filter", bad, "-o", tmp_path / "o.ppm", "--sigma-r", 30)
    assert code == 3 and "expected" in err
    cov = tmp_path / "cov.txt"
    cov.write_text("3\n1 2 0\n2 1 0\n0 0 1\n")
    good = tmp_path / "g.ppm"
    write_image(Image(np.zeros((3, 2, 2))), good)
    code, _, _ = run(capsys, "filter", good, "-o", tmp_path / "o.ppm", "--cov", cov)
    assert code == 3


def test_degenerate_denominator_exit_code(capsys, tmp_path):
    # [100, 200, 100] under a radius-1 box; with Y = +-2 the middle pixel's
    # denominator is (1 + 2 cos(2 pi / 3)) / 3 = 0
    path = tmp_path / "tri.pgm"
    write_image(Image(np.array([[[100.0, 200.0, 100.0]]])), path)
    sigma_r = 200 * 3 / (2 * math.pi * math.sqrt(2))
    for seed in range(20):
        code, _, err = run(capsys, "filter", path, "-o", tmp_path / "o.pgm", "--sigma-r", repr(sigma_r),
                           "--order", 2, "--trials", 1, "--seed", seed, "--kernel", "box",
                           "--box-radius", 1, "--conv", "fir")
        if code == 4:
            assert "x=1, y=0" in err
            return
        assert code == 0
    pytest.fail("no seed produced Y = +-2")


def test_compare_identical_methods(capsys, rgb_file):
    code, out, _ = run(capsys, "compare", rgb_file, "--method-a", "direct", "--method-b", "direct",
                       "--sigma-s", 1, "--sigma-r", 30)
    assert code == 0
    rec = json.loads(out)
    assert rec["mse"] == 0.0 and rec["mse_db"] == "-inf"


def test_compare_repeat_csv(capsys, rgb_file):
    code, out, _ = run(capsys, "compare", rgb_file, "--sigma-s", 1, "--sigma-r", 40, "--trials", 50,
                       "--repeat", 3, "--format", "csv", "--conv", "fir")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [int(r["seed"]) for r in rows] == [0, 1, 2]
    assert all(float(r["mse"]) > 0 for r in rows)
    code, out, _ = run(capsys, "compare", rgb_file, "--sigma-s", 1, "--sigma-r", 40, "--trials", 50,
                       "--repeat", 3, "--aggregate")
    rec = json.loads(out)
    assert rec["repeats"] == 3 and rec["mse"] > 0


def test_sweep_rows(capsys, rgb_file):
    code, out, _ = run(capsys, "sweep", rgb_file, "--sigma-s", 1, "--sigma-r", 50, "--orders", "10,20",
                       "--trials-grid", "10,20,40", "--repeat", 2)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 6
    assert list(rows[0]) == ["N", "T", "mean_mse", "std_mse", "mean_runtime_ms"]


def test_bench(capsys, rgb_file):
    code, out, _ = run(capsys, "bench", rgb_file, "--sigma-r", 40, "--trials", 10,
                       "--sigma-s-grid", "1,2")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [float(r["sigma_s"]) for r in rows] == [1.0, 2.0]
    assert all(float(r["direct_ms"]) > 0 and float(r["mcsf_ms"]) > 0 for r in rows)


def test_kernel_table(capsys):
    code, out, _ = run(capsys, "kernel-table", "--alpha", "1/30", "--order", 20, "--trials", 200, "--seed", 0)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 511
    assert list(rows[0]) == ["t", "gaussian", "raised_cosine_20", "mc_estimate_re", "mc_estimate_im"]
    assert max(abs(float(r["raised_cosine_20"]) - float(r["gaussian"])) for r in rows) <= 0.02
    zero = next(r for r in rows if r["t"] == "0")
    assert [float(zero[k]) for k in list(zero)[1:]] == [1.0, 1.0, 1.0, 0.0]


def test_deterministic_output(capsys):
    a = run(capsys, "kernel-table", "--sigma-r", 30, "--trials", 50, "--seed", 3)[1]
    b = run(capsys, "kernel-table", "--sigma-r", 30, "--trials", 50, "--seed", 3)[1]
    assert a == b


def test_threads_option(capsys, rgb_file, tmp_path):
    code, _, _ = run(capsys, "filter", rgb_file, "-o", tmp_path / "o.ppm", "--sigma-r", 30,
                     "--trials", 5, "--threads", 1)
    assert code == 0
    code, _, err = run(capsys, "filter", rgb_file, "-o", tmp_path / "o.ppm", "--sigma-r", 30,
                       "--trials", 5, "--threads", 4096)
    assert code == 2

import json

import numpy as np
import pytest
from PIL import Image

from sfcmap import (
    ChannelGrid,
    CurveFamily,
    CurveSpec,
    GridKind,
    read_manifest,
    read_tensor,
    write_binvox,
    write_tensor,
)
from sfcmap.cli import DEFAULT_PALETTE, main
from sfcmap.tensorfile import sidecar_path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture
def binvox_file(tmp_path, rng):
    volume = (rng.random((1, 64, 64, 64)) < 0.08).astype(np.uint8)
    path = tmp_path / "shapes" / "model7.binvox"
    path.parent.mkdir()
    path.write_bytes(write_binvox(ChannelGrid(volume, GridKind.BINARY)))
    return path


@pytest.fixture
def pdb_file(tmp_path, small_chain_text):
    path = tmp_path / "chains" / "1abc.pdb"
    path.parent.mkdir()
    path.write_text(small_chain_text)
    return path


def test_voxelize_binvox_passthrough(tmp_path, capsys, binvox_file):
    out_dir = tmp_path / "vox"
    code, _, _ = run(capsys, "voxelize", binvox_file, "--out-dir", out_dir,
                     "--manifest-out", tmp_path / "m.jsonl")
    assert code == 0
    grid, provenance = read_tensor(out_dir / "model7.grid")
    assert provenance is None
    assert grid.shape == (64, 64, 64) and grid.channels == 1
    [entry] = read_manifest(tmp_path / "m.jsonl")
    assert entry.label == "shapes"
    assert entry.id == "model7"


def test_voxelize_pdb_eight_channels(tmp_path, capsys, pdb_file):
    out_dir = tmp_path / "vox"
    code, _, _ = run(capsys, "voxelize", pdb_file, "--out-dir", out_dir,
                     "--channels", "ras8")
    assert code == 0
    grid, _ = read_tensor(out_dir / "1abc.grid")
    assert grid.shape == (64, 64, 64) and grid.channels == 8
    assert grid.values.sum() > 0


def test_voxelize_missing_input(tmp_path, capsys):
    code, _, err = run(capsys, "voxelize", tmp_path / "nope.binvox",
                       "--out-dir", tmp_path / "vox")
    assert code == 2
    assert "nope.binvox" in err


def test_voxelize_keep_going(tmp_path, capsys, binvox_file):
    code, _, err = run(capsys, "voxelize", tmp_path / "nope.binvox", binvox_file,
                       "--out-dir", tmp_path / "vox", "--keep-going")
    assert code == 0
    assert "1 of 2 inputs failed" in err
    assert (tmp_path / "vox" / "model7.grid").exists()


def test_encode_to_2d_and_1d(tmp_path, capsys, binvox_file):
    vox, enc = tmp_path / "vox", tmp_path / "enc"
    run(capsys, "voxelize", binvox_file, "--out-dir", vox)
    code, _, _ = run(capsys, "encode", vox / "model7.grid", "--out-dir", enc,
                     "--target-dim", "2")
    assert code == 0
    grid2, provenance = read_tensor(enc / "model7.enc2d.grid")
    assert grid2.shape == (512, 512)
    assert provenance == (CurveSpec(CurveFamily.HILBERT, 3, 6),
                          CurveSpec(CurveFamily.HILBERT, 2, 9))
    code, _, _ = run(capsys, "encode", vox / "model7.grid", "--out-dir", enc,
                     "--target-dim", "1")
    assert code == 0
    grid1, _ = read_tensor(enc / "model7.enc1d.grid")
    assert grid1.shape == (262144,)


def test_encode_eight_channels_to_line(tmp_path, capsys, pdb_file):
    vox, enc = tmp_path / "vox", tmp_path / "enc"
    run(capsys, "voxelize", pdb_file, "--out-dir", vox, "--channels", "ras8")
    code, _, _ = run(capsys, "encode", vox / "1abc.grid", "--out-dir", enc,
                     "--target-dim", "1")
    assert code == 0
    line, _ = read_tensor(enc / "1abc.enc1d.grid")
    assert line.shape == (262144,)
    assert line.channels == 8
    cube, _ = read_tensor(vox / "1abc.grid")
    for c in range(8):
        assert line.values[c].sum() == cube.values[c].sum()


def test_encode_length_mismatch(tmp_path, capsys):
    path = tmp_path / "small.grid"
    write_tensor(path, ChannelGrid.zeros(32, 3))
    code, _, err = run(capsys, "encode", path, "--out-dir", tmp_path / "enc",
                       "--target-dim", "2", "--target-order", "8")
    assert code == 2
    assert "points" in err


def test_decode_round_trips_bytes(tmp_path, capsys, binvox_file):
    vox, enc, dec = tmp_path / "vox", tmp_path / "enc", tmp_path / "dec"
    run(capsys, "voxelize", binvox_file, "--out-dir", vox)
    run(capsys, "encode", vox / "model7.grid", "--out-dir", enc, "--target-dim", "1")
    code, _, _ = run(capsys, "decode", enc / "model7.enc1d.grid", "--out-dir", dec)
    assert code == 0
    decoded = dec / "model7.enc1d.dec.grid"
    original = vox / "model7.grid"
    assert decoded.read_bytes() == original.read_bytes()
    assert json.loads(sidecar_path(decoded).read_text())["shape"] == [64, 64, 64]


def test_decode_scalar_preserves_value_multiset(tmp_path, capsys, rng):
    saliency = ChannelGrid(rng.standard_normal((1, 512, 512)), GridKind.SCALAR)
    path = tmp_path / "sal.enc.grid"
    write_tensor(path, saliency, provenance=(CurveSpec(CurveFamily.HILBERT, 3, 6),
                                             CurveSpec(CurveFamily.HILBERT, 2, 9)))
    code, _, _ = run(capsys, "decode", path, "--out-dir", tmp_path)
    assert code == 0
    cube, _ = read_tensor(tmp_path / "sal.enc.dec.grid")
    assert cube.shape == (64, 64, 64)
    assert sorted(cube.values.ravel()) == sorted(saliency.values.ravel())


def test_decode_without_provenance(tmp_path, capsys):
    path = tmp_path / "plain.grid"
    write_tensor(path, ChannelGrid.zeros(8, 2))
    code, _, err = run(capsys, "decode", path, "--out-dir", tmp_path)
    assert code == 2
    assert "provenance" in err


def test_split_sizes_and_determinism(tmp_path, capsys):
    from sfcmap import ManifestEntry, write_manifest

    pool = [ManifestEntry(id=f"c{i:03d}", source="s", output="o",
                          shape=(64, 64, 64), channels=1) for i in range(10)]
    path = tmp_path / "m.jsonl"
    write_manifest(path, pool)
    code, out1, _ = run(capsys, "split", path, "--fractions", "0.7,0.1,0.2",
                        "--seed", "3")
    assert code == 0
    splits = [json.loads(line)["split"] for line in out1.splitlines()]
    assert sorted(splits).count("train") == 7
    code, out2, _ = run(capsys, "split", path, "--fractions", "0.7,0.1,0.2",
                        "--seed", "3")
    assert out1 == out2


def test_locality_identity_curve(capsys):
    code, out, _ = run(capsys, "locality", "--measure", "eq1", "--family",
                       "hilbert", "-m", "1", "-p", "2", "--exact")
    assert code == 0
    assert out.splitlines() == ["measure,value,pairs,exact,seed", "curve,6.0,6,true,"]


def test_locality_whole_space_kernel(capsys):
    code, out, _ = run(capsys, "locality", "--measure", "eq3", "--family",
                       "hilbert", "-m", "2", "-p", "2", "--target-dim", "1",
                       "--target-order", "4", "--k-source", "99",
                       "--k-target", "99", "--exact")
    assert code == 0
    assert out.splitlines()[1] == "kernel,120,120,true,"


def test_locality_sampled_deterministic(capsys, tmp_path):
    args = ("locality", "--measure", "eq2", "--family", "zorder", "-m", "3",
            "-p", "2", "--target-dim", "2", "--target-order", "3",
            "--pairs", "200", "--seed", "7")
    code, out1, _ = run(capsys, *args)
    code, out2, _ = run(capsys, *args)
    assert code == 0 and out1 == out2
    assert out1.splitlines()[1].endswith(",false,7")
    csv_path = tmp_path / "report.csv"
    run(capsys, *args, "--csv", csv_path)
    assert csv_path.read_text() == out1


def test_locality_capacity_exit_code(capsys):
    code, _, err = run(capsys, "locality", "--measure", "eq1", "--family",
                       "hilbert", "-m", "3", "-p", "6", "--exact")
    assert code == 3
    assert "sampled" in err


def test_export_png_black_and_single_pixel(tmp_path, capsys):
    zero = tmp_path / "zero.grid"
    write_tensor(zero, ChannelGrid.zeros(512, 2))
    out = tmp_path / "zero.png"
    assert run(capsys, "export-png", zero, "--out", out)[0] == 0
    image = np.asarray(Image.open(out))
    assert image.shape == (512, 512)
    assert (image == 0).all()

    values = np.zeros((1, 512, 512), dtype=np.uint8)
    values[0, 0, 0] = 1
    hot = tmp_path / "hot.grid"
    write_tensor(hot, ChannelGrid(values, GridKind.BINARY))
    out2 = tmp_path / "hot.png"
    run(capsys, "export-png", hot, "--out", out2)
    image = np.asarray(Image.open(out2))
    assert image[0, 0] == 255
    assert (image != 0).sum() == 1


def test_export_png_palette_only(tmp_path, capsys, rng):
    values = np.zeros((8, 64, 64), dtype=np.uint8)
    for c in range(8):
        values[c] = rng.random((64, 64)) < 0.05
    path = tmp_path / "multi.grid"
    write_tensor(path, ChannelGrid(values, GridKind.BINARY))
    out = tmp_path / "multi.png"
    assert run(capsys, "export-png", path, "--out", out)[0] == 0
    image = np.asarray(Image.open(out)).reshape(-1, 3)
    seen = {tuple(int(v) for v in px) for px in np.unique(image, axis=0)}
    assert seen <= set(DEFAULT_PALETTE) | {(0, 0, 0)}


def test_export_png_rejects_non_2d(tmp_path, capsys):
    path = tmp_path / "cube.grid"
    write_tensor(path, ChannelGrid.zeros(8, 3))
    code, _, err = run(capsys, "export-png", path, "--out", tmp_path / "x.png")
    assert code == 2
    assert "2-d" in err


def test_colliding_stems_disambiguated_by_parent(tmp_path, capsys, rng):
    volume = (rng.random((1, 16, 16, 16)) < 0.2).astype(np.uint8)
    data = write_binvox(ChannelGrid(volume, GridKind.BINARY))
    for cls in ("chairs", "tables"):
        (tmp_path / cls).mkdir()
        (tmp_path / cls / "m0.binvox").write_bytes(data)
    out = tmp_path / "vox"
    code, _, _ = run(capsys, "voxelize", tmp_path / "chairs" / "m0.binvox",
                     tmp_path / "tables" / "m0.binvox", "--out-dir", out,
                     "--manifest-out", tmp_path / "m.jsonl")
    assert code == 0
    assert (out / "chairs_m0.grid").exists()
    assert (out / "tables_m0.grid").exists()
    ids = [e.id for e in read_manifest(tmp_path / "m.jsonl")]
    assert ids == ["chairs_m0", "tables_m0"]


def test_jobs_flag_keeps_outputs_identical(tmp_path, capsys, rng):
    sources = []
    for k in range(4):
        vol = (rng.random((1, 16, 16, 16)) < 0.2).astype(np.uint8)
        p = tmp_path / f"in{k}.binvox"
        p.write_bytes(write_binvox(ChannelGrid(vol, GridKind.BINARY)))
        sources.append(p)
    run(capsys, "voxelize", *sources, "--out-dir", tmp_path / "serial")
    run(capsys, "voxelize", *sources, "--out-dir", tmp_path / "par", "--jobs", "4")
    for k in range(4):
        a = (tmp_path / "serial" / f"in{k}.grid").read_bytes()
        b = (tmp_path / "par" / f"in{k}.grid").read_bytes()
        assert a == b


def test_manifest_conservation_through_encode_decode(tmp_path, capsys, binvox_file):
    vox, enc, dec = tmp_path / "vox", tmp_path / "enc", tmp_path / "dec"
    m0, m1, m2 = tmp_path / "m0.jsonl", tmp_path / "m1.jsonl", tmp_path / "m2.jsonl"
    run(capsys, "voxelize", binvox_file, "--out-dir", vox, "--manifest-out", m0)
    code, _, _ = run(capsys, "encode", "--manifest", m0, "--out-dir", enc,
                     "--target-dim", "2", "--manifest-out", m1)
    assert code == 0
    code, _, _ = run(capsys, "decode", "--manifest", m1, "--out-dir", dec,
                     "--manifest-out", m2)
    assert code == 0
    ids0 = [e.id for e in read_manifest(m0)]
    ids1 = [e.id for e in read_manifest(m1)]
    ids2 = [e.id for e in read_manifest(m2)]
    assert ids0 == ids1 == ids2
    [entry] = read_manifest(m2)
    assert entry.label == "shapes"
    assert entry.shape == (64, 64, 64)


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as err:
        main(["locality", "--measure", "eq1"])  # missing -m/-p
    assert err.value.code == 1


def test_global_seed_accepted_before_subcommand(tmp_path, capsys):
    from sfcmap import ManifestEntry, write_manifest

    pool = [ManifestEntry(id=f"c{i:03d}", source="s", output="o",
                          shape=(64, 64, 64), channels=1) for i in range(10)]
    path = tmp_path / "m.jsonl"
    write_manifest(path, pool)
    _, before, _ = run(capsys, "--seed", "4", "split", path)
    _, after, _ = run(capsys, "split", path, "--seed", "4")
    assert before == after
    _, other, _ = run(capsys, "split", path, "--seed", "5")
    assert before != other


def test_radius_override_changes_coverage(tmp_path, capsys, pdb_file):
    small = tmp_path / "small"
    big = tmp_path / "big"
    run(capsys, "voxelize", pdb_file, "--out-dir", small, "--channels", "mono")
    code, _, _ = run(capsys, "voxelize", pdb_file, "--out-dir", big,
                     "--channels", "mono", "--radius", "C=3.4")
    assert code == 0
    a, _ = read_tensor(small / "1abc.grid")
    b, _ = read_tensor(big / "1abc.grid")
    assert b.values.sum() > a.values.sum()

import json
import math

import numpy as np
import pytest

from bifour.bilinear import apply_bilinear
from bifour.cli import dump_config, load_config, main
from bifour.lattice import Field, make_lattice, random_bandlimited, read_field, write_field
from bifour.norms import SmoothnessParams, symbol_norm, sup_dyadic_norm
from bifour.symbols import dyadic_piece, make_window_family, parse_symbol
from bifour.verify import VerifyConfig


@pytest.fixture
def out(tmp_path, monkeypatch):
    monkeypatch.setenv("BIFOUR_OUT", str(tmp_path / "out"))
    return tmp_path / "out"


def _value(capsys) -> float:
    return float(capsys.readouterr().out.strip().splitlines()[-1])


def _fields(tmp_path, rng, n=1, N=64):
    lat = make_lattice(n, N, 2 * math.pi)
    f1, f2 = random_bandlimited(lat, 8.0, rng), random_bandlimited(lat, 8.0, rng)
    p1, p2 = tmp_path / "f1.txt", tmp_path / "f2.txt"
    write_field(f1, p1)
    write_field(f2, p2)
    return f1, f2, p1, p2


def test_symbols_lists_catalog(capsys):
    assert main(["symbols"]) == 0
    assert "constant-one" in capsys.readouterr().out.split()


def test_norm_of_constant_symbol_piece(out, capsys):
    argv = ["norm", "--symbol", "constant-one", "--flavor", "mixed-2", "--s1", "0.4", "--s2", "0.6", "--j", "0"]
    assert main(argv) == 0
    cfg = VerifyConfig()
    w = make_window_family()
    lat = make_lattice(1, cfg.sym_N, cfg.sym_L)
    piece = dyadic_piece(parse_symbol("constant-one"), 0, w, lat)
    expected = symbol_norm(piece, SmoothnessParams(0.4, 0.6, "mixed-2"), w)
    assert _value(capsys) == expected
    rec = json.loads((out / "norms.jsonl").read_text().splitlines()[-1])
    assert rec["value"] == expected


def test_norm_of_constant_field_is_zero(tmp_path, out, capsys):
    path = tmp_path / "c.txt"
    write_field(Field(make_lattice(1, 32, 2 * math.pi), np.full(32, 1.5)), path)
    assert main(["norm", "--field", str(path), "--flavor", "bmo"]) == 0
    assert _value(capsys) == 0.0


def test_norm_tensor_product_matches_library(out, capsys):
    assert main(["norm", "--symbol", "tensor(gauss,gauss)", "--flavor", "product", "--s1", "1", "--s2", "1"]) == 0
    cfg = VerifyConfig()
    expected = sup_dyadic_norm(
        parse_symbol("tensor(gauss,gauss)"),
        SmoothnessParams(1.0, 1.0, "product"),
        cfg.jrange,
        make_window_family(),
        make_lattice(1, cfg.sym_N, cfg.sym_L),
    )
    assert _value(capsys) == pytest.approx(expected, rel=1e-12)


def test_norm_parse_error(out, capsys):
    assert main(["norm", "--symbol", "no-such-symbol", "--flavor", "product"]) != 0
    assert "error" in capsys.readouterr().err


def test_apply_constant_one_is_product(tmp_path, rng, out):
    f1, f2, p1, p2 = _fields(tmp_path, rng)
    target = tmp_path / "g.txt"
    assert main(["apply", "--symbol", "constant-one", str(p1), str(p2), "-o", str(target)]) == 0
    g = read_field(target)
    assert np.max(np.abs(g.values - f1.values * f2.values)) <= 1e-12 * np.max(np.abs(f1.values * f2.values))


def test_apply_missing_input_names_path(tmp_path, rng, out, capsys):
    _, _, p1, _ = _fields(tmp_path, rng)
    missing = tmp_path / "absent.txt"
    assert main(["apply", "--symbol", "constant-one", str(p1), str(missing)]) != 0
    assert str(missing) in capsys.readouterr().err


def test_apply_lattice_mismatch(tmp_path, rng, out):
    _, _, p1, _ = _fields(tmp_path, rng)
    other = tmp_path / "other.txt"
    write_field(Field(make_lattice(1, 32, 2 * math.pi), np.ones(32)), other)
    assert main(["apply", "--symbol", "constant-one", str(p1), str(other)]) != 0


def test_apply_naive_and_fast_agree(tmp_path, rng, out):
    f1, f2, p1, p2 = _fields(tmp_path, rng)
    outs = {}
    for path in ("naive", "fast"):
        target = tmp_path / f"{path}.txt"
        args = ["apply", "--symbol", "random-bandlimited(seed=3)", "--path", path, str(p1), str(p2), "-o", str(target)]
        assert main(args) == 0
        outs[path] = read_field(target).values
    assert np.max(np.abs(outs["naive"] - outs["fast"])) <= 1e-10 * np.max(np.abs(outs["naive"]))
    lib = apply_bilinear(parse_symbol("random-bandlimited(seed=3)"), f1, f2, "naive").values
    assert np.max(np.abs(outs["naive"] - lib)) <= 1e-12 * np.max(np.abs(lib))


def test_decompose_writes_pieces(tmp_path, rng, out, capsys):
    lat = make_lattice(1, 64, 2 * math.pi)
    path = tmp_path / "g.txt"
    write_field(Field(lat, rng.standard_normal(64)), path)
    assert main(["decompose", str(path), "--kind", "fs", "-o", str(tmp_path / "p")]) == 0
    pieces = sorted((tmp_path / "p").glob("piece_*.txt"))
    assert len(pieces) == 2
    total = read_field(pieces[0]).values.copy()
    from bifour.calculus import riesz_transform  # noqa: PLC0415

    total += riesz_transform(read_field(pieces[1]), 1).values
    np.testing.assert_allclose(total, read_field(path).values, atol=1e-12)


def test_verify_single_identity_check(out):
    assert main(["verify", "--check", "DUAL-4.2", "-q"]) == 0
    lines = (out / "reports.jsonl").read_text().splitlines()
    assert len(lines) == 1 and json.loads(lines[0])["pass"] is True
    assert (out / "summary.csv").read_text().startswith("id,constant,drift,pass,seconds")


def test_verify_unknown_check(out, capsys):
    assert main(["verify", "--check", "NOPE"]) != 0
    assert "NOPE" in capsys.readouterr().err


def test_out_flag_overrides_environment(tmp_path, out):
    explicit = tmp_path / "explicit"
    assert main(["verify", "--check", "DUAL-4.2", "-q", "--out", str(explicit)]) == 0
    assert (explicit / "reports.jsonl").exists() and not (out / "reports.jsonl").exists()


def test_config_roundtrip_and_override(tmp_path):
    cfg = VerifyConfig(N=128, seeds=(4, 5), c_values=(0.25, 0.35), checks=("LEM-5.1", "FS-5.1"), drift_bound=1.1)
    path = tmp_path / "run.cfg"
    path.write_text("# comment\n" + dump_config(cfg))
    assert load_config(path) == cfg
    path.write_text("N = 32\nbogus = 1\n")
    with pytest.raises(Exception, match="bogus"):
        load_config(path)
    path.write_text("N = 32\nseeds = 9\n")
    assert main(["verify", "--config", str(path), "--check", "DUAL-4.2", "-q", "--seed", "2",
                 "--out", str(tmp_path / "o")]) == 0
    rec = json.loads((tmp_path / "o" / "reports.jsonl").read_text())
    assert rec["seeds"] == [2] and rec["levels"][0]["lattice"]["op"]["N"] == 32

import json
import math

import numpy as np
import pytest

from coronal.codes import canonicalize, parse_code
from coronal.geometry import (
    Disc,
    InsufficientPatchError,
    OverlapError,
    Packing,
    PackingError,
    cluster_radii,
    codes_of_packing,
    extract_corona,
    inspect_corona,
    load_packing,
    place_corona,
    save_packing,
    tangency_graph,
    verify_compact_patch,
)
from coronal.realize import eval_angle_sum
from coronal.sets import CodeSet

from conftest import SQRT2_M1
from patches import as_packing, perturbed, transform


def write(tmp_path, discs, name="p.json"):
    path = tmp_path / name
    path.write_text(json.dumps({"discs": [
        {"x": d.x, "y": d.y, "r": d.r, "interior": d.interior} for d in discs]}))
    return path


def test_load_hex(tmp_path, hex_discs):
    p = load_packing(write(tmp_path, hex_discs))
    assert len(p) == 7 and p.n == 1
    assert p.labels.tolist() == [0] * 7


def test_load_triple(tmp_path, triple_discs, triple_radii):
    p = load_packing(write(tmp_path, triple_discs))
    assert p.n == 3
    np.testing.assert_allclose(p.canonical_realizer(), triple_radii, atol=1e-12)


def test_save_roundtrip(tmp_path, triple_discs):
    p = as_packing(triple_discs)
    save_packing(p, tmp_path / "a.json")
    q = load_packing(tmp_path / "a.json")
    assert q.discs == p.discs


def test_load_errors(tmp_path):
    with pytest.raises(OverlapError) as e:
        load_packing(write(tmp_path, [Disc(0, 0, 1), Disc(1.5, 0, 1)]))
    assert e.value.pair == (0, 1)
    bad = tmp_path / "bad.json"
    bad.write_text('{"discs": [{"x": 0, "y": 0}]}')
    with pytest.raises(PackingError):
        load_packing(bad)
    bad.write_text("not json")
    with pytest.raises(PackingError):
        load_packing(bad)
    bad.write_text('{"discs": [{"x": 0, "y": 0, "r": -1}]}')
    with pytest.raises(PackingError):
        load_packing(bad)
    with pytest.raises(PackingError):
        Disc(0, 0, 0.0)
    with pytest.raises(FileNotFoundError):
        load_packing(tmp_path / "missing.json")


def test_cluster_radii():
    labels, means = cluster_radii([1.0, 0.5, 1.0 + 1e-9, 0.5 * (1 + 5e-8), 2.0])
    assert labels.tolist() == [1, 0, 1, 0, 2]
    assert len(means) == 3


def test_tangency_examples(hex_discs):
    assert len(tangency_graph(Packing(hex_discs))[0]) == 6
    tol = 1e-7
    assert tangency_graph(Packing([Disc(0, 0, 1), Disc(2, 0, 1)]), tol) == [[1], [0]]
    assert tangency_graph(Packing([Disc(0, 0, 1), Disc(2 + 10 * tol, 0, 1)]), tol) == [[], []]
    assert tangency_graph(Packing([])) == []


def test_extract_corona_hex(hex_discs):
    p = Packing(hex_discs)
    c = extract_corona(p, 0)
    assert c is not None and len(c.petals) == 6
    assert c.code(p) == parse_code("0:000000", 1)
    # boundary disc: only three neighbours, not mutually closing
    rep = inspect_corona(p, 1)
    assert rep.corona is None and rep.reason


def test_extract_corona_few_neighbours():
    p = Packing([Disc(0, 0, 1, True), Disc(2, 0, 1)])
    rep = inspect_corona(p, 0)
    assert rep.corona is None and "neighbours" in rep.reason


def test_extract_corona_triple(triple_discs):
    p = as_packing(triple_discs)
    x = extract_corona(p, 0)
    assert x is not None and x.code(p) == parse_code("0:22121", 3)


def test_codes_of_packing(hex_discs, square_discs, triple_discs):
    assert set(codes_of_packing(Packing(hex_discs))) == {parse_code("0:000000", 1)}
    sq = codes_of_packing(Packing(square_discs))
    assert parse_code("0:1111", 2) in sq
    assert parse_code("1:01010101", 2) in sq
    f4 = codes_of_packing(as_packing(triple_discs))
    assert {parse_code("0:22121", 3), parse_code("1:212020", 3)} <= set(f4)


@pytest.mark.parametrize("angle,shift,scale", [
    (0.3, (5.0, -2.0), 1.0), (2.0, (0.0, 0.0), 3.7), (-1.1, (100.0, 40.0), 0.01)])
def test_codes_invariant_under_similarity(triple_discs, square_discs, angle, shift, scale):
    for discs in (triple_discs, square_discs):
        base = codes_of_packing(Packing(discs))
        moved = Packing(transform(discs, angle, shift, scale), overlap_tol=1e-7 * scale)
        assert codes_of_packing(moved, tol=1e-7 * scale) == base


def test_insufficient_patch():
    p = Packing([Disc(0, 0, 1, True), Disc(5, 0, 0.5, False)])
    with pytest.raises(InsufficientPatchError, match="label 0"):
        codes_of_packing(p)
    rep = verify_compact_patch(p)
    assert not rep.ok and any("insufficient" in e for e in rep.errors)


def test_verify_hex(hex_discs):
    rep = verify_compact_patch(Packing(hex_discs))
    assert rep.ok and rep.n == 1 and rep.reconstructed is None


def test_verify_square(square_discs):
    rep = verify_compact_patch(Packing(square_discs))
    assert rep.ok, rep.errors
    assert rep.reconstructed == pytest.approx([SQRT2_M1, 1.0], abs=1e-9)


def test_verify_triple(triple_discs, triple_radii):
    rep = verify_compact_patch(as_packing(triple_discs))
    assert rep.ok, rep.errors
    assert np.max(np.abs(np.array(rep.reconstructed) - rep.measured)) < 1e-6
    np.testing.assert_allclose(rep.measured, triple_radii, atol=1e-12)
    d = rep.to_dict()
    assert json.loads(json.dumps(d))["ok"] is True


def test_verify_perturbed_fails(triple_discs):
    bad = perturbed(triple_discs, 0, 1 - 1e-3)
    rep = verify_compact_patch(Packing(bad))
    assert not rep.ok
    assert rep.errors
    assert any(not c["valid"] for c in rep.coronas)


@pytest.mark.parametrize("text,rho", [
    ("0:1111", [SQRT2_M1, 1.0]),
    ("0:111", [2 / math.sqrt(3) - 1, 1.0]),
    ("0:000000", [1.0]),
])
def test_place_corona_closes_when_tight(text, rho):
    x = parse_code(text, len(rho))
    discs, gap = place_corona(x, rho)
    assert abs(gap) < 1e-12
    first, last = discs[1], discs[-1]
    dist = math.hypot(first[0] - last[0], first[1] - last[1])
    assert abs(dist - first[2] - last[2]) < 1e-8


def test_place_corona_round_trip(rng, triple_radii):
    for _ in range(200):
        n = int(rng.integers(2, 4))
        m = int(rng.integers(3, 8))
        x = canonicalize(int(rng.integers(n)), rng.integers(0, n, m).tolist())
        rho = rng.uniform(0.05, 1.0, n)
        discs, gap = place_corona(x, rho)
        assert gap == pytest.approx(2 * math.pi - eval_angle_sum(x, rho), abs=1e-12)
        first, last = discs[1], discs[-1]
        closes = abs(math.hypot(first[0] - last[0], first[1] - last[1]) - first[2] - last[2]) < 1e-8
        if abs(gap) < 1e-9:
            assert closes
        elif abs(gap) > 1e-6 and abs(gap) < math.pi:
            assert not closes
    for x in CodeSet(3, [parse_code("0:22121", 3), parse_code("1:212020", 3)]):
        assert abs(place_corona(x, triple_radii)[1]) < 1e-10

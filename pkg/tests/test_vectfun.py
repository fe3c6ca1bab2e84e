import numpy as np
import pytest

from sqapn.errors import OracleDisagreement, Singular, TooLarge, WidthMismatch, ZeroDirection
from sqapn.family import Vec3, family_create, family_lut
from sqapn.gf import field_create, subfield_elements
from sqapn.vectfun import (
    LinMap3,
    Lut,
    compute_core,
    ddt_naive,
    derivative_kernel,
    differential_uniformity,
    identity_lut,
    image_multiplicity,
    kernel_sizes,
    lut_transform,
    random_invertible_matrix,
    read_sbox,
    walsh_rows,
    walsh_spectrum,
    write_sbox,
)

from .conftest import naive_ddt_max, naive_walsh


def _random_lut(n, seed):
    return Lut(n, np.random.default_rng(seed).integers(0, 1 << n, size=1 << n))


def test_lut_validation():
    with pytest.raises(WidthMismatch):
        Lut(3, np.arange(7))
    with pytest.raises(ValueError):
        Lut(2, np.array([0, 1, 2, 4]))
    lut = Lut.from_list([0, 3, 1, 2])
    assert lut.n == 2 and lut.is_permutation()
    with pytest.raises(ValueError):
        lut.table[0] = 1


# --------------------------------------------------------------------------
# DDT


@pytest.mark.parametrize("n", [1, 3, 6])
def test_identity_lut_du(n):
    rep = differential_uniformity(identity_lut(n))
    assert rep.max_uniformity == 1 << n
    assert rep.spectrum == {0: ((1 << n) - 1) * ((1 << n) - 1), 1 << n: (1 << n) - 1}


@pytest.mark.parametrize("seed", range(4))
def test_ddt_against_naive(seed):
    lut = _random_lut(6, seed)
    assert differential_uniformity(lut).max_uniformity == naive_ddt_max(lut.table.tolist())
    full = ddt_naive(lut)
    assert np.all(full.sum(axis=1) == 64)
    assert np.all(full % 2 == 0)
    rep = differential_uniformity(lut)
    vals, counts = np.unique(full[1:], return_counts=True)
    assert rep.spectrum == dict(zip(vals.tolist(), counts.tolist()))


@pytest.mark.parametrize("m,k,abc,du", [(2, 1, (1, 0, 1), 2), (2, 1, (1, 0, 0), None)])
def test_family_ddt_against_naive(m, k, abc, du):
    lut = family_lut(family_create(field_create(m), k, *abc))
    naive = naive_ddt_max(lut.table.tolist())
    assert differential_uniformity(lut).max_uniformity == naive
    if du is not None:
        assert naive == du


def test_family_du_examples():
    assert differential_uniformity(family_lut(family_create(field_create(3), 1, 1, 1, 0))).max_uniformity == 2
    assert differential_uniformity(family_lut(family_create(field_create(4), 2, 1, 0, 1))).max_uniformity == 4


def test_workers_do_not_change_result():
    lut = family_lut(family_create(field_create(3), 1, 1, 1, 0))
    one = differential_uniformity(lut, workers=1)
    three = differential_uniformity(lut, workers=3)
    assert one.to_json() == three.to_json()


def test_early_abort():
    rep = differential_uniformity(identity_lut(8), abort_above=2)
    assert rep.early_aborted and rep.max_uniformity > 2
    rep = differential_uniformity(family_lut(family_create(field_create(3), 1, 1, 1, 0)), abort_above=2)
    assert not rep.early_aborted and rep.max_uniformity == 2


def test_odd_entry_is_loud(monkeypatch):
    from sqapn import kernels

    monkeypatch.setattr(kernels, "ddt_rows", lambda *a: (3, np.zeros(5, np.int64), kernels.DDT_ODD, 1))
    with pytest.raises(OracleDisagreement):
        differential_uniformity(identity_lut(2))


def test_ddt_report_json():
    js = differential_uniformity(identity_lut(2)).to_json()
    assert js == {"n": 2, "max_uniformity": 4, "spectrum": {"0": 9, "4": 3}, "early_aborted": False}


# --------------------------------------------------------------------------
# image multiplicity


def test_image_examples():
    assert image_multiplicity(family_lut(family_create(field_create(3), 1, 1, 1, 0))).kind == "bijective"
    rep = image_multiplicity(family_lut(family_create(field_create(2), 1, 1, 0, 1)))
    assert (rep.kind, rep.r, rep.label) == ("r_to_1", 3, "3-to-1")
    assert image_multiplicity(identity_lut(5)).kind == "bijective"


def test_image_irregular():
    rep = image_multiplicity(Lut.from_list([0, 1, 1, 2]))
    assert rep.kind == "irregular" and rep.histogram == {1: 2, 2: 1}
    assert image_multiplicity(Lut.from_list([1, 0, 2, 3])).kind == "irregular"
    assert image_multiplicity(Lut.from_list([0, 0, 1, 2])).kind == "irregular"


# --------------------------------------------------------------------------
# Walsh


def test_walsh_against_naive():
    lut = _random_lut(5, 7)
    rows = walsh_rows(lut, [1, 9, 31])
    for v, row in zip([1, 9, 31], rows):
        assert row.tolist() == naive_walsh(lut.table.tolist(), v)


def test_walsh_parseval_random():
    for seed in range(3):
        rep = walsh_spectrum(_random_lut(7, seed))
        assert len(rep.masks) == 127
        for vals in rep.masks.values():
            assert sum(c * w * w for w, c in vals.items()) == 1 << 14


def test_walsh_linear_lut():
    n = 6
    rng = np.random.default_rng(3)
    lin = lut_transform(LinMap3(matrix=random_invertible_matrix(n, rng)), identity_lut(n), LinMap3())
    rep = walsh_spectrum(lin)
    for vals in rep.masks.values():
        assert set(vals) <= {0, 64, -64}
        assert vals.get(64, 0) + vals.get(-64, 0) == 1


def test_walsh_snapshot_m3():
    rep = walsh_spectrum(family_lut(family_create(field_create(3), 1, 1, 1, 0)))
    assert dict(rep.total()) == {-32: 61320, 0: 130816, 32: 69496}


def test_walsh_invariant_under_linear_equivalence():
    lut = family_lut(family_create(field_create(3), 1, 1, 1, 0))
    base = walsh_spectrum(lut).total()
    rng = np.random.default_rng(2024)
    for _ in range(5):
        l1 = LinMap3(matrix=random_invertible_matrix(9, rng))
        l2 = LinMap3(matrix=random_invertible_matrix(9, rng))
        assert walsh_spectrum(lut_transform(l1, lut, l2)).total() == base


def test_walsh_errors():
    with pytest.raises(ValueError):
        walsh_spectrum(identity_lut(3), [0])
    with pytest.raises(TooLarge):
        walsh_spectrum(Lut(21, np.zeros(1 << 21, np.int64)))


def test_walsh_report_json():
    js = walsh_spectrum(identity_lut(2), [3]).to_json()
    assert js == {"n": 2, "masks": [{"v": "3", "values": {"0": 3, "4": 1}}]}


# --------------------------------------------------------------------------
# transforms


def test_lut_transform_identity_and_ddt_invariance():
    lut = _random_lut(9, 1)
    assert lut_transform(LinMap3(), lut, LinMap3()) == lut
    rng = np.random.default_rng(5)
    l1 = LinMap3((2, 0, 1), random_invertible_matrix(9, rng))
    l2 = LinMap3((1, 2, 0), random_invertible_matrix(9, rng))
    out = lut_transform(l1, lut, l2)
    assert differential_uniformity(out).spectrum == differential_uniformity(lut).spectrum


def test_linmap_errors():
    with pytest.raises(Singular):
        LinMap3(matrix=np.zeros((3, 3), dtype=np.int64))
    with pytest.raises(ValueError):
        LinMap3((0, 0, 1))
    with pytest.raises(WidthMismatch):
        lut_transform(LinMap3(matrix=np.eye(4, dtype=np.int64)), identity_lut(3), LinMap3())
    with pytest.raises(WidthMismatch):
        lut_transform(LinMap3((1, 0, 2)), identity_lut(4), LinMap3())


def test_block_permutation_semantics():
    # output block i comes from source block perm[i]
    w = Vec3(1, 2, 3).pack(2)
    got = LinMap3((2, 0, 1)).apply(np.array([w]), 6)[0]
    assert Vec3.unpack(int(got), 2) == (3, 1, 2)


# --------------------------------------------------------------------------
# sbox text format


def test_sbox_roundtrip(tmp_path):
    lut = _random_lut(6, 11)
    path = tmp_path / "s.txt"
    write_sbox(lut, path)
    lines = path.read_text().splitlines()
    assert len(lines) == 64 and all(ln == ln.lower() for ln in lines)
    assert read_sbox(path) == lut
    (tmp_path / "bad.txt").write_text("0\n1\n2\n")
    with pytest.raises(WidthMismatch):
        read_sbox(tmp_path / "bad.txt")


# --------------------------------------------------------------------------
# kernels and core


@pytest.mark.parametrize("m,k,abc", [(3, 1, (1, 1, 0)), (4, 2, (1, 0, 1))])
def test_derivative_kernel_is_subfield_line(m, k, abc):
    ctx = field_create(m)
    p = family_create(ctx, k, *abc)
    sub = subfield_elements(ctx, p.d)
    for yw in [1, 5, (1 << p.n) - 1, 3 << m]:
        y = Vec3.unpack(yw, m)
        expected = {Vec3(*(ctx.mul(lam, t) for t in y)) for lam in sub}
        assert derivative_kernel(p, y) == expected
    assert np.all(kernel_sizes(p) == 1 << p.d)


def test_derivative_kernel_zero_direction(f8):
    with pytest.raises(ZeroDirection):
        derivative_kernel(family_create(f8, 1, 1, 1, 0), Vec3(0, 0, 0))


def test_core_examples():
    assert compute_core(family_create(field_create(3), 1, 1, 1, 0)) == 1
    assert compute_core(family_create(field_create(4), 2, 1, 0, 1)) == 2
    assert compute_core(family_create(field_create(4), 1, 1, 0, 1)) == 1
    assert compute_core(family_create(field_create(6), 2, 1, 0, 1)) == 2


def _core_oracle(p):
    """Every lambda of every subfield, every y, every x."""
    from sqapn.family import scale_map

    ctx = p.ctx
    t = family_lut(p).table
    xs = np.arange(t.shape[0])
    best = 1
    for e in range(1, ctx.m + 1):
        if ctx.m % e:
            continue
        ok = True
        for lam in subfield_elements(ctx, e) - {0, 1}:
            s = scale_map(ctx, lam)
            for y in range(1, t.shape[0]):
                if not np.array_equal(t[s ^ y] ^ t[s] ^ t[y], s[t[xs ^ y] ^ t ^ t[y]]):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            best = e
    return best


@pytest.mark.parametrize("k,abc", [(2, (1, 0, 1)), (2, (1, 0, 0)), (1, (3, 5, 7)), (3, (2, 2, 2))])
def test_core_against_every_lambda(k, abc):
    p = family_create(field_create(4), k, *abc)
    assert compute_core(p) == _core_oracle(p)

import pytest

from sqapn.errors import BadTwist, BudgetExceeded, NoneFound, TooLarge
from sqapn.family import condition_has_root, family_create
from sqapn.gf import FieldCtx, field_create
from sqapn.search import SweepSpec, find_first, sweep, triple_at


def test_canonical_order():
    assert [triple_at(4, i) for i in (0, 1, 4, 16, 47)] == [(1, 0, 0), (1, 0, 1), (1, 1, 0), (2, 0, 0), (3, 3, 3)]


def test_spec_validation(f8):
    with pytest.raises(ValueError):
        SweepSpec(f8, 1, level="bogus")
    with pytest.raises(BadTwist):
        SweepSpec(f8, 3)
    with pytest.raises(ValueError):
        SweepSpec(f8, 1, limit=-1)
    assert SweepSpec(f8, 1, level="full").level == "full_ddt"
    with pytest.raises(TooLarge):
        sweep(SweepSpec(field_create(9), 1, level="full"))


def test_condition_only_leaves_fields_empty(f8):
    res = sweep(SweepSpec(f8, 1))
    assert len(res.rows) == 448
    assert all(r.projective is None and r.du is None and r.image_class is None for r in res.rows)
    assert res.summary["condition_pass"] == 146
    # oracle: the two-route condition check
    for r in res.rows[::9]:
        assert r.condition_pass == (not condition_has_root(family_create(f8, 1, r.a, r.b, r.c)))


def test_full_sweep_m2(f4):
    res = sweep(SweepSpec(f4, 1, level="full"))
    s = res.summary
    assert s["total"] == 48 and s["condition_pass"] == 18
    assert s["verified_du_equals_2^d"] == 18 and s["violations"] == 0 and not s["partial"]
    for r in res.rows:
        if r.condition_pass:
            assert r.du == 2 and r.image_class == "3-to-1" and r.projective
        else:
            assert r.projective is False


def test_full_sweep_m3_k2(f8):
    s = sweep(SweepSpec(f8, 2, level="full")).summary
    assert (s["total"], s["condition_pass"], s["verified_du_equals_2^d"], s["violations"]) == (448, 146, 146, 0)


def test_projective_level(f8):
    res = sweep(SweepSpec(f8, 1, level="proj", limit=80))
    assert len(res.rows) == 80
    assert all(r.projective == r.condition_pass for r in res.rows)
    assert all(r.du is None for r in res.rows)


def test_m4_condition_counts(f16):
    assert sweep(SweepSpec(f16, 1)).summary["condition_pass"] == 1170
    assert sweep(SweepSpec(f16, 3)).summary["condition_pass"] == 1170
    assert sweep(SweepSpec(f16, 2)).summary["condition_pass"] == 1300


def test_m5_condition_count():
    assert sweep(SweepSpec(field_create(5), 1)).summary["condition_pass"] == 9362


def test_basis_independence():
    other = FieldCtx(3, 0b1101)
    assert sweep(SweepSpec(other, 1)).summary["condition_pass"] == 146


def test_determinism_across_workers(f8):
    one = sweep(SweepSpec(f8, 1, level="full", workers=1))
    two = sweep(SweepSpec(f8, 1, level="full", workers=2))
    assert one.to_csv() == two.to_csv()
    assert one.to_json() == two.to_json()


def test_csv_shape(f4):
    text = sweep(SweepSpec(f4, 1, level="full", limit=3)).to_csv().splitlines()
    assert text[0] == "a,b,c,condition_pass,projective,du,image_class"
    assert text[1:] == ["1,0,0,0,0,>=4,irregular", "1,0,1,1,1,2,3-to-1", "1,0,2,0,0,>=4,irregular"]


def test_find_first(f4, f8):
    first = find_first(SweepSpec(f8, 1, level="full"))
    assert (first.a, first.b, first.c, first.du, first.image_class) == (1, 0, 1, 2, "bijective")
    row = find_first(SweepSpec(f4, 1, level="full"))
    assert (row.a, row.b, row.c, row.du, row.violations) == (1, 0, 1, 2, [])
    with pytest.raises(NoneFound) as exc:
        find_first(SweepSpec(f8, 1, limit=0))
    assert exc.value.searched == 0
    with pytest.raises(NoneFound):
        find_first(SweepSpec(f8, 1, limit=1))


def test_budget_exceeded(f16):
    with pytest.raises(BudgetExceeded) as exc:
        sweep(SweepSpec(f16, 2, level="full", budget_s=0.0))
    res = exc.value.result
    assert res.partial and res.summary["partial"]
    with pytest.raises(BudgetExceeded):
        find_first(SweepSpec(f16, 2, level="full", budget_s=0.0))

"""Shape layer: tables, globular sets, disks, sums, maps."""

import pytest

from freeglob.globset import (
    DimBoundExceeded,
    DomainMismatch,
    GlobMap,
    GlobSet,
    InequalityError,
    ShapeError,
    Table,
    compose_glob_maps,
    disk,
    enumerate_glob_maps,
    globular_sum,
    identity_map,
    parse_cell_name,
    sphere,
    validate_table,
)


# ---------------------------------------------------------------------------
# tables


def test_table_text_roundtrip():
    t = Table((2, 1, 2), (0, 0))
    assert t.text() == "2 1 2 / 0 0"
    assert Table.from_text(t.text()) == t
    assert Table.from_text("3") == Table((3,), ())


def test_table_shape_accessors():
    t = Table((2, 2), (1,))
    assert t.width == 2
    assert t.dim == 2
    assert Table((0,), ()).dim == 0


def test_table_row_length_mismatch():
    with pytest.raises(ShapeError):
        validate_table(Table((1, 1), ()))


def test_table_zigzag_violations():
    with pytest.raises(InequalityError):
        validate_table(Table((1, 1), (1,)))
    with pytest.raises(InequalityError):
        validate_table(Table((2, 1), (1,)))


def test_table_negative_and_bound():
    with pytest.raises(ShapeError):
        validate_table(Table((-1,), ()))
    with pytest.raises(DimBoundExceeded):
        validate_table(Table((3,), ()), dim_bound=2)


# ---------------------------------------------------------------------------
# globular sets


def test_globset_requires_globularity():
    # an edge between objects is fine
    GlobSet({"a": 0, "b": 0, "e": 1}, {"e": "a"}, {"e": "b"})
    # a 2-cell whose parallelism fails: ss != st
    with pytest.raises(ShapeError):
        GlobSet(
            {"a": 0, "b": 0, "c": 0, "e": 1, "f": 1, "x": 2},
            {"e": "a", "f": "a", "x": "e"},
            {"e": "b", "f": "c", "x": "f"},
        )


def test_globset_missing_boundary():
    with pytest.raises(ShapeError):
        GlobSet({"e": 1}, {"e": "a"}, {"e": "b"})


def test_globset_boundary_walk():
    g = disk(3)
    assert g.boundary("g3", 1, "src") == "s1"
    assert g.boundary("g3", 0, "tgt") == "t0"
    assert g.boundary("s2", 2, "src") == "s2"


def test_globset_json_roundtrip():
    g = globular_sum(Table((2, 1, 2), (0, 0))).gs
    h = GlobSet.from_json(g.to_json())
    assert h == g
    assert hash(h) == hash(g)


def test_disk_cells():
    assert disk(0).cells() == ["g0"]
    d2 = disk(2)
    assert len(d2) == 5
    assert sorted(d2.cells(1)) == ["s1", "t1"]
    assert d2.src("g2") == "s1"
    assert d2.tgt("s1") == "t0"


def test_sphere_cells():
    s1 = sphere(1)
    assert len(s1) == 4
    assert s1.dim == 1
    # both generating arrows are parallel
    assert s1.src("s1") == s1.src("t1")
    assert s1.tgt("s1") == s1.tgt("t1")


def test_parse_cell_name():
    assert parse_cell_name("0s1") == (0, "s", 1)
    assert parse_cell_name("12g3") == (12, "g", 3)
    with pytest.raises(ValueError):
        parse_cell_name("g2")


# ---------------------------------------------------------------------------
# globular sums
#
# Cell counts below are hand counts: summand disks contribute 2n+1 cells
# each, and gluing at dimension d identifies d cells on each interface
# (the d-source side of the later summand with the d-target side of the
# earlier one, one cell per dimension 0..d).


SUM_SIZES = [
    (Table((1, 1), (0,)), 5, 3),
    (Table((2, 2), (0,)), 9, 3),
    (Table((2, 2), (1,)), 7, 2),
    (Table((3, 2), (1,)), 9, 2),
    (Table((2, 1, 2), (0, 0)), 11, 4),
]


@pytest.mark.parametrize("table,n_cells,n_objects", SUM_SIZES)
def test_sum_cell_counts(table, n_cells, n_objects):
    gs = globular_sum(table).gs
    assert len(gs) == n_cells
    assert len(gs.cells(0)) == n_objects


def test_sum_width_one_keeps_prefix():
    s = globular_sum(Table((2,), ()))
    assert s.top_cell(0) == "0g2"
    assert sorted(s.gs.cells()) == ["0g2", "0s0", "0s1", "0t0", "0t1"]


def test_sum_gluing_identifies_interface():
    gs = globular_sum(Table((1, 1), (0,))).gs
    cells = set(gs.cells())
    # summand 0 composes after summand 1, so its source side is the interface
    shared = {"0s0", "1t0"} & cells
    assert len(shared) == 1
    rep = shared.pop()
    assert gs.src("0g1") == rep
    assert gs.tgt("1g1") == rep


def test_sum_injections_are_maps():
    s = globular_sum(Table((2, 2), (1,)))
    assert len(s.injections) == 2
    for l, inj in enumerate(s.injections):
        assert inj.dom == disk(2)
        assert inj.cod == s.gs
        assert s.top_cell(l) == inj.mapping["g2"]
    # gluing at 1 shares the whole arrow boundary
    i0, i1 = s.injections
    assert i0.mapping["s1"] == i1.mapping["t1"]
    assert i0.mapping["s0"] == i1.mapping["s0"]
    assert i0.mapping["t0"] == i1.mapping["t0"]


def test_sum_is_cached():
    assert globular_sum(Table((2, 2), (1,))) is globular_sum(Table((2, 2), (1,)))


# ---------------------------------------------------------------------------
# maps


def test_glob_map_validates_commutation():
    d1 = disk(1)
    with pytest.raises(ShapeError):
        GlobMap(d1, d1, {"s0": "t0", "t0": "s0", "g1": "g1"})
    with pytest.raises(ShapeError):
        GlobMap(d1, d1, {"s0": "s0", "t0": "t0"})
    with pytest.raises(ShapeError):
        GlobMap(d1, d1, {"s0": "s0", "t0": "t0", "g1": "g1", "zz": "s0"})


def test_glob_map_dimension_preservation():
    with pytest.raises(ShapeError):
        GlobMap(disk(0), disk(1), {"g0": "g1"})


def test_compose_glob_maps_identity_laws():
    g = globular_sum(Table((1, 1), (0,))).gs
    inj = globular_sum(Table((1, 1), (0,))).injections[1]
    ident_d = identity_map(disk(1))
    ident_g = identity_map(g)
    assert compose_glob_maps(inj, ident_d) == inj
    assert compose_glob_maps(ident_g, inj) == inj


def test_compose_glob_maps_rejects_mismatch():
    with pytest.raises(DomainMismatch):
        compose_glob_maps(identity_map(disk(1)), identity_map(disk(2)))


# Maps out of a disk are free on the image of the top cell, so the hom
# count equals the number of cells of that dimension.  This gives an
# independent check of the enumerator.
@pytest.mark.parametrize(
    "table",
    [Table((0,), ()), Table((1, 1), (0,)), Table((2, 2), (1,)), Table((2, 1, 2), (0, 0))],
)
@pytest.mark.parametrize("n", [0, 1, 2])
def test_enumerate_disk_maps_counts(table, n):
    cod = globular_sum(table).gs
    maps = list(enumerate_glob_maps(disk(n), cod))
    assert len(maps) == len(cod.cells(n))
    assert len(set(maps)) == len(maps)


def test_enumerate_contains_identity():
    g = globular_sum(Table((2, 2), (0,))).gs
    assert identity_map(g) in set(enumerate_glob_maps(g, g))


def test_enumerate_no_maps_downward():
    assert list(enumerate_glob_maps(disk(1), disk(0))) == []


def test_enumerate_order_is_stable():
    a = [m.mapping for m in enumerate_glob_maps(sphere(1), disk(2))]
    b = [m.mapping for m in enumerate_glob_maps(sphere(1), disk(2))]
    assert a == b

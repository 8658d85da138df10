import itertools
from pathlib import Path

import pytest

from topocc.heyting import (ForeignOpen, Space, TopologyError, check_heyting_identities, diamond,
                            exponent_csv, format_space, one_point, parse_space, sierpinski)
from topocc.posets import enumerate_spaces

GOLDENS = Path(__file__).parent / "goldens"


def oracle_opens(sp):
    """Down-closed subsets, by brute force over all subsets."""
    out = []
    for m in range(1 << sp.n):
        if all(not (m >> b) & 1 or all((m >> a) & 1 for a in range(sp.n) if sp.le[a][b]) for b in range(sp.n)):
            out.append(m)
    return out


def oracle_exp(opens, b, a):
    """Union of every open ``z`` with ``z /\\ a <= b``."""
    acc = 0
    for z in opens:
        if z & a & ~b == 0:
            acc |= z
    return acc


SPACES = list(enumerate_spaces(5)) + list(enumerate_spaces(4, require_well_behaved=False))


def test_opens_match_brute_force():
    for sp in SPACES:
        assert list(sp.opens) == oracle_opens(sp)


def test_exponent_matches_definition():
    for sp in SPACES:
        ops = sp.opens
        for a, b in itertools.product(ops, repeat=2):
            assert sp.exp(b, a) == oracle_exp(ops, b, a)


def test_adjunction_exhaustive():
    for sp in SPACES:
        ops = sp.opens
        for x, y, z in itertools.product(ops, repeat=3):
            assert sp.le_open(x, sp.exp(z, y)) == sp.le_open(x & y, z)


def test_big_meet_and_join_are_open():
    for sp in SPACES:
        ops = sp.opens
        for k in range(len(ops) + 1):
            for fam in itertools.islice(itertools.combinations(ops, k), 50):
                assert sp.big_meet(fam) in sp.index
                assert sp.big_join(fam) in sp.index


def test_min_nbhd_is_intersection_of_opens():
    for sp in SPACES:
        for x in range(sp.n):
            acc = sp.full
            for o in sp.opens:
                if (o >> x) & 1:
                    acc &= o
            assert sp.min_nbhd(x) == acc


def test_inf_points():
    s = sierpinski()
    assert s.inf_points([0, 1]) == 0
    assert s.inf_points([]) == s.top == 1
    d = diamond()
    assert d.inf_points([1, 2]) == 0
    for sp in enumerate_spaces(5):
        for k in range(1, sp.n + 1):
            for pts in itertools.combinations(range(sp.n), k):
                acc = sp.full
                for p in pts:
                    acc &= sp.down[p]
                assert sp.down[sp.inf_points(pts)] == acc


def test_sierpinski_table_matches_golden():
    assert exponent_csv(sierpinski()) == (GOLDENS / "table_sierpinski.csv").read_text()


def test_diamond_table_against_definition():
    d = diamond()
    assert d.opens == (0b0000, 0b0001, 0b0011, 0b0101, 0b0111, 0b1111)
    assert exponent_csv(d) == (GOLDENS / "table_diamond_computed.csv").read_text()


def test_well_behavedness():
    assert sierpinski().is_well_behaved and diamond().is_well_behaved
    vee = Space.from_poset(3, [(0, 1), (0, 2)])
    rep = vee.well_behaved()
    assert not rep and "top" in rep.reason
    wedge = Space.from_poset(4, [(0, 2), (1, 2), (0, 3), (1, 3)])
    assert not wedge.well_behaved()
    with pytest.raises(TopologyError):
        wedge.inf_table


def test_corrupted_family_is_rejected():
    with pytest.raises(TopologyError):
        Space.from_opens(2, [0, 1, 2])  # union {0,1} missing
    with pytest.raises(TopologyError):
        Space.from_opens(2, [1, 3])
    sp = Space.from_opens(2, [0, 1, 3])
    assert sp.le == sierpinski().le


def test_non_t0_preorder():
    sp = Space.from_poset(2, [(0, 1), (1, 0)])
    assert not sp.is_t0
    with pytest.raises(TopologyError):
        Space.from_poset(2, [(0, 1), (1, 0)], strict=True)


def test_foreign_open():
    with pytest.raises(ForeignOpen):
        sierpinski().exp(2, 1)


def test_laws_hold_on_chains():
    for n in range(1, 6):
        chain = Space.from_poset(n, [(i, i + 1) for i in range(n - 1)])
        assert check_heyting_identities(chain).ok


def test_strict_below_law_fails_off_chains():
    # y <= x strictly does not force y^x = y once the algebra is not linear
    rep = check_heyting_identities(diamond())
    assert rep.failed_laws() == [9]
    x, y = rep.failures[9]
    d = diamond()
    ox, oy = d.opens[x], d.opens[y]
    assert d.le_open(oy, ox) and ox != oy and d.exp(oy, ox) != oy


def test_laws_other_than_strict_below_hold_everywhere():
    for sp in list(enumerate_spaces(6)) + list(enumerate_spaces(4, require_well_behaved=False)):
        rep = check_heyting_identities(sp)
        assert set(rep.failed_laws()) <= {9}


def test_sampling_beyond_limit():
    rep = check_heyting_identities(diamond(), exhaustive_limit=3)
    assert not rep.exhaustive
    assert check_heyting_identities(diamond()).exhaustive


def test_space_file_round_trip():
    for sp in [one_point(), sierpinski(), diamond()] + list(enumerate_spaces(5)):
        again = parse_space(format_space(sp))
        assert again.le == sp.le and again.names == sp.names


def test_space_file_errors():
    with pytest.raises(ValueError):
        parse_space("le 0 1\npoints 2")
    with pytest.raises(ValueError):
        parse_space("points 2\nle 0 x")
    with pytest.raises(ValueError):
        parse_space("points 2\nfoo")
    sp = parse_space("# comment\npoints 3\nname 0 b\nle b 1\nle 1 2\n")
    assert sp.names == ("b", "1", "2") and sp.le[0][2]

import importlib
import os
import subprocess
import sys

import pytest

from topocc import _pykernels as py
from topocc import kernels
from topocc.posets import enumerate_spaces

cy = pytest.importorskip("topocc._ckernels", reason="compiled kernels not built")

SPACES = list(enumerate_spaces(5, require_well_behaved=False)) + list(enumerate_spaces(6))


def test_backend_selected():
    assert kernels.BACKEND == "cython"


def test_fallback_when_forced():
    code = "import topocc.kernels as k; print(k.BACKEND)"
    env = dict(os.environ, TOPOCC_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_interior_parity():
    for sp in SPACES:
        down = list(sp.down)
        for m in range(1 << sp.n):
            assert cy.interior(m, down) == py.interior(m, down)


def test_table_parity():
    for sp in SPACES:
        opens, down = list(sp.opens), list(sp.down)
        ex_c = list(cy.exp_table(opens, down, sp.full))
        ex_p = list(py.exp_table(opens, down, sp.full))
        assert ex_c == ex_p
        mj_c = [list(t) for t in cy.meet_join_tables(opens)]
        mj_p = [list(t) for t in py.meet_join_tables(opens)]
        assert mj_c == mj_p
        for a in opens:
            for b in opens:
                assert cy.exp_mask(b, a, down, sp.full) == py.exp_mask(b, a, down, sp.full)


def test_law_scan_parity():
    for sp in SPACES:
        opens, down = list(sp.opens), list(sp.down)
        ex = py.exp_table(opens, down, sp.full)
        meet, join = py.meet_join_tables(opens)
        assert dict(cy.scan_laws(opens, ex, meet, join)) == dict(py.scan_laws(opens, ex, meet, join))
    assert cy.SCANNED_LAWS == py.SCANNED_LAWS

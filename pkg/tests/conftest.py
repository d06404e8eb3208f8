import importlib

import numpy as np
import pytest

from ftgfmul import bch_codec
from ftgfmul.gf_core import build_field

# lines collected by test_acceptance, printed once at the end of the run
ACCEPTANCE_LINES = {}

# every SyndromeSet built during the session, re-checked with carry-less
# arithmetic independently of the class's own S_2j = S_j^2 guard
SYNDROME_SETS_CHECKED = [0]
SYNDROME_VIOLATIONS = []


def _clmul_square(v, poly, m):
    sq = 0
    for j in range(m):
        if (v >> j) & 1:
            sq |= 1 << (2 * j)
    for d in range(2 * m - 2, m - 1, -1):
        if (sq >> d) & 1:
            sq ^= poly << (d - m)
    return sq


def _counting_post_init(orig):
    def wrapped(self):
        ctx = self.ctx
        vals = self.values
        for j in range(1, len(vals) // 2 + 1):
            if vals[2 * j - 1] != _clmul_square(vals[j - 1], ctx.poly, ctx.m):
                SYNDROME_VIOLATIONS.append((ctx.m, vals))
                break
        SYNDROME_SETS_CHECKED[0] += 1
        orig(self)
    return wrapped


bch_codec.SyndromeSet.__post_init__ = _counting_post_init(bch_codec.SyndromeSet.__post_init__)


def pytest_collection_modifyitems(items):
    # suite-wide checks must see every other test's work first
    last = [it for it in items if it.get_closest_marker("suite_wide")]
    items[:] = [it for it in items if not it.get_closest_marker("suite_wide")] + last


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])


@pytest.fixture(scope="session")
def gf8():
    # x^3 + x^2 + 1
    return build_field(3, 0xD)


@pytest.fixture(scope="session")
def gf16():
    return build_field(4, 0x13)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def kernel_backends():
    mods = [importlib.import_module("ftgfmul._kernels.numpy_impl")]
    try:
        mods.append(importlib.import_module("ftgfmul._kernels.numba_impl"))
    except ImportError:
        pass
    return mods

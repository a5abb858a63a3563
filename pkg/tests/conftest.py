import random
from fractions import Fraction
from functools import lru_cache

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from rauzy_ends.genperm import all_reduced
from rauzy_ends.suspension import SuspensionDatum, Vec, check_suspension, is_irreducible, witness_suspension

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large]
)
settings.load_profile("default")

PROPERTY_CASES = 1000


def _pool():
    rng = random.Random(20240229)
    out = []
    for d in (2, 3, 4):
        out += [p for p in all_reduced(d) if is_irreducible(p)]
    for d, k in ((5, 400), (6, 600)):
        cands = list(all_reduced(d))
        rng.shuffle(cands)
        out += [p for p in cands[:k] if is_irreducible(p)]
    return tuple(out)


IRREDUCIBLE = _pool()


@lru_cache(maxsize=None)
def base_witness(p):
    return witness_suspension(p)


irreducible_perms = st.sampled_from(IRREDUCIBLE)


@st.composite
def suspension_pairs(draw, perms=irreducible_perms):
    """(p, z): an LP witness moved by a random rational perturbation and stretch."""
    p = draw(perms)
    z = base_witness(p)
    scale = min(min(v.re for v in z.zeta), min(abs(v.im) for v in z.zeta if v.im) if any(v.im for v in z.zeta) else 1)
    noise = [
        (Fraction(draw(st.integers(-64, 64)), 256), Fraction(draw(st.integers(-64, 64)), 256))
        for _ in range(p.d)
    ]
    lam = Fraction(2) ** draw(st.integers(-3, 3))
    for _ in range(40):
        cand = SuspensionDatum(
            tuple(Vec((v.re + a * scale) * lam, (v.im + b * scale) / lam) for v, (a, b) in zip(z.zeta, noise))
        )
        if not check_suspension(p, cand):
            return p, cand
        scale /= 2
    return p, SuspensionDatum(tuple(Vec(v.re * lam, v.im / lam) for v in z.zeta))


@pytest.fixture(scope="session")
def irreducible_pool():
    return IRREDUCIBLE


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS, TITLES
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance")
    for n in sorted(TITLES):
        terminalreporter.write_line(RESULTS.get(n, f"[----] {n}. {TITLES[n]} (not run)"))

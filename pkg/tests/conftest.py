import time

import pytest

from cmdihedral.congruence import builtin_scenario, run_scenario
from cmdihedral.charmod import build_hecke_char
from cmdihedral.qfield import IdealRep


@pytest.fixture(scope="session")
def delta_char():
    return build_hecke_char(-23, 12, IdealRep(-23, 23, 23), [11], avoid_primes=(23,))


@pytest.fixture(scope="session")
def delta_run():
    t0 = time.perf_counter()
    result = run_scenario(builtin_scenario("delta23"))
    elapsed = time.perf_counter() - t0
    return result, elapsed


@pytest.fixture(scope="session")
def curve_run():
    t0 = time.perf_counter()
    result = run_scenario(builtin_scenario("curve65533"))
    elapsed = time.perf_counter() - t0
    return result, elapsed

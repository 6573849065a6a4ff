import os
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from stralg.presentation import load_algebra
from stralg.strings import parse_string, zero_string

FIXTURES = Path(__file__).resolve().parents[1] / "src" / "stralg" / "fixtures"
NAMES = ("gamma0", "gamma", "gamma_prime", "gamma_double_prime")

settings.register_profile(
    "pinned",
    derandomize=True,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "pinned"))

_cache = {}


def algebra(name):
    if name not in _cache:
        _cache[name] = load_algebra(FIXTURES / f"{name}.alg")
    return _cache[name]


@pytest.fixture(scope="session")
def g0():
    return algebra("gamma0")


@pytest.fixture(scope="session")
def gamma():
    return algebra("gamma")


@pytest.fixture(scope="session")
def gp():
    return algebra("gamma_prime")


@pytest.fixture(scope="session")
def gpp():
    return algebra("gamma_double_prime")


def s(spec, text):
    return parse_string(spec, text)


@st.composite
def walks(draw, spec, max_len=10, base=None, side=None):
    """A random valid string, optionally extending ``base`` on ``side``."""
    if base is None:
        x = zero_string(spec, draw(st.sampled_from(spec.vertices)), draw(st.sampled_from((1, -1))))
    else:
        x = base
    steps = draw(st.integers(0, max_len))
    first = True
    for _ in range(steps):
        options = list(spec.automaton.successors(x.state))
        if first and side is not None:
            options = [o for o in options if (1 if o[0].inverse else -1) == side]
        if not options:
            break
        letter, _ = draw(st.sampled_from(options))
        x = x.prepend(letter)
        first = False
    return x


def keys(spec, max_len=8):
    from stralg.hammock import HammockKey

    return st.builds(HammockKey, walks(spec, max_len), st.sampled_from((1, -1)))

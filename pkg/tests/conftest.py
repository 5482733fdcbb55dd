from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from finfree.poly import from_roots

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

small_rationals = st.fractions(min_value=-10, max_value=10, max_denominator=6)
nonneg_rationals = st.fractions(min_value=0, max_value=10, max_denominator=6)


def rooted(root_strategy, min_d=1, max_d=6):
    """Monic polynomials given by a list of roots."""
    return st.lists(root_strategy, min_size=min_d, max_size=max_d).map(from_roots)


def lc(p, c):
    return p * Fraction(c)


def pairs(root_strategy, min_d=1, max_d=6):
    """Two monic polynomials of the same degree."""
    return st.integers(min_d, max_d).flatmap(
        lambda d: st.tuples(
            st.lists(root_strategy, min_size=d, max_size=d).map(from_roots),
            st.lists(root_strategy, min_size=d, max_size=d).map(from_roots),
        )
    )


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)

from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from omnilie.poly import Poly

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

coeffs = st.one_of(st.integers(-5, 5),
                   st.fractions(min_value=-3, max_value=3, max_denominator=4))


def polys(nvars: int, max_degree: int = 2, max_terms: int = 4):
    exps = st.tuples(*[st.integers(0, max_degree) for _ in range(nvars)])
    return st.dictionaries(exps, coeffs, max_size=max_terms).map(
        lambda d: Poly({e: Fraction(c) for e, c in d.items()}, nvars))


def points(nvars: int):
    return st.tuples(*[st.fractions(min_value=-4, max_value=4, max_denominator=5)
                       for _ in range(nvars)])


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

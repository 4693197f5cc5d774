import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20130306)


def random_xstate(rng):
    """Random valid X-state: two independent 2x2 PSD blocks sharing unit trace."""
    from twoatom.states import XState

    w = rng.dirichlet(np.ones(4))
    gg, ee, ss, aa = w
    r1, r2 = np.sqrt(rng.uniform(0, 1, 2))
    ph1, ph2 = rng.uniform(0, 2 * np.pi, 2)
    return XState(
        rho_ee=ee,
        rho_ss=ss,
        rho_aa=aa,
        rho_as=r1 * np.sqrt(ss * aa) * np.exp(1j * ph1),
        rho_eg=r2 * np.sqrt(ee * gg) * np.exp(1j * ph2),
        rho_gg=1.0 - ee - ss - aa,
    )


# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE_LINES = {}


def record(criterion, ok, detail):
    ACCEPTANCE_LINES[criterion] = f"criterion {criterion}: {'PASS' if ok else 'FAIL'}  {detail}"
    print(ACCEPTANCE_LINES[criterion])


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for key in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[key])

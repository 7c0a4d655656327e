import pytest
from hypothesis import strategies as st

from qbattery.model import SystemParams

# (criterion number, title, passed, detail), filled in by test_acceptance.py
ACCEPTANCE_RESULTS = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed, detail in sorted(ACCEPTANCE_RESULTS):
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{status}] criterion {number}: {title} -- {detail}")


@pytest.fixture
def fig1_params():
    """Weak resonant coupling at Delta_L = 0, driven at lambda_minus."""
    return SystemParams(
        omega_a=1.0, omega_b=1.0, g=0.16, drive_amplitude=0.1, drive_frequency=0.84,
        gamma_a=0.05, lamb_shift=0.0, n_thermal=0.0,
    )


@st.composite
def valid_params(draw, g_min=0.01):
    omega_a = draw(st.floats(0.2, 3.0))
    omega_b = draw(st.floats(0.2, 3.0))
    lamb_shift = draw(st.floats(-0.5, 0.5).filter(lambda d: omega_a + d > 0.05))
    return SystemParams(
        omega_a=omega_a,
        omega_b=omega_b,
        g=draw(st.floats(g_min, 2.0)),
        drive_amplitude=draw(st.floats(0.0, 0.5)),
        drive_frequency=draw(st.floats(-2.0, 3.0)),
        gamma_a=draw(st.floats(0.0, 0.5)),
        lamb_shift=lamb_shift,
        n_thermal=0.0,
    )

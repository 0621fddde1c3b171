"""Shared fixtures and the acceptance-report hook."""

import functools
import math

import pytest

import photonforge as pf

ACCEPTANCE = {}


def record_acceptance(num, desc, passed):
    ACCEPTANCE[num] = (desc, bool(passed))


def criterion(num, desc):
    """Wrap an acceptance test so its outcome lands in the final report."""

    def deco(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                result = fn(*args, **kwargs)
            except BaseException:
                record_acceptance(num, desc, False)
                raise
            record_acceptance(num, desc, True)
            return result

        return wrapper

    return deco


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        desc, ok = ACCEPTANCE[num]
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"ACCEPTANCE {num}: {status} - {desc}")


@pytest.fixture(scope="session")
def splitter_stats():
    """Beam-splitter photon statistics for the two standard drives."""
    params = pf.MirrorQubitParams(gamma=0.5)
    return {
        a: pf.run_beam_splitter(params, pf.BeamSplitterConfig(alpha0=a))
        for a in (5.0, 10.0)
    }


@pytest.fixture(scope="session")
def release_results():
    """Storage-and-release statistics for the two standard drives."""
    params = pf.MirrorQubitParams(gamma=1.0)
    return {
        a: pf.run_shaped_release(params, alpha0=a)
        for a in (5.0, 10.0)
    }


@pytest.fixture(scope="session")
def stored_excitation_run():
    """Excited qubit decaying through the line, no drive: one photon total."""
    params = pf.MirrorQubitParams(gamma=1.0)
    drive = pf.DriveSchedule(())
    phase = pf.PhaseSchedule.constant(math.pi / 2.0)
    rho0 = pf.DensityMatrix.excited(2)
    return pf.simulate(params, drive, phase, 12.0, rho0=rho0, dt=0.005)

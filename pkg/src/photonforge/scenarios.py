"""Named end-to-end experiments built from the dynamics and statistics layers.

Each runner is a pure function from parameters to numbers; sweeps fan
rows out over a thread pool (capped by the PHOTONFORGE_THREADS
environment variable) and reassemble them in deterministic order.

The experiments:

* beam splitter: a square pi pulse drives the maximally coupled qubit
  (phi = 0); the emission interferes with the attenuated drive on an
  unbalanced splitter (reflectivity r) so the transmitted coherent
  background cancels, leaving the single-photon component. Counting
  statistics are taken in the splitter output mode.
* shaped release: prepare at low coupling (phi_i near pi), park in the
  dark point (phi = pi), then reopen the coupling at t_r, either at a
  constant phase or along a sampled ramp that shapes the released
  wave packet.
* cascade: a three-level ladder driven on the weak direct 0-2 line
  emits a photon pair (idler then signal); window-integrated
  cross-correlations quantify pair quality.
* flying-qubit encoding: optimize a single square drive segment so the
  emitted field carries a chosen superposition weight.
* cancellation budget: phasor algebra for how well two paths with
  amplitude, phase, or frequency mismatch can cancel.
"""

from __future__ import annotations

import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np
from scipy.optimize import minimize

from .dynamics import (
    DriveSchedule,
    MirrorQubitParams,
    PhaseSchedule,
    effective_coupling,
    pi_pulse_width,
    simulate,
)
from .statistics import (
    CrossPairResult,
    PhotonStatistics,
    counting_statistics,
    cross_pair_integral,
    csi_metric,
)

__all__ = [
    "WavePacket",
    "minimal_sufficient_gamma",
    "shape_to_schedule",
    "BeamSplitterConfig",
    "run_beam_splitter",
    "ShapedReleaseResult",
    "run_shaped_release",
    "run_cascade",
    "sweep_cascade",
    "sweep_nonradiative",
    "sweep_wait_time",
    "FlyingQubitTarget",
    "EncodeResult",
    "encode_flying_qubit",
    "CancellationInputs",
    "CancellationOutcome",
    "cancellation_budget",
    "thread_count",
]


def thread_count() -> int:
    """Worker cap for sweeps, from PHOTONFORGE_THREADS or the CPU count."""
    env = os.environ.get("PHOTONFORGE_THREADS")
    if env is not None:
        n = int(env)
        if n < 1:
            raise ValueError("PHOTONFORGE_THREADS must be a positive integer")
        return n
    return min(4, os.cpu_count() or 1)


def _fan_out(fn, items):
    items = list(items)
    n = thread_count()
    if n == 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as ex:
        return list(ex.map(fn, items))


# ---------------------------------------------------------------------------
# wave packets and coupling schedules


@dataclass(frozen=True)
class WavePacket:
    """Target output envelope xi(t) on a time grid, normalized to unit power.

    grid holds absolute emission times; xi is the complex amplitude with
    Integral |xi|^2 dt = 1 (enforced on construction).
    """

    grid: np.ndarray
    xi: np.ndarray
    kind: str = "custom"

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        xi = np.asarray(self.xi, dtype=complex)
        if grid.ndim != 1 or grid.shape != xi.shape or len(grid) < 3:
            raise ValueError("packet needs matching 1d grid and amplitude arrays")
        if np.any(np.diff(grid) <= 0):
            raise ValueError("packet grid must be strictly increasing")
        power = np.trapezoid(np.abs(xi) ** 2, grid)
        if not power > 0:
            raise ValueError("packet has no power")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "xi", xi / math.sqrt(power))

    @classmethod
    def exponential(cls, kappa: float, t_start: float,
                    duration: Optional[float] = None,
                    dt: float = 0.005) -> "WavePacket":
        """One-sided decaying exponential, |xi|^2 ~ e^{-kappa (t-t0)}.

        The hard cutoff at t_start + duration makes the required
        coupling diverge at the end; the scheduler clips it there.
        """
        if kappa <= 0:
            raise ValueError("kappa must be positive")
        if duration is None:
            duration = 12.0 / kappa
        grid = np.arange(t_start, t_start + duration + dt / 2, dt)
        xi = np.exp(-kappa * (grid - t_start) / 2.0).astype(complex)
        return cls(grid, xi, kind="exponential")

    @classmethod
    def gaussian(cls, center: float, width: float,
                 t_start: Optional[float] = None,
                 t_end: Optional[float] = None,
                 dt: float = 0.005) -> "WavePacket":
        """Gaussian intensity profile of standard deviation `width`.

        |xi(t)|^2 ~ exp(-(t-center)^2 / (2 width^2)), truncated at
        4 sigma by default.
        """
        if width <= 0:
            raise ValueError("width must be positive")
        if t_start is None:
            t_start = center - 4.0 * width
        if t_end is None:
            t_end = center + 4.0 * width
        grid = np.arange(t_start, t_end + dt / 2, dt)
        xi = np.exp(-((grid - center) ** 2) / (4.0 * width ** 2)).astype(complex)
        return cls(grid, xi, kind="gaussian")

    @property
    def start(self) -> float:
        return float(self.grid[0])

    @property
    def end(self) -> float:
        return float(self.grid[-1])

    def intensity(self) -> np.ndarray:
        return np.abs(self.xi) ** 2


def _release_rate(packet: WavePacket) -> np.ndarray:
    """Required coupling Gamma_eff(t) = |xi|^2 / Integral_t^end |xi|^2."""
    grid = packet.grid
    xi2 = packet.intensity()
    xi2 = xi2 / np.trapezoid(xi2, grid)
    strips = 0.5 * (xi2[1:] + xi2[:-1]) * np.diff(grid)
    tail = np.concatenate([np.cumsum(strips[::-1])[::-1], [0.0]])
    with np.errstate(divide="ignore", invalid="ignore"):
        rate = np.where(tail > 0, xi2 / tail, np.inf)
    return rate


def minimal_sufficient_gamma(packet: WavePacket,
                             clip_budget: float = 0.01) -> float:
    """Smallest line rate whose 2*Gamma ceiling clips at most the budget.

    Sorts the required rates descending and walks the cumulative packet
    mass until the budget is spent; the rate at that point, halved, is
    the answer.
    """
    rate = _release_rate(packet)
    xi2 = packet.intensity()
    xi2 = xi2 / np.trapezoid(xi2, packet.grid)
    order = np.argsort(rate)[::-1]
    w = xi2 * np.gradient(packet.grid)
    cum = np.cumsum(w[order])
    idx = min(int(np.searchsorted(cum, clip_budget)), len(cum) - 1)
    return float(rate[order][idx] / 2.0)


def shape_to_schedule(packet: WavePacket, gamma: float,
                      clip_budget: float = 0.01) -> PhaseSchedule:
    """Phase ramp phi(t) releasing the stored excitation as `packet`.

    Inverts Gamma_eff(phi) = Gamma (1 + cos phi) against the required
    release rate; rates above the 2*Gamma ceiling are clipped, and if
    the clipped packet mass exceeds `clip_budget` the packet is
    declared unreachable at this Gamma.
    """
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    grid = packet.grid
    xi2 = packet.intensity()
    xi2 = xi2 / np.trapezoid(xi2, grid)
    rate = _release_rate(packet)
    clip_mass = float(np.trapezoid(np.where(rate > 2.0 * gamma, xi2, 0.0), grid))
    if clip_mass > clip_budget:
        need = minimal_sufficient_gamma(packet, clip_budget)
        raise ValueError(
            f"packet needs coupling above 2*gamma over {clip_mass:.2%} of its "
            f"norm (budget {clip_budget:.2%}); a line rate of at least "
            f"{need:.4g} would suffice")
    rate_c = np.clip(rate, 0.0, 2.0 * gamma)
    phi = np.arccos(np.clip(rate_c / gamma - 1.0, -1.0, 1.0))
    t0, t1 = float(grid[0]), float(grid[-1])
    return PhaseSchedule(
        segments=((-math.inf, t0, math.pi), (t1, math.inf, float(phi[-1]))),
        ramp=(grid, phi),
        release_time=t0,
        clip_fraction=clip_mass,
    )


# ---------------------------------------------------------------------------
# beam-splitter single-photon source


@dataclass(frozen=True)
class BeamSplitterConfig:
    """Unbalanced splitter extracting the emission from the drive path.

    The cancellation tone on the transmitted port is derived from
    (r, tau, alpha_in), so it is exact unless the mismatch knobs
    amp_error / phase_error are set.
    """

    r: float = 0.995
    alpha0: complex = 5.0
    t0: float = 0.0
    t_end: float = 20.0
    dt: float = 0.005
    amp_error: float = 0.0
    phase_error: float = 0.0

    def __post_init__(self):
        if not (0.0 < self.r <= 1.0):
            raise ValueError("reflectivity r must be in (0, 1]")
        if abs(self.alpha0) <= 0:
            raise ValueError("alpha0 must be nonzero")
        if self.t_end <= self.t0:
            raise ValueError("t_end must exceed t0")

    @property
    def tau(self) -> float:
        return math.sqrt(max(0.0, 1.0 - self.r * self.r))


def run_beam_splitter(params: MirrorQubitParams, config: BeamSplitterConfig,
                      cutoff: int = 3) -> PhotonStatistics:
    """Counting statistics of the splitter output over [t0, t_end].

    The counting mode is M(t) = i r L + c(t) with the residual drive
    c(t) = -i r alpha_in(t) (1 - (1 + eps) e^{i delta}); with perfect
    matching c vanishes and the statistics are the bare emission scaled
    by r^2 per photon order.
    """
    if params.levels != 2:
        raise ValueError("the beam-splitter source is a two-level scenario")
    geff = effective_coupling(params.gamma, 0.0)
    drive = DriveSchedule.square_pi_pulse(config.alpha0, config.t0, geff)
    phase = PhaseSchedule.constant(0.0)
    run = simulate(params, drive, phase, config.t_end, t_start=config.t0,
                   dt=config.dt)
    mismatch = 1.0 - (1.0 + config.amp_error) * np.exp(1j * config.phase_error)
    eye = np.eye(2, dtype=complex)
    mcache = {}
    ops = []
    for i, t in enumerate(run.times):
        a_in = run.drive.amplitude_at(t)
        key = (id(run.counting_ops[i]), a_in)
        if key not in mcache:
            c = -1j * config.r * a_in * mismatch
            mcache[key] = 1j * config.r * run.counting_ops[i] + c * eye
        ops.append(mcache[key])
    return counting_statistics(run, cutoff=cutoff, counting_ops=ops)


# ---------------------------------------------------------------------------
# shaped release


@dataclass
class ShapedReleaseResult:
    """Release statistics plus the full-timeline flux and phase traces."""

    stats: PhotonStatistics
    times: np.ndarray
    flux: np.ndarray
    phase: np.ndarray
    p_exc: np.ndarray
    p_exc_at_release: float
    emitted_fraction: float
    clip_fraction: float = 0.0
    flux_match_l2: Optional[float] = None


def run_shaped_release(params: MirrorQubitParams, *, alpha0: complex = 5.0,
                       phi_i: float = 0.9 * math.pi, t0: float = 1.0,
                       t_r: float = 8.0, t_end: float = 20.0,
                       release: Union[float, WavePacket, PhaseSchedule] = math.pi / 2,
                       cutoff: int = 3, dt: float = 0.005,
                       clip_budget: float = 0.01) -> ShapedReleaseResult:
    """Prepare at phi_i, store at the dark point, release at t_r.

    `release` selects the reopened coupling: a constant phase, a target
    WavePacket (converted to a phase ramp), or a prebuilt PhaseSchedule.
    Counting statistics cover [t_r, t_end], except for packet releases
    where they cover the packet support.
    """
    if params.levels != 2:
        raise ValueError("shaped release is a two-level scenario")
    geff_i = effective_coupling(params.gamma, phi_i)
    t_w = pi_pulse_width(abs(alpha0), geff_i)
    t_store = t0 + t_w
    if t_store > t_r + 1e-12:
        raise ValueError(
            f"preparation ends at {t_store:.4f}, after the release time {t_r}")

    packet: Optional[WavePacket] = None
    if isinstance(release, PhaseSchedule):
        sched = release
    elif isinstance(release, WavePacket):
        packet = release
        if abs(packet.start - t_r) > 1e-9:
            raise ValueError(
                f"packet starts at {packet.start}, not at the release "
                f"time {t_r}; rebuild it on the release window")
        if packet.end > t_end + 1e-9:
            warnings.warn(
                "release window ends before the packet support; the tail "
                "will be clipped", stacklevel=2)
        ramp_sched = shape_to_schedule(packet, params.gamma, clip_budget)
        sched = PhaseSchedule(
            segments=((-math.inf, t_store, float(phi_i)),
                      (t_store, t_r, math.pi)) + ramp_sched.segments[1:],
            ramp=ramp_sched.ramp,
            release_time=t_r,
            clip_fraction=ramp_sched.clip_fraction,
        )
    else:
        sched = PhaseSchedule.storage_release(phi_i, t_store, t_r, float(release))

    drive = DriveSchedule(((t0, t_store, complex(alpha0)),))
    pre = simulate(params, drive, sched, t_r, t_start=0.0, dt=dt)
    rho_r = pre.states[-1].reshape((2, 2), order="F")
    p_exc_r = float(rho_r[1, 1].real)

    stats_end = t_end
    if packet is not None and packet.end < t_end:
        stats_end = None  # set below from the realized grid
    run = simulate(params, DriveSchedule(()), sched, t_end, t_start=t_r,
                   rho0=rho_r, dt=dt)
    if packet is not None and packet.end < t_end:
        # statistics over the packet support; use the exact grid value
        i_end = int(np.argmin(np.abs(run.times - packet.end)))
        stats_end = float(run.times[i_end])
    stats = counting_statistics(run, cutoff=cutoff,
                                window=(t_r, stats_end))

    times = np.concatenate([pre.times[:-1], run.times])
    states = pre.states[:-1] + run.states
    ops = pre.counting_ops[:-1] + run.counting_ops
    flux = np.empty(len(times))
    p_exc = np.empty(len(times))
    for i in range(len(times)):
        rho = states[i].reshape((2, 2), order="F")
        m = ops[i]
        flux[i] = np.trace(m.conj().T @ m @ rho).real
        p_exc[i] = rho[1, 1].real
    phase_vals = np.array([sched.phi_at(t) for t in times])

    i0 = int(np.argmin(np.abs(run.times - t_r)))
    i1 = int(np.argmin(np.abs(run.times - stats_end)))
    wgrid = run.times[i0:i1 + 1]
    wflux = np.array([
        np.trace(run.counting_ops[i].conj().T @ run.counting_ops[i]
                 @ run.states[i].reshape((2, 2), order="F")).real
        for i in range(i0, i1 + 1)
    ])
    emitted = float(np.trapezoid(wflux, wgrid))

    l2 = None
    if packet is not None:
        xi2 = packet.intensity()
        xi2 = xi2 / np.trapezoid(xi2, packet.grid)
        target = np.interp(wgrid, packet.grid, xi2)
        fn = wflux / emitted
        l2 = float(math.sqrt(np.trapezoid((fn - target) ** 2, wgrid) /
                             np.trapezoid(target ** 2, wgrid)))

    return ShapedReleaseResult(
        stats=stats,
        times=times,
        flux=flux,
        phase=phase_vals,
        p_exc=p_exc,
        p_exc_at_release=p_exc_r,
        emitted_fraction=emitted,
        clip_fraction=sched.clip_fraction,
        flux_match_l2=l2,
    )


# ---------------------------------------------------------------------------
# cascaded pair source


def run_cascade(params: MirrorQubitParams, alpha_d: float,
                t_end: float = 20.0, dt: float = 0.005) -> CrossPairResult:
    """Drive the 0-2 line with a pi pulse; integrate pair correlations.

    The pulse width ties to alpha_d through the effective (doubled) 0-2
    rate; alpha_d = 0 means no drive and an empty output.
    """
    if params.levels != 3:
        raise ValueError("the cascade source needs levels=3")
    if alpha_d < 0:
        raise ValueError("alpha_d must be nonnegative")
    if alpha_d == 0:
        return CrossPairResult(g_ii=0.0, g_ss=0.0, g_is=0.0, v=0.0)
    g02e = 2.0 * params.gamma02
    t_w = pi_pulse_width(alpha_d, g02e)
    drive = DriveSchedule(((0.0, t_w, complex(alpha_d)),))
    run = simulate(params, drive, PhaseSchedule.constant(0.0), t_end, dt=dt)
    g_ii = cross_pair_integral(run, "idler", "idler")
    g_ss = cross_pair_integral(run, "signal", "signal")
    g_is = cross_pair_integral(run, "idler", "signal")
    return CrossPairResult(g_ii=g_ii, g_ss=g_ss, g_is=g_is,
                           v=csi_metric(g_ii, g_ss, g_is))


def sweep_cascade(params: MirrorQubitParams, alpha_d_values: Sequence[float],
                  gamma02_values: Sequence[float], t_end: float = 20.0,
                  dt: float = 0.005) -> list:
    """Pair quality over the (alpha_d, gamma02) grid.

    Returns rows (alpha_d, gamma02, CrossPairResult) in row-major grid
    order regardless of worker scheduling.
    """
    cells = [(a, g) for a in alpha_d_values for g in gamma02_values]

    def cell(ag):
        a, g = ag
        return (a, g, run_cascade(params.with_(gamma02=g), a, t_end, dt))

    return _fan_out(cell, cells)


# ---------------------------------------------------------------------------
# loss and storage-time budget sweeps


def sweep_nonradiative(params: MirrorQubitParams, alpha0: complex, r: float,
                       gamma_nr_values: Sequence[float], cutoff: int = 3,
                       t0: float = 0.0, t_end: float = 20.0,
                       dt: float = 0.005) -> list:
    """Beam-splitter source quality against the non-radiative rate."""
    config = BeamSplitterConfig(r=r, alpha0=alpha0, t0=t0, t_end=t_end, dt=dt)

    def one(gnr):
        return (gnr, run_beam_splitter(params.with_(gamma_nr=gnr), config,
                                       cutoff=cutoff))

    return _fan_out(one, gamma_nr_values)


def sweep_wait_time(params: MirrorQubitParams, alpha0: complex,
                    gamma_nr: float, phi_r: float,
                    t_wait_values: Sequence[float], *,
                    phi_i: float = 0.9 * math.pi, t0: float = 1.0,
                    window: float = 20.0, cutoff: int = 3,
                    dt: float = 0.005) -> list:
    """Stored-excitation survival against the dark-storage duration.

    Each row stores for t_wait after the preparation pulse, releases at
    phi_r, and counts over a window of fixed length.
    """
    p = params.with_(gamma_nr=gamma_nr)
    geff_i = effective_coupling(p.gamma, phi_i)
    t_w = pi_pulse_width(abs(alpha0), geff_i)

    def one(t_wait):
        t_r = t0 + t_w + t_wait
        t_end = t_r + window
        res = run_shaped_release(p, alpha0=alpha0, phi_i=phi_i, t0=t0,
                                 t_r=t_r, t_end=t_end, release=phi_r,
                                 cutoff=cutoff, dt=dt)
        return (t_wait, res)

    return _fan_out(one, t_wait_values)


# ---------------------------------------------------------------------------
# flying-qubit encoding


@dataclass(frozen=True)
class FlyingQubitTarget:
    """Superposition weight mu|0> + nu|1> carried by the emitted field."""

    mu: complex
    nu: complex

    def __post_init__(self):
        norm = abs(self.mu) ** 2 + abs(self.nu) ** 2
        if abs(norm - 1.0) > 1e-10:
            raise ValueError(f"target norm {norm} is not 1; use .of() to normalize")

    @classmethod
    def of(cls, mu: complex, nu: complex) -> "FlyingQubitTarget":
        norm = math.sqrt(abs(mu) ** 2 + abs(nu) ** 2)
        if norm == 0:
            raise ValueError("target amplitudes are both zero")
        return cls(complex(mu) / norm, complex(nu) / norm)


@dataclass
class EncodeResult:
    """Optimized preparation pulse and its achieved fidelity."""

    schedule: DriveSchedule
    delta: float
    alpha: complex
    t_w: float
    fidelity: float
    final_state: np.ndarray


def encode_flying_qubit(target: FlyingQubitTarget, params: MirrorQubitParams,
                        *, phi: float = 0.9 * math.pi,
                        alpha_max: float = 10.0,
                        anharmonicity: Optional[float] = None,
                        seeds: int = 8) -> EncodeResult:
    """Find (detuning, amplitude, phase, width) loading the target state.

    A bounded derivative-free search over a single square segment,
    seeded at the amplitude ceiling with the drive phase swept around
    the circle and the detuning at the phase-dependent level shift.
    The residual infidelity scales with Gamma_eff * t_w, so larger
    amplitude budgets encode more faithfully.
    """
    if params.levels != 2:
        raise ValueError("encoding is a two-level scenario")
    if alpha_max <= 0:
        raise ValueError("alpha_max must be positive")
    from .dynamics import build_liouvillian
    from .core import sup_exp

    gamma = params.gamma
    geff = effective_coupling(gamma, phi)
    if geff <= 0:
        raise ValueError("phi = pi decouples the emitter; nothing can be encoded")
    ground = np.zeros(4, dtype=complex)
    ground[0] = 1.0
    psi = np.array([target.mu, target.nu])

    def fidelity_of(delta, alpha, t_w):
        if t_w <= 0:
            return 1.0 if abs(target.nu) < 1e-12 else 0.0
        lv = build_liouvillian(params.with_(delta=delta), phi, alpha)
        rho = (sup_exp(lv, t_w).mat @ ground).reshape((2, 2), order="F")
        return float(np.real(psi.conj() @ rho @ psi))

    if abs(target.nu) < 1e-9:
        return EncodeResult(schedule=DriveSchedule(()), delta=0.0, alpha=0.0,
                            t_w=0.0, fidelity=1.0,
                            final_state=np.diag([1.0 + 0j, 0.0]))

    lamb = (gamma / 2.0) * math.sin(phi)
    theta0 = 2.0 * math.acos(min(1.0, abs(target.mu)))
    tw_pi = math.pi / (2.0 * alpha_max * math.sqrt(geff))
    tw0 = max(theta0, 1e-3) / (2.0 * alpha_max * math.sqrt(geff))
    bounds = [(-10.0 * gamma, 10.0 * gamma),
              (1e-3 * alpha_max, alpha_max),
              (-math.pi, math.pi),
              (1e-6 * tw_pi, 4.0 * tw_pi)]

    def objective(x):
        delta, amp, th, t_w = x
        return 1.0 - fidelity_of(delta, amp * np.exp(1j * th), t_w)

    best = None
    for th0 in np.linspace(-math.pi, math.pi, seeds + 1)[:-1]:
        res = minimize(objective, [lamb, alpha_max, th0, tw0],
                       method="Nelder-Mead", bounds=bounds,
                       options=dict(xatol=1e-11, fatol=1e-15,
                                    maxiter=6000, maxfev=8000))
        if best is None or res.fun < best.fun:
            best = res
    delta, amp, th, t_w = (float(v) for v in best.x)
    alpha = amp * np.exp(1j * th)

    rabi = 2.0 * amp * math.sqrt(geff)
    if anharmonicity is not None and rabi >= anharmonicity:
        warnings.warn(
            f"drive strength {rabi:.4g} reaches the anharmonicity "
            f"{anharmonicity:.4g}; leakage outside the qubit space is "
            "not modeled", stacklevel=2)

    lv = build_liouvillian(params.with_(delta=delta), phi, alpha)
    rho = (sup_exp(lv, t_w).mat @ ground).reshape((2, 2), order="F")
    fid = float(np.real(psi.conj() @ rho @ psi))
    return EncodeResult(
        schedule=DriveSchedule(((0.0, t_w, alpha),)),
        delta=delta, alpha=alpha, t_w=t_w, fidelity=fid, final_state=rho,
    )


# ---------------------------------------------------------------------------
# two-path cancellation budget


@dataclass(frozen=True)
class CancellationInputs:
    """Phasor description of two interfering emission paths.

    Path 1 (amplitude a1, emission phase phi1, frequency omega1) picks
    up the propagation phase `phi`; path 2 joins with (a2, phi2,
    omega2). tau1/tau2 are the path transmissions.
    """

    a1: float
    a2: float
    phi1: float = 0.0
    phi2: float = math.pi
    omega1: float = 0.0
    omega2: float = 0.0
    phi: float = 0.0
    tau1: float = 1.0
    tau2: float = 1.0

    def __post_init__(self):
        if self.a1 <= 0:
            raise ValueError("reference amplitude a1 must be positive")
        if self.a2 < 0:
            raise ValueError("a2 must be nonnegative")
        for name in ("tau1", "tau2"):
            if not (0.0 <= getattr(self, name) <= 1.0):
                raise ValueError(f"{name} must lie in [0, 1]")

    @classmethod
    def matched(cls, a1: float = 1.0, phi1: float = 0.0, omega: float = 0.0,
                phi: float = 0.0, n: int = 1, tau1: float = 1.0,
                tau2: float = 1.0) -> "CancellationInputs":
        """Inputs satisfying the exact cancellation conditions."""
        if tau2 <= 0:
            raise ValueError("tau2 must be positive for a matched pair")
        return cls(a1=a1, a2=a1 * tau1 / tau2,
                   phi1=phi1, phi2=phi1 + phi + (2 * n - 1) * math.pi,
                   omega1=omega, omega2=omega, phi=phi,
                   tau1=tau1, tau2=tau2)


@dataclass(frozen=True)
class CancellationOutcome:
    residual_ratio: float
    residual_db: float
    beat: bool


def cancellation_budget(inputs: CancellationInputs) -> CancellationOutcome:
    """Residual field after two-path interference, relative to path 1.

    Equal frequencies give the static phasor sum; detuned paths cannot
    cancel and the worst point of the beat envelope is reported.
    """
    ref = inputs.tau1 * inputs.a1
    if inputs.omega1 == inputs.omega2:
        resid = abs(inputs.tau1 * inputs.a1 * np.exp(1j * (inputs.phi1 + inputs.phi))
                    + inputs.tau2 * inputs.a2 * np.exp(1j * inputs.phi2))
        ratio = resid / ref
        beat = False
    else:
        ratio = (inputs.tau1 * inputs.a1 + inputs.tau2 * inputs.a2) / ref
        beat = True
    db = 20.0 * math.log10(ratio) if ratio > 0 else -math.inf
    return CancellationOutcome(residual_ratio=float(ratio),
                               residual_db=float(db), beat=beat)

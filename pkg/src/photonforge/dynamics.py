"""Dynamics of a driven emitter coupled to a semi-infinite transmission line.

The emitter sits at distance d from the reflecting end of the line; the
round-trip phase phi of the reflected field sets an effective coupling

    Gamma_eff(phi) = Gamma (1 + cos phi),

tunable between 0 (phi = pi, emitter decoupled) and 2 Gamma (phi = 0).
In the rotating frame of the drive the master equation is

    rho' = -i[H, rho] + D[L] rho + Gamma_nr D[sigma_minus] rho
    H = ((Delta - (Gamma/2) sin phi)/2) sigma_z
        - i (alpha e^{i phi} L^dag - h.c.)
    L = sqrt(Gamma_eff(phi)) e^{i phi/2} sigma_minus

with sigma_z = |0><0| - |1><1| in the (ground, excited) basis. Drives
alpha(t) and phases phi(t) are piecewise constant (plus sampled ramps),
so propagation is an ordered product of constant-segment matrix
exponentials, cached per distinct (phi, alpha, step) combination.

A three-level variant (levels=3) models a ladder 0-1-2 at the end of
the line with phi = 0: every transition couples at its doubled
effective rate 2*Gamma_ab, and the drive addresses the weak direct 0-2
transition only.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, replace
from typing import Optional, Tuple

import numpy as np

from .core import (
    Operator,
    Superoperator,
    _as_matrix,
    liouvillian,
    lowering_op,
    spre_spost,
    sup_exp,
    vec,
)

__all__ = [
    "MirrorQubitParams",
    "DriveSchedule",
    "PhaseSchedule",
    "effective_coupling",
    "pi_pulse_width",
    "build_liouvillian",
    "output_coupling",
    "channel_couplings",
    "propagator",
    "expectation_series",
    "flux_series",
    "simulate",
    "ScenarioRun",
]

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class MirrorQubitParams:
    """Physical parameters; rates in units of the full-line rate Gamma.

    Only the detuning Delta and the phase phi enter the model; bare
    transition and drive frequencies never appear individually. For
    levels=3 the three ladder rates are in units of gamma01.
    """

    gamma: float = 1.0
    delta: float = 0.0
    gamma_nr: float = 0.0
    levels: int = 2
    gamma01: float = 1.0
    gamma12: float = 2.0
    gamma02: float = 0.05

    def __post_init__(self):
        if self.levels not in (2, 3):
            raise ValueError(f"levels must be 2 or 3, got {self.levels}")
        for name in ("gamma", "gamma_nr", "gamma01", "gamma12", "gamma02"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")

    @property
    def dim(self) -> int:
        return self.levels

    def with_(self, **kw) -> "MirrorQubitParams":
        return replace(self, **kw)


def effective_coupling(gamma: float, phi: float) -> float:
    """Gamma_eff(phi) = Gamma (1 + cos phi), between 0 and 2 Gamma."""
    if gamma < 0:
        raise ValueError("gamma must be nonnegative")
    return gamma * (1.0 + math.cos(phi))


def pi_pulse_width(alpha0: float, gamma_eff: float) -> float:
    """Width of a resonant square pi pulse: pi / (2 alpha0 sqrt(Gamma_eff))."""
    if alpha0 <= 0 or gamma_eff <= 0:
        raise ValueError("alpha0 and gamma_eff must be positive")
    return math.pi / (2.0 * alpha0 * math.sqrt(gamma_eff))


@dataclass(frozen=True)
class DriveSchedule:
    """Piecewise-constant drive amplitude alpha(t).

    Segments are (t_start, t_end, alpha) with alpha = 0 outside all
    segments. Lookups are right-continuous: t_start belongs to the
    segment, t_end does not.
    """

    segments: Tuple[Tuple[float, float, complex], ...] = ()

    def __post_init__(self):
        prev_end = -math.inf
        norm = []
        for seg in self.segments:
            t0, t1, a = seg
            if not (t1 > t0):
                raise ValueError(f"segment {seg} has nonpositive duration")
            if t0 < prev_end - 1e-15:
                raise ValueError("drive segments overlap or are unordered")
            if not np.isfinite([t0, t1]).all() or not np.isfinite(complex(a)):
                raise ValueError("drive segment values must be finite")
            norm.append((float(t0), float(t1), complex(a)))
            prev_end = t1
        object.__setattr__(self, "segments", tuple(norm))

    @classmethod
    def square_pi_pulse(cls, alpha0, t0: float, gamma_eff: float) -> "DriveSchedule":
        """Square pulse of area pi starting at t0."""
        tw = pi_pulse_width(abs(alpha0), gamma_eff)
        return cls(((t0, t0 + tw, complex(alpha0)),))

    def amplitude_at(self, t: float) -> complex:
        for t0, t1, a in self.segments:
            if t0 <= t < t1:
                return a
        return 0.0

    def breakpoints(self) -> list:
        pts = []
        for t0, t1, _ in self.segments:
            pts.extend((t0, t1))
        return pts

    @property
    def end(self) -> float:
        return self.segments[-1][1] if self.segments else 0.0


@dataclass(frozen=True)
class PhaseSchedule:
    """Piecewise-constant phi(t) plus an optional sampled release ramp.

    `segments` are (t_start, t_end, phi) pieces; the first may start at
    -inf and the last may end at +inf. The ramp, when present, is a pair
    (times, values) interpreted as a step function (value i holds on
    [times[i], times[i+1])) and overrides the segments on its span.
    """

    segments: Tuple[Tuple[float, float, float], ...] = ((-math.inf, math.inf, 0.0),)
    ramp: Optional[Tuple[np.ndarray, np.ndarray]] = None
    release_time: Optional[float] = None
    clip_fraction: float = 0.0

    def __post_init__(self):
        prev = -math.inf
        for t0, t1, phi in self.segments:
            if not (t1 > t0):
                raise ValueError("phase segment has nonpositive duration")
            if t0 < prev - 1e-15:
                raise ValueError("phase segments overlap or are unordered")
            if not (0.0 <= phi < TWO_PI):
                raise ValueError(f"phi = {phi} outside [0, 2 pi)")
            prev = t1
        if self.ramp is not None:
            times, values = self.ramp
            times = np.asarray(times, dtype=float)
            values = np.asarray(values, dtype=float)
            if times.ndim != 1 or times.shape != values.shape:
                raise ValueError("ramp times and values must be 1d and equal length")
            if np.any(np.diff(times) <= 0):
                raise ValueError("ramp times must be strictly increasing")
            if np.any((values < 0) | (values >= TWO_PI)):
                raise ValueError("ramp phi values outside [0, 2 pi)")
            object.__setattr__(self, "ramp", (times, values))

    @classmethod
    def constant(cls, phi: float) -> "PhaseSchedule":
        return cls(((-math.inf, math.inf, float(phi)),))

    @classmethod
    def storage_release(cls, phi_i: float, t_store: float, t_r: float,
                        phi_r: float) -> "PhaseSchedule":
        """Hold phi_i until t_store, park at pi, release at t_r with phi_r.

        With t_store == t_r the dark interval is empty and the schedule
        switches from phi_i to phi_r directly.
        """
        if t_r < t_store:
            raise ValueError("release must not precede the storage point")
        segs = [(-math.inf, t_store, float(phi_i))]
        if t_r > t_store:
            segs.append((t_store, t_r, math.pi))
        segs.append((t_r, math.inf, float(phi_r)))
        return cls(tuple(segs), release_time=t_r)

    def phi_at(self, t: float) -> float:
        if self.ramp is not None:
            times, values = self.ramp
            if times[0] <= t < times[-1]:
                return float(values[bisect_right(times, t) - 1])
        for t0, t1, phi in self.segments:
            if t0 <= t < t1:
                return phi
        raise ValueError(f"phase schedule does not cover t = {t}")

    def breakpoints(self, t1: float, t2: float) -> list:
        pts = []
        for a, b, _ in self.segments:
            for x in (a, b):
                if t1 < x < t2 and math.isfinite(x):
                    pts.append(x)
        if self.ramp is not None:
            times = self.ramp[0]
            pts.extend(times[(times > t1) & (times < t2)].tolist())
        return pts


def _qubit_matrices():
    sm = np.zeros((2, 2), dtype=complex)
    sm[0, 1] = 1.0
    sz = np.diag([1.0, -1.0]).astype(complex)
    return sm, sz


def output_coupling(params: MirrorQubitParams, phi: float) -> Operator:
    """Line coupling operator L = sqrt(Gamma_eff) e^{i phi/2} sigma_minus."""
    if params.levels != 2:
        raise ValueError("output_coupling is the two-level line operator")
    sm, _ = _qubit_matrices()
    geff = effective_coupling(params.gamma, phi)
    return Operator(np.sqrt(geff) * np.exp(1j * phi / 2.0) * sm)


def channel_couplings(params: MirrorQubitParams) -> dict:
    """Per-transition collapse operators of the three-level ladder.

    At the end of the line (phi = 0) every transition radiates at its
    doubled effective rate 2 Gamma_ab. Keys: 'signal' (1->0), 'idler'
    (2->1), 'pump' (2->0 direct).
    """
    if params.levels != 3:
        raise ValueError("channel_couplings requires levels=3")
    return {
        "signal": Operator(np.sqrt(2.0 * params.gamma01) * _as_matrix(lowering_op(3, 0, 1))),
        "idler": Operator(np.sqrt(2.0 * params.gamma12) * _as_matrix(lowering_op(3, 1, 2))),
        "pump": Operator(np.sqrt(2.0 * params.gamma02) * _as_matrix(lowering_op(3, 0, 2))),
    }


def build_liouvillian(params: MirrorQubitParams, phi: float, alpha) -> Superoperator:
    """Constant-in-time master-equation generator at (phi, alpha).

    Two levels: the mirror-modified qubit model quoted in the module
    docstring, plus the non-radiative channel when gamma_nr > 0.

    Three levels: restricted to phi = 0; collapse operators are the
    three ladder channels at their doubled effective rates and the drive
    couples only to the direct 0-2 transition.
    """
    alpha = complex(alpha)
    if params.levels == 2:
        sm, sz = _qubit_matrices()
        geff = effective_coupling(params.gamma, phi)
        lop = np.sqrt(geff) * np.exp(1j * phi / 2.0) * sm
        h = ((params.delta - (params.gamma / 2.0) * np.sin(phi)) / 2.0) * sz
        if alpha != 0:
            x = alpha * np.exp(1j * phi) * lop.conj().T
            h = h + (-1j) * (x - x.conj().T)
        ls = [lop]
        if params.gamma_nr > 0:
            ls.append(np.sqrt(params.gamma_nr) * sm)
        return liouvillian(h, ls)

    if abs(phi) > 1e-12:
        raise ValueError("the three-level ladder model is defined at phi = 0")
    if params.gamma_nr != 0:
        raise ValueError("gamma_nr is not modeled for the three-level ladder")
    chans = channel_couplings(params)
    l02 = _as_matrix(chans["pump"])
    h = np.zeros((3, 3), dtype=complex)
    if alpha != 0:
        x = alpha * l02.conj().T
        h = (-1j) * (x - x.conj().T)
    ls = [_as_matrix(chans["signal"]), _as_matrix(chans["idler"]), l02]
    return liouvillian(h, ls)


# ---------------------------------------------------------------------------
# piecewise-constant propagation


def _collect_pieces(params, drive: DriveSchedule, phase: PhaseSchedule,
                    t1: float, t2: float):
    """Split [t1, t2] into maximal (a, b, phi, alpha) constant pieces."""
    pts = [t1, t2]
    for x in drive.breakpoints():
        if t1 < x < t2:
            pts.append(x)
    pts.extend(phase.breakpoints(t1, t2))
    pts = sorted(set(pts))
    merged = [pts[0]]
    for x in pts[1:]:
        if x - merged[-1] > 1e-12:
            merged.append(x)
    merged[-1] = t2
    pieces = []
    for a, b in zip(merged[:-1], merged[1:]):
        pieces.append((a, b, phase.phi_at(a), drive.amplitude_at(a)))
    return pieces


def _piece_generator_cache():
    return {}


def _generator(params, phi, alpha, cache) -> np.ndarray:
    key = ("L", phi, alpha)
    if key not in cache:
        cache[key] = build_liouvillian(params, phi, alpha).mat
    return cache[key]


def _step_matrix(params, phi, alpha, h, cache) -> np.ndarray:
    key = ("E", phi, alpha, h)
    if key not in cache:
        cache[key] = sup_exp(_generator(params, phi, alpha, cache), h).mat
    return cache[key]


def propagator(params: MirrorQubitParams, drive: DriveSchedule,
               phase: PhaseSchedule, t1: float, t2: float,
               cache: Optional[dict] = None) -> Superoperator:
    """Evolution superoperator P(t2, t1), t1 <= t2.

    Ordered product of constant-piece exponentials over the breakpoint
    partition of [t1, t2]; sampled phase ramps contribute one piece per
    sample interval. Satisfies P(t,t) = identity and the composition law
    P(t3,t2) P(t2,t1) = P(t3,t1).
    """
    if t2 < t1:
        raise ValueError(f"reversed times: t1={t1} > t2={t2}")
    d = params.dim
    if t2 == t1:
        return Superoperator(np.eye(d * d, dtype=complex))
    cache = {} if cache is None else cache
    out = np.eye(d * d, dtype=complex)
    for a, b, phi, alpha in _collect_pieces(params, drive, phase, t1, t2):
        out = _step_matrix(params, phi, alpha, b - a, cache) @ out
    return Superoperator(out)


def expectation_series(params: MirrorQubitParams, drive: DriveSchedule,
                       phase: PhaseSchedule, observable, grid,
                       rho0=None) -> np.ndarray:
    """tr(O rho(t)) on the given time grid, starting from rho0 (ground).

    `observable` is a constant operator, or a callable t -> matrix for
    time-dependent readouts.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or np.any(np.diff(grid) < 0):
        raise ValueError("grid must be a 1d nondecreasing array")
    d = params.dim
    if rho0 is None:
        rho0 = np.zeros((d, d), dtype=complex)
        rho0[0, 0] = 1.0
    v = vec(_as_matrix(rho0))
    cache = {}
    ob = observable if callable(observable) else (lambda t, _m=_as_matrix(observable): _m)
    out = np.empty(len(grid), dtype=complex)
    for i, t in enumerate(grid):
        if i > 0:
            v = propagator(params, drive, phase, grid[i - 1], t, cache).mat @ v
        rho = v.reshape((d, d), order="F")
        out[i] = np.trace(_as_matrix(ob(t)) @ rho)
    return out


def flux_series(params: MirrorQubitParams, drive: DriveSchedule,
                phase: PhaseSchedule, grid, rho0=None) -> np.ndarray:
    """Output flux <L^dag L>(t) with L tracking phi(t)."""

    def op(t):
        return _as_matrix(output_coupling(params, phase.phi_at(t))).conj().T @ \
            _as_matrix(output_coupling(params, phase.phi_at(t)))

    return expectation_series(params, drive, phase, op, grid, rho0).real


# ---------------------------------------------------------------------------
# gridded simulation runs (consumed by the statistics module)


@dataclass
class ScenarioRun:
    """A propagated scenario on a fixed grid.

    times[i] are the grid instants; steps[i] maps state i to state i+1;
    states[i] is the column-stacked density matrix at times[i].
    counting_ops[i] is the output counting operator in effect at
    times[i] (right-continuous across breakpoints). For three-level runs
    `channels` holds the per-transition collapse operators instead.
    """

    params: MirrorQubitParams
    drive: DriveSchedule
    phase: PhaseSchedule
    times: np.ndarray
    steps: list
    states: list
    counting_ops: list
    window: Tuple[float, float]
    grid_step: float
    channels: Optional[dict] = None
    drive_points: int = 10 ** 9

    @property
    def dim(self) -> int:
        return self.params.dim


def simulate(params: MirrorQubitParams, drive: DriveSchedule,
             phase: PhaseSchedule, t_end: float, *, t_start: float = 0.0,
             rho0=None, dt: Optional[float] = None, min_pulse_steps: int = 20,
             window: Optional[Tuple[float, float]] = None) -> ScenarioRun:
    """Propagate on a uniform-per-piece grid and record everything.

    The nominal step is dt (default 0.01/gamma); drive pulses are
    refined so each carries at least `min_pulse_steps` steps. The
    recorded window defaults to the full span and is where counting
    statistics will be taken.
    """
    if dt is None:
        dt = 0.01 / params.gamma if params.gamma > 0 else 0.01
    if t_end <= t_start:
        raise ValueError("t_end must exceed t_start")
    d = params.dim
    if rho0 is None:
        rho0 = np.zeros((d, d), dtype=complex)
        rho0[0, 0] = 1.0
    pieces = _collect_pieces(params, drive, phase, t_start, t_end)
    pulse_spans = [(a, b) for a, b, _ in drive.segments]
    ramp_span = None
    if phase.ramp is not None:
        ramp_span = (float(phase.ramp[0][0]), float(phase.ramp[0][-1]))

    def in_pulse(a, b):
        return any(a >= s - 1e-12 and b <= e + 1e-12 for s, e in pulse_spans)

    cache = {}
    times = [t_start]
    steps = []
    piece_counts = []
    piece_ops = []
    v = vec(_as_matrix(rho0))
    states = [v]
    for a, b, phi, alpha in pieces:
        dur = b - a
        if (ramp_span is not None and a >= ramp_span[0] - 1e-12
                and b <= ramp_span[1] + 1e-12):
            # a sampled ramp defines its own integration grid: exactly
            # one step per sampling interval, never re-subdivided
            n = 1
        else:
            local_dt = dt
            if in_pulse(a, b):
                for s, e in pulse_spans:
                    if a >= s - 1e-12 and b <= e + 1e-12:
                        local_dt = min(dt, (e - s) / min_pulse_steps)
                        break
            n = max(1, int(np.ceil(dur / local_dt)))
        h = dur / n
        e_step = _step_matrix(params, phi, alpha, h, cache)
        if params.levels == 2:
            lmat = _as_matrix(output_coupling(params, phi))
        else:
            lmat = None
        piece_counts.append(n)
        piece_ops.append(lmat)
        for i in range(n):
            times.append(a + (i + 1) * h)
            steps.append(e_step)
            states.append(e_step @ states[-1])
    # counting op at each grid point, right-continuous: a breakpoint
    # carries the op of the piece that starts there, so a statistics
    # window opening at a phase switch sees the new coupling from its
    # first instant
    ops = [None] * len(times)
    pos = 0
    for n, lmat in zip(piece_counts, piece_ops):
        for i in range(pos, pos + n):
            ops[i] = lmat
        pos += n
    ops[-1] = piece_ops[-1]
    # count grid points per drive pulse for resolution diagnostics
    tarr = np.array(times)
    dp = 10 ** 9
    for s, e in pulse_spans:
        if e <= t_start or s >= t_end:
            continue
        inside = np.sum((tarr >= s - 1e-12) & (tarr <= e + 1e-12))
        dp = min(dp, int(inside))
    run = ScenarioRun(
        params=params,
        drive=drive,
        phase=phase,
        times=tarr,
        steps=steps,
        states=states,
        counting_ops=ops,
        window=window if window is not None else (t_start, t_end),
        grid_step=dt,
        channels=channel_couplings(params) if params.levels == 3 else None,
        drive_points=dp,
    )
    return run

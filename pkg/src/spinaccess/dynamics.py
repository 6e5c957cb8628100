"""Time propagation of the coherence vector under piecewise-constant controls.

Propagation is by matrix exponential of the 3x3 generator (scaling and
squaring), so segment evolution is exact to rounding and the semigroup
composition property holds along a schedule.  Physicality violations along
a trajectory are flagged, never silently dropped and never fatal: watching
an ill-posed generator push the state out of the Bloch ball is one of the
intended uses.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from .coherence import is_physical
from .errors import UnphysicalStateError
from .generator import lindblad_superop

#: Tolerance used when flagging Bloch-ball violations along trajectories.
VIOLATION_TOL = 1e-8


@dataclass
class ControlSchedule:
    """Ordered piecewise-constant control: segments of (duration, u)."""

    segments: list  # [(duration, u), ...]

    def __post_init__(self):
        segs = [(float(t), float(u)) for t, u in self.segments]
        for t, _ in segs:
            if not np.isfinite(t) or t <= 0.0:
                raise ValueError(f"segment durations must be positive, got {t}")
        self.segments = segs

    @property
    def total_duration(self) -> float:
        return sum(t for t, _ in self.segments)


@dataclass
class Trajectory:
    """Sampled coherence-vector path with purity and control bookkeeping."""

    times: np.ndarray          # (m,)
    states: np.ndarray         # (m, 3)
    purities: np.ndarray       # (m,), |v|^2
    controls: np.ndarray       # (m,), control value in effect at each sample
    violations: np.ndarray = field(default=None)  # (m,) bool, outside Bloch ball

    def __post_init__(self):
        if self.violations is None:
            self.violations = np.array(
                [not is_physical(s, VIOLATION_TOL) for s in self.states])

    @property
    def exited_ball(self) -> bool:
        """True when any sample left the Bloch ball beyond tolerance."""
        return bool(np.any(self.violations))

    @property
    def final_state(self) -> np.ndarray:
        return self.states[-1]


def propagate(l: np.ndarray, v0: np.ndarray, t: float) -> np.ndarray:
    """Evolve v0 for time t under the constant generator: exp(l t) v0."""
    if t < 0:
        raise ValueError(f"propagation time must be nonnegative, got {t}")
    l = np.asarray(l, dtype=float)
    v0 = np.asarray(v0, dtype=float)
    return expm(l * t) @ v0


def evolve_schedule(h: np.ndarray, d: np.ndarray, sched: ControlSchedule,
                    v0: np.ndarray, dt: float) -> Trajectory:
    """Propagate through a control schedule, sampling every dt.

    Samples land on the uniform dt grid within each segment plus the exact
    segment boundaries; the final state equals the ordered product of
    segment exponentials applied to v0.

    Raises
    ------
    UnphysicalStateError
        If the initial state lies outside the Bloch ball.
    """
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    v0 = np.asarray(v0, dtype=float)
    if not is_physical(v0):
        raise UnphysicalStateError(f"initial state |v0| = {np.linalg.norm(v0)} > 1/2")

    times = [0.0]
    states = [v0.copy()]
    controls = [sched.segments[0][1] if sched.segments else 0.0]

    t_origin = 0.0
    v = v0.copy()
    for duration, u in sched.segments:
        l = lindblad_superop(h, d, u)
        step = expm(l * dt)
        n_full = int(np.floor(duration / dt + 1e-12))
        v_seg = v
        for k in range(1, n_full + 1):
            v_seg = step @ v_seg
            times.append(t_origin + k * dt)
            states.append(v_seg)
            controls.append(u)
        remainder = duration - n_full * dt
        if remainder > 1e-12 or n_full == 0:
            v_seg = expm(l * remainder) @ v_seg
            times.append(t_origin + duration)
            states.append(v_seg)
            controls.append(u)
        else:
            # boundary coincides with the dt grid; fix rounding drift exactly
            times[-1] = t_origin + duration
        v = v_seg
        t_origin += duration

    states = np.asarray(states)
    return Trajectory(
        times=np.asarray(times),
        states=states,
        purities=np.einsum("ij,ij->i", states, states),
        controls=np.asarray(controls),
    )


def expectation_sz(v: np.ndarray) -> float:
    """Polarization along z: the third coherence-vector component."""
    v = np.asarray(v, dtype=float)
    return float(v[2])


def sz_derivatives(l: np.ndarray, v0: np.ndarray, max_order: int) -> np.ndarray:
    """Time derivatives of the z polarization at t = 0.

    Returns [(l^n v0)_3 for n = 1..max_order]: the n-th derivative of the
    z component along the semigroup flow, so the order-1 entry is the
    initial growth rate of the polarization.
    """
    if max_order < 1:
        raise ValueError(f"max_order must be >= 1, got {max_order}")
    l = np.asarray(l, dtype=float)
    v = np.asarray(v0, dtype=float).copy()
    out = np.empty(max_order)
    for k in range(max_order):
        v = l @ v
        out[k] = v[2]
    return out

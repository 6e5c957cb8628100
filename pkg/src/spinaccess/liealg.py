"""Lie-bracket closure of generator sets and the accessibility verdict.

The controlled coherence-vector system dv/dt = -(u H + D) v is accessible
iff the matrix Lie algebra generated by its drift and control directions
acts transitively on the punctured Bloch ball, i.e. equals gl(3, R) or
sl(3, R).  The closure is computed by breadth-first bracketing with
orthonormalization under the trace inner product <X, Y> = Tr(X^T Y).
"""

from dataclasses import dataclass

import numpy as np

from .cones import ParamSubspace, is_completely_positive, is_positive
from .errors import InfeasibleParametersError
from .generator import dissipation_from_kossakowski, hamiltonian_matrix

#: Relative admission threshold for new bracket directions.
CLOSURE_TOL = 1e-9

#: Brackets below this fraction of the largest input norm are treated as zero.
_ZERO_BRACKET = 1e-12


@dataclass
class LieClosure:
    """Orthonormal basis of a generated matrix Lie algebra."""

    basis: np.ndarray  # (dim, 3, 3), orthonormal under Tr(X^T Y)
    dim: int
    is_transitive: bool


def bracket(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Matrix commutator [x, y] = xy - yx."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return x @ y - y @ x


def lie_closure(generators, tol: float = CLOSURE_TOL) -> LieClosure:
    """Close a set of 3x3 matrices under the commutator.

    Generators are orthonormalized; all pairs of current basis elements are
    bracketed breadth-first, and a bracket is admitted when its component
    outside the current span exceeds ``tol`` relative to the bracket norm.

    Parameters
    ----------
    generators : iterable of np.ndarray
        At least one 3x3 matrix.
    tol : float
        Relative admission threshold for new directions.
    """
    gens = [np.asarray(g, dtype=float) for g in generators]
    if not gens:
        raise ValueError("at least one generator is required")
    for g in gens:
        if g.shape != (3, 3):
            raise ValueError(f"generators must be 3x3, got shape {g.shape}")
    scale = max(np.linalg.norm(g) for g in gens)
    if scale == 0.0:
        raise ValueError("all generators vanish")

    basis: list[np.ndarray] = []  # rows: orthonormal 9-vectors

    def admit(mat: np.ndarray, threshold: float) -> bool:
        vec = mat.reshape(9)
        norm = np.linalg.norm(vec)
        if norm < threshold:
            return False
        res = vec.copy()
        for b in basis:  # two Gram-Schmidt passes for numerical stability
            res -= (b @ res) * b
        for b in basis:
            res -= (b @ res) * b
        if np.linalg.norm(res) <= tol * norm:
            return False
        basis.append(res / np.linalg.norm(res))
        return True

    queue = []
    for g in gens:
        if admit(g, _ZERO_BRACKET * scale):
            queue.append(len(basis) - 1)
    while queue:
        idx = queue.pop(0)
        x = basis[idx].reshape(3, 3)
        for j in range(len(basis)):
            y = basis[j].reshape(3, 3)
            if admit(bracket(x, y), _ZERO_BRACKET):
                queue.append(len(basis) - 1)
        if len(basis) == 9:
            break

    arr = np.stack([b.reshape(3, 3) for b in basis])
    closure = LieClosure(basis=arr, dim=len(basis), is_transitive=False)
    closure.is_transitive = accessibility_verdict(closure)
    return closure


def accessibility_verdict(closure: LieClosure, trace_tol: float = 1e-10) -> bool:
    """True iff the closure is gl(3, R) or sl(3, R), hence transitive."""
    if closure.dim == 9:
        return True
    if closure.dim == 8:
        traces = np.abs(np.trace(closure.basis, axis1=1, axis2=2))
        return bool(np.all(traces < trace_tol))
    return False


def switching_generators(h: np.ndarray, d: np.ndarray) -> list:
    """Generator pair {D, Hmat(h) + D} of the on/off switched system."""
    hm = hamiltonian_matrix(h)
    d = np.asarray(d, dtype=float)
    return [d, hm + d]


def drift_control_generators(h0: np.ndarray, controls, d: np.ndarray) -> list:
    """Generators {Hmat(h0) + D, Hmat(h1), ..., Hmat(hm)} of the drift-plus-control form."""
    gens = [hamiltonian_matrix(h0) + np.asarray(d, dtype=float)]
    gens.extend(hamiltonian_matrix(h) for h in controls)
    return gens


@dataclass
class AccessibilityReport:
    """Side-by-side accessibility of one subspace under the two cones."""

    dim_p: int
    dim_cp: int
    accessible_p: bool
    accessible_cp: bool
    closure_p: LieClosure
    closure_cp: LieClosure
    differ: bool


def compare_accessibility(v: ParamSubspace, h: np.ndarray, theta_p,
                          theta_cp, tol: float = 1e-9) -> AccessibilityReport:
    """Accessibility verdicts for a positivity- and a CP-admissible member.

    ``theta_p`` must select a subspace member whose dissipation matrix is
    PSD, ``theta_cp`` one whose coefficient matrix is PSD; both closures use
    the switched generator pair {D, Hmat(h) + D}.

    Raises
    ------
    InfeasibleParametersError
        When a coordinate vector violates its requested cone.
    """
    c_p = v.matrix(theta_p)
    c_cp = v.matrix(theta_cp)
    if not is_positive(c_p, tol):
        raise InfeasibleParametersError("theta_p does not satisfy positivity")
    if not is_completely_positive(c_cp, tol):
        raise InfeasibleParametersError("theta_cp does not satisfy complete positivity")

    closure_p = lie_closure(switching_generators(h, dissipation_from_kossakowski(c_p)))
    closure_cp = lie_closure(switching_generators(h, dissipation_from_kossakowski(c_cp)))
    return AccessibilityReport(
        dim_p=closure_p.dim,
        dim_cp=closure_cp.dim,
        accessible_p=closure_p.is_transitive,
        accessible_cp=closure_cp.is_transitive,
        closure_p=closure_p,
        closure_cp=closure_cp,
        differ=closure_p.is_transitive != closure_cp.is_transitive,
    )

"""Positivity and complete-positivity cone analysis of parameter subspaces.

A dissipative family is a linear subspace V of real symmetric 3x3
coefficient matrices.  Complete positivity restricts a member C to the
cone C >= 0, plain positivity to D(C) = 2(I Tr C - C) >= 0; the first cone
sits inside the second.  This module decides, for a given subspace, how the
two restrictions compare: whether nonzero admissible members exist at all,
whether they are confined to the cone boundaries, and the dimensions n_p,
n_cp of the spans of the admissible sets.  It also computes the span K of
directions on which the quadratic form w -> w^T C w vanishes identically
over the subspace, and the rank-drop certificate built from K.

Everything reduces to 3x3 eigenvalue computations; feasibility searches use
a dense directional grid plus multistart local ascent of the minimum
eigenvalue, which is concave in the coordinates, so local ascent is
globally reliable.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares, minimize

from .errors import OptimizationFailedError
from .generator import dissipation_from_kossakowski, require_symmetric, sym_to_vec6, vec6_to_sym

#: Feasibility tolerance: a point is admissible when the relevant minimum
#: eigenvalue is >= -FEAS_TOL.
FEAS_TOL = 1e-9

#: Extent band classified as "admissible set confined to the cone boundary".
#: Boundary cases are exact zeros analytically but fuzzy numerically.
BOUNDARY_BAND = (-1e-9, 1e-6)

#: Relative singular-value threshold for span (rank) estimates.
RANK_TOL = 1e-7

_ENTRY_NAMES = {"c11": 0, "c22": 1, "c33": 2, "c12": 3, "c13": 4, "c23": 5}


@dataclass
class ParamSubspace:
    """Linear subspace of symmetric 3x3 matrices given by a basis.

    ``basis`` has shape (n, 3, 3) with 1 <= n <= 6 linearly independent
    symmetric elements.  Coordinates theta always refer to this basis as
    given; a Frobenius-normalized copy is kept for the numerical searches.
    """

    basis: np.ndarray
    normalized: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        basis = np.asarray(self.basis, dtype=float)
        if basis.ndim != 3 or basis.shape[1:] != (3, 3):
            raise ValueError(f"basis must have shape (n, 3, 3), got {basis.shape}")
        n = basis.shape[0]
        if not 1 <= n <= 6:
            raise ValueError(f"basis size must be between 1 and 6, got {n}")
        for k in range(n):
            basis[k] = require_symmetric(basis[k], f"basis element {k}")
        self.basis = basis
        norms = np.linalg.norm(basis.reshape(n, 9), axis=1)
        if np.any(norms < 1e-14):
            raise ValueError("basis contains a zero element")
        self.normalized = basis / norms[:, None, None]
        # independence: the Gram matrix of the 6-vector forms must have rank n
        gram = self._vec6(self.normalized) @ self._vec6(self.normalized).T
        if np.linalg.svd(gram, compute_uv=False)[-1] <= 1e-10:
            raise ValueError("basis elements are not linearly independent")

    @staticmethod
    def _vec6(mats):
        return np.stack([sym_to_vec6(m) for m in mats])

    @classmethod
    def from_vec6(cls, rows) -> "ParamSubspace":
        """Build from rows in the (c11, c22, c33, c12, c13, c23) serialization."""
        rows = np.asarray(rows, dtype=float)
        if rows.ndim != 2 or rows.shape[1] != 6:
            raise ValueError(f"expected shape (n, 6), got {rows.shape}")
        return cls(np.stack([vec6_to_sym(r) for r in rows]))

    @classmethod
    def from_free_entries(cls, names) -> "ParamSubspace":
        """Subspace where the named entries of C vary freely, e.g. ("c11", "c13")."""
        rows = []
        for name in names:
            if name not in _ENTRY_NAMES:
                raise ValueError(f"unknown entry name {name!r}")
            row = np.zeros(6)
            row[_ENTRY_NAMES[name]] = 1.0
            rows.append(row)
        return cls.from_vec6(rows)

    @property
    def n(self) -> int:
        return self.basis.shape[0]

    def matrix(self, theta) -> np.ndarray:
        """The subspace member with coordinates theta in the given basis."""
        theta = np.asarray(theta, dtype=float)
        if theta.shape != (self.n,):
            raise ValueError(f"expected {self.n} coordinates, got shape {theta.shape}")
        return np.einsum("k,kij->ij", theta, self.basis)


@dataclass
class ConeAnalysis:
    """Outcome of classifying a subspace against the two positivity cones."""

    case_label: str
    n: int
    n_p: int
    n_cp: int
    extent_p: float
    extent_cp: float
    witnesses_p: list
    witnesses_cp: list
    ambiguous: bool


@dataclass
class IsotropicSpan:
    """Orthonormal directions w with w^T B w = 0 for every basis element B."""

    k_basis: np.ndarray  # (k_dim, 3)
    k_dim: int


def is_completely_positive(c: np.ndarray, tol: float = FEAS_TOL) -> bool:
    """True iff the coefficient matrix itself is PSD: lambda_min(C) >= -tol."""
    c = require_symmetric(c, "kossakowski matrix")
    return bool(np.linalg.eigvalsh(c)[0] >= -tol)


def is_positive(c: np.ndarray, tol: float = FEAS_TOL) -> bool:
    """True iff the dissipation matrix D(C) is PSD: lambda_min(D) >= -tol."""
    d = dissipation_from_kossakowski(c)
    return bool(np.linalg.eigvalsh(d)[0] >= -tol)


# ---------------------------------------------------------------------------
# feasibility search machinery
# ---------------------------------------------------------------------------

def _cone_maps(v: ParamSubspace, cone: str) -> np.ndarray:
    """Images of the basis under the cone's defining linear map.

    Coordinates, extents and witnesses all refer to the basis as given, so
    callers get back values on their own scale; the searches assume basis
    elements of roughly unit norm (as produced by the constructors here).
    """
    if cone == "CP":
        return v.basis.copy()
    if cone == "P":
        return np.stack([dissipation_from_kossakowski(b) for b in v.basis])
    raise ValueError(f"cone must be 'P' or 'CP', got {cone!r}")


def _sphere_grid(n: int, seed: int, m: int = 10000) -> np.ndarray:
    """Deterministic directions on the coordinate unit sphere."""
    if n == 1:
        return np.array([[1.0], [-1.0]])
    if n == 2:
        ang = 2.0 * np.pi * np.arange(m) / m
        return np.column_stack([np.cos(ang), np.sin(ang)])
    if n == 3:
        i = np.arange(m)
        z = 1.0 - 2.0 * (i + 0.5) / m
        r = np.sqrt(np.maximum(0.0, 1.0 - z * z))
        phi = i * np.pi * (3.0 - np.sqrt(5.0))
        return np.column_stack([r * np.cos(phi), r * np.sin(phi), z])
    rng = np.random.default_rng(seed)
    pts = rng.standard_normal((4096, n))
    return pts / np.linalg.norm(pts, axis=1, keepdims=True)


def _min_eigs(maps: np.ndarray, xs: np.ndarray) -> np.ndarray:
    mats = np.einsum("sk,kij->sij", xs, maps)
    return np.linalg.eigvalsh(mats)[:, 0]


def _ascent(maps: np.ndarray, xs: np.ndarray, iters: int = 200) -> np.ndarray:
    """Batched projected supergradient ascent of lambda_min on the sphere."""
    xs = xs / np.linalg.norm(xs, axis=1, keepdims=True)
    for t in range(iters):
        mats = np.einsum("sk,kij->sij", xs, maps)
        vals, vecs = np.linalg.eigh(mats)
        u = vecs[:, :, 0]
        grad = np.einsum("si,kij,sj->sk", u, maps, u)
        stepped = xs + (0.25 / (1.0 + t) ** 0.7) * grad
        nrm = np.linalg.norm(stepped, axis=1, keepdims=True)
        # a step through the origin leaves the direction undefined; stay put
        ok = nrm[:, 0] > 1e-12
        xs = np.where(ok[:, None], stepped / np.where(ok[:, None], nrm, 1.0), xs)
    return xs


def _nm_polish(maps: np.ndarray, x0: np.ndarray) -> tuple[np.ndarray, float]:
    """High-precision local maximization of lambda_min around x0."""

    def neg_min_eig(x):
        nx = np.linalg.norm(x)
        if nx < 1e-12:
            return 1e6
        m = np.einsum("k,kij->ij", x / nx, maps)
        return -np.linalg.eigvalsh(m)[0]

    res = minimize(neg_min_eig, x0, method="Nelder-Mead",
                   options={"xatol": 1e-12, "fatol": 1e-14,
                            "maxiter": 4000, "maxfev": 6000})
    x = res.x / np.linalg.norm(res.x)
    return x, -neg_min_eig(x)


def _frobenius_basis(maps: np.ndarray) -> np.ndarray:
    """Orthonormal (Frobenius) basis of span{maps}, rows of shape (d, 9)."""
    q, _ = np.linalg.qr(maps.reshape(len(maps), 9).T)
    return q.T[: len(maps)]


def _alternating_projection(maps, ortho, xs, iters=400):
    """Pull unit directions toward the feasible set cone /\\ span{maps}.

    Alternates the PSD projection (eigenvalue clipping) with the orthogonal
    projection onto the subspace, renormalizing to keep away from the apex.
    Returns refined coordinates of the surviving points.
    """
    mats = np.einsum("sk,kij->sij", xs, maps)
    nrm = np.linalg.norm(mats.reshape(len(mats), 9), axis=1)
    keep = nrm > 1e-12
    mats = mats[keep] / nrm[keep, None, None]
    for _ in range(iters):
        vals, vecs = np.linalg.eigh(mats)
        clipped = np.maximum(vals, 0.0)
        mats = np.einsum("sij,sj,skj->sik", vecs, clipped, vecs)
        flat = mats.reshape(len(mats), 9) @ ortho.T
        mats = (flat @ ortho).reshape(len(mats), 3, 3)
        nrm = np.linalg.norm(mats.reshape(len(mats), 9), axis=1)
        alive = nrm > 1e-10
        if not np.any(alive):
            return np.zeros((0, maps.shape[0]))
        mats = mats[alive] / nrm[alive, None, None]
    # recover coordinates in the (non-orthogonal) map basis by least squares
    a = maps.reshape(len(maps), 9).T
    coords, *_ = np.linalg.lstsq(a, mats.reshape(len(mats), 9).T, rcond=None)
    xs = coords.T
    nx = np.linalg.norm(xs, axis=1)
    return xs[nx > 1e-10] / nx[nx > 1e-10, None]


def _dedupe(xs: np.ndarray, decimals: int = 6) -> np.ndarray:
    if len(xs) == 0:
        return xs
    _, idx = np.unique(np.round(xs, decimals), axis=0, return_index=True)
    return xs[np.sort(idx)]


# A feasibility tolerance t admits points whose components off the true
# admissible span reach sqrt(t) (quadratic boundary contact), far above the
# rank threshold.  Witnesses on the cone boundary are therefore polished
# onto the boundary manifold by Gauss-Newton before any rank estimate: the
# near-zero eigenvalue block of M(x) is driven to zero exactly, which
# converges quadratically and removes the contamination.
_INTERIOR_CUT = 1e-5
_CLEAN_ACCEPT = 1e-15


def _boundary_newton(maps: np.ndarray, x: np.ndarray, iters: int = 40):
    """Move x within the subspace so the small eigenvalue block vanishes.

    The eigenvalue residual is quadratic in the off-structure components, so
    each step halves them; the iteration budget brings 1e-5 contamination
    below the rank threshold with room to spare.
    """
    x = x / np.linalg.norm(x)
    for _ in range(iters):
        m = np.einsum("k,kij->ij", x, maps)
        vals, vecs = np.linalg.eigh(m)
        zero = np.abs(vals) <= _INTERIOR_CUT
        if not np.any(zero):
            break
        u0 = vecs[:, zero]
        g = u0.T @ m @ u0
        s = g.shape[0]
        iu = np.triu_indices(s)
        resid = g[iu]
        if np.max(np.abs(resid)) < 1e-16:
            break
        jac = np.stack([(u0.T @ maps[k] @ u0)[iu] for k in range(maps.shape[0])],
                       axis=1)
        delta, *_ = np.linalg.lstsq(jac, -resid, rcond=None)
        x = x + delta
        nx = np.linalg.norm(x)
        if nx < 1e-8:
            return None
        x = x / nx
    if _min_eigs(maps, x[None, :])[0] < -_CLEAN_ACCEPT:
        return None
    return x


def _clean_feasible(maps: np.ndarray, xs: np.ndarray) -> np.ndarray:
    """Exactly-structured feasible points from a tolerance-feasible sample."""
    out = []
    for x in xs:
        val = _min_eigs(maps, x[None, :])[0]
        if val >= _INTERIOR_CUT:
            out.append(x)
            continue
        cleaned = _boundary_newton(maps, x)
        if cleaned is not None:
            out.append(cleaned)
    if not out:
        return np.zeros((0, maps.shape[0]))
    return _dedupe(np.asarray(out))


def _face_enrichment(maps, feas_xs, tol):
    """Feasible points spanning the minimal face around the found set.

    The span of a convex feasible set equals the subspace slice supported on
    the range of any relative-interior point; perturbing such a point along
    that slice yields verified feasible points in all spanned directions.
    """
    if len(feas_xs) == 0:
        return np.zeros((0, maps.shape[0]))
    center = feas_xs.mean(axis=0)
    m_center = np.einsum("k,kij->ij", center, maps)
    vals, vecs = np.linalg.eigh(m_center)
    rank_cut = RANK_TOL * max(vals.max(), 1e-30)
    r = vecs[:, vals > rank_cut]
    if r.shape[1] == 0:
        return np.zeros((0, maps.shape[0]))
    off = np.eye(3) - r @ r.T
    # coordinates x with (I - P_R) M(x) = 0, i.e. M(x) supported on range R.
    # The loose cut absorbs the small rotation of R left by the polishing.
    a = np.stack([(off @ maps[k]).reshape(9) for k in range(maps.shape[0])], axis=1)
    _, sv, vt = np.linalg.svd(a, full_matrices=True)
    null = vt[np.sum(sv > 1e-3 * max(1.0, sv[0] if len(sv) else 1.0)):]
    out = [center / np.linalg.norm(center)]
    for y in null:
        for eps in (0.3, 0.1, 0.03, 0.01, 0.003):
            for s in (1.0, -1.0):
                x = center + s * eps * y
                nx = np.linalg.norm(x)
                if nx < 1e-10:
                    continue
                x = x / nx
                if _min_eigs(maps, x[None, :])[0] >= -tol:
                    out.append(x)
    return _clean_feasible(maps, np.asarray(out))


def _analyze_cone(v: ParamSubspace, cone: str, tol: float, seed: int,
                  multistarts: int):
    """Extent, local maximizers, and a feasible spanning sample for one cone."""
    maps = _cone_maps(v, cone)
    n = v.n
    grid = _sphere_grid(n, seed)
    grid_vals = _min_eigs(maps, grid)
    order = np.argsort(grid_vals)[::-1]
    rng = np.random.default_rng(seed + 1)
    starts = np.vstack([
        grid[order[: min(24, len(grid))]],
        rng.standard_normal((multistarts, n)),
    ])
    refined = _ascent(maps, starts)
    refined_vals = _min_eigs(maps, refined)

    # polish the best distinct candidates for a high-precision extent
    best_order = np.argsort(refined_vals)[::-1]
    polished, pol_vals = [], []
    seen = set()
    for idx in best_order:
        key = tuple(np.round(refined[idx], 3))
        if key in seen:
            continue
        seen.add(key)
        x, val = _nm_polish(maps, refined[idx])
        polished.append(x)
        pol_vals.append(val)
        if len(polished) >= 12:
            break
    polished = np.asarray(polished)
    pol_vals = np.asarray(pol_vals)
    extent = float(pol_vals.max())
    if not np.isfinite(extent):
        raise OptimizationFailedError(f"{cone} feasibility search diverged")

    maximizers = _dedupe(polished[pol_vals >= -tol])

    # feasible sample for span estimation: refine every candidate toward the
    # feasible set, polish onto the boundary manifold, then enrich along the
    # face of a relative-interior point
    ortho = _frobenius_basis(maps)
    candidates = np.vstack([refined, grid[order[: min(64, len(grid))]]])
    pulled = _alternating_projection(maps, ortho, candidates)
    pool = np.vstack([maximizers, pulled]) if len(pulled) else maximizers
    if len(pool):
        pool = pool[_min_eigs(maps, pool) >= -tol]
    feas = _clean_feasible(maps, _dedupe(pool))
    if len(feas):
        enriched = _face_enrichment(maps, feas, tol)
        if len(enriched):
            feas = _dedupe(np.vstack([feas, enriched]))
        best = float(_min_eigs(maps, feas).max())
        extent = max(extent, best)
    return extent, maximizers, feas


def _span_dim(v: ParamSubspace, xs: np.ndarray) -> int:
    """Rank of the witness collection in the 6-vector serialization."""
    if len(xs) == 0:
        return 0
    mats = np.einsum("sk,kij->sij", xs, v.basis)
    vec = np.stack([sym_to_vec6(m) for m in mats])
    sv = np.linalg.svd(vec, compute_uv=False)
    return int(np.sum(sv > RANK_TOL * sv[0]))


def _witness_matrices(v: ParamSubspace, xs: np.ndarray) -> list:
    return [np.einsum("k,kij->ij", x, v.basis) for x in xs]


def feasible_extent(v: ParamSubspace, cone: str, tol: float = FEAS_TOL,
                    seed: int = 0, multistarts: int = 200):
    """Best achievable minimum eigenvalue over unit coordinate directions.

    For cone "CP" the objective is lambda_min(sum_k x_k B_k); for cone "P"
    it is lambda_min applied to the dissipation image.  Returns the extent
    and the local maximizers with lambda_min >= -tol, as matrices in the
    subspace.

    Raises
    ------
    OptimizationFailedError
        If no restart produced a finite value.
    """
    extent, maximizers, _ = _analyze_cone(v, cone, tol, seed, multistarts)
    return extent, _witness_matrices(v, maximizers)


def classify_subspace(v: ParamSubspace, tol: float = FEAS_TOL,
                      band: tuple = BOUNDARY_BAND, seed: int = 0,
                      multistarts: int = 200) -> ConeAnalysis:
    """Classify a subspace into the six admissibility cases.

    The label records whether nonzero admissible members exist under plain
    positivity / complete positivity and whether those sets touch the cone
    interiors; n_p and n_cp are the dimensions of their spans.  An extent
    inside the boundary band is resolved conservatively as the boundary
    case and flagged as ambiguous.
    """
    lo, hi = band
    extent_p, _, feas_p = _analyze_cone(v, "P", tol, seed, multistarts)
    extent_cp, _, feas_cp = _analyze_cone(v, "CP", tol, seed, multistarts)

    p_empty = extent_p < lo
    cp_empty = extent_cp < lo
    p_boundary = lo <= extent_p <= hi
    cp_boundary = lo <= extent_cp <= hi
    ambiguous = p_boundary or cp_boundary

    if p_empty:
        label = "1"
        feas_p = feas_p[:0]
        feas_cp = feas_cp[:0]
    elif cp_empty:
        label = "2a" if p_boundary else "2b"
        feas_cp = feas_cp[:0]
    elif p_boundary and cp_boundary:
        label = "3a"
    elif cp_boundary:
        label = "3b"
    else:
        label = "3c"

    return ConeAnalysis(
        case_label=label,
        n=v.n,
        n_p=_span_dim(v, feas_p),
        n_cp=_span_dim(v, feas_cp),
        extent_p=extent_p,
        extent_cp=extent_cp,
        witnesses_p=_witness_matrices(v, feas_p),
        witnesses_cp=_witness_matrices(v, feas_cp),
        ambiguous=ambiguous,
    )


# ---------------------------------------------------------------------------
# common isotropic directions and the rank-drop certificate
# ---------------------------------------------------------------------------

def _isotropic_solve(forms: np.ndarray, w0: np.ndarray, deflate=None):
    """One least-squares descent of the stacked forms from w0."""

    def residuals(w):
        s = w @ w
        res = np.einsum("i,kij,j->k", w, forms, w) / s
        if deflate is not None and len(deflate):
            res = np.concatenate([res, (deflate @ w) / np.sqrt(s)])
        return res

    def jac(w):
        s = w @ w
        fw = np.einsum("kij,j->ki", forms, w)
        qw = np.einsum("i,kij,j->k", w, forms, w)
        rows = 2.0 * (fw * s - qw[:, None] * w[None, :]) / s**2
        if deflate is not None and len(deflate):
            pw = deflate @ w
            extra = (deflate * np.sqrt(s) - pw[:, None] * w[None, :] / np.sqrt(s)) / s
            rows = np.vstack([rows, extra])
        return rows

    with np.errstate(invalid="ignore", divide="ignore"):
        res = least_squares(residuals, w0, jac=jac, xtol=1e-14, ftol=1e-14,
                            gtol=1e-14)
    return res.x


def _isotropic_polish(forms: np.ndarray, w: np.ndarray, iters: int = 60):
    """Gauss-Newton refinement of w onto the common zero set of the forms.

    The least-squares cost is quartic in the off-set components, so descent
    methods stall around 1e-5; the Gauss-Newton step halves the distance per
    iteration and reaches machine precision.
    """
    w = w / np.linalg.norm(w)
    for _ in range(iters):
        resid = np.einsum("i,kij,j->k", w, forms, w)
        if np.max(np.abs(resid)) < 1e-17:
            break
        jac = 2.0 * np.einsum("kij,j->ki", forms, w)
        delta, *_ = np.linalg.lstsq(jac, -resid, rcond=None)
        w = w + delta
        nw = np.linalg.norm(w)
        if nw < 1e-8:
            return None
        w = w / nw
    return w


def _isotropic_hits(forms: np.ndarray, seed: int, starts: int, tol: float,
                    deflate: np.ndarray = None):
    """Unit directions with w^T B w = 0 for every form, by multistart search.

    ``deflate`` (rows of an orthonormal set) adds penalty residuals pushing
    the search outside the span already found.  Every candidate is re-polished
    against the bare forms, so near-misses collapse back onto the true
    isotropic set instead of surviving as spurious off-span directions, and
    is accepted only well below the nominal tolerance.
    """
    accept = tol * 1e-2
    rng = np.random.default_rng(seed)
    seeds = np.vstack([np.eye(3), rng.standard_normal((starts, 3))])
    hits = []
    for w0 in seeds:
        w = w0 / np.linalg.norm(w0)
        if np.max(np.abs(np.einsum("i,kij,j->k", w, forms, w))) >= accept:
            w = _isotropic_solve(forms, w, deflate)
            nw = np.linalg.norm(w)
            if nw < 1e-8:
                continue
            w = w / nw
        w = _isotropic_polish(forms, w)
        if w is None:
            continue
        if np.max(np.abs(np.einsum("i,kij,j->k", w, forms, w))) < accept:
            if w[np.argmax(np.abs(w))] < 0:
                w = -w
            hits.append(w)
    return hits


def _orthonormal_isotropic(forms: np.ndarray, target: int, seed: int,
                           starts: int, tol: float):
    """Mutually orthonormal isotropic directions, greedily deflated."""
    found = []
    while len(found) < target:
        deflate = np.asarray(found) if found else None
        sub = _isotropic_hits(forms, seed + 7 * len(found), starts, tol, deflate)
        pick = None
        for w in sub:
            if not found or np.max(np.abs(np.asarray(found) @ w)) < 1e-9:
                pick = w
                break
        if pick is None:
            break
        found.append(pick)
    return found


def isotropic_span(v: ParamSubspace, seed: int = 0, starts: int = 48,
                   tol: float = 1e-8) -> IsotropicSpan:
    """Span of the directions annihilating every quadratic form of the basis.

    Directions are found by multistart least-squares minimization of the
    stacked forms w^T B_k w on the unit sphere, with deflation passes pushed
    outside the span already found; the span dimension is the rank of the
    hit collection.  The returned basis is orthonormal, built from isotropic
    directions whenever an orthonormal isotropic set of full span dimension
    exists (it does for all entry-pattern subspaces).
    """
    forms = v.normalized
    hits = _isotropic_hits(forms, seed, starts, tol)
    span_basis = []
    for _ in range(3):
        if not hits:
            break
        stack = np.asarray(hits)
        sv = np.linalg.svd(stack, compute_uv=False)
        dim = int(np.sum(sv > 1e-6 * sv[0]))
        if len(span_basis) == dim == 3:
            break
        q = np.linalg.svd(stack, full_matrices=False)[2][:dim]
        span_basis = list(q)
        if dim == 3:
            break
        more = _isotropic_hits(forms, seed + 101, starts, tol,
                               deflate=np.asarray(span_basis))
        fresh = [w for w in more
                 if np.linalg.norm(w - np.asarray(span_basis).T
                                   @ (np.asarray(span_basis) @ w)) > 1e-3]
        if not fresh:
            break
        hits.extend(fresh)
    if not hits:
        return IsotropicSpan(k_basis=np.zeros((0, 3)), k_dim=0)
    k_dim = len(span_basis)
    ortho_iso = _orthonormal_isotropic(forms, k_dim, seed, starts, tol)
    if len(ortho_iso) == k_dim:
        k_basis = np.asarray(ortho_iso)
    else:
        k_basis = np.asarray(span_basis)
    return IsotropicSpan(k_basis=k_basis, k_dim=k_dim)


def rank_drop_certificate(v: ParamSubspace, draws: int = 32, seed: int = 0,
                          tol: float = 1e-8) -> str:
    """Rank-drop certificate from the common isotropic span K.

    Returns "condition1" when dim K = 1 and C(theta) K != 0 for a majority
    of generic coordinate draws, "condition2" when dim K = 2 and the form
    restricted to K has a nonzero off-diagonal element in some orthonormal
    basis of K (equivalently, is not a multiple of the identity on K), and
    "none" otherwise.  A nonzero verdict certifies n_p > n_cp != 0.
    """
    span = isotropic_span(v, seed=seed)
    rng = np.random.default_rng(seed)
    thetas = rng.uniform(-1.0, 1.0, size=(draws, v.n))
    if span.k_dim == 1:
        w = span.k_basis[0]
        hits = 0
        for theta in thetas:
            if np.max(np.abs(v.matrix(theta) @ w)) > tol:
                hits += 1
        return "condition1" if hits > draws // 2 else "none"
    if span.k_dim == 2:
        q = span.k_basis.T  # (3, 2)
        hits = 0
        for theta in thetas:
            f = q.T @ v.matrix(theta) @ q
            # largest off-diagonal over all rotations of the orthonormal pair
            if np.hypot(0.5 * (f[0, 0] - f[1, 1]), f[0, 1]) > tol:
                hits += 1
        return "condition2" if hits > draws // 2 else "none"
    return "none"

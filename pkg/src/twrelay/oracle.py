"""Brute-force oracles for the closed-form results.

Everything here deliberately avoids the closed-form optima: maxima are
located by dense grid scans (optionally sharpened by golden-section
refinement), the multiple-access search walks the whole rate region, and
the denoiser search enumerates relay codebooks exhaustively.  Tests compare
these independent answers against the formulas.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import schemes
from .channel import LinkConfig, capacity, ma_contains, ma_region, RatePair

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0  # 1/phi
_INV_PHI2 = (3.0 - math.sqrt(5.0)) / 2.0  # 1/phi^2


@dataclass(frozen=True)
class GridResult:
    """Outcome of a brute-force maximization.

    ``best_param`` is the optimizing parameter: a float for the 1-D
    searches, an ``(rate_a, rate_c)`` pair for the region search.
    """

    best_param: object
    best_rate: float
    grid_points: int
    refinement_iterations: int


def _golden_max(f: Callable[[float], float], lo: float, hi: float, tol: float) -> tuple[float, int]:
    """Golden-section maximization of a unimodal function on [lo, hi].

    Returns the located maximizer and the number of interval reductions.
    """
    a, b = lo, hi
    h = b - a
    if h <= tol:
        return 0.5 * (a + b), 0
    # reductions needed to shrink the bracket below tol
    steps = int(math.ceil(math.log(tol / h) / math.log(_INV_PHI)))
    c = a + _INV_PHI2 * h
    d = a + _INV_PHI * h
    fc = f(c)
    fd = f(d)
    for _ in range(steps):
        h *= _INV_PHI
        if fc > fd:
            b, d, fd = d, c, fc
            c = a + _INV_PHI2 * h
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * h
            fd = f(d)
    x = 0.5 * (a + d) if fc > fd else 0.5 * (c + b)
    return x, steps


def _grid_refine(
    f: Callable[[float], float],
    grid: np.ndarray,
    method: str,
    tol: float,
    lo_bound: float,
    hi_bound: float,
) -> GridResult:
    values = np.array([f(x) for x in grid])
    i = int(np.argmax(values))  # first maximum: smallest parameter wins ties
    best_x = float(grid[i])
    best_v = float(values[i])
    iterations = 0
    if method == "golden":
        lo = float(grid[i - 1]) if i > 0 else lo_bound
        hi = float(grid[i + 1]) if i < len(grid) - 1 else hi_bound
        x, iterations = _golden_max(f, lo, hi, tol)
        v = f(x)
        if v >= best_v:
            best_x, best_v = x, v
    elif method != "grid":
        raise ValueError(f"unknown refinement method {method!r} (expected 'golden' or 'grid')")
    return GridResult(
        best_param=best_x,
        best_rate=best_v,
        grid_points=len(grid),
        refinement_iterations=iterations,
    )


def grid_max_df_theta(
    config: LinkConfig,
    grid_points: int = 1001,
    method: str = "golden",
    tol: float = 1e-10,
) -> GridResult:
    """Maximize the DF rate over the time split theta by brute force.

    Scans ``grid_points`` interior points of (0, 1); with
    ``method="golden"`` the winning grid cell is then refined by
    golden-section search (the rate is unimodal in theta), while
    ``method="grid"`` reports the raw grid maximum.
    """
    if grid_points < 3:
        raise ValueError(f"grid_points must be at least 3, got {grid_points!r}")
    grid = np.linspace(0.0, 1.0, grid_points + 2)[1:-1]  # keep theta in (0, 1)

    def f(theta: float) -> float:
        return schemes.df_rate(config, theta).rate

    # golden-section probes stay strictly interior, so the bracket may
    # extend to the open-interval endpoints even though f(0)/f(1) are
    # never evaluated; a maximizer below the first grid point stays reachable
    return _grid_refine(f, grid, method, tol, lo_bound=0.0, hi_bound=1.0)


def grid_max_jdf_lambda(
    config: LinkConfig,
    grid_points: int = 1001,
    method: str = "golden",
    tol: float = 1e-10,
) -> GridResult:
    """Maximize the JDF rate over the time-share weight lam by brute force."""
    if grid_points < 3:
        raise ValueError(f"grid_points must be at least 3, got {grid_points!r}")
    grid = np.linspace(0.0, 1.0, grid_points)

    def f(lam: float) -> float:
        return schemes.jdf_rate(config, lam).rate

    return _grid_refine(f, grid, method, tol, lo_bound=0.0, hi_bound=1.0)


def ma_pair_two_way_rate(config: LinkConfig, rate_a: float, rate_c: float) -> float:
    """Two-way rate achieved by an arbitrary multiple-access rate pair.

    Generalizes the JDF objective off the dominant face: the relay
    broadcasts the XOR at the weaker-link rate and ships any excess of the
    C-bound packet at the stronger-link rate.  The pair must lie inside the
    multiple-access region.
    """
    if rate_a < 0.0 or rate_c < 0.0:
        raise ValueError("rates must be nonnegative")
    if not ma_contains(config, RatePair(rate_a=rate_a, rate_c=rate_c)):
        raise ValueError(
            f"rate pair ({rate_a!r}, {rate_c!r}) lies outside the multiple-access region"
        )
    c1 = capacity(config.gamma1)
    c2 = capacity(config.gamma2)
    duration = 1.0 + rate_c / c1
    if rate_a > rate_c:
        duration += (rate_a - rate_c) / c2
    return (rate_a + rate_c) / duration


def grid_max_ma_region(config: LinkConfig, grid_points: int = 401) -> GridResult:
    """Maximize the two-way rate over the whole multiple-access region.

    Scans a ``grid_points`` x ``grid_points`` lattice over
    ``[0, C(gamma1)] x [0, C(gamma2)]``, discarding points beyond the sum
    capacity.  Confirms that restricting attention to the dominant face
    (as the closed forms do) loses nothing beyond grid resolution.
    """
    if grid_points < 3:
        raise ValueError(f"grid_points must be at least 3 per axis, got {grid_points!r}")
    region = ma_region(config)
    ras = np.linspace(0.0, region.cap_a, grid_points)
    rcs = np.linspace(0.0, region.cap_c, grid_points)
    ra = ras[:, None]
    rc = rcs[None, :]
    duration = 1.0 + rc / region.cap_a + np.where(ra > rc, (ra - rc) / region.cap_c, 0.0)
    rate = (ra + rc) / duration
    rate[ra + rc > region.cap_sum + 1e-12] = -np.inf
    flat = int(np.argmax(rate))  # row-major: smallest (rate_a, rate_c) wins ties
    i, j = divmod(flat, grid_points)
    return GridResult(
        best_param=(float(ras[i]), float(rcs[j])),
        best_rate=float(rate[i, j]),
        grid_points=grid_points,
        refinement_iterations=0,
    )


class AlphabetBudgetError(ValueError):
    """Alphabet sizes beyond the exhaustive-search budget."""


class DenoiserSearchExhausted(RuntimeError):
    """No valid relay codebook exists for any size within the bound."""


@dataclass(frozen=True)
class DenoiserInstance:
    """A minimal relay codebook found by exhaustive search.

    ``mapping`` sends each distinct noiseless observation to a codeword
    index in ``range(codebook_size)``.  ``matches_conjecture`` records
    whether the size equals ``max(|alphabet_a|, |alphabet_c|)``.
    """

    codebook_size: int
    mapping: dict
    matches_conjecture: bool


_MAX_ALPHABET = 6  # exhaustive search budget


def _tabulate(alphabet_a: int, alphabet_c: int, channel: Callable[[int, int], object]):
    if alphabet_a < 1 or alphabet_c < 1:
        raise ValueError("alphabet sizes must be at least 1")
    if alphabet_a > _MAX_ALPHABET or alphabet_c > _MAX_ALPHABET:
        raise AlphabetBudgetError(
            f"alphabet sizes up to {_MAX_ALPHABET} are supported, "
            f"got ({alphabet_a}, {alphabet_c})"
        )
    index: dict = {}  # observation -> vertex id, in first-appearance order
    table = np.empty((alphabet_a, alphabet_c), dtype=np.int64)
    for a in range(alphabet_a):
        for c in range(alphabet_c):
            y = channel(a, c)
            table[a, c] = index.setdefault(y, len(index))
    return index, table


def _conflicts(table: np.ndarray) -> tuple[list[set], bool]:
    """Adjacency between observations that some terminal must tell apart.

    Two observations conflict when they share a row (same A symbol) or a
    column (same C symbol).  A repeated observation within a row or column
    is a self-conflict: no codebook of any size can resolve it.
    """
    n = int(table.max()) + 1
    adj: list[set] = [set() for _ in range(n)]
    self_conflict = False
    lines = [table[a, :] for a in range(table.shape[0])]
    lines += [table[:, c] for c in range(table.shape[1])]
    for line in lines:
        seen = list(map(int, line))
        if len(set(seen)) < len(seen):
            self_conflict = True
        for i, u in enumerate(seen):
            for v in seen[i + 1 :]:
                if u != v:
                    adj[u].add(v)
                    adj[v].add(u)
    return adj, self_conflict


def _color(adj: list[set], k: int) -> Optional[list[int]]:
    """Proper k-coloring by backtracking, or None.

    Vertices are processed in decreasing-degree order; a vertex may only
    open one fresh color beyond those already used, which breaks color
    symmetry and keeps the result deterministic.
    """
    n = len(adj)
    order = sorted(range(n), key=lambda v: (-len(adj[v]), v))
    colors: list[Optional[int]] = [None] * n

    def assign(pos: int, used: int) -> bool:
        if pos == n:
            return True
        v = order[pos]
        for color in range(min(k, used + 1)):
            if all(colors[u] != color for u in adj[v]):
                colors[v] = color
                if assign(pos + 1, max(used, color + 1)):
                    return True
                colors[v] = None
        return False

    if assign(0, 0):
        return [int(c) for c in colors]  # type: ignore[arg-type]
    return None


def separately_invertible(alphabet_a: int, alphabet_c: int, channel: Callable[[int, int], object]) -> bool:
    """Whether the noiseless channel is separately injective in each input.

    For every fixed A symbol the map over C symbols must be injective, and
    vice versa.  This is exactly the condition under which any denoiser
    codebook (of any size) can exist.
    """
    _, table = _tabulate(alphabet_a, alphabet_c, channel)
    for a in range(alphabet_a):
        row = table[a, :]
        if len(set(map(int, row))) < len(row):
            return False
    for c in range(alphabet_c):
        col = table[:, c]
        if len(set(map(int, col))) < len(col):
            return False
    return True


def denoiser_feasible(
    alphabet_a: int,
    alphabet_c: int,
    channel: Callable[[int, int], object],
    codebook_size: int,
) -> Optional[dict]:
    """Try to build a valid relay codebook of exactly ``codebook_size``.

    Returns the observation-to-codeword mapping, or None when no codebook
    of that size lets both terminals decode unambiguously.
    """
    if codebook_size < 1:
        raise ValueError(f"codebook_size must be positive, got {codebook_size!r}")
    index, table = _tabulate(alphabet_a, alphabet_c, channel)
    adj, self_conflict = _conflicts(table)
    if self_conflict:
        return None
    coloring = _color(adj, codebook_size)
    if coloring is None:
        return None
    return {obs: coloring[vid] for obs, vid in index.items()}


def search_min_denoiser(
    alphabet_a: int,
    alphabet_c: int,
    channel: Callable[[int, int], object],
) -> DenoiserInstance:
    """Smallest relay codebook for a noiseless finite-alphabet uplink.

    The relay observes ``channel(a, c)`` and forwards one of ``k``
    codewords; terminal A must recover ``c`` from the codeword and its own
    ``a``, and symmetrically for C.  Sizes ``k = 1, 2, ...`` are tried in
    order up to ``alphabet_a * alphabet_c``, so the returned codebook is
    minimal.  Raises :class:`DenoiserSearchExhausted` when no size works,
    which happens exactly when :func:`separately_invertible` fails.
    """
    index, table = _tabulate(alphabet_a, alphabet_c, channel)
    adj, self_conflict = _conflicts(table)
    if not self_conflict:
        for k in range(1, alphabet_a * alphabet_c + 1):
            coloring = _color(adj, k)
            if coloring is not None:
                return DenoiserInstance(
                    codebook_size=k,
                    mapping={obs: coloring[vid] for obs, vid in index.items()},
                    matches_conjecture=(k == max(alphabet_a, alphabet_c)),
                )
    raise DenoiserSearchExhausted(
        f"no valid relay codebook of size up to {alphabet_a * alphabet_c} exists; "
        "the channel is not separately invertible (separately_invertible fails)"
    )

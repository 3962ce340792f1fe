"""Convergence-radius machinery for the frequency series.

The normalized series is omega/sqrt(alpha) = 1 + sum_j d_j z^j in the
variable z = a^2; every d_j is an exact rational once alpha is rational.
Pade approximants P_K/Q_L match the series through z^(K+L); quadratic
Hermite-Pade triples (P_K, Q_L, R_M) satisfy P f^2 + Q f + R = O(z^(K+L+M+2)).
Singularity locations come from denominator zeros (Pade) or discriminant
zeros Q^2 - 4PR (Hermite-Pade), tracked across approximant orders until
they stabilize.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import mpmath

from .algebra import QQ, SYMBOLIC, alpha_polynomial
from .engine import GAUGE_SIMPLIFIED_XI, PerturbationSeries


class DegenerateApproximantError(ArithmeticError):
    """Blocked Pade entry with Q(0) = 0, or a Hermite-Pade matching
    system whose null space is not one-dimensional."""


class NoStableRootError(ArithmeticError):
    """No singularity candidate persisted across approximant orders."""


# ---------------------------------------------------------------------------
# small exact-polynomial kit (coefficient lists, ascending powers)

def poly_trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def poly_degree(p):
    p = poly_trim(p)
    return len(p) - 1 if p else -1


def poly_mul(p, q):
    if not p or not q:
        return []
    out = [QQ(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return poly_trim(out)


def poly_sub(p, q):
    out = [QQ(0)] * max(len(p), len(q))
    for i, a in enumerate(p):
        out[i] += a
    for i, b in enumerate(q):
        out[i] -= b
    return poly_trim(out)


def poly_scale(p, c):
    return poly_trim([a * c for a in p])


def poly_divmod(p, q):
    q = poly_trim(q)
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(p)
    quot = [QQ(0)] * max(0, len(rem) - len(q) + 1)
    inv_lead = 1 / QQ(q[-1])
    for k in range(len(rem) - len(q), -1, -1):
        c = rem[k + len(q) - 1] * inv_lead
        if c == 0:
            continue
        quot[k] = c
        for i, b in enumerate(q):
            rem[k + i] -= c * b
    return poly_trim(quot), poly_trim(rem)


def poly_gcd(p, q):
    a, b = poly_trim(p), poly_trim(q)
    while b:
        _, r = poly_divmod(a, b)
        a, b = b, r
    if not a:
        return []
    return poly_scale(a, 1 / QQ(a[-1]))  # monic


def poly_eval_mp(p, z):
    total = mpmath.mpc(0)
    for c in reversed(p):
        total = total * z + mpmath.mpf(c.numerator) / mpmath.mpf(c.denominator)
    return total


# ---------------------------------------------------------------------------
# exact linear algebra: Gauss-Jordan over rationals

def rational_rref(rows):
    """In-place reduced row echelon form; returns pivot column list."""
    if not rows:
        return []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = 1 / QQ(rows[r][c])
        rows[r] = [v * inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return pivots


def null_space(rows, ncols):
    """Basis of the null space of the (dense, rational) matrix."""
    work = [list(row) for row in rows if any(v != 0 for v in row)]
    if not work:
        return [[QQ(1) if i == j else QQ(0) for i in range(ncols)]
                for j in range(ncols)]
    pivots = rational_rref(work)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for fc in free:
        v = [QQ(0)] * ncols
        v[fc] = QQ(1)
        for r, pc in enumerate(pivots):
            v[pc] = -work[r][fc]
        basis.append(v)
    return basis


def solve_linear_system(a_rows, b):
    """Unique solution of A x = b, or None if A is singular."""
    n = len(a_rows)
    aug = [list(row) + [rhs] for row, rhs in zip(a_rows, b)]
    pivots = rational_rref(aug)
    if pivots != list(range(n)):
        return None
    return [aug[i][n] for i in range(n)]


# ---------------------------------------------------------------------------
# the normalized frequency series

@dataclass(frozen=True)
class PowerSeries:
    """d_0, d_1, ... with d_j the z^j coefficient, z = a^2, d_0 = 1 for
    the normalized frequency series."""
    coeffs: tuple
    alpha: object = None

    def __len__(self):
        return len(self.coeffs)


def series_from_engine(series: PerturbationSeries, alpha=None) -> PowerSeries:
    """Extract d_j = omega_{2j} / sqrt(alpha) as exact rationals.

    Every even-order frequency correction carries a single overall
    sqrt(alpha) factor; anything else is flagged, as is a nonzero
    odd-order correction (both would falsify the series structure this
    module relies on)."""
    if series.gauge == "zero-initial":
        raise ValueError("frequency series requires a phase-free gauge")
    ring = series.coeff_ring
    n_max = series.order
    if series.alpha == "symbolic":
        if alpha is None:
            raise ValueError("alpha required for a symbolic series")
        a_val = QQ(alpha)
        if a_val <= 0:
            raise ValueError("alpha must be positive")
    else:
        a_val = series.alpha
        if alpha is not None and QQ(alpha) != a_val:
            raise ValueError("alpha disagrees with the series")
    coeffs = []
    for j in range(0, n_max // 2 + 1):
        if 2 * j + 1 <= n_max and not ring.is_zero(series.orders[2 * j + 1].omega):
            raise ArithmeticError(f"odd-order frequency omega_{2*j+1} is nonzero")
        w = series.orders[2 * j].omega
        ratio = ring.div(w, ring.s(1))
        if series.alpha == "symbolic":
            poly = alpha_polynomial(ratio)
            if poly is None:
                raise ArithmeticError(
                    f"omega_{2*j}/sqrt(alpha) is not a polynomial in alpha")
            coeffs.append(sum((c * a_val ** m for m, c in poly.items()), QQ(0)))
        elif hasattr(ring, "root"):          # rational square root of alpha
            coeffs.append(QQ(ratio))
        else:                                # quadratic ring pair (u, v)
            u, v = ratio
            if v != 0:
                raise ArithmeticError(
                    f"omega_{2*j}/sqrt(alpha) has an irrational part")
            coeffs.append(QQ(u))
    if not coeffs or coeffs[0] != 1:
        raise ArithmeticError("normalized series must start with d_0 = 1")
    return PowerSeries(tuple(coeffs), alpha=a_val)


def rational_function_series(P, Q, n):
    """First n series coefficients of P(z)/Q(z); requires Q(0) != 0."""
    q0 = Q[0] if Q else QQ(0)
    if q0 == 0:
        raise ZeroDivisionError("denominator vanishes at the origin")
    out = []
    for j in range(n):
        acc = P[j] if j < len(P) else QQ(0)
        for i in range(1, min(j, len(Q) - 1) + 1):
            acc -= Q[i] * out[j - i]
        out.append(acc / q0)
    return out


# ---------------------------------------------------------------------------
# Pade

@dataclass(frozen=True)
class PadeApprox:
    P: tuple
    Q: tuple   # Q[0] = 1
    K: int
    L: int


def pade_fit(series: PowerSeries, K: int, L: int) -> PadeApprox:
    """[K/L] Pade approximant, exact: P/Q matches the series through
    z^(K+L) with Q(0) = 1.

    The generic path solves the L x L Toeplitz system; a blocked table
    entry falls back to the homogeneous matching system, whose solutions
    all represent the same reduced fraction.  A blocked entry that
    forces Q(0) = 0 is reported for the caller to perturb (K, L)."""
    if K < 0 or L < 0:
        raise ValueError("degrees must be nonnegative")
    c = series.coeffs
    need = K + L + 1
    if len(c) < need:
        raise ValueError(f"insufficient coefficients: need {need}, have {len(c)}")

    def c_at(j):
        return c[j] if 0 <= j < len(c) else QQ(0)

    q = None
    if L > 0:
        rows = [[c_at(K + j - i) for i in range(1, L + 1)] for j in range(1, L + 1)]
        rhs = [-c_at(K + j) for j in range(1, L + 1)]
        sol = solve_linear_system(rows, rhs)
        if sol is not None:
            q = [QQ(1)] + sol
    else:
        q = [QQ(1)]
    if q is not None:
        p = [sum((q[i] * c_at(j - i) for i in range(min(j, L) + 1)), QQ(0))
             for j in range(K + 1)]
        return PadeApprox(tuple(poly_trim(p) or ()), tuple(q), K, L)

    # blocked entry: null space of the full homogeneous matching system
    ncols = K + 1 + L + 1
    rows = []
    for j in range(K + L + 1):
        row = [QQ(0)] * ncols
        if j <= K:
            row[j] = QQ(-1)
        for i in range(min(j, L) + 1):
            row[K + 1 + i] = c_at(j - i)
        rows.append(row)
    basis = null_space(rows, ncols)
    vec = next((v for v in basis if v[K + 1] != 0), None)
    if vec is None:
        raise DegenerateApproximantError(
            f"[{K}/{L}] entry is blocked with Q(0) = 0; perturb the degrees")
    p = poly_trim(vec[:K + 1])
    qv = poly_trim(vec[K + 1:])
    g = poly_gcd(p, qv)
    if poly_degree(g) > 0:
        p, _ = poly_divmod(p, g)
        qv, _ = poly_divmod(qv, g)
    if not qv or qv[0] == 0:
        raise DegenerateApproximantError(
            f"[{K}/{L}] entry is blocked with Q(0) = 0; perturb the degrees")
    inv = 1 / QQ(qv[0])
    p = poly_scale(p, inv)
    qv = poly_scale(qv, inv)
    return PadeApprox(tuple(p), tuple(qv), K, L)


# ---------------------------------------------------------------------------
# quadratic Hermite-Pade

@dataclass(frozen=True)
class QuadHermitePade:
    P: tuple
    Q: tuple
    R: tuple
    K: int
    L: int
    M: int


def hermite_pade_fit(series: PowerSeries, K: int, L: int, M: int) -> QuadHermitePade:
    """Exact (P_K, Q_L, R_M) with P f^2 + Q f + R = O(z^(K+L+M+2)).

    The matching system has K+L+M+2 homogeneous equations in K+L+M+3
    unknowns, so a nontrivial solution always exists; the first nonzero
    coefficient in (p_0..p_K, q_0..q_L, r_0..r_M) order is scaled to 1.
    A null space of dimension above one is reported as degenerate."""
    if min(K, L, M) < 0:
        raise ValueError("degrees must be nonnegative")
    c = series.coeffs
    n_eq = K + L + M + 2
    if len(c) < n_eq:
        raise ValueError(f"insufficient coefficients: need {n_eq}, have {len(c)}")

    sq = [QQ(0)] * n_eq   # coefficients of f^2 through z^(n_eq - 1)
    for i in range(min(len(c), n_eq)):
        if c[i] == 0:
            continue
        for j in range(min(len(c), n_eq - i)):
            sq[i + j] += c[i] * c[j]

    ncols = K + L + M + 3
    rows = []
    for j in range(n_eq):
        row = [QQ(0)] * ncols
        for i in range(min(j, K) + 1):
            row[i] = sq[j - i]
        for i in range(min(j, L) + 1):
            row[K + 1 + i] = c[j - i]
        if j <= M:
            row[K + 1 + L + 1 + j] = QQ(1)
        rows.append(row)
    basis = null_space(rows, ncols)
    if len(basis) != 1:
        raise DegenerateApproximantError(
            f"f[{K},{L},{M}] matching system has a {len(basis)}-dimensional "
            "null space")
    vec = basis[0]
    lead = next(v for v in vec if v != 0)
    vec = [v / lead for v in vec]
    return QuadHermitePade(tuple(poly_trim(vec[:K + 1]) or ()),
                           tuple(poly_trim(vec[K + 1:K + L + 2]) or ()),
                           tuple(poly_trim(vec[K + L + 2:]) or ()),
                           K, L, M)


def discriminant(h: QuadHermitePade):
    """Q^2 - 4 P R as an exact coefficient list."""
    return poly_sub(poly_mul(list(h.Q), list(h.Q)),
                    poly_scale(poly_mul(list(h.P), list(h.R)), QQ(4)))


def _poly_roots_mp(coeffs, dps):
    """All complex roots of an exact polynomial, as mpc values."""
    coeffs = poly_trim(coeffs)
    if len(coeffs) <= 1:
        return []
    with mpmath.workdps(dps):
        hi_to_lo = [mpmath.mpf(c.numerator) / mpmath.mpf(c.denominator)
                    for c in reversed(coeffs)]
        roots = mpmath.polyroots(hi_to_lo, maxsteps=200, extraprec=4 * dps)
        norm = max(abs(v) for v in hi_to_lo)
        for r in roots:
            res = abs(poly_eval_mp(coeffs, r))
            scale = norm * max(1, abs(r)) ** (len(coeffs) - 1)
            if res > mpmath.mpf(10) ** (-dps // 2) * scale:
                raise ArithmeticError("root refinement did not converge")
        return [mpmath.mpc(r) for r in roots]


def discriminant_roots(h: QuadHermitePade, dps: int = 60):
    """Complex zeros of the discriminant (empty for constant ones)."""
    return sorted(_poly_roots_mp(discriminant(h), dps),
                  key=lambda z: (abs(z), -z.real, abs(z.imag), z.imag))


def pade_poles(p: PadeApprox, dps: int = 60):
    return sorted(_poly_roots_mp(list(p.Q), dps),
                  key=lambda z: (abs(z), -z.real, abs(z.imag), z.imag))


# ---------------------------------------------------------------------------
# stable-singularity tracking

FAMILY_PADE = "pade"
FAMILY_HERMITE_PADE = "hermite-pade"
FAMILIES = (FAMILY_PADE, FAMILY_HERMITE_PADE)


@dataclass(frozen=True)
class SingularityEstimate:
    location: complex
    radius: float
    stability_spread: float
    family: str
    orders: tuple
    trail: tuple   # matched location at each order


def _candidate_roots(series: PowerSeries, family: str, m: int, dps: int):
    if family == FAMILY_PADE:
        return pade_poles(pade_fit(series, m, m), dps)
    if family == FAMILY_HERMITE_PADE:
        return discriminant_roots(hermite_pade_fit(series, m, m, m), dps)
    raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")


def max_diagonal_order(family: str, n_coeffs: int) -> int:
    """Largest diagonal order the available coefficients support."""
    if family == FAMILY_PADE:
        return (n_coeffs - 1) // 2
    return (n_coeffs - 2) // 3


def default_orders(family: str, n_coeffs: int, depth: int = None):
    top = max_diagonal_order(family, n_coeffs)
    if depth is None:
        depth = 5 if family == FAMILY_PADE else 3
    lo = max(1, top - depth + 1)
    if top < 1:
        raise ValueError("insufficient coefficients for any diagonal order")
    return tuple(range(lo, top + 1))


def stable_singularity(series: PowerSeries, family: str,
                       order_list: Sequence[int], threshold: float = 1e-2,
                       dps: int = 60) -> SingularityEstimate:
    """Track singularity candidates across approximant orders and return
    the stable one closest to the origin.

    Roots of consecutive orders are matched by nearest neighbor; a chain
    is stable when its maximum pairwise distance, relative to the final
    location, is at most ``threshold``.  The reported location comes
    from the highest order.  Orders whose fit is degenerate are skipped
    (at least two must survive)."""
    orders = sorted(set(int(m) for m in order_list))
    if len(orders) < 2:
        raise ValueError("need at least two approximant orders")
    per_order = []
    used = []
    for m in orders:
        try:
            roots = _candidate_roots(series, family, m, dps)
        except DegenerateApproximantError:
            continue
        if roots:
            per_order.append(roots)
            used.append(m)
    if len(per_order) < 2:
        raise NoStableRootError(
            f"{family}: fewer than two usable approximant orders")
    chains = [[r] for r in per_order[0]]
    for roots in per_order[1:]:
        for chain in chains:
            prev = chain[-1]
            chain.append(min(roots, key=lambda z: abs(z - prev)))
    best = None
    for chain in chains:
        loc = chain[-1]
        scale = abs(loc) or 1.0
        spread = max(abs(a - b) for a in chain for b in chain) / scale
        if float(spread) > threshold:
            continue
        cand = (abs(loc), -loc.real, abs(loc.imag))
        if best is None or cand < best[0]:
            best = (cand, loc, float(spread), chain)
    if best is None:
        raise NoStableRootError(
            f"{family}: no root chain stayed within spread {threshold}")
    _, loc, spread, chain = best
    return SingularityEstimate(location=complex(loc), radius=float(abs(loc)),
                               stability_spread=spread, family=family,
                               orders=tuple(used),
                               trail=tuple(complex(z) for z in chain))


# ---------------------------------------------------------------------------
# the r_c(alpha) scan

@dataclass
class ScanRow:
    alpha: object
    order: int
    rc_pade: Optional[float] = None
    spread_pade: Optional[float] = None
    rc_hermite_pade: Optional[float] = None
    spread_hermite_pade: Optional[float] = None
    error: Optional[str] = None


def radius_scan(alpha_grid: Iterable, max_order: int,
                families: Sequence[str] = FAMILIES, threshold: float = 5e-2,
                dps: int = 60, engine_run=None) -> list:
    """One engine run per alpha, then a stable-singularity estimate per
    family.  Failures are recorded in the row and the scan continues.

    The default spread threshold is looser than stable_singularity's own:
    a scan wants a filled table across parameter values of varying
    convergence quality, and the spread columns expose how trustworthy
    each entry is.  At order 44 the Pade chains still drift by a few
    percent per order, so the strict default would blank most rows."""
    from . import engine
    runner = engine_run or (lambda a: engine.run(max_order, a, GAUGE_SIMPLIFIED_XI))
    rows = []
    for alpha in alpha_grid:
        row = ScanRow(alpha=QQ(alpha), order=max_order)
        try:
            ser = runner(QQ(alpha))
            ps = series_from_engine(ser)
            errors = []
            for family in families:
                try:
                    est = stable_singularity(
                        ps, family, default_orders(family, len(ps)),
                        threshold=threshold, dps=dps)
                except (NoStableRootError, ValueError) as exc:
                    msg = str(exc)
                    errors.append(msg if msg.startswith(family) else f"{family}: {msg}")
                    continue
                if family == FAMILY_PADE:
                    row.rc_pade = est.radius
                    row.spread_pade = est.stability_spread
                else:
                    row.rc_hermite_pade = est.radius
                    row.spread_hermite_pade = est.stability_spread
            if errors:
                row.error = "; ".join(errors)
        except Exception as exc:   # per-alpha isolation by design
            row.error = str(exc)
        rows.append(row)
    return rows

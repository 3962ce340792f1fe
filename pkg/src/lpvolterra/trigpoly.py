"""Trigonometric polynomials in theta = tau + phi and the per-harmonic
solver for the first-order correction system

    W' = K W + R,    K = (1/sqrt(alpha)) [[0, -1], [alpha, 0]].

Coefficients live in any ring from :mod:`lpvolterra.algebra`.  A TrigPoly
holds {harmonic: coefficient} maps for sin and cos; cos[0] is the constant
term.  All values are exact and treated as immutable.
"""

from __future__ import annotations

from typing import NamedTuple

from .algebra import QQ, PhaseRing


class ResonantForcingError(ValueError):
    """First-harmonic forcing is not absorbable: secular removal was
    skipped (or produced an inconsistent frequency correction)."""


class TrigPoly:
    __slots__ = ("ring", "sin", "cos")

    def __init__(self, ring, sin=None, cos=None):
        self.ring = ring
        self.sin = sin or {}
        self.cos = cos or {}

    def __eq__(self, other):
        if not isinstance(other, TrigPoly):
            return NotImplemented
        return self.sin == other.sin and self.cos == other.cos

    __hash__ = None

    def __repr__(self):
        return f"TrigPoly(sin={self.sin!r}, cos={self.cos!r})"


class VectorTrigPoly(NamedTuple):
    xi: TrigPoly
    eta: TrigPoly


def tp_zero(ring) -> TrigPoly:
    return TrigPoly(ring)


def tp_term(ring, kind: str, j: int, coeff) -> TrigPoly:
    if ring.is_zero(coeff):
        return TrigPoly(ring)
    if kind == "sin":
        if j < 1:
            raise ValueError("sin harmonic must be >= 1")
        return TrigPoly(ring, sin={j: coeff})
    if j < 0:
        raise ValueError("cos harmonic must be >= 0")
    return TrigPoly(ring, cos={j: coeff})


def _acc(ring, store: dict, j: int, v) -> None:
    if j in store:
        w = ring.add(store[j], v)
        if ring.is_zero(w):
            del store[j]
        else:
            store[j] = w
    elif not ring.is_zero(v):
        store[j] = v


def tp_add(p: TrigPoly, q: TrigPoly) -> TrigPoly:
    ring = p.ring
    sin = dict(p.sin)
    cos = dict(p.cos)
    for j, v in q.sin.items():
        _acc(ring, sin, j, v)
    for j, v in q.cos.items():
        _acc(ring, cos, j, v)
    return TrigPoly(ring, sin, cos)


def tp_neg(p: TrigPoly) -> TrigPoly:
    ring = p.ring
    return TrigPoly(ring, {j: ring.neg(v) for j, v in p.sin.items()},
                    {j: ring.neg(v) for j, v in p.cos.items()})


def tp_sub(p: TrigPoly, q: TrigPoly) -> TrigPoly:
    return tp_add(p, tp_neg(q))


def tp_scale(p: TrigPoly, q) -> TrigPoly:
    ring = p.ring
    q = QQ(q)
    if not q:
        return TrigPoly(ring)
    return TrigPoly(ring, {j: ring.scale(v, q) for j, v in p.sin.items()},
                    {j: ring.scale(v, q) for j, v in p.cos.items()})


def tp_mul_el(p: TrigPoly, el) -> TrigPoly:
    """Multiply every coefficient by a ring element."""
    ring = p.ring
    if ring.is_zero(el):
        return TrigPoly(ring)
    sin = {}
    cos = {}
    for j, v in p.sin.items():
        w = ring.mul(v, el)
        if not ring.is_zero(w):
            sin[j] = w
    for j, v in p.cos.items():
        w = ring.mul(v, el)
        if not ring.is_zero(w):
            cos[j] = w
    return TrigPoly(ring, sin, cos)


def tp_mul(p: TrigPoly, q: TrigPoly) -> TrigPoly:
    """Exact product via product-to-sum reduction."""
    ring = p.ring
    half = QQ(1, 2)
    sin_out: dict = {}
    cos_out: dict = {}

    def acc_sin(j, v):
        if j == 0 or ring.is_zero(v):
            return
        if j < 0:
            j, v = -j, ring.neg(v)
        _acc(ring, sin_out, j, v)

    def acc_cos(j, v):
        if ring.is_zero(v):
            return
        _acc(ring, cos_out, abs(j), v)

    for a, u in p.sin.items():
        for b, v in q.sin.items():
            w = ring.scale(ring.mul(u, v), half)
            acc_cos(a - b, w)           # sin a sin b = [cos(a-b) - cos(a+b)]/2
            acc_cos(a + b, ring.neg(w))
        for b, v in q.cos.items():
            w = ring.scale(ring.mul(u, v), half)
            acc_sin(a + b, w)           # sin a cos b = [sin(a+b) + sin(a-b)]/2
            acc_sin(a - b, w)
    for a, u in p.cos.items():
        for b, v in q.sin.items():
            w = ring.scale(ring.mul(u, v), half)
            acc_sin(a + b, w)           # cos a sin b = [sin(a+b) - sin(a-b)]/2
            acc_sin(a - b, ring.neg(w))
        for b, v in q.cos.items():
            w = ring.scale(ring.mul(u, v), half)
            acc_cos(a - b, w)           # cos a cos b = [cos(a-b) + cos(a+b)]/2
            acc_cos(a + b, w)
    return TrigPoly(ring, sin_out, cos_out)


def tp_diff(p: TrigPoly) -> TrigPoly:
    """d/dtau (theta-shift leaves harmonics intact)."""
    ring = p.ring
    sin = {}
    cos = {}
    for j, v in p.sin.items():
        cos[j] = ring.scale(v, QQ(j))
    for j, v in p.cos.items():
        if j:
            sin[j] = ring.scale(v, QQ(-j))
    return TrigPoly(ring, sin, cos)


def harmonic(p: TrigPoly, j: int):
    """(sin, cos) coefficient pair of harmonic j (zero elements if absent)."""
    ring = p.ring
    z = ring.zero()
    return (p.sin.get(j, z) if j else z), p.cos.get(j, z)


def max_harmonic(p: TrigPoly) -> int:
    hs = list(p.sin) + list(p.cos)
    return max(hs) if hs else 0


def strip_harmonic(p: TrigPoly, j: int) -> TrigPoly:
    sin = {k: v for k, v in p.sin.items() if k != j}
    cos = {k: v for k, v in p.cos.items() if k != j}
    return TrigPoly(p.ring, sin, cos)


def evaluate_at_zero(p: TrigPoly, phase_ring: PhaseRing):
    """Value of p at tau = 0, i.e. theta = phi, as a phase-ring element."""
    ring = p.ring
    if isinstance(ring, PhaseRing):
        if ring is not phase_ring:
            raise ValueError("phase ring mismatch")
        lift = lambda c: c
    else:
        if phase_ring.base is not ring:
            raise ValueError("phase ring does not extend the coefficient ring")
        lift = phase_ring.lift
    total = phase_ring.zero()
    for j, v in p.sin.items():
        total = phase_ring.add(total, phase_ring.mul(lift(v), phase_ring.sin_phi(j)))
    for j, v in p.cos.items():
        term = lift(v) if j == 0 else phase_ring.mul(lift(v), phase_ring.cos_phi(j))
        total = phase_ring.add(total, term)
    return total


# ---------------------------------------------------------------------------
# the linear system W' = K W + R

def k_apply(v: VectorTrigPoly) -> VectorTrigPoly:
    ring = v.xi.ring
    return VectorTrigPoly(
        tp_mul_el(v.eta, ring.neg(ring.s(-1))),
        tp_mul_el(v.xi, ring.s(1)),
    )


def residual(forcing: VectorTrigPoly, w: VectorTrigPoly) -> VectorTrigPoly:
    """W' - K W - R; identically zero for an exact solution."""
    kw = k_apply(w)
    return VectorTrigPoly(
        tp_sub(tp_sub(tp_diff(w.xi), kw.xi), forcing.xi),
        tp_sub(tp_sub(tp_diff(w.eta), kw.eta), forcing.eta),
    )


def first_harmonic_absorbable(forcing: VectorTrigPoly) -> bool:
    """True when the first-harmonic forcing satisfies the two identities
    g_s = -s f_c, g_c = s f_s that make it absorbable without secular
    growth (equivalently: the first harmonic of F' - G/s vanishes)."""
    ring = forcing.xi.ring
    f_s, f_c = harmonic(forcing.xi, 1)
    g_s, g_c = harmonic(forcing.eta, 1)
    s = ring.s(1)
    return (ring.is_zero(ring.add(g_s, ring.mul(s, f_c)))
            and ring.is_zero(ring.sub(g_c, ring.mul(s, f_s))))


def particular_solution(forcing: VectorTrigPoly, absorb: str = "xi") -> VectorTrigPoly:
    """One exact solution of W' = K W + R with no secular terms.

    Harmonics j != 1 are fixed by 2x2 elimination (the j = 1 block of the
    operator is singular).  An absorbable first harmonic has a 2-parameter
    family of solutions; ``absorb`` picks the representative with the
    first harmonic of xi (``"xi"``) or eta (``"eta"``) equal to zero.
    Raises :class:`ResonantForcingError` for non-absorbable first
    harmonics.
    """
    ring = forcing.xi.ring
    s = ring.s(1)
    inv_s = ring.s(-1)
    xi_sin: dict = {}
    xi_cos: dict = {}
    eta_sin: dict = {}
    eta_cos: dict = {}
    harmonics = (set(forcing.xi.sin) | set(forcing.xi.cos)
                 | set(forcing.eta.sin) | set(forcing.eta.cos))
    for j in sorted(harmonics):
        f_s, f_c = harmonic(forcing.xi, j)
        g_s, g_c = harmonic(forcing.eta, j)
        if j == 0:
            # constant block: 0 = K W + R  =>  W = -K^{-1} R
            xi0 = ring.neg(ring.mul(inv_s, g_c))
            eta0 = ring.mul(s, f_c)
            if not ring.is_zero(xi0):
                xi_cos[0] = xi0
            if not ring.is_zero(eta0):
                eta_cos[0] = eta0
            continue
        if j == 1:
            if not first_harmonic_absorbable(forcing):
                raise ResonantForcingError(
                    "non-absorbable first-harmonic forcing; "
                    "secular removal was skipped")
            if absorb == "xi":
                q_s, q_c = ring.mul(s, f_s), ring.mul(s, f_c)
                for k, v in (("s", q_s), ("c", q_c)):
                    if not ring.is_zero(v):
                        (eta_sin if k == "s" else eta_cos)[1] = v
            elif absorb == "eta":
                p_s, p_c = f_c, ring.neg(f_s)
                if not ring.is_zero(p_s):
                    xi_sin[1] = p_s
                if not ring.is_zero(p_c):
                    xi_cos[1] = p_c
            else:
                raise ValueError("absorb must be 'xi' or 'eta'")
            continue
        # generic block, determinant 1 - j^2 != 0
        inv_det = QQ(1, 1 - j * j)
        inv_j = QQ(1, j)
        q_c = ring.scale(ring.add(ring.mul(s, f_c), ring.scale(g_s, QQ(j))), inv_det)
        p_s = ring.scale(ring.sub(f_c, ring.mul(inv_s, q_c)), inv_j)
        p_c = ring.scale(ring.sub(ring.scale(f_s, QQ(j)), ring.mul(inv_s, g_c)), inv_det)
        q_s = ring.scale(ring.add(ring.mul(s, p_c), g_c), inv_j)
        for store, val in ((xi_sin, p_s), (xi_cos, p_c), (eta_sin, q_s), (eta_cos, q_c)):
            if not ring.is_zero(val):
                store[j] = val
    return VectorTrigPoly(TrigPoly(ring, xi_sin, xi_cos),
                          TrigPoly(ring, eta_sin, eta_cos))


def homogeneous_combination(ring, c1, c2) -> VectorTrigPoly:
    """c1 (cos th, s sin th) + c2 (-sin th / s, cos th): the kernel of
    d/dtau - K in the theta representation."""
    s = ring.s(1)
    inv_s = ring.s(-1)
    xi = TrigPoly(ring)
    eta = TrigPoly(ring)
    xi = tp_add(xi, TrigPoly(ring, sin={1: ring.neg(ring.mul(c2, inv_s))},
                             cos={1: c1}))
    eta = tp_add(eta, TrigPoly(ring, sin={1: ring.mul(c1, s)}, cos={1: c2}))
    # drop zero entries introduced above
    return VectorTrigPoly(
        TrigPoly(ring, {k: v for k, v in xi.sin.items() if not ring.is_zero(v)},
                 {k: v for k, v in xi.cos.items() if not ring.is_zero(v)}),
        TrigPoly(ring, {k: v for k, v in eta.sin.items() if not ring.is_zero(v)},
                 {k: v for k, v in eta.cos.items() if not ring.is_zero(v)}),
    )


def exp_tk_vector(phase_ring: PhaseRing, v1, v2) -> VectorTrigPoly:
    """exp(tau K) (v1, v2), written in theta = tau + phi harmonics.

    Needs the phase extension because cos(tau) = cos(theta - phi) mixes
    phi into the coefficients.  Evaluating at tau = 0 returns (v1, v2).
    """
    P = phase_ring
    sin_p = P.sin_phi(1)
    cos_p = P.cos_phi(1)
    inv_s = P.s(-1)
    s = P.s(1)
    # cos tau = cos phi cos th + sin phi sin th ; sin tau = cos phi sin th - sin phi cos th
    xi_cos = P.add(P.mul(v1, cos_p), P.mul(P.mul(v2, inv_s), sin_p))
    xi_sin = P.sub(P.mul(v1, sin_p), P.mul(P.mul(v2, inv_s), cos_p))
    eta_sin = P.add(P.mul(P.mul(v1, s), cos_p), P.mul(v2, sin_p))
    eta_cos = P.sub(P.mul(v2, cos_p), P.mul(P.mul(v1, s), sin_p))
    xi = TrigPoly(P, {1: xi_sin} if not P.is_zero(xi_sin) else {},
                  {1: xi_cos} if not P.is_zero(xi_cos) else {})
    eta = TrigPoly(P, {1: eta_sin} if not P.is_zero(eta_sin) else {},
                   {1: eta_cos} if not P.is_zero(eta_cos) else {})
    return VectorTrigPoly(xi, eta)


def solve_linear(forcing: VectorTrigPoly, homogeneous=None,
                 absorb: str = "xi") -> VectorTrigPoly:
    """Solve W' = K W + R exactly.

    With ``homogeneous=(a, b)`` the solution is anchored to W(0) = (a, b),
    which requires phase-extended coefficients (cos tau enters); with
    ``homogeneous=None`` the unanchored representative chosen by
    ``absorb`` is returned.  Forcing with a non-absorbable first harmonic
    raises :class:`ResonantForcingError`.
    """
    part = particular_solution(forcing, absorb=absorb)
    if homogeneous is None:
        return part
    ring = forcing.xi.ring
    if not isinstance(ring, PhaseRing):
        raise ValueError("anchoring W(0) requires a phase-extended ring")
    a, b = homogeneous
    v1 = ring.sub(a, evaluate_at_zero(part.xi, ring))
    v2 = ring.sub(b, evaluate_at_zero(part.eta, ring))
    if ring.is_zero(v1) and ring.is_zero(v2):
        return part
    hom = exp_tk_vector(ring, v1, v2)
    return VectorTrigPoly(tp_add(part.xi, hom.xi), tp_add(part.eta, hom.eta))


def to_triples(p: TrigPoly, amp_power: int = 0) -> list:
    """JSON-ready [harmonic, kind, coefficient-string] triples."""
    from .algebra import format_element
    out = []
    for j in sorted(set(p.sin) | set(p.cos)):
        if j in p.sin:
            out.append([j, "sin", format_element(p.ring, p.sin[j], amp_power)])
        if j in p.cos:
            out.append([j, "cos", format_element(p.ring, p.cos[j], amp_power)])
    return out


def from_triples(ring, triples) -> TrigPoly:
    from .algebra import parse_element
    p = TrigPoly(ring)
    for j, kind, text in triples:
        el, _amp = parse_element(ring, text)
        p = tp_add(p, tp_term(ring, kind, int(j), el))
    return p

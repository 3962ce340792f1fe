"""Self-test suites behind the ``check`` subcommand.

Every check here re-derives something the package is supposed to
guarantee and compares it against frozen reference data or an
independently assembled quantity.  The strongest one is
``equation_residuals``: it substitutes a finished series back into the
scaled equations of motion and expands in the amplitude parameter from
scratch, sharing none of the per-order solver's bookkeeping.

Two suite levels exist.  "quick" keeps symbolic work at order 6 and
samples lightly; "full" raises the residual cap to 10, pushes the
odd-order frequency check to order 45, and adds the slow numeric
cross-validations.
"""

import json
import math
import os
import random
import time
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources

import mpmath

from .algebra import (QQ, PhaseRing, SymbolicRing, canonical,
                      evaluate_numeric, format_element, numeric_ring,
                      parse_element, to_mpf)
from .analysis import (FAMILY_HERMITE_PADE, FAMILY_PADE, PowerSeries,
                       discriminant_roots, hermite_pade_fit, pade_fit,
                       poly_eval_mp, poly_mul, poly_sub, poly_trim,
                       rational_function_series, series_from_engine,
                       stable_singularity)
from .engine import (GAUGE_SIMPLIFIED_ETA, GAUGE_SIMPLIFIED_XI,
                     GAUGE_ZERO_INITIAL, PerturbationSeries, build_forcing,
                     evaluate_solution, remove_secular, run)
from .trigpoly import (ResonantForcingError, VectorTrigPoly,
                       evaluate_at_zero, exp_tk_vector, harmonic,
                       max_harmonic, particular_solution, residual, tp_add,
                       tp_diff, tp_mul, tp_mul_el, tp_term, tp_zero,
                       to_triples)
from .verify import IntegratorConfig, integrate, measure_frequency

GOLDEN_ENV = "LPV_GOLDEN_PATH"
LEVELS = ("quick", "full")

FIG1_ALPHA = 1
FIG1_X0 = 1 + 0.1 * math.cos(math.pi / 4)
FIG1_Y0 = 1 + 0.1 * math.sin(math.pi / 4)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str          # what was verified, or the failure message
    elapsed: float       # seconds


def load_golden(path=None):
    """Reference data for the golden-strings check.

    Resolution order: explicit ``path``, the LPV_GOLDEN_PATH environment
    variable, then the copy shipped inside the package.
    """
    if path is None:
        path = os.environ.get(GOLDEN_ENV)
    if path is not None:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    text = resources.files("lpvolterra").joinpath("data/golden.json").read_text("utf-8")
    return json.loads(text)


# ---------------------------------------------------------------------------
# independent residual oracle

def _tp_is_empty(p):
    return not p.sin and not p.cos


def equation_residuals(series: PerturbationSeries, upto=None):
    """Substitute the solved series back into the scaled equations.

    With x = 1 + eps*xi, y = 1 + eps*eta and tau = omega*t the system
    becomes

        omega xi'  = -eta     - eps xi eta
        omega eta' = alpha xi + eps alpha xi eta

    so collecting the eps^n coefficient gives, for every n up to the
    series order,

        sum_{m<=n} omega_m xi'_{n-m}  + eta_n + C_{n-1}        = 0
        sum_{m<=n} omega_m eta'_{n-m} - alpha (xi_n + C_{n-1}) = 0

    with C_k = sum_{i+j=k} xi_i eta_j and C_{-1} = 0.  Everything is
    assembled from the finished solution by multiplication and
    differentiation alone; none of the solver's forcing construction is
    reused, which makes this an independent correctness oracle.

    Returns the list of (order, equation) pairs whose residual is not
    identically zero; empty on success.
    """
    ring = series.coeff_ring
    n_max = series.order if upto is None else min(upto, series.order)
    xs = [o.xi for o in series.orders[:n_max + 1]]
    es = [o.eta for o in series.orders[:n_max + 1]]
    ws = [o.omega for o in series.orders[:n_max + 1]]
    dxs = [tp_diff(p) for p in xs]
    des = [tp_diff(p) for p in es]
    alpha_el = ring.s(2)
    failures = []
    for n in range(n_max + 1):
        conv = tp_zero(ring)
        for i in range(n):
            conv = tp_add(conv, tp_mul(xs[i], es[n - 1 - i]))
        r1 = tp_add(es[n], conv)
        r2 = tp_mul_el(tp_add(xs[n], conv), ring.neg(alpha_el))
        for m in range(n + 1):
            if ring.is_zero(ws[m]):
                continue
            r1 = tp_add(r1, tp_mul_el(dxs[n - m], ws[m]))
            r2 = tp_add(r2, tp_mul_el(des[n - m], ws[m]))
        if not _tp_is_empty(r1):
            failures.append((n, "x"))
        if not _tp_is_empty(r2):
            failures.append((n, "y"))
    return failures


# ---------------------------------------------------------------------------
# suite plumbing

_REGISTRY = []


def _check(name, levels=LEVELS):
    def deco(fn):
        _REGISTRY.append((name, tuple(levels), fn))
        return fn
    return deco


class _Context:
    """Per-invocation cache so checks can share engine runs."""

    def __init__(self, level, golden_path=None):
        self.level = level
        self.cap = 6 if level == "quick" else 10
        self.odd_cap = 7 if level == "quick" else 45
        self.samples = 20 if level == "quick" else 100
        self.golden_path = golden_path
        self._runs = {}

    def series(self, N, alpha="symbolic", gauge=GAUGE_SIMPLIFIED_XI, **kw):
        key = (N, str(alpha), gauge, tuple(sorted(kw.items())))
        if key not in self._runs:
            self._runs[key] = run(N, alpha, gauge, **kw)
        return self._runs[key]


def check_names(level=None):
    return [name for name, levels, _ in _REGISTRY
            if level is None or level in levels]


def iter_checks(level="quick", names=None, golden_path=None):
    """Yield CheckResult records as each check finishes."""
    if level not in LEVELS:
        raise ValueError(f"unknown level {level!r}; expected one of {LEVELS}")
    if names is not None:
        bad = sorted(set(names) - set(check_names()))
        if bad:
            raise ValueError(f"unknown check names: {', '.join(bad)}")
    ctx = _Context(level, golden_path)
    for name, levels, fn in _REGISTRY:
        if level not in levels:
            continue
        if names is not None and name not in names:
            continue
        start = time.perf_counter()
        try:
            detail = fn(ctx)
            passed = True
        except Exception as exc:  # a failing check must not abort the suite
            detail = f"{type(exc).__name__}: {exc}"
            passed = False
        yield CheckResult(name, passed, detail, time.perf_counter() - start)


def run_checks(level="quick", names=None, golden_path=None):
    return list(iter_checks(level, names=names, golden_path=golden_path))


# ---------------------------------------------------------------------------
# random element generators

def _rand_q(rng, span=6):
    return QQ(rng.randint(-span, span), rng.randint(1, span))


def _rand_symbolic(rng, ring):
    el = ring.zero()
    for k in range(-2, 4):
        if rng.random() < 0.5:
            el = ring.add(el, ring.scale(ring.s(k), _rand_q(rng)))
    return el


def _rand_phase(rng, pring):
    el = pring.lift(_rand_symbolic(rng, pring.base))
    for k in (1, 2, 3):
        if rng.random() < 0.4:
            el = pring.add(el, pring.mul(
                pring.sin_phi(k), pring.lift(_rand_symbolic(rng, pring.base))))
        if rng.random() < 0.4:
            el = pring.add(el, pring.mul(
                pring.cos_phi(k), pring.lift(_rand_symbolic(rng, pring.base))))
    return el


def _rand_numeric(rng, ring):
    el = ring.from_fraction(_rand_q(rng))
    if rng.random() < 0.5:
        el = ring.add(el, ring.mul(ring.s(1), ring.from_fraction(_rand_q(rng))))
    return el


def _sample_rings(rng):
    sym = SymbolicRing()
    yield "symbolic", sym, lambda: _rand_symbolic(rng, sym)
    phase = PhaseRing(sym)
    yield "phase", phase, lambda: _rand_phase(rng, phase)
    rat = numeric_ring(QQ(9, 4))
    yield "rational-root", rat, lambda: _rand_numeric(rng, rat)
    quad = numeric_ring(QQ(2))
    yield "quadratic", quad, lambda: _rand_numeric(rng, quad)


# ---------------------------------------------------------------------------
# algebra checks

@_check("ring-axioms")
def _ring_axioms(ctx):
    rng = random.Random(0x5EED)
    triples = 0
    for label, ring, draw in _sample_rings(rng):
        for _ in range(25):
            x, y, z = draw(), draw(), draw()
            if not ring.eq(ring.mul(ring.mul(x, y), z), ring.mul(x, ring.mul(y, z))):
                raise AssertionError(f"{label}: associativity violated")
            if not ring.eq(ring.mul(x, ring.add(y, z)),
                           ring.add(ring.mul(x, y), ring.mul(x, z))):
                raise AssertionError(f"{label}: distributivity violated")
            if not ring.eq(ring.mul(x, y), ring.mul(y, x)):
                raise AssertionError(f"{label}: commutativity violated")
            if not ring.is_zero(ring.sub(x, x)):
                raise AssertionError(f"{label}: x - x != 0")
            d = y
            if label == "phase":
                # division in the phase extension only admits phase-free divisors
                d = ring.lift(_rand_symbolic(rng, ring.base))
            if not ring.is_zero(d) and not ring.eq(ring.div(ring.mul(x, d), d), x):
                raise AssertionError(f"{label}: (x*y)/y != x")
            triples += 1
    return f"{triples} random triples across 4 coefficient rings"


@_check("string-roundtrip")
def _string_roundtrip(ctx):
    rng = random.Random(0xF0F0)
    count = 0
    for label, ring, draw in _sample_rings(rng):
        if label in ("rational-root", "quadratic"):
            continue  # numeric rings carry no string serialization contract
        for amp in (0, 3):
            for _ in range(15):
                el = draw()
                text = format_element(ring, el, amp_power=amp)
                back, amp_back = parse_element(ring, text)
                if not ring.eq(back, el):
                    raise AssertionError(f"{label}: parse(format(x)) != x for {text!r}")
                if not ring.is_zero(el) and amp and amp_back != amp:
                    raise AssertionError(f"{label}: amplitude power lost in {text!r}")
                if canonical(ring, text, amp_power=amp) != text:
                    raise AssertionError(f"{label}: canonical form not idempotent for {text!r}")
                count += 1
    return f"{count} format/parse round trips, canonical form idempotent"


@_check("numeric-homomorphism")
def _numeric_homomorphism(ctx):
    rng = random.Random(0xABCD)
    alpha = QQ(7, 5)
    sym = SymbolicRing()
    phase = PhaseRing(sym)
    cases = ((sym, lambda: _rand_symbolic(rng, sym), {"alpha": alpha}),
             (phase, lambda: _rand_phase(rng, phase), {"alpha": alpha, "phi": 0.37}))
    with mpmath.workdps(50):
        worst = mpmath.mpf(0)
        for ring, draw, kw in cases:
            for _ in range(20):
                x, y = draw(), draw()
                lhs = evaluate_numeric(ring, ring.mul(x, y), **kw)
                rhs = evaluate_numeric(ring, x, **kw) * evaluate_numeric(ring, y, **kw)
                worst = max(worst, abs(lhs - rhs))
        if worst > mpmath.mpf("1e-30"):
            raise AssertionError(f"homomorphism defect {worst} exceeds 1e-30")
        return f"worst |eval(xy) - eval(x)eval(y)| = {mpmath.nstr(worst, 3)} at 50 digits"


# ---------------------------------------------------------------------------
# trig-series checks

def _rand_forcing(rng, ring, draw, harmonics=(0, 2, 3, 4)):
    f = tp_zero(ring)
    g = tp_zero(ring)
    for j in harmonics:
        for kind in ("sin", "cos"):
            if j == 0 and kind == "sin":
                continue
            if rng.random() < 0.6:
                f = tp_add(f, tp_term(ring, kind, j, draw()))
            if rng.random() < 0.6:
                g = tp_add(g, tp_term(ring, kind, j, draw()))
    return VectorTrigPoly(f, g)


@_check("solver-substitution")
def _solver_substitution(ctx):
    rng = random.Random(0xBEEF)
    sym = SymbolicRing()
    rat = numeric_ring(QQ(1))
    solved = 0
    for ring, draw in ((rat, lambda: _rand_numeric(rng, rat)),
                       (sym, lambda: _rand_symbolic(rng, sym))):
        for _ in range(15):
            forcing = _rand_forcing(rng, ring, draw)
            part = particular_solution(forcing)
            res = residual(forcing, part)
            if not (_tp_is_empty(res.xi) and _tp_is_empty(res.eta)):
                raise AssertionError("particular solution leaves a residual")
            solved += 1
    # a resonant first harmonic outside the absorbable family must be rejected
    bad = VectorTrigPoly(tp_term(rat, "cos", 1, rat.one()), tp_zero(rat))
    try:
        particular_solution(bad)
        raise AssertionError("resonant forcing was not rejected")
    except ResonantForcingError:
        pass
    # the homogeneous solution anchored at tau=0 reproduces its anchor exactly
    phase = PhaseRing(sym)
    anchors = 0
    for _ in range(10):
        v1, v2 = _rand_phase(rng, phase), _rand_phase(rng, phase)
        hom = exp_tk_vector(phase, v1, v2)
        if not phase.eq(evaluate_at_zero(hom.xi, phase), v1):
            raise AssertionError("homogeneous xi anchor mismatch at tau=0")
        if not phase.eq(evaluate_at_zero(hom.eta, phase), v2):
            raise AssertionError("homogeneous eta anchor mismatch at tau=0")
        anchors += 1
    return f"{solved} random forcings solved exactly, {anchors} anchors reproduced"


def _float_harmonics(tp):
    sin = {j: float(evaluate_numeric(tp.ring, c)) for j, c in tp.sin.items()}
    cos = {j: float(evaluate_numeric(tp.ring, c)) for j, c in tp.cos.items()}

    def fn(theta):
        total = 0.0
        for j, c in sin.items():
            total += c * math.sin(j * float(theta))
        for j, c in cos.items():
            total += c * math.cos(j * float(theta))
        return total
    return fn


@_check("fourier-orthogonality")
def _fourier_orthogonality(ctx):
    rng = random.Random(0x0FF5)
    ring = numeric_ring(QQ(1))
    draw = lambda: _rand_numeric(rng, ring)
    worst = 0.0
    with mpmath.workdps(30):
        for _ in range(2):
            p = _rand_forcing(rng, ring, draw, harmonics=(0, 1, 2, 3)).xi
            q = _rand_forcing(rng, ring, draw, harmonics=(0, 1, 2, 3)).eta
            prod = tp_mul(p, q)
            pf, qf = _float_harmonics(p), _float_harmonics(q)
            fn = lambda th: pf(th) * qf(th)
            for j in range(0, 7):
                a_j, b_j = harmonic(prod, j)
                proj_a = mpmath.quad(lambda th: fn(th) * mpmath.sin(j * th),
                                     [0, mpmath.pi, 2 * mpmath.pi]) / mpmath.pi
                proj_b = mpmath.quad(lambda th: fn(th) * mpmath.cos(j * th),
                                     [0, mpmath.pi, 2 * mpmath.pi]) / mpmath.pi
                if j == 0:
                    proj_b /= 2
                worst = max(worst,
                            abs(float(evaluate_numeric(ring, a_j)) - float(proj_a)),
                            abs(float(evaluate_numeric(ring, b_j)) - float(proj_b)))
    if worst > 1e-12:
        raise AssertionError(f"Fourier projection disagrees by {worst:.2e}")
    return f"products match integrated projections to {worst:.1e}"


# ---------------------------------------------------------------------------
# engine checks

@_check("equation-residual")
def _equation_residual(ctx):
    cap = ctx.cap
    for gauge, kw in ((GAUGE_SIMPLIFIED_XI, {}),
                      (GAUGE_ZERO_INITIAL, {"zero_initial_order_cap": cap})):
        series = ctx.series(cap, gauge=gauge, **kw)
        bad = equation_residuals(series)
        if bad:
            raise AssertionError(f"{gauge}: nonzero residuals at {bad}")
    return f"both gauges satisfy the scaled equations exactly through order {cap}"


@_check("secular-consistency")
def _secular_consistency(ctx):
    cap = ctx.cap
    checked = 0
    for gauge, kw in ((GAUGE_SIMPLIFIED_XI, {}),
                      (GAUGE_ZERO_INITIAL, {"zero_initial_order_cap": cap})):
        series = ctx.series(cap, gauge=gauge, **kw)
        ring = series.coeff_ring
        for n in range(1, series.order + 1):
            omega_n, resolved = remove_secular(n, build_forcing(n, series))
            if not ring.eq(omega_n, series.orders[n].omega):
                raise AssertionError(f"{gauge}: order {n} frequency replay differs")
            sol = VectorTrigPoly(series.orders[n].xi, series.orders[n].eta)
            res = residual(resolved, sol)
            if not (_tp_is_empty(res.xi) and _tp_is_empty(res.eta)):
                raise AssertionError(f"{gauge}: order {n} stored solution fails its ODE")
            checked += 1
    return f"{checked} orders replayed: a single frequency fits both projections"


@_check("odd-vanishing")
def _odd_vanishing(ctx):
    cap = ctx.odd_cap
    series = ctx.series(cap)
    ring = series.coeff_ring
    for n in range(1, cap + 1, 2):
        if not ring.is_zero(series.orders[n].omega):
            raise AssertionError(f"omega_{n} is nonzero")
    return f"odd frequency corrections vanish through order {cap}"


@_check("gauge-conditions")
def _gauge_conditions(ctx):
    cap = ctx.cap
    zi = ctx.series(cap, gauge=GAUGE_ZERO_INITIAL, zero_initial_order_cap=cap)
    pring = zi.coeff_ring
    for n in range(1, zi.order + 1):
        if not pring.is_zero(evaluate_at_zero(zi.orders[n].xi, pring)):
            raise AssertionError(f"zero-initial: xi_{n}(0) != 0")
        if not pring.is_zero(evaluate_at_zero(zi.orders[n].eta, pring)):
            raise AssertionError(f"zero-initial: eta_{n}(0) != 0")
    sx = ctx.series(cap)
    if sx.coeff_ring is not sx.base_ring:
        raise AssertionError("simplified-xi gauge is not using the phase-free ring")
    for n in range(1, sx.order + 1):
        a, b = harmonic(sx.orders[n].xi, 1)
        if not (sx.coeff_ring.is_zero(a) and sx.coeff_ring.is_zero(b)):
            raise AssertionError(f"simplified-xi: first harmonic of xi_{n} survives")
    se = ctx.series(min(cap, 6), gauge=GAUGE_SIMPLIFIED_ETA)
    for n in range(1, se.order + 1):
        a, b = harmonic(se.orders[n].eta, 1)
        if not (se.coeff_ring.is_zero(a) and se.coeff_ring.is_zero(b)):
            raise AssertionError(f"simplified-eta: first harmonic of eta_{n} survives")
    return f"all three gauge conditions hold exactly through order {cap}"


@_check("harmonic-growth")
def _harmonic_growth(ctx):
    cap = ctx.cap
    for gauge, kw in ((GAUGE_SIMPLIFIED_XI, {}),
                      (GAUGE_ZERO_INITIAL, {"zero_initial_order_cap": cap})):
        series = ctx.series(cap, gauge=gauge, **kw)
        for n in range(series.order + 1):
            sol = series.orders[n]
            if max(max_harmonic(sol.xi), max_harmonic(sol.eta)) > n + 1:
                raise AssertionError(f"{gauge}: order {n} contains a harmonic above {n + 1}")
            if gauge == GAUGE_SIMPLIFIED_XI:
                want = (n + 1) % 2
                for tp in (sol.xi, sol.eta):
                    for j in list(tp.sin) + list(tp.cos):
                        if j % 2 != want:
                            raise AssertionError(
                                f"order {n}: harmonic {j} breaks the parity pattern")
    return f"harmonics bounded by n+1 with alternating parity through order {cap}"


@_check("golden-strings")
def _golden_strings(ctx):
    golden = load_golden(ctx.golden_path)
    series = ctx.series(8)
    ring = series.coeff_ring
    pring = series.phase_ring
    compared = 0
    for n_text, want in golden["omega"].items():
        n = int(n_text)
        got = format_element(ring, series.orders[n].omega, n)
        if got != want:
            raise AssertionError(f"omega_{n}: got {got!r}, reference {want!r}")
        compared += 1
    for key, want in golden["solutions"].items():
        n = int(key[-1])
        tp = series.orders[n].xi if key.startswith("xi") else series.orders[n].eta
        got = to_triples(tp, n + 1)
        if [list(t) for t in got] != [list(t) for t in want]:
            raise AssertionError(f"{key}: got {got!r}, reference {want!r}")
        compared += 1
    for n_text, want in golden["gauge_constants"].items():
        n = int(n_text)
        got = [format_element(pring, c, n + 1)
               for c in series.orders[n].gauge_constants]
        if got != list(want):
            raise AssertionError(f"gauge constants at order {n}: got {got!r}")
        compared += 1
    ps = series_from_engine(series, alpha=1)
    for j_text, want in golden["frequency_ratios"].items():
        j = int(j_text)
        if ps.coeffs[j] != QQ(Fraction(want)):
            raise AssertionError(f"frequency ratio d_{j}: got {ps.coeffs[j]}")
        compared += 1
    return f"{compared} frozen reference values reproduced exactly"


# ---------------------------------------------------------------------------
# approximant checks

def _rand_poly(rng, max_deg, lead_one=False):
    p = [_rand_q(rng, 5) for _ in range(rng.randint(0, max_deg) + 1)]
    if lead_one:
        p[0] = QQ(1)
    return p


@_check("pade-reproduction")
def _pade_reproduction(ctx):
    rng = random.Random(0x9ADE)
    fitted = 0
    for _ in range(ctx.samples):
        K = rng.randint(1, 3)
        L = rng.randint(1, 3)
        p_true = _rand_poly(rng, K)
        q_true = _rand_poly(rng, L, lead_one=True)
        coeffs = rational_function_series(p_true, q_true, K + L + 1)
        fit = pade_fit(PowerSeries(tuple(coeffs)), K, L)
        back = rational_function_series(list(fit.P) or [QQ(0)], list(fit.Q), K + L + 1)
        if back != coeffs:
            raise AssertionError(f"[{K}/{L}] does not reproduce its input series")
        cross = poly_sub(poly_mul(list(fit.P), q_true),
                         poly_mul(p_true, list(fit.Q)))
        if poly_trim(cross):
            raise AssertionError(f"[{K}/{L}] disagrees with the generating function")
        fitted += 1
    return f"{fitted} random rational functions recovered exactly"


@_check("hermite-pade-residual")
def _hermite_pade_residual(ctx):
    rng = random.Random(0x4EAD)
    fitted = 0
    attempts = 0
    while fitted < ctx.samples:
        attempts += 1
        if attempts > 3 * ctx.samples:
            raise AssertionError("too many degenerate random fits")
        K, L, M = (rng.randint(0, 2) for _ in range(3))
        n = K + L + M + 2
        f = [QQ(1)] + [_rand_q(rng, 5) for _ in range(n - 1)]
        try:
            fit = hermite_pade_fit(PowerSeries(tuple(f)), K, L, M)
        except Exception:
            continue  # degenerate draw; take another
        f2 = poly_mul(f, f)
        res = [QQ(0)] * n
        for poly, factor in ((fit.P, f2), (fit.Q, f), (fit.R, [QQ(1)])):
            term = poly_mul(list(poly) or [QQ(0)], factor)
            for j in range(min(n, len(term))):
                res[j] += term[j]
        if any(res):
            raise AssertionError(
                f"f[{K},{L},{M}] residual is nonzero through order {n - 1}")
        fitted += 1
    return f"{fitted} quadratic fits with exactly zero residual"


@_check("branch-point-recovery")
def _branch_point(ctx):
    coeffs = [QQ(1)]
    for j in range(1, 7):
        coeffs.append(coeffs[-1] * QQ(-4) * (QQ(1, 2) - (j - 1)) / j)
    fit = hermite_pade_fit(PowerSeries(tuple(coeffs)), 0, 0, 1)
    roots = discriminant_roots(fit, dps=60)
    best = min(roots, key=lambda r: abs(complex(r) - 0.25))
    err = abs(complex(best) - 0.25)
    if err > 1e-8:
        raise AssertionError(f"branch point found at {best}, off by {err:.2e}")
    return f"square-root branch point located within {err:.1e} of 1/4"


@_check("root-residuals")
def _root_residuals(ctx):
    rng = random.Random(0x0075)
    ps = series_from_engine(ctx.series(8, alpha=QQ(1)))
    polys = [list(pade_fit(ps, 2, 2).Q)]
    for _ in range(5):
        polys.append(_rand_poly(rng, 6, lead_one=True))
    certified = 0
    with mpmath.workdps(60):
        for poly in polys:
            poly = poly_trim(poly)
            if len(poly) <= 1:
                continue
            norm = max(abs(to_mpf(c)) for c in poly)
            deg = len(poly) - 1
            roots = mpmath.polyroots([to_mpf(c) for c in reversed(poly)],
                                     maxsteps=200, extraprec=240)
            for r in roots:
                bound = mpmath.mpf("1e-25") * norm * max(1, abs(r)) ** deg
                if abs(poly_eval_mp(poly, r)) > bound:
                    raise AssertionError("root residual exceeds the certification bound")
                if abs(mpmath.im(r)) > norm * mpmath.mpf("1e-40"):
                    gap = min(abs(mpmath.conj(r) - other) for other in roots)
                    if gap > abs(r) * mpmath.mpf("1e-20"):
                        raise AssertionError("complex root without its conjugate partner")
                certified += 1
    return f"{certified} roots certified, conjugate pairs intact"


@_check("family-agreement", levels=("full",))
def _family_agreement(ctx):
    series = ctx.series(62, alpha=QQ(1))
    ps = series_from_engine(series)
    est_p = stable_singularity(ps, FAMILY_PADE, (13, 14, 15), threshold=1e-2)
    est_h = stable_singularity(ps, FAMILY_HERMITE_PADE, (9, 10), threshold=1e-2)
    gap = abs(est_p.radius - est_h.radius) / min(est_p.radius, est_h.radius)
    if gap > 0.02:
        raise AssertionError(
            f"families disagree by {gap:.2%}: {est_p.radius:.6f} vs {est_h.radius:.6f}")
    return (f"order-62 estimates {est_p.radius:.6f} (pole chain) and "
            f"{est_h.radius:.6f} (branch chain) agree within {gap:.2%}")


# ---------------------------------------------------------------------------
# integrator checks

@_check("first-integral-drift")
def _first_integral_drift(ctx):
    orbit = integrate(FIG1_ALPHA, FIG1_X0, FIG1_Y0,
                      IntegratorConfig(max_time=20 * math.pi))
    if orbit.conserved_drift > 1e-9:
        raise AssertionError(f"conserved quantity drifts by {orbit.conserved_drift:.2e}")
    return f"relative drift {orbit.conserved_drift:.1e} over ten periods"


@_check("convergence-order")
def _convergence_order(ctx):
    drifts = []
    for step in (0.04, 0.02):
        config = IntegratorConfig(step=step, tolerance=math.inf, max_time=4 * math.pi)
        drifts.append(integrate(FIG1_ALPHA, FIG1_X0, FIG1_Y0, config).conserved_drift)
    ratio = drifts[0] / drifts[1]
    if not 8 < ratio < 32:
        raise AssertionError(f"halving the step scaled the error by {ratio:.1f}, not ~16")
    return f"fixed-step error ratio {ratio:.1f} (fourth-order behaviour)"


@_check("time-reversal")
def _time_reversal(ctx):
    tol = 1e-12
    fwd = integrate(FIG1_ALPHA, FIG1_X0, FIG1_Y0,
                    IntegratorConfig(tolerance=tol, max_time=5.0))
    back = integrate(FIG1_ALPHA, float(fwd.x_values[-1]), float(fwd.y_values[-1]),
                     IntegratorConfig(tolerance=tol, max_time=-5.0))
    err = max(abs(float(back.x_values[-1]) - FIG1_X0),
              abs(float(back.y_values[-1]) - FIG1_Y0))
    if err > 10 * tol:
        raise AssertionError(f"round trip misses the start by {err:.2e}")
    return f"forward-backward round trip returns within {err:.1e}"


@_check("frequency-consistency", levels=("full",))
def _frequency_consistency(ctx):
    a = 0.05
    series = ctx.series(44, alpha=QQ(1))
    xi0, eta0, omega = evaluate_solution(series, a, tau_grid=[0.0])
    x0 = 1 + a * float(xi0[0])
    y0 = 1 + a * float(eta0[0])
    period = 2 * math.pi / omega
    orbit = integrate(1.0, x0, y0, IntegratorConfig(max_time=8 * period))
    measured = measure_frequency(orbit)
    rel = abs(measured - omega) / omega
    if rel > 1e-6:
        raise AssertionError(f"measured frequency differs by {rel:.2e} relative")
    return f"series and measured frequency agree to {rel:.1e} at a = {a}"

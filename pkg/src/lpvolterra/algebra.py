"""Exact coefficient arithmetic for perturbation expansions of the
Lotka-Volterra cycle.

Every operation in this module is exact.  Three coefficient domains appear:

* the symbolic domain: Laurent polynomials in ``s = sqrt(alpha)`` with
  rational coefficients (:class:`SymbolicRing`);
* numeric domains for a fixed rational ``alpha``: plain rationals when
  ``sqrt(alpha)`` is rational, pairs ``u + v*sqrt(alpha)`` otherwise
  (:class:`RationalRing`, :class:`QuadraticRing`);
* any of the above extended by a trigonometric polynomial in the phase
  angle ``phi`` (:class:`PhaseRing`), needed for solutions pinned to
  explicit initial conditions.

Rings share a uniform method protocol (``add``, ``mul``, ``scale``,
``div``, ``is_zero``, ...) over plain data elements (dicts, tuples,
scalars), so the trig-series layer stays generic over the coefficient
domain.  :func:`format_element` / :func:`parse_element` provide a
canonical, round-trippable string form and :func:`evaluate_numeric`
evaluates any element with mpmath at configurable precision (default 50
significant digits).
"""

from __future__ import annotations

import math
from fractions import Fraction

import mpmath

try:  # gmpy2 rationals are several times faster on large operands
    from gmpy2 import mpq as _mpq
except ImportError:  # pragma: no cover - exercised only without gmpy2
    _mpq = None


class ExactDivisionError(ArithmeticError):
    """Raised when an exact ring division leaves a remainder."""


# ---------------------------------------------------------------------------
# rational scalars

if _mpq is not None:
    _QTYPE = type(_mpq())

    def QQ(num=0, den=None):
        """Coerce to an exact rational (gmpy2.mpq backend)."""
        if den is not None:
            return _mpq(num, den)
        if isinstance(num, _QTYPE):
            return num
        if isinstance(num, (int, str)):
            return _mpq(num)
        return _mpq(num.numerator, num.denominator)

else:  # pragma: no cover - exercised only without gmpy2
    _QTYPE = Fraction

    def QQ(num=0, den=None):
        """Coerce to an exact rational (fractions.Fraction backend)."""
        if den is not None:
            return Fraction(num, den)
        if isinstance(num, Fraction):
            return num
        return Fraction(num)


_Q0 = QQ(0)
_Q1 = QQ(1)
_QHALF = QQ(1, 2)


def to_fraction(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


def to_mpf(q):
    """Exact rational -> mpf at the current mpmath precision."""
    return mpmath.mpf(int(q.numerator)) / mpmath.mpf(int(q.denominator))


def rational_sqrt(q):
    """Square root of a nonnegative rational, or None if irrational."""
    q = QQ(q)
    n, d = int(q.numerator), int(q.denominator)
    if n < 0:
        raise ValueError("negative radicand")
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return QQ(rn, rd)
    return None


# ---------------------------------------------------------------------------
# symbolic ring: Laurent polynomials in s = sqrt(alpha)

class SymbolicRing:
    """Laurent polynomials in s = sqrt(alpha), held as {exponent: rational}.

    Exponent k stands for s**k = alpha**(k/2); negative exponents carry the
    1/sqrt(alpha) factors that the dynamical matrix introduces.  Elements
    are plain dicts with no zero values (canonical form) and are treated as
    immutable.
    """

    has_phase = False
    is_symbolic = True

    def zero(self):
        return {}

    def one(self):
        return {0: _Q1}

    def s(self, k: int = 1):
        return {k: _Q1}

    def from_fraction(self, q):
        q = QQ(q)
        return {0: q} if q else {}

    def is_zero(self, x) -> bool:
        return not x

    def eq(self, x, y) -> bool:
        return x == y

    def add(self, x, y):
        out = dict(x)
        for k, v in y.items():
            w = out.get(k, _Q0) + v
            if w:
                out[k] = w
            else:
                out.pop(k, None)
        return out

    def neg(self, x):
        return {k: -v for k, v in x.items()}

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def mul(self, x, y):
        if not x or not y:
            return {}
        out = {}
        for kx, vx in x.items():
            for ky, vy in y.items():
                k = kx + ky
                w = out.get(k, _Q0) + vx * vy
                if w:
                    out[k] = w
                else:
                    out.pop(k, None)
        return out

    def scale(self, x, q):
        q = QQ(q)
        if not q:
            return {}
        return {k: v * q for k, v in x.items()}

    def div(self, x, y):
        """Exact division; raises ExactDivisionError on a remainder."""
        if not y:
            raise ZeroDivisionError("division by zero element")
        if not x:
            return {}
        if len(y) == 1:
            (e, q), = y.items()
            return {k - e: v / q for k, v in x.items()}
        # Laurent long division, must terminate exactly.
        lead = max(y)
        lead_c = y[lead]
        floor = min(x) - min(y)
        rem = dict(x)
        quot = {}
        while rem:
            e = max(rem) - lead
            if e < floor:
                raise ExactDivisionError("inexact Laurent division")
            c = rem[max(rem)] / lead_c
            quot[e] = c
            for k, v in y.items():
                kk = k + e
                w = rem.get(kk, _Q0) - c * v
                if w:
                    rem[kk] = w
                else:
                    rem.pop(kk, None)
        return quot


SYMBOLIC = SymbolicRing()


def alpha_polynomial(x):
    """View a symbolic element as a polynomial in alpha.

    Returns ``{m: q}`` with x = sum q * alpha**m, or None if any exponent
    of sqrt(alpha) is odd or negative.
    """
    if any(k < 0 or k % 2 for k in x):
        return None
    return {k // 2: v for k, v in x.items()}


# ---------------------------------------------------------------------------
# numeric rings for fixed rational alpha

class RationalRing:
    """Coefficients for fixed alpha whose square root is rational.

    Elements are bare rationals; s evaluates to the known root.
    """

    has_phase = False
    is_symbolic = False

    def __init__(self, alpha, root):
        self.alpha = QQ(alpha)
        self.root = QQ(root)

    def zero(self):
        return _Q0

    def one(self):
        return _Q1

    def s(self, k: int = 1):
        return self.root ** k

    def from_fraction(self, q):
        return QQ(q)

    def is_zero(self, x) -> bool:
        return not x

    def eq(self, x, y) -> bool:
        return x == y

    def add(self, x, y):
        return x + y

    def neg(self, x):
        return -x

    def sub(self, x, y):
        return x - y

    def mul(self, x, y):
        return x * y

    def scale(self, x, q):
        return x * QQ(q)

    def div(self, x, y):
        if not y:
            raise ZeroDivisionError("division by zero element")
        return x / y


class QuadraticRing:
    """The field Q(sqrt(alpha)) for fixed rational alpha, irrational root.

    Elements are pairs (u, v) meaning u + v*sqrt(alpha); zero testing is
    exact because 1 and sqrt(alpha) are linearly independent over Q.
    """

    has_phase = False
    is_symbolic = False

    def __init__(self, alpha):
        self.alpha = QQ(alpha)

    def zero(self):
        return (_Q0, _Q0)

    def one(self):
        return (_Q1, _Q0)

    def s(self, k: int = 1):
        if k < 0:
            return self.inv(self.s(-k))
        half, odd = divmod(k, 2)
        a = self.alpha ** half
        return (_Q0, a) if odd else (a, _Q0)

    def from_fraction(self, q):
        return (QQ(q), _Q0)

    def is_zero(self, x) -> bool:
        return not x[0] and not x[1]

    def eq(self, x, y) -> bool:
        return x == y

    def add(self, x, y):
        return (x[0] + y[0], x[1] + y[1])

    def neg(self, x):
        return (-x[0], -x[1])

    def sub(self, x, y):
        return (x[0] - y[0], x[1] - y[1])

    def mul(self, x, y):
        u1, v1 = x
        u2, v2 = y
        return (u1 * u2 + v1 * v2 * self.alpha, u1 * v2 + v1 * u2)

    def scale(self, x, q):
        q = QQ(q)
        return (x[0] * q, x[1] * q)

    def inv(self, x):
        u, v = x
        n = u * u - v * v * self.alpha
        if not n:
            raise ZeroDivisionError("division by zero element")
        return (u / n, -v / n)

    def div(self, x, y):
        return self.mul(x, self.inv(y))


def numeric_ring(alpha):
    """Exact coefficient ring for a fixed positive rational alpha."""
    q = QQ(alpha)
    if q <= 0:
        raise ValueError("alpha must be positive")
    root = rational_sqrt(q)
    if root is not None:
        return RationalRing(q, root)
    return QuadraticRing(q)


# ---------------------------------------------------------------------------
# phase extension: trig polynomials in phi over a base ring

class PhasePoly:
    """const + sum_k [ sin_k*sin(k*phi) + cos_k*cos(k*phi) ].

    Coefficients live in the base ring of the owning :class:`PhaseRing`.
    Treated as immutable after construction; dicts hold no zero entries.
    """

    __slots__ = ("const", "sin", "cos")

    def __init__(self, const, sin=None, cos=None):
        self.const = const
        self.sin = sin or {}
        self.cos = cos or {}

    def __eq__(self, other):
        if not isinstance(other, PhasePoly):
            return NotImplemented
        return (self.const == other.const and self.sin == other.sin
                and self.cos == other.cos)

    __hash__ = None

    def __repr__(self):
        return f"PhasePoly({self.const!r}, sin={self.sin!r}, cos={self.cos!r})"


class PhaseRing:
    """Base ring extended by trigonometric polynomials in the phase phi."""

    has_phase = True

    def __init__(self, base):
        self.base = base
        self.is_symbolic = base.is_symbolic

    def zero(self):
        return PhasePoly(self.base.zero())

    def one(self):
        return PhasePoly(self.base.one())

    def s(self, k: int = 1):
        return PhasePoly(self.base.s(k))

    def from_fraction(self, q):
        return PhasePoly(self.base.from_fraction(q))

    def lift(self, x):
        """Embed a base-ring element."""
        return PhasePoly(x)

    def sin_phi(self, k: int = 1):
        if k == 0:
            return self.zero()
        if k < 0:
            return self.neg(self.sin_phi(-k))
        return PhasePoly(self.base.zero(), sin={k: self.base.one()})

    def cos_phi(self, k: int = 1):
        if k == 0:
            return self.one()
        return PhasePoly(self.base.zero(), cos={abs(k): self.base.one()})

    def is_zero(self, x) -> bool:
        return self.base.is_zero(x.const) and not x.sin and not x.cos

    def eq(self, x, y) -> bool:
        return (self.base.eq(x.const, y.const) and x.sin == y.sin
                and x.cos == y.cos)

    def _merged(self, xd, yd, op):
        out = dict(xd)
        for k, v in yd.items():
            if k in out:
                w = op(out[k], v)
                if self.base.is_zero(w):
                    del out[k]
                else:
                    out[k] = w
            else:
                out[k] = op(self.base.zero(), v)
        return out

    def add(self, x, y):
        b = self.base
        return PhasePoly(b.add(x.const, y.const),
                         self._merged(x.sin, y.sin, b.add),
                         self._merged(x.cos, y.cos, b.add))

    def neg(self, x):
        b = self.base
        return PhasePoly(b.neg(x.const),
                         {k: b.neg(v) for k, v in x.sin.items()},
                         {k: b.neg(v) for k, v in x.cos.items()})

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def _acc(self, store, k, v):
        if k in store:
            w = self.base.add(store[k], v)
            if self.base.is_zero(w):
                del store[k]
            else:
                store[k] = w
        elif not self.base.is_zero(v):
            store[k] = v

    def mul(self, x, y):
        b = self.base
        const = b.mul(x.const, y.const)
        sin_out: dict = {}
        cos_out: dict = {}

        def acc_sin(k, v):
            if k == 0 or b.is_zero(v):
                return
            if k < 0:
                k, v = -k, b.neg(v)
            self._acc(sin_out, k, v)

        def acc_cos(k, v):
            nonlocal const
            if b.is_zero(v):
                return
            if k == 0:
                const = b.add(const, v)
            else:
                self._acc(cos_out, abs(k), v)

        if not b.is_zero(x.const):
            for k, v in y.sin.items():
                acc_sin(k, b.mul(x.const, v))
            for k, v in y.cos.items():
                acc_cos(k, b.mul(x.const, v))
        if not b.is_zero(y.const):
            for k, v in x.sin.items():
                acc_sin(k, b.mul(y.const, v))
            for k, v in x.cos.items():
                acc_cos(k, b.mul(y.const, v))

        for j, u in x.sin.items():
            for k, v in y.sin.items():
                w = b.scale(b.mul(u, v), _QHALF)
                acc_cos(j - k, w)          # sin j sin k = [cos(j-k) - cos(j+k)]/2
                acc_cos(j + k, b.neg(w))
            for k, v in y.cos.items():
                w = b.scale(b.mul(u, v), _QHALF)
                acc_sin(j + k, w)          # sin j cos k = [sin(j+k) + sin(j-k)]/2
                acc_sin(j - k, w)
        for j, u in x.cos.items():
            for k, v in y.sin.items():
                w = b.scale(b.mul(u, v), _QHALF)
                acc_sin(j + k, w)          # cos j sin k = [sin(j+k) - sin(j-k)]/2
                acc_sin(j - k, b.neg(w))
            for k, v in y.cos.items():
                w = b.scale(b.mul(u, v), _QHALF)
                acc_cos(j - k, w)          # cos j cos k = [cos(j-k) + cos(j+k)]/2
                acc_cos(j + k, w)
        return PhasePoly(const, sin_out, cos_out)

    def scale(self, x, q):
        b = self.base
        q = QQ(q)
        if not q:
            return self.zero()
        return PhasePoly(b.scale(x.const, q),
                         {k: b.scale(v, q) for k, v in x.sin.items()},
                         {k: b.scale(v, q) for k, v in x.cos.items()})

    def div(self, x, y):
        """Division by a phase-free element (each component divides)."""
        if y.sin or y.cos:
            raise ExactDivisionError("divisor must be phase-free")
        b = self.base
        return PhasePoly(b.div(x.const, y.const),
                         {k: b.div(v, y.const) for k, v in x.sin.items()},
                         {k: b.div(v, y.const) for k, v in x.cos.items()})


# ---------------------------------------------------------------------------
# canonical string form

def _sdict_of(ring, x):
    """View any phase-free element as an s-exponent dict."""
    if isinstance(ring, SymbolicRing):
        return x
    if isinstance(ring, QuadraticRing):
        out = {}
        if x[0]:
            out[0] = x[0]
        if x[1]:
            out[1] = x[1]
        return out
    return {0: x} if x else {}


def _spow_factors(k: int) -> list[str]:
    """Factor strings for s**k, k >= 0 (s**2 = alpha)."""
    half, odd = divmod(k, 2)
    out = []
    if half == 1:
        out.append("alpha")
    elif half > 1:
        out.append(f"alpha^{half}")
    if odd:
        out.append("sqrt(alpha)")
    return out


def _poly_string(p: dict) -> str:
    """Integer-coefficient s-polynomial, descending exponents."""
    parts = []
    for e in sorted(p, reverse=True):
        c = p[e]
        mag = abs(c)
        factors = _spow_factors(e)
        if mag != 1 or not factors:
            factors.insert(0, str(mag))
        text = "*".join(factors)
        if not parts:
            parts.append(("-" if c < 0 else "") + text)
        else:
            parts.append(("-" if c < 0 else "+") + text)
    return "".join(parts)


def _fmt_sdict(d: dict, amp_power: int = 0, trig: str | None = None) -> str:
    if not d:
        return "0"
    lead = max(d)
    sign = -1 if d[lead] < 0 else 1
    num_gcd = 0
    den_lcm = 1
    for v in d.values():
        num_gcd = math.gcd(num_gcd, abs(int(v.numerator)))
        den_lcm = den_lcm * int(v.denominator) // math.gcd(den_lcm, int(v.denominator))
    content = QQ(sign * num_gcd, den_lcm)
    shift = min(d)
    prim = {}
    for k, v in d.items():
        c = v / content
        prim[k - shift] = int(c.numerator)  # exact integer by construction

    num_factors = []
    if amp_power == 1:
        num_factors.append("A")
    elif amp_power > 1:
        num_factors.append(f"A^{amp_power}")
    if num_gcd != 1:
        num_factors.append(str(num_gcd))
    if shift > 0:
        num_factors.extend(_spow_factors(shift))
    if prim != {0: 1}:
        num_factors.append(f"({_poly_string(prim)})")
    if trig is not None:
        num_factors.append(trig)

    den_factors = []
    if den_lcm != 1:
        den_factors.append(str(den_lcm))
    if shift < 0:
        den_factors.extend(_spow_factors(-shift))

    num = "*".join(num_factors) if num_factors else "1"
    if den_factors and len(num_factors) > 1:
        num = f"({num})"
    out = num
    if den_factors:
        den = den_factors[0] if len(den_factors) == 1 else "(" + "*".join(den_factors) + ")"
        out += "/" + den
    return ("-" if sign < 0 else "") + out


def _trig_name(kind: str, k: int) -> str:
    arg = "phi" if k == 1 else f"{k}*phi"
    return f"{kind}({arg})"


def format_element(ring, x, amp_power: int = 0) -> str:
    """Canonical string for a ring element.

    ``amp_power`` prefixes the known amplitude factor A**p; it is metadata
    (the engine normalizes the amplitude to 1) and is accepted back by
    :func:`parse_element`.
    """
    if isinstance(ring, PhaseRing):
        base = ring.base
        pieces = []  # (sdict, trig-name or None)
        if not base.is_zero(x.const):
            pieces.append((_sdict_of(base, x.const), None))
        for k in sorted(set(x.sin) | set(x.cos)):
            if k in x.sin:
                pieces.append((_sdict_of(base, x.sin[k]), _trig_name("sin", k)))
            if k in x.cos:
                pieces.append((_sdict_of(base, x.cos[k]), _trig_name("cos", k)))
        if not pieces:
            return "0"
        if len(pieces) == 1:
            d, trig = pieces[0]
            return _fmt_sdict(d, amp_power=amp_power, trig=trig)
        parts = [_fmt_sdict(d, trig=trig) for d, trig in pieces]
        body = parts[0]
        for p in parts[1:]:
            body += p if p.startswith("-") else "+" + p
        if amp_power == 0:
            return body
        if len(parts) > 1:
            body = f"({body})"
        amp = "A" if amp_power == 1 else f"A^{amp_power}"
        return f"{amp}*{body}"
    return _fmt_sdict(_sdict_of(ring, x), amp_power=amp_power)


class _ParseError(ValueError):
    pass


def _tokenize(text: str):
    tokens = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
        elif c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(("num", int(text[i:j])))
            i = j
        elif c.isalpha():
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("name", text[i:j]))
            i = j
        elif c in "+-*/^()":
            tokens.append((c, c))
            i += 1
        else:
            raise _ParseError(f"unexpected character {c!r}")
    tokens.append(("end", None))
    return tokens


class _Parser:
    """Recursive-descent parser for the canonical element strings."""

    def __init__(self, ring, tokens):
        self.ring = ring
        self.toks = tokens
        self.pos = 0

    def peek(self):
        return self.toks[self.pos]

    def next(self, expect=None):
        tok = self.toks[self.pos]
        if expect is not None and tok[0] != expect:
            raise _ParseError(f"expected {expect!r}, got {tok[0]!r}")
        self.pos += 1
        return tok

    # values carry the element together with the formal amplitude power
    def expr(self):
        neg = False
        if self.peek()[0] in "+-":
            neg = self.next()[0] == "-"
        el, amp = self.term()
        if neg:
            el = self.ring.neg(el)
        total, total_amp = el, amp
        while self.peek()[0] in "+-":
            op = self.next()[0]
            el, amp = self.term()
            if op == "-":
                el = self.ring.neg(el)
            if self.ring.is_zero(total):
                total_amp = amp
            elif not self.ring.is_zero(el) and amp != total_amp:
                raise _ParseError("mixed amplitude powers in a sum")
            total = self.ring.add(total, el)
        return total, total_amp

    def term(self):
        el, amp = self.power()
        while self.peek()[0] in "*/":
            op = self.next()[0]
            rhs, ramp = self.power()
            if op == "*":
                el = self.ring.mul(el, rhs)
                amp += ramp
            else:
                if ramp:
                    raise _ParseError("cannot divide by an amplitude factor")
                el = self.ring.div(el, rhs)
        return el, amp

    def power(self):
        el, amp = self.atom()
        if self.peek()[0] == "^":
            self.next()
            neg = False
            if self.peek()[0] == "-":
                self.next()
                neg = True
            k = self.next("num")[1]
            if neg:
                base = el
                el = self.ring.one()
                for _ in range(k):
                    el = self.ring.div(el, base)
                amp = -amp * k
            else:
                base = el
                el = self.ring.one()
                for _ in range(k):
                    el = self.ring.mul(el, base)
                amp *= k
        return el, amp

    def atom(self):
        kind, val = self.next()
        ring = self.ring
        if kind == "num":
            return ring.from_fraction(QQ(val)), 0
        if kind == "(":
            el, amp = self.expr()
            self.next(")")
            return el, amp
        if kind == "-":
            el, amp = self.atom()
            return ring.neg(el), amp
        if kind != "name":
            raise _ParseError(f"unexpected token {val!r}")
        if val == "alpha":
            return ring.s(2), 0
        if val == "A":
            return ring.one(), 1
        if val == "sqrt":
            self.next("(")
            name = self.next("name")[1]
            if name != "alpha":
                raise _ParseError("only sqrt(alpha) is supported")
            self.next(")")
            return ring.s(1), 0
        if val in ("sin", "cos"):
            if not getattr(ring, "has_phase", False):
                raise _ParseError(f"{val}(phi) needs a phase-extended ring")
            self.next("(")
            k = 1
            if self.peek()[0] == "num":
                k = self.next()[1]
                self.next("*")
            name = self.next("name")[1]
            if name != "phi":
                raise _ParseError("trig arguments must be multiples of phi")
            self.next(")")
            return (ring.sin_phi(k) if val == "sin" else ring.cos_phi(k)), 0
        raise _ParseError(f"unknown symbol {val!r}")


def parse_element(ring, text: str):
    """Parse a canonical element string.

    Returns ``(element, amp_power)``; plain elements come back with
    ``amp_power == 0``.  Inverse of :func:`format_element` and tolerant of
    whitespace and non-canonical but well-formed layouts.
    """
    parser = _Parser(ring, _tokenize(text))
    el, amp = parser.expr()
    parser.next("end")
    if amp < 0:
        raise _ParseError("negative amplitude power")
    return el, amp


def canonical(ring, text_or_element, amp_power: int = 0) -> str:
    """Canonical string of an element or of a parseable string."""
    if isinstance(text_or_element, str):
        el, amp = parse_element(ring, text_or_element)
        return format_element(ring, el, amp_power=amp or amp_power)
    return format_element(ring, text_or_element, amp_power=amp_power)


# ---------------------------------------------------------------------------
# numeric evaluation

def evaluate_numeric(ring, x, alpha=None, phi=0, dps: int = 50):
    """Evaluate an element at numeric alpha (and phi) with mpmath.

    Parameters
    ----------
    ring : ring owning ``x``
    alpha : positive value; defaults to the ring's own alpha when fixed.
    phi : phase angle in radians (used by phase-extended elements).
    dps : decimal digits of working precision.

    Returns an ``mpmath.mpf`` computed at ``dps`` digits.
    """
    ring_alpha = getattr(ring, "alpha", None) or getattr(
        getattr(ring, "base", None), "alpha", None)
    if alpha is None:
        alpha = ring_alpha
    if alpha is None:
        raise ValueError("alpha is required for symbolic elements")
    if ring_alpha is not None and QQ(alpha) != QQ(ring_alpha):
        raise ValueError("alpha disagrees with the ring's fixed alpha")
    with mpmath.workdps(dps):
        if isinstance(alpha, (int, Fraction, _QTYPE)):
            a = to_mpf(QQ(alpha))
        else:
            a = mpmath.mpf(alpha)
        if a <= 0:
            raise ValueError("alpha must be positive")
        s = mpmath.sqrt(a)

        def ev(base, el):
            if isinstance(base, SymbolicRing):
                return mpmath.fsum(to_mpf(v) * s ** k for k, v in el.items())
            if isinstance(base, QuadraticRing):
                return to_mpf(el[0]) + to_mpf(el[1]) * s
            return to_mpf(el)

        if isinstance(ring, PhaseRing):
            p = mpmath.mpf(phi)
            total = ev(ring.base, x.const)
            total += mpmath.fsum(ev(ring.base, v) * mpmath.sin(k * p)
                                 for k, v in x.sin.items())
            total += mpmath.fsum(ev(ring.base, v) * mpmath.cos(k * p)
                                 for k, v in x.cos.items())
            return total
        return ev(ring, x)

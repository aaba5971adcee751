"""Arbitrary-precision complex substrate: scalars, polynomials, arcs, quadrature.

Everything downstream (germ evaluation, period integrals, the Szego machinery)
stands on three primitives kept in this module: precision-tracked complex
scalars, analytic continuation of square roots along paths, and quadrature on
arcs whose integrands have algebraic endpoint singularities.

Backed by mpmath; precision is expressed in bits throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from mpmath import mp, mpc, mpf, workprec

from .errors import BranchAmbiguity, NoConvergence, PrecisionLoss, ZeroOnPath

MIN_PRECISION = 64
DEFAULT_PRECISION = 256


def bits_for_tol(tol) -> int:
    """Working precision that comfortably resolves an absolute tolerance."""
    t = mpf(tol)
    if t <= 0:
        return DEFAULT_PRECISION
    return max(MIN_PRECISION, int(-mp.log(t, 2)) + 48)


def as_mpc(x) -> mpc:
    """Coerce BigComplex / RationalComplex / python / mpmath scalars to mpc."""
    if isinstance(x, (BigComplex, RationalComplex)):
        return x.to_mpc()
    from fractions import Fraction
    if isinstance(x, Fraction):
        return mpc(mpf(x.numerator) / x.denominator)
    return mpc(x)


class BigComplex:
    """Immutable complex scalar carrying its precision in bits.

    Arithmetic results carry the minimum of the operand precisions and are
    computed at that precision; plain numbers (int/float/mpf/mpc) count as
    exact and do not lower the result precision.
    """

    __slots__ = ("re", "im", "precision")

    def __init__(self, re=0, im=0, precision: Optional[int] = None):
        if isinstance(re, BigComplex):
            prec = precision if precision is not None else re.precision
            prec = max(MIN_PRECISION, int(prec))
            with workprec(prec):
                object.__setattr__(self, "re", mpf(re.re))
                object.__setattr__(self, "im", mpf(re.im) + mpf(im))
        else:
            prec = precision if precision is not None else max(mp.prec, MIN_PRECISION)
            prec = max(MIN_PRECISION, int(prec))
            with workprec(prec):
                z = mpc(re)
                object.__setattr__(self, "re", z.real)
                object.__setattr__(self, "im", z.imag + mpf(im))
        object.__setattr__(self, "precision", prec)

    def __setattr__(self, *a):  # immutable
        raise AttributeError("BigComplex is immutable")

    def to_mpc(self) -> mpc:
        return mpc(self.re, self.im)

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, BigComplex):
            return other.to_mpc(), min(self.precision, other.precision)
        return mpc(other), self.precision

    def _binary(self, other, op):
        w, prec = self._coerce(other)
        with workprec(prec):
            return BigComplex(op(self.to_mpc(), w), precision=prec)

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._binary(other, lambda a, b: b - a)

    def __mul__(self, other):
        return self._binary(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._binary(other, lambda a, b: a / b)

    def __rtruediv__(self, other):
        return self._binary(other, lambda a, b: b / a)

    def __neg__(self):
        return BigComplex(-self.to_mpc(), precision=self.precision)

    def conjugate(self):
        return BigComplex(mpc(self.re, -self.im), precision=self.precision)

    def __abs__(self):
        with workprec(self.precision):
            return abs(self.to_mpc())

    def __complex__(self):
        return complex(self.re, self.im)

    def __eq__(self, other):
        try:
            w = as_mpc(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.to_mpc() == w

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self):
        return f"BigComplex({mp.nstr(self.to_mpc(), 12)}, prec={self.precision})"


class RationalComplex:
    """Exact complex rational scalar (re, im as Fractions).

    Used by the moment generators and the exact Hankel path; converts to mpc
    at any requested precision without rounding surprises.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        from fractions import Fraction
        if isinstance(re, RationalComplex):
            object.__setattr__(self, "re", re.re)
            object.__setattr__(self, "im", re.im + Fraction(im))
        else:
            object.__setattr__(self, "re", Fraction(re))
            object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, *a):
        raise AttributeError("RationalComplex is immutable")

    def _coerce(self, other):
        if isinstance(other, RationalComplex):
            return other
        return RationalComplex(other)

    def __add__(self, other):
        o = self._coerce(other)
        return RationalComplex(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return RationalComplex(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        return RationalComplex(self.re * o.re - self.im * o.im,
                               self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        d = o.re * o.re + o.im * o.im
        if d == 0:
            raise ZeroDivisionError("RationalComplex division by zero")
        return RationalComplex((self.re * o.re + self.im * o.im) / d,
                               (self.im * o.re - self.re * o.im) / d)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __neg__(self):
        return RationalComplex(-self.re, -self.im)

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers")
        out, base = RationalComplex(1), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def to_mpc(self) -> mpc:
        return mpc(mpf(self.re.numerator) / self.re.denominator,
                   mpf(self.im.numerator) / self.im.denominator)

    def __repr__(self):
        return f"RationalComplex({self.re}, {self.im})"


def is_rational_scalar(x) -> bool:
    from fractions import Fraction
    return isinstance(x, (int, Fraction, RationalComplex))


class Poly:
    """Polynomial with complex coefficients stored in ascending degree.

    The zero polynomial has degree -1. Trailing coefficients that are exactly
    zero are trimmed; tiny-but-nonzero leading coefficients are kept, since at
    high precision they are usually meaningful.
    """

    __slots__ = ("_coef", "precision")

    def __init__(self, coefficients: Sequence, precision: Optional[int] = None):
        coef = [as_mpc(c) for c in coefficients]
        while coef and coef[-1] == 0:
            coef.pop()
        prec = precision if precision is not None else max(mp.prec, MIN_PRECISION)
        object.__setattr__(self, "_coef", tuple(coef))
        object.__setattr__(self, "precision", max(MIN_PRECISION, int(prec)))

    def __setattr__(self, *a):
        raise AttributeError("Poly is immutable")

    @classmethod
    def from_roots(cls, roots, leading=1, precision=None):
        p = cls([leading], precision=precision)
        for r in roots:
            p = p * cls([-as_mpc(r), 1], precision=precision)
        return p

    @property
    def coefficients(self):
        return tuple(BigComplex(c, precision=self.precision) for c in self._coef)

    @property
    def coef(self):
        """Raw mpc coefficients, ascending degree."""
        return self._coef

    @property
    def degree(self) -> int:
        return len(self._coef) - 1

    @property
    def is_zero(self) -> bool:
        return not self._coef

    @property
    def is_monic(self) -> bool:
        return bool(self._coef) and self._coef[-1] == 1

    def __call__(self, z):
        zz = as_mpc(z)
        acc = mpc(0)
        for c in reversed(self._coef):
            acc = acc * zz + c
        return acc

    def derivative(self) -> "Poly":
        return Poly([k * c for k, c in enumerate(self._coef)][1:] or [0],
                    precision=self.precision)

    def monic(self) -> "Poly":
        if self.is_zero:
            raise ValueError("zero polynomial has no monic normalization")
        lead = self._coef[-1]
        return Poly([c / lead for c in self._coef], precision=self.precision)

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return Poly([c * as_mpc(other) for c in self._coef], precision=self.precision)
        out = [mpc(0)] * (len(self._coef) + len(other._coef) - 1 or 1)
        for i, a in enumerate(self._coef):
            for j, b in enumerate(other._coef):
                out[i + j] += a * b
        return Poly(out, precision=min(self.precision, other.precision))

    __rmul__ = __mul__

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly([other])
        n = max(len(self._coef), len(other._coef))
        a = list(self._coef) + [mpc(0)] * (n - len(self._coef))
        b = list(other._coef) + [mpc(0)] * (n - len(other._coef))
        return Poly([x + y for x, y in zip(a, b)],
                    precision=min(self.precision, other.precision))

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = Poly([other])
        return self + (other * (-1))

    def __neg__(self):
        return self * (-1)

    def divmod(self, other: "Poly"):
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self._coef)
        den = other._coef
        dq = len(rem) - len(den)
        if dq < 0:
            return Poly([0]), self
        quo = [mpc(0)] * (dq + 1)
        for k in range(dq, -1, -1):
            q = rem[k + len(den) - 1] / den[-1]
            quo[k] = q
            for j, d in enumerate(den):
                rem[k + j] -= q * d
        return (Poly(quo, precision=self.precision),
                Poly(rem[: len(den) - 1], precision=self.precision))

    def roots(self, extraprec: int = 64, maxsteps: int = 200):
        """All roots via mpmath.polyroots, descending-coefficient order."""
        if self.degree < 1:
            return []
        with workprec(self.precision + extraprec):
            try:
                rts = mp.polyroots(list(reversed(self._coef)),
                                   maxsteps=maxsteps, extraprec=extraprec)
            except mp.NoConvergence as exc:  # pragma: no cover - rare
                raise PrecisionLoss(f"polyroots failed: {exc}") from exc
        return [mpc(r) for r in rts]

    def __eq__(self, other):
        return isinstance(other, Poly) and self._coef == other._coef

    def __hash__(self):
        return hash(self._coef)

    def __repr__(self):
        return f"Poly(deg={self.degree}, {[mp.nstr(c, 8) for c in self._coef]})"


@dataclass(frozen=True)
class ArcPath:
    """A sampled path in the plane with an arc-length-like parametrization.

    ``params`` is strictly increasing.  ``orientation`` is +1 when the path is
    traversed from params[0] to params[-1] and -1 for the reverse traversal;
    integrals over the path respect it.  ``locator``/``velocity``, when given,
    evaluate the exact point z(s) and dz/ds (used by trajectory arcs whose
    polyline samples are only approximate anchors); otherwise piecewise-linear
    interpolation between samples is used.
    """

    samples: tuple
    params: tuple
    orientation: int = 1
    locator: Optional[Callable] = None
    velocity: Optional[Callable] = None

    def __post_init__(self):
        if len(self.samples) != len(self.params) or len(self.samples) < 2:
            raise ValueError("need matching samples/params with at least 2 points")
        for a, b in zip(self.params, self.params[1:]):
            if not b > a:
                raise ValueError("parametrization must be strictly increasing")
        if self.orientation not in (1, -1):
            raise ValueError("orientation must be +1 or -1")

    @classmethod
    def from_points(cls, points, orientation=1, locator=None, velocity=None):
        pts = [as_mpc(p) for p in points]
        s = [mpf(0)]
        for a, b in zip(pts, pts[1:]):
            step = abs(b - a)
            if step == 0:
                raise ValueError("repeated consecutive points")
            s.append(s[-1] + step)
        prec = max(mp.prec, MIN_PRECISION)
        return cls(tuple(BigComplex(p, precision=prec) for p in pts), tuple(s),
                   orientation, locator, velocity)

    # -- geometry -------------------------------------------------------------

    def _segment_index(self, s):
        lo, hi = 0, len(self.params) - 1
        if s <= self.params[0]:
            return 0
        if s >= self.params[-1]:
            return hi - 1
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self.params[mid] <= s:
                lo = mid
            else:
                hi = mid
        return lo

    def point_at(self, s) -> mpc:
        s = mpf(s)
        if self.locator is not None:
            return as_mpc(self.locator(s))
        i = self._segment_index(s)
        s0, s1 = self.params[i], self.params[i + 1]
        z0, z1 = as_mpc(self.samples[i]), as_mpc(self.samples[i + 1])
        t = (s - s0) / (s1 - s0)
        return z0 + t * (z1 - z0)

    def velocity_at(self, s) -> mpc:
        s = mpf(s)
        if self.velocity is not None:
            return as_mpc(self.velocity(s))
        i = self._segment_index(s)
        s0, s1 = self.params[i], self.params[i + 1]
        z0, z1 = as_mpc(self.samples[i]), as_mpc(self.samples[i + 1])
        return (z1 - z0) / (s1 - s0)

    @property
    def start(self) -> mpc:
        return as_mpc(self.samples[0] if self.orientation == 1 else self.samples[-1])

    @property
    def end(self) -> mpc:
        return as_mpc(self.samples[-1] if self.orientation == 1 else self.samples[0])

    @property
    def length(self):
        return self.params[-1] - self.params[0]

    def reversed(self) -> "ArcPath":
        return ArcPath(self.samples, self.params, -self.orientation,
                       self.locator, self.velocity)


# --- square-root continuation -------------------------------------------------


def _sqrt_step(w_prev, r_next, r_prev):
    """One continuation step; None when the step is too coarse to trust."""
    if r_prev != 0:
        ratio = r_next / r_prev
        # phase change of the radicand per step must stay below pi/2
        if ratio == 0 or abs(mp.arg(ratio)) >= mp.pi / 2:
            return None
    cand = mp.sqrt(r_next)
    return cand if abs(cand - w_prev) <= abs(-cand - w_prev) else -cand


def continue_sqrt(path: ArcPath, radicand: Callable, seed, *,
                  zero_tol=None, max_depth: int = 60):
    """Analytic continuation of sqrt(radicand) along ``path``.

    The seed must satisfy seed**2 == radicand(start) up to roundoff.  Returns
    one value per path sample (in stored sample order; orientation only
    matters to integration, not to continuation, so the caller is expected to
    seed at samples[0]).
    """
    if zero_tol is None:
        zero_tol = mpf(2) ** (-(mp.prec // 2))
    seed = as_mpc(seed)
    r0 = radicand(as_mpc(path.samples[0]))
    if abs(r0) <= zero_tol:
        raise ZeroOnPath("radicand below tolerance at path start")
    if abs(seed * seed - r0) > abs(r0) / 4:
        raise BranchAmbiguity("seed does not square to the radicand at the start")

    values = [seed]
    prec = max(mp.prec, MIN_PRECISION)

    def advance(s_a, w_a, r_a, s_b, depth):
        z_b = path.point_at(s_b)
        r_b = radicand(z_b)
        if abs(r_b) <= zero_tol:
            raise ZeroOnPath(f"radicand below tolerance near z={mp.nstr(z_b, 8)}")
        w_b = _sqrt_step(w_a, r_b, r_a)
        if w_b is not None and abs(w_b - w_a) < abs(w_b) / 2 + abs(w_a) / 2:
            return w_b, r_b
        if depth >= max_depth:
            raise BranchAmbiguity("step too large to disambiguate square-root sign")
        s_m = (s_a + s_b) / 2
        w_m, r_m = advance(s_a, w_a, r_a, s_m, depth + 1)
        return advance(s_m, w_m, r_m, s_b, depth + 1)

    w, r = seed, r0
    s_prev = path.params[0]
    for s_next in path.params[1:]:
        w, r = advance(s_prev, w, r, s_next, 0)
        values.append(w)
        s_prev = s_next
    return [BigComplex(v, precision=prec) for v in values]


def transport_sqrt(radicand: Callable, z_from, w_from, z_to, *,
                   zero_tol=None, max_depth: int = 60) -> mpc:
    """Continue a square-root value along the straight segment z_from -> z_to."""
    z_from, z_to = as_mpc(z_from), as_mpc(z_to)
    if z_from == z_to:
        return as_mpc(w_from)
    path = ArcPath.from_points([z_from, z_to])
    vals = continue_sqrt(path, radicand, w_from, zero_tol=zero_tol, max_depth=max_depth)
    return vals[-1].to_mpc()


# --- tanh-sinh quadrature ------------------------------------------------------

_TS_CACHE = {}


def _ts_nodes(level: int, prec: int):
    """Nodes/weights for tanh-sinh on (-1,1).

    Returns (w0, [(x_k, w_k)]) for k >= 1; apply symmetrically at +-x_k.  The
    nodes stop while 1-x is still representable at ``prec + 64`` bits, so a
    shifted evaluation never collapses onto the endpoints.
    """
    key = (level, prec)
    if key in _TS_CACHE:
        return _TS_CACHE[key]
    with workprec(prec + 96):
        h = mpf(2) ** (-level)
        pi2 = mp.pi / 2
        w0 = pi2 * h
        pairs = []
        k = 1
        # 1 - tanh(u) ~ 2 exp(-2u); keep it comfortably above ulp(1) at prec
        cutoff = (prec - 31) * mp.log(2) / 2
        while True:
            t = k * h
            u = pi2 * mp.sinh(t)
            if u > cutoff:
                break
            x = mp.tanh(u)
            w = h * pi2 * mp.cosh(t) / mp.cosh(u) ** 2
            pairs.append((x, w))
            k += 1
    _TS_CACHE[key] = (w0, pairs)
    return _TS_CACHE[key]


def ts_quad(f: Callable, a, b, tol, *, min_level: int = 4, max_level: int = 11,
            end_exponents=(0, 0)):
    """Integrate f over the real parameter interval [a, b] by tanh-sinh.

    f may return complex values and may have integrable algebraic/log
    singularities at either endpoint; ``end_exponents`` gives the worst
    algebraic order there (0 for smooth or log), which sets the precision
    guard so that truncated endpoint tails stay below tol.  Raises
    NoConvergence when successive levels disagree by more than tol.
    """
    a, b = mpf(a), mpf(b)
    if a == b:
        return mpc(0), mpf(0)
    tol = mpf(tol)
    alpha = min(mpf(end_exponents[0]), mpf(end_exponents[1]), mpf(0))
    if alpha <= -1:
        raise ValueError("endpoint exponent must exceed -1")
    # endpoint tail of the truncated rule ~ dist^(1+alpha), dist ~ 2^-(prec-31)
    guard = int(bits_for_tol(tol) / float(1 + alpha)) + 80
    prec = max(mp.prec, guard)
    if alpha < 0:
        prec = max(prec, mp.prec + 96)

    cache = {}
    with workprec(prec):
        mid = (a + b) / 2
        half = (b - a) / 2

        def eval_at(x):
            if x in cache:
                return cache[x]
            val = mpc(f(mid + half * x))
            cache[x] = val
            return val

        prev = None
        prev_diff = None
        for level in range(min_level, max_level + 1):
            w0, pairs = _ts_nodes(level, prec)
            total = w0 * eval_at(mpf(0))
            for x, w in pairs:
                total += w * (eval_at(x) + eval_at(-x))
            total *= half
            if prev is not None:
                diff = abs(total - prev)
                if diff <= tol:
                    return total, diff
                if prev_diff is not None and 0 < prev_diff < diff and diff <= tol * 4:
                    # refinement stopped helping: precision floor reached
                    return total, diff
                prev_diff = diff
            prev = total
    raise NoConvergence(
        f"tanh-sinh failed to reach tol={mp.nstr(tol, 3)} "
        f"(last diff {mp.nstr(prev_diff if prev_diff is not None else mpf('inf'), 3)})")


_GL_CACHE = {}


def _gl_nodes(degree: int, prec: int):
    key = (degree, prec)
    if key not in _GL_CACHE:
        from mpmath.calculus.quadrature import GaussLegendre
        with workprec(prec + 32):
            _GL_CACHE[key] = GaussLegendre(mp).calc_nodes(degree, prec + 16)
    return _GL_CACHE[key]


def gl_quad(f: Callable, a, b, tol, *, min_degree: int = 3, max_degree: int = 8):
    """Adaptive Gauss-Legendre on [a, b] for integrands analytic up to the ends."""
    a, b = mpf(a), mpf(b)
    if a == b:
        return mpc(0), mpf(0)
    tol = mpf(tol)
    prec = max(mp.prec, bits_for_tol(tol))
    with workprec(prec):
        mid = (a + b) / 2
        half = (b - a) / 2
        prev = None
        diff = None
        for degree in range(min_degree, max_degree + 1):
            total = mpc(0)
            for x, w in _gl_nodes(degree, prec):
                total += w * mpc(f(mid + half * x))
            total *= half
            if prev is not None:
                diff = abs(total - prev)
                if diff <= tol:
                    return total, diff
            prev = total
    raise NoConvergence(
        f"gauss-legendre failed to reach tol={mp.nstr(tol, 3)} "
        f"(last diff {mp.nstr(diff if diff is not None else mpf('inf'), 3)})")


def arc_quadrature(arc: ArcPath, integrand: Callable,
                   endpoint_exponents=(0, 0), tol=None, *,
                   max_level: int = 11) -> BigComplex:
    """Integrate ``integrand(z) dz`` along an arc.

    ``endpoint_exponents`` describe the algebraic behavior |z-end|^alpha of the
    integrand at the two ends (in stored-parameter order); alpha > -1.  For the
    generic alpha = -1/2 ends the quadratic substitution removes the
    singularity exactly; all other panels go through tanh-sinh, which absorbs
    any remaining integrable endpoint behavior.
    """
    if tol is None:
        tol = mpf(2) ** (-(mp.prec - 16))
    tol = mpf(tol)
    prec = max(mp.prec, bits_for_tol(tol))
    a_exp, b_exp = [mpf(e) for e in endpoint_exponents]
    if a_exp <= -1 or b_exp <= -1:
        raise ValueError("endpoint exponents must exceed -1")

    with workprec(prec):
        if arc.locator is not None:
            n_panels = max(8, min(24, len(arc.samples) // 4 + 8))
            s0, s1 = arc.params[0], arc.params[-1]
            breaks = [s0 + (s1 - s0) * mpf(i) / n_panels for i in range(n_panels + 1)]
        else:
            breaks = [mpf(s) for s in arc.params]
        if len(breaks) == 2 and a_exp != 0 and b_exp != 0:
            # keep the two singular ends in separate panels
            breaks = [breaks[0], (breaks[0] + breaks[1]) / 2, breaks[1]]

        def g(s):
            return integrand(arc.point_at(s)) * arc.velocity_at(s)

        panel_tol = tol / (len(breaks) + 1)
        total = mpc(0)
        err = mpf(0)

        for i in range(len(breaks) - 1):
            lo, hi = breaks[i], breaks[i + 1]
            first, last = i == 0, i == len(breaks) - 2
            lo_exp = a_exp if first else mpf(0)
            hi_exp = b_exp if last else mpf(0)
            if first and abs(a_exp + mpf("0.5")) < mpf("1e-12"):
                # u = sqrt(s - lo): the half-power end becomes analytic in u
                r = mp.sqrt(hi - lo)
                val, e = gl_quad(lambda u: g(lo + u * u) * 2 * u, 0, r, panel_tol)
            elif last and abs(b_exp + mpf("0.5")) < mpf("1e-12"):
                r = mp.sqrt(hi - lo)
                val, e = gl_quad(lambda u: g(hi - u * u) * 2 * u, 0, r, panel_tol)
            else:
                val, e = ts_quad(g, lo, hi, panel_tol, max_level=max_level,
                                 end_exponents=(lo_exp, hi_exp))
            total += val
            err += e

        if err > tol * 8:
            raise NoConvergence(f"arc quadrature error {mp.nstr(err, 3)} above tol")
        if arc.orientation == -1:
            total = -total
        return BigComplex(total, precision=prec)

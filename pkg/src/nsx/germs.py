"""Algebraic/logarithmic germs at infinity and their jump densities.

A germ is a multi-valued function with finitely many branch points that is
holomorphic and vanishing at infinity.  Four closed-form families are
supported; each knows how to generate the coefficients of its expansion at
infinity, evaluate its single-valued branch off a cut system by analytic
continuation from a far-away basepoint, and produce the two-sided jump
f+ - f- across the arcs of a minimal-capacity contour (the orthogonality
weight of the associated Pade denominators).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from mpmath import mp, mpc, mpf, workprec

from .errors import (OrientationMismatch, TooCloseToContour, UnsupportedKind)
from .mpcore import (ArcPath, BigComplex, RationalComplex, arc_quadrature,
                     as_mpc, continue_sqrt, is_rational_scalar)

KINDS = ("two-point-sqrt", "product-power", "hyperelliptic-reciprocal", "log-ratio")

_EXP_TOL = mpf("1e-30")


def _as_exact_or_mpc(x):
    """Keep exact rational scalars exact; everything else becomes mpc."""
    if isinstance(x, RationalComplex):
        return x
    if isinstance(x, (int, Fraction)):
        return RationalComplex(x)
    if isinstance(x, complex) and float(x.real).is_integer() and float(x.imag).is_integer():
        return RationalComplex(int(x.real), int(x.imag))
    if isinstance(x, float) and x.is_integer():
        return RationalComplex(int(x))
    return as_mpc(x)


@dataclass(frozen=True)
class Germ:
    """A germ at infinity with algebro-logarithmic branch points.

    kind:
      two-point-sqrt          c / sqrt((z-a)(z-b))
      hyperelliptic-reciprocal c / sqrt((z-e_1)...(z-e_2s))
      product-power           c * (prod (z-e_j)^alpha_j - 1),  sum alpha_j = 0
      log-ratio               c * log((z-a)/(z-b))
    """

    kind: str
    branch_points: tuple
    exponents: tuple = ()
    normalization: object = 1

    def __post_init__(self):
        if self.kind not in KINDS:
            raise UnsupportedKind(f"unknown germ kind {self.kind!r}")
        pts = tuple(_as_exact_or_mpc(p) for p in self.branch_points)
        if len(pts) < 2:
            raise UnsupportedKind("need at least two branch points")
        if len({(mp.nstr(as_mpc(p).real, 25), mp.nstr(as_mpc(p).imag, 25)) for p in pts}) != len(pts):
            raise UnsupportedKind("branch points must be distinct")
        object.__setattr__(self, "branch_points", pts)
        object.__setattr__(self, "normalization", _as_exact_or_mpc(self.normalization))
        if self.kind == "two-point-sqrt" and len(pts) != 2:
            raise UnsupportedKind("two-point-sqrt needs exactly two branch points")
        if self.kind == "log-ratio" and len(pts) != 2:
            raise UnsupportedKind("log-ratio needs exactly two branch points")
        if self.kind == "hyperelliptic-reciprocal" and len(pts) % 2:
            raise UnsupportedKind("hyperelliptic-reciprocal needs an even point count")
        if self.kind == "product-power":
            exps = tuple(Fraction(e) if isinstance(e, (int, Fraction)) else mpf(e)
                         for e in self.exponents)
            if len(exps) != len(pts):
                raise UnsupportedKind("one exponent per branch point required")
            total = sum((mpf(float(e)) if isinstance(e, Fraction) else e) for e in exps)
            if abs(total) > _EXP_TOL:
                raise UnsupportedKind("product-power exponents must sum to zero")
            for e in exps:
                r = mpf(float(e)) if isinstance(e, Fraction) else e
                frac = r - mp.floor(r)
                if frac == 0:
                    raise UnsupportedKind("integer exponents carry no branching")
            object.__setattr__(self, "exponents", exps)
        else:
            object.__setattr__(self, "exponents", ())

    # -- structural helpers ---------------------------------------------------

    @property
    def points_mpc(self):
        return tuple(as_mpc(p) for p in self.branch_points)

    @property
    def is_rational(self) -> bool:
        ok = all(isinstance(p, RationalComplex) for p in self.branch_points)
        ok = ok and isinstance(self.normalization, RationalComplex)
        if self.kind == "product-power":
            ok = ok and all(isinstance(e, Fraction) for e in self.exponents)
        return ok

    @property
    def scale(self):
        return max(abs(p) for p in self.points_mpc)

    @property
    def basepoint(self) -> mpc:
        """Branch anchor: far on the positive real ray."""
        return mpc(10 * self.scale)

    def weight_exponent_at(self, e) -> mpf:
        """Algebraic order of the jump f+ - f- at branch point e."""
        ez = as_mpc(e)
        if self.kind in ("two-point-sqrt", "hyperelliptic-reciprocal"):
            return mpf("-0.5")
        if self.kind == "log-ratio":
            return mpf(0)
        for p, a in zip(self.points_mpc, self.exponents):
            if abs(p - ez) < mpf("1e-20") * (1 + self.scale):
                return mpf(float(a)) if isinstance(a, Fraction) else mpf(a)
        raise UnsupportedKind("point is not a branch point of this germ")


# --- moments -------------------------------------------------------------------


def _binom_half_series(count):
    """Exact coefficients of (1-w)^(-1/2) = sum c_k w^k."""
    c = [Fraction(1)]
    for k in range(1, count + 1):
        # c_k = c_{k-1} * (2k-1)/(2k)
        c.append(c[-1] * Fraction(2 * k - 1, 2 * k))
    return c


def _convolve(a, b, count):
    out = [RationalComplex(0) if isinstance(a[0], RationalComplex) else mpc(0)] * (count + 1)
    for i, x in enumerate(a[: count + 1]):
        for j, y in enumerate(b[: count + 1 - i]):
            out[i + j] = out[i + j] + x * y
    return out


def moments(germ: Germ, count: int, exact: Optional[bool] = None):
    """Coefficients f_1..f_count of f(z) = sum f_k z^-k.

    Returns RationalComplex entries when the germ data is rational (exact
    binomial/exponential recurrences), else BigComplex at working precision.
    ``exact=False`` forces the floating route.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    use_exact = germ.is_rational if exact is None else (exact and germ.is_rational)
    if exact and not germ.is_rational:
        raise UnsupportedKind("exact moments need rational germ data")

    one = RationalComplex(1) if use_exact else mpc(1)
    zero = RationalComplex(0) if use_exact else mpc(0)

    def lift(x):
        if use_exact:
            return x if isinstance(x, RationalComplex) else RationalComplex(x)
        return as_mpc(x)

    pts = [lift(p) for p in germ.branch_points]
    c = lift(germ.normalization)

    if germ.kind in ("two-point-sqrt", "hyperelliptic-reciprocal"):
        s = len(pts) // 2
        half = _binom_half_series(count)
        series = [one]
        for e in pts:
            fam = [lift(h) * (e ** k) for k, h in enumerate(half)]
            series = _convolve(series, fam, count)
        out = [zero] * count
        for m, g in enumerate(series):
            k = s + m
            if 1 <= k <= count:
                out[k - 1] = c * g
        return _pack(out, use_exact)

    if germ.kind == "log-ratio":
        a, b = pts
        out = []
        for k in range(1, count + 1):
            term = (b ** k - a ** k) * (Fraction(1, k) if use_exact else mpf(1) / k)
            out.append(c * term)
        return _pack(out, use_exact)

    # product-power: exp of a known series
    alphas = [Fraction(a) if use_exact else mpf(float(a)) if isinstance(a, Fraction) else mpf(a)
              for a in germ.exponents]
    p = [zero]
    for k in range(1, count + 1):
        sk = zero
        for al, e in zip(alphas, pts):
            sk = sk + lift(al) * (e ** k) if use_exact else sk + mpc(al) * (e ** k)
        p.append(sk * (Fraction(-1, k) if use_exact else mpf(-1) / k))
    q = [one] + [zero] * count
    for n in range(1, count + 1):
        acc = zero
        for k in range(1, n + 1):
            acc = acc + k * p[k] * q[n - k]
        q[n] = acc * (Fraction(1, n) if use_exact else mpf(1) / n)
    return _pack([c * q[k] for k in range(1, count + 1)], use_exact)


def _pack(values, use_exact):
    if use_exact:
        return list(values)
    prec = max(mp.prec, 64)
    return [BigComplex(as_mpc(v), precision=prec) for v in values]


# --- evaluation by analytic continuation ------------------------------------------


def _walk_logs(centers, z_from, logs_from, z_to, max_depth=48):
    """Continue log(z - center) for every center along a straight segment."""
    def step(za, vals, zb, depth):
        out = []
        for ctr, la in zip(centers, vals):
            d_b = zb - ctr
            d_a = za - ctr
            if d_b == 0:
                raise ZeroDivisionError("log continuation hit a branch point")
            turn = mp.arg(d_b / d_a)
            if abs(turn) >= mp.pi / 2:
                if depth >= max_depth:
                    raise OrientationMismatch("log continuation step too large")
                zm = (za + zb) / 2
                vm = step(za, vals, zm, depth + 1)
                return step(zm, vm, zb, depth + 1)
            out.append(la + mp.log(abs(d_b) / abs(d_a)) + 1j * turn)
        return out

    return step(as_mpc(z_from), list(logs_from), as_mpc(z_to), 0)


class GermBranch:
    """A branch of the germ anchored at a point, transportable along paths."""

    def __init__(self, germ: Germ, anchor=None):
        self.germ = germ
        z0 = as_mpc(anchor) if anchor is not None else germ.basepoint
        self.z = z0
        pts = germ.points_mpc
        if germ.kind in ("two-point-sqrt", "hyperelliptic-reciprocal"):
            r0 = mpc(1)
            for e in pts:
                r0 *= (z0 - e)
            self.state = mp.sqrt(r0)  # principal: positive on the real ray
        else:
            self.state = [mp.log(z0 - e) for e in pts]

    def _radicand(self, z):
        acc = mpc(1)
        for e in self.germ.points_mpc:
            acc *= (z - e)
        return acc

    def copy(self):
        out = GermBranch.__new__(GermBranch)
        out.germ = self.germ
        out.z = self.z
        out.state = self.state if not isinstance(self.state, list) else list(self.state)
        return out

    def move_to(self, z, via: Sequence = ()) -> "GermBranch":
        """Transport the branch along [self.z, *via, z]; returns a new branch."""
        out = self.copy()
        waypoints = [as_mpc(w) for w in via] + [as_mpc(z)]
        for w in waypoints:
            if w == out.z:
                continue
            if self.germ.kind in ("two-point-sqrt", "hyperelliptic-reciprocal"):
                path = ArcPath.from_points([out.z, w])
                vals = continue_sqrt(path, self._radicand, out.state)
                out.state = vals[-1].to_mpc()
            else:
                out.state = _walk_logs(self.germ.points_mpc, out.z, out.state, w)
            out.z = w
        return out

    def value(self) -> mpc:
        g = self.germ
        c = as_mpc(g.normalization)
        if g.kind in ("two-point-sqrt", "hyperelliptic-reciprocal"):
            return c / self.state
        if g.kind == "log-ratio":
            return c * (self.state[0] - self.state[1])
        acc = mpc(0)
        for al, lg in zip(g.exponents, self.state):
            acc += mpc(float(al)) * lg if isinstance(al, Fraction) else mpc(al) * lg
        return c * (mp.exp(acc) - 1)


def evaluate(germ: Germ, z, via: Sequence = ()) -> mpc:
    """Value of the germ's principal branch at z, continued from the basepoint."""
    return GermBranch(germ).move_to(z, via=via).value()


# --- jump densities --------------------------------------------------------------


@dataclass(frozen=True)
class WeightDensity:
    """The jump rho = f+ - f- on the arcs of a minimal-capacity contour.

    Per arc (in the contour's stored arc order): a callable evaluator valid in
    a neighborhood of the open arc, endpoint exponents in stored-parameter
    order, and the holomorphic factor w_k obtained by dividing out the power
    factors at the two ends.
    """

    germ: Germ
    contour: object
    evaluators: tuple
    end_exponents: tuple
    holo_factors: tuple

    def on_arc(self, k: int):
        return self.evaluators[k]

    def exponents(self, k: int):
        return self.end_exponents[k]


def _arc_frames(contour):
    """(start, end, midpoint, oriented unit tangent at midpoint) per arc."""
    frames = []
    for arc in contour.arcs:
        smid = (arc.params[0] + arc.params[-1]) / 2
        zm = arc.point_at(smid)
        tm = arc.velocity_at(smid)
        tm = tm / abs(tm) * arc.orientation
        frames.append((as_mpc(arc.samples[0]), as_mpc(arc.samples[-1]), zm, tm))
    return frames


def jump_density(germ: Germ, contour) -> WeightDensity:
    """Factored two-sided jump of the germ across every contour arc."""
    pts = germ.points_mpc
    # the contour must be cut between this germ's branch points
    for p in pts:
        if min(abs(p - as_mpc(e)) for e in contour.ends) > mpf("1e-10") * (1 + germ.scale):
            raise OrientationMismatch(
                "contour end set does not contain every germ branch point")
    contour.check_orientation()

    base = GermBranch(germ)
    evaluators = []
    exponents = []
    holo = []
    clearance = contour.arc_clearance()
    frames = _arc_frames(contour)

    for k, arc in enumerate(contour.arcs):
        a_end, b_end, zm, tangent = frames[k]
        d = clearance[k] / 4
        nu = mpc(0, 1) * tangent  # left normal w.r.t. orientation
        route_plus = contour.route(base.z, zm + d * nu)
        route_minus = contour.route(base.z, zm - d * nu)
        plus_anchor = base.move_to(zm + d * nu, via=route_plus)
        minus_anchor = base.move_to(zm - d * nu, via=route_minus)

        cache = {}

        def rho(t, _p=plus_anchor, _m=minus_anchor, _cache=cache):
            tz = as_mpc(t)
            key = (tz.real, tz.imag)
            if key not in _cache:
                _cache[key] = _p.move_to(tz).value() - _m.move_to(tz).value()
            return _cache[key]

        ea = germ.weight_exponent_at(a_end) if _is_branch_point(germ, a_end) else mpf(0)
        eb = germ.weight_exponent_at(b_end) if _is_branch_point(germ, b_end) else mpf(0)

        def wk(t, _rho=rho, _a=a_end, _b=b_end, _ea=ea, _eb=eb):
            tz = as_mpc(t)
            val = _rho(tz)
            if _ea:
                val = val / (tz - _a) ** _ea
            if _eb:
                val = val / (tz - _b) ** _eb
            return val

        evaluators.append(rho)
        exponents.append((ea, eb))
        holo.append(wk)

    return WeightDensity(germ, contour, tuple(evaluators), tuple(exponents), tuple(holo))


def _is_branch_point(germ, e):
    ez = as_mpc(e)
    return any(abs(p - ez) < mpf("1e-10") * (1 + germ.scale) for p in germ.points_mpc)


def cauchy_transform(density: WeightDensity, z, tol=None) -> BigComplex:
    """rho-hat(z) = (1/2pi i) * integral of rho(t)/(t-z) dt over the contour."""
    zz = as_mpc(z)
    contour = density.contour
    guard = mpf("1e-6") * (1 + contour.diameter())
    if contour.distance_to(zz) < guard:
        raise TooCloseToContour(f"z within {mp.nstr(guard, 3)} of the contour")
    if tol is None:
        tol = mpf(2) ** (-(mp.prec - 24))
    total = mpc(0)
    for k, arc in enumerate(contour.arcs):
        rho = density.on_arc(k)
        val = arc_quadrature(arc, lambda t: rho(t) / (t - zz),
                             density.exponents(k), tol)
        total += val.to_mpc()
    return BigComplex(total / (2j * mp.pi), precision=mp.prec)

import pytest
from hypothesis import given, settings, strategies as st
from mpmath import mp, mpc, mpf, workprec

from nsx.errors import BranchAmbiguity, NoConvergence, ZeroOnPath
from nsx.mpcore import (ArcPath, BigComplex, Poly, arc_quadrature,
                        continue_sqrt, transport_sqrt, ts_quad)

mp.prec = 256


# --- BigComplex -------------------------------------------------------------

def test_precision_floor():
    z = BigComplex(1, 2, precision=16)
    assert z.precision == 64


def test_precision_min_rule():
    a = BigComplex(1, 0, precision=128)
    b = BigComplex(2, 1, precision=256)
    assert (a * b).precision == 128
    assert (a + b).precision == 128
    assert (b / a).precision == 128
    # exact python scalars keep the precision
    assert (b * 3).precision == 256


@given(st.integers(-50, 50), st.integers(-50, 50), st.integers(-50, 50),
       st.integers(-50, 50))
@settings(deadline=None, max_examples=60)
def test_arith_matches_mpc(ar, ai, br, bi):
    a = BigComplex(ar, ai)
    b = BigComplex(br, bi)
    assert (a + b).to_mpc() == mpc(ar, ai) + mpc(br, bi)
    assert (a * b).to_mpc() == mpc(ar, ai) * mpc(br, bi)


# --- Poly ---------------------------------------------------------------------

def test_poly_basic():
    p = Poly([1, 0, 1])  # 1 + z^2
    assert p.degree == 2
    assert p.is_monic
    assert p(mpc(0, 1)) == 0
    q, r = (p * Poly([2, 1])).divmod(p)
    assert q.coef == (mpc(2), mpc(1))
    assert r.is_zero


def test_poly_trailing_trim_and_zero():
    p = Poly([3, 1, 0, 0])
    assert p.degree == 1
    z = Poly([0])
    assert z.is_zero and z.degree == -1


def test_poly_roots():
    p = Poly.from_roots([1, -1, mpc(0, 2)])
    rts = p.roots()
    for target in (1, -1, mpc(0, 2)):
        assert min(abs(r - target) for r in rts) < mpf("1e-70")


# --- ArcPath --------------------------------------------------------------------

def test_arcpath_validation():
    with pytest.raises(ValueError):
        ArcPath((BigComplex(0), BigComplex(1)), (mpf(0), mpf(0)))
    path = ArcPath.from_points([0, 1, 1 + 1j])
    assert path.length == 2
    assert path.point_at(mpf("0.5")) == mpc("0.5")
    assert path.reversed().start == mpc(1, 1)


# --- continue_sqrt ----------------------------------------------------------------

def test_continue_sqrt_constant():
    path = ArcPath.from_points([0, 1, 2])
    vals = continue_sqrt(path, lambda z: mpc(4), seed=2)
    assert all(v.to_mpc() == 2 for v in vals)


def test_continue_sqrt_monodromy_circle():
    # radicand z around the unit circle: sqrt flips sign
    n = 64
    pts = [mp.expjpi(2 * mpf(k) / n) for k in range(n + 1)]
    path = ArcPath.from_points(pts)
    vals = continue_sqrt(path, lambda z: z, seed=1)
    assert abs(vals[-1].to_mpc() + 1) < mpf("1e-60")


def test_continue_sqrt_segment_value():
    path = ArcPath.from_points([2, 3])
    vals = continue_sqrt(path, lambda z: z * z - 1, seed=mp.sqrt(3))
    assert abs(vals[-1].to_mpc() - mp.sqrt(8)) < mpf("1e-70")


def test_continue_sqrt_zero_on_path():
    path = ArcPath.from_points([-1, 1])
    with pytest.raises(ZeroOnPath):
        continue_sqrt(path, lambda z: z, seed=mpc(0, 1))


def test_continue_sqrt_bad_seed():
    path = ArcPath.from_points([1, 2])
    with pytest.raises(BranchAmbiguity):
        continue_sqrt(path, lambda z: z, seed=mpc(5))


@given(st.integers(1, 4), st.booleans())
@settings(deadline=None, max_examples=12)
def test_monodromy_parity(n_zeros, odd):
    # circle around n zeros (even count -> back to seed, odd -> negated)
    zeros = [mpf(k) / 10 for k in range(n_zeros)]
    if odd and n_zeros % 2 == 0:
        zeros = zeros[:-1]
    if not odd and n_zeros % 2 == 1:
        zeros = zeros + [mpf("0.45")]

    def radicand(z):
        acc = mpc(1)
        for e in zeros:
            acc *= (z - e)
        return acc

    n = 96
    pts = [2 * mp.expjpi(2 * mpf(k) / n) for k in range(n + 1)]
    path = ArcPath.from_points(pts)
    seed = mp.sqrt(radicand(mpc(2)))
    vals = continue_sqrt(path, radicand, seed)
    target = -seed if len(zeros) % 2 == 1 else seed
    assert abs(vals[-1].to_mpc() - target) < mpf("1e-50")


# --- quadrature -------------------------------------------------------------------

TOL = mpf("1e-30")


def test_ts_quad_smooth():
    val, err = ts_quad(lambda t: mp.exp(t), 0, 1, TOL)
    assert abs(val - (mp.e - 1)) < mpf("1e-29")


def test_arc_quadrature_polynomial():
    path = ArcPath.from_points([0, 1])
    val = arc_quadrature(path, lambda z: z * z, (0, 0), TOL)
    assert abs(val.to_mpc() - mpf(1) / 3) < mpf("1e-29")


def test_arc_quadrature_chebyshev_weight():
    path = ArcPath.from_points([-1, 1])
    val = arc_quadrature(path, lambda z: 1 / mp.sqrt(1 - z * z),
                         (mpf("-0.5"), mpf("-0.5")), TOL)
    assert abs(val.to_mpc() - mp.pi) < mpf("1e-28")


def test_arc_quadrature_odd_symmetry():
    path = ArcPath.from_points([-1, 1])
    val = arc_quadrature(path, lambda z: z / mp.sqrt(1 - z * z),
                         (mpf("-0.5"), mpf("-0.5")), TOL)
    assert abs(val.to_mpc()) < mpf("1e-28")


def test_arc_quadrature_orientation_and_linearity():
    path = ArcPath.from_points([0, 1, 2])
    f = lambda z: mp.cos(z)
    g = lambda z: z
    v1 = arc_quadrature(path, f, (0, 0), TOL).to_mpc()
    v2 = arc_quadrature(path, g, (0, 0), TOL).to_mpc()
    v3 = arc_quadrature(path, lambda z: 3 * f(z) - 2 * g(z), (0, 0), TOL).to_mpc()
    assert abs(v3 - (3 * v1 - 2 * v2)) < mpf("1e-28")
    v4 = arc_quadrature(path.reversed(), f, (0, 0), TOL).to_mpc()
    assert abs(v4 + v1) < mpf("1e-28")


def test_tol_halving_stability():
    path = ArcPath.from_points([-1, 1])
    f = lambda z: mp.exp(z) / mp.sqrt(1 - z * z)
    a = arc_quadrature(path, f, (mpf("-0.5"), mpf("-0.5")), mpf("1e-20")).to_mpc()
    b = arc_quadrature(path, f, (mpf("-0.5"), mpf("-0.5")), mpf("1e-40")).to_mpc()
    assert abs(a - b) < mpf("1e-20")


def test_general_exponent_end():
    # integral of (1-t)^(-1/3) over [0,1] = 3/2
    path = ArcPath.from_points([0, 1])
    val = arc_quadrature(path, lambda z: (1 - z) ** mpf(-1) / 3 if False else (1 - z) ** (mpf(-1) / 3),
                         (0, mpf(-1) / 3), TOL)
    assert abs(val.to_mpc() - mpf(3) / 2) < mpf("1e-28")

import math

import numpy as np
import numpy.testing as npt
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from abelmeans import phantom as ph
from abelmeans.phantom import DiscPiece, Phantom, RectPiece


def disc(cx=0.0, cy=0.0, rho=2.0, amp=1.0):
    return Phantom((DiscPiece((cx, cy), rho, amp),))


SQUARE = ph.unit_square()

coord = st.floats(-2, 2, allow_nan=False)
pos = st.floats(0.1, 1.5, allow_nan=False)
amp = st.floats(-2, 2, allow_nan=False)
discs = st.builds(lambda x, y, r, a: DiscPiece((x, y), r, a), coord, coord, pos, amp)
rects = st.builds(lambda x, y, hx, hy, a: RectPiece((x, y), (hx, hy), a), coord, coord, pos, pos, amp)
pieces = st.one_of(discs, rects)


class TestEval:
    def test_disc_inside_and_outside(self):
        assert ph.eval(disc(), (0, 0)) == 1
        assert ph.eval(disc(), (3, 0)) == 0

    def test_boundary_counts_inside(self):
        assert ph.eval(disc(), (2, 0)) == 1
        assert ph.eval(SQUARE, (1, 1)) == 1

    def test_empty(self):
        assert ph.eval(Phantom(), (0.3, -7)) == 0

    def test_overlap_adds(self):
        assert ph.eval(ph.two_disc_phantom(), (1, 0)) == 2

    def test_array_matches_scalar(self):
        P = ph.two_disc_phantom()
        xs = np.linspace(-3, 3, 13)
        X, Y = np.meshgrid(xs, xs, indexing="ij")
        expected = [[ph.eval(P, (x, y)) for y in xs] for x in xs]
        npt.assert_array_equal(ph.eval_array(P, X, Y), expected)


class TestLocalAverage:
    @pytest.mark.parametrize("x, expected", [
        ((0, 0), 1.0), ((0.5, -0.3), 1.0),
        ((1, 0), 0.5), ((-0.2, -1), 0.5),
        ((1, 1), 0.25), ((-1, 1), 0.25),
        ((2, 0), 0.0), ((1.5, 1.5), 0.0),
    ])
    def test_unit_square(self, x, expected):
        assert ph.local_average(SQUARE, x) == expected

    def test_disc_edge(self):
        assert ph.local_average(disc(), (2, 0)) == 0.5
        assert ph.local_average(disc(), (0, -2)) == 0.5

    def test_classify_tags(self):
        assert ph.classify(SQUARE.pieces[0], (1, 1)).tag == "corner"
        assert ph.classify(SQUARE.pieces[0], (1, 0)).tag == "edge"
        assert ph.classify(disc().pieces[0], (0, 1)).tag == "interior"
        assert ph.classify(disc().pieces[0], (5, 1)).tag == "exterior"

    @given(st.lists(pieces, max_size=3), coord, coord)
    def test_equals_eval_at_continuity_points(self, ps, x, y):
        P = Phantom(tuple(ps))
        if all(ph.classify(p, (x, y)).tag in ("interior", "exterior") for p in P.pieces):
            assert ph.local_average(P, (x, y)) == ph.eval(P, (x, y))


class TestRingAverage:
    def test_interior_ring(self):
        assert ph.ring_average(disc(), (0, 0), 1.0) == 1.0

    @pytest.mark.parametrize("r", [0.1, 0.01, 0.001])
    def test_disc_edge_converges(self, r):
        # Brute force: fraction of fine angular samples whose point lies inside.
        th = np.linspace(0, 2 * np.pi, 200001)[:-1]
        frac = np.mean(np.hypot(2 + r * np.cos(th), r * np.sin(th)) <= 2)
        val = ph.ring_average(disc(), (2, 0), r, n_samples=4096)
        assert abs(val - frac) < 1e-3
        assert abs(val - 0.5) <= r

    @pytest.mark.parametrize("x, limit", [((0, 0), 1), ((1, 0), 0.5), ((1, 1), 0.25), ((2, 0), 0)])
    def test_square_classes(self, x, limit):
        for r in (0.1, 0.01, 0.001):
            assert abs(ph.ring_average(SQUARE, x, r) - limit) <= 10 * r

    def test_rejects_bad_args(self):
        with pytest.raises(ValueError):
            ph.ring_average(SQUARE, (0, 0), 0.0)
        with pytest.raises(ValueError):
            ph.ring_average(SQUARE, (0, 0), 0.1, n_samples=4)


class TestRadon:
    def test_centered_disc_values(self):
        P = disc()
        assert ph.radon(P, 0.0, 0.3) == 4.0
        assert ph.radon(P, 2.0, 1.1) == 0.0
        assert ph.radon(P, 1.0, 0.0) == pytest.approx(2 * math.sqrt(3), abs=1e-15)

    def test_offset_disc(self):
        P = disc(1.0, 0.0, 0.5)
        assert ph.radon(P, 1.0, 0.0) == 1.0
        # Nonzero branch where |t - cos psi| <= rho.
        psi = 0.7
        t = math.cos(psi) + 0.3
        assert ph.radon(P, t, psi) == pytest.approx(2 * math.sqrt(0.25 - 0.09), abs=1e-15)
        assert ph.radon(P, math.cos(psi) + 0.6, psi) == 0.0

    def test_centered_disc_is_angle_independent(self):
        rng = np.random.default_rng(5)
        psis = rng.uniform(0, np.pi, 16)
        for t in (0.0, 0.7, 1.9):
            vals = ph.radon(disc(), t, psis)
            assert np.ptp(vals) <= 1e-15

    def test_rect_chord_brute_force(self):
        # Chord length by sampling the line densely and counting inside points.
        P = Phantom((RectPiece((0.3, -0.2), (0.8, 0.5), 1.5),))
        u = np.linspace(-4, 4, 400001)
        du = u[1] - u[0]
        for t, psi in [(0.1, 0.0), (0.2, np.pi / 2), (0.4, 0.6), (-0.5, 2.5), (1.2, 1.0)]:
            n = np.array([np.cos(psi), np.sin(psi)])
            pts = t * n[:, None] + u * np.array([-n[1], n[0]])[:, None]
            inside = ph.eval_array(P, pts[0], pts[1])
            assert ph.radon(P, t, psi) == pytest.approx(inside.sum() * du, abs=5e-4)

    def test_unit_square_axis_aligned(self):
        assert ph.radon(SQUARE, 0.0, 0.0) == 2.0
        assert ph.radon(SQUARE, 0.5, np.pi / 2) == 2.0
        assert ph.radon(SQUARE, 0.0, np.pi / 4) == pytest.approx(2 * math.sqrt(2))
        assert ph.radon(SQUARE, 1.5, 0.0) == 0.0

    @settings(max_examples=50, deadline=None)
    @given(pieces, pieces, st.floats(-3, 3), st.floats(0, np.pi, exclude_max=True))
    def test_linear(self, a, b, t, psi):
        f, g = Phantom((a,)), Phantom((b,))
        assert ph.radon(f + g, t, psi) == pytest.approx(
            ph.radon(f, t, psi) + ph.radon(g, t, psi), abs=1e-12)

    @pytest.mark.parametrize("psi", [0.0, 0.4, np.pi / 2, 2.9])
    def test_mass_conservation(self, psi):
        P = Phantom((DiscPiece((0.5, -0.3), 0.7, 2.0), RectPiece((-0.4, 0.6), (0.3, 0.9), -1.0)))
        lo, hi = ph.support(P, psi)
        kinks = sorted({float(v) for v in np.linspace(lo, hi, 3)})
        total, _ = integrate.quad(lambda t: ph.radon(P, t, psi), float(lo), float(hi),
                                  points=kinks[1:-1], limit=400, epsabs=1e-11)
        assert total == pytest.approx(P.integral(), abs=1e-6)

    def test_support_brackets_projection(self):
        P = ph.two_disc_phantom()
        psi = np.linspace(0, np.pi, 7, endpoint=False)
        lo, hi = ph.support(P, psi)
        assert np.all(ph.radon(P, lo - 1e-9, psi) == 0)
        assert np.all(ph.radon(P, hi + 1e-9, psi) == 0)
        assert np.all(ph.radon(P, (lo + hi) / 2, psi) > 0)


class TestFormat:
    def test_roundtrip_exact(self):
        P = Phantom((DiscPiece((0.1, -1 / 3), 2.0, 1.0), RectPiece((0, 0), (1, 0.7), 1e-17)))
        Q = ph.parse_phantom(ph.format_phantom(P))
        assert Q == P

    def test_comments_and_blank_lines(self):
        P = ph.parse_phantom("# header\n\ndisc 0 0 2 1  # big\nrect 0 0 1 1 1\n")
        assert len(P.pieces) == 2
        assert isinstance(P.pieces[1], RectPiece)

    @pytest.mark.parametrize("text, where", [
        ("ellipse 0 0 1 1\n", "token 1"),
        ("disc 0 0 2\n", "line 1"),
        ("\ndisc 0 x 2 1\n", "line 2, token 3"),
        ("disc 0 0 -1 1\n", "line 1"),
        ("rect 0 0 1 nan 1\n", "token 5"),
    ])
    def test_errors_name_position(self, text, where):
        with pytest.raises(ph.PhantomFormatError, match=where):
            ph.parse_phantom(text)

    def test_invalid_pieces(self):
        with pytest.raises(ValueError):
            DiscPiece((0, 0), 0.0)
        with pytest.raises(ValueError):
            RectPiece((0, 0), (1, -1))


def test_value_bounds():
    assert ph.two_disc_phantom().value_bounds() == (0.0, 2.0)
    assert Phantom().value_bounds() == (0.0, 0.0)
    far = Phantom((DiscPiece((0, 0), 1, 1), DiscPiece((5, 0), 1, -1)))
    assert far.value_bounds() == (-1.0, 1.0)

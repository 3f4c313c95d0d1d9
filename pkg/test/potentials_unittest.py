"""
potentials_unittest.py

Created: Thu Sep 24 17:03:12 CEST 2026

Test capacities, effective resistances and mean exit times against
closed forms on paths and gaskets, dense linear algebra and Monte
Carlo walks.
"""

import sys
import logging
import unittest

import numpy as np

from subgauss import WeightedGraph, lattice, sierpinski_gasket
from subgauss.generators import scale_weights
from subgauss.potentials import (annulus_capacity, ball_exit_time, capacity,
    effective_resistance, equilibrium_potential, exit_time, green_apply,
    is_superharmonic, simulate_exit_times)
from subgauss.utils import InfiniteCapacityError, RangeError


def dense_capacity(g, A, B):
    """
    Cap(A,B) by a dense solve of the Dirichlet problem
    """
    W = g.conductance.toarray()
    L = np.diag(g.vertex_mass) - W
    f = np.zeros(g.vertex_count)
    f[A] = 1.0
    free = np.setdiff1d(np.arange(g.vertex_count), np.union1d(A, B))
    if free.size:
        f[free] = np.linalg.solve(L[np.ix_(free, free)],
            W[np.ix_(free, A)].sum(axis = 1))
    return f.dot(L).dot(f)


def random_small_graph(rng):
    n = int(rng.integers(2, 7))
    edges = dict()
    for v in range(1, n):
        edges[(int(rng.integers(v)), v)] = rng.uniform(0.1, 10)
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < 0.3:
                edges[(u, v)] = rng.uniform(0.1, 10)
    return WeightedGraph.from_edges(n, [(u, v, w) for (u, v), w in
        edges.items()])


class TestCapacity(unittest.TestCase):
    """
    Unittesting for subgauss.potentials.capacity
    """

    def setUp(self):
        self.log = logging.getLogger('Capacity')

    def test_series_law(self):
        """
        n unit resistors in series have capacity 1/n
        """
        for n in [1, 2, 5, 16, 64]:
            g = lattice(d = 1, side = n + 1)
            cap = capacity(g, g.vertex_set([0]), g.vertex_set([n]))
            self.log.debug('n = {}: Cap = {:.14f}'.format(n, cap.value))
            self.assertAlmostEqual(cap.value, 1.0/n, delta = 1e-8/n)
            self.assertAlmostEqual(cap.resistance, n, delta = 1e-6)

    def test_dense(self):
        """
        Agrees with a dense solve on random graphs of up to 6 vertices
        """
        rng = np.random.default_rng(0)
        for trial in range(100):
            g = random_small_graph(rng)
            perm = rng.permutation(g.vertex_count)
            k = int(rng.integers(1, g.vertex_count))
            l = int(rng.integers(k + 1, g.vertex_count + 1))
            A, B = np.sort(perm[:k]), np.sort(perm[k:l])
            expected = dense_capacity(g, A, B)
            value = capacity(g, A, B).value
            self.assertAlmostEqual(value, expected, delta = 1e-8*expected)

    def test_resistance_pinv(self):
        """
        R(x,y) = (e_x - e_y)' L^+ (e_x - e_y)
        """
        rng = np.random.default_rng(7)
        for trial in range(20):
            g = random_small_graph(rng)
            L = np.diag(g.vertex_mass) - g.conductance.toarray()
            Lplus = np.linalg.pinv(L)
            x, y = 0, g.vertex_count - 1
            e = np.zeros(g.vertex_count)
            e[x], e[y] = 1.0, -1.0
            expected = e.dot(Lplus).dot(e)
            self.assertAlmostEqual(effective_resistance(g, x, y), expected,
                delta = 1e-7*expected)
        self.assertEqual(effective_resistance(g, 0, 0), 0.0)

    def test_gasket_corners(self):
        """
        The resistance between two corners of the level L gasket is
        (2/3)(5/3)^L
        """
        for level in range(1, 6):
            g = sierpinski_gasket(level)
            a, b = g.boundary[0], g.boundary[1]
            value = capacity(g, [a], [b]).value
            expected = 1.5*0.6**level
            self.log.debug('level {}: Cap = {:.12f}'.format(level, value))
            self.assertAlmostEqual(value, expected, delta = 1e-9*expected)

    def test_annulus_Z1(self):
        """
        Cap(B(x,r), {d >= 2r}) on Z^1 is 2/r
        """
        g = lattice(d = 1, side = 81)
        for r in [1, 2, 4, 8, 16]:
            value = annulus_capacity(g, 40, r).value
            self.assertAlmostEqual(value, 2.0/r, delta = 1e-9/r)

    def test_annulus_errors(self):
        g = lattice(d = 1, side = 11)
        self.assertRaises(RangeError, annulus_capacity, g, 5, 0)
        self.assertRaises(RangeError, annulus_capacity, g, 5, 3)

    def test_infinite(self):
        g = lattice(d = 1, side = 5)
        cap = capacity(g, [0, 1], [1, 4])
        self.assertTrue(cap.infinite)
        self.assertIsNone(cap.value)
        self.assertEqual(cap.resistance, 0.0)
        self.assertEqual(cap.to_dict()['value'], 'inf')
        self.assertRaises(InfiniteCapacityError, equilibrium_potential, g,
            [0, 1], [1, 4])

    def test_empty_plate(self):
        g = lattice(d = 1, side = 5)
        self.assertRaises(ValueError, capacity, g, [], [4])

    def test_equilibrium_potential(self):
        """
        Boundary values, range [0,1] and harmonicity off the plates
        """
        g = sierpinski_gasket(3)
        a = g.boundary[0]
        A, B = g.vertex_set([a]), g.vertex_set(g.boundary[1:])
        f = equilibrium_potential(g, A, B)
        self.assertEqual(f[a], 1.0)
        np.testing.assert_array_equal(f.values[B.ids], 0.0)
        self.assertTrue(np.all((f.values >= 0) & (f.values <= 1)))
        free = A.union(B).complement().ids
        Pf = g.walk_step(f).values
        np.testing.assert_allclose(Pf[free], f.values[free], atol = 1e-9)

    def test_weight_scaling(self):
        """
        Cap scales with the conductances
        """
        g = sierpinski_gasket(3)
        h = scale_weights(g, 2.5)
        a, b = g.boundary[0], g.boundary[1]
        self.assertAlmostEqual(capacity(h, [a], [b]).value,
            2.5*capacity(g, [a], [b]).value, 10)


class TestExitTime(unittest.TestCase):
    """
    Mean exit times and the Green operator
    """

    def setUp(self):
        self.log = logging.getLogger('ExitTime')
        self.g = lattice(d = 1, side = 301)
        self.c = 150

    def test_profile_Z1(self):
        """
        Exit time of the open ball of radius r at distance j is r^2 - j^2
        """
        for r in [8, 32, 128]:
            E = ball_exit_time(self.g, self.c, r)
            self.log.debug('r = {}: E(c) = {:.9f}'.format(r, E[self.c]))
            self.assertAlmostEqual(E[self.c], r**2, delta = 1e-6*r**2)
            j = np.arange(-r, r + 1)
            np.testing.assert_allclose(E.values[self.c + j], r**2 - j**2,
                atol = 1e-6*r**2)
            self.assertEqual(E[self.c + r], 0.0)

    def test_ball_exit_errors(self):
        self.assertRaises(RangeError, ball_exit_time, self.g, self.c, 0)
        self.assertRaises(RangeError, ball_exit_time, self.g, self.c, 1000)
        self.assertRaises(ValueError, exit_time, self.g, [])

    def test_green_unit(self):
        D = self.g.ball(self.c, 20)
        E = exit_time(self.g, D)
        G = green_apply(self.g, D, 1.0)
        np.testing.assert_array_equal(E.values, G.values)
        self.assertEqual(E.tag, 'exit-time')

    def test_green_linear(self):
        """
        G(af + bg) = aG(f) + bG(g)
        """
        g = sierpinski_gasket(3)
        D = g.ball(0, 4)
        rng = np.random.default_rng(4)
        f1, f2 = rng.random((2, g.vertex_count))
        lhs = green_apply(g, D, 2*f1 + 3*f2).values
        rhs = 2*green_apply(g, D, f1).values + 3*green_apply(g, D, f2).values
        np.testing.assert_allclose(lhs, rhs, rtol = 1e-7, atol = 1e-9)

    def test_exit_equation(self):
        """
        E = 1 + PE on D and E = 0 off D
        """
        g = sierpinski_gasket(4)
        D = g.ball(0, 6)
        E = exit_time(g, D)
        PE = g.walk_step(E).values
        np.testing.assert_allclose(E.values[D.ids], 1 + PE[D.ids],
            rtol = 1e-6)
        np.testing.assert_array_equal(E.values[D.complement().ids], 0.0)

    def test_superharmonic(self):
        D = self.g.ball(self.c, 10)
        E = exit_time(self.g, D)
        self.assertTrue(is_superharmonic(self.g, E, D))
        self.assertFalse(is_superharmonic(self.g, -E.values, D))
        # off D the exit time is 0 while PE > 0 next to D
        self.assertFalse(is_superharmonic(self.g, E, D.complement()))

    def test_superharmonic_small(self):
        """
        The default tolerance scales with max|u| also below 1
        """
        u = np.full(self.g.vertex_count, 1e-3)
        self.assertTrue(is_superharmonic(self.g, u, [self.c]))
        u[self.c] -= 5e-10
        self.assertFalse(is_superharmonic(self.g, u, [self.c]))
        self.assertTrue(is_superharmonic(self.g, 1e6*u, [self.c], tol = 1e-3))

    def test_scaling(self):
        """
        Exit times do not see a global scaling of the weights
        """
        g = sierpinski_gasket(3)
        h = scale_weights(g, 4.0)
        D = g.ball(0, 4)
        np.testing.assert_allclose(exit_time(h, D).values,
            exit_time(g, D).values, rtol = 1e-8)

    def test_monte_carlo(self):
        """
        Simulated exit times agree with the Dirichlet solve
        """
        r = 32
        D = self.g.ball(self.c, r - 1)
        stats = simulate_exit_times(self.g, D, self.c, walks = 10000,
            seed = 0)
        info = 'simulated {:.2f} +- {:.2f}, expected {}'
        self.log.debug(info.format(stats['mean'], stats['sem'], r**2))
        self.assertLess(abs(stats['mean'] - r**2), 3*stats['sem'])

    def test_monte_carlo_seeded(self):
        D = self.g.ball(self.c, 4)
        a = simulate_exit_times(self.g, D, self.c, walks = 200, seed = 3)
        b = simulate_exit_times(self.g, D, self.c, walks = 200, seed = 3)
        self.assertEqual(a, b)


if __name__ == '__main__':
    logging.basicConfig(stream = sys.stderr, level=logging.DEBUG)
    unittest.main()

"""
inequalities_unittest.py

Created: Fri Sep 25 10:02:55 CEST 2026

Test the exponent fits, the condition reports and the volume,
capacity and Poincare audits on lattices and gaskets.
"""

import sys
import math
import logging
import unittest

import numpy as np
from scipy import linalg

from subgauss import lattice, sierpinski_gasket
from subgauss.generators import scale_weights
from subgauss.inequalities import (ConditionReport, ExponentFit,
    audit_radii, capacity_scaling_audit, decimation_walk_dimension,
    doubling_audit, hypothesis_gate, hypothesis_report, p0_report,
    poincare_constant, poincare_scaling_audit, volume_fit,
    volume_scaling_audit)


def dense_poincare(g, center, r, energy_factor = 2):
    """
    The largest generalized eigenvalue of (variance on B(x,r), energy
    on B(x,2r)) on the complement of the constants
    """
    ids = g.ball(center, energy_factor*r).ids
    W = g.conductance[ids][:, ids].toarray()
    L = np.diag(W.sum(axis = 1)) - W
    w = np.where(np.isin(ids, g.ball(center, r).ids), g.vertex_mass[ids], 0)
    C = np.eye(ids.size) - np.outer(np.ones(ids.size), w)/w.sum()
    N = C.T.dot(np.diag(w)).dot(C)
    Q = linalg.null_space(np.ones((1, ids.size)))
    evals = linalg.eigh(Q.T.dot(N).dot(Q), Q.T.dot(L).dot(Q),
        eigvals_only = True)
    return evals[-1]


class TestRecords(unittest.TestCase):
    """
    Unittesting for ExponentFit and ConditionReport
    """

    def setUp(self):
        self.log = logging.getLogger('Records')

    def test_exact_fit(self):
        radii = [2, 4, 8, 16]
        fit = ExponentFit.from_data(radii, [3.0*r**2 for r in radii])
        self.assertAlmostEqual(fit.exponent, 2.0, 12)
        self.assertAlmostEqual(fit.log_prefactor, math.log(3), 12)
        self.assertAlmostEqual(fit.r_squared, 1.0, 12)
        self.assertAlmostEqual(fit.c_min, 3.0, 10)
        self.assertAlmostEqual(fit.c_max, 3.0, 10)
        self.assertEqual(sorted(fit.to_dict()), ['c_max', 'c_min', 'exponent',
            'log_prefactor', 'r_squared', 'radii', 'values'])

    def test_fit_errors(self):
        self.assertRaises(ValueError, ExponentFit.from_data, [1, 2], [1, 2])
        self.assertRaises(ValueError, ExponentFit.from_data, [1, 3, 2],
            [1, 2, 3])
        self.assertRaises(ValueError, ExponentFit.from_data, [1, 2, 3],
            [1, 0, 3])

    def test_rules(self):
        self.assertTrue(ConditionReport('c', [(1, 1), (2, 40)], 50).verdict)
        self.assertFalse(ConditionReport('c', [(1, 1), (2, 60)], 50).verdict)
        self.assertTrue(ConditionReport('c', [(1, 2), (2, 3)], 2,
            rule = 'lower').verdict)
        self.assertFalse(ConditionReport('c', [(1, 1), (2, 3)], 2,
            rule = 'lower').verdict)
        self.assertTrue(ConditionReport('c', [(1, 1), (2, 3)], 3,
            rule = 'upper').verdict)
        self.assertFalse(ConditionReport('c', [(1, 1), (2, 3.5)], 3,
            rule = 'upper').verdict)
        self.assertTrue(ConditionReport('c', [(1, -1), (2, 1)], 2,
            rule = 'band').verdict)
        self.assertFalse(ConditionReport('c', [(1, -1), (2, 1.5)], 2,
            rule = 'band').verdict)
        self.assertRaises(ValueError, ConditionReport, 'c', [], 1,
            rule = 'median')

    def test_nonfinite(self):
        report = ConditionReport('c', [(1, 1), (2, np.inf)], 1e300,
            rule = 'upper')
        self.assertFalse(report.verdict)

    def test_checks_components(self):
        self.assertFalse(ConditionReport('c', [], 0).verdict)
        self.assertTrue(ConditionReport('c', [], 0, scale_free = True,
            checks = dict(ok = True)).verdict)
        self.assertFalse(ConditionReport('c', [], 0, scale_free = True,
            checks = dict(ok = False)).verdict)
        self.assertFalse(ConditionReport('c', [(1, 1)], 50,
            checks = dict(ok = False)).verdict)
        good = ConditionReport('a', [(1, 1)], 50)
        bad = ConditionReport('b', [(1, 1), (2, 100)], 50)
        self.assertTrue(ConditionReport('p', [], 0, components = [good]
            ).verdict)
        self.assertFalse(ConditionReport('p', [], 0,
            components = [good, bad]).verdict)

    def test_inconclusive(self):
        """
        Without scales a per-scale condition fails, whatever its checks
        """
        report = ConditionReport('c', [], 50, checks = dict(ok = True))
        self.assertTrue(report.inconclusive)
        self.assertFalse(report.verdict)
        self.assertTrue(report.to_dict()['inconclusive'])
        empty = ConditionReport('a', [], 50)
        self.assertFalse(ConditionReport('p', [], 0,
            components = [empty]).verdict)
        self.assertFalse(ConditionReport('c', [(1, 1)], 50).inconclusive)
        self.assertNotIn('inconclusive',
            ConditionReport('c', [(1, 1)], 50).to_dict())

    def test_to_dict(self):
        report = ConditionReport('c', [(4, 1.5), (8, 2.5)], 50,
            checks = dict(ok = True), notes = ['n'])
        out = report.to_dict()
        self.assertEqual(out['scales'], [dict(r = 4, constant = 1.5),
            dict(r = 8, constant = 2.5)])
        self.assertEqual(out['min_constant'], 1.5)
        self.assertEqual(out['max_constant'], 2.5)
        self.assertTrue(out['verdict'])
        self.assertEqual(out['checks'], dict(ok = True))
        self.assertNotIn('components', out)
        self.assertNotIn('min_constant', ConditionReport('c', [], 0,
            checks = dict(ok = True), scale_free = True).to_dict())


class TestVolume(unittest.TestCase):
    """
    Volume growth, doubling and (p0)
    """

    def setUp(self):
        self.log = logging.getLogger('Volume')

    def test_audit_radii(self):
        g = lattice(d = 1, side = 129)
        self.assertEqual(audit_radii(g, 64), [4, 8, 16])
        self.assertEqual(audit_radii(g, 64, [16, 4]), [4, 16])
        with self.assertLogs('subgauss.inequalities', level = 'WARNING') as cm:
            audit_radii(g, 64, [30, 40], factor = 2)
        # eccentricity 64: only 2*40 reaches past it
        self.assertIn('[40] reach past the eccentricity', cm.output[0])

    def test_volume_Z2(self):
        g = lattice(d = 2, side = 161)
        fit = volume_fit(g, 80*161 + 80, [4, 8, 16, 32, 64])
        self.log.debug('Z^2: d_f = {:.4f}'.format(fit.exponent))
        self.assertAlmostEqual(fit.exponent, 2.0, delta = 0.15)
        self.assertGreater(fit.r_squared, 0.99)

    def test_volume_gasket(self):
        g = sierpinski_gasket(7)
        fit = volume_fit(g, 0, [4, 8, 16, 32, 64])
        self.log.debug('gasket: d_f = {:.4f}'.format(fit.exponent))
        self.assertAlmostEqual(fit.exponent, math.log(3)/math.log(2),
            delta = 0.1)

    def test_volume_scaling(self):
        """
        Scaling the weights by c shifts the prefactor by log c only
        """
        g = sierpinski_gasket(5)
        a = volume_fit(g, 0, [2, 4, 8, 16])
        b = volume_fit(scale_weights(g, 7.0), 0, [2, 4, 8, 16])
        self.assertAlmostEqual(b.exponent, a.exponent, 10)
        self.assertAlmostEqual(b.log_prefactor, a.log_prefactor + math.log(7),
            10)

    def test_volume_audit(self):
        g = sierpinski_gasket(6)
        report = volume_scaling_audit(g, 0, [2, 4, 8, 16], math.log2(3))
        self.assertEqual(report.condition, 'V(d_f)')
        self.assertTrue(report.verdict)
        self.assertLess(report.max_constant/report.min_constant, 1.5)

    def test_doubling(self):
        g = lattice(d = 1, side = 201)
        report = doubling_audit(g, 100, [4, 8, 16])
        for r, c in report.scales:
            self.assertAlmostEqual(c, (4*r + 1)/(2*r + 1), 12)
        self.assertTrue(report.verdict)

    def test_p0(self):
        report = p0_report(lattice(d = 2, side = 9))
        self.assertEqual(report.min_constant, 0.25)
        self.assertTrue(report.verdict)

    def test_gate(self):
        self.assertTrue(hypothesis_gate(2, 2))
        self.assertTrue(hypothesis_gate(math.log2(3), math.log2(5)))
        self.assertFalse(hypothesis_gate(3.5, 2))
        self.assertFalse(hypothesis_gate(1, 1.5))
        report = hypothesis_report(3.5, 2)
        self.assertFalse(report.verdict)
        self.assertTrue(report.checks['walk_dimension_at_least_2'])
        self.assertFalse(report.checks['slow_volume_growth'])
        self.assertTrue(hypothesis_report(1, 2).verdict)


class TestCapacityAudit(unittest.TestCase):
    """
    Cap(d_w) constants and the decimation estimate of d_w
    """

    def setUp(self):
        self.log = logging.getLogger('CapacityAudit')

    def test_Z1_constant(self):
        """
        On Z^1, Cap = 2/r and V = 2(2r+1), so the r=4 constant is 8/18
        """
        g = lattice(d = 1, side = 41)
        report = capacity_scaling_audit(g, 20, [4], d_w = 2)
        self.assertAlmostEqual(report.scales[0][1], 8.0/18, delta = 1e-9)

    def test_Z1_audit(self):
        g = lattice(d = 1, side = 201)
        report = capacity_scaling_audit(g, 100, [4, 8, 16, 32], d_w = 2)
        for r, c in report.scales:
            self.assertAlmostEqual(c, r/(2.0*r + 1), delta = 1e-8)
        self.assertTrue(report.verdict)

    def test_scaling_invariance(self):
        g = sierpinski_gasket(5)
        d_w = math.log2(5)
        a = capacity_scaling_audit(g, 0, [2, 4, 8], d_w)
        b = capacity_scaling_audit(scale_weights(g, 3.0), 0, [2, 4, 8], d_w)
        np.testing.assert_allclose(a.constants, b.constants, rtol = 1e-8)
        self.assertTrue(a.verdict)

    def test_decimation(self):
        out = decimation_walk_dimension('sierpinski', levels = (1, 2, 3))
        self.log.debug('gasket: {}'.format(out))
        self.assertAlmostEqual(out['d_w'], math.log(5)/math.log(2),
            delta = 1e-6)
        self.assertAlmostEqual(out['rho'], 5.0/3, delta = 1e-6)
        out = decimation_walk_dimension('vicsek', levels = (1, 2, 3))
        self.assertAlmostEqual(out['d_w'], math.log(15)/math.log(3),
            delta = 1e-6)
        self.assertRaises(ValueError, decimation_walk_dimension, 'carpet')
        self.assertRaises(ValueError, decimation_walk_dimension, 'vicsek',
            (2,))


class TestPoincare(unittest.TestCase):
    """
    Poincare constants and the PI(d_w) audit
    """

    def setUp(self):
        self.log = logging.getLogger('Poincare')

    def test_trivial(self):
        g = lattice(d = 1, side = 9)
        self.assertEqual(poincare_constant(g, 4, 0), 0.0)

    def test_dense(self):
        g = lattice(d = 1, side = 8)
        value = poincare_constant(g, 3, 1)
        expected = dense_poincare(g, 3, 1)
        self.log.debug('C_P = {:.10f}, dense {:.10f}'.format(value, expected))
        self.assertAlmostEqual(value, expected, delta = 1e-6*expected)

    def test_dense_gasket(self):
        g = sierpinski_gasket(3)
        for r in (1, 2, 3):
            expected = dense_poincare(g, 0, r)
            self.assertAlmostEqual(poincare_constant(g, 0, r), expected,
                delta = 1e-5*expected)

    def test_energy_factor(self):
        """
        Taking energy over a larger ball cannot raise the constant
        """
        g = sierpinski_gasket(4)
        two = poincare_constant(g, 0, 3)
        three = poincare_constant(g, 0, 3, energy_factor = 3)
        self.assertLessEqual(three, two*(1 + 1e-6))

    def test_homogeneity(self):
        g = sierpinski_gasket(4)
        a = poincare_constant(g, 0, 4)
        b = poincare_constant(scale_weights(g, 5.0), 0, 4)
        self.assertAlmostEqual(a, b, delta = 1e-6*a)

    def test_Z1_audit(self):
        g = lattice(d = 1, side = 201)
        report = poincare_scaling_audit(g, 100, [4, 8, 16, 32], d_w = 2)
        self.log.debug('Z^1 constants: {}'.format(report.constants))
        self.assertTrue(report.verdict)
        self.assertGreater(report.details['constant_slope'], -0.5)
        self.assertEqual(report.notes, [])

    def test_Z2_overgenerous(self):
        """
        d_w = 3 on Z^2 still passes at three scales but the constants
        decay, which is noted
        """
        g = lattice(d = 2, side = 65)
        report = poincare_scaling_audit(g, 32*65 + 32, [4, 8, 16], d_w = 3)
        self.log.debug('Z^2 constants: {}'.format(report.constants))
        self.assertTrue(report.verdict)
        self.assertLess(report.details['constant_slope'], -0.5)
        self.assertEqual(len(report.notes), 1)

    def test_centers(self):
        g = lattice(d = 1, side = 101)
        one = poincare_scaling_audit(g, 50, [4, 8, 16], d_w = 2)
        many = poincare_scaling_audit(g, 50, [4, 8, 16], d_w = 2,
            centers = [40, 60, 50])
        self.assertEqual(many.details['centers'], [50, 40, 60])
        # translation invariance away from the ends
        np.testing.assert_allclose(many.constants, one.constants, rtol = 1e-5)


if __name__ == '__main__':
    logging.basicConfig(stream = sys.stderr, level=logging.DEBUG)
    unittest.main()

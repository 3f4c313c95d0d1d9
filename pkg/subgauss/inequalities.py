"""
inequalities.py

Created: Sun Sep 20 10:15:36 CEST 2026

Audits of the hypotheses of the heat kernel theorem on a finite
piece of graph: volume growth V(d_f), the (p0) condition, the
capacity upper bound Cap(d_w) and the Poincare inequality PI(d_w),
each measured across dyadic scales. Exponents are fitted by least
squares on log-log data (scipy.stats.linregress).

Example:
>>> from subgauss import sierpinski_gasket
>>> from subgauss.inequalities import volume_fit, capacity_scaling_audit
>>> g = sierpinski_gasket(level = 7)
>>> volume_fit(g, center = 0, radii = [4, 8, 16, 32, 64]).exponent
1.58...
>>> capacity_scaling_audit(g, 0, [4, 8, 16, 32], d_w = 2.3219).verdict
True
"""
import math
import logging
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
from scipy.stats import linregress

from subgauss.graphcore import VertexSet
from subgauss.linalg import SparseSymOperator, rayleigh_max_deflated
from subgauss.potentials import annulus_capacity, capacity
from subgauss.utils import (RangeError, DYADIC_RADII, SPREAD_THRESHOLD,
    parallel_map, spread)

logger = logging.getLogger(__name__)

#-------------------------------------------------------------------------
# Records
#-------------------------------------------------------------------------
@dataclass
class ExponentFit:
    """
    Least-squares fit log(value) = log_prefactor + exponent*log(radius).
    c_min and c_max are the extreme values of value/radius**exponent
    (e.g. the C_V estimate of a volume fit).
    """
    exponent: float
    log_prefactor: float
    r_squared: float
    radii: List[float]
    values: List[float]
    c_min: float = np.nan
    c_max: float = np.nan

    @classmethod
    def from_data(cls, radii, values):
        """
        Fits positive values against strictly increasing radii.
        """
        radii = np.asarray(radii, dtype = float)
        values = np.asarray(values, dtype = float)
        if radii.size < 3:
            raise ValueError('an exponent fit needs at least 3 points')
        if np.any(np.diff(radii) <= 0):
            raise ValueError('radii must be strictly increasing')
        if np.any(values <= 0):
            raise ValueError('fitted values must be positive')

        fit = linregress(np.log(radii), np.log(values))
        ratio = values/radii**fit.slope
        return cls(exponent = float(fit.slope),
            log_prefactor = float(fit.intercept),
            r_squared = float(fit.rvalue**2),
            radii = radii.tolist(), values = values.tolist(),
            c_min = float(ratio.min()), c_max = float(ratio.max()))

    def to_dict(self):
        return dict(exponent = self.exponent,
            log_prefactor = self.log_prefactor, r_squared = self.r_squared,
            radii = self.radii, values = self.values, c_min = self.c_min,
            c_max = self.c_max)

REPORT_RULES = ('spread', 'lower', 'upper', 'band')

@dataclass
class ConditionReport:
    """
    Per-scale constants of one condition and the verdict derived
    from them.

    rule
        'spread': all constants finite, positive and max/min <= threshold
        'lower' : min >= threshold
        'upper' : max <= threshold
        'band'  : max - min <= threshold
    checks
        extra named booleans that must all hold (e.g. a positive slope)
    components
        sub-reports that must all pass
    scale_free
        the condition has no per-scale constants (e.g. the gate); any
        other report without scales or components is inconclusive and
        fails
    """
    condition: str
    scales: list
    threshold: float
    rule: str = 'spread'
    checks: dict = field(default_factory = dict)
    components: list = field(default_factory = list)
    notes: list = field(default_factory = list)
    details: dict = field(default_factory = dict)
    scale_free: bool = False

    def __post_init__(self):
        if self.rule not in REPORT_RULES:
            raise ValueError('unknown rule {!r}'.format(self.rule))
        self.scales = [(r, float(c)) for r, c in self.scales]

    @property
    def constants(self):
        return np.array([c for _, c in self.scales], dtype = float)

    @property
    def min_constant(self):
        return float(self.constants.min()) if self.scales else np.nan

    @property
    def max_constant(self):
        return float(self.constants.max()) if self.scales else np.nan

    @property
    def inconclusive(self):
        return not (self.scales or self.components or self.scale_free)

    @property
    def verdict(self):
        c = self.constants
        if c.size == 0:
            own = bool(self.components) or (self.scale_free and
                bool(self.checks))
        elif not np.all(np.isfinite(c)):
            own = False
        elif self.rule == 'spread':
            own = spread(c) <= self.threshold
        elif self.rule == 'lower':
            own = c.size > 0 and c.min() >= self.threshold
        elif self.rule == 'upper':
            own = c.size > 0 and c.max() <= self.threshold
        elif self.rule == 'band':
            own = c.size > 0 and c.max() - c.min() <= self.threshold
        return bool(own and all(self.checks.values()) and
            all(sub.verdict for sub in self.components))

    def to_dict(self):
        out = dict(condition = self.condition,
            scales = [dict(r = r, constant = c) for r, c in self.scales],
            verdict = self.verdict, threshold = self.threshold,
            rule = self.rule)
        if self.inconclusive:
            out['inconclusive'] = True
        if self.scales:
            out['min_constant'] = self.min_constant
            out['max_constant'] = self.max_constant
        if self.checks:
            out['checks'] = dict(self.checks)
        if self.components:
            out['components'] = [sub.to_dict() for sub in self.components]
        if self.notes:
            out['notes'] = list(self.notes)
        if self.details:
            out['details'] = dict(self.details)
        return out

#-------------------------------------------------------------------------
# Radii
#-------------------------------------------------------------------------
def audit_radii(g, center, radii = None, factor = 1):
    """
    Returns the radii of an audit. Without radii, the dyadic defaults
    truncated to the audit window (eccentricity/4) are used; explicit
    radii are kept but a warning is logged when factor*r exceeds
    four windows, about the eccentricity of center.
    """
    window = g.audit_window(center)
    if radii is None:
        radii = [r for r in DYADIC_RADII if r <= window]
    else:
        radii = sorted(int(r) for r in radii)
        outside = [r for r in radii if factor*r > 4*window]
        if outside:
            logger.warning('radii %s reach past the eccentricity of '
                'vertex %d', outside, center)
    return radii

#-------------------------------------------------------------------------
# Volume
#-------------------------------------------------------------------------
def volume_fit(g, center, radii = None):
    """
    Fits V(x,r) ~ r**d_f over the radii; c_min/c_max of the result
    estimate the constant C_V.
    """
    radii = audit_radii(g, center, radii)
    values = [g.volume(center, r) for r in radii]
    fit = ExponentFit.from_data(radii, values)
    logger.info('volume fit at %d: d_f = %.4f (r^2 = %.4f)', center,
        fit.exponent, fit.r_squared)
    return fit

def volume_scaling_audit(g, center, radii, d_f, threshold = SPREAD_THRESHOLD):
    """
    V(d_f): per-scale constants V(x,r)/r**d_f with bounded spread.
    """
    radii = audit_radii(g, center, radii)
    scales = [(r, g.volume(center, r)/r**d_f) for r in radii]
    return ConditionReport('V(d_f)', scales, threshold)

def doubling_audit(g, center, radii, threshold = SPREAD_THRESHOLD):
    """
    Volume doubling: V(x,2r)/V(x,r) stays below the threshold.
    """
    radii = audit_radii(g, center, radii, factor = 2)
    scales = [(r, g.volume(center, 2*r)/g.volume(center, r)) for r in radii]
    return ConditionReport('VD', scales, threshold, rule = 'upper')

def p0_report(g):
    """
    The (p0) condition: min p(x,y) over neighbours is positive.
    """
    return ConditionReport('p0', [(0, g.p0_constant())], 0.0, rule = 'lower',
        checks = dict(positive = g.p0_constant() > 0))

#-------------------------------------------------------------------------
# Capacity
#-------------------------------------------------------------------------
def capacity_scaling_audit(g, center, radii, d_w,
    threshold = SPREAD_THRESHOLD):
    """
    Cap(d_w)<=: per-scale constants Cap(B(x,r), B(x,2r)^c) r**d_w/V(x,r);
    passes iff they are finite with spread <= threshold.
    """
    radii = audit_radii(g, center, radii, factor = 2)

    def constant(r):
        cap = annulus_capacity(g, center, r)
        c = cap.value*r**d_w/g.volume(center, r)
        logger.debug('Cap audit r=%d: cap=%.6g constant=%.6g', r, cap.value, c)
        return (r, c)

    report = ConditionReport('Cap(d_w)<=', parallel_map(constant, radii),
        threshold)
    logger.info('capacity audit at %d: verdict %s', center, report.verdict)
    return report

def decimation_walk_dimension(family = 'sierpinski', levels = (1, 2, 3)):
    """
    Independent renormalisation estimate of d_w for a self-similar
    family: the corner-to-corner resistance grows by a factor rho per
    level, the mass by the number of copies, hence
    d_w = log(copies*rho)/log(length factor).

    Returns
    -------
    A dictionary with the resistances per level, rho and d_w.
    """
    from subgauss import generators

    if family in ('sierpinski', 'gasket'):
        build, copies, length = generators.sierpinski_gasket, 3, 2
    elif family == 'vicsek':
        build, copies, length = generators.vicsek_tree, 5, 3
    else:
        raise ValueError('unknown family {!r}'.format(family))
    if len(levels) < 2:
        raise ValueError('need at least two levels')

    resistances = list()
    for level in levels:
        g = build(level)
        a, b = g.boundary[0], g.boundary[1]
        resistances.append(1.0/capacity(g, [a], [b]).value)
    rho = (resistances[-1]/resistances[0])**(1.0/(levels[-1] - levels[0]))
    d_w = math.log(copies*rho)/math.log(length)
    return dict(levels = list(levels), resistances = resistances, rho = rho,
        d_w = d_w)

#-------------------------------------------------------------------------
# Poincare
#-------------------------------------------------------------------------
class VarianceForm(object):
    """
    The quadratic form f -> sum_{x in S} (f(x) - f_S)^2 mu_x on the
    index space of a larger domain (S given by a boolean mask).
    """

    def __init__(self, mass, inside):
        self.weights = np.where(inside, mass, 0.0)
        self.total = self.weights.sum()

    def matvec(self, x):
        mean = np.dot(self.weights, x)/self.total
        return self.weights*(x - mean)

    def diagonal(self):
        return self.weights*(1.0 - self.weights/self.total)

def poincare_constant(g, center, r, energy_factor = 2):
    """
    Optimal C in sum_{B(x,r)} (f - f_B)^2 mu <= C sum_{edges in B(x,2r)}
    (df)^2 mu, over nonconstant f on B(x,2r). The factor r**d_w is not
    divided out.

    Arguments
    ---------
    energy_factor (int)
        the energy is taken over B(x, energy_factor*r); 2 by default.
    """
    if r == 0:
        return 0.0
    inner = g.ball(center, r)
    if len(inner) == 1:
        return 0.0
    outer = g.ball(center, energy_factor*r)

    den = SparseSymOperator(g, domain = outer, mode = 'neumann')
    mass = g.vertex_mass[outer.ids]
    num = VarianceForm(mass, inner.mask[outer.ids])
    ones = np.ones((outer.ids.size, 1))
    value, _ = rayleigh_max_deflated(num, den, deflate = ones)
    logger.debug('Poincare constant at %d, r=%d: %.8g', center, r, value)
    return value

def poincare_scaling_audit(g, center, radii, d_w,
    threshold = SPREAD_THRESHOLD, centers = None):
    """
    PI(d_w): per-scale constants poincare_constant(r)/r**d_w with
    bounded spread. With centers, each scale takes the worst constant
    over center and the extra centers.
    """
    radii = audit_radii(g, center, radii, factor = 2)
    sweep = [center] + [c for c in (centers or []) if c != center]

    def constant(r):
        value = max(poincare_constant(g, c, r) for c in sweep)
        return (r, value/r**d_w)

    report = ConditionReport('PI(d_w)', parallel_map(constant, radii),
        threshold)
    if len(sweep) > 1:
        report.details['centers'] = sweep
    c = report.constants
    if c.size >= 3 and np.all(c > 0):
        slope = linregress(np.log(radii), np.log(c)).slope
        report.details['constant_slope'] = float(slope)
        if slope < -0.5:
            report.notes.append('constants decay like r^{:.2f}: d_w looks '
                'over-generous'.format(slope))
    logger.info('Poincare audit at %d: verdict %s', center, report.verdict)
    return report

#-------------------------------------------------------------------------
# Hypotheses
#-------------------------------------------------------------------------
def hypothesis_gate(d_f, d_w):
    """
    True iff 2 <= d_w and d_f < 1 + d_w.
    """
    return bool(d_w >= 2 and d_f < 1 + d_w)

def hypothesis_report(d_f, d_w):
    report = ConditionReport('hypothesis-gate', [], 0.0,
        checks = dict(walk_dimension_at_least_2 = d_w >= 2,
        slow_volume_growth = d_f < 1 + d_w), scale_free = True)
    report.details.update(d_f = d_f, d_w = d_w)
    return report

"""
heatkernel.py

Created: Mon Sep 21 09:02:44 CEST 2026

Heat kernel rows h_n(x,.) = p_n(x,.)/mu of the discrete-time walk,
their decay exponents and the two-sided sub-Gaussian band check.
Band statistics always use the parity-smoothed kernel h_n + h_{n+1},
so bipartite graphs give no zeros in range.

Example:
>>> from subgauss import lattice
>>> from subgauss.heatkernel import heat_kernel_row
>>> g = lattice(d = 1, side = 101)
>>> heat_kernel_row(g, 50, 2).field[50] # p_2(0,0)/mu_0 = (1/2)/2
0.25
"""
import math
import logging
from dataclasses import dataclass

import numpy as np
import pandas as pd
from scipy.stats import linregress

from subgauss.graphcore import ScalarField
from subgauss.inequalities import ConditionReport, ExponentFit, audit_radii
from subgauss.potentials import ball_exit_time
from subgauss.utils import HeatKernelError, SPREAD_THRESHOLD, parallel_map

logger = logging.getLogger(__name__)

MASS_TOL = 1e-10
UNDERFLOW = 1e-300
MIN_R_SQUARED = 0.9

@dataclass
class HeatKernelRow:
    """
    h_n(source, .) as a field, or h_n + h_{n+1} when smoothed (then
    its mu-mass is 2 instead of 1).
    """
    source: int
    n: int
    field: ScalarField
    smoothed: bool = False

    @property
    def mass(self):
        return 2.0 if self.smoothed else 1.0

    def to_dict(self):
        return dict(source = self.source, n = self.n,
            smoothed = self.smoothed, values = self.field.values)

def _check_step(g, values, n):
    total = float(np.dot(values, g.vertex_mass))
    if abs(total - 1.0) > MASS_TOL:
        raise HeatKernelError('walk lost mass at step {}: {:.3e}'.format(n,
            total - 1.0))
    if values.min() < 0:
        raise HeatKernelError('negative heat kernel at step {}'.format(n))

def heat_kernel_rows(g, x, n_list, smoothed = False):
    """
    All rows h_n(x,.) for n in n_list from a single walk started at
    x. Mass conservation and nonnegativity are checked at every step.

    Returns
    -------
    A list of HeatKernelRow, sorted by n.
    """
    x = g.check_vertex(x)
    steps = sorted(set(int(n) for n in n_list))
    if steps and steps[0] < 0:
        raise ValueError('step counts must be nonnegative')
    wanted = set(steps)
    if smoothed:
        wanted |= set(n + 1 for n in steps)

    h = np.zeros(g.vertex_count)
    h[x] = 1.0/g.vertex_mass[x]
    kept = dict()
    last = max(wanted) if wanted else 0
    for n in range(last + 1):
        if n > 0:
            # h_{n}(x,.) = P h_{n-1}(x,.) by reversibility
            h = g.walk_step(h).values
            _check_step(g, h, n)
        if n in wanted:
            kept[n] = h.copy()

    rows = list()
    for n in steps:
        values = kept[n] + kept[n + 1] if smoothed else kept[n]
        rows.append(HeatKernelRow(source = x, n = n, smoothed = smoothed,
            field = ScalarField(values, tag = 'heat-kernel-row')))
    logger.debug('heat kernel rows at %d: n up to %d', x, last)
    return rows

def heat_kernel_row(g, x, n, smoothed = False):
    """
    The row h_n(x,.), obtained by n applications of the walk step to
    the start 1_x/mu_x.
    """
    return heat_kernel_rows(g, x, [n], smoothed = smoothed)[0]

def mixing_window(g, x, d_w):
    """
    Largest step count n with 3 n**(1/d_w) < distance from x to the
    outer boundary of the graph.
    """
    dist = g.boundary_distance(x)
    n = int(math.floor((dist/3.0)**d_w))
    while n > 0 and 3*n**(1.0/d_w) >= dist:
        n -= 1
    return n

def _window(g, x, n_list, d_w):
    n_list = sorted(set(int(n) for n in n_list))
    if d_w is None:
        return n_list
    limit = mixing_window(g, x, d_w)
    outside = [n for n in n_list if n > limit]
    if outside:
        logger.warning('steps %s exceed the mixing window %d at vertex %d',
            outside, limit, x)
    return [n for n in n_list if n <= limit]

def on_diagonal_fit(g, x, n_list, d_w = None):
    """
    Fits log (h_n + h_{n+1})(x,x) against log n; the slope estimates
    -d_f/d_w. With d_w, steps outside the mixing window are dropped.
    """
    n_list = _window(g, x, n_list, d_w)
    if len(n_list) < 3:
        raise ValueError('on-diagonal fit needs at least 3 step counts')
    rows = heat_kernel_rows(g, x, n_list, smoothed = True)
    fit = ExponentFit.from_data(n_list, [row.field[x] for row in rows])
    logger.info('on-diagonal decay at %d: %.4f', x, fit.exponent)
    return fit

def subgaussian_band_check(g, x, d_f, d_w, n_list, y_list,
    threshold = SPREAD_THRESHOLD):
    """
    Two-sided sub-Gaussian check. For every pair (n, y) with
    n >= max(1, d(x,y)) the statistic

        s = log[(h_n + h_{n+1})(x,y) V(x, n**(1/d_w))]

    is regressed on xi = (d(x,y)**d_w/n)**(1/(d_w-1)) as s = a - b xi.
    Passes iff b > 0, the fit has r^2 >= 0.9 and the residuals stay
    within a band of width log(threshold).

    Pairs whose kernel underflows below 1e-300 are excluded and listed
    in details['excluded']. d_f is only reported.
    """
    if d_w <= 1:
        raise ValueError('d_w must exceed 1')
    n_list = _window(g, x, n_list, d_w)
    dist = g.distances(x)
    y_list = [g.check_vertex(y) for y in y_list]
    rows = {row.n: row for row in heat_kernel_rows(g, x, n_list,
        smoothed = True)}

    pairs, excluded, skipped = list(), list(), list()
    for n in n_list:
        radius = int(math.floor(n**(1.0/d_w) + 1e-12))
        volume = g.volume(x, radius)
        for y in y_list:
            d = int(dist[y])
            if n < max(1, d):
                skipped.append(dict(n = n, y = y))
                continue
            h = rows[n].field[y]
            if h < UNDERFLOW:
                excluded.append(dict(n = n, y = y, h = h))
                continue
            pairs.append(dict(n = n, y = y, d = d,
                xi = (d**d_w/n)**(1.0/(d_w - 1)), s = math.log(h*volume)))
    if excluded:
        logger.warning('%d pairs excluded by the underflow guard',
            len(excluded))
    if len(pairs) < 3:
        raise ValueError('band check needs at least 3 admissible pairs')

    xi = np.array([p['xi'] for p in pairs])
    s = np.array([p['s'] for p in pairs])
    if np.ptp(xi) > 0:
        fit = linregress(xi, s)
        a, b, r2 = fit.intercept, -fit.slope, fit.rvalue**2
    else:
        a, b, r2 = s.mean(), 0.0, np.nan
    residuals = s - (a - b*xi)
    for p, res in zip(pairs, residuals):
        p['residual'] = float(res)

    report = ConditionReport('HK(d_w)', [(p['n'], p['residual'])
        for p in pairs], math.log(threshold), rule = 'band',
        checks = dict(positive_decay = bool(b > 0),
        linear_fit = bool(r2 >= MIN_R_SQUARED)))
    report.details.update(source = x, d_f = d_f, d_w = d_w, a = float(a),
        b = float(b), r_squared = float(r2), pairs = pairs,
        excluded = excluded, skipped = len(skipped))
    if np.isnan(r2):
        report.notes.append('all pairs share one xi: decay rate undetermined')
    logger.info('band check at %d: b = %.4f, r^2 = %.4f, band %.3f, '
        'verdict %s', x, b, r2, np.ptp(residuals), report.verdict)
    return report

def band_targets(g, x, d_w, n_max):
    """
    Default targets of the band check: one vertex (the smallest id)
    at each distance 0, 1, 2, 4, ... up to half the diffusive radius
    n_max**(1/d_w). Farther targets only pair with step counts close
    to the light cone n = d(x,y), where the walk follows geodesics
    and the kernel leaves the sub-Gaussian band.
    """
    reach = 0.5*n_max**(1.0/d_w)
    dist = g.distances(x)
    targets = list()
    d = 0
    while d <= reach:
        hits = np.flatnonzero(dist == d)
        if hits.size == 0:
            break
        targets.append(int(hits[0]))
        d = 2*d if d else 1
    return targets

def band_table(report):
    """
    The pairs of a band check as a DataFrame with columns
    n, y, d, xi, s, residual.
    """
    return pd.DataFrame(report.details['pairs'],
        columns = ['n', 'y', 'd', 'xi', 's', 'residual'])

def rows_table(g, rows):
    """
    Long-format DataFrame (n, y, d, h) of heat kernel rows.
    """
    frames = list()
    for row in rows:
        dist = g.distances(row.source)
        frames.append(pd.DataFrame({'n': row.n,
            'y': np.arange(g.vertex_count), 'd': dist,
            'h': row.field.values}))
    return pd.concat(frames, ignore_index = True)

def walk_dimension_fit(g, center, radii = None):
    """
    Fits the mean exit time from {d(center,.) < r} against r; the
    slope is the empirical walk dimension d_w.
    """
    radii = audit_radii(g, center, radii)

    def exit_from(r):
        value = ball_exit_time(g, center, r)[center]
        logger.debug('exit time at %d, r=%d: %.6g', center, r, value)
        return value

    fit = ExponentFit.from_data(radii, parallel_map(exit_from, radii))
    logger.info('walk dimension at %d: %.4f', center, fit.exponent)
    return fit

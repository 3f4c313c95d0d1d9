"""
prooftrace.py

Created: Mon Sep 21 14:37:20 CEST 2026

Numerical replay of the exit-time lower bound argument: level sets
of the exit time u of a ball, the clamped log-potential v, the energy
comparison between v and log u, Hausdorff 1-content bounds and the
mean value inequality for nonnegative superharmonic functions.

Balls where the walk is killed are open, {y: d(x,y) < r}, so that
u(j) = r**2 - j**2 on Z^1.

Example:
>>> from subgauss import lattice
>>> from subgauss.prooftrace import tentacle_trace
>>> g = lattice(d = 1, side = 201)
>>> trace = tentacle_trace(g, center = 100, r = 72, d_w = 2)
>>> trace.floor_ratio >= 0.9
True
"""
import math
import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.sparse import csgraph

from subgauss.graphcore import ScalarField, VertexSet
from subgauss.inequalities import ConditionReport, audit_radii
from subgauss.potentials import (ball_exit_time, capacity,
    equilibrium_potential, green_apply, is_superharmonic)
from subgauss.utils import (RangeError, TraceError, C1_MAX_EXPONENT,
    CONTENT_RATIO_FLOOR, INNER_FRACTION, K_SCAN, MEAN_VALUE_LIMIT,
    SHELL_FRACTION, SPREAD_THRESHOLD, parallel_map)

logger = logging.getLogger(__name__)

EXACT_DIAMETER = 256 # components up to this size get an exact diameter
COVER_CELLS = 20_000_000 # candidate centers x vertices in a cover search

#-------------------------------------------------------------------------
# Hausdorff 1-content
#-------------------------------------------------------------------------
def _as_set(g, S):
    S = S if isinstance(S, VertexSet) else VertexSet(g, S)
    if len(S) == 0:
        raise ValueError('the vertex set must be nonempty')
    return S

def _bfs(g, sources):
    dist = csgraph.shortest_path(g.conductance, method = 'D',
        directed = False, unweighted = True, indices = np.asarray(sources))
    return np.atleast_2d(dist)

def _components(g, ids):
    sub = g.conductance[ids][:, ids]
    ncomp, labels = csgraph.connected_components(sub, directed = False)
    return [ids[labels == k] for k in range(ncomp)]

def _diameter(g, comp):
    if comp.size == 1:
        return 0
    if comp.size <= EXACT_DIAMETER:
        return int(_bfs(g, comp)[:, comp].max())
    # double sweep, a lower bound of the diameter
    a = comp[int(np.argmax(_bfs(g, comp[:1])[0, comp]))]
    return int(_bfs(g, [a])[0, comp].max())

def greedy_cover(g, S):
    """
    Covers S by balls B(c, rho) with centers in S and radii in
    {0, 1, 2, 4, ...}, each time taking the ball with the most
    uncovered mass per unit cost rho + 1/2 (ties: smallest center,
    then smallest radius).

    Returns
    -------
    (balls, cost): the list of (center, radius) and sum(rho + 1/2).
    """
    S = _as_set(g, S)
    ids = S.ids
    step = max(1, int(math.ceil(ids.size*g.vertex_count/COVER_CELLS)))
    centers = ids[::step]
    dist = _bfs(g, centers)[:, ids]
    diameter = int(dist.max())

    radii = [0]
    while radii[-1] < diameter:
        radii.append(max(1, 2*radii[-1]))
    reach = [dist <= rho for rho in radii]

    uncovered = np.ones(ids.size, dtype = bool)
    mass = g.vertex_mass[ids]
    balls = list()
    while uncovered.any():
        weights = np.where(uncovered, mass, 0.0)
        best = None
        for k, rho in enumerate(radii):
            score = reach[k].dot(weights)/(rho + 0.5)
            i = int(np.argmax(score))
            if best is None or score[i] > best[0] or (score[i] == best[0] and
                    centers[i] < centers[best[1]]):
                best = (score[i], i, k)
        _, i, k = best
        balls.append((int(centers[i]), radii[k]))
        uncovered &= ~reach[k][i]
    cost = sum(rho + 0.5 for _, rho in balls)
    return balls, cost

def content1_bounds(g, S):
    """
    Lower and upper bounds of the Hausdorff 1-content of S. The lower
    bound is half the largest diameter of a connected piece of S, the
    upper bound the cost of the greedy cover.
    """
    S = _as_set(g, S)
    lower = max(_diameter(g, comp) for comp in _components(g, S.ids))/2.0
    _, upper = greedy_cover(g, S)
    return lower, upper

def random_connected_sets(g, count = 32, max_size = 64, seed = 0):
    """
    Seeded connected vertex sets grown from random vertices by adding
    random frontier neighbours; sizes are uniform in 2..max_size.
    """
    if max_size < 2:
        raise ValueError('max_size must be at least 2')
    rng = np.random.default_rng(seed)
    adjacency = g.adjacency
    out = list()
    for _ in range(count):
        size = int(rng.integers(2, max_size + 1))
        start = int(rng.integers(g.vertex_count))
        members = {start}
        frontier = [y for y, _ in adjacency[start]]
        while len(members) < size and frontier:
            y = frontier.pop(int(rng.integers(len(frontier))))
            if y in members:
                continue
            members.add(y)
            frontier.extend(z for z, _ in adjacency[y] if z not in members)
        out.append(VertexSet(g, sorted(members)))
    return out

def content_mass_check(g, d_f, sets = None, count = 32, max_size = 64,
    seed = 0, floor = CONTENT_RATIO_FLOOR):
    """
    Checks content >= c (m(S)**(1/d_f) min m(S)) over a sweep of
    sets: the ratio lower-bound/(m**(1/d_f) min m) must stay above
    floor. Without sets, random connected sets are used.

    scales holds (size of S, ratio).
    """
    if sets is None:
        sets = random_connected_sets(g, count, max_size, seed)
    elif isinstance(sets, VertexSet):
        sets = [sets]

    def ratio(S):
        S = _as_set(g, S)
        lower, _ = content1_bounds(g, S)
        m = S.measure
        return (len(S), lower/min(m**(1.0/d_f), m))

    report = ConditionReport('content', parallel_map(ratio, sets), floor,
        rule = 'lower')
    report.details['d_f'] = d_f
    logger.info('content check over %d sets: min ratio %.4g',
        len(report.scales), report.min_constant)
    return report

#-------------------------------------------------------------------------
# Exit time estimates
#-------------------------------------------------------------------------
def _log_field(g, u, D):
    values = np.zeros(g.vertex_count)
    inside = u.values[D.ids]
    if inside.min() <= 0:
        raise TraceError('exit time vanishes inside the inner ball')
    values[D.ids] = np.log(inside)
    return values

def exit_estimates_audit(g, center, radii, d_w,
        threshold = SPREAD_THRESHOLD):
    """
    Per scale, with u the exit time of the ball of radius r:
    (a) max u / r**d_w, (b) energy of log u on B(x,r/2) times
    r**d_w/V(x,r), (c) sum over B(x,r/2) of mu/u times r**d_w/V(x,r).
    Passes iff each of the three has spread <= threshold.
    """
    radii = audit_radii(g, center, radii)

    def scale(r):
        u = ball_exit_time(g, center, r)
        half = g.ball(center, r//2)
        volume = g.volume(center, r)
        logu = _log_field(g, u, half)
        a = u.values.max()/r**d_w
        b = g.energy(logu, within = half)*r**d_w/volume
        c = float(np.dot(g.vertex_mass[half.ids],
            1.0/u.values[half.ids]))*r**d_w/volume
        logger.debug('exit estimates at r=%d: %.4g %.4g %.4g', r, a, b, c)
        return a, b, c

    values = parallel_map(scale, radii)
    names = ('exit-upper', 'log-caccioppoli', 'inverse-exit')
    components = [ConditionReport(name, [(r, v[k]) for r, v in zip(radii,
        values)], threshold) for k, name in enumerate(names)]
    report = ConditionReport('exit-estimates', [], threshold,
        components = components)
    logger.info('exit time estimates at %d: verdict %s', center,
        report.verdict)
    return report

lemma31_audit = exit_estimates_audit

#-------------------------------------------------------------------------
# Tentacle trace
#-------------------------------------------------------------------------
@dataclass
class ProofTrace:
    """
    Level sets and energies of one run of the tentacle argument at
    (center, r). u, v and the sets E, F are kept for inspection but
    only their sizes are serialized.
    """
    center: int
    r: int
    d_w: float
    d_f: Optional[float]
    c1: float
    level: float
    e_measure: float
    shell_measure: float
    e_content: tuple
    f_content: Optional[tuple]
    k0: Optional[int]
    k: int
    left_energy: float
    log_energy: float
    budget: float
    floor_ratio: float
    level_sets: list
    f_connected: Optional[bool]
    reflected_capacity: Optional[float]
    left_ratio: Optional[float] = None
    budget_ratio: Optional[float] = None
    reflected_ratio: Optional[float] = None
    notes: list = field(default_factory = list)
    u: ScalarField = field(default = None, repr = False)
    v: ScalarField = field(default = None, repr = False)
    e_set: VertexSet = field(default = None, repr = False)
    f_set: VertexSet = field(default = None, repr = False)
    half: VertexSet = field(default = None, repr = False)

    def to_dict(self):
        return dict(center = self.center, r = self.r, d_w = self.d_w,
            d_f = self.d_f, c1 = self.c1, level = self.level,
            e_size = len(self.e_set), e_measure = self.e_measure,
            shell_measure = self.shell_measure,
            e_content = list(self.e_content),
            f_size = 0 if self.f_set is None else len(self.f_set),
            f_content = None if self.f_content is None else list(
            self.f_content), k0 = self.k0, k = self.k,
            left_energy = self.left_energy, log_energy = self.log_energy,
            budget = self.budget, left_ratio = self.left_ratio,
            budget_ratio = self.budget_ratio,
            reflected_capacity = self.reflected_capacity,
            reflected_ratio = self.reflected_ratio,
            floor_ratio = self.floor_ratio, f_connected = self.f_connected,
            level_sets = self.level_sets, notes = self.notes,
            invariants = self.invariants())

    def invariants(self):
        """
        Named booleans that every trace must satisfy. k0_bounded fails
        when F_K stays nonempty up to the scan limit.
        """
        v = self.v.values
        f_ids = self.f_set.ids
        return dict(
            v_in_unit = bool(np.all((v >= 0) & (v <= 1))),
            v_one_on_e = bool(np.all(v[self.e_set.ids] == 1.0)),
            v_zero_on_f = bool(np.all(v[f_ids] == 0.0)),
            e_f_disjoint = bool(self.e_set.isdisjoint(self.f_set)),
            energy_within_budget = bool(self.left_energy <=
                self.budget*(1 + 1e-12)),
            e_quarter_mass = bool(self.e_measure >= self.shell_measure/4),
            k0_bounded = self.k0 is None or self.k0 < K_SCAN)

def _joins(g, F, inner, outer_layer):
    # some connected piece of F meets both the inner ball and the layer
    for comp in _components(g, F.ids):
        if (np.intersect1d(comp, inner.ids).size and
                np.intersect1d(comp, outer_layer).size):
            return True
    return False

def tentacle_trace(g, center, r, d_w, d_f = None):
    """
    Replays the tentacle argument on the ball of radius r >= 36.

    With u the exit time and L = r**d_w/C1:
      E   = {y in B(x,r/18): u(y) >= L}, C1 the smallest power of 2
            with m(E) >= m(B(x,r/18))/4;
      F_K = {y in B(x,r/18): u(y) <= exp(-K-1) L}, K0 the largest
            K in 0..64 with F_K nonempty;
      v   = clip((K + 1 + log(u/L))/K, 0, 1) with K = max(K0, 1),
            so v = 1 on E and v = 0 on F_K.
    Energies are taken over edges inside B(x,r/2); the budget is the
    energy of log u there divided by K**2.

    Raises RangeError for r < 36 and TraceError when no C1 <= 2**16
    captures a quarter of the inner mass.
    """
    if r < INNER_FRACTION:
        raise RangeError('the trace needs r >= {}'.format(INNER_FRACTION))
    center = g.check_vertex(center)
    u = ball_exit_time(g, center, r)
    inner = g.ball(center, r//INNER_FRACTION)
    shell = g.ball(center, r//SHELL_FRACTION)
    half = g.ball(center, r//2)
    scale = float(r)**d_w
    values = u.values
    ushell = values[shell.ids]

    c1 = None
    for j in range(C1_MAX_EXPONENT + 1):
        level = scale/2**j
        E = VertexSet(g, shell.ids[ushell >= level])
        if E.measure >= shell.measure/4:
            c1 = float(2**j)
            break
    if c1 is None:
        raise TraceError('no C1 <= 2^{} gives m(E) >= m(B)/4 at r={}'.format(
            C1_MAX_EXPONENT, r))

    level_sets = list()
    k0 = None
    for K in range(K_SCAN + 1):
        F = shell.ids[ushell <= math.exp(-K - 1)*level]
        level_sets.append(dict(K = K, size = int(F.size),
            measure = float(g.vertex_mass[F].sum())))
        if F.size == 0:
            break
        k0 = K
    notes = list()
    if k0 == K_SCAN:
        notes.append('F_K nonempty up to the scan limit K={}'.format(K_SCAN))

    k = max(k0 or 0, 1)
    F = VertexSet(g, shell.ids[ushell <= math.exp(-k - 1)*level])
    logu = _log_field(g, u, half)
    ramp = (k + 1 + logu - math.log(level))/k
    vvalues = np.where(half.mask, np.clip(ramp, 0.0, 1.0), 0.0)
    # exact on the level sets, the ramp may be off by rounding there
    vvalues[E.ids] = 1.0
    vvalues[F.ids] = 0.0
    v = ScalarField(vvalues)

    left = g.energy(v, within = half)
    log_energy = g.energy(logu, within = half)
    budget = log_energy/k**2
    floor_ratio = float(values[inner.ids].min()/scale)

    f_content, f_connected, reflected = None, None, None
    if len(F):
        f_content = content1_bounds(g, F)
        layer = shell.ids[g.distances(center)[shell.ids] == r//SHELL_FRACTION]
        f_connected = _joins(g, F, inner, layer)
        if not f_connected:
            logger.warning('F_%d does not join B(x,r/36) to the shell '
                'layer (x=%d, r=%d)', k, center, r)
        sub, ids = g.induced_subgraph(half.ids)
        cap = capacity(sub, np.searchsorted(ids, E.ids),
            np.searchsorted(ids, F.ids))
        reflected = cap.value

    trace = ProofTrace(center = center, r = r, d_w = d_w, d_f = d_f, c1 = c1,
        level = level, e_measure = E.measure, shell_measure = shell.measure,
        e_content = content1_bounds(g, E), f_content = f_content, k0 = k0,
        k = k, left_energy = left, log_energy = log_energy, budget = budget,
        floor_ratio = floor_ratio, level_sets = level_sets,
        f_connected = f_connected, reflected_capacity = reflected,
        notes = notes, u = u, v = v, e_set = E, f_set = F, half = half)
    if d_f is not None:
        norm = float(r)**(d_f - d_w)
        trace.left_ratio = left/norm
        trace.budget_ratio = budget/norm
        if reflected is not None:
            trace.reflected_ratio = reflected/norm
    logger.debug('trace x=%d r=%d: C1=%g K0=%s floor %.4g', center, r, c1,
        k0, floor_ratio)
    return trace

def floor_radii(g, center):
    """
    36, 72, 144, ... up to half the eccentricity of the center.
    """
    limit = g.eccentricity(center)//2
    return [r for r in (INNER_FRACTION*2**k for k in range(12))
        if r <= limit]

def exit_floor_audit(g, center, radii, d_w, threshold = SPREAD_THRESHOLD):
    """
    Per-scale floor ratio inf_{B(x,r/36)} u / r**d_w from the
    tentacle trace; passes iff positive with spread <= threshold and
    every trace keeps its invariants. Without radii, floor_radii is
    used. No admissible radius leaves the report inconclusive.
    """
    if radii is None:
        radii = floor_radii(g, center)
    radii = sorted(int(r) for r in radii)
    traces = parallel_map(lambda r: tentacle_trace(g, center, r, d_w),
        radii)
    invariants = [t.invariants() for t in traces]
    report = ConditionReport('exit-floor', [(t.r, t.floor_ratio)
        for t in traces], threshold,
        checks = dict(positive_floor = bool(traces) and all(
        t.floor_ratio > 0 for t in traces),
        trace_invariants = bool(traces) and all(all(inv.values())
        for inv in invariants)))
    report.details['k0'] = [t.k0 for t in traces]
    report.details['c1'] = [t.c1 for t in traces]
    report.details['invariants'] = invariants
    if not traces:
        report.notes.append('no radius >= {} fits in the graph'.format(
            INNER_FRACTION))
    logger.info('exit floor at %d: verdict %s', center, report.verdict)
    return report

#-------------------------------------------------------------------------
# Mean value inequality
#-------------------------------------------------------------------------
def _superharmonic_samples(g, center, r, count, rng):
    D = g.ball(center, r - 1)
    if len(D) == g.vertex_count:
        raise RangeError('B({},{}) is the whole graph'.format(center, r - 1))
    yield 'constant', None, g.field(np.ones(g.vertex_count)), D
    yield 'exit-time', None, ball_exit_time(g, center, r), D
    outside = D.complement()
    for z in rng.choice(D.ids, size = min(count, len(D)), replace = False):
        z = int(z)
        delta = np.zeros(g.vertex_count)
        delta[z] = 1.0/g.vertex_mass[z]
        yield 'green', z, green_apply(g, D, delta), D
        yield 'equilibrium', z, equilibrium_potential(g, [z], outside), D

def mean_value_audit(g, center, radii, superharmonic_samples = 4, seed = 0,
    limit = MEAN_VALUE_LIMIT):
    """
    Mean value inequality for nonnegative superharmonic u on the ball
    of radius r: the harmonic mean of u over B(x,r/18) divided by
    inf_{B(x,r/36)} u. Samples per scale: the constant 1, the exit
    time, and for random poles z the Green function and the
    equilibrium potential of {z}.

    Passes iff the largest ratio is <= limit and every sample is
    superharmonic. Samples vanishing in B(x,r/18) are skipped, and so
    are radii where B(x,r/18) is the center alone (every ratio would
    be 1). Without radii, floor_radii is used.
    """
    if radii is None:
        radii = floor_radii(g, center)
    radii = sorted(int(r) for r in radii)
    trivial = [r for r in radii if len(g.ball(center, r//SHELL_FRACTION))
        == 1]
    if trivial:
        logger.warning('radii %s too small for the mean value audit',
            trivial)
    rng = np.random.default_rng(seed)
    samples, skipped, scales = list(), list(), list()
    for r in radii:
        if r in trivial:
            continue
        inner = g.ball(center, r//INNER_FRACTION)
        outer = g.ball(center, r//SHELL_FRACTION)
        mass = g.vertex_mass[outer.ids]
        worst = 0.0
        for kind, pole, u, D in _superharmonic_samples(g, center, r,
                superharmonic_samples, rng):
            values = u.values[outer.ids]
            if values.min() <= 0:
                skipped.append(dict(r = r, kind = kind, pole = pole))
                continue
            harmonic = outer.measure/np.dot(mass, 1.0/values)
            ratio = harmonic/u.values[inner.ids].min()
            ok = is_superharmonic(g, u, D)
            samples.append(dict(r = r, kind = kind, pole = pole,
                ratio = float(ratio), superharmonic = ok))
            worst = max(worst, ratio)
        logger.debug('mean value ratios at r=%d: max %.4g', r, worst)
        scales.append((r, worst))

    if skipped:
        logger.warning('%d superharmonic samples vanish near the center',
            len(skipped))
    report = ConditionReport('mean-value', scales, limit, rule = 'upper',
        checks = dict(superharmonic = all(s['superharmonic']
        for s in samples)))
    report.details.update(samples = samples, skipped = skipped,
        trivial_radii = trivial)
    if trivial:
        report.notes.append('B(x,r/{}) is the center alone for r in {}'
            .format(SHELL_FRACTION, trivial))
    logger.info('mean value audit at %d: verdict %s', center, report.verdict)
    return report

"""
potentials.py

Created: Sat Sep 19 14:21:09 CEST 2026

Capacities, equilibrium potentials, the Green operator and mean
exit times of the random walk killed outside a vertex set.

Example:
>>> from subgauss import lattice
>>> from subgauss.potentials import capacity, exit_time
>>> g = lattice(d = 1, side = 65)
>>> capacity(g, g.vertex_set([0]), g.vertex_set([64])).value # 1/64
0.015625
>>> D = g.ball(32, 7) # the segment {-7..7} around 32
>>> exit_time(g, D)[32] # (7+1)**2
64.0
"""
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from subgauss.graphcore import ScalarField, VertexSet, as_values
from subgauss.linalg import SparseSymOperator, cg_solve, default_max_iter
from subgauss.utils import (InfiniteCapacityError, RangeError,
    SUPERHARMONIC_RTOL)

logger = logging.getLogger(__name__)

@dataclass
class CapacityResult:
    """
    Cap(A,B) with the potential that realizes it. An infinite
    capacity (overlapping plates) has infinite=True, value=None and
    no potential.
    """
    value: Optional[float]
    potential: Optional[ScalarField]
    residual: float = 0.0
    infinite: bool = False

    @classmethod
    def infinity(cls):
        return cls(value = None, potential = None, residual = 0.0,
            infinite = True)

    @property
    def resistance(self):
        if self.infinite:
            return 0.0
        return np.inf if self.value == 0 else 1.0/self.value

    def to_dict(self):
        return dict(value = 'inf' if self.infinite else self.value,
            residual = self.residual)

def _as_set(g, A):
    return A if isinstance(A, VertexSet) else VertexSet(g, A)

def _solve(op, rhs):
    # dense enough to need more than the default budget on long paths
    return cg_solve(op, rhs, max_iter = max(default_max_iter(op.dim),
        4*op.dim))

def equilibrium_potential(g, A, B):
    """
    The minimizer of the energy among f with f = 1 on A and f = 0
    on B: harmonic off A and B, i.e. P(hit A before B).

    Arguments
    ---------
    g (WeightedGraph)
    A, B (VertexSet or iterables of ids)
        disjoint, nonempty plates

    Raises InfiniteCapacityError when A and B intersect.
    """
    A, B = _as_set(g, A), _as_set(g, B)
    if len(A) == 0 or len(B) == 0:
        raise ValueError('capacity plates must be nonempty')
    if not A.isdisjoint(B):
        raise InfiniteCapacityError('plates intersect: capacity is infinite')

    values = np.zeros(g.vertex_count)
    values[A.ids] = 1.0
    free = A.union(B).complement()
    if len(free) == 0:
        return ScalarField(values, tag = 'potential',
            info = dict(residual = 0.0, iterations = 0))

    op = SparseSymOperator(g, domain = free, mode = 'dirichlet')
    # conductance from each free vertex into A
    rhs = np.asarray(g.conductance[free.ids][:, A.ids].sum(axis = 1)).ravel()
    sol = _solve(op, rhs)
    values[free.ids] = np.clip(sol.values, 0.0, 1.0)
    return ScalarField(values, tag = 'potential', info = sol.info)

def capacity(g, A, B):
    """
    Cap(A,B) = inf{E(f,f): f = 1 on A, f = 0 on B}, with inf of the
    empty set = +infinity when the plates intersect.
    """
    try:
        potential = equilibrium_potential(g, A, B)
    except InfiniteCapacityError:
        logger.debug('overlapping plates, infinite capacity')
        return CapacityResult.infinity()
    value = g.energy(potential)
    return CapacityResult(value = value, potential = potential,
        residual = potential.info.get('residual', 0.0))

def effective_resistance(g, x, y):
    """
    Effective resistance between two vertices, 1/Cap({x},{y}).
    """
    x, y = g.check_vertex(x), g.check_vertex(y)
    if x == y:
        return 0.0
    return capacity(g, [x], [y]).resistance

def annulus_capacity(g, x, r):
    """
    Cap(B(x,r), B(x,2r)^c), the capacity of the annulus at scale r.
    The inner plate is the closed ball, the outer plate is
    {y: d(x,y) >= 2r}, the complement of the open ball (on Z^1 the
    value is 2/r).

    Raises RangeError when no vertex lies at distance 2r.
    """
    if r < 1:
        raise RangeError('annulus radius must be at least 1')
    inner = g.ball(x, r)
    outer = g.ball(x, 2*r - 1)
    if len(outer) == g.vertex_count:
        raise RangeError('no vertex at distance {} from {}'.format(2*r, x))
    return capacity(g, inner, outer.complement())

def green_apply(g, D, f):
    """
    The Green operator of D: solves L u = f mu on D with u = 0 off D
    (mass-weighted right side), so that green_apply(D, 1) is the mean
    exit time from D.

    Arguments
    ---------
    g (WeightedGraph)
    D (VertexSet)
        a proper subset of the vertices
    f (float or full-length field)
    """
    D = _as_set(g, D)
    if len(D) == g.vertex_count:
        raise RangeError('the walk never exits the whole vertex set')
    if len(D) == 0:
        raise ValueError('domain must be nonempty')
    op = SparseSymOperator(g, domain = D, mode = 'dirichlet')
    rhs = op.mass_rhs(f)
    sol = _solve(op, rhs)
    field = op.extend(sol.values)
    field.info.update(sol.info)
    return field

def exit_time(g, D):
    """
    Mean exit time E(x) of the walk from D: E = 1 + PE on D and
    E = 0 off D.
    """
    E = green_apply(g, D, 1.0)
    E.tag = 'exit-time'
    return E

def ball_exit_time(g, x, r):
    """
    Mean exit time of the walk from the open ball {y: d(x,y) < r},
    i.e. the first time it reaches distance r. On Z^1 this is
    r**2 - j**2 at distance j.

    Raises RangeError when the open ball is the whole graph.
    """
    if r < 1:
        raise RangeError('exit radius must be at least 1')
    return exit_time(g, g.ball(x, r - 1))

def is_superharmonic(g, u, D, tol = None):
    """
    True iff u(x) >= Pu(x) - tol for every x in D. The tolerance
    defaults to 1e-9 max|u|.
    """
    D = _as_set(g, D)
    values = as_values(u, g.vertex_count)
    if tol is None:
        tol = SUPERHARMONIC_RTOL*np.abs(values).max()
    Pu = g.walk_step(values).values
    defect = (Pu - values)[D.ids]
    return bool(defect.size == 0 or defect.max() <= tol)

def simulate_exit_times(g, D, start, walks = 10000, seed = 0,
    max_steps = 10**8):
    """
    Monte Carlo estimate of the mean exit time from D started at
    start, with all walkers moving together.

    Returns
    -------
    A dictionary with 'mean', 'sem' (standard error) and 'walks'.
    """
    D = _as_set(g, D)
    start = g.check_vertex(start)
    inside = D.mask
    P = g.transition_matrix()
    # key = row + cumulative probability inside the row, so that
    # searchsorted(key, x + U) samples the next vertex of x
    rows = np.repeat(np.arange(g.vertex_count), np.diff(P.indptr))
    total = np.concatenate(([0.0], np.cumsum(P.data)))
    cum = total[1:] - total[P.indptr[:-1]][rows]
    cum[P.indptr[1:] - 1] = 1.0
    key = rows + cum

    rng = np.random.default_rng(seed)
    pos = np.full(walks, start, dtype = np.int64)
    steps = np.zeros(walks, dtype = np.int64)
    active = inside[pos]
    nsteps = 0
    while active.any() and nsteps < max_steps:
        idx = np.flatnonzero(active)
        u = rng.random(idx.size)
        slot = np.searchsorted(key, pos[idx] + u, side = 'right')
        pos[idx] = P.indices[slot]
        steps[idx] += 1
        active[idx] = inside[pos[idx]]
        nsteps += 1

    mean = float(steps.mean())
    sem = float(steps.std(ddof = 1)/np.sqrt(walks))
    logger.debug('simulated %d walks: mean exit %.3f +- %.3f', walks, mean,
        sem)
    return dict(mean = mean, sem = sem, walks = walks)

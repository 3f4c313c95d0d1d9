"""
linalg.py

Created: Sat Sep 19 11:40:27 CEST 2026

Sparse symmetric operators and the two solvers behind capacities,
exit times and Poincare constants: a Jacobi-preconditioned conjugate
gradient and a deflated power iteration for the largest generalized
Rayleigh quotient.

Example:
>>> from subgauss.linalg import SparseSymOperator, cg_solve
>>> op = SparseSymOperator(g, domain = g.ball(0, 4), mode = 'dirichlet')
>>> u = cg_solve(op, op.mass_rhs(1.0)) # exit time of B(0,4)
"""
import math
import logging

import numpy as np
from scipy import sparse

from subgauss.graphcore import ScalarField, VertexSet, as_values
from subgauss.utils import ConvergenceError, CG_REL_TOL, RAYLEIGH_TOL

logger = logging.getLogger(__name__)

OPERATOR_MODES = ('dirichlet', 'mass', 'neumann')

class SparseSymOperator(object):
    """
    A symmetric operator restricted to a vertex set D, in one of
    three modes:

    * dirichlet: Lf(x) = sum_y mu(x,y)(f(x)-f(y)) for x in D, with f = 0
      off D (the walk is killed when it leaves D).
    * mass: f(x) mu_x on D.
    * neumann: the Laplacian of the subgraph induced on D (only edges
      with both endpoints in D, the walk is reflected).

    Vectors live on D, indexed like domain.ids.
    """

    def __init__(self, graph, domain = None, mode = 'dirichlet'):
        """
        Arguments
        ---------
        graph (WeightedGraph)
            the weighted graph
        domain (VertexSet or iterable, optional)
            the restriction set D; all vertices by default
        mode (str)
            'dirichlet', 'mass' or 'neumann'
        """
        if mode not in OPERATOR_MODES:
            raise ValueError('mode must be one of {}'.format(OPERATOR_MODES))
        if domain is None:
            domain = VertexSet(graph, np.arange(graph.vertex_count))
        elif not isinstance(domain, VertexSet):
            domain = VertexSet(graph, domain)

        self.graph = graph
        self.domain = domain
        self.mode = mode

        ids = domain.ids
        mass = graph.vertex_mass[ids]
        if mode == 'mass':
            self.matrix = sparse.diags(mass).tocsr()
        else:
            W = graph.conductance[ids][:, ids]
            if mode == 'dirichlet':
                diag = mass
            else:
                diag = np.asarray(W.sum(axis = 1)).ravel()
            self.matrix = (sparse.diags(diag) - W).tocsr()

    dim = property(lambda self: self.domain.ids.size)

    def matvec(self, x):
        return self.matrix.dot(x)

    def diagonal(self):
        return self.matrix.diagonal()

    def quadratic(self, x):
        x = np.asarray(x, dtype = float)
        return float(np.dot(x, self.matvec(x)))

    def restrict(self, f):
        """
        Values of a full-length field on the domain.
        """
        return as_values(f, self.graph.vertex_count)[self.domain.ids]

    def extend(self, x, tag = 'generic'):
        """
        Full-length field equal to x on the domain and 0 elsewhere.
        """
        values = np.zeros(self.graph.vertex_count)
        values[self.domain.ids] = x
        return ScalarField(values, tag = tag)

    def mass_rhs(self, f):
        """
        Right side f(x) mu_x on the domain; f is a scalar or a
        full-length field.
        """
        mass = self.graph.vertex_mass[self.domain.ids]
        if np.isscalar(f):
            return f*mass
        return self.restrict(f)*mass

    def symmetry_defect(self, trials = 4, seed = 0):
        """
        Largest relative |<Lx,y> - <x,Ly>| over seeded random vector pairs.
        """
        rng = np.random.default_rng(seed)
        worst = 0.0
        for _ in range(trials):
            x, y = rng.standard_normal((2, self.dim))
            lhs = np.dot(self.matvec(x), y)
            rhs = np.dot(x, self.matvec(y))
            scale = max(abs(lhs), abs(rhs), 1.0)
            worst = max(worst, abs(lhs - rhs)/scale)
        return worst

class _ShiftedOperator(object):
    """
    den + sigma * projector onto span(Z), used to solve on the
    orthogonal complement of a null space Z of den.
    """

    def __init__(self, den, Z, sigma):
        self.den = den
        self.Q, _ = np.linalg.qr(Z)
        self.sigma = sigma
        self._diag = den.diagonal() + sigma*(self.Q**2).sum(axis = 1)

    def matvec(self, x):
        return self.den.matvec(x) + self.sigma*self.Q.dot(self.Q.T.dot(x))

    def diagonal(self):
        return self._diag

    def project(self, x):
        return x - self.Q.dot(self.Q.T.dot(x))

class _MatrixOperator(object):
    """
    Wraps a scipy sparse or dense symmetric matrix.
    """

    def __init__(self, matrix):
        self.matrix = matrix

    def matvec(self, x):
        return self.matrix.dot(x)

    def diagonal(self):
        if sparse.issparse(self.matrix):
            return self.matrix.diagonal()
        return np.diag(self.matrix)

def _as_operator(op):
    if hasattr(op, 'matvec'):
        return op
    return _MatrixOperator(op)

def default_max_iter(dim):
    return int(20*math.sqrt(dim) + 200)

def cg_solve(op, rhs, rel_tol = CG_REL_TOL, max_iter = None, x0 = None):
    """
    Solves L x = rhs for a symmetric positive definite operator by
    conjugate gradients with Jacobi preconditioning.

    Arguments
    ---------
    op (SparseSymOperator, matrix or any object with matvec/diagonal)
        the positive definite operator
    rhs (array or ScalarField)
        the right side, on the operator's domain
    rel_tol (float)
        stop when ||L x - rhs|| <= rel_tol ||rhs||
    max_iter (int)
        defaults to 20 sqrt(dim) + 200

    Returns
    -------
    A ScalarField on the operator's domain; info holds 'residual'
    (relative), 'iterations' and 'monotone' (residual norms never
    increased).
    """
    op = _as_operator(op)
    b = as_values(rhs).copy()
    dim = b.size
    if max_iter is None:
        max_iter = default_max_iter(dim)

    bnorm = np.linalg.norm(b)
    if bnorm == 0:
        return ScalarField(np.zeros(dim), info = dict(residual = 0.0,
            iterations = 0, monotone = True))

    diag = op.diagonal()
    if np.any(diag <= 0):
        raise ValueError('operator has a nonpositive diagonal entry')
    Minv = 1.0/diag

    xk = np.zeros(dim) if x0 is None else np.array(x0, dtype = float)
    rk = b - op.matvec(xk)
    zk = Minv*rk
    dk = zk.copy()
    rz = np.dot(rk, zk)

    history = [np.linalg.norm(rk)/bnorm]
    k = 0
    while history[-1] > rel_tol and k < max_iter:
        Adk = op.matvec(dk)
        curvature = np.dot(dk, Adk)
        if curvature <= 0:
            raise ConvergenceError('operator is not positive definite',
                residual = history[-1], iterations = k)
        alpha = rz/curvature
        xk += alpha*dk
        rk -= alpha*Adk
        zk = Minv*rk
        rz_new = np.dot(rk, zk)
        dk = zk + (rz_new/rz)*dk
        rz = rz_new
        k += 1
        history.append(np.linalg.norm(rk)/bnorm)

    if history[-1] > rel_tol:
        raise ConvergenceError('CG did not converge in {} iterations '
            '(residual {:.3e})'.format(k, history[-1]),
            residual = history[-1], iterations = k)

    monotone = bool(np.all(np.diff(history) <= 1e-14))
    if not monotone:
        logger.warning('CG residual norms were not monotone (%d iterations)',
            k)
    logger.debug('CG: dim %d, %d iterations, residual %.2e', dim, k,
        history[-1])
    return ScalarField(xk, info = dict(residual = history[-1], iterations = k,
        monotone = monotone))

def rayleigh_max_deflated(num, den, deflate = None, rel_tol = RAYLEIGH_TOL,
    max_iter = 500, seed = 0, solve_tol = None):
    """
    Largest value of num(f)/den(f) over f orthogonal to the columns
    of deflate, by power iteration on den^{-1} num with CG solves.

    Arguments
    ---------
    num, den (operators or symmetric matrices)
        quadratic forms f -> <f, num f> and f -> <f, den f>; den must be
        positive definite on the complement of deflate.
    deflate (array n x k, optional)
        a null space of den (e.g. the constants for an energy form);
        num must map it to zero as well.
    rel_tol (float)
        stop when the value changes less than rel_tol relatively
    seed (int)
        seed of the random start vector

    Returns
    -------
    (value, argvec): the maximal quotient and a maximizing ScalarField.
    """
    num = _as_operator(num)
    den = _as_operator(den)
    dim = den.diagonal().size
    if solve_tol is None:
        solve_tol = min(CG_REL_TOL, rel_tol*1e-2)

    if deflate is not None:
        Z = np.asarray(deflate, dtype = float).reshape(dim, -1)
        leak = np.linalg.norm(np.column_stack([den.matvec(z) for z in Z.T]))
        if leak > 1e-8*max(1.0, np.abs(den.diagonal()).max())*math.sqrt(dim):
            raise ValueError('deflate must be a null space of den')
        sigma = float(np.mean(den.diagonal())) or 1.0
        solver = _ShiftedOperator(den, Z, sigma)
        project = solver.project
    else:
        solver = den
        project = lambda x: x

    rng = np.random.default_rng(seed)
    x = project(rng.standard_normal(dim))
    if np.linalg.norm(x) == 0:
        return 0.0, ScalarField(x)
    x /= np.linalg.norm(x)

    value = None
    for k in range(1, max_iter + 1):
        y = project(num.matvec(x))
        if np.linalg.norm(y) == 0:
            # num vanishes on the complement of deflate
            return 0.0, ScalarField(x, info = dict(iterations = k))
        x = project(cg_solve(solver, y, rel_tol = solve_tol,
            max_iter = max(default_max_iter(dim), 4*dim)).values)
        x /= np.linalg.norm(x)
        new = np.dot(x, num.matvec(x))/np.dot(x, den.matvec(x))
        if value is not None and abs(new - value) <= rel_tol*abs(new):
            logger.debug('power iteration converged: %.10g after %d steps',
                new, k)
            return float(new), ScalarField(x, info = dict(iterations = k))
        value = new

    raise ConvergenceError('power iteration did not converge in {} '
        'iterations'.format(max_iter), residual = np.nan,
        iterations = max_iter)

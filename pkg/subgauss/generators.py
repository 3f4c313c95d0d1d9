"""
generators.py

Created: Sun Sep 20 08:47:52 CEST 2026

Graph families with known exponents and the transformations used
to test stability: weight perturbation, scaling and edge subdivision
(a discrete stand-in for the cable system).

Fractals are assembled from exact integer coordinates, so shared
vertices of neighbouring copies are merged by networkx node identity.

Example:
>>> from subgauss.generators import sierpinski_gasket, subdivide
>>> g = sierpinski_gasket(level = 2)
>>> g.vertex_count, g.edge_count
(15, 27)
>>> subdivide(g, k = 3).vertex_count # two new vertices per edge
69
"""
import logging

import numpy as np
import networkx as nx

from subgauss.graphcore import WeightedGraph
from subgauss.utils import GraphError, MAX_VERTICES

logger = logging.getLogger(__name__)

def lattice(d, side):
    """
    The box {0..side-1}^d of Z^d with nearest-neighbour unit weights.
    Vertex ids follow C order of the coordinates; the box faces are
    declared as boundary.

    Arguments
    ---------
    d (int)
        dimension, 1, 2 or 3
    side (int)
        number of vertices along each axis (>= 2)
    """
    if d not in (1, 2, 3):
        raise GraphError('lattice dimension must be 1, 2 or 3')
    if side < 2:
        raise GraphError('lattice side must be at least 2')
    if side**d > MAX_VERTICES:
        raise GraphError('{}^{} vertices exceed the size guard'.format(
            side, d))

    shape = (side,)*d
    ids = np.arange(side**d).reshape(shape)
    edges = list()
    for axis in range(d):
        lo = [slice(None)]*d
        hi = [slice(None)]*d
        lo[axis] = slice(0, side - 1)
        hi[axis] = slice(1, side)
        tails = ids[tuple(lo)].ravel()
        heads = ids[tuple(hi)].ravel()
        edges.append(np.column_stack((tails, heads, np.ones(tails.size))))
    edges = np.concatenate(edges)

    coords = np.column_stack(np.unravel_index(np.arange(side**d), shape))
    onface = np.any((coords == 0) | (coords == side - 1), axis = 1)
    return WeightedGraph.from_edges(side**d, edges, coords = coords,
        boundary = np.flatnonzero(onface))

def _shifted(edges, shift):
    dx, dy = shift
    return [((a + dx, b + dy), (c + dx, e + dy)) for (a, b), (c, e) in edges]

def _from_coordinate_edges(edges, boundary_nodes):
    G = nx.Graph()
    G.add_edges_from(edges, weight = 1.0)
    return WeightedGraph.from_networkx(G, boundary_nodes = boundary_nodes)

def sierpinski_gasket(level):
    """
    The graphical Sierpinski gasket of the given level, unit weights.
    Level 0 is a triangle; level L+1 glues three copies of level L at
    their corners. The three outer corners are the boundary, the corner
    (0,0) gets id 0.

    Vertex count (3**(level+1) + 3)/2, edge count 3**(level+1).
    """
    if not (1 <= level <= 10):
        raise GraphError('gasket level must be between 1 and 10')

    edges = [((0, 0), (1, 0)), ((1, 0), (0, 1)), ((0, 1), (0, 0))]
    for k in range(level):
        side = 2**k
        edges = (edges + _shifted(edges, (side, 0)) +
            _shifted(edges, (0, side)))
    side = 2**level
    corners = [(0, 0), (side, 0), (0, side)]
    g = _from_coordinate_edges(edges, corners)
    logger.debug('gasket level %d: %d vertices, %d edges', level,
        g.vertex_count, g.edge_count)
    return g

def vicsek_tree(level):
    """
    The graphical Vicsek tree (plus sign of plus signs), unit weights.
    Level 1 is a plus sign on 5 vertices; level L+1 places five copies
    of level L on a plus sign, sharing tips. The four outer tips are
    the boundary.

    Vertex count 4*5**(level-1) + 1.
    """
    if not (1 <= level <= 8):
        raise GraphError('Vicsek level must be between 1 and 8')

    edges = [((1, 1), (0, 1)), ((1, 1), (2, 1)), ((1, 1), (1, 0)),
        ((1, 1), (1, 2))]
    side = 2
    for _ in range(level - 1):
        edges = (_shifted(edges, (side, side)) + _shifted(edges, (0, side)) +
            _shifted(edges, (2*side, side)) + _shifted(edges, (side, 0)) +
            _shifted(edges, (side, 2*side)))
        side *= 3
    half = side//2
    tips = [(0, half), (side, half), (half, 0), (half, side)]
    g = _from_coordinate_edges(edges, tips)
    logger.debug('Vicsek level %d: %d vertices', level, g.vertex_count)
    return g

def perturb_weights(g, lo, hi, seed = 0):
    """
    Multiplies every edge weight by an independent uniform draw from
    [lo, hi]; the topology is unchanged.
    """
    if lo <= 0 or hi < lo:
        raise GraphError('need 0 < lo <= hi')
    tails, heads, weights = g.edge_arrays()
    rng = np.random.default_rng(seed)
    factors = rng.uniform(lo, hi, size = weights.size)
    edges = np.column_stack((tails, heads, weights*factors))
    return WeightedGraph.from_edges(g.vertex_count, edges, coords = g.coords,
        boundary = g.boundary)

def scale_weights(g, c):
    """
    Multiplies every edge weight by c > 0.
    """
    return perturb_weights(g, c, c)

def subdivide(g, k):
    """
    Replaces each edge of conductance w by a path of k edges of
    conductance k*w, so the series conductance of the path is w.
    Original vertices keep their ids; new ids are appended edge by edge.
    """
    if k < 2 or int(k) != k:
        raise GraphError('subdivision factor must be an integer >= 2')
    tails, heads, weights = g.edge_arrays()
    m = tails.size
    n = g.vertex_count
    total = n + m*(k - 1)
    if total > MAX_VERTICES:
        raise GraphError('{} vertices exceed the size guard'.format(total))

    # path of edge e: tails[e], n + e(k-1), ..., n + e(k-1) + k-2, heads[e]
    inner = n + np.arange(m*(k - 1)).reshape(m, k - 1)
    chain = np.column_stack((tails, inner, heads))
    edges = np.column_stack((chain[:, :-1].ravel(), chain[:, 1:].ravel(),
        np.repeat(k*weights, k)))
    return WeightedGraph.from_edges(total, edges, boundary = g.boundary)

def family(name, **params):
    """
    Builds a named family: 'lattice' (d, side), 'sierpinski' or
    'gasket' (level), 'vicsek' (level).
    """
    if name == 'lattice':
        return lattice(int(params.get('d', 2)), int(params.get('side', 65)))
    if name in ('sierpinski', 'gasket'):
        return sierpinski_gasket(int(params.get('level', 7)))
    if name == 'vicsek':
        return vicsek_tree(int(params.get('level', 5)))
    raise GraphError('unknown family {!r}'.format(name))

"""
graphcore.py

Created: Sat Sep 19 10:03:18 CEST 2026

Contains the immutable weighted graph (G, mu) with its vertex
measure, closed balls, Dirichlet energy and random walk operator.

Example:
>>> from subgauss import WeightedGraph
>>> g = WeightedGraph.from_edges(3, [(0, 1, 1.0), (1, 2, 1.0)])
>>> g.ball(center = 1, r = 1).measure # mu_0 + mu_1 + mu_2
4.0
>>> g.energy([1, 0.5, 0]) # 1/4 + 1/4
0.5
>>> g.p0_constant()
0.5
"""
import logging
from dataclasses import dataclass, field

import numpy as np
import pandas as pd
import networkx as nx
from scipy import sparse
from scipy.sparse import csgraph

from subgauss.utils import GraphError, MAX_VERTICES

logger = logging.getLogger(__name__)

FIELD_TAGS = ('potential', 'exit-time', 'heat-kernel-row', 'generic')

@dataclass
class ScalarField:
    """
    A real function on the vertices (potentials, exit times, heat
    kernel rows). The tag names its meaning; info keeps solver
    diagnostics such as the final residual.
    """
    values: np.ndarray
    tag: str = 'generic'
    info: dict = field(default_factory = dict)

    def __post_init__(self):
        self.values = np.array(self.values, dtype = float).ravel()
        if self.tag not in FIELD_TAGS:
            raise ValueError('unknown field tag {!r}'.format(self.tag))
        if not np.all(np.isfinite(self.values)):
            raise ValueError('ScalarField entries must be finite')

    def __len__(self):
        return self.values.size

    def __getitem__(self, index):
        return self.values[index]

    def __array__(self, dtype = None, copy = None):
        if dtype is None:
            return self.values
        return self.values.astype(dtype)

def as_values(f, n = None):
    """
    Returns the NumPy vector behind a ScalarField or an array-like,
    checking its length against n when given.
    """
    values = f.values if isinstance(f, ScalarField) else np.asarray(f,
        dtype = float).ravel()
    if n is not None and values.size != n:
        raise GraphError('field has {} entries, graph has {} vertices'.format(
            values.size, n))
    return values

class VertexSet(object):
    """
    A set of vertex ids of one graph, kept sorted, together with its
    measure mu(A) = sum of mu_x over A.
    """

    def __init__(self, graph, ids):
        """
        Arguments
        ---------
        graph (WeightedGraph)
            the graph the ids refer to
        ids (iterable of int)
            vertex ids; duplicates are merged
        """
        ids = np.unique(np.asarray(list(ids) if not isinstance(ids,
            np.ndarray) else ids, dtype = np.int64))
        if ids.size and (ids[0] < 0 or ids[-1] >= graph.vertex_count):
            raise GraphError('vertex id out of range 0..{}'.format(
                graph.vertex_count - 1))
        self._graph = graph
        self.ids = ids
        self.measure = float(graph.vertex_mass[ids].sum())

    @property
    def mask(self):
        """
        Boolean indicator over all vertices of the graph.
        """
        mymask = np.zeros(self._graph.vertex_count, dtype = bool)
        mymask[self.ids] = True
        return mymask

    def complement(self):
        return VertexSet(self._graph, np.flatnonzero(~self.mask))

    def union(self, other):
        return VertexSet(self._graph, np.union1d(self.ids, other.ids))

    def intersection(self, other):
        return VertexSet(self._graph, np.intersect1d(self.ids, other.ids))

    def difference(self, other):
        return VertexSet(self._graph, np.setdiff1d(self.ids, other.ids))

    def isdisjoint(self, other):
        return np.intersect1d(self.ids, other.ids).size == 0

    def __len__(self):
        return self.ids.size

    def __iter__(self):
        return iter(self.ids.tolist())

    def __contains__(self, vertex):
        i = np.searchsorted(self.ids, vertex)
        return i < self.ids.size and self.ids[i] == vertex

    def __repr__(self):
        return 'VertexSet(size={}, measure={:g})'.format(len(self),
            self.measure)

class WeightedGraph(object):
    """
    A finite, connected weighted graph (G, mu) with symmetric
    positive conductances mu(x,y) and vertex masses mu_x. The object
    is immutable after construction and can be shared across threads.
    """

    def __init__(self, conductance, coords = None, boundary = None):
        """
        Arguments
        ---------
        conductance (sparse or dense matrix)
            symmetric n x n matrix of conductances mu(x,y), zero off
            edges and on the diagonal.
        coords (array, optional)
            integer coordinates of the vertices (n x d), kept by the
            generators for bookkeeping.
        boundary (iterable of int, optional)
            outer boundary of the finite piece, declared by generators.
        """
        W = sparse.csr_matrix(conductance, dtype = float)
        W.sum_duplicates()
        W.eliminate_zeros()
        W.sort_indices()

        n = W.shape[0]
        if W.shape[0] != W.shape[1]:
            raise GraphError('conductance matrix must be square')
        if n < 2:
            raise GraphError('a graph needs at least two vertices')
        if n > MAX_VERTICES:
            raise GraphError('{} vertices exceed the size guard {}'.format(n,
                MAX_VERTICES))
        if np.any(W.diagonal() != 0):
            raise GraphError('self loops are not allowed')
        if not np.all(np.isfinite(W.data)) or np.any(W.data <= 0):
            raise GraphError('conductances must be finite and positive')
        if (W != W.T).nnz:
            raise GraphError('conductances must be symmetric')
        ncomp, _ = csgraph.connected_components(W, directed = False)
        if ncomp != 1:
            raise GraphError('graph is not connected ({} components)'.format(
                ncomp))

        self._W = W
        self._mass = np.asarray(W.sum(axis = 1)).ravel()
        self._mass.setflags(write = False)
        self._edges = None
        self._adjacency = None
        self._distances = dict()

        self.coords = None if coords is None else np.asarray(coords)
        if boundary is None:
            self.boundary = np.empty(0, dtype = np.int64)
        else:
            self.boundary = np.unique(np.asarray(list(boundary),
                dtype = np.int64))

    #---------------------------------------------------------------------
    # constructors and I/O
    #---------------------------------------------------------------------
    @classmethod
    def from_edges(cls, n, edges, coords = None, boundary = None):
        """
        Builds a graph from undirected edges (u, v, w).

        Arguments
        ---------
        n (int)
            number of vertices, ids are 0..n-1
        edges (array-like)
            rows (u, v, w) with w > 0; every edge appears once.
        """
        edges = np.asarray(edges, dtype = float).reshape(-1, 3)
        tails = edges[:, 0].astype(np.int64)
        heads = edges[:, 1].astype(np.int64)
        weights = edges[:, 2]
        if np.any(tails != edges[:, 0]) or np.any(heads != edges[:, 1]):
            raise GraphError('vertex ids must be integers')
        if tails.size and (min(tails.min(), heads.min()) < 0 or
                max(tails.max(), heads.max()) >= n):
            raise GraphError('vertex id out of range 0..{}'.format(n - 1))
        if np.any(tails == heads):
            raise GraphError('self loops are not allowed')

        lo, hi = np.minimum(tails, heads), np.maximum(tails, heads)
        keys = lo*np.int64(n) + hi
        if np.unique(keys).size != keys.size:
            raise GraphError('duplicate edges in the edge list')
        if np.any(weights <= 0) or not np.all(np.isfinite(weights)):
            raise GraphError('conductances must be finite and positive')

        rows = np.concatenate((tails, heads))
        cols = np.concatenate((heads, tails))
        data = np.concatenate((weights, weights))
        W = sparse.coo_matrix((data, (rows, cols)), shape = (n, n))
        return cls(W, coords = coords, boundary = boundary)

    @classmethod
    def from_networkx(cls, G, weight = 'weight', boundary_nodes = None):
        """
        Converts a networkx graph; nodes are sorted and renumbered
        0..n-1. Integer tuple nodes are kept as coordinates.
        """
        nodes = sorted(G.nodes())
        index = {node: i for i, node in enumerate(nodes)}
        edges = [(index[u], index[v], d.get(weight, 1.0))
            for u, v, d in G.edges(data = True)]
        coords = None
        if nodes and isinstance(nodes[0], tuple):
            coords = np.array(nodes, dtype = np.int64)
        boundary = None
        if boundary_nodes is not None:
            boundary = [index[node] for node in boundary_nodes]
        return cls.from_edges(len(nodes), edges, coords = coords,
            boundary = boundary)

    def to_networkx(self):
        """
        Returns a networkx.Graph with the conductances as 'weight'.
        """
        G = nx.Graph()
        G.add_nodes_from(range(self.vertex_count))
        tails, heads, weights = self.edge_arrays()
        G.add_weighted_edges_from(zip(tails.tolist(), heads.tolist(),
            weights.tolist()))
        return G

    @classmethod
    def read_edgelist(cls, path):
        """
        Reads the text format 'u v w', one undirected edge per line,
        comment lines starting with '#'.
        """
        try:
            df = pd.read_csv(path, sep = r'\s+', comment = '#', header = None,
                names = ['u', 'v', 'w'], dtype = {'u': np.int64,
                'v': np.int64, 'w': float})
        except (ValueError, pd.errors.EmptyDataError) as err:
            raise GraphError('cannot parse edge list {}: {}'.format(path, err))

        if df.empty or df.isnull().values.any():
            raise GraphError('edge list {} has missing fields'.format(path))

        ids = np.union1d(df['u'].values, df['v'].values)
        n = int(ids.max()) + 1
        if ids[0] < 0 or ids.size != n:
            raise GraphError('vertex ids must be dense integers 0..n-1')
        logger.debug('read %d edges on %d vertices from %s', len(df), n, path)
        return cls.from_edges(n, df[['u', 'v', 'w']].values)

    def write_edgelist(self, path):
        """
        Writes the graph in the edge-list text format.
        """
        tails, heads, weights = self.edge_arrays()
        df = pd.DataFrame({'u': tails, 'v': heads, 'w': weights})
        with open(path, 'w') as fp:
            fp.write('# subgauss edge list: {} vertices, {} edges\n'.format(
                self.vertex_count, len(df)))
            df.to_csv(fp, sep = ' ', header = False, index = False,
                float_format = '%.17g')

    #---------------------------------------------------------------------
    # structure
    #---------------------------------------------------------------------
    vertex_count = property(lambda self: self._W.shape[0])
    vertex_mass = property(lambda self: self._mass)
    conductance = property(lambda self: self._W)

    @property
    def edge_count(self):
        return self._W.nnz//2

    @property
    def adjacency(self):
        """
        Per-vertex list of (neighbor, conductance), sorted by neighbor.
        """
        if self._adjacency is None:
            W = self._W
            self._adjacency = [list(zip(
                W.indices[W.indptr[x]:W.indptr[x+1]].tolist(),
                W.data[W.indptr[x]:W.indptr[x+1]].tolist()))
                for x in range(self.vertex_count)]
        return self._adjacency

    def edge_arrays(self):
        """
        Returns tails, heads and conductances of the undirected edges
        (tail < head), sorted by (tail, head).
        """
        if self._edges is None:
            U = sparse.triu(self._W, k = 1).tocoo()
            order = np.lexsort((U.col, U.row))
            self._edges = (U.row[order].astype(np.int64),
                U.col[order].astype(np.int64), U.data[order])
        return self._edges

    def check_vertex(self, x):
        if not isinstance(x, (int, np.integer)) or not (
                0 <= x < self.vertex_count):
            raise GraphError('invalid vertex id {!r}'.format(x))
        return int(x)

    def vertex_set(self, ids):
        return VertexSet(self, ids)

    def field(self, values, tag = 'generic'):
        return ScalarField(as_values(values, self.vertex_count), tag = tag)

    def induced_subgraph(self, ids):
        """
        Returns the subgraph induced on ids (its masses count only the
        inner edges, i.e. the walk is reflected at the boundary) and
        the array mapping new ids to old ids.
        """
        ids = np.unique(np.asarray(ids, dtype = np.int64))
        sub = self._W[ids][:, ids]
        coords = None if self.coords is None else self.coords[ids]
        return WeightedGraph(sub, coords = coords), ids

    #---------------------------------------------------------------------
    # metric
    #---------------------------------------------------------------------
    def distances(self, center):
        """
        Combinatorial distances d_G(center, .) by breadth-first search.
        """
        center = self.check_vertex(center)
        if center not in self._distances:
            dist = csgraph.shortest_path(self._W, method = 'D',
                directed = False, unweighted = True, indices = center)
            dist = dist.astype(np.int64)
            dist.setflags(write = False)
            self._distances[center] = dist
        return self._distances[center]

    def ball(self, center, r):
        """
        The closed ball B(center, r) = {y: d_G(center, y) <= r}.
        """
        if r < 0 or int(r) != r:
            raise GraphError('radius must be a nonnegative integer')
        dist = self.distances(center)
        return VertexSet(self, np.flatnonzero(dist <= r))

    def volume(self, center, r):
        """
        V(center, r) = mu(B(center, r)).
        """
        return self.ball(center, r).measure

    def eccentricity(self, center):
        return int(self.distances(center).max())

    def boundary_distance(self, center):
        """
        Distance from center to the declared outer boundary (other
        than center itself); the eccentricity if none is declared.
        """
        others = self.boundary[self.boundary != center]
        if others.size == 0:
            return self.eccentricity(center)
        return int(self.distances(center)[others].min())

    def audit_window(self, center):
        """
        Largest radius used by default in scale-dependent audits.
        """
        return self.eccentricity(center)//4

    def auto_center(self):
        """
        Approximate center by a double sweep: the midpoint of a long
        geodesic, refined by eccentricity among a few candidates.
        """
        a = int(np.argmax(self.distances(0)))
        da = self.distances(a)
        b = int(np.argmax(da))
        db = self.distances(b)
        length = da[b]
        geodesic = np.flatnonzero(da + db == length)
        offset = np.abs(da[geodesic] - db[geodesic])
        candidates = geodesic[offset <= offset.min() + 1]
        mid = candidates.size//2
        candidates = candidates[max(0, mid - 4):mid + 4]
        ecc = [self.eccentricity(c) for c in candidates]
        center = int(candidates[int(np.argmin(ecc))])
        logger.debug('auto center %d (eccentricity %d, sweep length %d)',
            center, min(ecc), length)
        return center

    #---------------------------------------------------------------------
    # measure, energy, walk
    #---------------------------------------------------------------------
    def measure(self, A):
        """
        mu(A) = sum of mu_x over A; 0 for the empty set.
        """
        if isinstance(A, VertexSet):
            return A.measure
        ids = np.asarray(list(A), dtype = np.int64)
        if ids.size == 0:
            return 0.0
        return VertexSet(self, ids).measure

    def edge_mask(self, within):
        """
        Boolean mask over edge_arrays() of the edges with both
        endpoints in the vertex set within.
        """
        tails, heads, _ = self.edge_arrays()
        inside = within.mask if isinstance(within, VertexSet) else (
            VertexSet(self, within).mask)
        return inside[tails] & inside[heads]

    def energy(self, f, within = None):
        """
        Dirichlet energy 1/2 sum_{x,y} (f(x)-f(y))^2 mu(x,y), i.e. the
        sum over undirected edges. With within, only edges having both
        endpoints in that vertex set are counted.
        """
        values = as_values(f, self.vertex_count)
        tails, heads, weights = self.edge_arrays()
        diff2 = (values[tails] - values[heads])**2*weights
        if within is not None:
            diff2 = diff2[self.edge_mask(within)]
        return float(diff2.sum())

    def walk_step(self, f):
        """
        The Markov operator Pf(x) = sum_y p(x,y) f(y).
        """
        values = as_values(f, self.vertex_count)
        tag = f.tag if isinstance(f, ScalarField) else 'generic'
        return ScalarField(self._W.dot(values)/self._mass, tag = tag)

    def transition_matrix(self):
        """
        Sparse row-stochastic matrix p(x,y) = mu(x,y)/mu_x.
        """
        return sparse.diags(1.0/self._mass).dot(self._W).tocsr()

    def p0_constant(self):
        """
        min p(x,y) over neighbours, both orientations.
        """
        W = self._W
        rows = np.repeat(np.arange(self.vertex_count), np.diff(W.indptr))
        return float((W.data/self._mass[rows]).min())

    def inner(self, f, h):
        """
        Inner product <f, h> in l2(V, mu).
        """
        return float(np.dot(as_values(f, self.vertex_count)*self._mass,
            as_values(h, self.vertex_count)))

    def __repr__(self):
        return 'WeightedGraph(vertices={}, edges={})'.format(
            self.vertex_count, self.edge_count)

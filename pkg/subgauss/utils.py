"""
utils.py

Created: Sat Sep 19 09:12:41 CEST 2026

Various useful objects: default constants shared by the audits,
error types, the worker pool and JSON formatting.

Example:
>>> from subgauss.utils import DYADIC_RADII, parallel_map
>>> parallel_map(lambda r: r**2, DYADIC_RADII)
[16, 64, 256, 1024, 4096]
"""
import os
import math
import logging
from concurrent.futures import ThreadPoolExecutor

import numpy as np

logger = logging.getLogger(__name__)

#-------------------------------------------------------------------------
# Defaults
#-------------------------------------------------------------------------
DYADIC_RADII = (4, 8, 16, 32, 64) # audit radii, truncated to the window
SPREAD_THRESHOLD = 50.0 # max/min of per-scale constants
CG_REL_TOL = 1e-10
RAYLEIGH_TOL = 1e-8
SUPERHARMONIC_RTOL = 1e-9 # times max|u|
MEAN_VALUE_LIMIT = 1e4
CONTENT_RATIO_FLOOR = 1e-3
MAX_VERTICES = 5_000_000
K_SCAN = 64 # integer levels scanned by the tentacle trace
C1_MAX_EXPONENT = 16 # C1 runs over 2**0 .. 2**16
INNER_FRACTION = 36 # inf of the exit time over B(x, r/36)
SHELL_FRACTION = 18 # level sets live in B(x, r/18)
SCHEMA_VERSION = 1
JSON_DIGITS = 12

#-------------------------------------------------------------------------
# Errors
#-------------------------------------------------------------------------
class SubgaussError(Exception):
    """
    Base class of every error raised by subgauss.
    """

class GraphError(SubgaussError, ValueError):
    """
    Malformed graph, invalid vertex id or size guard.
    """

class RangeError(SubgaussError, ValueError):
    """
    A ball or a radius falls outside the usable part of the graph.
    """

class InfiniteCapacityError(SubgaussError, ValueError):
    """
    The condenser plates overlap: no admissible potential exists.
    """

class ConvergenceError(SubgaussError, RuntimeError):
    """
    An iterative solver stopped before reaching its tolerance.

    Attributes
    ----------
    residual (float)
        the last relative residual (or relative change for eigen solvers)
    iterations (int)
        the number of iterations performed
    """
    def __init__(self, message, residual = np.nan, iterations = 0):
        super(ConvergenceError, self).__init__(message)
        self.residual = residual
        self.iterations = iterations

class TraceError(SubgaussError, RuntimeError):
    """
    The proof trace could not build its level sets.
    """

class HeatKernelError(SubgaussError, RuntimeError):
    """
    The walk lost mass or produced negative probabilities.
    """

#-------------------------------------------------------------------------
# Worker pool
#-------------------------------------------------------------------------
def thread_count():
    """
    Returns the number of worker threads allowed by SUBGAUSS_THREADS.
    Unset means min(4, cpu_count).
    """
    value = os.environ.get('SUBGAUSS_THREADS')
    if value is None:
        return min(4, os.cpu_count() or 1)
    try:
        nthreads = int(value)
    except ValueError:
        nthreads = 0
    if nthreads < 1:
        logger.warning('invalid SUBGAUSS_THREADS=%r, running sequentially',
            value)
        return 1
    return nthreads

def parallel_map(func, items):
    """
    Applies func to every item, keeping the input order. Runs
    sequentially when only one thread is allowed.

    Arguments
    ---------
    func (callable)
        a pure function of one argument
    items (iterable)
        the arguments, e.g. a list of radii
    """
    items = list(items)
    nthreads = min(thread_count(), len(items))
    if nthreads <= 1:
        return [func(item) for item in items]

    with ThreadPoolExecutor(max_workers = nthreads) as pool:
        return list(pool.map(func, items))

#-------------------------------------------------------------------------
# Radii and fits
#-------------------------------------------------------------------------
def dyadic(lo, hi):
    """
    Powers of two between lo and hi (both inclusive).
    """
    out = list()
    k = 1
    while k <= hi:
        if k >= lo:
            out.append(k)
        k *= 2
    return out

def spread(values):
    """
    Ratio max/min of positive values; inf if any value is not
    finite and positive.
    """
    values = np.asarray(values, dtype = float)
    if values.size == 0:
        return np.inf
    if not np.all(np.isfinite(values)) or np.any(values <= 0):
        return np.inf
    return float(values.max()/values.min())

#-------------------------------------------------------------------------
# JSON
#-------------------------------------------------------------------------
def jsonable(obj, digits = JSON_DIGITS):
    """
    Converts nested reports into plain JSON types. Floats are
    rounded to a fixed number of significant digits so identical
    runs give byte-identical output; infinities become the string 'inf'.
    """
    if hasattr(obj, 'to_dict'):
        return jsonable(obj.to_dict(), digits)
    if isinstance(obj, dict):
        return {str(k): jsonable(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v, digits) for v in obj]
    if isinstance(obj, np.ndarray):
        return [jsonable(v, digits) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return 'nan'
        if math.isinf(x):
            return 'inf' if x > 0 else '-inf'
        return float('{0:.{1}g}'.format(x, digits))
    return obj

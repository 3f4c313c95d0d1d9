# -*- coding: utf-8 -*-

"""
subgauss:

A python module to compute capacities, exit times, Poincare constants
and heat kernels on weighted graphs, and to audit sub-Gaussian heat
kernel estimates on them.

"""

#-------------------------------------------------------------------------
# Global variables
#-------------------------------------------------------------------------
__version__ = 'v0.1'
__author__ = 'subgauss developers'
__email__ = ''


#-------------------------------------------------------------------------
# Imports
#-------------------------------------------------------------------------
from subgauss.graphcore import WeightedGraph, VertexSet, ScalarField
from subgauss.generators import (lattice, sierpinski_gasket, vicsek_tree,
    perturb_weights, subdivide)
from subgauss.potentials import capacity, exit_time, green_apply
from subgauss.inequalities import ConditionReport, ExponentFit
from subgauss.heatkernel import heat_kernel_row
from subgauss.prooftrace import tentacle_trace

"""
setup.py

Created: Sat Sep 19 09:05:12 CEST 2026

Installation file required for the subgauss module
"""
import re
import os.path as op
from setuptools import setup

#-------------------------------------------------------------------------
# setup
#-------------------------------------------------------------------------
# read README.md
curdir = op.dirname(op.realpath(__file__))
with open(op.join(curdir, 'README.md')) as f:
    myreadme = f.read()

# Find version number from `__init__.py` without executing it.
filename = op.join(curdir, 'subgauss/__init__.py')
with open(filename, 'r') as f:
    myversion = re.search(r"__version__ = '([^']+)'", f.read()).group(1)


setup(
    name = 'subgauss', # application name
    version = myversion,# application version
    license = 'LICENSE',
    description = 'subgauss computes capacities, exit times, Poincare\
    constants and heat kernels on weighted graphs',
    long_description = myreadme,
    long_description_content_type = 'text/markdown',
    packages = ['subgauss'],
    python_requires='>=3.7',
    install_requires = ['numpy', 'scipy', 'pandas', 'networkx'],
    entry_points = {
        'console_scripts': ['subgauss = subgauss.cli:main'],
    },
)

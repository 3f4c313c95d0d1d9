"""
cli.py

Created: Tue Sep 22 10:48:03 CEST 2026

Command line entry point: generate graphs, run the audits and write
JSON reports or CSV tables.

Example:
$ subgauss gen lattice --d 2 --side 65 -o z2.txt
$ subgauss fit z2.txt --what volume
$ subgauss audit --family sierpinski --level 7 --dw 2.3219 --df 1.585

Exit codes: 0 success, 1 a verdict failed, 2 usage or input error
(with a JSON object {"error", "message"} on stderr).
"""
import sys
import json
import logging
import argparse

from subgauss import __version__
from subgauss import generators
from subgauss.graphcore import WeightedGraph
from subgauss.heatkernel import (band_table, band_targets,
    heat_kernel_rows, mixing_window, on_diagonal_fit, rows_table,
    subgaussian_band_check, walk_dimension_fit)
from subgauss.inequalities import (capacity_scaling_audit, doubling_audit,
    hypothesis_report, p0_report, poincare_scaling_audit, volume_fit,
    volume_scaling_audit)
from subgauss.prooftrace import (exit_estimates_audit, exit_floor_audit,
    mean_value_audit, tentacle_trace)
from subgauss.utils import (SubgaussError, INNER_FRACTION, SCHEMA_VERSION,
    SPREAD_THRESHOLD, dyadic, jsonable)

logger = logging.getLogger(__name__)

class UsageError(Exception):
    pass

class _Parser(argparse.ArgumentParser):
    """
    Reports usage errors as exceptions so main() can answer with
    exit code 2 and an error object.
    """
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)

#-------------------------------------------------------------------------
# Arguments
#-------------------------------------------------------------------------
def _int_list(text):
    try:
        return [int(v) for v in text.split(',') if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError('expected integers a,b,c')

def _range(text):
    try:
        lo, hi = (float(v) for v in text.split(','))
    except ValueError:
        raise argparse.ArgumentTypeError('expected LO,HI')
    return lo, hi

def _add_family_params(parser):
    parser.add_argument('--d', type = int, default = 2,
        help = 'lattice dimension')
    parser.add_argument('--side', type = int, default = 65,
        help = 'lattice side (vertices per axis)')
    parser.add_argument('--level', type = int, default = None,
        help = 'fractal level')
    parser.add_argument('--perturb', type = _range, default = None,
        metavar = 'LO,HI', help = 'multiply weights by uniform factors')
    parser.add_argument('--seed', type = int, default = 0,
        help = 'seed of the perturbation')
    parser.add_argument('--subdivide', type = int, default = None,
        metavar = 'K', help = 'replace each edge by a path of K edges')

def _add_graph_source(parser):
    parser.add_argument('graph', nargs = '?', default = None,
        help = 'edge list file (u v w per line)')
    parser.add_argument('--family', default = None,
        choices = ['lattice', 'sierpinski', 'gasket', 'vicsek'],
        help = 'build a family instead of reading a file')
    _add_family_params(parser)

def _add_output(parser):
    parser.add_argument('-o', '--output', default = None,
        help = 'output file (stdout by default)')

def build_parser():
    parser = _Parser(prog = 'subgauss', description = 'Capacities, exit '
        'times, Poincare constants and heat kernels on weighted graphs.')
    parser.add_argument('--version', action = 'version',
        version = '%(prog)s {}'.format(__version__))
    parser.add_argument('-v', '--verbose', action = 'store_true',
        help = 'debug logging on stderr')
    sub = parser.add_subparsers(dest = 'command', parser_class = _Parser)
    sub.required = True

    gen = sub.add_parser('gen', help = 'write the edge list of a family')
    gen.add_argument('family', choices = ['lattice', 'sierpinski', 'gasket',
        'vicsek'])
    _add_family_params(gen)
    gen.add_argument('-o', '--output', required = True)

    audit = sub.add_parser('audit', help = 'audit the theorem hypotheses')
    _add_graph_source(audit)
    audit.add_argument('--center', default = 'auto')
    audit.add_argument('--dw', type = float, default = None)
    audit.add_argument('--df', type = float, default = None)
    audit.add_argument('--radii', type = _int_list, default = None)
    audit.add_argument('--threshold', type = float,
        default = SPREAD_THRESHOLD)
    audit.add_argument('--centers', type = _int_list, default = None,
        help = 'extra centers of the Poincare sweep')
    _add_output(audit)

    heat = sub.add_parser('heatkernel', help = 'heat kernel rows or band')
    _add_graph_source(heat)
    heat.add_argument('--source', default = 'auto')
    heat.add_argument('--n-list', type = _int_list, default = None)
    heat.add_argument('--y-list', type = _int_list, default = None)
    heat.add_argument('--band', action = 'store_true')
    heat.add_argument('--dw', type = float, default = None)
    heat.add_argument('--df', type = float, default = None)
    _add_output(heat)

    trace = sub.add_parser('trace', help = 'replay the tentacle argument')
    _add_graph_source(trace)
    trace.add_argument('--center', default = 'auto')
    trace.add_argument('--r', type = int, required = True)
    trace.add_argument('--dw', type = float, required = True)
    trace.add_argument('--df', type = float, default = None)
    _add_output(trace)

    fit = sub.add_parser('fit', help = 'fit an exponent')
    _add_graph_source(fit)
    fit.add_argument('--what', required = True,
        choices = ['volume', 'exit', 'ondiag'])
    fit.add_argument('--center', default = 'auto')
    fit.add_argument('--radii', type = _int_list, default = None)
    fit.add_argument('--n-list', type = _int_list, default = None)
    fit.add_argument('--dw', type = float, default = None)
    _add_output(fit)
    return parser

#-------------------------------------------------------------------------
# Helpers
#-------------------------------------------------------------------------
def _family_params(args, name):
    if name == 'lattice':
        return dict(d = args.d, side = args.side)
    if args.level is None:
        return dict()
    return dict(level = args.level)

def _transform(g, args):
    if args.perturb is not None:
        g = generators.perturb_weights(g, *args.perturb, seed = args.seed)
    if args.subdivide is not None:
        g = generators.subdivide(g, args.subdivide)
    return g

def load_graph(args):
    if (args.graph is None) == (args.family is None):
        raise UsageError('give either a graph file or --family')
    if args.family is not None:
        g = generators.family(args.family, **_family_params(args,
            args.family))
    else:
        g = WeightedGraph.read_edgelist(args.graph)
    return _transform(g, args)

def _vertex(g, text):
    if text == 'auto':
        return g.auto_center()
    try:
        vertex = int(text)
    except ValueError:
        raise UsageError('vertex must be an id or auto, got {!r}'.format(text))
    return g.check_vertex(vertex)

def _emit_json(obj, output):
    text = json.dumps(jsonable(obj), indent = 2) + '\n'
    if output is None:
        sys.stdout.write(text)
    else:
        with open(output, 'w') as fp:
            fp.write(text)

def _emit_csv(df, output):
    if output is None:
        df.to_csv(sys.stdout, index = False, float_format = '%.12g')
    else:
        df.to_csv(output, index = False, float_format = '%.12g')

def _graph_info(g):
    return dict(vertices = g.vertex_count, edges = g.edge_count)

#-------------------------------------------------------------------------
# Subcommands
#-------------------------------------------------------------------------
def cmd_gen(args):
    g = generators.family(args.family, **_family_params(args, args.family))
    g = _transform(g, args)
    g.write_edgelist(args.output)
    logger.info('wrote %r to %s', g, args.output)
    return 0

def cmd_audit(args):
    g = load_graph(args)
    center = _vertex(g, args.center)
    threshold = args.threshold

    vfit = volume_fit(g, center, args.radii)
    d_f = vfit.exponent if args.df is None else args.df
    wfit = None
    if args.dw is None:
        wfit = walk_dimension_fit(g, center, args.radii)
    d_w = wfit.exponent if args.dw is None else args.dw

    # the trace and the mean value audit need r >= 36
    floor = None
    if args.radii is not None:
        floor = [r for r in args.radii if r >= INNER_FRACTION] or None

    reports = dict()
    reports['V(d_f)'] = volume_scaling_audit(g, center, args.radii, d_f,
        threshold)
    reports['VD'] = doubling_audit(g, center, args.radii, threshold)
    reports['p0'] = p0_report(g)
    reports['Cap(d_w)<='] = capacity_scaling_audit(g, center, args.radii,
        d_w, threshold)
    reports['PI(d_w)'] = poincare_scaling_audit(g, center, args.radii, d_w,
        threshold, centers = args.centers)
    reports['exit-estimates'] = exit_estimates_audit(g, center, args.radii,
        d_w, threshold)
    reports['exit-floor'] = exit_floor_audit(g, center, floor, d_w,
        threshold)
    reports['mean-value'] = mean_value_audit(g, center, floor)
    reports['hypothesis-gate'] = hypothesis_report(d_f, d_w)

    verdict = all(report.verdict for report in reports.values())
    out = dict(schema = SCHEMA_VERSION, command = 'audit',
        graph = _graph_info(g), center = center, d_f = d_f, d_w = d_w,
        fits = dict(volume = vfit, exit = wfit), reports = reports,
        verdict = verdict)
    _emit_json(out, args.output)
    return 0 if verdict else 1

def cmd_heatkernel(args):
    g = load_graph(args)
    x = _vertex(g, args.source)
    n_list = args.n_list
    if n_list is None:
        limit = 1024 if args.dw is None else max(mixing_window(g, x,
            args.dw), 16)
        n_list = dyadic(1, limit)

    if not args.band:
        rows = heat_kernel_rows(g, x, n_list)
        _emit_csv(rows_table(g, rows), args.output)
        return 0

    if args.dw is None:
        raise UsageError('--band needs --dw')
    y_list = args.y_list or band_targets(g, x, args.dw, max(n_list))
    report = subgaussian_band_check(g, x, args.df, args.dw, n_list, y_list)
    _emit_csv(band_table(report), args.output)
    return 0 if report.verdict else 1

def cmd_trace(args):
    g = load_graph(args)
    center = _vertex(g, args.center)
    trace = tentacle_trace(g, center, args.r, args.dw, args.df)
    _emit_json(dict(schema = SCHEMA_VERSION, command = 'trace',
        graph = _graph_info(g), trace = trace), args.output)
    return 0

def cmd_fit(args):
    g = load_graph(args)
    center = _vertex(g, args.center)
    if args.what == 'volume':
        fit = volume_fit(g, center, args.radii)
    elif args.what == 'exit':
        fit = walk_dimension_fit(g, center, args.radii)
    else:
        n_list = args.n_list
        if n_list is None:
            limit = 1024 if args.dw is None else mixing_window(g, center,
                args.dw)
            n_list = dyadic(16, limit)
        fit = on_diagonal_fit(g, center, n_list, d_w = args.dw)
    _emit_json(dict(schema = SCHEMA_VERSION, command = 'fit',
        what = args.what, graph = _graph_info(g), center = center,
        fit = fit), args.output)
    return 0

COMMANDS = dict(gen = cmd_gen, audit = cmd_audit, heatkernel = cmd_heatkernel,
    trace = cmd_trace, fit = cmd_fit)

def _fail(err):
    sys.stderr.write(json.dumps(dict(error = type(err).__name__,
        message = str(err))) + '\n')
    return 2

def main(argv = None):
    """
    Runs the command line and returns the exit code.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as err:
        return _fail(err)

    logging.basicConfig(stream = sys.stderr, format = '%(levelname)s '
        '%(name)s: %(message)s', level = logging.DEBUG if args.verbose
        else logging.WARNING)
    try:
        return COMMANDS[args.command](args)
    except (UsageError, SubgaussError, OSError, ValueError) as err:
        logger.debug('command failed', exc_info = True)
        return _fail(err)

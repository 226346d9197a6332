# -*- coding: utf-8 -*-
"""
Command-line front door of gwforge.

    gwforge solve --dist '{"pmf":{"0":"1/4","2":"3/4"}}'
    gwforge dwass --dist critical-binary --n 3
    gwforge sample --dist critical-binary --kind kesten --h 2 --seed 7 --reps 3

Tables are written as CSV (config JSON in '#' header lines) or as one JSON document
with a 'config' key. Exit codes: 0 success, 2 invalid input, 3 budget exhausted.
"""
import argparse
import csv
import io
import json
import logging
import sys
from fractions import Fraction

import numpy as np

from gwforge.dependencies import isExact
from gwforge.tree_dependencies import getFunctional, tree_to_json
from gwforge.offspring_dependencies import (parse_distribution, distribution_to_json, getCriticality,
                                            getExtinction, conjugate, size_biased, backbone,
                                            condensation_offspring, leaf_offspring, tilt, genericity,
                                            getPmfDict)
from gwforge.sample_dependencies import (getRngStream, getSampleBudget, sample_gw, sample_kesten, sample_survivor,
                                         sample_condensation, sample_conditioned, sample_process,
                                         sample_immigration, getSurvivorCache)
from gwforge.enum_dependencies import (enumerate_law, functional_law, restriction_law, kesten_restriction_law,
                                       conditioned_restriction_law, dwass_check)
from gwforge.main import (getThreadCount, convergence_experiment, ratio_table, kesten_stigum_mc, property_probe,
                          condensation_experiment)
from gwforge.errors import GWForgeError, BudgetError

INT_EXIT_OK = 0
INT_EXIT_INPUT = 2
INT_EXIT_BUDGET = 3


# %% argument parsing


def parseIntList(strSpec):
    """'7', '1:15' (inclusive) or '5,9,13'."""
    strSpec = str(strSpec).strip()
    if ':' in strSpec:
        strLow, strHigh = strSpec.split(':')
        return list(range(int(strLow), int(strHigh) + 1))
    return [int(s) for s in strSpec.split(',') if s.strip() != '']


def parseSet(strSpec):
    if strSpec is None:
        return None
    return frozenset(parseIntList(strSpec)) if ':' in strSpec else frozenset(int(s) for s in strSpec.split(','))


def parseWindow(strSpec):
    """'n' or 'n:inf' is the tail window [n, inf), 'n:n1' the window [n, n+n1)."""
    cellParts = str(strSpec).split(':')
    intN = int(cellParts[0])
    if len(cellParts) == 1 or cellParts[1] in ('', 'inf'):
        return (intN, None)
    intN1 = int(cellParts[1])
    if intN1 < 1:
        raise ValueError("Input error: window length n1=%d must be positive" % intN1)
    return (intN, intN1)


def parseFunctional(strSpec):
    """height | size | leaves[:A] | maxdeg | maxgen, with A a comma list (default {0})."""
    strName, _, strSet = str(strSpec).partition(':')
    if strName == 'leaves':
        return getFunctional('leaves', parseSet(strSet) if strSet else {0})
    if strName not in ('height', 'size', 'maxdeg', 'maxgen'):
        raise ValueError("Input error: unknown functional '%s'" % strSpec)
    return getFunctional(strName)


def getParser():
    objCommon = argparse.ArgumentParser(add_help=False)
    objCommon.add_argument('--dist', type=str, default=None,
                           help="offspring law: preset (critical-binary, sub-binary, super-binary, "
                                "critical-aperiodic, geom:a, poisson:lam, powerlaw:beta:p0[:scale]) or JSON")
    objCommon.add_argument('--out', type=str, default=None, help="output path (default: stdout)")
    objCommon.add_argument('--format', choices=['csv', 'json'], default='csv')
    objCommon.add_argument('--seed', type=int, default=0)
    objCommon.add_argument('--reps', type=int, default=None)
    objCommon.add_argument('--threads', type=int, default=None, help="worker streams (default: $GWFORGE_THREADS or 1)")
    objCommon.add_argument('--cap-size', type=int, default=None, help="enumeration size cap / sampler node budget")
    objCommon.add_argument('--cap-height', type=int, default=None, help="sampler height budget")
    objCommon.add_argument('--max-rejections', type=int, default=None)
    objCommon.add_argument('--verbose', action='store_true')

    objParser = argparse.ArgumentParser(prog='gwforge', description="Galton-Watson tree laboratory")
    objSub = objParser.add_subparsers(dest='command')
    objSub.required = True

    objSub.add_parser('solve', parents=[objCommon], help="q, m, period, radius, criticality")

    objP = objSub.add_parser('derive', parents=[objCommon], help="derived offspring laws")
    objP.add_argument('--what', choices=['conjugate', 'size-biased', 'backbone', 'condensation', 'leaf'],
                      default='size-biased')

    objP = objSub.add_parser('tilt', parents=[objCommon], help="tilted law p_theta^A")
    objP.add_argument('--set', type=str, default='0')
    objP.add_argument('--theta', type=str, required=True)

    objP = objSub.add_parser('classify', parents=[objCommon], help="genericity of a sub-critical law")
    objP.add_argument('--set', type=str, default='0')

    objP = objSub.add_parser('sample', parents=[objCommon], help="tree JSON lines from a sampler")
    objP.add_argument('--kind', choices=['gw', 'kesten', 'survivor', 'condensation', 'conditioned', 'process',
                                         'immigration'], default='gw')
    objP.add_argument('--h', type=int, default=3)
    objP.add_argument('--n', type=int, default=10, help="generations of process and immigration")
    objP.add_argument('--functional', type=str, default='size')
    objP.add_argument('--window', type=str, default='1')

    objP = objSub.add_parser('law', parents=[objCommon], help="exact laws from the enumeration oracle")
    objP.add_argument('--what', choices=['tree', 'functional', 'kesten', 'restriction', 'conditioned'],
                      default='tree')
    objP.add_argument('--h', type=int, default=2)
    objP.add_argument('--functional', type=str, default='size')
    objP.add_argument('--window', type=str, default='1')

    objP = objSub.add_parser('dwass', parents=[objCommon], help="both sides of the total progeny formula")
    objP.add_argument('--n', type=str, required=True)

    objP = objSub.add_parser('ratio', parents=[objCommon], help="P(A_(n+step)) / P(A_n)")
    objP.add_argument('--functional', type=str, default='height')
    objP.add_argument('--n', type=str, required=True)
    objP.add_argument('--n1', type=int, default=None)
    objP.add_argument('--step', type=int, default=1)

    objP = objSub.add_parser('converge', parents=[objCommon], help="TV to the local limit per window")
    objP.add_argument('--functional', type=str, default='size')
    objP.add_argument('--window', type=str, action='append', required=True)
    objP.add_argument('--h', type=int, default=1)
    objP.add_argument('--mode', choices=['exact', 'mc'], default='exact')

    objP = objSub.add_parser('kesten-stigum', parents=[objCommon], help="Monte Carlo W_n = Z_n / m^n")
    objP.add_argument('--n', type=int, default=10)
    objP.add_argument('--eps', type=float, default=0.01)

    objP = objSub.add_parser('condense', parents=[objCommon], help="condensation tree geometry")
    objP.add_argument('--depth-cap', type=int, default=8)
    objP.add_argument('--set', type=str, default=None)
    objP.add_argument('--h', type=int, default=2)
    objP.add_argument('--window', type=str, default=None)

    objP = objSub.add_parser('probe', parents=[objCommon], help="graft property of a functional")
    objP.add_argument('--functional', type=str, required=True)
    objP.add_argument('--max-size', type=int, default=6)
    return objParser


# %% formatting


def formatValue(objV):
    if objV is None:
        return ''
    if isinstance(objV, (bool, np.bool_)):
        return 'true' if objV else 'false'
    if isinstance(objV, Fraction):
        return str(objV)
    if isinstance(objV, (int, np.integer)):
        return str(int(objV))
    if isinstance(objV, (float, np.floating)):
        return repr(float(objV))
    if isinstance(objV, tuple):
        return tree_to_json(objV)
    if isinstance(objV, (set, frozenset)):
        return ','.join(str(v) for v in sorted(objV))
    return str(objV)


def getProvenance(objV, boolExact=True):
    return 'exact' if boolExact and isExact(objV) else 'float'


def getConfig(objArgs):
    dConfig = {k: v for k, v in sorted(vars(objArgs).items()) if k != 'verbose'}
    dConfig['threads'] = getThreadCount(objArgs.threads)
    return dConfig


def writeTable(objStream, dConfig, cellColumns, cellRows, strFormat, dSummary=None):
    if strFormat == 'json':
        dOut = {'config': dConfig,
                'rows': [{c: formatValue(v) for c, v in zip(cellColumns, cellRow)} for cellRow in cellRows]}
        if dSummary is not None:
            dOut['summary'] = {k: formatValue(v) for k, v in dSummary.items()}
        objStream.write(json.dumps(dOut, sort_keys=True, indent=1) + '\n')
        return
    objStream.write('# gwforge ' + json.dumps(dConfig, sort_keys=True) + '\n')
    for k, v in (dSummary or {}).items():
        objStream.write('# %s=%s\n' % (k, formatValue(v)))
    objBuffer = io.StringIO()
    objWriter = csv.writer(objBuffer, lineterminator='\n')
    objWriter.writerow(cellColumns)
    for cellRow in cellRows:
        objWriter.writerow([formatValue(v) for v in cellRow])
    objStream.write(objBuffer.getvalue())


def writeLines(objStream, dConfig, cellLines, strFormat):
    if strFormat == 'json':
        objStream.write(json.dumps({'config': dConfig, 'samples': [json.loads(s) for s in cellLines]},
                                   sort_keys=True) + '\n')
        return
    objStream.write('# gwforge ' + json.dumps(dConfig, sort_keys=True) + '\n')
    for strLine in cellLines:
        objStream.write(strLine + '\n')


def getPmfRows(dDist, strLaw):
    boolExact = dDist['boolExact']
    return [[strLaw, k, v, getProvenance(v, boolExact)] for k, v in getPmfDict(dDist).items()]


# %% subcommands


def cmdSolve(objArgs, dDist):
    numQ = getExtinction(dDist)
    boolExact = dDist['boolExact']
    cellRows = [['q', numQ, getProvenance(numQ, boolExact)],
                ['m', dDist['numMean'], getProvenance(dDist['numMean'], boolExact)],
                ['criticality', getCriticality(dDist), ''],
                ['period', dDist['intPeriod'], 'exact'],
                ['radius', dDist['dblRadius'], 'float'],
                ['tail_bound', dDist['dblTailBound'], 'float'],
                ['hypothesis_p', dDist['boolHypP'], 'exact']]
    return ['quantity', 'value', 'provenance'], cellRows, None


def cmdDerive(objArgs, dDist):
    strWhat = objArgs.what
    cellColumns = ['law', 'k', 'prob', 'provenance']
    if strWhat == 'conjugate':
        return cellColumns, getPmfRows(conjugate(dDist), 'conjugate'), None
    if strWhat == 'size-biased':
        return cellColumns, getPmfRows(size_biased(dDist), 'size_biased'), None
    if strWhat == 'backbone':
        return cellColumns, getPmfRows(backbone(dDist), 'backbone'), None
    if strWhat == 'leaf':
        dLeaf = leaf_offspring(dDist)
        return cellColumns, getPmfRows(dLeaf, 'leaf'), {'mean': dLeaf['numMean'], 'tail_bound': dLeaf['dblTailBound']}
    dExtOff = condensation_offspring(dDist)
    cellRows = [['condensation', k, v, getProvenance(v, dDist['boolExact'])]
                for k, v in enumerate(dExtOff['vecPmf']) if v != 0]
    cellRows.append(['condensation', 'inf', dExtOff['numAtomInf'], getProvenance(dExtOff['numAtomInf'])])
    return cellColumns, cellRows, None


def getTheta(strTheta, dDist):
    numTheta = Fraction(strTheta)
    return numTheta if dDist['boolExact'] else float(numTheta)


def cmdTilt(objArgs, dDist):
    dTilt = tilt(dDist, parseSet(objArgs.set), getTheta(objArgs.theta, dDist))
    return ['law', 'k', 'prob', 'provenance'], getPmfRows(dTilt, 'tilt'), {'mean': dTilt['numMean']}


def cmdClassify(objArgs, dDist):
    dGen = genericity(dDist, parseSet(objArgs.set))
    cellRows = [['class', dGen['strClass']],
                ['case', dGen['strCase']],
                ['theta_c', dGen['numThetaC']],
                ['theta_star', dGen['numThetaStar']],
                ['mean_star', dGen['numMeanStar']],
                ['dist_star', distribution_to_json(dGen['dDistStar'])]]
    return ['quantity', 'value'], cellRows, None


def getBudget(objArgs):
    return getSampleBudget(objArgs.cap_size, objArgs.cap_height, objArgs.max_rejections)


def cmdSample(objArgs, dDist):
    """Tree JSON lines; processes are written as {"z": [...]}."""
    intReps = 1 if objArgs.reps is None else objArgs.reps
    objRng = getRngStream(objArgs.seed, 0)
    dBudget = getBudget(objArgs)
    strKind = objArgs.kind
    dCache = None
    cellLines = []
    for _ in range(intReps):
        if strKind == 'gw':
            cellLines.append(tree_to_json(sample_gw(dDist, objRng, dBudget)))
        elif strKind == 'kesten':
            cellLines.append(tree_to_json(sample_kesten(dDist, objRng, objArgs.h, dBudget)))
        elif strKind == 'survivor':
            if dCache is None:
                dCache = getSurvivorCache(dDist)
            cellLines.append(tree_to_json(sample_survivor(dDist, objRng, objArgs.h, dBudget, dCache=dCache)))
        elif strKind == 'condensation':
            _, dExt = sample_condensation(dDist, objRng, objArgs.h, dBudget)
            cellLines.append(tree_to_json(dExt))
        elif strKind == 'conditioned':
            tplT = sample_conditioned(dDist, parseFunctional(objArgs.functional), parseWindow(objArgs.window),
                                      objRng, dBudget)
            cellLines.append(tree_to_json(tplT))
        elif strKind == 'process':
            vecZ, _ = sample_process(dDist, objRng, objArgs.n)
            cellLines.append(json.dumps({'z': [int(z) for z in vecZ]}, separators=(',', ':')))
        else:
            vecZ = sample_immigration(dDist, objRng, objArgs.n)
            cellLines.append(json.dumps({'z': [int(z) for z in vecZ]}, separators=(',', ':')))
    return cellLines


def cmdLaw(objArgs, dDist):
    strWhat = objArgs.what
    intCap = objArgs.cap_size
    if strWhat == 'functional':
        dFunctional = parseFunctional(objArgs.functional)
        dPmf = functional_law(dDist, dFunctional, 10 if intCap is None else intCap)
        strProv = 'lower_bound' if dFunctional['strName'] == 'maxgen' else None
        cellRows = [[a, v, strProv or getProvenance(v, dDist['boolExact'])] for a, v in dPmf['dPmf'].items()]
        return ['value', 'prob', 'provenance'], cellRows, {'mass': dPmf['numMass'],
                                                           'complement': dPmf['numComplement']}
    if strWhat == 'tree':
        dLaw = enumerate_law(dDist, 5 if intCap is None else intCap)
    elif strWhat == 'restriction':
        dLaw = restriction_law(dDist, objArgs.h)
    elif strWhat == 'kesten':
        dLaw = kesten_restriction_law(dDist, objArgs.h)
    else:
        dLaw = conditioned_restriction_law(dDist, parseFunctional(objArgs.functional), parseWindow(objArgs.window),
                                           objArgs.h, intCap)
    dInterval = dLaw.get('dInterval', dict())
    cellRows = []
    for tplT, numP in dLaw['dLaw'].items():
        numLow, numHigh = dInterval.get(tplT, (numP, numP))
        strProv = 'interval' if numLow != numHigh else getProvenance(numP, dDist['boolExact'])
        cellRows.append([tplT, numP, numLow, numHigh, strProv])
    return ['tree', 'prob', 'prob_lower', 'prob_upper', 'provenance'], cellRows, \
        {'mass': dLaw['numMass'], 'complement': dLaw['numComplement']}


def cmdDwass(objArgs, dDist):
    cellRows = []
    for intN in parseIntList(objArgs.n):
        numLhs, numRhs = dwass_check(dDist, intN)
        if dDist['boolExact']:
            strStatus = 'OK' if numLhs == numRhs else 'MISMATCH'
        else:
            strStatus = 'OK' if abs(numLhs - numRhs) <= 1e-12 else 'MISMATCH'
        cellRows.append([intN, numLhs, numRhs, strStatus])
    return ['n', 'lhs', 'rhs', 'status'], cellRows, None


def cmdRatio(objArgs, dDist):
    _, dReport = ratio_table(dDist, parseFunctional(objArgs.functional), parseIntList(objArgs.n), objArgs.n1,
                             objArgs.step, objArgs.cap_size)
    cellRows = [[d['intN'], d['numProb'], d['numProbNext'], d['numRatio'], d['boolZeroWindow']]
                for d in dReport['cellRows']]
    return ['n', 'prob_n', 'prob_next', 'ratio', 'zero_window'], cellRows, {'limit': dReport['numLimit']}


def cmdConverge(objArgs, dDist):
    cellWindows = [parseWindow(s) for s in objArgs.window]
    _, dReport = convergence_experiment(dDist, parseFunctional(objArgs.functional), cellWindows, objArgs.h,
                                        strMode=objArgs.mode, intReps=objArgs.reps, intSeed=objArgs.seed,
                                        intThreads=objArgs.threads, dBudget=getBudget(objArgs),
                                        intCap=objArgs.cap_size)
    strProv = 'interval' if objArgs.mode == 'exact' and dReport['strTarget'] == 'kesten' else 'mc'
    cellRows = [[d['tplWindow'][0], d['tplWindow'][1], d['numTv'], d['numTvLower'], d['numTvUpper'], d['numRatio'],
                 d['numResidual'], d['intSamples'], strProv] for d in dReport['cellRows']]
    dSummary = {'target': dReport['strTarget'], 'routing': dReport['strRouting'],
                'ratio_limit': dReport['numRatioLimit']}
    return ['n', 'n1', 'tv', 'tv_lower', 'tv_upper', 'ratio', 'residual', 'samples', 'provenance'], cellRows, dSummary


def cmdKestenStigum(objArgs, dDist):
    _, dReport = kesten_stigum_mc(dDist, objArgs.n, intReps=objArgs.reps, intSeed=objArgs.seed,
                                  intThreads=objArgs.threads, dblEps=objArgs.eps)
    cellRows = [['mean_W_n', dReport['dblMeanW'], 'mc'],
                ['sem', dReport['dblSem'], 'mc'],
                ['ci_lower', dReport['vecCI'][0], 'mc'],
                ['ci_upper', dReport['vecCI'][1], 'mc'],
                ['frac_below_eps', dReport['dblFracBelowEps'], 'mc'],
                ['frac_extinct', dReport['dblFracExtinct'], 'mc'],
                ['extinct_by_n', dReport['dblExtinctByN'], 'float'],
                ['q', dReport['numQ'], getProvenance(dReport['numQ'], dDist['boolExact'])],
                ['zeta_log_zeta', dReport['dblZetaLogZeta'], 'float'],
                ['consistent', dReport['boolConsistent'], 'mc']]
    return ['quantity', 'value', 'provenance'], cellRows, None


def cmdCondense(objArgs, dDist):
    tplWindow = None if objArgs.window is None else parseWindow(objArgs.window)
    _, dReport = condensation_experiment(dDist, intReps=objArgs.reps, intDepthCap=objArgs.depth_cap,
                                         setA=parseSet(objArgs.set), intH=objArgs.h, tplWindow=tplWindow,
                                         intCap=objArgs.cap_size, intSeed=objArgs.seed, intThreads=objArgs.threads,
                                         dBudget=getBudget(objArgs))
    intCap = objArgs.depth_cap
    cellRows = [[str(d) if d <= intCap else '>%d' % intCap, int(c), float(e)]
                for d, (c, e) in enumerate(zip(dReport['vecDepthCounts'], dReport['vecDepthExpected']))]
    dSummary = {'tv_depth': dReport['dblTvDepth'], 'chi2': dReport['dblChi2'], 'chi2_p': dReport['dblChi2P'],
                'frac_depth0': dReport['dblFracDepth0'], 'frac_one_infinite': dReport['dblFracOneInfinite'],
                'infinite_counts': '/'.join(str(int(c)) for c in dReport['vecInfiniteCounts']),
                'tv_law': dReport['numTvLaw'], 'complement_law': dReport['numComplementLaw']}
    return ['depth', 'count', 'expected'], cellRows, dSummary


def cmdProbe(objArgs, dDist):
    strClass, dReport = property_probe(parseFunctional(objArgs.functional), objArgs.max_size)
    cellRows = [[tplT, json.dumps(list(tplX)), d['strClass'], d['intD'], d['intN0']]
                for (tplT, tplX), d in dReport['dPairs'].items()]
    return ['tree', 'leaf', 'class', 'D', 'n0'], cellRows, {'class': strClass}


DICT_COMMANDS = {'solve': cmdSolve, 'derive': cmdDerive, 'tilt': cmdTilt, 'classify': cmdClassify,
                 'law': cmdLaw, 'dwass': cmdDwass, 'ratio': cmdRatio, 'converge': cmdConverge,
                 'kesten-stigum': cmdKestenStigum, 'condense': cmdCondense, 'probe': cmdProbe}


# %% entry points


def run(argv=None):
    """
    Parses argv, dispatches to the subcommand and writes its output; returns the exit code
    """
    try:
        objArgs = getParser().parse_args(argv)
    except SystemExit as objExit:
        return INT_EXIT_OK if objExit.code in (0, None) else INT_EXIT_INPUT
    logging.basicConfig(level=logging.INFO if objArgs.verbose else logging.WARNING,
                        format='%(levelname)s %(message)s')
    try:
        if objArgs.command != 'probe' and objArgs.dist is None:
            raise ValueError("Input error: --dist is required for %s" % objArgs.command)
        dDist = None if objArgs.dist is None else parse_distribution(objArgs.dist)
        dConfig = getConfig(objArgs)
        objStream = io.StringIO()
        if objArgs.command == 'sample':
            writeLines(objStream, dConfig, cmdSample(objArgs, dDist), objArgs.format)
        else:
            cellColumns, cellRows, dSummary = DICT_COMMANDS[objArgs.command](objArgs, dDist)
            writeTable(objStream, dConfig, cellColumns, cellRows, objArgs.format, dSummary)
    except BudgetError as objErr:
        sys.stderr.write("gwforge: budget exhausted: %s\n" % objErr)
        return INT_EXIT_BUDGET
    except (GWForgeError, AssertionError, ValueError) as objErr:
        sys.stderr.write("gwforge: %s: %s\n" % (type(objErr).__name__, objErr))
        return INT_EXIT_INPUT

    if objArgs.out is None:
        sys.stdout.write(objStream.getvalue())
    else:
        with open(objArgs.out, 'w') as objFile:
            objFile.write(objStream.getvalue())
    return INT_EXIT_OK


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == '__main__':
    main()

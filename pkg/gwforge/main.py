# -*- coding: utf-8 -*-
import numpy as np
import logging
import os
from concurrent.futures import ThreadPoolExecutor

from scipy import stats
from gwforge.dependencies import toNumber, getTvd
from gwforge.tree_dependencies import (getTreesUpTo, getLeaves, graft, getFunctionalValue, getGraftThreshold,
                                       restrict_star, getInfiniteCount, getFunctional)
from gwforge.offspring_dependencies import (getCriticality, genericity, requireSuperCritical, getIterate,
                                            extinction_probability, size_biased)
from gwforge.sample_dependencies import (getRngStream, getSampleBudget, sample_conditioned, sample_condensation,
                                         sample_process_batch)
from gwforge.enum_dependencies import (kesten_restriction_law, conditioned_restriction_law, conditioned_law,
                                       getWindowProb, graft_set_prob, eq_tmp_ratio, tv_distance, getCompleteLaw)
from gwforge.plot_dependencies import plotConvergence, plotRatioTable, plotKestenStigum, plotCondensation
from gwforge.errors import NotCritical, NotNonGeneric, Truncated


# %% shards


def getThreadCount(intThreads=None):
    """intThreads, else GWFORGE_THREADS, else 1."""
    if intThreads is None:
        intThreads = int(os.environ.get('GWFORGE_THREADS', 1))
    assert intThreads >= 1, "intThreads must be a positive integer"
    return int(intThreads)


def runShards(fShard, intSeed, intReps, intThreads):
    """
    Runs fShard(objRng, intShardReps) on intThreads streams and returns the shard
    results in stream order, so the output depends on (seed, intThreads) only.
    """
    vecReps = np.full(intThreads, intReps // intThreads)
    vecReps[:intReps % intThreads] += 1
    cellRngs = [getRngStream(intSeed, intStream) for intStream in range(intThreads)]
    if intThreads == 1:
        return [fShard(cellRngs[0], int(vecReps[0]))]
    with ThreadPoolExecutor(max_workers=intThreads) as objPool:
        return list(objPool.map(fShard, cellRngs, [int(r) for r in vecReps]))


def getEmpiricalLaw(cellTrees):
    dCounts = dict()
    for tplT in cellTrees:
        dCounts[tplT] = dCounts.get(tplT, 0) + 1
    intTotal = len(cellTrees)
    return {tplT: intC / intTotal for tplT, intC in dCounts.items()}


def getEmpiricalBand(dLaw, intSamples, dblSigma=3.0):
    """Half the summed dblSigma binomial half-widths of an empirical law."""
    if intSamples == 0:
        return 1.0
    return 0.5 * sum(dblSigma * np.sqrt(v * (1 - v) / intSamples) for v in dLaw.values())


# %% routing


def getLimitTarget(dDist, dFunctional):
    """
    Local limit of the conditioned tree for this offspring law and functional

    Critical laws and sub-critical height conditioning go to Kesten's tree of p.
    Sub-critical size and leaves conditioning route through genericity: Kesten's tree
    of the critical tilt p^(*) if generic, the condensation tree of p~^(*) if not.
    Sub-critical maxdeg conditioning goes to the condensation tree of p.
    """
    dTarget = dict()
    dTarget['strTarget'] = None
    dTarget['dTargetDist'] = None
    dTarget['strRouting'] = None
    dTarget['dGenericity'] = None
    strCrit = getCriticality(dDist)
    strName = dFunctional['strName']
    if strCrit == 'super-critical':
        raise NotCritical("Input error: conditioned limits need m <= 1, got m=%s" % dDist['numMean'])
    if strCrit == 'critical':
        dTarget.update({'strTarget': 'kesten', 'dTargetDist': dDist, 'strRouting': 'critical: Kesten(p)'})
    elif strName == 'height':
        dTarget.update({'strTarget': 'kesten', 'dTargetDist': dDist, 'strRouting': 'sub-critical height: Kesten(p)'})
    elif strName in ('size', 'leaves'):
        dGen = genericity(dDist, dFunctional['setA'])
        dTarget['dGenericity'] = dGen
        if dGen['strClass'] == 'Generic':
            dTarget.update({'strTarget': 'kesten', 'dTargetDist': dGen['dDistStar'],
                            'strRouting': 'sub-critical generic: Kesten(p^(*)), theta_c=%s' % dGen['numThetaC']})
        else:
            dTarget.update({'strTarget': 'condensation', 'dTargetDist': dGen['dDistStar'],
                            'strRouting': 'sub-critical non-generic: condensation(p~^(*)), theta*=%s'
                                          % dGen['numThetaStar']})
    elif strName == 'maxdeg':
        dTarget.update({'strTarget': 'condensation', 'dTargetDist': dDist,
                        'strRouting': 'sub-critical maxdeg: condensation(p)'})
    else:
        raise NotCritical("Input error: no local limit is available for sub-critical %s conditioning" % strName)
    return dTarget


def getGraftPairs(dDist, intMaxSize=3):
    """(t, x) with P(tau in T(t,x)) > 0 over the trees with at most intMaxSize nodes."""
    cellPairs = []
    for tplT in getTreesUpTo(intMaxSize):
        for tplX in getLeaves(tplT):
            if graft_set_prob(dDist, tplT, tplX) != 0:
                cellPairs.append((tplT, tplX))
    return cellPairs


def getGraftResidual(dDist, dFunctional, tplWindow, cellPairs):
    """Largest |lhs - rhs| of the graft identity over the pairs with n >= n0; lhs is enumerated when possible."""
    numMax = None
    intN, intN1 = tplWindow
    dCondLaw = getCompleteLaw(dDist, dFunctional, tplWindow)
    for tplT, tplX in cellPairs:
        if intN < getGraftThreshold(dFunctional, tplT, tplX):
            continue
        numLhs, numRhs = eq_tmp_ratio(dDist, dFunctional, tplT, tplX, intN, intN1, dCondLaw=dCondLaw)
        numRes = abs(numLhs - numRhs)
        numMax = numRes if numMax is None else max(numMax, numRes)
    return numMax


# %% convergence experiment


def convergence_experiment(dDist, dFunctional, cellWindows, intH, strMode='exact', intReps=None, intSeed=None,
                           intThreads=None, dBudget=None, intCap=None, boolPlot=False):
    """
    Distance between r_h of the conditioned tree and r_h of its local limit, per window

    Syntax:
    vecTv, dReport = convergence_experiment(dDist, dFunctional, cellWindows, intH, strMode='exact',
                                            intReps=None, intSeed=None, intThreads=None, dBudget=None,
                                            intCap=None, boolPlot=False)

    Parameters
    ----------
    dDist : dict
        critical or sub-critical offspring distribution
    dFunctional : dict
        FunctionalSpec from getFunctional
    cellWindows : list of tuples
        windows (n, n1); n1=None is the tail window [n, inf)
    intH : int
        restriction level

    Optional Parameters
    ----------
    strMode : str
        'exact' computes the conditioned laws with the enumeration oracle, 'mc' samples them
        by rejection (default: 'exact')
    intReps : int
        Monte Carlo samples per window, and for a sampled condensation target (default: 10000)
    intSeed : int
        seed of the random streams (default: 0)
    intThreads : int
        number of streams run in parallel (default: GWFORGE_THREADS or 1)
    dBudget : dict
        SampleBudget from getSampleBudget
    intCap : int
        size cap of the enumerations behind maxgen and the condensation comparison
    boolPlot : boolean switch
        plotting switch (default: False)

    Returns
    -------
    vecTv : 1D array (float)
        TV distance per window
    dReport : dict (ConvergenceReport)
        dFunctional; cellWindows; intH; strMode; strTarget ('kesten' or 'condensation');
        strRouting; dGenericity; dTargetLaw; numRatioLimit; cellRows with per window:
            tplWindow; numTv; numTvLower; numTvUpper; numRatio (P(A_(n+1))/P(A_n));
            numResidual (graft identity, exact mode, Additivity/Identity only); intSamples

    The kesten target is the exact law of r_h(tau*); the condensation target is sampled
    and compared through r_h^inf. In exact mode with a kesten target, TV brackets come
    from the unenumerated mass; otherwise they are 3-sigma Monte Carlo bands.

    Version history:
    1.0 - 2026 Created
    """
    # %% build placeholder outputs
    vecTv = np.zeros(len(cellWindows))
    dReport = dict()
    dReport['dFunctional'] = dFunctional
    dReport['cellWindows'] = list(cellWindows)
    dReport['intH'] = intH
    dReport['strMode'] = strMode
    dReport['strTarget'] = None
    dReport['strRouting'] = None
    dReport['dGenericity'] = None
    dReport['dTargetLaw'] = None
    dReport['numRatioLimit'] = None
    dReport['cellRows'] = []

    # %% check inputs
    assert strMode in ('exact', 'mc'), "strMode must be 'exact' or 'mc'"
    assert intH >= 0, "intH must be nonnegative"
    if intReps is None:
        intReps = 10000
    assert intReps > 0, "intReps must be a positive integer"
    if intSeed is None:
        intSeed = 0
    intThreads = getThreadCount(intThreads)
    if dBudget is None:
        dBudget = getSampleBudget()
    if boolPlot is None:
        boolPlot = False

    # %% target
    dTarget = getLimitTarget(dDist, dFunctional)
    dReport.update({k: dTarget[k] for k in ('strTarget', 'strRouting', 'dGenericity')})
    logging.info("convergence_experiment: %s" % dTarget['strRouting'])
    boolKesten = dTarget['strTarget'] == 'kesten'
    if boolKesten:
        dTargetLaw = kesten_restriction_law(dTarget['dTargetDist'], intH)
    else:
        dCond = dTarget['dTargetDist']
        dStar = size_biased(dCond)

        def fTarget(objRng, intShardReps):
            cellOut = []
            for _ in range(intShardReps):
                _, dExt = sample_condensation(dCond, objRng, intH, dBudget, dStar)
                cellOut.append(restrict_star(dExt, intH))
            return cellOut

        cellShards = runShards(fTarget, intSeed, intReps, intThreads)
        dTargetLaw = {'dLaw': getEmpiricalLaw([t for c in cellShards for t in c]), 'numComplement': 0}
    dReport['dTargetLaw'] = dTargetLaw
    if dFunctional['strName'] == 'height':
        dReport['numRatioLimit'] = dDist['numMean']
    elif getCriticality(dDist) == 'critical':
        dReport['numRatioLimit'] = toNumber(1, dDist['boolExact'])

    boolIdentity = dFunctional['strClass'] in ('Additivity', 'Identity')
    cellPairs = getGraftPairs(dDist) if strMode == 'exact' and boolIdentity else []

    # %% windows
    for intW, tplWindow in enumerate(cellWindows):
        dRow = dict()
        dRow['tplWindow'] = tuple(tplWindow)
        dRow['numResidual'] = None
        dRow['intSamples'] = None
        if strMode == 'exact' and boolKesten:
            dLaw = conditioned_restriction_law(dDist, dFunctional, tplWindow, intH, intCap)
            numTv, dTV = tv_distance(dLaw, dTargetLaw)
            dRow.update({'numTv': numTv, 'numTvLower': dTV['numLower'], 'numTvUpper': dTV['numUpper']})
        elif strMode == 'exact':
            dCondLaw = conditioned_law(dDist, dFunctional, tplWindow, intCap)
            dStarLaw = dict()
            for tplT, numP in dCondLaw['dLaw'].items():
                tplS = restrict_star(tplT, intH)
                dStarLaw[tplS] = dStarLaw.get(tplS, 0) + numP
            numTv = getTvd(dStarLaw, dTargetLaw['dLaw'])
            dblBand = getEmpiricalBand(dTargetLaw['dLaw'], intReps)
            dRow.update({'numTv': numTv, 'numTvLower': max(0.0, float(numTv) - dblBand),
                         'numTvUpper': min(1.0, float(numTv) + dblBand + float(dCondLaw['numComplement']))})
        else:
            intRestrictH = intH if boolKesten else None

            def fConditioned(objRng, intShardReps):
                cellOut = []
                intDropped = 0
                for _ in range(intShardReps):
                    try:
                        tplT = sample_conditioned(dDist, dFunctional, tplWindow, objRng, dBudget, intRestrictH)
                    except Truncated:
                        intDropped += 1
                        continue
                    cellOut.append(tplT if boolKesten else restrict_star(tplT, intH))
                if intDropped > 0:
                    logging.warning("convergence_experiment: dropped %d truncated samples" % intDropped)
                return cellOut

            cellShards = runShards(fConditioned, intSeed + 1 + intW, intReps, intThreads)
            cellTrees = [t for c in cellShards for t in c]
            dEmp = getEmpiricalLaw(cellTrees)
            numTv = getTvd(dEmp, dTargetLaw['dLaw'])
            dblBand = getEmpiricalBand(dEmp, len(cellTrees))
            if not boolKesten:
                dblBand += getEmpiricalBand(dTargetLaw['dLaw'], intReps)
            dRow.update({'numTv': numTv, 'numTvLower': max(0.0, numTv - dblBand),
                         'numTvUpper': min(1.0, numTv + dblBand), 'intSamples': len(cellTrees)})

        # ratio of window probabilities
        if dFunctional['strName'] != 'maxgen' or intCap is not None:
            numNow = getWindowProb(dDist, dFunctional, tplWindow, intCap)
            numNext = getWindowProb(dDist, dFunctional, (tplWindow[0] + 1, tplWindow[1]), intCap)
            dRow['numRatio'] = None if numNow == 0 else numNext / numNow
        else:
            dRow['numRatio'] = None
        if cellPairs:
            dRow['numResidual'] = getGraftResidual(dDist, dFunctional, tuple(tplWindow), cellPairs)
        dReport['cellRows'].append(dRow)
        vecTv[intW] = float(dRow['numTv'])

    # %% plot
    if boolPlot:
        plotConvergence(dReport)

    # %% return
    return vecTv, dReport


# %% window ratios


def ratio_table(dDist, dFunctional, vecN, intN1=None, intStep=1, intCap=None, boolPlot=False):
    """
    Ratios P(A_(n+step)) / P(A_n) with A_n = {A(tau) in [n, n+n1)}

    Syntax:
    vecRatio, dReport = ratio_table(dDist, dFunctional, vecN, intN1=None, intStep=1, intCap=None, boolPlot=False)

    Parameters
    ----------
    vecN : iterable of int
        window starts
    intN1 : int or None
        window length (None: tail windows)
    intStep : int
        shift of the numerator window; use the period of p for periodic laws (default: 1)

    Returns
    -------
    vecRatio : 1D array (float)
        ratios, nan where P(A_n) = 0
    dReport : dict
        cellRows (intN, numProb, numProbNext, numRatio, boolZeroWindow); numLimit (m for
        height, 1 for the other functionals of a critical law, else None); strLimit
    """
    # %% build placeholder outputs
    vecN = [int(n) for n in vecN]
    vecRatio = np.full(len(vecN), np.nan)
    dReport = dict()
    dReport['cellRows'] = []
    dReport['numLimit'] = None
    dReport['strLimit'] = None

    # %% check inputs
    assert intStep >= 1, "intStep must be a positive integer"
    if dFunctional['strName'] == 'height':
        dReport['numLimit'] = dDist['numMean']
        dReport['strLimit'] = 'm'
    elif getCriticality(dDist) == 'critical':
        dReport['numLimit'] = toNumber(1, dDist['boolExact'])
        dReport['strLimit'] = '1'

    # %% ratios
    for intI, intN in enumerate(vecN):
        numProb = getWindowProb(dDist, dFunctional, (intN, intN1), intCap)
        numProbNext = getWindowProb(dDist, dFunctional, (intN + intStep, intN1), intCap)
        dRow = dict()
        dRow['intN'] = intN
        dRow['numProb'] = numProb
        dRow['numProbNext'] = numProbNext
        dRow['boolZeroWindow'] = numProb == 0
        dRow['numRatio'] = None if numProb == 0 else numProbNext / numProb
        if dRow['boolZeroWindow']:
            logging.warning("ratio_table: P(A_n) = 0 at n=%d" % intN)
        else:
            vecRatio[intI] = float(dRow['numRatio'])
        dReport['cellRows'].append(dRow)

    if boolPlot:
        plotRatioTable(dReport)
    return vecRatio, dReport


# %% Kesten-Stigum


def getZetaLogZeta(dDist):
    """E[zeta log+ zeta] over the stored support and whether it is a truncated sum."""
    vecPmf = np.asarray(dDist['vecPmf'], dtype=np.float64)
    vecK = np.arange(len(vecPmf), dtype=np.float64)
    vecLog = np.log(np.maximum(vecK, 1.0))
    return float(np.sum(vecPmf * vecK * vecLog)), dDist['dblTailBound'] > 0


def kesten_stigum_mc(dDist, intN, intReps=None, intSeed=None, intThreads=None, dblEps=0.01,
                     dblConfidence=0.95, boolPlot=False):
    """
    Monte Carlo look at the normalized population W_n = Z_n / m^n of a super-critical law

    Syntax:
    dblMeanW, dReport = kesten_stigum_mc(dDist, intN, intReps=None, intSeed=None, intThreads=None,
                                         dblEps=0.01, dblConfidence=0.95, boolPlot=False)

    Parameters
    ----------
    dDist : dict
        super-critical offspring distribution satisfying 0<p(0)<1, p(0)+p(1)<1
    intN : int
        generation
    intReps : int
        number of processes (default: 100000)

    Returns
    -------
    dblMeanW : float
        sample mean of W_n (E[W_n] = 1)
    dReport : dict
        dblMeanW; dblSem; vecCI (normal interval at dblConfidence); dblFracBelowEps
        (P(W_n < eps)); dblFracExtinct (P(Z_n = 0)); dblExtinctByN (g_n(0), its exact
        value); numQ; dblZetaLogZeta; boolTruncatedSum; boolZetaLogZetaFinite;
        boolConsistent (extinct fraction within 3 sigma of g_n(0)); vecW

    With E[zeta log+ zeta] finite, W = lim W_n satisfies P(W = 0) = q; with finite
    support this always holds and the extinct fraction approaches q as n grows.

    Version history:
    1.0 - 2026 Created
    """
    # %% build placeholder outputs
    dblMeanW = np.nan
    dReport = dict()
    dReport['dblMeanW'] = None
    dReport['dblSem'] = None
    dReport['vecCI'] = None
    dReport['dblFracBelowEps'] = None
    dReport['dblFracExtinct'] = None
    dReport['dblExtinctByN'] = None
    dReport['numQ'] = None
    dReport['dblZetaLogZeta'] = None
    dReport['boolTruncatedSum'] = None
    dReport['boolZetaLogZetaFinite'] = None
    dReport['boolConsistent'] = None
    dReport['vecW'] = None

    # %% check inputs
    requireSuperCritical(dDist, 'kesten_stigum_mc')
    assert intN >= 0, "intN must be nonnegative"
    if intReps is None:
        intReps = 100000
    assert intReps > 1, "intReps must be an integer above 1"
    if intSeed is None:
        intSeed = 0
    intThreads = getThreadCount(intThreads)
    assert 0 < dblConfidence < 1, "dblConfidence must lie in (0,1)"

    # %% simulate
    def fShard(objRng, intShardReps):
        return sample_process_batch(dDist, objRng, intN, intShardReps)[:, intN]

    vecZ = np.concatenate(runShards(fShard, intSeed, intReps, intThreads))
    vecW = vecZ / float(dDist['numMean']) ** intN
    dblMeanW = float(np.mean(vecW))
    dblSem = float(np.std(vecW, ddof=1) / np.sqrt(len(vecW)))
    dblZ = stats.norm.ppf(0.5 + dblConfidence / 2)

    # %% compare with extinction
    numQ = extinction_probability(dDist)
    dblExtinctByN = float(getIterate(dDist, 0.0, intN))
    dblFracExtinct = float(np.mean(vecZ == 0))
    dblSigma = np.sqrt(dblExtinctByN * (1 - dblExtinctByN) / len(vecZ))
    dblZlogZ, boolTruncated = getZetaLogZeta(dDist)
    # the parametric families have E[zeta log zeta] < inf iff m < inf
    boolFinite = bool(np.isfinite(dblZlogZ)) and (not boolTruncated or np.isfinite(float(dDist['numMean'])))

    # %% build output structure
    dReport['dblMeanW'] = dblMeanW
    dReport['dblSem'] = dblSem
    dReport['vecCI'] = np.array([dblMeanW - dblZ * dblSem, dblMeanW + dblZ * dblSem])
    dReport['dblFracBelowEps'] = float(np.mean(vecW < dblEps))
    dReport['dblFracExtinct'] = dblFracExtinct
    dReport['dblExtinctByN'] = dblExtinctByN
    dReport['numQ'] = numQ
    dReport['dblZetaLogZeta'] = dblZlogZ
    dReport['boolTruncatedSum'] = boolTruncated
    dReport['boolZetaLogZetaFinite'] = boolFinite
    dReport['boolConsistent'] = bool(abs(dblFracExtinct - dblExtinctByN) <= 3 * dblSigma + 1e-12)
    dReport['vecW'] = vecW
    if not dReport['boolConsistent']:
        logging.warning("kesten_stigum_mc: extinct fraction %.5f is more than 3 sigma from g_n(0)=%.5f"
                        % (dblFracExtinct, dblExtinctByN))

    # %% plot
    if boolPlot:
        plotKestenStigum(dReport)
    return dblMeanW, dReport


# %% property probe


def getClassOfPair(tplT, tplX, cellTrees, dFunctional):
    """
    Strongest property of one (t, x) over the grafts of cellTrees

    A property holds when all its violations happen below a threshold n0 <= A(t) + 1.
    """
    intAt = getFunctionalValue(tplT, dFunctional)
    cellPairs = []
    for tplT2 in cellTrees:
        cellPairs.append((getFunctionalValue(tplT2, dFunctional),
                          getFunctionalValue(graft(tplT, tplX, tplT2), dFunctional)))

    def getN0(fHolds):
        return 1 + max((a for a2, a in cellPairs if not fHolds(a2, a)), default=0)

    intLimit = intAt + 1
    dPair = {'intN0': None, 'intD': None, 'strClass': None}
    intN0 = getN0(lambda a2, a: a == a2)
    if intN0 <= intLimit:
        dPair.update({'strClass': 'Identity', 'intN0': intN0, 'intD': 0})
        return dPair
    cellD = sorted(set(a - a2 for a2, a in cellPairs if a >= a2))
    cellFits = [(getN0(lambda a2, a, d=d: a == a2 + d), d) for d in cellD]
    if cellFits:
        intN0, intD = min(cellFits)
        if intN0 <= intLimit:
            dPair.update({'strClass': 'Additivity', 'intN0': intN0, 'intD': intD})
            return dPair
    intN0 = getN0(lambda a2, a: a >= a2)
    if intN0 <= intLimit:
        dPair.update({'strClass': 'Monotonicity', 'intN0': intN0})
    return dPair


def property_probe(dFunctional, intMaxSize=6):
    """
    Strongest graft property of a functional on all trees with at most intMaxSize nodes

    Syntax:
    strClass, dReport = property_probe(dFunctional, intMaxSize=6)

    Checks every (t, x, t') with t, t' of size <= intMaxSize and x a leaf of t, and
    returns 'Identity', 'Additivity', 'Monotonicity' or None, the weakest class over
    all pairs (t, x). dReport holds per pair the witnessed intN0 and D(t, x) (dPairs),
    the class count and, for Additivity, whether D is given by the known graft shift.
    """
    cellTrees = getTreesUpTo(intMaxSize)
    cellOrder = ['Identity', 'Additivity', 'Monotonicity', None]
    dPairs = dict()
    intWorst = 0
    for tplT in cellTrees:
        for tplX in getLeaves(tplT):
            dPair = getClassOfPair(tplT, tplX, cellTrees, dFunctional)
            dPairs[(tplT, tplX)] = dPair
            intWorst = max(intWorst, cellOrder.index(dPair['strClass']))
    strClass = cellOrder[intWorst]
    dReport = dict()
    dReport['strClass'] = strClass
    dReport['dPairs'] = dPairs
    dReport['intPairs'] = len(dPairs)
    dReport['dClassCounts'] = {str(c): sum(1 for d in dPairs.values() if d['strClass'] == c) for c in cellOrder}
    return strClass, dReport


# %% condensation


def condensation_experiment(dDist, intReps=None, intDepthCap=8, setA=None, intH=2, tplWindow=None, intCap=None,
                            intSeed=None, intThreads=None, dBudget=None, boolPlot=False):
    """
    Geometry of the condensation tree by sampling

    Syntax:
    dblTvDepth, dReport = condensation_experiment(dDist, intReps=None, intDepthCap=8, setA=None, intH=2,
                                                  tplWindow=None, intCap=None, intSeed=None, intThreads=None,
                                                  dBudget=None, boolPlot=False)

    Parameters
    ----------
    dDist : dict
        sub-critical offspring distribution
    intReps : int
        number of condensation trees (default: 100000)
    intDepthCap : int
        depths 0..cap are compared one by one, deeper ones in a single bin
    setA : set of int or None
        when given, p is routed through genericity for L_A conditioning: the sampled law
        is then p~^(*) and a generic p raises NotNonGeneric
    intH : int
        restriction level of the sampled trees
    tplWindow : tuple or None
        with setA, also compare r_h^inf of tau given L_A(tau) in the window (enumerated
        up to intCap nodes) with the sampled restrictions

    Returns
    -------
    dblTvDepth : float
        TV distance between the depth law of the infinite node and Geom(1-m)-1
    dReport : dict
        dblTvDepth; dblChi2; dblChi2P; dblFracDepth0; dblFracOneInfinite (samples carrying
        exactly one infinite node); vecInfiniteCounts (samples with 0, 1, 2.. infinite nodes);
        dblFracVisible (infinite node inside the r_h^inf window); dblAtom (1-m); vecDepthCounts;
        vecDepthExpected; dGenericity; numTvLaw; numComplementLaw (mass the enumeration of the
        conditioned law misses, counted in numTvLaw); dEmpiricalLaw

    Version history:
    1.0 - 2026 Created
    """
    # %% build placeholder outputs
    dblTvDepth = np.nan
    dReport = dict()
    dReport['dblTvDepth'] = None
    dReport['dblChi2'] = None
    dReport['dblChi2P'] = None
    dReport['dblFracDepth0'] = None
    dReport['dblFracOneInfinite'] = None
    dReport['dblFracVisible'] = None
    dReport['dblAtom'] = None
    dReport['vecDepthCounts'] = None
    dReport['vecInfiniteCounts'] = None
    dReport['vecDepthExpected'] = None
    dReport['dGenericity'] = None
    dReport['numTvLaw'] = None
    dReport['numComplementLaw'] = None
    dReport['dEmpiricalLaw'] = None

    # %% check inputs
    if intReps is None:
        intReps = 100000
    assert intReps > 0, "intReps must be a positive integer"
    assert intDepthCap >= 0 and intH >= 0, "intDepthCap and intH must be nonnegative"
    if intSeed is None:
        intSeed = 0
    intThreads = getThreadCount(intThreads)
    if dBudget is None:
        dBudget = getSampleBudget()

    # %% routing
    dCond = dDist
    if setA is not None:
        dGen = genericity(dDist, setA)
        dReport['dGenericity'] = dGen
        if dGen['strClass'] == 'Generic':
            raise NotNonGeneric("Input error: p is generic for A=%s (theta_c=%s); its limit is Kesten's tree"
                                % (sorted(setA), dGen['numThetaC']))
        dCond = dGen['dDistStar']
    dStar = size_biased(dCond)

    # %% sample
    def fShard(objRng, intShardReps):
        cellOut = []
        for _ in range(intShardReps):
            _, dExt = sample_condensation(dCond, objRng, intH, dBudget, dStar)
            cellOut.append((dExt['intInfiniteDepth'], len(dExt['setInfinite']) == 1, getInfiniteCount(dExt),
                            restrict_star(dExt, intH)))
        return cellOut

    cellSamples = [s for c in runShards(fShard, intSeed, intReps, intThreads) for s in c]
    vecDepth = np.array([s[0] for s in cellSamples], dtype=np.int64)

    # %% depth law
    dblMean = float(dCond['numMean'])
    dblAtom = 1 - dblMean
    vecCounts = np.bincount(np.minimum(vecDepth, intDepthCap + 1), minlength=intDepthCap + 2)
    vecProb = dblAtom * dblMean ** np.arange(intDepthCap + 1)
    vecProb = np.append(vecProb, dblMean ** (intDepthCap + 1))
    vecExpected = vecProb * len(vecDepth)
    dblTvDepth = 0.5 * float(np.sum(np.abs(vecCounts / len(vecDepth) - vecProb)))
    dblChi2, dblChi2P = stats.chisquare(f_obs=vecCounts, f_exp=vecExpected)

    dReport['dblTvDepth'] = dblTvDepth
    dReport['dblChi2'] = float(dblChi2)
    dReport['dblChi2P'] = float(dblChi2P)
    dReport['dblFracDepth0'] = float(np.mean(vecDepth == 0))
    vecInfinite = np.array([s[2] for s in cellSamples], dtype=np.int64)
    dReport['dblFracOneInfinite'] = float(np.mean(vecInfinite == 1))
    dReport['vecInfiniteCounts'] = np.bincount(vecInfinite, minlength=3)
    dReport['dblFracVisible'] = float(np.mean([s[1] for s in cellSamples]))
    dReport['dblAtom'] = dblAtom
    dReport['vecDepthCounts'] = vecCounts
    dReport['vecDepthExpected'] = vecExpected

    # %% compare with the conditioned tree
    if setA is not None and tplWindow is not None:
        dEmp = getEmpiricalLaw([s[3] for s in cellSamples])
        dFunctional = getFunctional('leaves', setA)
        dCondLaw = conditioned_law(dDist, dFunctional, tplWindow, intCap)
        dStarLaw = dict()
        for tplT, numP in dCondLaw['dLaw'].items():
            tplS = restrict_star(tplT, intH)
            dStarLaw[tplS] = dStarLaw.get(tplS, 0) + float(numP)
        dReport['numTvLaw'] = getTvd(dStarLaw, dEmp)
        dReport['numComplementLaw'] = dCondLaw['numComplement']
        dReport['dEmpiricalLaw'] = dEmp

    # %% plot
    if boolPlot:
        plotCondensation(dReport)
    return dblTvDepth, dReport

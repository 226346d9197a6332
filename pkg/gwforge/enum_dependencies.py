# -*- coding: utf-8 -*-
"""
Exact laws on small instances.

Everything here is computed with the arithmetic of the offspring distribution:
Fractions for exact pmfs, floats otherwise. TreeLaw dicts hold 'dLaw' {tree: prob},
'numMass' (probability captured) and 'numComplement' (probability outside the
enumeration window). PMF dicts hold 'dPmf' {value: prob} with the same two totals.
"""
import logging
import numpy as np
from gwforge.dependencies import (isExact, toNumber, getArray, getConvolution, getConvolutionPower,
                                  getSmallestFixedPoint, getTvd)
from gwforge.tree_dependencies import (getLabels, getWidth, getHeight, getFunctionalValue,
                                       getGraftMap, getGraftShift, getGraftThreshold, getLeafPosition,
                                       graft_set_contains, isInWindow, restrict)
from gwforge.offspring_dependencies import (gen_fn, conjugate, extinction_probability, getCriticality,
                                            getMassA, size_biased)
from gwforge.errors import (SupportTooLarge, WindowUnreachable, PropertyMismatch, PeriodicDistribution,
                            NotCritical, DegenerateDistribution, ZeroOrInfiniteMean, EmptyIntersection)

INT_MAX_TREES = 2 * 10 ** 5
INT_MAX_IDENTITY_CAP = 11
DBL_COMPLETE_TOL = 1e-12


# %% containers


def getTreeLaw(dLaw, boolExact):
    numMass = sum(dLaw.values(), toNumber(0, boolExact))
    dTreeLaw = dict()
    dTreeLaw['dLaw'] = dLaw
    dTreeLaw['numMass'] = numMass
    dTreeLaw['numComplement'] = getComplement(numMass)
    return dTreeLaw


def getPmfLaw(dPmf, boolExact, numComplement=None):
    numMass = sum(dPmf.values(), toNumber(0, boolExact))
    dOut = dict()
    dOut['dPmf'] = dPmf
    dOut['numMass'] = numMass
    dOut['numComplement'] = getComplement(numMass) if numComplement is None else numComplement
    return dOut


def getComplement(numMass):
    if isExact(numMass):
        return 1 - numMass
    return max(0.0, 1 - float(numMass))


def getSupport(dDist):
    vecPmf = dDist['vecPmf']
    return [k for k in range(len(vecPmf)) if vecPmf[k] != 0]


def checkCount(intCount, intMaxTrees, strFunc):
    if intCount > intMaxTrees:
        raise SupportTooLarge("Input error: %s needs more than %d trees; lower the cap" % (strFunc, intMaxTrees))


def getForestProduct(dForest, dTrees, intMaxTrees, strFunc):
    """All concatenations of a forest from dForest with one more tree from dTrees."""
    checkCount(len(dForest) * len(dTrees), intMaxTrees, strFunc)
    dOut = dict()
    for tplF, numF in dForest.items():
        for tplT, numT in dTrees.items():
            dOut[tplF + tplT] = numF * numT
    return dOut


# %% tree laws


def enumerate_law(dDist, intSizeCap, intMaxTrees=None):
    """
    Exact law of the GW tree on all trees with at most intSizeCap nodes

    dTreeLaw = enumerate_law(dDist, intSizeCap, intMaxTrees=None)

    Trees of size n are built from the root degree k and the compositions of n-1 into
    k subtree sizes, with memoized forest laws. P(tau=t) is the product of p(k_u(t))
    over the nodes. raises SupportTooLarge beyond intMaxTrees stored trees.
    """
    if intMaxTrees is None:
        intMaxTrees = INT_MAX_TREES
    assert intSizeCap >= 1, "size cap must be positive"
    vecPmf = dDist['vecPmf']
    cellSupport = getSupport(dDist)
    cellTrees = [None, dict()]
    if vecPmf[0] != 0:
        cellTrees[1][(0,)] = vecPmf[0]
    dForests = dict()

    def getForest(intN, intK):
        # forests of intK trees with intN nodes in total
        if (intN, intK) in dForests:
            return dForests[(intN, intK)]
        dOut = dict()
        if intK == 1:
            dOut = cellTrees[intN]
        else:
            for intS in range(1, intN - intK + 2):
                dRest = getForest(intN - intS, intK - 1)
                if cellTrees[intS] and dRest:
                    dOut.update(getForestProduct(cellTrees[intS], dRest, intMaxTrees, 'enumerate_law'))
        dForests[(intN, intK)] = dOut
        return dOut

    intCount = len(cellTrees[1])
    for intN in range(2, intSizeCap + 1):
        dTrees = dict()
        for intK in cellSupport:
            if intK == 0 or intK > intN - 1:
                continue
            for tplF, numF in getForest(intN - 1, intK).items():
                dTrees[(intK,) + tplF] = vecPmf[intK] * numF
        cellTrees.append(dTrees)
        intCount += len(dTrees)
        checkCount(intCount, intMaxTrees, 'enumerate_law')

    dLaw = dict()
    for dTrees in cellTrees[1:]:
        dLaw.update(dTrees)
    return getTreeLaw(dLaw, dDist['boolExact'])


def restriction_law(dDist, intH, intMaxTrees=None):
    """
    Exact law of r_h(tau)

    r_h(tau) has root degree k with probability p(k) and k independent copies of
    r_(h-1)(tau) below the root.
    """
    if intMaxTrees is None:
        intMaxTrees = INT_MAX_TREES
    assert intH >= 0, "restriction level must be nonnegative"
    vecPmf = dDist['vecPmf']
    boolExact = dDist['boolExact']
    cellSupport = getSupport(dDist)
    dLevel = {(0,): toNumber(1, boolExact)}
    for _ in range(intH):
        dNext = dict()
        dForest = {(): toNumber(1, boolExact)}
        for intK in range(0, max(cellSupport) + 1):
            if intK > 0:
                dForest = getForestProduct(dForest, dLevel, intMaxTrees, 'restriction_law')
            if vecPmf[intK] == 0:
                continue
            for tplF, numF in dForest.items():
                dNext[(intK,) + tplF] = vecPmf[intK] * numF
            checkCount(len(dNext), intMaxTrees, 'restriction_law')
        dLevel = dNext
    return getTreeLaw(dLevel, boolExact)


def kesten_restriction_law(dDist, intH, intMaxTrees=None):
    """
    Exact law of r_h(tau*): P(r_h(tau*) = t) = z_h(t) P(r_h(tau) = t) / m^h
    """
    if not dDist['boolHypP']:
        raise DegenerateDistribution("Input error: kesten_restriction_law needs 0<p(0)<1 and p(0)+p(1)<1")
    numMean = dDist['numMean']
    if not (0 < numMean < np.inf):
        raise ZeroOrInfiniteMean("Input error: kesten_restriction_law needs 0 < m < inf, got m=%s" % numMean)
    dRestricted = restriction_law(dDist, intH, intMaxTrees)
    numScale = numMean ** intH
    dLaw = dict()
    for tplT, numP in dRestricted['dLaw'].items():
        intZ = getWidth(tplT, intH)
        if intZ > 0:
            dLaw[tplT] = intZ * numP / numScale
    return getTreeLaw(dLaw, dDist['boolExact'])


# %% functional laws


def getLeafSeries(dDist, setA, intCap):
    """
    Coefficients f_0..f_cap of E[x^L_A(tau)] (setA None counts every node)

    F solves F = sum_k p(k) x^[k in A] F^k. Column n of the powers F^k is first built
    with f_n = 0 and then corrected by k F(0)^(k-1) f_n, which makes each step linear.
    """
    vecPmf = dDist['vecPmf']
    boolExact = dDist['boolExact']
    intK = len(vecPmf) - 1
    vecIn = [setA is None or k in setA for k in range(intK + 1)]
    if getMassA(dDist, setA) == 0:
        raise EmptyIntersection("Input error: p(A)=0 for A=%s" % (sorted(setA),))
    if vecIn[0]:
        numF0 = toNumber(0, boolExact)
    else:
        vecOff = getArray([0 if vecIn[k] else vecPmf[k] for k in range(intK + 1)], boolExact)
        numF0 = getSmallestFixedPoint(vecOff)
    numZero = numF0 * 0
    numDen = 1 - sum((k * vecPmf[k] * numF0 ** (k - 1) for k in range(1, intK + 1)
                      if not vecIn[k] and vecPmf[k] != 0), numZero)
    cellF = [numF0]
    cellPow = [[numZero + 1]] + [[numF0 ** k] for k in range(1, intK + 1)]
    for intN in range(1, intCap + 1):
        cellF.append(numZero)
        cellPow[0].append(numZero)
        for k in range(1, intK + 1):
            cellPrev = cellPow[k - 1]
            cellPow[k].append(sum((cellF[j] * cellPrev[intN - j] for j in range(intN + 1)), numZero))
        numRhs = numZero
        for k in range(intK + 1):
            if vecPmf[k] == 0:
                continue
            numRhs += vecPmf[k] * (cellPow[k][intN - 1] if vecIn[k] else cellPow[k][intN])
        numFn = numRhs / numDen
        cellF[intN] = numFn
        for k in range(1, intK + 1):
            cellPow[k][intN] += k * numF0 ** (k - 1) * numFn
    return cellF


def getHeightCdf(dDist, intCap):
    """P(H(tau) <= j) = g_(j+1)(0) for j = 0..cap."""
    numR = toNumber(0, dDist['boolExact'])
    cellCdf = []
    for _ in range(intCap + 1):
        numR = gen_fn(dDist, numR)[0]
        cellCdf.append(numR)
    return cellCdf


def getMaxDegCdf(dDist, intCap):
    """P(M(tau) <= j): smallest fixed point of sum_{k<=j} p(k) r^k."""
    vecPmf = dDist['vecPmf']
    cellCdf = []
    for intJ in range(intCap + 1):
        cellCdf.append(getSmallestFixedPoint(vecPmf[:intJ + 1].copy()))
    return cellCdf


def functional_law(dDist, dFunctional, intCap, boolEnumerate=False, intMaxTrees=None):
    """
    Law of A(tau) on the values 0..intCap

    dPmfLaw = functional_law(dDist, dFunctional, intCap, boolEnumerate=False)

    Parameters
    ----------
    dDist : dict
        offspring distribution
    dFunctional : dict
        FunctionalSpec from getFunctional
    intCap : int
        largest value reported (for maxgen: largest enumerated tree size)
    boolEnumerate : bool
        group enumerate_law by the functional instead of using the recursions

    Returns
    -------
    dPmfLaw : dict
        dPmf {value: probability}; numMass; numComplement

    Height uses P(H = n) = g_(n+1)(0) - g_n(0), size and leaves the power series
    recursion of getLeafSeries, maxdeg the fixed points of the truncated generating
    functions. maxgen has no recursion and is always enumerated; its values are then
    lower bounds.
    """
    strName = dFunctional['strName']
    boolExact = dDist['boolExact']
    if boolEnumerate or strName == 'maxgen':
        dLaw = enumerate_law(dDist, intCap, intMaxTrees)['dLaw']
        dPmf = dict()
        for tplT, numP in dLaw.items():
            intA = getFunctionalValue(tplT, dFunctional)
            dPmf[intA] = dPmf.get(intA, toNumber(0, boolExact)) + numP
        if strName == 'maxgen':
            return getPmfLaw(dict(sorted(dPmf.items())), boolExact)
        # trees above the cap may still carry small values
        return getPmfLaw({k: v for k, v in sorted(dPmf.items()) if k <= intCap}, boolExact)

    if strName == 'height':
        cellCdf = getHeightCdf(dDist, intCap)
        cellValues = [cellCdf[0]] + [cellCdf[j] - cellCdf[j - 1] for j in range(1, intCap + 1)]
    elif strName == 'maxdeg':
        cellCdf = getMaxDegCdf(dDist, intCap)
        cellValues = [cellCdf[0]] + [cellCdf[j] - cellCdf[j - 1] for j in range(1, intCap + 1)]
    else:
        cellValues = getLeafSeries(dDist, dFunctional['setA'], intCap)
    dPmf = {j: v for j, v in enumerate(cellValues) if v != 0}
    return getPmfLaw(dPmf, boolExact)


def dwass_check(dDist, intN):
    """
    P(|tau| = n) from the size recursion against (1/n) P(S_n = n-1) from convolution

    (numLhs, numRhs) = dwass_check(dDist, intN)
    """
    assert intN >= 1, "n must be positive"
    if getCriticality(dDist) == 'super-critical':
        logging.warning("dwass_check: super-critical input, both sides count finite trees only")
    dSize = functional_law(dDist, {'strName': 'size', 'setA': None, 'strClass': 'Additivity'}, intN)['dPmf']
    numLhs = dSize.get(intN, toNumber(0, dDist['boolExact']))
    vecSum = getConvolutionPower(dDist['vecPmf'], intN, intN)
    numRhs = (vecSum[intN - 1] if intN - 1 < len(vecSum) else toNumber(0, dDist['boolExact'])) / intN
    return numLhs, numRhs


# %% window probabilities


def getRestrictionShape(tplS, intH, dFunctional):
    """Frontier width of s = r_h(tau) and the part of A already fixed by s."""
    cellLabels = getLabels(tplS)
    intZ = sum(1 for u in cellLabels if len(u) == intH)
    cellInner = [k for u, k in zip(cellLabels, tplS) if len(u) < intH]
    dShape = dict()
    dShape['intZ'] = intZ
    dShape['intH'] = intH
    dShape['intSizeInner'] = len(cellInner)
    if dFunctional['setA'] is not None:
        dShape['intLeavesInner'] = sum(1 for k in cellInner if k in dFunctional['setA'])
    else:
        dShape['intLeavesInner'] = len(cellInner)
    dShape['intMaxInner'] = max(cellInner, default=0)
    dShape['intHeight'] = getHeight(tplS)
    return dShape


def getWindowCalc(dDist, dFunctional, tplWindow):
    """
    Tables for P(A(tau) in W | r_h(tau) = s), for the functionals with a subtree decomposition

    Given s, the z_h(s) frontier nodes carry independent GW subtrees. Size and leaves add
    the subtree values to what s fixes, height takes h plus their maximum, maxdeg the
    maximum with the inner degrees of s.
    """
    strName = dFunctional['strName']
    assert strName != 'maxgen', "maxgen has no subtree decomposition"
    intN, intN1 = tplWindow
    dCalc = dict()
    dCalc['dFunctional'] = dFunctional
    dCalc['intN'] = intN
    dCalc['intN1'] = intN1
    dCalc['boolExact'] = dDist['boolExact']
    dCalc['intCap'] = max(intN - 1 if intN1 is None else intN + intN1 - 1, 0)
    if strName in ('size', 'leaves'):
        cellSeries = getLeafSeries(dDist, dFunctional['setA'], dCalc['intCap'])
        dCalc['vecSingle'] = getArray(cellSeries, all(isExact(v) for v in cellSeries))
        dCalc['dSums'] = dict()
    elif strName == 'height':
        dCalc['cellCdf'] = getHeightCdf(dDist, dCalc['intCap'])
    else:
        dCalc['cellCdf'] = getMaxDegCdf(dDist, dCalc['intCap'])
    return dCalc


def getSubtreeSumLaw(dCalc, intZ):
    dSums = dCalc['dSums']
    if intZ not in dSums:
        dSums[intZ] = getConvolutionPower(dCalc['vecSingle'], intZ, dCalc['intCap'] + 1)
    return dSums[intZ]


def getShapeCdf(dCalc, dShape, intV):
    """P(A <= v | s) for height and maxdeg."""
    boolExact = dCalc['boolExact']
    if intV < 0:
        return toNumber(0, boolExact)
    intZ = dShape['intZ']
    if dCalc['dFunctional']['strName'] == 'height':
        if intZ == 0:
            return toNumber(int(dShape['intHeight'] <= intV), boolExact)
        intJ = intV - dShape['intH']
        if intJ < 0:
            return toNumber(0, boolExact)
        return dCalc['cellCdf'][intJ] ** intZ
    if dShape['intMaxInner'] > intV:
        return toNumber(0, boolExact)
    return dCalc['cellCdf'][intV] ** intZ


def getShapeProb(dCalc, dShape):
    strName = dCalc['dFunctional']['strName']
    intN = dCalc['intN']
    intN1 = dCalc['intN1']
    boolExact = dCalc['boolExact']
    if strName in ('size', 'leaves'):
        intBase = dShape['intSizeInner'] if strName == 'size' else dShape['intLeavesInner']
        vecSum = getSubtreeSumLaw(dCalc, dShape['intZ'])
        intTop = intN if intN1 is None else intN + intN1
        numBelow = toNumber(0, boolExact)
        numInside = toNumber(0, boolExact)
        for intV in range(max(intBase, 0), intTop):
            intIdx = intV - intBase
            if intIdx >= len(vecSum):
                break
            if intV < intN:
                numBelow += vecSum[intIdx]
            else:
                numInside += vecSum[intIdx]
        return 1 - numBelow if intN1 is None else numInside
    numLow = getShapeCdf(dCalc, dShape, intN - 1)
    if intN1 is None:
        return 1 - numLow
    return getShapeCdf(dCalc, dShape, intN + intN1 - 1) - numLow


def getCalcWindowProb(dCalc):
    """P(A(tau) in W): the shape of r_0(tau)."""
    return getShapeProb(dCalc, getRestrictionShape((0,), 0, dCalc['dFunctional']))



def getWindowProb(dDist, dFunctional, tplWindow, intCap=None):
    """
    P(A(tau) in W)

    maxgen is enumerated up to intCap nodes and returns a lower bound.
    """
    if dFunctional['strName'] == 'maxgen':
        dPmf = functional_law(dDist, dFunctional, intCap)['dPmf']
        return sum((v for k, v in dPmf.items() if isInWindow(k, tplWindow)), toNumber(0, dDist['boolExact']))
    return getCalcWindowProb(getWindowCalc(dDist, dFunctional, tplWindow))


def getDefaultCap(dDist, dFunctional, tplWindow):
    """Size cap that covers a bounded size or leaves window when p(1) = 0."""
    intN, intN1 = tplWindow
    intTop = intN if intN1 is None else intN + intN1 - 1
    if dFunctional['strName'] == 'maxdeg':
        return intTop + 1
    if dFunctional['strName'] == 'leaves' and len(dDist['vecPmf']) > 1 and dDist['vecPmf'][1] == 0:
        return max(1, 2 * intTop - 1)
    return max(1, intTop)


# %% conditioned laws


def conditioned_law(dDist, dFunctional, tplWindow, intCap=None, intMaxTrees=None):
    """
    Law of tau given A(tau) in W, on the trees with at most intCap nodes

    dTreeLaw = conditioned_law(dDist, dFunctional, tplWindow, intCap=None)

    raises WindowUnreachable when P(A(tau) in W) = 0.
    """
    if intCap is None:
        intCap = getDefaultCap(dDist, dFunctional, tplWindow)
    numDen = getWindowProb(dDist, dFunctional, tplWindow, intCap)
    if numDen == 0:
        raise WindowUnreachable("Input error: P(A in %s) = 0 for %s" % (tplWindow, dFunctional['strName']))
    dLaw = dict()
    for tplT, numP in enumerate_law(dDist, intCap, intMaxTrees)['dLaw'].items():
        if isInWindow(getFunctionalValue(tplT, dFunctional), tplWindow):
            dLaw[tplT] = numP / numDen
    return getTreeLaw(dLaw, dDist['boolExact'])


def conditioned_restriction_law(dDist, dFunctional, tplWindow, intH, intCap=None, intMaxTrees=None):
    """
    Law of r_h(tau_n) where tau_n is tau conditioned on A(tau) in W

    dTreeLaw = conditioned_restriction_law(dDist, dFunctional, tplWindow, intH, intCap=None)

    Parameters
    ----------
    tplWindow : tuple
        (n, n1) for [n, n+n1), or (n, None) for [n, inf)
    intH : int
        restriction level
    intCap : int
        size cap of the enumeration used for maxgen

    Returns
    -------
    dTreeLaw : dict
        dLaw {r_h tree: probability}; numMass; numComplement; dInterval {tree: (lower, upper)}

    For height, size, leaves and maxdeg the law is exact: P(r_h = s, A in W) is
    P(r_h(tau) = s) times the window probability of the subtrees below the frontier of s.
    maxgen is enumerated up to intCap nodes, and the unenumerated mass widens each
    probability into an interval.
    """
    boolExact = dDist['boolExact']
    if dFunctional['strName'] == 'maxgen':
        if intCap is None:
            intCap = getDefaultCap(dDist, dFunctional, tplWindow)
        dEnum = enumerate_law(dDist, intCap, intMaxTrees)
        numComp = dEnum['numComplement']
        dJoint = dict()
        for tplT, numP in dEnum['dLaw'].items():
            if isInWindow(getFunctionalValue(tplT, dFunctional), tplWindow):
                tplS = restrict(tplT, intH)
                dJoint[tplS] = dJoint.get(tplS, toNumber(0, boolExact)) + numP
        numDen = sum(dJoint.values(), toNumber(0, boolExact))
        if numDen == 0 and numComp == 0:
            raise WindowUnreachable("Input error: P(A in %s) = 0 for maxgen" % (tplWindow,))
        if numDen == 0:
            raise WindowUnreachable("Input error: no enumerated tree of size <= %d has maxgen in %s"
                                    % (intCap, tplWindow))
        dLaw = {tplS: numP / numDen for tplS, numP in dJoint.items()}
        dTreeLaw = getTreeLaw(dLaw, boolExact)
        dTreeLaw['dInterval'] = {tplS: (numP / (numDen + numComp), min(1, (numP + numComp) / numDen))
                                 for tplS, numP in dJoint.items()}
        return dTreeLaw

    dCalc = getWindowCalc(dDist, dFunctional, tplWindow)
    numDen = getCalcWindowProb(dCalc)
    if numDen == 0:
        raise WindowUnreachable("Input error: P(A in %s) = 0 for %s" % (tplWindow, dFunctional['strName']))
    dLaw = dict()
    for tplS, numP in restriction_law(dDist, intH, intMaxTrees)['dLaw'].items():
        numW = getShapeProb(dCalc, getRestrictionShape(tplS, intH, dFunctional))
        if numW != 0:
            dLaw[tplS] = numP * numW / numDen
    dTreeLaw = getTreeLaw(dLaw, isExact(numDen) and boolExact)
    numComp = dTreeLaw['numComplement']
    dTreeLaw['dInterval'] = {tplS: (numP, min(1, numP + numComp)) for tplS, numP in dLaw.items()}
    return dTreeLaw


# %% graft sets


def graft_set_prob(objDistOrLaw, tplTree, tplX, boolKesten=False):
    """
    P(tau in T(t,x)), the product of p(k_u(t)) over the nodes u != x

    numProb = graft_set_prob(objDistOrLaw, tplTree, tplX, boolKesten=False)

    boolKesten divides by m^|x|, which gives P(tau* in T(t,x)). Given a TreeLaw the
    function sums the enumerated trees of T(t,x) instead, a lower bound.
    """
    tplX = tuple(tplX)
    intPos = getLeafPosition(tplTree, tplX)
    if 'dLaw' in objDistOrLaw:
        assert not boolKesten, "a TreeLaw carries no mean; pass the distribution"
        return sum((v for t, v in objDistOrLaw['dLaw'].items() if graft_set_contains(tplTree, tplX, t)), 0)
    dDist = objDistOrLaw
    vecPmf = dDist['vecPmf']
    numProb = toNumber(1, dDist['boolExact'])
    for intIdx, intK in enumerate(tplTree):
        if intIdx == intPos:
            continue
        numProb = numProb * (vecPmf[intK] if intK < len(vecPmf) else 0)
    if boolKesten:
        numProb = numProb / dDist['numMean'] ** len(tplX)
    return numProb


def graft_set_conditioned_prob(dDist, dFunctional, tplTree, tplX, tplWindow, boolBruteForce=False, intCap=None,
                               intMaxTrees=None):
    """
    P(tau_n in T(t,x)) with tau_n = tau conditioned on A(tau) in W

    numProb = graft_set_conditioned_prob(dDist, dFunctional, tplTree, tplX, tplWindow, boolBruteForce=False)

    By the branching property a tree of T(t,x) is t grafted with an independent GW tree
    tau', and A(t graft_x tau') = phi(A(tau')) for the graft map phi of the functional.
    The exact mode evaluates P(tau in T(t,x)) P(phi(A(tau')) in W) / P(A(tau) in W);
    the brute-force mode sums the enumerated conditioned law up to intCap nodes (also
    used for maxgen, which has no graft map).
    """
    tplX = tuple(tplX)
    fMap = getGraftMap(dFunctional, tplTree, tplX)
    if boolBruteForce or fMap is None:
        dLaw = conditioned_law(dDist, dFunctional, tplWindow, intCap, intMaxTrees)
        if dLaw['numComplement'] != 0:
            logging.warning("graft_set_conditioned_prob: enumeration misses mass %s, result is a lower bound"
                            % dLaw['numComplement'])
        return graft_set_prob(dLaw, tplTree, tplX)

    boolExact = dDist['boolExact']
    intN, intN1 = tplWindow
    dCalc = getWindowCalc(dDist, dFunctional, tplWindow)
    numDen = getCalcWindowProb(dCalc)
    if numDen == 0:
        raise WindowUnreachable("Input error: P(A in %s) = 0 for %s" % (tplWindow, dFunctional['strName']))
    # phi(a) >= a, so only a below the window top matters
    intTop = intN if intN1 is None else intN + intN1
    cellPmf = getSingleLaw(dDist, dFunctional, intTop - 1)
    numBelow = toNumber(0, boolExact)
    numInside = toNumber(0, boolExact)
    for intA, numP in enumerate(cellPmf):
        intPhi = fMap(intA)
        if intPhi < intN:
            numBelow += numP
        elif intN1 is not None and intPhi < intN + intN1:
            numInside += numP
    numNum = 1 - numBelow if intN1 is None else numInside
    return graft_set_prob(dDist, tplTree, tplX) * numNum / numDen


def getSingleLaw(dDist, dFunctional, intCap):
    """P(A(tau) = a) for a = 0..cap, as a list."""
    if intCap < 0:
        return []
    dPmf = functional_law(dDist, dFunctional, intCap)['dPmf']
    return [dPmf.get(a, toNumber(0, dDist['boolExact'])) for a in range(intCap + 1)]


def getShiftedWindow(tplWindow, intD):
    intN, intN1 = tplWindow
    return (intN - intD, intN1)


def getCompleteCap(dDist, dFunctional, tplWindow):
    """Size cap under which every tree of a bounded window is enumerated, or None."""
    intN, intN1 = tplWindow
    if intN1 is None or dDist['dblTailBound'] > 0:
        return None
    intTop = intN + intN1 - 1
    strName = dFunctional['strName']
    vecPmf = dDist['vecPmf']
    intMaxDeg = len(vecPmf) - 1
    if strName == 'size':
        return max(1, intTop)
    if strName == 'leaves' and dFunctional['setA'] == frozenset([0]) and (intMaxDeg < 1 or vecPmf[1] == 0):
        return max(1, 2 * intTop - 1)
    if strName == 'height':
        return intTop + 1 if intMaxDeg <= 1 else sum(intMaxDeg ** i for i in range(intTop + 1))
    return None


def isCompleteLaw(dTreeLaw):
    numComplement = dTreeLaw['numComplement']
    return numComplement == 0 if isExact(numComplement) else numComplement <= DBL_COMPLETE_TOL


def getCompleteLaw(dDist, dFunctional, tplWindow, intCap=None):
    """
    Conditioned law of tau on the window when the enumeration holds all of it, else None

    Without intCap the cap comes from getCompleteCap and is used up to INT_MAX_IDENTITY_CAP.
    """
    if intCap is None:
        intCap = getCompleteCap(dDist, dFunctional, tplWindow)
        if intCap is None or intCap > INT_MAX_IDENTITY_CAP:
            return None
    dLaw = conditioned_law(dDist, dFunctional, tplWindow, intCap)
    if not isCompleteLaw(dLaw):
        logging.info("getCompleteLaw: %d nodes miss mass %s of the %s window %s"
                     % (intCap, dLaw['numComplement'], dFunctional['strName'], tplWindow))
        return None
    return dLaw


def eq_tmp_ratio(dDist, dFunctional, tplTree, tplX, intN, intN1=None, intCap=None, dCondLaw=None):
    """
    Both sides of the graft identity for conditioned trees

    (numLhs, numRhs) = eq_tmp_ratio(dDist, dFunctional, tplTree, tplX, intN, intN1=None, intCap=None)

    lhs = P(tau_n in T(t,x)) and rhs = m^|x| P(tau* in T(t,x)) P(A_(n-D)) / P(A_n), where
    A_n = {A(tau) in [n, n+n1)} and D = D(t,x) is the graft shift. The two agree exactly
    for functionals of class Additivity or Identity as soon as n >= n0(t,x).

    lhs sums the enumerated conditioned law (dCondLaw, or the law enumerated up to intCap
    nodes) when that law holds the whole window. Windows that are not enumerable in full
    (tail windows, unbounded supports, leaves with p(1) > 0) fall back to the branching
    decomposition of graft_set_conditioned_prob.
    """
    if dFunctional['strClass'] not in ('Additivity', 'Identity'):
        raise PropertyMismatch("Input error: %s is of class %s, the graft identity needs Additivity"
                               % (dFunctional['strName'], dFunctional['strClass']))
    tplX = tuple(tplX)
    intN0 = getGraftThreshold(dFunctional, tplTree, tplX)
    if intN < intN0:
        raise ValueError("Input error: n=%d is below the threshold n0=%d of (t, x)" % (intN, intN0))
    tplWindow = (intN, intN1)
    intD = getGraftShift(dFunctional, tplTree, tplX)
    if dCondLaw is None:
        dCondLaw = getCompleteLaw(dDist, dFunctional, tplWindow, intCap)
    if dCondLaw is not None and isCompleteLaw(dCondLaw):
        numLhs = graft_set_prob(dCondLaw, tplTree, tplX)
    else:
        numLhs = graft_set_conditioned_prob(dDist, dFunctional, tplTree, tplX, tplWindow)
    numKesten = graft_set_prob(dDist, tplTree, tplX, boolKesten=True)
    numNum = getWindowProb(dDist, dFunctional, getShiftedWindow(tplWindow, intD))
    numDen = getWindowProb(dDist, dFunctional, tplWindow)
    numRhs = dDist['numMean'] ** len(tplX) * numKesten * numNum / numDen
    return numLhs, numRhs


# %% distances


def getLawEntries(objLaw):
    if 'dLaw' in objLaw:
        return objLaw['dLaw'], objLaw['numComplement']
    if 'dPmf' in objLaw:
        return objLaw['dPmf'], objLaw['numComplement']
    return objLaw, 0


def tv_distance(objLaw1, objLaw2):
    """
    Total variation distance between two TreeLaws or PMFs

    (numTv, dTV) = tv_distance(objLaw1, objLaw2)

    numTv is (1/2) sum |p - q| over the enumerated supports. The complement masses c1, c2
    are assumed to lie outside both supports, which brackets the true distance between
    dTV['numLower'] = numTv + |c1 - c2|/2 and dTV['numUpper'] = numTv + (c1 + c2)/2.
    """
    dP, numC1 = getLawEntries(objLaw1)
    dQ, numC2 = getLawEntries(objLaw2)
    numTv = getTvd(dP, dQ)
    dTV = dict()
    dTV['numTv'] = numTv
    dTV['numLower'] = numTv + abs(numC1 - numC2) / 2
    dTV['numUpper'] = min(1, numTv + (numC1 + numC2) / 2)
    return numTv, dTV


# %% identity checks


def strong_ratio_table(dDist, vecN, vecL, boolStrict=False):
    """
    Ratios P(S_n = n + b + l d) / P(S_n = n + b) from exact convolution powers

    (cellRows, dInfo) = strong_ratio_table(dDist, vecN, vecL, boolStrict=False)

    S_n is the sum of n offspring numbers and d the period of p. For aperiodic p, b = 0
    and d = 1. For a periodic law the ratios are taken per residue: b is the smallest
    b >= 0 with P(S_n = n + b) > 0 and l runs over multiples of d. This logs a warning,
    or raises PeriodicDistribution when boolStrict. Each row is a dict with intN, intL,
    intOffset and numRatio (None when P(S_n = n + b) = 0).
    """
    if getCriticality(dDist) != 'critical':
        raise NotCritical("Input error: strong_ratio_table needs m = 1, got m=%s" % dDist['numMean'])
    intPeriod = dDist['intPeriod']
    boolPeriodic = intPeriod > 1
    if boolPeriodic:
        if boolStrict:
            raise PeriodicDistribution("Input error: p has period %d; ratios exist per residue only" % intPeriod)
        logging.warning("strong_ratio_table: p has period %d, reporting per-residue ratios" % intPeriod)
    vecN = sorted(int(n) for n in vecN)
    vecL = [int(l) for l in vecL]
    intMaxL = max(abs(l) for l in vecL) * intPeriod
    intMaxLen = vecN[-1] + intMaxL + intPeriod + 1
    vecPmf = dDist['vecPmf']
    vecS = getArray([1], dDist['boolExact'])
    setN = set(vecN)
    cellRows = []
    for intJ in range(1, vecN[-1] + 1):
        vecS = getConvolution(vecS, vecPmf, intMaxLen)
        if intJ not in setN:
            continue
        intOffset = 0
        while intJ + intOffset < len(vecS) and vecS[intJ + intOffset] == 0 and intOffset < intPeriod:
            intOffset += 1
        intBase = intJ + intOffset
        numBase = vecS[intBase] if intBase < len(vecS) else 0
        for intL in vecL:
            intIdx = intBase + intL * intPeriod
            numTop = vecS[intIdx] if 0 <= intIdx < len(vecS) else 0
            dRow = dict()
            dRow['intN'] = intJ
            dRow['intL'] = intL * intPeriod
            dRow['intOffset'] = intOffset
            dRow['numRatio'] = None if numBase == 0 else numTop / numBase
            cellRows.append(dRow)
    dInfo = dict()
    dInfo['intPeriod'] = intPeriod
    dInfo['boolPeriodic'] = boolPeriodic
    return cellRows, dInfo


def conjugate_law_check(dDist, intCap, intMaxTrees=None):
    """
    Residuals q P(tau~ = t) - P(tau = t) over the trees of size <= intCap

    (numMaxResidual, dResiduals) = conjugate_law_check(dDist, intCap)
    """
    numQ = extinction_probability(dDist)
    dTilde = conjugate(dDist)
    dLaw = enumerate_law(dDist, intCap, intMaxTrees)['dLaw']
    dLawTilde = enumerate_law(dTilde, intCap, intMaxTrees)['dLaw']
    dResiduals = dict()
    for tplT in set(dLaw) | set(dLawTilde):
        dResiduals[tplT] = numQ * dLawTilde.get(tplT, 0) - dLaw.get(tplT, 0)
    numMax = max((abs(v) for v in dResiduals.values()), default=0)
    return numMax, dResiduals


def kesten_moment_check(dDist, intH, intMaxTrees=None):
    """
    E[z_h(tau*)] two ways

    (numLhs, numRhs) = kesten_moment_check(dDist, intH)

    lhs = sum_t z_h(t)^2 P(r_h(tau) = t) / m^h over the exact restriction law; rhs is the
    immigration formula 1 + (E[zeta^2]/m - 1) (1 + m + ... + m^(h-1)).
    """
    dStar = size_biased(dDist)
    numMean = dDist['numMean']
    boolExact = dDist['boolExact']
    numLhs = toNumber(0, boolExact)
    for tplT, numP in restriction_law(dDist, intH, intMaxTrees)['dLaw'].items():
        numLhs += getWidth(tplT, intH) ** 2 * numP
    numLhs = numLhs / numMean ** intH
    numImmigrant = dStar['numMean'] - 1
    numGeo = sum((numMean ** j for j in range(intH)), toNumber(0, boolExact))
    numRhs = 1 + numImmigrant * numGeo
    return numLhs, numRhs

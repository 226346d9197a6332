# -*- coding: utf-8 -*-
"""
Seeded Monte Carlo samplers.

Trees are generated breadth first as a list of levels: level d is the vector of
out-degrees of the depth-d nodes from left to right. levelsToTree converts the
levels into the preorder encoding. Every sampler takes a numpy Generator; use
getRngStream for reproducible, independent streams.
"""
import numpy as np
from gwforge.offspring_dependencies import (size_biased, survivor_joint, conjugate, requireSubCritical,
                                            requireSuperCritical)
from gwforge.tree_dependencies import getExtendedTree, isInWindow, getFunctionalValue, getInfinityNorm
from gwforge.errors import Truncated, Exhausted, DegenerateDistribution


# %% streams and budgets


def getRngStream(intSeed, intStream=0):
    """
    Counter-based generator for stream intStream of seed intSeed

    Identical (seed, stream) pairs give identical sequences; distinct streams are
    derived through the SeedSequence spawn key and are independent for practical purposes.
    """
    objSeq = np.random.SeedSequence(int(intSeed), spawn_key=(int(intStream),))
    return np.random.Generator(np.random.Philox(objSeq))


def getSampleBudget(intMaxNodes=None, intMaxHeight=None, intMaxRejections=None):
    if intMaxNodes is None:
        intMaxNodes = 10 ** 5
    if intMaxHeight is None:
        intMaxHeight = 10 ** 3
    if intMaxRejections is None:
        intMaxRejections = 10 ** 6
    assert intMaxNodes > 0 and intMaxHeight > 0 and intMaxRejections > 0, "budgets must be positive"
    dBudget = dict()
    dBudget['intMaxNodes'] = int(intMaxNodes)
    dBudget['intMaxHeight'] = int(intMaxHeight)
    dBudget['intMaxRejections'] = int(intMaxRejections)
    return dBudget


# %% helpers


def drawOffspring(dDist, objRng, intSize):
    """intSize i.i.d. draws from the (renormalized) stored pmf."""
    vecCdf = dDist['vecCdf']
    vecDraw = np.searchsorted(vecCdf, objRng.random(int(intSize)), side='right')
    return np.minimum(vecDraw, len(vecCdf) - 1).astype(np.int64)


def levelsToTree(cellLevels):
    """Preorder encoding of a tree given by its breadth-first levels of out-degrees."""
    cellOffsets = [np.concatenate(([0], np.cumsum(vecLevel)[:-1])).astype(np.int64) for vecLevel in cellLevels]
    cellOut = []
    cellStack = [(0, 0)]
    while cellStack:
        intLevel, intIdx = cellStack.pop()
        intK = int(cellLevels[intLevel][intIdx])
        cellOut.append(intK)
        if intK > 0:
            intStart = int(cellOffsets[intLevel][intIdx])
            for intJ in range(intK - 1, -1, -1):
                cellStack.append((intLevel + 1, intStart + intJ))
    return tuple(cellOut)


def restrictLevels(cellLevels, intH):
    """r_h of a tree from its first h levels (None if fewer are known)."""
    if len(cellLevels) < intH:
        return None
    cellOut = [np.asarray(v, dtype=np.int64) for v in cellLevels[:intH]]
    intLast = 1 if intH == 0 else int(np.sum(cellOut[-1]))
    cellOut.append(np.zeros(intLast, dtype=np.int64))
    return levelsToTree(cellOut)


def getPartialBounds(cellLevels, dFunctional):
    """Lower bound of the functional over all completions of partially generated levels."""
    strName = dFunctional['strName']
    intNext = int(np.sum(cellLevels[-1]))
    if strName == 'size':
        return sum(len(v) for v in cellLevels) + intNext
    if strName == 'height':
        return len(cellLevels) if intNext > 0 else len(cellLevels) - 1
    if strName == 'maxdeg':
        return int(max(np.max(v) for v in cellLevels))
    if strName == 'maxgen':
        return max(max(len(v) for v in cellLevels), intNext)
    setA = dFunctional['setA']
    return int(sum(np.sum(np.isin(v, sorted(setA))) for v in cellLevels))


# %% Galton-Watson trees and processes


def generateLevels(dDist, objRng, dBudget):
    """Breadth-first GW generation; returns the levels or raises Truncated."""
    vecLevel = drawOffspring(dDist, objRng, 1)
    cellLevels = [vecLevel]
    intNodes = 1
    while True:
        intNext = int(np.sum(vecLevel))
        if intNext == 0:
            return cellLevels
        if len(cellLevels) > dBudget['intMaxHeight']:
            raise Truncated("sample_gw: height exceeds max_height=%d" % dBudget['intMaxHeight'],
                            strReason='max_height', dPartial={'cellLevels': cellLevels})
        intNodes += intNext
        if intNodes > dBudget['intMaxNodes']:
            raise Truncated("sample_gw: size exceeds max_nodes=%d" % dBudget['intMaxNodes'],
                            strReason='max_nodes', dPartial={'cellLevels': cellLevels})
        vecLevel = drawOffspring(dDist, objRng, intNext)
        cellLevels.append(vecLevel)


def sample_gw(dDist, objRng, dBudget=None):
    """
    One Galton-Watson tree

    tplTree = sample_gw(dDist, objRng, dBudget=None)

    Each node draws its number of children independently from the offspring law, level
    by level. raises Truncated when the tree would exceed max_nodes or max_height; the
    exception carries the generated levels in dPartial['cellLevels'].
    """
    if dBudget is None:
        dBudget = getSampleBudget()
    return levelsToTree(generateLevels(dDist, objRng, dBudget))


def sample_process(dDist, objRng, intN):
    """
    Generation sizes Z_0..Z_n and the normalized W_k = Z_k / m^k

    (vecZ, vecW) = sample_process(dDist, objRng, intN)
    """
    vecZ = np.zeros(intN + 1, dtype=np.int64)
    vecZ[0] = 1
    for intK in range(intN):
        vecZ[intK + 1] = np.sum(drawOffspring(dDist, objRng, vecZ[intK])) if vecZ[intK] > 0 else 0
    dblMean = float(dDist['numMean'])
    vecW = vecZ / dblMean ** np.arange(intN + 1) if dblMean > 0 else np.full(intN + 1, np.nan)
    return vecZ, vecW


def sample_process_batch(dDist, objRng, intN, intReps):
    """
    intReps independent processes at once

    matZ = sample_process_batch(dDist, objRng, intN, intReps)
    matZ[i, k] is Z_k of replicate i
    """
    matZ = np.zeros((intReps, intN + 1), dtype=np.int64)
    matZ[:, 0] = 1
    vecOwner = np.arange(intReps)
    for intK in range(intN):
        vecZ = matZ[:, intK]
        intTotal = int(np.sum(vecZ))
        if intTotal == 0:
            break
        vecDraw = drawOffspring(dDist, objRng, intTotal)
        vecRep = np.repeat(vecOwner, vecZ)
        matZ[:, intK + 1] = np.bincount(vecRep, weights=vecDraw, minlength=intReps).astype(np.int64)
    return matZ


def sample_immigration(dDist, objRng, intN):
    """
    GW process with immigration: Z*_0 = 0 and Z*_k = Y_k + sum_{i <= Z*_(k-1)} zeta_(i,k)

    Y_k + 1 is size-biased, so (Z*_k + 1) has the law of the generation sizes of the
    size-biased tree.
    """
    dStar = size_biased(dDist)
    vecZ = np.zeros(intN + 1, dtype=np.int64)
    for intK in range(1, intN + 1):
        intY = int(drawOffspring(dStar, objRng, 1)[0]) - 1
        intPrev = int(vecZ[intK - 1])
        vecZ[intK] = intY + (int(np.sum(drawOffspring(dDist, objRng, intPrev))) if intPrev > 0 else 0)
    return vecZ


# %% size-biased tree


def sample_kesten(dDist, objRng, intH, dBudget=None, dStar=None):
    """
    Restriction r_h of the size-biased tree

    tplTree = sample_kesten(dDist, objRng, intH, dBudget=None)

    The spine node of each level draws its number of children from p*(n) = n p(n)/m and
    passes the spine to one of them chosen uniformly; all other nodes draw from p.
    """
    if dBudget is None:
        dBudget = getSampleBudget()
    if not dDist['boolHypP']:
        raise DegenerateDistribution("Input error: sample_kesten needs 0<p(0)<1 and p(0)+p(1)<1")
    if dStar is None:
        dStar = size_biased(dDist)
    cellLevels = []
    intSize = 1
    intSpine = 0
    intNodes = 1
    for _ in range(intH):
        vecLevel = drawOffspring(dDist, objRng, intSize)
        intSpineK = int(drawOffspring(dStar, objRng, 1)[0])
        vecLevel[intSpine] = intSpineK
        intSpine = int(np.sum(vecLevel[:intSpine])) + int(objRng.integers(intSpineK))
        cellLevels.append(vecLevel)
        intSize = int(np.sum(vecLevel))
        intNodes += intSize
        if intNodes > dBudget['intMaxNodes']:
            raise Truncated("sample_kesten: size exceeds max_nodes=%d" % dBudget['intMaxNodes'],
                            strReason='max_nodes', dPartial={'cellLevels': cellLevels})
    cellLevels.append(np.zeros(intSize, dtype=np.int64))
    return levelsToTree(cellLevels)


# %% survivor tree


def sample_survivor(dDist, objRng, intH, dBudget=None, boolReturnTypes=False, dCache=None):
    """
    Restriction r_h of a super-critical tree conditioned on survival

    tplTree = sample_survivor(dDist, objRng, intH, dBudget=None, boolReturnTypes=False)

    Survivor-type nodes draw (S, E) from survivor_joint and place their S survivor
    children uniformly among the S+E slots; extinct-type nodes draw from the conjugate
    law and only have extinct-type children. With boolReturnTypes the function returns
    (tplTree, dTypes) with dTypes['tplRootPair'] = (S, E) of the root and
    dTypes['vecSurvivors'] the survivor count per level.
    """
    if dBudget is None:
        dBudget = getSampleBudget()
    if dCache is None:
        dCache = getSurvivorCache(dDist)
    cellPairs = dCache['cellPairs']
    vecPairCdf = dCache['vecPairCdf']
    dTilde = dCache['dTilde']

    cellLevels = []
    vecType = np.ones(1, dtype=bool)
    vecSurvivors = [1]
    tplRootPair = None
    intNodes = 1
    for _ in range(intH):
        vecLevel = np.zeros(len(vecType), dtype=np.int64)
        vecExtinct = ~vecType
        vecLevel[vecExtinct] = drawOffspring(dTilde, objRng, int(np.sum(vecExtinct)))
        cellChildTypes = []
        vecSurvIdx = np.flatnonzero(vecType)
        vecPairIdx = np.searchsorted(vecPairCdf, objRng.random(len(vecSurvIdx)), side='right')
        dPairOf = dict(zip(vecSurvIdx.tolist(), np.minimum(vecPairIdx, len(cellPairs) - 1).tolist()))
        for intIdx in range(len(vecType)):
            if vecType[intIdx]:
                intS, intE = cellPairs[dPairOf[intIdx]]
                if tplRootPair is None:
                    tplRootPair = (intS, intE)
                vecLevel[intIdx] = intS + intE
                vecChild = np.zeros(intS + intE, dtype=bool)
                vecChild[objRng.choice(intS + intE, size=intS, replace=False)] = True
                cellChildTypes.append(vecChild)
            else:
                cellChildTypes.append(np.zeros(vecLevel[intIdx], dtype=bool))
        cellLevels.append(vecLevel)
        vecType = np.concatenate(cellChildTypes) if cellChildTypes else np.zeros(0, dtype=bool)
        vecSurvivors.append(int(np.sum(vecType)))
        intNodes += len(vecType)
        if intNodes > dBudget['intMaxNodes']:
            raise Truncated("sample_survivor: size exceeds max_nodes=%d" % dBudget['intMaxNodes'],
                            strReason='max_nodes', dPartial={'cellLevels': cellLevels})
    cellLevels.append(np.zeros(len(vecType), dtype=np.int64))
    tplTree = levelsToTree(cellLevels)
    if boolReturnTypes:
        return tplTree, {'tplRootPair': tplRootPair, 'vecSurvivors': np.array(vecSurvivors)}
    return tplTree


def getSurvivorCache(dDist):
    """Tables reused across survivor samples: the (S,E) pairs and the conjugate law."""
    requireSuperCritical(dDist, 'sample_survivor')
    dJoint = survivor_joint(dDist)
    cellPairs = sorted(dJoint.keys())
    vecPairCdf = np.cumsum([float(dJoint[tplPair]) for tplPair in cellPairs])
    return {'cellPairs': cellPairs, 'vecPairCdf': vecPairCdf / vecPairCdf[-1], 'dTilde': conjugate(dDist)}


# %% condensation tree


def sample_condensation(dDist, objRng, intN, dBudget=None, dStar=None):
    """
    Restriction r_n^inf of the condensation tree

    (tplTree, dExtTree) = sample_condensation(dDist, objRng, intN, dBudget=None)

    The special node is infinite with probability 1-m; otherwise it has k children with
    probability k p(k) and passes the special mark to one of them uniformly. An infinite
    node gets n materialized normal children. Normal nodes are GW(p). The whole spine is
    simulated, so dExtTree['tplInfiniteLabel'] and dExtTree['intInfiniteDepth'] are set
    even when the infinite node is outside the restriction window.
    """
    if dBudget is None:
        dBudget = getSampleBudget()
    requireSubCritical(dDist, 'sample_condensation')
    if not dDist['boolHypP']:
        raise DegenerateDistribution("Input error: sample_condensation needs 0<p(0)<1 and p(0)+p(1)<1")
    if dStar is None:
        dStar = size_biased(dDist)
    dblAtom = 1 - float(dDist['numMean'])

    # spine: degrees and special children down to the infinite node
    cellSpineK = []
    cellSpine = []
    while objRng.random() >= dblAtom:
        if len(cellSpine) >= dBudget['intMaxHeight']:
            raise Truncated("sample_condensation: spine exceeds max_height=%d" % dBudget['intMaxHeight'],
                            strReason='max_height', dPartial={'cellSpine': cellSpine})
        intK = int(drawOffspring(dStar, objRng, 1)[0])
        cellSpineK.append(intK)
        cellSpine.append(int(objRng.integers(intK)) + 1)
    tplInfLabel = tuple(cellSpine)

    # visible part, level by level
    cellLevels = []
    intSize = 1
    intSpinePos = 0
    intNodes = 1
    for intDepth in range(intN):
        vecLevel = np.minimum(drawOffspring(dDist, objRng, intSize), intN)
        intNextSpine = None
        if intSpinePos is not None:
            if intDepth == len(tplInfLabel):
                vecLevel[intSpinePos] = intN
            else:
                intJ = tplInfLabel[intDepth]
                vecLevel[intSpinePos] = min(cellSpineK[intDepth], intN)
                if intJ <= intN:
                    intNextSpine = int(np.sum(vecLevel[:intSpinePos])) + intJ - 1
        cellLevels.append(vecLevel)
        intSpinePos = intNextSpine
        intSize = int(np.sum(vecLevel))
        intNodes += intSize
        if intNodes > dBudget['intMaxNodes']:
            raise Truncated("sample_condensation: size exceeds max_nodes=%d" % dBudget['intMaxNodes'],
                            strReason='max_nodes', dPartial={'cellLevels': cellLevels})
    cellLevels.append(np.zeros(intSize, dtype=np.int64))
    tplTree = levelsToTree(cellLevels)
    setInfinite = set()
    if getInfinityNorm(tplInfLabel) <= intN:  # visible in the window
        setInfinite.add(tplInfLabel)
    dExtTree = getExtendedTree(tplTree, setInfinite, intN, tplInfiniteLabel=tplInfLabel)
    return tplTree, dExtTree



# %% conditioning by rejection


def sample_conditioned(dDist, dFunctional, tplWindow, objRng, dBudget=None, intRestrictH=None):
    """
    GW tree conditioned on A(tau) in [n, n+n1) by exact rejection

    objOut = sample_conditioned(dDist, dFunctional, tplWindow, objRng, dBudget=None, intRestrictH=None)

    Parameters
    ----------
    dFunctional : dict
        FunctionalSpec from getFunctional
    tplWindow : tuple
        (n, n1); n1=None is the tail window [n, inf)
    intRestrictH : int or None
        when set, return r_h(tau) instead of tau. Samples truncated by the budget are
        then still usable whenever the first h levels are complete and the generated
        part already decides acceptance.

    raises Exhausted after max_rejections rejections, and Truncated when a truncated
    sample can be neither accepted nor rejected.
    """
    if dBudget is None:
        dBudget = getSampleBudget()
    intN, intN1 = tplWindow
    intRejections = 0
    while intRejections < dBudget['intMaxRejections']:
        try:
            cellLevels = generateLevels(dDist, objRng, dBudget)
        except Truncated as objErr:
            cellPartial = objErr.dPartial['cellLevels']
            intLower = getPartialBounds(cellPartial, dFunctional)
            if intN1 is not None and intLower >= intN + intN1:
                intRejections += 1
                continue
            # the generated part already forces A(tau) >= n
            if intN1 is None and intLower >= intN and intRestrictH is not None:
                tplRestricted = restrictLevels(cellPartial, intRestrictH)
                if tplRestricted is not None:
                    return tplRestricted
            raise
        tplTree = levelsToTree(cellLevels)
        if isInWindow(getFunctionalValue(tplTree, dFunctional), tplWindow):
            if intRestrictH is not None:
                return restrictLevels(cellLevels, intRestrictH) if len(cellLevels) >= intRestrictH \
                    else tplTree
            return tplTree
        intRejections += 1
    raise Exhausted("sample_conditioned: %d rejections without hitting window %s; shrink n or use the "
                    "enumeration oracle" % (intRejections, tplWindow), intRejections=intRejections)

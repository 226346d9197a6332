# -*- coding: utf-8 -*-
"""
Rooted ordered trees in Neveu's labelling.

A finite tree is stored as the tuple of its out-degrees k_u listed in lexicographic
(= depth-first preorder) order of the labels u. Labels are tuples of positive ints,
the root being (). Extended trees (one symbolic node of infinite degree) are dicts
with the materialized finite part in 'tplTree'.
"""
import json
import numpy as np
from fractions import Fraction
from gwforge.errors import (MalformedSequence, NotALeaf, CannotRestrict, InsufficientMaterialization)


# %% encoding


def decode(vecChildCounts):
    """
    Validates a preorder child-count sequence and returns the canonical tree

    tplTree = decode(vecChildCounts)

    The walk keeps the number of open child slots; it must reach zero exactly at the
    last entry.
    """
    cellCounts = list(vecChildCounts)
    if len(cellCounts) == 0:
        raise MalformedSequence("Input error: empty child-count sequence")
    tplTree = []
    intOpen = 1
    for intPos, objK in enumerate(cellCounts):
        if int(objK) != objK or objK < 0:
            raise MalformedSequence("Input error: child count %s at position %d is not a nonnegative integer"
                                    % (objK, intPos))
        if intOpen == 0:
            raise MalformedSequence("Input error: walk terminates at position %d, before the end of the sequence"
                                    % (intPos - 1))
        intOpen += int(objK) - 1
        tplTree.append(int(objK))
    if intOpen != 0:
        raise MalformedSequence("Input error: sequence leaves %d unfilled child slot(s)" % intOpen)
    return tuple(tplTree)


def encode(tplTree):
    return list(tplTree)


def isValidSequence(vecChildCounts):
    try:
        decode(vecChildCounts)
    except MalformedSequence:
        return False
    return True


def getLabels(tplTree):
    """Node labels in preorder, i.e. in lexicographic order."""
    cellLabels = []
    cellStack = []
    for intK in tplTree:
        if not cellStack:
            tplLabel = ()
        else:
            cellTop = cellStack[-1]
            cellTop[2] += 1
            tplLabel = cellTop[0] + (cellTop[2],)
            if cellTop[2] == cellTop[1]:
                cellStack.pop()
        cellLabels.append(tplLabel)
        if intK > 0:
            cellStack.append([tplLabel, intK, 0])
    return cellLabels


def getChildCounts(tplTree):
    return dict(zip(getLabels(tplTree), tplTree))


def fromLabels(setLabels):
    """
    Builds the canonical tree from a set of labels

    raises MalformedSequence if the set is not prefix-closed or breaks contiguity
    """
    setLabels = set(tuple(u) for u in setLabels)
    if () not in setLabels:
        raise MalformedSequence("Input error: label set has no root")
    dChildren = {u: 0 for u in setLabels}
    for u in setLabels:
        if len(u) == 0:
            continue
        if min(u) < 1:
            raise MalformedSequence("Input error: label %s has a non-positive entry" % (u,))
        if u[:-1] not in setLabels:
            raise MalformedSequence("Input error: label set is not prefix-closed at %s" % (u,))
        if u[-1] > 1 and u[:-1] + (u[-1] - 1,) not in setLabels:
            raise MalformedSequence("Input error: label set breaks contiguity at %s" % (u,))
        dChildren[u[:-1]] = max(dChildren[u[:-1]], u[-1])
    return tuple(dChildren[u] for u in sorted(setLabels))


# %% labels


def isLexLess(tplU, tplV):
    """
    Lexicographic order on labels: u < v if v is a proper descendant of u, or if u
    is smaller than v at their first differing position.
    """
    for intI in range(min(len(tplU), len(tplV))):
        if tplU[intI] != tplV[intI]:
            return tplU[intI] < tplV[intI]
    return len(tplU) < len(tplV)


def getMRCA(cellLabels):
    """Most recent common ancestor of a finite nonempty set of labels."""
    cellLabels = [tuple(u) for u in cellLabels]
    assert len(cellLabels) > 0, "getMRCA needs at least one label"
    tplPrefix = cellLabels[0]
    for tplU in cellLabels[1:]:
        intCommon = 0
        while intCommon < min(len(tplPrefix), len(tplU)) and tplPrefix[intCommon] == tplU[intCommon]:
            intCommon += 1
        tplPrefix = tplPrefix[:intCommon]
    return tplPrefix


def getAncestors(tplU):
    return [tplU[:i] for i in range(len(tplU))]


def getInfinityNorm(tplU):
    return max(len(tplU), max(tplU, default=0))


def isPrefix(tplU, tplV):
    """True if u is an ancestor of v or equal to it."""
    return len(tplU) <= len(tplV) and tuple(tplV[:len(tplU)]) == tuple(tplU)


def getLeaves(tplTree):
    return [u for u, intK in zip(getLabels(tplTree), tplTree) if intK == 0]


# %% extended trees


def getExtendedTree(tplTree, setInfinite, intLevel, tplInfiniteLabel=None):
    """
    Wraps a materialized finite tree with its symbolic infinite nodes

    Each infinite node of depth < intLevel must be materialized with exactly intLevel children.
    """
    tplTree = decode(tplTree)
    dCounts = getChildCounts(tplTree)
    setInfinite = set(tuple(v) for v in setInfinite)
    for tplV in setInfinite:
        assert tplV in dCounts, "infinite node %s is not in the tree" % (tplV,)
        if len(tplV) < intLevel:
            assert dCounts[tplV] == intLevel, "infinite node %s is not materialized to level %d" % (tplV, intLevel)
    if tplInfiniteLabel is None and len(setInfinite) == 1:
        tplInfiniteLabel = next(iter(setInfinite))
    dExtTree = dict()
    dExtTree['tplTree'] = tplTree
    dExtTree['setInfinite'] = setInfinite
    dExtTree['intLevel'] = intLevel
    dExtTree['tplInfiniteLabel'] = tplInfiniteLabel
    dExtTree['intInfiniteDepth'] = None if tplInfiniteLabel is None else len(tplInfiniteLabel)
    return dExtTree


def isExtendedTree(objTree):
    return isinstance(objTree, dict)


def getInfiniteCount(dExtTree):
    """
    Number of infinite nodes an ExtendedTree carries

    A node of setInfinite counts when it is in the tree and, above the window level, has
    exactly intLevel materialized children. An infinite label outside the window counts
    when the node where it leaves the window is present; a label inside the window that
    is missing from setInfinite counts for nothing.
    """
    tplTree = dExtTree['tplTree']
    intLevel = dExtTree['intLevel']
    dCounts = getChildCounts(tplTree)
    intCount = 0
    for tplV in dExtTree['setInfinite']:
        if tplV in dCounts and (len(tplV) >= intLevel or dCounts[tplV] == intLevel):
            intCount += 1
    tplLabel = dExtTree['tplInfiniteLabel']
    if tplLabel is not None and tplLabel not in dExtTree['setInfinite'] and getInfinityNorm(tplLabel) > intLevel:
        intCut = next((i for i, j in enumerate(tplLabel) if j > intLevel), len(tplLabel))
        if tuple(tplLabel[:min(intCut, intLevel)]) in dCounts:
            intCount += 1
    return intCount


# %% statistics


def stats(tplTree, setA=None):
    """
    Tree statistics

    dStats = stats(tplTree, setA=None)

    Parameters
    ----------
    tplTree : tuple
        canonical tree
    setA : set of int or None
        out-degrees counted by intLeavesA (None stands for all of N)

    Returns
    -------
    dStats : dict
        intHeight; intSize; vecWidth (z_h for h <= H); intMaxOutDegree;
        intLargestGeneration; intLeavesA
    """
    cellLabels = getLabels(tplTree)
    vecDepth = np.array([len(u) for u in cellLabels], dtype=np.int64)
    vecWidth = np.bincount(vecDepth)
    dStats = dict()
    dStats['intHeight'] = int(vecDepth.max())
    dStats['intSize'] = len(tplTree)
    dStats['vecWidth'] = vecWidth
    dStats['intMaxOutDegree'] = int(max(tplTree))
    dStats['intLargestGeneration'] = int(vecWidth.max())
    if setA is None:
        dStats['intLeavesA'] = len(tplTree)
    else:
        dStats['intLeavesA'] = sum(1 for intK in tplTree if intK in setA)
    dStats['setA'] = setA
    return dStats


def getHeight(tplTree):
    return max(len(u) for u in getLabels(tplTree))


def getWidth(tplTree, intH):
    return sum(1 for u in getLabels(tplTree) if len(u) == intH)


# %% restrictions


def restrict(objTree, intH):
    """
    Keeps the nodes of depth <= intH

    raises CannotRestrict if an infinite node of an extended tree lies below depth intH
    """
    assert intH >= 0, "restriction level must be nonnegative"
    if isExtendedTree(objTree):
        for tplV in objTree['setInfinite']:
            if len(tplV) < intH:
                raise CannotRestrict("Input error: infinite node %s at depth %d < %d; use restrict_star"
                                     % (tplV, len(tplV), intH))
        tplTree = objTree['tplTree']
    else:
        tplTree = objTree
    cellLabels = getLabels(tplTree)
    return tuple((intK if len(u) < intH else 0) for u, intK in zip(cellLabels, tplTree) if len(u) <= intH)


def restrict_star(objTree, intN):
    """
    Keeps the nodes u with max(|u|, max_i u_i) <= intN

    The result has height <= intN and out-degrees <= intN. Extended trees must be
    materialized to at least level intN, else InsufficientMaterialization is raised.
    """
    assert intN >= 0, "restriction level must be nonnegative"
    if isExtendedTree(objTree):
        for tplV in objTree['setInfinite']:
            if len(tplV) < intN and objTree['intLevel'] < intN:
                raise InsufficientMaterialization(
                    "Input error: infinite node %s is materialized to level %d only, %d requested"
                    % (tplV, objTree['intLevel'], intN))
        tplTree = objTree['tplTree']
    else:
        tplTree = objTree
    cellLabels = getLabels(tplTree)
    return tuple((min(intK, intN) if len(u) < intN else 0)
                 for u, intK in zip(cellLabels, tplTree) if getInfinityNorm(u) <= intN)


# %% grafting


def getLeafPosition(tplTree, tplX):
    cellLabels = getLabels(tplTree)
    tplX = tuple(tplX)
    if tplX not in cellLabels:
        raise NotALeaf("Input error: node %s is not in the tree" % (tplX,))
    intPos = cellLabels.index(tplX)
    if tplTree[intPos] != 0:
        raise NotALeaf("Input error: node %s has %d children and is not a leaf" % (tplX, tplTree[intPos]))
    return intPos


def graft(tplTree, tplX, tplTree2):
    """
    Replaces leaf x of t by the tree t2

    In preorder the leaf occupies a single slot, so the graft is a splice.
    """
    intPos = getLeafPosition(tplTree, tplX)
    return tuple(tplTree[:intPos]) + tuple(tplTree2) + tuple(tplTree[intPos + 1:])


def getGraftedPart(tplTree, tplX, tplS):
    """Returns t' with s = t graft_x t', or None if s is not in T(t,x)."""
    intPos = getLeafPosition(tplTree, tplX)
    intTail = len(tplTree) - intPos - 1
    if len(tplS) < len(tplTree):
        return None
    if tuple(tplS[:intPos]) != tuple(tplTree[:intPos]):
        return None
    if tuple(tplS[len(tplS) - intTail:]) != tuple(tplTree[intPos + 1:]):
        return None
    tplMiddle = tuple(tplS[intPos:len(tplS) - intTail])
    if not isValidSequence(tplMiddle):
        return None
    return tplMiddle


def graft_set_contains(tplTree, tplX, tplS):
    """True iff s = t graft_x t' for some finite tree t'."""
    return getGraftedPart(tplTree, tplX, tplS) is not None


def graft_set_intersection(tplTree1, tplX1, tplTree2, tplX2):
    """
    Classifies T(t1,x1) intersected with T(t2,x2)

    dInter = graft_set_intersection(tplTree1, tplX1, tplTree2, tplX2)

    Returns
    -------
    dInter : dict
        strCase; one of 'equal', 'first' (= T(t1,x1)), 'second' (= T(t2,x2)),
            'singleton' (= {t1 union t2}) or 'empty'
        tplTree; the single tree in the 'singleton' case, else None
    """
    tplX1 = tuple(tplX1)
    tplX2 = tuple(tplX2)
    getLeafPosition(tplTree1, tplX1)
    getLeafPosition(tplTree2, tplX2)
    dInter = dict()
    dInter['strCase'] = 'empty'
    dInter['tplTree'] = None
    if tuple(tplTree1) == tuple(tplTree2) and tplX1 == tplX2:
        dInter['strCase'] = 'equal'
    elif isPrefix(tplX2, tplX1):
        if graft_set_contains(tplTree2, tplX2, tplTree1):
            dInter['strCase'] = 'first'
    elif isPrefix(tplX1, tplX2):
        if graft_set_contains(tplTree1, tplX1, tplTree2):
            dInter['strCase'] = 'second'
    else:
        # incomparable leaves: at most one common tree, the union
        setUnion = set(getLabels(tplTree1)) | set(getLabels(tplTree2))
        try:
            tplUnion = fromLabels(setUnion)
        except MalformedSequence:
            tplUnion = None
        if tplUnion is not None and graft_set_contains(tplTree1, tplX1, tplUnion) \
                and graft_set_contains(tplTree2, tplX2, tplUnion):
            dInter['strCase'] = 'singleton'
            dInter['tplTree'] = tplUnion
    return dInter


def isInGraftIntersection(dInter, tplTree1, tplX1, tplTree2, tplX2, tplS):
    """Membership of s in the intersection as predicted by its classification."""
    strCase = dInter['strCase']
    if strCase in ('equal', 'first'):
        return graft_set_contains(tplTree1, tplX1, tplS)
    if strCase == 'second':
        return graft_set_contains(tplTree2, tplX2, tplS)
    if strCase == 'singleton':
        return tuple(tplS) == dInter['tplTree']
    return False


# %% distance


def tree_distance(objTree1, objTree2, boolStar=False):
    """
    Ultrametric distance 2^-sup{h : r_h(t1) = r_h(t2)}, and 0 for equal trees

    numDist = tree_distance(objTree1, objTree2, boolStar=False)

    boolStar switches to the restrictions r_h^inf (max-norm of labels), which also
    accept extended trees.
    """
    fRestrict = restrict_star if boolStar else restrict
    if not isExtendedTree(objTree1) and not isExtendedTree(objTree2) and tuple(objTree1) == tuple(objTree2):
        return Fraction(0)
    if isExtendedTree(objTree1) and isExtendedTree(objTree2) and objTree1['tplTree'] == objTree2['tplTree'] \
            and objTree1['setInfinite'] == objTree2['setInfinite']:
        return Fraction(0)
    intH = 0
    while fRestrict(objTree1, intH + 1) == fRestrict(objTree2, intH + 1):
        intH += 1
    return Fraction(1, 2 ** intH)


# %% enumeration


def getAllTrees(intSize, setDegrees=None):
    """
    Generates every tree with intSize nodes (optionally with out-degrees in setDegrees)

    Trees come out in increasing order of their encoding.
    """
    assert intSize >= 1, "tree size must be positive"
    cellPrefix = []

    def recurse(intOpen):
        intPos = len(cellPrefix)
        intLeft = intSize - intPos - 1
        if intLeft == 0:
            if intOpen == 1 and (setDegrees is None or 0 in setDegrees):
                yield tuple(cellPrefix) + (0,)
            return
        # the node closes one slot and opens intK; open slots must fit the remaining nodes
        for intK in range(0, intLeft - intOpen + 2):
            if setDegrees is not None and intK not in setDegrees:
                continue
            intNewOpen = intOpen - 1 + intK
            if intNewOpen < 1 or intNewOpen > intLeft:
                continue
            cellPrefix.append(intK)
            yield from recurse(intNewOpen)
            cellPrefix.pop()

    yield from recurse(1)


def getTreesUpTo(intMaxSize, setDegrees=None):
    cellTrees = []
    for intSize in range(1, intMaxSize + 1):
        cellTrees.extend(getAllTrees(intSize, setDegrees))
    return cellTrees


# %% subtrees and the leaf correspondence


def getSubtreeEnd(tplTree, intPos):
    """Index one past the preorder block of the subtree rooted at position intPos."""
    intOpen = 1
    intIdx = intPos
    while intOpen > 0:
        intOpen += tplTree[intIdx] - 1
        intIdx += 1
    return intIdx


def getSubtree(tplTree, tplU):
    intPos = getLabels(tplTree).index(tuple(tplU))
    return tuple(tplTree[intPos:getSubtreeEnd(tplTree, intPos)])


def minami_map(tplTree):
    """
    Leaf tree of t: its nodes are the leaves of t

    The left-most leaf becomes the root. Every subtree hanging off the left-most
    branch (children 2..k of a branch node) is mapped recursively and attached as a
    child of the root; children are ordered as their left-most leaves are, i.e.
    deepest branch node first and then by child index.
    """
    tplTree = tuple(tplTree)
    cellBranch = []
    intPos = 0
    while tplTree[intPos] > 0:
        cellBranch.append(intPos)
        intPos += 1
    cellChildren = []
    for intNodePos in reversed(cellBranch):
        intChildPos = getSubtreeEnd(tplTree, intNodePos + 1)
        for _ in range(1, tplTree[intNodePos]):
            intEnd = getSubtreeEnd(tplTree, intChildPos)
            cellChildren.append(minami_map(tplTree[intChildPos:intEnd]))
            intChildPos = intEnd
    tplOut = (len(cellChildren),)
    for tplChild in cellChildren:
        tplOut += tplChild
    return tplOut


# %% functionals

DICT_FUNCTIONAL_CLASS = {'height': 'Additivity',
                         'size': 'Additivity',
                         'leaves': 'Additivity',
                         'maxdeg': 'Identity',
                         'maxgen': 'Monotonicity'}


def getFunctional(strName, setA=None):
    """
    FunctionalSpec dict for one of height, size, leaves (needs setA), maxdeg, maxgen
    """
    strName = strName.lower()
    assert strName in DICT_FUNCTIONAL_CLASS, "unknown functional '%s'" % strName
    if strName == 'leaves':
        assert setA is not None and len(setA) > 0, "leaves functional needs a nonempty set A"
        setA = frozenset(int(a) for a in setA)
    else:
        setA = None
    dFunctional = dict()
    dFunctional['strName'] = strName
    dFunctional['setA'] = setA
    dFunctional['strClass'] = DICT_FUNCTIONAL_CLASS[strName]
    return dFunctional


def getFunctionalValue(tplTree, dFunctional):
    strName = dFunctional['strName']
    if strName == 'size':
        return len(tplTree)
    if strName == 'leaves':
        return sum(1 for intK in tplTree if intK in dFunctional['setA'])
    if strName == 'maxdeg':
        return max(tplTree)
    dStats = stats(tplTree)
    if strName == 'height':
        return dStats['intHeight']
    return dStats['intLargestGeneration']


def getGraftShift(dFunctional, tplTree, tplX):
    """
    D(t,x) with A(t graft_x t') = A(t') + D(t,x) above the threshold; None for maxgen
    """
    strName = dFunctional['strName']
    if strName == 'size':
        return len(tplTree) - 1
    if strName == 'height':
        return len(tuple(tplX))
    if strName == 'leaves':
        setA = dFunctional['setA']
        return sum(1 for intK in tplTree if intK in setA) - (1 if 0 in setA else 0)
    if strName == 'maxdeg':
        return 0
    return None


def getGraftThreshold(dFunctional, tplTree, tplX):
    """Smallest n0 such that the graft property holds whenever A(t graft_x t') >= n0."""
    strName = dFunctional['strName']
    if strName == 'height':
        return getHeight(tplTree) + 1
    if strName == 'maxdeg':
        return max(tplTree) + 1
    return 1


def getGraftMap(dFunctional, tplTree, tplX):
    """
    Exact map a = A(t') -> A(t graft_x t'), or None when A(t') does not determine it
    """
    strName = dFunctional['strName']
    intShift = getGraftShift(dFunctional, tplTree, tplX)
    if strName in ('size', 'leaves'):
        return lambda intA: intA + intShift
    if strName == 'height':
        intHeightT = getHeight(tplTree)
        return lambda intA: max(intHeightT, intShift + intA)
    if strName == 'maxdeg':
        intMaxT = max(tplTree)
        return lambda intA: max(intMaxT, intA)
    return None


def isInWindow(intA, tplWindow):
    intN, intN1 = tplWindow
    if intN1 is None:
        return intA >= intN
    return intN <= intA < intN + intN1


# %% json


def tree_to_json(objTree):
    """{"k": [...]} for finite trees; extended trees add "inf" and "level"."""
    if isExtendedTree(objTree):
        dOut = {'k': list(objTree['tplTree']),
                'inf': [list(v) for v in sorted(objTree['setInfinite'])],
                'level': objTree['intLevel']}
    else:
        dOut = {'k': list(objTree)}
    return json.dumps(dOut, separators=(',', ':'))


def tree_from_json(strJson):
    dIn = json.loads(strJson) if isinstance(strJson, str) else strJson
    tplTree = decode(dIn['k'])
    if 'inf' in dIn:
        return getExtendedTree(tplTree, [tuple(v) for v in dIn['inf']], dIn.get('level', 0))
    return tplTree

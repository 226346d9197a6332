# -*- coding: utf-8 -*-
"""
Offspring distributions and the laws derived from them.

An offspring distribution is a dict built by makeDistribution. Its 'vecPmf' holds p(k)
at index k, as Fractions (object dtype) in exact mode and float64 otherwise.
Parametric families are truncated where the tail drops below DBL_TAIL_TOL; the
discarded mass is kept in 'dblTailBound'.
"""
import json
import math
import logging
import numpy as np
from fractions import Fraction
from functools import reduce
from scipy import stats, special
from gwforge.dependencies import (DBL_TAIL_TOL, DBL_ROOT_TOL, isExact, isExactArray, toNumber, getArray,
                                  getZeros, getIndexArray, evalSeries, getDerivativeCoeffs, trimZeros,
                                  getSmallestFixedPoint, getConvolutionPower)
from gwforge.errors import (OutOfDomain, DegenerateDistribution, NotSuperCritical, NotSubCritical,
                            NotCritical, ZeroOrInfiniteMean, ThetaOutsideInterval, EmptyIntersection,
                            SupportTooLarge)

INT_MAX_DERIVED_SUPPORT = 5000
INT_MAX_LEAF_SUPPORT = 10000
INT_MAX_TAIL_TERMS = 10 ** 6

DICT_PRESETS = {'critical-binary': {'pmf': {'0': '1/2', '2': '1/2'}},
                'sub-binary': {'pmf': {'0': '3/5', '2': '2/5'}},
                'super-binary': {'pmf': {'0': '1/4', '2': '3/4'}},
                'critical-aperiodic': {'pmf': {'0': '1/4', '1': '1/2', '2': '1/4'}}}


# %% construction


def getPeriod(vecPmf):
    """gcd of the positive support points (0 when p = delta_0)."""
    cellSupport = [k for k in range(1, len(vecPmf)) if vecPmf[k] > 0]
    return reduce(math.gcd, cellSupport, 0)


def makeDistribution(vecPmf, strKind='pmf', dParams=None, dblTailBound=0.0, numMean=None, dblRadius=None,
                     dblGenAtRadius=None, dblDerivAtRadius=None):
    """
    Builds an offspring distribution dict and its cached facts

    dDist = makeDistribution(vecPmf, strKind='pmf', dParams=None, dblTailBound=0.0, numMean=None,
                             dblRadius=None, dblGenAtRadius=None, dblDerivAtRadius=None)

    Parameters
    ----------
    vecPmf : 1D array (object of Fractions, or float)
        p(k) at index k, possibly truncated
    strKind : str
        'pmf', 'geometric', 'poisson', 'powerlaw' or 'leaf'
    dblTailBound : float
        mass beyond the truncation (0 for finite support)
    numMean, dblRadius, dblGenAtRadius, dblDerivAtRadius :
        analytic facts; computed from vecPmf when None (finite support has radius inf)

    Returns
    -------
    dDist : dict
        strKind; vecPmf; boolExact; dblTailBound; intTruncation; numMean; intPeriod;
        dblRadius; dblGenAtRadius; dblDerivAtRadius; boolHypP; dParams
    """
    vecPmf = trimZeros(vecPmf)
    boolExact = isExactArray(vecPmf)
    assert all(v >= 0 for v in vecPmf), "probabilities must be nonnegative"
    numMass = np.sum(vecPmf)
    if boolExact and dblTailBound == 0:
        assert numMass == 1, "probabilities sum to %s, not 1" % numMass
    else:
        assert abs(float(numMass) + dblTailBound - 1) <= 1e-10, \
            "probabilities sum to %.15g with tail %.3g, not 1" % (float(numMass), dblTailBound)

    if numMean is None:
        numMean = np.sum(vecPmf * getIndexArray(len(vecPmf), boolExact))
    if dblRadius is None:
        dblRadius = np.inf if dblTailBound == 0 else 1.0
    numP0 = vecPmf[0]
    numP1 = vecPmf[1] if len(vecPmf) > 1 else 0

    dDist = dict()
    dDist['strKind'] = strKind
    dDist['vecPmf'] = vecPmf
    dDist['boolExact'] = boolExact
    dDist['dblTailBound'] = float(dblTailBound)
    dDist['intTruncation'] = len(vecPmf) - 1
    dDist['numMean'] = numMean
    dDist['intPeriod'] = getPeriod(vecPmf)
    dDist['dblRadius'] = dblRadius
    dDist['dblGenAtRadius'] = dblGenAtRadius
    dDist['dblDerivAtRadius'] = dblDerivAtRadius
    dDist['boolHypP'] = bool(0 < numP0 < 1 and numP0 + numP1 < 1)
    dDist['dParams'] = dict() if dParams is None else dParams
    # sampling uses the stored part renormalized
    vecCdf = np.cumsum(np.asarray(vecPmf, dtype=np.float64))
    dDist['vecCdf'] = vecCdf / vecCdf[-1]
    return dDist


def getOffspringDistribution(dPmf, boolExact=None):
    """
    Finite-support offspring distribution from a {k: p(k)} mapping

    Values given as ints, Fractions or rational strings ("1/4") give an exact
    distribution unless boolExact=False; any float makes it a float distribution.
    """
    assert len(dPmf) > 0, "empty pmf"
    dValues = {int(k): v for k, v in dPmf.items()}
    if boolExact is None:
        boolExact = all(isExact(v) or isinstance(v, str) for v in dValues.values())
    intMax = max(dValues.keys())
    assert min(dValues.keys()) >= 0, "offspring numbers must be nonnegative"
    cellValues = [0] * (intMax + 1)
    for intK, objV in dValues.items():
        cellValues[intK] = Fraction(objV) if boolExact else float(Fraction(objV) if isinstance(objV, str) else objV)
    return makeDistribution(getArray(cellValues, boolExact))


def getGeometric(dblA, dblTailTol=DBL_TAIL_TOL):
    """p(k) = (1-a) a^k on N, truncated where a^(K+1) < dblTailTol."""
    dblA = float(dblA)
    assert 0 <= dblA < 1, "geometric parameter must lie in [0,1)"
    if dblA == 0:
        intK = 0
    else:
        intK = max(1, int(np.ceil(np.log(dblTailTol) / np.log(dblA))))
    vecPmf = (1 - dblA) * dblA ** np.arange(intK + 1)
    return makeDistribution(vecPmf, strKind='geometric', dParams={'a': dblA, 'truncate_tail': dblTailTol},
                            dblTailBound=dblA ** (intK + 1), numMean=dblA / (1 - dblA),
                            dblRadius=np.inf if dblA == 0 else 1 / dblA, dblGenAtRadius=np.inf,
                            dblDerivAtRadius=np.inf)


def getPoisson(dblLambda, dblTailTol=DBL_TAIL_TOL):
    dblLambda = float(dblLambda)
    assert dblLambda > 0, "Poisson parameter must be positive"
    intK = int(stats.poisson.isf(dblTailTol, dblLambda)) + 1
    vecPmf = stats.poisson.pmf(np.arange(intK + 1), dblLambda)
    return makeDistribution(vecPmf, strKind='poisson', dParams={'lambda': dblLambda, 'truncate_tail': dblTailTol},
                            dblTailBound=float(stats.poisson.sf(intK, dblLambda)), numMean=dblLambda,
                            dblRadius=np.inf)


def getPowerLaw(dblBeta, dblP0, dblScale=1.0, dblTailTol=DBL_TAIL_TOL, intMaxTruncation=10 ** 5):
    """
    p(0) = p0 and p(k) proportional to k^-beta scale^-k for k >= 1

    The radius of convergence is scale. For scale = 1 the normalizer, the mean and the
    exact discarded tail come from (Hurwitz) zeta functions; the truncation is capped at
    intMaxTruncation and a larger tail is reported with a warning.
    """
    dblBeta = float(dblBeta)
    dblP0 = float(dblP0)
    dblScale = float(dblScale)
    assert 0 < dblP0 < 1, "p0 must lie in (0,1)"
    assert dblScale >= 1, "scale must be at least 1"
    if dblScale == 1:
        assert dblBeta > 1, "beta must exceed 1 for a normalizable power law"
        dblNorm = special.zeta(dblBeta)
        intK = int(np.ceil(((1 - dblP0) / (dblNorm * (dblBeta - 1) * dblTailTol)) ** (1 / (dblBeta - 1))))
        intK = min(max(intK, 1), intMaxTruncation)
        dblTail = (1 - dblP0) * special.zeta(dblBeta, intK + 1) / dblNorm
        dblMean = (1 - dblP0) * special.zeta(dblBeta - 1) / dblNorm if dblBeta > 2 else np.inf
        dblGenAtRadius = 1.0
        dblDerivAtRadius = dblMean
    else:
        # geometric domination of the tail by scale^-k
        intK = int(np.ceil(np.log(dblTailTol * (1 - 1 / dblScale) / 10) / -np.log(dblScale)))
        intK = min(max(intK, 1), intMaxTruncation)
        vecKk = np.arange(1, 4 * intK + 1, dtype=np.float64)
        vecTerms = vecKk ** -dblBeta * dblScale ** -vecKk
        dblNorm = np.sum(vecTerms)
        dblTail = (1 - dblP0) * np.sum(vecTerms[intK:]) / dblNorm
        dblMean = (1 - dblP0) * np.sum(vecKk * vecTerms) / dblNorm
        dblGenAtRadius = dblP0 + (1 - dblP0) * special.zeta(dblBeta) / dblNorm
        dblDerivAtRadius = (1 - dblP0) * special.zeta(dblBeta - 1) / (dblNorm * dblScale) if dblBeta > 2 else np.inf
    if dblTail > dblTailTol:
        logging.warning("getPowerLaw: truncation at %d leaves tail mass %.3g above tolerance %.3g"
                        % (intK, dblTail, dblTailTol))
    vecK = np.arange(1, intK + 1, dtype=np.float64)
    vecPmf = np.concatenate(([dblP0], (1 - dblP0) * vecK ** -dblBeta * dblScale ** -vecK / dblNorm))
    dParams = {'beta': dblBeta, 'p0': dblP0, 'scale': dblScale, 'truncate_tail': dblTailTol}
    dDist = makeDistribution(vecPmf, strKind='powerlaw', dParams=dParams, dblTailBound=dblTail, numMean=dblMean,
                             dblRadius=dblScale, dblGenAtRadius=dblGenAtRadius, dblDerivAtRadius=dblDerivAtRadius)
    dDist['dblNorm'] = dblNorm
    return dDist


# %% parsing


def parse_distribution(objSpec):
    """
    Offspring distribution from a preset name, a JSON string or a parsed JSON dict

    Presets: critical-binary, sub-binary, super-binary, critical-aperiodic, geom:a,
    poisson:lambda, powerlaw:beta:p0[:scale].
    JSON: {"pmf": {"0": "1/4", "2": "3/4"}}, {"geometric": {"a": 0.6}, "truncate_tail": 1e-14},
    {"poisson": {"lambda": 1.2}}, {"powerlaw": {"beta": 3, "p0": 0.5, "scale": 1}}.
    """
    if isinstance(objSpec, str):
        strSpec = objSpec.strip()
        if strSpec in DICT_PRESETS:
            return parse_distribution(DICT_PRESETS[strSpec])
        if strSpec.startswith('geom:'):
            return getGeometric(float(Fraction(strSpec[5:])))
        if strSpec.startswith('poisson:'):
            return getPoisson(float(Fraction(strSpec[8:])))
        if strSpec.startswith('powerlaw:'):
            cellParts = [float(Fraction(s)) for s in strSpec[9:].split(':')]
            assert len(cellParts) in (2, 3), "powerlaw preset is powerlaw:beta:p0[:scale]"
            return getPowerLaw(*cellParts)
        try:
            objSpec = json.loads(strSpec)
        except json.JSONDecodeError:
            raise ValueError("Input error: '%s' is neither a preset nor valid distribution JSON" % strSpec)
    assert isinstance(objSpec, dict), "distribution spec must be a dict"
    dblTailTol = float(objSpec.get('truncate_tail', DBL_TAIL_TOL))
    if 'pmf' in objSpec:
        dPmf = dict()
        for strK, objV in objSpec['pmf'].items():
            dPmf[int(strK)] = Fraction(objV) if isinstance(objV, str) else objV
        return getOffspringDistribution(dPmf)
    if 'geometric' in objSpec:
        return getGeometric(objSpec['geometric']['a'], dblTailTol)
    if 'poisson' in objSpec:
        dPar = objSpec['poisson']
        return getPoisson(dPar.get('lambda', dPar.get('lam')), dblTailTol)
    if 'powerlaw' in objSpec:
        dPar = objSpec['powerlaw']
        return getPowerLaw(dPar['beta'], dPar['p0'], dPar.get('scale', 1.0), dblTailTol)
    raise ValueError("Input error: distribution spec needs one of pmf, geometric, poisson, powerlaw")


def distribution_to_json(dDist):
    strKind = dDist['strKind']
    if strKind in ('geometric', 'poisson', 'powerlaw'):
        dParams = {k: v for k, v in dDist['dParams'].items() if k != 'truncate_tail'}
        return json.dumps({strKind: dParams, 'truncate_tail': dDist['dParams']['truncate_tail']})
    dPmf = dict()
    for intK, numV in enumerate(dDist['vecPmf']):
        if numV != 0:
            dPmf[str(intK)] = str(numV) if dDist['boolExact'] else float(numV)
    dOut = {'pmf': dPmf}
    if dDist['dblTailBound'] > 0:
        dOut['tail_bound'] = dDist['dblTailBound']
    return json.dumps(dOut)


def getPmfDict(dDist):
    """{k: p(k)} over the positive support."""
    return {k: v for k, v in enumerate(dDist['vecPmf']) if v != 0}


# %% generating function


def getCriticality(dDist):
    numMean = dDist['numMean']
    if dDist['boolExact'] and isExact(numMean):
        if numMean == 1:
            return 'critical'
    elif abs(numMean - 1) <= DBL_ROOT_TOL:
        return 'critical'
    return 'sub-critical' if numMean < 1 else 'super-critical'


def getRadius(dDist):
    return dDist['dblRadius']


def checkDomain(dDist, numR):
    dblRadius = dDist['dblRadius']
    boolAtRadius = numR == dblRadius and dDist['dblGenAtRadius'] is not None and np.isfinite(dDist['dblGenAtRadius'])
    if numR < 0 or (numR >= dblRadius and not boolAtRadius):
        raise OutOfDomain("Input error: r=%s lies outside [0, %s)" % (numR, dblRadius))


def getTruncatedGenFn(dDist, numR):
    """(g(r), g'(r)) summed over the stored (possibly truncated) support."""
    vecPmf = dDist['vecPmf']
    return evalSeries(vecPmf, numR), evalSeries(getDerivativeCoeffs(vecPmf), numR)


def getPolylogTail(dblS, dblX, intK):
    """
    sum_{k>K} k^-s x^k for 0 <= x <= 1

    At x = 1 this is the Hurwitz zeta value zeta(s, K+1). Below 1 the terms are summed
    until x^k drops under DBL_TAIL_TOL; the rest beyond the last summed term M is
    bounded by x^(M+1) zeta(s, M+1) and added as is.
    """
    if dblX <= 0:
        return 0.0
    if dblX >= 1:
        return float(special.zeta(dblS, intK + 1)) if dblS > 1 else np.inf
    intTerms = int(min(INT_MAX_TAIL_TERMS, np.ceil(np.log(DBL_TAIL_TOL) / np.log(dblX)) + 1))
    vecK = np.arange(intK + 1, intK + intTerms + 1, dtype=np.float64)
    dblSum = float(np.sum(vecK ** -dblS * dblX ** vecK))
    intM = intK + intTerms
    if dblS > 1:
        dblRest = dblX ** (intM + 1) * float(special.zeta(dblS, intM + 1))
    else:
        dblRest = dblX ** (intM + 1) * (intM + 1) ** -dblS / (1 - dblX)
    return dblSum + dblRest


def getSeriesTail(dDist, numR):
    """
    Contributions of the terms k > K dropped by the truncation to (g(r), g'(r))

    Geometric and Poisson tails have closed forms, power-law tails are polylog tails
    (Hurwitz zeta values at the radius). Finite supports and derived laws give (0, 0).
    """
    dblR = float(numR)
    if dDist['dblTailBound'] == 0 or dblR <= 0:
        return 0.0, 0.0
    strKind = dDist['strKind']
    intK = dDist['intTruncation']
    if strKind == 'geometric':
        dblA = dDist['dParams']['a']
        dblX = dblA * dblR
        dblG = (1 - dblA) * dblX ** (intK + 1) / (1 - dblX)
        dblDeriv = (1 - dblA) * dblA * ((intK + 1) * dblX ** intK - intK * dblX ** (intK + 1)) / (1 - dblX) ** 2
        return dblG, dblDeriv
    if strKind == 'poisson':
        dblLambda = dDist['dParams']['lambda']
        dblFactor = np.exp(dblLambda * (dblR - 1))
        return (float(dblFactor * stats.poisson.sf(intK, dblLambda * dblR)),
                float(dblLambda * dblFactor * stats.poisson.sf(intK - 1, dblLambda * dblR)))
    if strKind == 'powerlaw':
        dParams = dDist['dParams']
        dblRho = dParams['scale']
        dblC = (1 - dParams['p0']) / dDist['dblNorm']
        dblX = dblR / dblRho
        dblG = dblC * getPolylogTail(dParams['beta'], dblX, intK)
        dblDeriv = dblC / (dblRho * dblX) * getPolylogTail(dParams['beta'] - 1, dblX, intK)
        return dblG, dblDeriv
    return 0.0, 0.0


def gen_fn(dDist, numR):
    """
    Generating function and its derivative

    (numG, numDeriv) = gen_fn(dDist, numR)

    Geometric and Poisson laws use their closed forms; power laws sum the stored pmf and
    add the dropped tail, which is what keeps g and g' right up to the radius. Everything
    else sums the stored pmf (exactly for Fraction inputs). raises OutOfDomain outside
    [0, radius).
    """
    checkDomain(dDist, numR)
    strKind = dDist['strKind']
    if strKind == 'geometric':
        dblA = dDist['dParams']['a']
        dblDen = 1 - dblA * float(numR)
        return (1 - dblA) / dblDen, dblA * (1 - dblA) / dblDen ** 2
    if strKind == 'poisson':
        dblLambda = dDist['dParams']['lambda']
        dblG = np.exp(dblLambda * (float(numR) - 1))
        return dblG, dblLambda * dblG
    if strKind == 'powerlaw':
        numG, numDeriv = getTruncatedGenFn(dDist, numR)
        dblTailG, dblTailDeriv = getSeriesTail(dDist, numR)
        return float(numG) + dblTailG, float(numDeriv) + dblTailDeriv
    if dDist['dblTailBound'] > 0 and numR > 1:
        logging.warning("gen_fn: truncated series evaluated at r=%s > 1, tail bound %.3g holds at r <= 1 only"
                        % (numR, dDist['dblTailBound']))
    return getTruncatedGenFn(dDist, numR)


def getIterate(dDist, numR, intN):
    """g_n(r): the n-fold composition of g."""
    for _ in range(intN):
        numR = gen_fn(dDist, numR)[0]
    return numR


# %% extinction


def extinction_probability(dDist):
    """
    Extinction probability q, the smallest root of g(r) = r in [0,1]

    numQ = extinction_probability(dDist)

    Distributions outside 0<p(0)<1, p(0)+p(1)<1 raise DegenerateDistribution carrying
    the exact answer in .numQ. Otherwise q = 1 when m <= 1, and for m > 1 the root is
    found by monotone iteration from 0 refined with brentq; exact inputs return a
    Fraction when the root is rational.
    """
    vecPmf = dDist['vecPmf']
    boolExact = dDist['boolExact']
    numP0 = vecPmf[0]
    numP1 = vecPmf[1] if len(vecPmf) > 1 else 0
    if numP0 == 0:
        raise DegenerateDistribution("Input error: p(0)=0, the tree never dies out (q=0)", numQ=toNumber(0, boolExact))
    if numP0 == 1:
        raise DegenerateDistribution("Input error: p(0)=1, the tree is a.s. the root (q=1)",
                                     numQ=toNumber(1, boolExact))
    if numP0 + numP1 == 1:
        raise DegenerateDistribution("Input error: p(0)+p(1)=1, the tree is a.s. a finite path (q=1)",
                                     numQ=toNumber(1, boolExact))
    if getCriticality(dDist) != 'super-critical':
        return toNumber(1, boolExact)
    return getSmallestFixedPoint(vecPmf)


def getExtinction(dDist):
    """q, including the special answers of degenerate distributions."""
    try:
        return extinction_probability(dDist)
    except DegenerateDistribution as objErr:
        return objErr.numQ


# %% derived distributions


def getPowers(numR, intN):
    """[r^0, ..., r^(n-1)] (object array when r is exact)."""
    boolExact = isExact(numR)
    cellPowers = []
    numPow = toNumber(1, boolExact)
    for _ in range(intN):
        cellPowers.append(numPow)
        numPow = numPow * numR
    return getArray(cellPowers, boolExact)


def requireSuperCritical(dDist, strFunc):
    if getCriticality(dDist) != 'super-critical':
        raise NotSuperCritical("Input error: %s needs m > 1, got m=%s" % (strFunc, dDist['numMean']))
    if not dDist['boolHypP']:
        raise DegenerateDistribution("Input error: %s needs 0<p(0)<1 and p(0)+p(1)<1" % strFunc,
                                     numQ=getExtinction(dDist))


def requireSubCritical(dDist, strFunc):
    if getCriticality(dDist) != 'sub-critical':
        raise NotSubCritical("Input error: %s needs m < 1, got m=%s" % (strFunc, dDist['numMean']))


def conjugate(dDist):
    """
    Law of a super-critical tree conditioned on extinction: p~(n) = q^(n-1) p(n)
    """
    requireSuperCritical(dDist, 'conjugate')
    numQ = extinction_probability(dDist)
    vecPmf = dDist['vecPmf']
    boolExact = dDist['boolExact'] and isExact(numQ)
    vecTilde = vecPmf * getPowers(numQ, len(vecPmf)) / numQ
    if not boolExact:
        vecTilde = np.asarray(vecTilde, dtype=np.float64)
    return makeDistribution(vecTilde, dParams={'strDerivedFrom': 'conjugate', 'numQ': numQ},
                            dblTailBound=dDist['dblTailBound'])


def size_biased(dDist):
    """p*(n) = n p(n) / m"""
    numMean = dDist['numMean']
    if not (0 < numMean < np.inf):
        raise ZeroOrInfiniteMean("Input error: size-biasing needs 0 < m < inf, got m=%s" % numMean)
    vecPmf = dDist['vecPmf']
    vecStar = vecPmf * getIndexArray(len(vecPmf), dDist['boolExact']) / numMean
    dblTail = 0.0
    if dDist['dblTailBound'] > 0:
        dblTail = max(0.0, 1 - float(np.sum(vecStar)))
    return makeDistribution(vecStar, dParams={'strDerivedFrom': 'size_biased'}, dblTailBound=dblTail)


def survivor_joint(dDist):
    """
    Joint law of (S, E) at the root of a super-critical tree conditioned on survival

    dJoint = survivor_joint(dDist)
    dJoint[(s, e)] = p(s+e) C(s+e, s) (1-q)^s q^e / (1-q), for s >= 1
    """
    requireSuperCritical(dDist, 'survivor_joint')
    vecPmf = dDist['vecPmf']
    if len(vecPmf) > INT_MAX_DERIVED_SUPPORT:
        raise SupportTooLarge("Input error: survivor_joint over %d support points" % len(vecPmf))
    numQ = extinction_probability(dDist)
    boolExact = dDist['boolExact'] and isExact(numQ)
    numQ = toNumber(numQ, boolExact)
    numSurv = 1 - numQ
    dJoint = dict()
    for intN in range(1, len(vecPmf)):
        numP = toNumber(vecPmf[intN], boolExact)
        if numP == 0:
            continue
        for intS in range(1, intN + 1):
            numComb = math.comb(intN, intS) if boolExact else special.comb(intN, intS, exact=False)
            numProb = numP * numComb * numSurv ** intS * numQ ** (intN - intS) / numSurv
            if numProb != 0:
                dJoint[(intS, intN - intS)] = numProb
    return dJoint


def backbone(dDist):
    """
    Offspring law of the surviving lineages: marginal of S under survivor_joint
    """
    dJoint = survivor_joint(dDist)
    boolExact = all(isExact(v) for v in dJoint.values())
    intMax = max(s for s, _ in dJoint.keys())
    vecHat = getZeros(intMax + 1, boolExact)
    for (intS, _), numProb in dJoint.items():
        vecHat[intS] += numProb
    return makeDistribution(vecHat, dParams={'strDerivedFrom': 'backbone'}, dblTailBound=dDist['dblTailBound'],
                            numMean=dDist['numMean'] if dDist['dblTailBound'] > 0 else None)


def reconstruct_gen_fn(dDist, numR, dDistTilde=None, dDistHat=None):
    """
    g(r) rebuilt from the conjugate and backbone laws

    q g~(r/q) on [0,q] and q + (1-q) g^((r-q)/(1-q)) on (q,1]
    """
    numQ = extinction_probability(dDist)
    if dDistTilde is None:
        dDistTilde = conjugate(dDist)
    if dDistHat is None:
        dDistHat = backbone(dDist)
    if numR <= numQ:
        return numQ * gen_fn(dDistTilde, numR / numQ)[0]
    return numQ + (1 - numQ) * gen_fn(dDistHat, (numR - numQ) / (1 - numQ))[0]


def condensation_offspring(dDist):
    """
    Extended offspring law n p(n) on N with atom 1-m at infinity

    dExtOff = condensation_offspring(dDist)
    dExtOff has entries vecPmf (finite part), numAtomInf, dblTailBound
    """
    requireSubCritical(dDist, 'condensation_offspring')
    vecPmf = dDist['vecPmf']
    vecFinite = vecPmf * getIndexArray(len(vecPmf), dDist['boolExact'])
    dExtOff = dict()
    dExtOff['vecPmf'] = vecFinite
    dExtOff['numAtomInf'] = 1 - dDist['numMean']
    dExtOff['dblTailBound'] = 0.0
    if dDist['dblTailBound'] > 0:
        dExtOff['dblTailBound'] = max(0.0, float(dDist['numMean'] - np.sum(vecFinite)))
    return dExtOff


def leaf_offspring(dDist, dblTailTol=DBL_TAIL_TOL, boolStrict=False):
    """
    Offspring law of the leaf tree: zeta' = sum_{k<N} (X_k - 1)

    dLeaf = leaf_offspring(dDist, dblTailTol=1e-14, boolStrict=False)

    N is geometric on {1,2,...} with parameter p(0) and X_k ~ zeta | zeta > 0. The
    generating function p(0) s / (s - g(s) + p(0)) gives the coefficient recursion
        f_n (1 - p(1)) = p(0) [n=0] + sum_{j=1..n} p(j+1) f_{n-j}
    which is run (exactly for Fraction input) until the remaining mass is below
    dblTailTol. The mean is (m - (1 - p(0))) / p(0). A non-critical input logs a
    warning (or raises NotCritical when boolStrict).
    """
    if not dDist['boolHypP']:
        raise DegenerateDistribution("Input error: leaf_offspring needs 0<p(0)<1 and p(0)+p(1)<1",
                                     numQ=getExtinction(dDist))
    boolCritical = getCriticality(dDist) == 'critical'
    if not boolCritical:
        if boolStrict:
            raise NotCritical("Input error: leaf_offspring is critical only for critical input, m=%s"
                              % dDist['numMean'])
        logging.warning("leaf_offspring: input has m=%s, the leaf tree is not critical" % dDist['numMean'])
    vecPmf = dDist['vecPmf']
    boolExact = dDist['boolExact']
    numP0 = vecPmf[0]
    numP1 = vecPmf[1] if len(vecPmf) > 1 else toNumber(0, boolExact)
    numDen = 1 - numP1
    cellCoeffs = [numP0 / numDen]
    numMass = cellCoeffs[0]
    while 1 - numMass >= dblTailTol and len(cellCoeffs) < INT_MAX_LEAF_SUPPORT:
        intN = len(cellCoeffs)
        numSum = toNumber(0, boolExact)
        for intJ in range(1, min(intN, len(vecPmf) - 2) + 1):
            numSum += vecPmf[intJ + 1] * cellCoeffs[intN - intJ]
        cellCoeffs.append(numSum / numDen)
        numMass += cellCoeffs[-1]
    dblTail = float(1 - numMass)
    if dblTail >= dblTailTol:
        logging.warning("leaf_offspring: stopped at %d terms with tail mass %.3g" % (len(cellCoeffs), dblTail))
    numMean = (dDist['numMean'] - (1 - numP0)) / numP0
    dLeaf = makeDistribution(getArray(cellCoeffs, boolExact), strKind='leaf',
                             dParams={'strDerivedFrom': 'leaf_offspring', 'boolCriticalInput': boolCritical},
                             dblTailBound=max(dblTail, 0.0), numMean=numMean, dblRadius=1.0)
    return dLeaf


# %% tilted family


def getTiltSums(dDist, setA, numTheta):
    """
    (sum_{k in A} theta^(k-1) p(k), sum_{k not in A} theta^(k-1) p(k)); setA None is all of N
    """
    numG = gen_fn(dDist, numTheta)[0]
    if setA is None:
        return numG / numTheta, toNumber(0, isExact(numG))
    vecPmf = dDist['vecPmf']
    numPartA = toNumber(0, dDist['boolExact'] and isExact(numTheta))
    for intK in setA:
        if intK < len(vecPmf):
            numPartA += vecPmf[intK] * numTheta ** intK
    return numPartA / numTheta, (numG - numPartA) / numTheta


def getMassA(dDist, setA):
    if setA is None:
        return np.sum(dDist['vecPmf'])
    vecPmf = dDist['vecPmf']
    return sum((vecPmf[k] for k in setA if k < len(vecPmf)), toNumber(0, dDist['boolExact']))


def isThetaFeasible(dDist, setA, numTheta):
    try:
        _, numNotA = getTiltSums(dDist, setA, numTheta)
    except OutOfDomain:
        return False
    return bool(np.isfinite(float(numNotA)) and numNotA <= 1)


def getTiltedTail(dDist, numTheta):
    """Bound on sum_{k>K} theta^(k-1) p(k) beyond the stored truncation K."""
    dblTail = dDist['dblTailBound']
    if dblTail == 0:
        return 0.0
    dblTheta = float(numTheta)
    intK = dDist['intTruncation']
    strKind = dDist['strKind']
    if dblTheta <= 1:
        return dblTail / dblTheta
    if strKind == 'geometric':
        dblA = dDist['dParams']['a']
        return (1 - dblA) * (dblA * dblTheta) ** (intK + 1) / (dblTheta * (1 - dblA * dblTheta))
    if strKind == 'poisson':
        dblLambda = dDist['dParams']['lambda']
        return np.exp(dblLambda * (dblTheta - 1)) * stats.poisson.sf(intK, dblLambda * dblTheta) / dblTheta
    if strKind == 'powerlaw' and dblTheta < dDist['dblRadius']:
        # p(k) rho^k is nonincreasing in k
        dblRatio = dblTheta / dDist['dblRadius']
        dblLast = float(dDist['vecPmf'][intK]) * dDist['dblRadius'] ** intK
        return dblLast * dblRatio ** (intK + 1) / ((1 - dblRatio) * dblTheta)
    return np.inf


def tilt(dDist, setA, numTheta):
    """
    Tilted law p_theta^A

    dTilt = tilt(dDist, setA, numTheta)

    p_theta^A(k) = theta^(k-1) p(k) off A and c_A(theta) theta^(k-1) p(k) on A, with
    c_A(theta) = (1 - sum_{k not in A} theta^(k-1) p(k)) / sum_{k in A} theta^(k-1) p(k).
    setA None stands for all of N. raises EmptyIntersection when p(A) = 0 and
    ThetaOutsideInterval when theta is not in I_A.
    """
    if getMassA(dDist, setA) == 0:
        raise EmptyIntersection("Input error: p(A)=0 for A=%s" % (sorted(setA),))
    if not numTheta > 0:
        raise ThetaOutsideInterval("Input error: theta=%s must be positive" % numTheta)
    try:
        numSumA, numSumNotA = getTiltSums(dDist, setA, numTheta)
    except OutOfDomain:
        raise ThetaOutsideInterval("Input error: theta=%s exceeds the radius %s" % (numTheta, dDist['dblRadius']))
    if numSumNotA > 1 or not np.isfinite(float(numSumA)):
        raise ThetaOutsideInterval("Input error: theta=%s is outside I_A (off-A sum %s > 1)" % (numTheta, numSumNotA))
    numC = (1 - numSumNotA) / numSumA
    vecPmf = dDist['vecPmf']
    boolExact = dDist['boolExact'] and isExact(numTheta)
    vecTilt = vecPmf * getPowers(numTheta, len(vecPmf)) / numTheta
    if setA is None:
        vecTilt = vecTilt * numC
    else:
        for intK in setA:
            if intK < len(vecTilt):
                vecTilt[intK] = vecTilt[intK] * numC
    if not boolExact:
        vecTilt = np.asarray(vecTilt, dtype=np.float64)
    dblTail = 0.0
    numMean = None
    if dDist['dblTailBound'] > 0:
        dblTail = max(0.0, 1 - float(np.sum(vecTilt)))
        # terms k > K off A carry theta^(k-1) p(k), times c_A(theta) when A = N
        _, dblTailDeriv = getSeriesTail(dDist, numTheta)
        dblTailMean = dblTailDeriv * (float(numC) if setA is None else 1.0)
        numMean = float(np.sum(vecTilt * np.arange(len(vecTilt)))) + dblTailMean
    dParams = {'strDerivedFrom': 'tilt', 'setA': setA, 'numTheta': numTheta, 'numC': numC,
               'dblTruncationBound': getTiltedTail(dDist, numTheta)}
    return makeDistribution(vecTilt, dParams=dParams, dblTailBound=dblTail, numMean=numMean)


def tilt_mean(dDist, setA, numTheta):
    """m^A(theta), the mean of p_theta^A."""
    return tilt(dDist, setA, numTheta)['numMean']


def tilt_interval(dDist, setA, intIterNum=200):
    """
    sup I_A, by bisection on the feasibility predicate (np.inf when unbounded)

    I_A always contains 1; the predicate is monotone on [1, sup I_A].
    """
    dblRadius = dDist['dblRadius']
    if np.isfinite(dblRadius):
        if isThetaFeasible(dDist, setA, dblRadius):
            return dblRadius
        dblHigh = dblRadius
    else:
        dblHigh = 2.0
        while isThetaFeasible(dDist, setA, dblHigh):
            if dblHigh > 1e12:
                return np.inf
            dblHigh *= 2
    dblLow = 1.0
    for _ in range(intIterNum):
        dblMid = (dblLow + dblHigh) / 2
        if dblMid in (dblLow, dblHigh):
            break
        if isThetaFeasible(dDist, setA, dblMid):
            dblLow = dblMid
        else:
            dblHigh = dblMid
    return dblLow


def getConditionalMeanAtRadius(dDist, setA):
    """E[Y | Y in A] with Y ~ p(k) rho^k / g(rho); A = N uses g and g' at the radius."""
    dblRadius = dDist['dblRadius']
    if setA is None:
        dblG, dblDeriv = gen_fn(dDist, dblRadius)
        return dblRadius * dblDeriv / dblG
    vecPmf = np.asarray(dDist['vecPmf'], dtype=np.float64)
    vecK = np.arange(len(vecPmf), dtype=np.float64)
    vecW = vecPmf * dblRadius ** vecK * np.isin(np.arange(len(vecPmf)), sorted(setA))
    return np.sum(vecK * vecW) / np.sum(vecW)


def genericity(dDist, setA, dblTol=1e-13):
    """
    Generic / non-generic classification of a sub-critical law for the set A

    dReport = genericity(dDist, setA, dblTol=1e-13)

    Parameters
    ----------
    dDist : dict
        sub-critical offspring distribution satisfying 0<p(0)<1, p(0)+p(1)<1
    setA : set of int or None
        out-degrees conditioned on (None for all of N, i.e. the size)

    Returns
    -------
    dReport : dict (TiltReport)
        setA; strClass ('Generic' or 'NonGeneric'); strCase ('i', 'ii' or 'iii');
        numThetaC (generic only); numThetaStar (sup I_A); dDistStar (p^(*) if generic,
        p~^(*) otherwise); numMeanStar

    The case split follows the radius rho: rho = inf or g'(rho) >= 1 is generic
    (case i); rho = 1 is non-generic (case ii); otherwise (case iii) the law is
    non-generic iff E[Y | Y in A] < (rho - rho g'(rho)) / (rho - g(rho)) with
    Y ~ p(k) rho^k / g(rho). theta_c solves m^A(theta) = 1 by bisection.
    """
    # %% build placeholder outputs
    dReport = dict()
    dReport['setA'] = setA
    dReport['strClass'] = None
    dReport['strCase'] = None
    dReport['numThetaC'] = None
    dReport['numThetaStar'] = None
    dReport['dDistStar'] = None
    dReport['numMeanStar'] = None

    # %% check inputs
    requireSubCritical(dDist, 'genericity')
    if not dDist['boolHypP']:
        raise DegenerateDistribution("Input error: genericity needs 0<p(0)<1 and p(0)+p(1)<1",
                                     numQ=getExtinction(dDist))
    if getMassA(dDist, setA) == 0:
        raise EmptyIntersection("Input error: p(A)=0 for A=%s" % (sorted(setA),))

    # %% classify
    dblRadius = dDist['dblRadius']
    numThetaStar = tilt_interval(dDist, setA)
    dReport['numThetaStar'] = numThetaStar
    if not np.isfinite(dblRadius) or dDist['dblDerivAtRadius'] is None or dDist['dblDerivAtRadius'] >= 1:
        strCase = 'i'
        boolGeneric = True
    elif dblRadius == 1:
        strCase = 'ii'
        boolGeneric = False
    else:
        strCase = 'iii'
        dblG = dDist['dblGenAtRadius']
        dblDeriv = dDist['dblDerivAtRadius']
        dblBound = (dblRadius - dblRadius * dblDeriv) / (dblRadius - dblG)
        boolGeneric = not getConditionalMeanAtRadius(dDist, setA) < dblBound
    dReport['strCase'] = strCase

    if boolGeneric:
        dblLow = 1.0
        dblHigh = numThetaStar if np.isfinite(numThetaStar) else 2.0
        while not np.isfinite(numThetaStar) and tilt_mean(dDist, setA, dblHigh) < 1:
            dblHigh *= 2
        if tilt_mean(dDist, setA, dblHigh) < 1:
            logging.warning("genericity: case %s predicts a generic law but m^A(sup I_A) < 1; "
                            "reporting non-generic" % strCase)
            boolGeneric = False
    if boolGeneric:
        while dblHigh - dblLow > dblTol * dblHigh:
            dblMid = (dblLow + dblHigh) / 2
            if tilt_mean(dDist, setA, dblMid) < 1:
                dblLow = dblMid
            else:
                dblHigh = dblMid
        numThetaC = (dblLow + dblHigh) / 2
        if dDist['boolExact']:
            numCand = Fraction(numThetaC).limit_denominator(10 ** 6)
            if isThetaFeasible(dDist, setA, numCand) and tilt_mean(dDist, setA, numCand) == 1:
                numThetaC = numCand
        dReport['strClass'] = 'Generic'
        dReport['numThetaC'] = numThetaC
        dReport['dDistStar'] = tilt(dDist, setA, numThetaC)
    else:
        dReport['strClass'] = 'NonGeneric'
        dReport['dDistStar'] = tilt(dDist, setA, numThetaStar)
    dReport['numMeanStar'] = dReport['dDistStar']['numMean']
    return dReport


# %% sums of offspring


def getSumLaw(dDist, intN, intMaxLen=None):
    """Law of S_n = zeta_1 + ... + zeta_n, as a vector indexed by the value."""
    return getConvolutionPower(dDist['vecPmf'], intN, intMaxLen)

# -*- coding: utf-8 -*-
import numpy as np
import logging
from fractions import Fraction
from scipy import optimize

# %% constants
DBL_TAIL_TOL = 1e-14
DBL_ROOT_TOL = 1e-12
INT_MAX_DENOMINATOR = 10 ** 9


# %% dual arithmetic


def isExact(numX):
    """True for python ints and Fractions (not for bools or numpy scalars)."""
    return isinstance(numX, (int, Fraction)) and not isinstance(numX, bool)


def toNumber(numX, boolExact):
    if boolExact:
        return Fraction(numX)
    return float(numX)


def getArray(cellValues, boolExact):
    """
    Builds a 1D numpy array that is either object-dtype (Fractions) or float64

    vec = getArray(cellValues, boolExact)
    """
    if boolExact:
        vecOut = np.empty(len(cellValues), dtype=object)
        vecOut[:] = [Fraction(v) for v in cellValues]
        return vecOut
    return np.asarray([float(v) for v in cellValues], dtype=np.float64)


def getZeros(intN, boolExact):
    if boolExact:
        return getArray([0] * intN, True)
    return np.zeros(intN, dtype=np.float64)


def getIndexArray(intN, boolExact):
    # python ints only: Fraction does not mix with numpy integer scalars
    if boolExact:
        vecOut = np.empty(intN, dtype=object)
        vecOut[:] = list(range(intN))
        return vecOut
    return np.arange(intN, dtype=np.float64)


def isExactArray(vecX):
    return vecX.dtype == object


def evalSeries(vecCoeffs, numR):
    """
    Evaluates sum_k vecCoeffs[k] r^k (Horner for exact arrays, polyval otherwise)
    """
    if isExactArray(vecCoeffs):
        numOut = Fraction(0)
        for numC in vecCoeffs[::-1]:
            numOut = numOut * numR + numC
        return numOut
    return float(np.polynomial.polynomial.polyval(float(numR), vecCoeffs))


def getDerivativeCoeffs(vecCoeffs):
    boolExact = isExactArray(vecCoeffs)
    if len(vecCoeffs) < 2:
        return getZeros(1, boolExact)
    return vecCoeffs[1:] * getIndexArray(len(vecCoeffs), boolExact)[1:]


def trimZeros(vecX):
    """Drops trailing zeros but keeps at least one entry."""
    intLast = len(vecX)
    while intLast > 1 and vecX[intLast - 1] == 0:
        intLast -= 1
    return vecX[:intLast]


# %% convolutions


def getConvolution(vec1, vec2, intMaxLen=None):
    """
    Discrete convolution of two pmf-like vectors, truncated to intMaxLen entries
    """
    intLen = len(vec1) + len(vec2) - 1
    if intMaxLen is not None:
        intLen = min(intLen, intMaxLen)
    if isExactArray(vec1) or isExactArray(vec2):
        vecOut = getZeros(intLen, True)
        for i in range(min(len(vec1), intLen)):
            numA = vec1[i]
            if numA == 0:
                continue
            for j in range(min(len(vec2), intLen - i)):
                if vec2[j] != 0:
                    vecOut[i + j] += numA * vec2[j]
        return vecOut
    return np.convolve(vec1, vec2)[:intLen]


def getConvolutionPower(vecPmf, intN, intMaxLen=None):
    """
    Law of the sum of intN i.i.d. draws from vecPmf

    vecPow = getConvolutionPower(vecPmf, intN, intMaxLen=None)
    entry j of vecPow is P(S_n = j); entries beyond intMaxLen are dropped. Uses repeated
    squaring, so about 2 log2(n) convolutions.
    """
    assert intN >= 0, "intN must be nonnegative"
    vecOut = getArray([1], isExactArray(vecPmf))
    vecBase = vecPmf if intMaxLen is None else vecPmf[:intMaxLen]
    intN = int(intN)
    while intN > 0:
        if intN & 1:
            vecOut = getConvolution(vecOut, vecBase, intMaxLen)
        intN >>= 1
        if intN > 0:
            vecBase = getConvolution(vecBase, vecBase, intMaxLen)
    return vecOut


# %% fixed points


def getRationalRoot(dblRoot, vecCoeffs):
    """Returns a Fraction r with h(r) == r exactly if one is close to dblRoot, else None."""
    numCand = Fraction(dblRoot).limit_denominator(INT_MAX_DENOMINATOR)
    if evalSeries(vecCoeffs, numCand) == numCand:
        return numCand
    return None


def getSmallestFixedPoint(vecCoeffs, intIterNum=500):
    """
    Smallest root in [0,1] of h(r) = r, for h a power series with nonnegative coefficients

    numRoot = getSmallestFixedPoint(vecCoeffs, intIterNum=500)

    The coefficients may sum to less than one (sub-probability series). The solver runs the
    monotone iteration r_{n+1} = h(r_n) from 0, then refines the bracket with brentq. For
    exact (Fraction) coefficients the root is returned as a Fraction when it is rational,
    and as a float otherwise.
    """
    boolExact = isExactArray(vecCoeffs)
    numMass = np.sum(vecCoeffs)
    numSlope = np.sum(getDerivativeCoeffs(vecCoeffs))
    if vecCoeffs[0] == 0:
        return toNumber(0, boolExact)
    if boolExact:
        if numMass == 1 and numSlope <= 1:
            return Fraction(1)
    elif abs(numMass - 1) <= DBL_ROOT_TOL and numSlope <= 1 + DBL_ROOT_TOL:
        return 1.0

    vecFloat = np.asarray(vecCoeffs, dtype=np.float64)

    def fDiff(dblR):
        return np.polynomial.polynomial.polyval(dblR, vecFloat) - dblR

    # monotone lower bound
    dblLow = 0.0
    for _ in range(intIterNum):
        dblNext = float(np.polynomial.polynomial.polyval(dblLow, vecFloat))
        if dblNext <= dblLow:
            break
        dblLow = dblNext

    # upper bracket between the root and 1
    if numMass < 1 and fDiff(1.0) < 0:
        dblHigh = 1.0
    else:
        dblDelta = (1.0 - dblLow) / 2
        dblHigh = 1.0 - dblDelta
        intHalvings = 0
        while fDiff(dblHigh) >= 0 and intHalvings < 60:
            dblDelta /= 2
            dblHigh = 1.0 - dblDelta
            intHalvings += 1

    if fDiff(dblLow) <= 0 or fDiff(dblHigh) >= 0:
        dblRoot = dblLow
    else:
        dblRoot = optimize.brentq(fDiff, dblLow, dblHigh, xtol=1e-16, rtol=4 * np.finfo(float).eps, maxiter=500)

    if abs(fDiff(dblRoot)) > DBL_ROOT_TOL:
        logging.warning("getSmallestFixedPoint: residual %.3g exceeds tolerance" % abs(fDiff(dblRoot)))

    if boolExact:
        numRoot = getRationalRoot(dblRoot, vecCoeffs)
        if numRoot is not None:
            return numRoot
    return float(dblRoot)


# %% distances


def getTvd(dP, dQ):
    """
    Total variation distance between two dict-based discrete distributions

    Missing keys count as zero mass; the result is exact for Fraction values.
    """
    setKeys = set(dP.keys()) | set(dQ.keys())
    numSum = 0
    for objKey in setKeys:
        numSum += abs(dP.get(objKey, 0) - dQ.get(objKey, 0))
    return numSum / 2

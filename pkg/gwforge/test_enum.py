"""test_enum Checks the exact laws against closed forms and against each other

"""
import math
import unittest
from fractions import Fraction
import numpy as np

from gwforge.dependencies import getConvolutionPower
from gwforge.offspring_dependencies import parse_distribution, getOffspringDistribution, getGeometric
from gwforge.tree_dependencies import getFunctional, getTreesUpTo, getLeaves, getGraftThreshold, restrict
from gwforge.enum_dependencies import (enumerate_law, restriction_law, kesten_restriction_law, functional_law,
                                       dwass_check, getWindowProb, conditioned_law, conditioned_restriction_law,
                                       graft_set_prob, graft_set_conditioned_prob, eq_tmp_ratio, tv_distance,
                                       strong_ratio_table, conjugate_law_check, kesten_moment_check)
from gwforge.errors import WindowUnreachable, PeriodicDistribution, NotCritical, PropertyMismatch


class TestTreeLaws(unittest.TestCase):
    def test_enumerate(self):
        print('\nenumerate, expected to take about 0 s', end='')
        dLaw = enumerate_law(parse_distribution('critical-binary'), 7)
        self.assertEqual(len(dLaw['dLaw']), 1 + 1 + 2 + 5)
        self.assertEqual(dLaw['dLaw'][(0,)], Fraction(1, 2))
        self.assertEqual(dLaw['dLaw'][(2, 0, 2, 0, 0)], Fraction(1, 32))
        self.assertEqual(dLaw['numMass'], Fraction(93, 128))
        self.assertEqual(dLaw['numComplement'], Fraction(35, 128))

    def test_restriction_laws(self):
        print('\nrestriction_laws, expected to take about 1 s', end='')
        for strPreset in ('critical-binary', 'sub-binary', 'critical-aperiodic'):
            dDist = parse_distribution(strPreset)
            for intH in range(4):
                self.assertEqual(restriction_law(dDist, intH)['numMass'], 1)
                self.assertEqual(kesten_restriction_law(dDist, intH)['numMass'], 1)
        self.assertEqual(kesten_restriction_law(parse_distribution('critical-binary'), 1)['dLaw'], {(2, 0, 0): 1})
        dKesten = kesten_restriction_law(parse_distribution('critical-binary'), 2)['dLaw']
        self.assertEqual(dKesten, {(2, 2, 0, 0, 0): Fraction(1, 4), (2, 0, 2, 0, 0): Fraction(1, 4),
                                   (2, 2, 0, 0, 2, 0, 0): Fraction(1, 2)})

    def test_conjugate_law(self):
        print('\nconjugate_law, expected to take about 1 s', end='')
        numMax, dResiduals = conjugate_law_check(parse_distribution('super-binary'), 9)
        self.assertEqual(numMax, 0)
        self.assertTrue(len(dResiduals) > 0)

    def test_kesten_moments(self):
        print('\nkesten_moments, expected to take about 1 s', end='')
        numLhs, numRhs = kesten_moment_check(parse_distribution('critical-binary'), 3)
        self.assertEqual(numLhs, 4)
        self.assertEqual(numRhs, 4)
        numLhs, numRhs = kesten_moment_check(parse_distribution('sub-binary'), 2)
        self.assertEqual(numLhs, Fraction(14, 5))
        self.assertEqual(numRhs, Fraction(14, 5))
        self.assertEqual(*kesten_moment_check(parse_distribution('critical-aperiodic'), 3))


class TestFunctionalLaws(unittest.TestCase):
    def test_dwass(self):
        print('\ndwass, expected to take about 2 s', end='')
        cellDists = [parse_distribution(s) for s in ('critical-binary', 'sub-binary', 'super-binary',
                                                     'critical-aperiodic')]
        cellDists.append(getOffspringDistribution({0: Fraction(1, 3), 1: Fraction(1, 3), 3: Fraction(1, 3)}))
        for dDist in cellDists:
            for intN in range(1, 16):
                numLhs, numRhs = dwass_check(dDist, intN)
                self.assertEqual(numLhs, numRhs)

    def test_catalan(self):
        print('\ncatalan, expected to take about 0 s', end='')
        dSize = functional_law(parse_distribution('critical-binary'), getFunctional('size'), 15)['dPmf']
        for intK in range(8):
            intCatalan = math.comb(2 * intK, intK) // (intK + 1)
            self.assertEqual(dSize[2 * intK + 1], Fraction(intCatalan, 2 ** (2 * intK + 1)))
        self.assertNotIn(4, dSize)

    def test_height_and_maxdeg(self):
        print('\nheight_and_maxdeg, expected to take about 0 s', end='')
        dHeight = functional_law(parse_distribution('critical-binary'), getFunctional('height'), 3)['dPmf']
        self.assertEqual(dHeight[0], Fraction(1, 2))
        self.assertEqual(dHeight[1], Fraction(1, 8))
        self.assertEqual(dHeight[2], Fraction(89, 128) - Fraction(5, 8))
        dMax = functional_law(parse_distribution('critical-aperiodic'), getFunctional('maxdeg'), 2)['dPmf']
        self.assertEqual(dMax[0], Fraction(1, 4))
        self.assertEqual(dMax[1], Fraction(1, 4))
        self.assertEqual(dMax[2], Fraction(1, 2))

    def test_enumeration_agrees(self):
        print('\nenumeration_agrees, expected to take about 1 s', end='')
        dDist = parse_distribution('critical-aperiodic')
        for strName, setA in (('size', None), ('leaves', {0}), ('leaves', {0, 2})):
            dFunctional = getFunctional(strName, setA)
            dRec = functional_law(dDist, dFunctional, 6)['dPmf']
            dEnum = functional_law(dDist, dFunctional, 6, boolEnumerate=True)['dPmf']
            if strName == 'size':
                self.assertEqual(dRec, dEnum)
            else:
                # enumeration sees only trees up to 6 nodes
                for intA, numP in dEnum.items():
                    self.assertTrue(numP <= dRec[intA])
        dMaxgen = functional_law(dDist, getFunctional('maxgen'), 6)
        self.assertEqual(dMaxgen['numMass'], enumerate_law(dDist, 6)['numMass'])

    def test_convolution_power(self):
        print('\nconvolution_power, expected to take about 0 s', end='')
        vecPmf = parse_distribution('critical-binary')['vecPmf']
        for intN in range(8):
            vecPow = getConvolutionPower(vecPmf, intN)
            self.assertEqual(len(vecPow), 2 * intN + 1)
            for intJ in range(intN + 1):
                self.assertEqual(vecPow[2 * intJ], Fraction(math.comb(intN, intJ), 2 ** intN))
                if intJ < intN:
                    self.assertEqual(vecPow[2 * intJ + 1], 0)
        vecPow = getConvolutionPower(vecPmf, 13)
        self.assertEqual(list(getConvolutionPower(vecPmf, 13, intMaxLen=6)), list(vecPow[:6]))
        vecPmf = np.asarray(parse_distribution('critical-aperiodic')['vecPmf'], dtype=np.float64)
        vecNaive = np.array([1.0])
        for _ in range(11):
            vecNaive = np.convolve(vecNaive, vecPmf)
        self.assertTrue(np.allclose(getConvolutionPower(vecPmf, 11), vecNaive, rtol=0, atol=1e-15))


class TestConditionedLaws(unittest.TestCase):
    def test_unreachable(self):
        print('\nunreachable, expected to take about 0 s', end='')
        with self.assertRaises(WindowUnreachable):
            conditioned_law(parse_distribution('critical-binary'), getFunctional('size'), (4, 1))
        with self.assertRaises(WindowUnreachable):
            conditioned_restriction_law(parse_distribution('critical-binary'), getFunctional('size'), (4, 1), 2)

    def test_uniform_size(self):
        print('\nuniform_size, expected to take about 0 s', end='')
        dLaw = conditioned_law(parse_distribution('critical-binary'), getFunctional('size'), (7, 1))
        self.assertEqual(len(dLaw['dLaw']), 5)
        self.assertTrue(all(v == Fraction(1, 5) for v in dLaw['dLaw'].values()))
        self.assertEqual(dLaw['numComplement'], 0)

    def test_restriction_matches_enumeration(self):
        print('\nrestriction_matches_enumeration, expected to take about 1 s', end='')
        cellCases = [('critical-binary', getFunctional('size'), (7, 1)),
                     ('critical-aperiodic', getFunctional('size'), (5, 2)),
                     ('critical-aperiodic', getFunctional('leaves', {0}), (3, 1)),
                     ('sub-binary', getFunctional('leaves', {0}), (4, 1))]
        for strPreset, dFunctional, tplWindow in cellCases:
            dDist = parse_distribution(strPreset)
            for intH in (1, 2):
                dExact = conditioned_restriction_law(dDist, dFunctional, tplWindow, intH)
                dFull = conditioned_law(dDist, dFunctional, tplWindow, intCap=9)
                dRestricted = dict()
                for tplT, numP in dFull['dLaw'].items():
                    tplS = restrict(tplT, intH)
                    dRestricted[tplS] = dRestricted.get(tplS, 0) + numP
                if dFull['numComplement'] == 0:
                    self.assertEqual(dExact['dLaw'], dRestricted)
                else:
                    for tplS, numP in dRestricted.items():
                        self.assertTrue(numP <= dExact['dLaw'][tplS])

    def test_tilt_invariance(self):
        print('\ntilt_invariance, expected to take about 1 s', end='')
        dLeaves = getFunctional('leaves', {0})
        for intN in range(1, 6):
            dSub = conditioned_law(parse_distribution('sub-binary'), dLeaves, (intN, 1))
            dCrit = conditioned_law(parse_distribution('critical-binary'), dLeaves, (intN, 1))
            self.assertEqual(dSub['dLaw'], dCrit['dLaw'])

    def test_tail_window(self):
        print('\ntail_window, expected to take about 0 s', end='')
        dDist = parse_distribution('critical-binary')
        dHeight = getFunctional('height')
        self.assertEqual(getWindowProb(dDist, dHeight, (3, None)), Fraction(39, 128))
        dLaw = conditioned_restriction_law(dDist, dHeight, (3, None), 1)
        self.assertEqual(dLaw['dLaw'], {(2, 0, 0): 1})
        self.assertEqual(dLaw['dInterval'][(2, 0, 0)], (1, 1))

    def test_maxgen_interval(self):
        print('\nmaxgen_interval, expected to take about 1 s', end='')
        dLaw = conditioned_restriction_law(parse_distribution('critical-aperiodic'), getFunctional('maxgen'),
                                           (2, 1), 1, intCap=7)
        self.assertEqual(sum(dLaw['dLaw'].values()), 1)
        for tplS, (numLow, numHigh) in dLaw['dInterval'].items():
            self.assertTrue(numLow <= dLaw['dLaw'][tplS] <= numHigh)


class TestGraftIdentity(unittest.TestCase):
    def test_graft_set_prob(self):
        print('\ngraft_set_prob, expected to take about 0 s', end='')
        dDist = parse_distribution('critical-binary')
        self.assertEqual(graft_set_prob(dDist, (2, 0, 0), (1,)), Fraction(1, 4))
        self.assertEqual(graft_set_prob(dDist, (2, 0, 0), (1,), boolKesten=True), Fraction(1, 4))
        dSuper = parse_distribution('super-binary')
        self.assertEqual(graft_set_prob(dSuper, (2, 0, 0), (2,), boolKesten=True), Fraction(1, 8))
        dSub = parse_distribution('sub-binary')
        self.assertEqual(graft_set_prob(dSub, (2, 0, 0), (1,)), Fraction(6, 25))
        self.assertEqual(graft_set_prob(dSub, (2, 0, 0), (1,), boolKesten=True), Fraction(3, 10))

    def test_conditioned_prob_brute_force(self):
        print('\nconditioned_prob_brute_force, expected to take about 3 s', end='')
        dDist = parse_distribution('critical-binary')
        cellCases = [(getFunctional('size'), (5, 2), None),
                     (getFunctional('height'), (2, 1), 7),
                     (getFunctional('height'), (3, 1), 15),
                     (getFunctional('leaves', {0}), (3, 1), None),
                     (getFunctional('leaves', {0}), (4, 1), None)]
        for dFunctional, tplWindow, intCap in cellCases:
            self.assertEqual(conditioned_law(dDist, dFunctional, tplWindow, intCap)['numComplement'], 0)
            for tplT in getTreesUpTo(3, {0, 2}):
                for tplX in getLeaves(tplT):
                    numExact = graft_set_conditioned_prob(dDist, dFunctional, tplT, tplX, tplWindow)
                    numBrute = graft_set_conditioned_prob(dDist, dFunctional, tplT, tplX, tplWindow,
                                                          boolBruteForce=True, intCap=intCap)
                    self.assertEqual(numExact, numBrute)

    def test_identity_from_enumeration(self):
        print('\nidentity_from_enumeration, expected to take about 2 s', end='')
        dDist = parse_distribution('critical-binary')
        dHeight = getFunctional('height')
        dLaws = {intN: conditioned_law(dDist, dHeight, (intN, 1), 15) for intN in (1, 2, 3)}
        intChecked = 0
        for tplT in getTreesUpTo(3, {0, 2}):
            for tplX in getLeaves(tplT):
                for intN in range(max(getGraftThreshold(dHeight, tplT, tplX), 1), 4):
                    numBrute = graft_set_prob(dLaws[intN], tplT, tplX)
                    numLhs, numRhs = eq_tmp_ratio(dDist, dHeight, tplT, tplX, intN, 1, intCap=15)
                    self.assertEqual(numLhs, numBrute)
                    self.assertEqual(numLhs, numRhs)
                    self.assertEqual(eq_tmp_ratio(dDist, dHeight, tplT, tplX, intN, 1, dCondLaw=dLaws[intN]),
                                     (numLhs, numRhs))
                    intChecked += 1
        self.assertTrue(intChecked >= 6)
        # lhs is read off the law it is given
        dSize = getFunctional('size')
        numLhs, numRhs = eq_tmp_ratio(dDist, dSize, (2, 0, 0), (1,), 5, 1)
        self.assertEqual(numLhs, Fraction(1, 2))
        self.assertEqual(numRhs, Fraction(1, 2))
        numLhs, numRhs = eq_tmp_ratio(dDist, dSize, (2, 0, 0), (1,), 5, 1,
                                      dCondLaw=conditioned_law(dDist, dSize, (7, 1)))
        self.assertEqual(numLhs, Fraction(2, 5))
        self.assertEqual(numRhs, Fraction(1, 2))

    def test_identity_exact(self):
        print('\nidentity_exact, expected to take about 3 s', end='')
        cellCases = [('critical-binary', getFunctional('size'), 2),
                     ('critical-binary', getFunctional('height'), None),
                     ('critical-binary', getFunctional('height'), 1),
                     ('critical-binary', getFunctional('leaves', {0}), 1),
                     ('critical-aperiodic', getFunctional('size'), 1),
                     ('critical-aperiodic', getFunctional('size'), None),
                     ('critical-aperiodic', getFunctional('height'), None),
                     ('critical-aperiodic', getFunctional('leaves', {0}), 1)]
        intChecked = 0
        for strPreset, dFunctional, intN1 in cellCases:
            dDist = parse_distribution(strPreset)
            for tplT in getTreesUpTo(3):
                for tplX in getLeaves(tplT):
                    if graft_set_prob(dDist, tplT, tplX) == 0:
                        continue
                    intN0 = getGraftThreshold(dFunctional, tplT, tplX)
                    for intN in range(max(intN0, 3), max(intN0, 3) + 3):
                        numLhs, numRhs = eq_tmp_ratio(dDist, dFunctional, tplT, tplX, intN, intN1)
                        self.assertEqual(numLhs, numRhs)
                        intChecked += 1
        self.assertTrue(intChecked >= 20)

    def test_identity_maxdeg(self):
        print('\nidentity_maxdeg, expected to take about 1 s', end='')
        dDist = getGeometric(0.5)
        dMaxdeg = getFunctional('maxdeg')
        for tplT in getTreesUpTo(3):
            for tplX in getLeaves(tplT):
                intN0 = getGraftThreshold(dMaxdeg, tplT, tplX)
                for intN in range(intN0, intN0 + 2):
                    numLhs, numRhs = eq_tmp_ratio(dDist, dMaxdeg, tplT, tplX, intN)
                    self.assertTrue(abs(numLhs - numRhs) < 1e-12)

    def test_identity_needs_additivity(self):
        print('\nidentity_needs_additivity, expected to take about 0 s', end='')
        with self.assertRaises(PropertyMismatch):
            eq_tmp_ratio(parse_distribution('critical-binary'), getFunctional('maxgen'), (0,), (), 3)
        with self.assertRaises(ValueError):
            eq_tmp_ratio(parse_distribution('critical-binary'), getFunctional('height'), (2, 0, 0), (1,), 1)


class TestDistances(unittest.TestCase):
    def test_tv(self):
        print('\ntv, expected to take about 0 s', end='')
        dDist = parse_distribution('critical-binary')
        dKesten = kesten_restriction_law(dDist, 2)
        numTv, dTV = tv_distance(dKesten, dKesten)
        self.assertEqual(numTv, 0)
        dPartial = enumerate_law(dDist, 3)
        numTv, dTV = tv_distance(dPartial, {(0,): Fraction(1, 2), (2, 0, 0): Fraction(1, 2)})
        self.assertEqual(numTv, Fraction(3, 16))
        self.assertEqual(dTV['numLower'], Fraction(3, 8))
        self.assertEqual(dTV['numUpper'], Fraction(3, 8))

    def test_strong_ratio(self):
        print('\nstrong_ratio, expected to take about 1 s', end='')
        cellRows, dInfo = strong_ratio_table(parse_distribution('critical-aperiodic'), [10, 20], [0, 1])
        self.assertFalse(dInfo['boolPeriodic'])
        self.assertEqual([d['numRatio'] for d in cellRows], [1, Fraction(10, 11), 1, Fraction(20, 21)])

        cellRows, dInfo = strong_ratio_table(parse_distribution('critical-binary'), [10, 11], [1])
        self.assertEqual(dInfo['intPeriod'], 2)
        self.assertEqual([d['intOffset'] for d in cellRows], [0, 1])
        with self.assertRaises(PeriodicDistribution):
            strong_ratio_table(parse_distribution('critical-binary'), [10], [1], boolStrict=True)
        with self.assertRaises(NotCritical):
            strong_ratio_table(parse_distribution('sub-binary'), [10], [1])


if __name__ == '__main__':
    unittest.main()

"""test_main Checks the experiment drivers on cases with known answers

"""
import unittest
import numpy as np
from fractions import Fraction

from gwforge.offspring_dependencies import parse_distribution, getOffspringDistribution, getPowerLaw, getPmfDict
from gwforge.tree_dependencies import getFunctional, getFunctionalValue, restrict_star
from gwforge.enum_dependencies import conditioned_law
from gwforge.main import (getLimitTarget, convergence_experiment, ratio_table, kesten_stigum_mc, property_probe,
                          condensation_experiment)
from gwforge.errors import NotCritical, NotSuperCritical, DegenerateDistribution, NotNonGeneric


class TestRouting(unittest.TestCase):
    def test_targets(self):
        print('\nrouting, expected to take about 1 s', end='')
        dCrit = parse_distribution('critical-binary')
        dSub = parse_distribution('sub-binary')
        dTarget = getLimitTarget(dCrit, getFunctional('size'))
        self.assertEqual(dTarget['strTarget'], 'kesten')
        self.assertIs(dTarget['dTargetDist'], dCrit)
        self.assertEqual(getLimitTarget(dSub, getFunctional('height'))['strTarget'], 'kesten')

        dTarget = getLimitTarget(dSub, getFunctional('leaves', {0}))
        self.assertEqual(dTarget['strTarget'], 'kesten')
        self.assertEqual(getPmfDict(dTarget['dTargetDist']), {0: Fraction(1, 2), 2: Fraction(1, 2)})

        self.assertEqual(getLimitTarget(getPowerLaw(3, 0.5), getFunctional('size'))['strTarget'], 'condensation')
        dTarget = getLimitTarget(dSub, getFunctional('maxdeg'))
        self.assertEqual(dTarget['strTarget'], 'condensation')
        self.assertIs(dTarget['dTargetDist'], dSub)

        with self.assertRaises(NotCritical):
            getLimitTarget(dSub, getFunctional('maxgen'))
        with self.assertRaises(NotCritical):
            getLimitTarget(parse_distribution('super-binary'), getFunctional('size'))


class TestConvergence(unittest.TestCase):
    def test_height_tail(self):
        print('\nconvergence_height_tail, expected to take about 0 s', end='')
        cellWindows = [(n, None) for n in range(1, 5)]
        vecTv, dReport = convergence_experiment(parse_distribution('critical-binary'), getFunctional('height'),
                                                cellWindows, 1)
        self.assertEqual(dReport['strTarget'], 'kesten')
        self.assertTrue(np.all(vecTv == 0))
        for dRow in dReport['cellRows']:
            self.assertEqual(dRow['numTv'], 0)
            self.assertEqual(dRow['numResidual'], 0)
            self.assertIsNone(dRow['intSamples'])

    def test_size_windows(self):
        print('\nconvergence_size_windows, expected to take about 1 s', end='')
        vecTv, dReport = convergence_experiment(parse_distribution('critical-binary'), getFunctional('size'),
                                                [(5, 2), (9, 2), (13, 2)], 2)
        self.assertEqual([d['numTv'] for d in dReport['cellRows']],
                         [Fraction(1, 2), Fraction(3, 14), Fraction(3, 22)])
        self.assertTrue(vecTv[0] > vecTv[1] > vecTv[2])
        for dRow in dReport['cellRows']:
            self.assertEqual(dRow['numTvLower'], dRow['numTv'])
            self.assertEqual(dRow['numResidual'], 0)
        self.assertEqual(dReport['numRatioLimit'], 1)

    def test_tilted_leaves(self):
        print('\nconvergence_tilted_leaves, expected to take about 1 s', end='')
        _, dSub = convergence_experiment(parse_distribution('sub-binary'), getFunctional('leaves', {0}),
                                         [(3, 1), (5, 1)], 2)
        _, dCrit = convergence_experiment(parse_distribution('critical-binary'), getFunctional('size'),
                                          [(5, 1), (9, 1)], 2)
        self.assertEqual([d['numTv'] for d in dSub['cellRows']], [d['numTv'] for d in dCrit['cellRows']])
        self.assertTrue('generic' in dSub['strRouting'])
        self.assertEqual(dSub['dGenericity']['numThetaC'], Fraction(5, 4))

    def test_condensation_target(self):
        print('\nconvergence_condensation_target, expected to take about 3 s', end='')
        dDist = getPowerLaw(3, 0.5, dblTailTol=1e-6)
        dSize = getFunctional('size')
        # every r_1^inf restriction on either side is (1, 0)
        vecTv, dReport = convergence_experiment(dDist, dSize, [(3, 1), (4, 1)], 1, intReps=2000, intSeed=5)
        self.assertEqual(dReport['strTarget'], 'condensation')
        self.assertEqual(dReport['dGenericity']['strCase'], 'ii')
        self.assertEqual(list(dReport['dTargetLaw']['dLaw'].keys()), [(1, 0)])
        self.assertTrue(np.all(np.abs(vecTv) < 1e-12))

        vecTv, dReport = convergence_experiment(dDist, dSize, [(4, 1), (5, 1)], 2, intReps=2000, intSeed=5)
        dTargetLaw = dReport['dTargetLaw']['dLaw']
        self.assertAlmostEqual(sum(dTargetLaw.values()), 1.0, places=12)
        for dRow in dReport['cellRows']:
            dStarLaw = dict()
            for tplT, numP in conditioned_law(dDist, dSize, dRow['tplWindow'])['dLaw'].items():
                tplS = restrict_star(tplT, 2)
                dStarLaw[tplS] = dStarLaw.get(tplS, 0) + numP
            numTv = 0.5 * sum(abs(dStarLaw.get(s, 0) - dTargetLaw.get(s, 0)) for s in set(dStarLaw) | set(dTargetLaw))
            self.assertAlmostEqual(dRow['numTv'], numTv, places=12)
            self.assertTrue(dRow['numTvLower'] <= dRow['numTv'] <= dRow['numTvUpper'])
            self.assertIsNotNone(dRow['numResidual'])
            self.assertTrue(dRow['numResidual'] < 1e-9)

    def test_monte_carlo(self):
        print('\nconvergence_monte_carlo, expected to take about 2 s', end='')
        vecTv, dReport = convergence_experiment(parse_distribution('critical-binary'), getFunctional('size'),
                                                [(5, 2)], 2, strMode='mc', intReps=1000, intSeed=3)
        # both trees of size 5 carry Kesten mass 1/4, so any split gives 1/2
        self.assertAlmostEqual(vecTv[0], 0.5, places=12)
        dRow = dReport['cellRows'][0]
        self.assertEqual(dRow['intSamples'], 1000)
        self.assertTrue(dRow['numTvLower'] <= 0.5 <= dRow['numTvUpper'])
        self.assertIsNone(dRow['numResidual'])


class TestRatioTable(unittest.TestCase):
    def test_height_ratios(self):
        print('\nratio_height, expected to take about 0 s', end='')
        dCrit = getOffspringDistribution({0: 0.5, 2: 0.5})
        vecRatio, dReport = ratio_table(dCrit, getFunctional('height'), [100])
        self.assertEqual(dReport['strLimit'], 'm')
        self.assertTrue(abs(vecRatio[0] - 1) < 0.05)
        dSub = getOffspringDistribution({0: 0.6, 2: 0.4})
        vecRatio, _ = ratio_table(dSub, getFunctional('height'), [40])
        self.assertTrue(abs(vecRatio[0] - 0.8) < 1e-3)

    def test_size_ratios(self):
        print('\nratio_size, expected to take about 0 s', end='')
        vecN = [2 * k + 1 for k in range(6)]
        _, dReport = ratio_table(parse_distribution('critical-binary'), getFunctional('size'), vecN, intN1=1,
                                 intStep=2)
        self.assertEqual(dReport['numLimit'], 1)
        for intK, dRow in enumerate(dReport['cellRows']):
            self.assertEqual(dRow['numRatio'], Fraction(2 * intK + 1, 2 * intK + 4))

    def test_zero_window(self):
        print('\nratio_zero_window, expected to take about 0 s', end='')
        vecRatio, dReport = ratio_table(parse_distribution('critical-binary'), getFunctional('size'), [4], intN1=1)
        self.assertTrue(np.isnan(vecRatio[0]))
        self.assertTrue(dReport['cellRows'][0]['boolZeroWindow'])
        self.assertIsNone(dReport['cellRows'][0]['numRatio'])


class TestPropertyProbe(unittest.TestCase):
    def test_size(self):
        print('\nprobe_size, expected to take about 3 s', end='')
        strClass, dReport = property_probe(getFunctional('size'))
        self.assertEqual(strClass, 'Additivity')
        for (tplT, tplX), dPair in dReport['dPairs'].items():
            self.assertEqual(dPair['intD'], len(tplT) - 1)

    def test_height(self):
        print('\nprobe_height, expected to take about 3 s', end='')
        strClass, dReport = property_probe(getFunctional('height'))
        self.assertEqual(strClass, 'Additivity')
        for (tplT, tplX), dPair in dReport['dPairs'].items():
            self.assertEqual(dPair['intD'], len(tplX))

    def test_leaves(self):
        print('\nprobe_leaves, expected to take about 3 s', end='')
        dLeaves = getFunctional('leaves', {0})
        strClass, dReport = property_probe(dLeaves)
        self.assertEqual(strClass, 'Additivity')
        for (tplT, tplX), dPair in dReport['dPairs'].items():
            self.assertEqual(dPair['intD'], getFunctionalValue(tplT, dLeaves) - 1)

    def test_maxdeg_and_maxgen(self):
        print('\nprobe_maxdeg_and_maxgen, expected to take about 4 s', end='')
        strClass, dReport = property_probe(getFunctional('maxdeg'))
        self.assertEqual(strClass, 'Identity')
        self.assertEqual(dReport['dClassCounts']['Identity'], dReport['intPairs'])
        strClass, dReport = property_probe(getFunctional('maxgen'), intMaxSize=5)
        self.assertEqual(strClass, 'Monotonicity')
        self.assertEqual(dReport['dClassCounts']['None'], 0)


class TestKestenStigum(unittest.TestCase):
    def test_super_binary(self):
        print('\nkesten_stigum, expected to take about 5 s', end='')
        dDist = parse_distribution('super-binary')
        dblMeanW, dReport = kesten_stigum_mc(dDist, 10, intReps=100000, intSeed=1)
        self.assertEqual(len(dReport['vecW']), 100000)
        self.assertTrue(abs(dblMeanW - 1) <= 4 * dReport['dblSem'])
        dblSigma = np.sqrt(dReport['dblExtinctByN'] * (1 - dReport['dblExtinctByN']) / 100000)
        self.assertTrue(abs(dReport['dblFracExtinct'] - dReport['dblExtinctByN']) <= 4 * dblSigma)
        self.assertEqual(dReport['numQ'], Fraction(1, 3))
        self.assertTrue(dReport['boolZetaLogZetaFinite'])
        self.assertTrue(abs(dReport['dblExtinctByN'] - 1 / 3) < 0.01)
        self.assertTrue(abs(dReport['dblFracExtinct'] - 1 / 3) < 0.01)

    def test_threads(self):
        print('\nkesten_stigum_threads, expected to take about 1 s', end='')
        dDist = parse_distribution('super-binary')
        _, dReport1 = kesten_stigum_mc(dDist, 6, intReps=5001, intSeed=4, intThreads=2)
        _, dReport2 = kesten_stigum_mc(dDist, 6, intReps=5001, intSeed=4, intThreads=2)
        self.assertEqual(len(dReport1['vecW']), 5001)
        self.assertTrue(np.array_equal(dReport1['vecW'], dReport2['vecW']))

    def test_errors(self):
        print('\nkesten_stigum_errors, expected to take about 0 s', end='')
        with self.assertRaises(NotSuperCritical):
            kesten_stigum_mc(getOffspringDistribution({0: 1}), 5, intReps=10)
        with self.assertRaises(NotSuperCritical):
            kesten_stigum_mc(parse_distribution('critical-binary'), 5, intReps=10)
        with self.assertRaises(DegenerateDistribution):
            kesten_stigum_mc(getOffspringDistribution({2: 1}), 5, intReps=10)


class TestCondensation(unittest.TestCase):
    def test_sub_binary(self):
        print('\ncondensation_experiment, expected to take about 20 s', end='')
        dblTv, dReport = condensation_experiment(parse_distribution('sub-binary'), intReps=100000, intSeed=2)
        self.assertTrue(abs(dReport['dblFracDepth0'] - 0.2) <= 4 * np.sqrt(0.2 * 0.8 / 100000))
        self.assertEqual(dReport['dblFracOneInfinite'], 1.0)
        self.assertEqual(list(dReport['vecInfiniteCounts']), [0, 100000, 0])
        self.assertTrue(dblTv < 0.01)
        self.assertAlmostEqual(dReport['dblAtom'], 0.2)
        self.assertEqual(int(np.sum(dReport['vecDepthCounts'])), 100000)
        self.assertEqual(len(dReport['vecDepthCounts']), 10)

    def test_non_generic_window(self):
        print('\ncondensation_non_generic_window, expected to take about 3 s', end='')
        dDist = getPowerLaw(3, 0.5, dblTailTol=1e-6)
        dblTv, dReport = condensation_experiment(dDist, intReps=2000, setA={0}, intH=1, tplWindow=(3, 1), intCap=7,
                                                 intSeed=3)
        self.assertEqual(dReport['dGenericity']['strClass'], 'NonGeneric')
        self.assertEqual(list(dReport['vecInfiniteCounts']), [0, 2000, 0])
        self.assertEqual(dReport['dEmpiricalLaw'], {(1, 0): 1.0})
        # unary chains push trees with three leaves past 7 nodes
        self.assertTrue(dReport['numComplementLaw'] > 0)
        self.assertAlmostEqual(dReport['numTvLaw'], 0.5 * dReport['numComplementLaw'], places=12)
        self.assertTrue(0 <= dblTv < 1)

    def test_generic_is_refused(self):
        print('\ncondensation_generic, expected to take about 0 s', end='')
        with self.assertRaises(NotNonGeneric):
            condensation_experiment(parse_distribution('sub-binary'), intReps=10, setA={0})


if __name__ == '__main__':
    unittest.main()

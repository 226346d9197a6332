"""test_offspring Checks extinction, the derived laws and the tilted family

"""
import unittest
import numpy as np
from fractions import Fraction

from gwforge.offspring_dependencies import (parse_distribution, getOffspringDistribution, getGeometric, getPowerLaw,
                                            getCriticality, gen_fn, extinction_probability, conjugate, size_biased,
                                            survivor_joint, backbone, reconstruct_gen_fn, condensation_offspring,
                                            leaf_offspring, tilt, tilt_mean, tilt_interval, genericity, getPmfDict,
                                            distribution_to_json)
from gwforge.tree_dependencies import getFunctional
from gwforge.enum_dependencies import functional_law
from gwforge.errors import (DegenerateDistribution, OutOfDomain, ThetaOutsideInterval, EmptyIntersection,
                            NotSuperCritical, NotSubCritical, ZeroOrInfiniteMean)


class TestExtinction(unittest.TestCase):
    def test_super_binary(self):
        print('\nsuper_binary, expected to take about 0 s', end='')
        dDist = parse_distribution('super-binary')
        numQ = extinction_probability(dDist)
        self.assertEqual(numQ, Fraction(1, 3))
        self.assertEqual(dDist['numMean'], Fraction(3, 2))
        self.assertEqual(getCriticality(dDist), 'super-critical')

        dFloat = getOffspringDistribution({0: 0.25, 2: 0.75})
        self.assertFalse(dFloat['boolExact'])
        self.assertTrue(abs(extinction_probability(dFloat) - 1 / 3) < 1e-12)

    def test_not_super_critical(self):
        print('\nnot_super_critical, expected to take about 0 s', end='')
        self.assertEqual(extinction_probability(parse_distribution('critical-binary')), 1)
        self.assertEqual(extinction_probability(parse_distribution('sub-binary')), 1)
        self.assertEqual(extinction_probability(parse_distribution('critical-aperiodic')), 1)

    def test_degenerate(self):
        print('\ndegenerate, expected to take about 0 s', end='')
        for dPmf, numQ in (({0: 1}, 1), ({2: 1}, 0), ({0: Fraction(1, 2), 1: Fraction(1, 2)}, 1)):
            with self.assertRaises(DegenerateDistribution) as objCtx:
                extinction_probability(getOffspringDistribution(dPmf))
            self.assertEqual(objCtx.exception.numQ, numQ)


class TestGeneratingFunction(unittest.TestCase):
    def test_values(self):
        print('\ngen_fn_values, expected to take about 0 s', end='')
        dDist = parse_distribution('super-binary')
        self.assertEqual(gen_fn(dDist, Fraction(1, 2)), (Fraction(7, 16), Fraction(3, 4)))
        dGeom = getGeometric(0.5)
        self.assertEqual(getCriticality(dGeom), 'critical')
        numG, numDeriv = gen_fn(dGeom, 1.5)
        self.assertTrue(abs(numG - 2.0) < 1e-12)
        self.assertTrue(abs(numDeriv - 4.0) < 1e-12)

    def test_domain(self):
        print('\ngen_fn_domain, expected to take about 0 s', end='')
        dGeom = getGeometric(0.5)
        with self.assertRaises(OutOfDomain):
            gen_fn(dGeom, 3.0)
        with self.assertRaises(OutOfDomain):
            gen_fn(dGeom, -0.1)

    def test_parse(self):
        print('\nparse, expected to take about 0 s', end='')
        dDist = parse_distribution('{"pmf": {"0": "1/4", "1": "1/2", "2": "1/4"}}')
        self.assertEqual(getCriticality(dDist), 'critical')
        self.assertEqual(dDist['intPeriod'], 1)
        self.assertEqual(parse_distribution('critical-binary')['intPeriod'], 2)
        dBack = parse_distribution(distribution_to_json(dDist))
        self.assertEqual(getPmfDict(dBack), getPmfDict(dDist))
        self.assertEqual(parse_distribution('poisson:1')['strKind'], 'poisson')
        with self.assertRaises(ValueError):
            parse_distribution('not-a-law')
        with self.assertRaises(AssertionError):
            parse_distribution('{"pmf": {"0": "1/2", "2": "1/4"}}')


class TestDerivedLaws(unittest.TestCase):
    def test_conjugate(self):
        print('\nconjugate, expected to take about 0 s', end='')
        dDist = parse_distribution('super-binary')
        self.assertEqual(getPmfDict(conjugate(dDist)), {0: Fraction(3, 4), 2: Fraction(1, 4)})
        with self.assertRaises(NotSuperCritical):
            conjugate(parse_distribution('critical-binary'))

    def test_size_biased(self):
        print('\nsize_biased, expected to take about 0 s', end='')
        self.assertEqual(getPmfDict(size_biased(parse_distribution('super-binary'))), {2: 1})
        self.assertEqual(getPmfDict(size_biased(parse_distribution('critical-aperiodic'))),
                         {1: Fraction(1, 2), 2: Fraction(1, 2)})
        with self.assertRaises(ZeroOrInfiniteMean):
            size_biased(getOffspringDistribution({0: 1}))

    def test_survivor_and_backbone(self):
        print('\nsurvivor_and_backbone, expected to take about 0 s', end='')
        dDist = parse_distribution('super-binary')
        self.assertEqual(survivor_joint(dDist), {(1, 1): Fraction(1, 2), (2, 0): Fraction(1, 2)})
        self.assertEqual(getPmfDict(backbone(dDist)), {1: Fraction(1, 2), 2: Fraction(1, 2)})

    def test_reconstruct(self):
        print('\nreconstruct, expected to take about 0 s', end='')
        dDist = parse_distribution('super-binary')
        dTilde = conjugate(dDist)
        dHat = backbone(dDist)
        for dblR in np.linspace(0, 1, 100):
            dblR = float(dblR)
            self.assertTrue(abs(reconstruct_gen_fn(dDist, dblR, dTilde, dHat) - float(gen_fn(dDist, dblR)[0])) < 1e-12)

    def test_condensation_offspring(self):
        print('\ncondensation_offspring, expected to take about 0 s', end='')
        dExtOff = condensation_offspring(parse_distribution('sub-binary'))
        self.assertEqual(dExtOff['numAtomInf'], Fraction(1, 5))
        self.assertEqual(list(dExtOff['vecPmf']), [0, 0, Fraction(4, 5)])
        with self.assertRaises(NotSubCritical):
            condensation_offspring(parse_distribution('critical-binary'))

    def test_leaf_offspring(self):
        print('\nleaf_offspring, expected to take about 1 s', end='')
        dFunctional = getFunctional('leaves', {0})
        dSize = getFunctional('size')
        for strPreset in ('critical-binary', 'critical-aperiodic'):
            dDist = parse_distribution(strPreset)
            dLeaf = leaf_offspring(dDist)
            self.assertEqual(dLeaf['numMean'], 1)
            self.assertTrue(dLeaf['dblTailBound'] < 1e-13)
            # L_0(tau) has the size law of the leaf tree
            dLeaves = functional_law(dDist, dFunctional, 7)['dPmf']
            dLeafSizes = functional_law(dLeaf, dSize, 7)['dPmf']
            for intN in range(1, 8):
                self.assertEqual(dLeaves.get(intN, 0), dLeafSizes.get(intN, 0))
        with self.assertRaises(DegenerateDistribution):
            leaf_offspring(getOffspringDistribution({0: 1}))


class TestTilt(unittest.TestCase):
    def test_tilt_to_critical(self):
        print('\ntilt_to_critical, expected to take about 0 s', end='')
        dDist = parse_distribution('sub-binary')
        dTilt = tilt(dDist, {0}, Fraction(5, 4))
        self.assertEqual(getPmfDict(dTilt), {0: Fraction(1, 2), 2: Fraction(1, 2)})
        self.assertEqual(dTilt['numMean'], 1)
        # theta = 1 gives p back
        self.assertEqual(getPmfDict(tilt(dDist, {0}, Fraction(1))), getPmfDict(dDist))

    def test_tilt_errors(self):
        print('\ntilt_errors, expected to take about 0 s', end='')
        dDist = parse_distribution('sub-binary')
        with self.assertRaises(ThetaOutsideInterval):
            tilt(dDist, {0}, Fraction(3))
        with self.assertRaises(ThetaOutsideInterval):
            tilt(dDist, {0}, Fraction(-1))
        with self.assertRaises(EmptyIntersection):
            tilt(dDist, {1}, Fraction(1))
        self.assertTrue(abs(tilt_interval(dDist, {0}) - 2.5) < 1e-9)

    def test_genericity_generic(self):
        print('\ngenericity_generic, expected to take about 1 s', end='')
        dDist = parse_distribution('sub-binary')
        dGen = genericity(dDist, {0})
        self.assertEqual(dGen['strClass'], 'Generic')
        self.assertEqual(dGen['strCase'], 'i')
        self.assertEqual(dGen['numThetaC'], Fraction(5, 4))
        self.assertEqual(getPmfDict(dGen['dDistStar']), {0: Fraction(1, 2), 2: Fraction(1, 2)})
        for setA in (None, {0, 2}):
            dGen = genericity(dDist, setA)
            self.assertEqual(dGen['strClass'], 'Generic')
            self.assertTrue(abs(float(dGen['numMeanStar']) - 1) < 1e-9)
        dGen = genericity(parse_distribution('poisson:0.5'), {0})
        self.assertEqual(dGen['strClass'], 'Generic')
        self.assertTrue(abs(float(dGen['numMeanStar']) - 1) < 1e-9)

    def test_genericity_non_generic(self):
        print('\ngenericity_non_generic, expected to take about 3 s', end='')
        dDist = getPowerLaw(3, 0.5)
        self.assertEqual(getCriticality(dDist), 'sub-critical')
        for setA in ({0}, None, {0, 1}):
            dGen = genericity(dDist, setA)
            self.assertEqual(dGen['strClass'], 'NonGeneric')
            self.assertEqual(dGen['strCase'], 'ii')
            self.assertEqual(dGen['numThetaStar'], 1.0)
            self.assertTrue(dGen['numMeanStar'] < 1)

    def test_power_law_at_radius(self):
        print('\npower_law_at_radius, expected to take about 0 s', end='')
        dDist = getPowerLaw(3.0, 0.5, 2.0)
        self.assertEqual(dDist['dblRadius'], 2.0)
        dblG, dblDeriv = gen_fn(dDist, 2.0)
        self.assertAlmostEqual(dblG, dDist['dblGenAtRadius'], places=8)
        self.assertAlmostEqual(dblDeriv, dDist['dblDerivAtRadius'], places=8)
        self.assertAlmostEqual(dblG, 1.6187894, places=6)
        self.assertAlmostEqual(dblDeriv, 0.7654941, places=6)
        # inside the disc, against a direct sum well past the truncation
        vecK = np.arange(1, 401, dtype=np.float64)
        dblC = 0.5 / np.sum(vecK ** -3.0 * 2.0 ** -vecK)
        dblG, dblDeriv = gen_fn(dDist, 1.5)
        self.assertAlmostEqual(dblG, 0.5 + dblC * np.sum(vecK ** -3.0 * 0.75 ** vecK), places=12)
        self.assertAlmostEqual(dblDeriv, dblC * np.sum(vecK ** -2.0 * 0.75 ** vecK) / 1.5, places=12)

    def test_genericity_radius_case(self):
        print('\ngenericity_radius_case, expected to take about 1 s', end='')
        dDist = getPowerLaw(3.0, 0.5, 2.0)
        dblG, dblDeriv = gen_fn(dDist, 2.0)
        dGen = genericity(dDist, None)
        self.assertEqual(dGen['strClass'], 'NonGeneric')
        self.assertEqual(dGen['strCase'], 'iii')
        self.assertEqual(dGen['numThetaStar'], 2.0)
        self.assertAlmostEqual(dGen['numMeanStar'], 2.0 * dblDeriv / dblG, places=8)
        self.assertAlmostEqual(tilt_mean(dDist, None, 2.0), 2.0 * dblDeriv / dblG, places=8)
        # conditioning on degree 5 pushes E[Y | Y in A] past the threshold
        dGen = genericity(dDist, {5})
        self.assertEqual(dGen['strClass'], 'Generic')
        self.assertEqual(dGen['strCase'], 'iii')
        self.assertTrue(1 < dGen['numThetaC'] < 2)
        self.assertAlmostEqual(tilt_mean(dDist, {5}, dGen['numThetaC']), 1.0, places=8)
        self.assertAlmostEqual(dGen['numMeanStar'], 1.0, places=8)


if __name__ == '__main__':
    unittest.main()

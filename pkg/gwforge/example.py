"""Run example Galton-Watson experiments.

This script walks through the main functions of gwforge as a tutorial: exact
offspring computations, samplers, the enumeration oracle and the limit experiments.
Exact laws use Fractions, so keep the enumeration caps small; the Monte Carlo
parts take a few seconds each with the default numbers of repetitions.

Version history:
1.0 - 2026 Created

"""

import time
import numpy as np
import matplotlib.pyplot as plt

from gwforge import (parse_distribution, getGeometric, getPowerLaw, extinction_probability, conjugate, backbone,
                     genericity, getFunctional, getRngStream, sample_gw, sample_kesten, sample_condensation,
                     stats, enumerate_law, kesten_restriction_law, conditioned_restriction_law, tv_distance,
                     dwass_check, convergence_experiment, ratio_table, kesten_stigum_mc, property_probe,
                     condensation_experiment)

# %% offspring distributions
# presets are exact; a JSON pmf with string fractions is exact too
dSuper = parse_distribution('super-binary')
dCritical = parse_distribution('critical-binary')
dSub = parse_distribution('sub-binary')
print("super-binary: m = %s, q = %s" % (dSuper['numMean'], extinction_probability(dSuper)))
print("conjugate law: %s" % conjugate(dSuper)['vecPmf'])
print("backbone law: %s" % backbone(dSuper)['vecPmf'])

# float families carry a radius of convergence and a truncation bound
dGeom = getGeometric(0.5)
print("geometric(1/2): m = %.3f, stored support up to %d" % (dGeom['numMean'], len(dGeom['vecPmf']) - 1))

# %% trees
objRng = getRngStream(1)
tplTree = sample_gw(dCritical, objRng)
print("a critical binary tree: %s" % (tplTree,))
print("its statistics: %s" % stats(tplTree, setA={0}))

# the size-biased tree restricted to height 3 always has a node at height 3
tplKesten = sample_kesten(dCritical, objRng, 3)
print("r_3 of Kesten's tree: %s" % (tplKesten,))

# %% exact laws
dLaw = enumerate_law(dCritical, 7)
print("GW trees with at most 7 nodes: %d trees, mass %s" % (len(dLaw['dLaw']), dLaw['numMass']))
for intN in range(1, 6):
    numLhs, numRhs = dwass_check(dCritical, intN)
    print("n=%d: P(|tau| = n) = %s, (1/n) P(S_n = n-1) = %s" % (intN, numLhs, numRhs))

# conditioned on size 9, r_2 of the tree is not yet Kesten's r_2
dSize = getFunctional('size')
dCond = conditioned_restriction_law(dCritical, dSize, (9, 1), 2)
numTv, dTV = tv_distance(dCond, kesten_restriction_law(dCritical, 2))
print("TV(r_2(tau_9), r_2(tau*)) = %s" % numTv)

# %% convergence to Kesten's tree
t = time.time()
cellWindows = [(n, 2) for n in range(5, 40, 4)]
vecTv, dReport = convergence_experiment(dCritical, dSize, cellWindows, 2)
print("\nsize conditioning, TV per window: %s" % np.round(vecTv, 4))
print("routing: %s (took %.2f s)" % (dReport['strRouting'], time.time() - t))

# a sub-critical law conditioned on its number of leaves behaves like its critical tilt
dLeaves = getFunctional('leaves', {0})
dGen = genericity(dSub, {0})
print("sub-binary with A={0}: %s, theta_c = %s" % (dGen['strClass'], dGen['numThetaC']))
vecTv, dReport = convergence_experiment(dSub, dLeaves, [(n, 1) for n in range(2, 12, 2)], 2, boolPlot=True)

# %% window ratios
# height tails decay like m^n
vecRatio, dReport = ratio_table(parse_distribution('{"pmf": {"0": 0.6, "2": 0.4}}'), getFunctional('height'),
                                [5, 10, 20, 40], boolPlot=True)
print("\nP(H >= n+1) / P(H >= n): %s (limit m = %s)" % (np.round(vecRatio, 5), dReport['numLimit']))

# %% graft properties of the functionals
for strName in ('size', 'height', 'maxdeg', 'maxgen'):
    strClass, dReport = property_probe(getFunctional(strName), intMaxSize=5)
    print("%s: %s over %d pairs (t, x)" % (strName, strClass, dReport['intPairs']))

# %% Kesten-Stigum
t = time.time()
dblMeanW, dReport = kesten_stigum_mc(dSuper, 12, intReps=20000, intSeed=1, boolPlot=True)
print("\nE[W_12] = %.4f +/- %.4f; P(Z_12 = 0) = %.4f vs g_12(0) = %.4f, q = %s (took %.2f s)"
      % (dblMeanW, dReport['dblSem'], dReport['dblFracExtinct'], dReport['dblExtinctByN'], dReport['numQ'],
         time.time() - t))

# %% condensation
# a sub-critical law with radius 1 is non-generic: the conditioned tree condenses
dPower = getPowerLaw(3, 0.5)
print("\npower law (beta=3, p0=1/2): %s" % genericity(dPower, None)['strClass'])
_, dExt = sample_condensation(dSub, objRng, 3)
print("a condensation tree: %s with infinite node %s" % (dExt['tplTree'], dExt['tplInfiniteLabel']))
t = time.time()
dblTvDepth, dReport = condensation_experiment(dSub, intReps=20000, intSeed=2, boolPlot=True)
print("depth of the infinite node: TV to Geom(1-m) = %.4f, P(depth 0) = %.4f vs %s (took %.2f s)"
      % (dblTvDepth, dReport['dblFracDepth0'], 1 - dSub['numMean'], time.time() - t))

plt.show()

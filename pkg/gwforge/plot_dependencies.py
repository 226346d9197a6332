# -*- coding: utf-8 -*-
"""
Figures for the limit_lab reports.

Every function takes the report dict returned by the matching driver in gwforge.main
and either shows the figure or returns it (return_fig=True).
"""
import numpy as np
import matplotlib.pyplot as plt

INT_DPI = 100


def finishFigure(f, return_fig):
    f.tight_layout()
    if return_fig:
        return f
    plt.show()


# %% convergence


def plotConvergence(dReport, return_fig=False):
    '''
    Creates figure for convergence_experiment

    Syntax:
    plotConvergence(dReport, return_fig=False)

    Parameters
    ----------
    dReport : dict
        Output of convergence_experiment.
    return_fig : bool, optional
        return the figure instead of showing it. The default is False.

    Version history:
    1.0 - 2026 Created
    '''
    try:
        cellRows = dReport['cellRows']
        strTarget = dReport['strTarget']
        intH = dReport['intH']
        strName = dReport['dFunctional']['strName']
    except KeyError:
        raise Exception("plotConvergence error: information is missing from dReport dictionary")

    vecN = np.array([dRow['tplWindow'][0] for dRow in cellRows], dtype=np.float64)
    vecTv = np.array([float(dRow['numTv']) for dRow in cellRows])
    vecLow = np.array([float(dRow['numTvLower']) for dRow in cellRows])
    vecHigh = np.array([float(dRow['numTvUpper']) for dRow in cellRows])
    vecRatio = np.array([np.nan if dRow['numRatio'] is None else float(dRow['numRatio']) for dRow in cellRows])

    f, (ax1, ax2) = plt.subplots(1, 2, figsize=(12, 4), dpi=INT_DPI)
    ax1.fill_between(vecN, vecLow, vecHigh, color=[0.8, 0.8, 0.8])
    ax1.plot(vecN, vecTv, 'k.-')
    ax1.set(xlabel='window start n', ylabel='TV distance',
            title=f'r_{intH} of {strName}-conditioned tree vs {strTarget}')
    ax2.plot(vecN, vecRatio, 'b.-')
    if dReport.get('numRatioLimit') is not None:
        ax2.axhline(float(dReport['numRatioLimit']), color='r', ls='--')
    ax2.set(xlabel='window start n', ylabel='P(A_(n+1)) / P(A_n)', title='window probability ratios')
    return finishFigure(f, return_fig)


def plotRatioTable(dReport, return_fig=False):
    cellRows = dReport['cellRows']
    vecN = [dRow['intN'] for dRow in cellRows]
    vecRatio = [np.nan if dRow['numRatio'] is None else float(dRow['numRatio']) for dRow in cellRows]
    f, ax1 = plt.subplots(1, 1, figsize=(6, 4), dpi=INT_DPI)
    ax1.plot(vecN, vecRatio, 'k.-')
    if dReport['numLimit'] is not None:
        ax1.axhline(float(dReport['numLimit']), color='r', ls='--')
    ax1.set(xlabel='n', ylabel='ratio', title='P(A_(n+step)) / P(A_n)')
    return finishFigure(f, return_fig)


# %% Monte Carlo reports


def plotKestenStigum(dReport, return_fig=False):
    """Histogram of W_n with the extinction mass marked."""
    vecW = dReport['vecW']
    f, ax1 = plt.subplots(1, 1, figsize=(6, 4), dpi=INT_DPI)
    ax1.hist(vecW[vecW > 0], bins=50, density=False, color=[0.5, 0.5, 0.8])
    ax1.set(xlabel='W_n', ylabel='count',
            title=f"mean W_n={dReport['dblMeanW']:.4f}, extinct {dReport['dblFracExtinct']:.4f} "
                  f"(q={float(dReport['numQ']):.4f})")
    return finishFigure(f, return_fig)


def plotCondensation(dReport, return_fig=False):
    vecObs = np.asarray(dReport['vecDepthCounts'], dtype=np.float64)
    vecExp = np.asarray(dReport['vecDepthExpected'], dtype=np.float64)
    vecBins = np.arange(len(vecObs))
    f, ax1 = plt.subplots(1, 1, figsize=(6, 4), dpi=INT_DPI)
    ax1.bar(vecBins, vecObs / vecObs.sum(), color=[0.7, 0.7, 0.7], label='sampled')
    ax1.plot(vecBins, vecExp / vecExp.sum(), 'ro', label='Geom(1-m)-1')
    ax1.set(xlabel='depth of the infinite node (last bin: beyond cap)', ylabel='frequency',
            title=f"TV={dReport['dblTvDepth']:.4f}, chi2 p={dReport['dblChi2P']:.3f}")
    ax1.legend()
    return finishFigure(f, return_fig)

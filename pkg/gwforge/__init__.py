from gwforge.main import (convergence_experiment, ratio_table, kesten_stigum_mc, property_probe,
                          condensation_experiment)
from gwforge.tree_dependencies import (decode, encode, getLabels, stats, restrict, restrict_star, graft,
                                       graft_set_contains, graft_set_intersection, tree_distance, getAllTrees,
                                       minami_map, getFunctional, getFunctionalValue, getGraftMap,
                                       getExtendedTree, tree_to_json, tree_from_json)
from gwforge.offspring_dependencies import (getOffspringDistribution, getGeometric, getPoisson, getPowerLaw,
                                            parse_distribution, distribution_to_json, gen_fn, extinction_probability,
                                            conjugate, size_biased, survivor_joint, backbone, reconstruct_gen_fn,
                                            condensation_offspring, leaf_offspring, tilt, tilt_mean, tilt_interval,
                                            genericity, getCriticality, getSumLaw)
from gwforge.sample_dependencies import (getRngStream, getSampleBudget, sample_gw, sample_process,
                                         sample_process_batch, sample_immigration, sample_kesten, sample_survivor,
                                         sample_condensation, sample_conditioned)
from gwforge.enum_dependencies import (enumerate_law, restriction_law, kesten_restriction_law, functional_law,
                                       dwass_check, conditioned_law, conditioned_restriction_law, graft_set_prob,
                                       graft_set_conditioned_prob, eq_tmp_ratio, tv_distance, strong_ratio_table,
                                       conjugate_law_check, kesten_moment_check)
from gwforge.plot_dependencies import plotConvergence, plotRatioTable, plotKestenStigum, plotCondensation

#from gwforge.dependencies import getSmallestFixedPoint, getConvolutionPower, getTvd

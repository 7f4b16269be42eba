"""Subgroups of free groups studied through their Schreier graphs."""

from .errors import (MonotonicityError, ParseError, ResourceLimitError, SchreierError,
                     ValidationError)
from .words import (Letter, ReducedWord, ball_size, concat, cylinder_measure, reduce,
                    shortlex_enumerate, sphere_size, word)
from .graph import (BallView, GeodesicTree, NeighborhoodKey, PartialLabeledGraph,
                    SchreierGraph, act, ball, ball_from_key, canonical_key, detect_k_cycle,
                    fundamental_group_generators, geodesic_spanning_tree, sphere_sizes,
                    validate)
from .subgroups import (CoreSource, LatticeSource, StallingsCore, SubgroupSpec, TorusGraph,
                        ball_source_from_core, bipartite_thinness, coset_enumerate,
                        free_group_tree, random_schreier, stallings_core, torus_graph)
from .density import (BinaryField, CylinderPredicate, PlainGraph, contract, density_profile,
                      field_from_predicate, lipschitz_ratio, lopsidedness, mean_rho,
                      mean_tau_on, predicate_from_name, rho, tau, tau_values,
                      translate_closure)
from .sofic import (LocalStatistics, StitchReport, check_approximation, damage,
                    dirac_statistics, local_statistics, restrict_statistics, stitch,
                    tv_distance)
from .boundary import (GrowthBoundParams, RatioSequence, ball_ratios, boundary_ratios,
                       classify_conservativity, cogrowth_series, delta_measure_estimate,
                       growth_bound, srw_return_stats)
from .sgf import parse_sgf, write_sgf

__version__ = "0.1.0"

"""Exact Flag fan computations for matroid amalgams and graph correspondences."""

from .amalgam import (AmalgamProblem, AmalgamVerdict, amalgam_eta, decide_amalgam,
                      diagonal_functions, fibre_product, oracle_proper_amalgam)
from .correspondence import (Correspondence, LatticeMap, compose, gamma, gamma_i,
                             gamma_min_compose_check, graph_correspondence,
                             graph_correspondence_direct, identity_map, is_covering_lattice_map,
                             is_weak_groundset_map, is_weak_lattice_map, pt)
from .errors import TropError
from .fan import (BalancingReport, FlagFan, WeightedChainFan, bergman_fan, check_balancing,
                  degree, fans_equal, matroid_from_degree1_fan, product, pushforward, star,
                  weil_divisor, weil_divisor_chains)
from .groundset import GroundSet
from .matroid import (Matroid, contraction, direct_sum, fuse_parallel, is_modular_cut,
                      is_modular_flat, is_modular_pair, matroid_from_flats, restriction,
                      simplify, truncation, uniform)
from .poset import Poset, RankedPoset

__version__ = "0.1.0"

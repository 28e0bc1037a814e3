"""Stable envelopes of torus fixed points on the Hilbert scheme of points in
the plane: elliptic, K-theoretic (any slope) and cohomological versions, with
numerically verified restriction matrices."""

from .envelope import (FactorList, ResidualPoleError, RestrictionMatrix,
                       TreeTermSpec, combined_term_spec, f_lambda_eval,
                       restriction_matrix, s_ell_spec, stab_offshell_eval,
                       stab_restriction, w_ell_spec)
from .jets import Jet
from .limits import (Slope, WallSet, WallSlopeError, coh_matrix, kth_matrix,
                     stab_coh_eval, stab_kth_restriction, verify_coh_sum_identity,
                     verify_q_limit, wall_r_matrix, walls)
from .monomial import Monomial
from .partitions import (BoxTable, Dominance, ParseError, Partition,
                         box_character, box_table, dominance_compare,
                         enumerate_partitions, parse_partition)
from .thetafun import (GeneratorContext, GenericityError,
                       SingularArgumentError, eval_factor_jet, make_context,
                       phi, theta)
from .trees import (LambdaTree, LShape, Skeleton, TreeWeights, l_shapes,
                    skeleton, tree_weights, upsilon_trees)

__version__ = "0.1.0"

__all__ = [
    "BoxTable", "Dominance", "FactorList", "GeneratorContext",
    "GenericityError", "Jet", "LShape", "LambdaTree", "Monomial",
    "ParseError", "Partition", "ResidualPoleError", "RestrictionMatrix",
    "SingularArgumentError", "Skeleton", "Slope", "TreeTermSpec",
    "TreeWeights", "WallSet", "WallSlopeError", "box_character", "box_table",
    "coh_matrix", "combined_term_spec", "dominance_compare",
    "enumerate_partitions", "eval_factor_jet", "f_lambda_eval", "kth_matrix",
    "l_shapes", "make_context", "parse_partition", "phi",
    "restriction_matrix", "s_ell_spec", "skeleton", "stab_coh_eval",
    "stab_kth_restriction", "stab_offshell_eval", "stab_restriction",
    "theta", "tree_weights", "upsilon_trees", "verify_coh_sum_identity",
    "verify_q_limit", "w_ell_spec", "wall_r_matrix", "walls",
]

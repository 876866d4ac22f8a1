"""Rearrangement moves for rooted binary phylogenetic networks."""

from .errors import (CompositionInvalid, ExceptionalNetwork, InvalidMove,
                     NotDistanceOne, PreconditionViolated, ProjectionBlocked,
                     ScaleLimitExceeded, StructureError, TierMismatch,
                     TooFewLeaves, Unrootable)
from .network import (Network, Tier, ValidationReport, is_above,
                      is_downward_closed, lca_set, reticulation_number,
                      validate)
from .canon import (CanonicalCode, canonical_code, canonical_labeling,
                    find_isomorphism, is_isomorphic)
from .moves import (Move, MoveInfo, Triangle, apply_move, can_apply,
                    enumerate_moves, find_triangle, format_move, inverse_move,
                    is_movable, move_distance, movable_edge_avoiding,
                    parse_move)
from .newick import (parse_edge_list, parse_enewick, write_edge_list,
                     write_enewick)
from .oracle import (MAX_BFS_NODES, MAX_TIER_TAXA, TierCatalog, build_move_graph,
                     enumerate_tier, exact_distance, maf_distance,
                     move_graph_stats)
from .rewrite import RewritePlan, decompose_tail_move, rewrite_head_move
from .sequence import (find_sequence, green_line_rspr, green_line_tail,
                       replay_sequence, tail1_sequence)
from .unrooted import (BlobDecomposition, SprInfo, SprMove, UnrootedNetwork,
                       apply_spr, can_apply_spr, decompose,
                       eliminate_terminal_components, find_unrooted_isomorphism,
                       inverse_spr, is_rootable, root_at, spr_sequence,
                       underlying, unrooted_canonical_code,
                       unrooted_canonical_labeling)

__all__ = [name for name in dir() if not name.startswith("_")]

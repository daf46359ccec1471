"""Topological decision procedures for LCL tasks on rings.

Build input/output/protocol complexes, search for name-independent
simplicial maps (the t-round algorithms), simulate the resulting tables on
concrete rings, and run the round-reduction machinery behind the log* lower
bound for 3-colouring.
"""
from .complex import (Complex, Vertex, Violation, apply_table, component_signature, connected_components,
                      is_simplex, make_complex, one_skeleton, to_dot, verify_simplicial)
from .errors import *  # noqa: F401,F403
from .protocol import (IdMode, build_id_input_complex, build_protocol_complex, canonicalize_ids, compatible,
                       enumerate_views, pi, xi)
from .reduction import (decode_color, encode_family, f_of_view, linial_bound, log_star, phi_apply_map,
                        phi_facet_ok, reduce_once, tower)
from .search import (SAT, UNKNOWN, UNSAT, AlgorithmTable, SolveResult, brute_force_solve, check_witness,
                     extract_algorithm, solve, solve_skeleton)
from .sim import RingInstance, cross_validate, enumerate_instances, reference_linial_table, run
from .task import (LclTask, Star, build_input_complex, build_output_complex, builtin_task, parse_task,
                   task_from_doc, task_to_doc)
from .values import UNIT, IdLabel, RingView, family

__version__ = "0.1.0"

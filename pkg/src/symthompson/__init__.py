"""Exact tree-pair calculus for symmetric Higman-Thompson groups V_d(H, q).

Elements, the maps pi, iota and r, the Stein-Farley poset over the tree
model, descending links and their integral homology.
"""

from .element import (
    CantorPoint,
    SymTreePair,
    act,
    bfs_ball,
    canonical_elements,
    compose,
    equals,
    expand,
    identity_element,
    inverse,
    iota,
    pi,
    pi_section,
    reduce,
    retract,
    vd_generating_set,
)
from .errors import (
    BoundExceededError,
    GroupMismatchError,
    InputError,
    ParseError,
    QConflictError,
    SymThompsonError,
)
from .homology import SimplicialComplex, reduced_homology, smith_normal_form
from .localgroup import (
    LocalElement,
    LocalGroup,
    Perm,
    build_group,
    image_group,
    sym3_group,
    trivial_group,
    z2_group,
    z2_kernel_group,
)
from .steinfarley import (
    PosetVertex,
    base_vertex,
    complete_join_check,
    descending_link,
    elementary,
    height,
    interval,
    leq,
    orbit_census,
    vertex_equals,
    vertex_stabilizer_order,
)
from .trees import CompleteTree, common_refinement, expand_leaf, refines, trivial_tree

__all__ = [
    "CantorPoint",
    "SymTreePair",
    "act",
    "bfs_ball",
    "canonical_elements",
    "compose",
    "equals",
    "expand",
    "identity_element",
    "inverse",
    "iota",
    "pi",
    "pi_section",
    "reduce",
    "retract",
    "vd_generating_set",
    "BoundExceededError",
    "GroupMismatchError",
    "InputError",
    "ParseError",
    "QConflictError",
    "SymThompsonError",
    "SimplicialComplex",
    "reduced_homology",
    "smith_normal_form",
    "LocalElement",
    "LocalGroup",
    "Perm",
    "build_group",
    "image_group",
    "sym3_group",
    "trivial_group",
    "z2_group",
    "z2_kernel_group",
    "PosetVertex",
    "base_vertex",
    "complete_join_check",
    "descending_link",
    "elementary",
    "height",
    "interval",
    "leq",
    "orbit_census",
    "vertex_equals",
    "vertex_stabilizer_order",
    "CompleteTree",
    "common_refinement",
    "expand_leaf",
    "refines",
    "trivial_tree",
]

__version__ = "0.1.0"

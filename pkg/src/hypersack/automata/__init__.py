from .depth2 import build_depth2_nfa, split_params
from .nfa import (
    MembershipResult, NotAcyclic, Transition, WordNFA, acyclic_membership, benois_saturate, grid_exponents,
    grid_nfa, is_acyclic, load_nfa, nfa_from_json, nfa_to_json,
)
from .parikh import ParikhNFA, parikh_from_json, parikh_image, parikh_to_json

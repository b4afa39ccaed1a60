"""The automaton side: Parikh images and membership of 1 in acyclic automata."""
from hypersack import enumerate_box, parse_expression, parse_group
from hypersack.automata import ParikhNFA, acyclic_membership, grid_nfa, parikh_image
from hypersack.automata.parikh import runs_in_box

# counting automaton: x1 is free, x2 picks up 1 then any even amount
A = ParikhNFA([0, 1], 0, {1}, [(0, (1, 0), 0), (0, (0, 1), 1), (1, (0, 2), 1)], 2)
S = parikh_image(A)
print(S)
print(enumerate_box(S, 5) == runs_in_box(A, 5))

F2 = parse_group("F2")
E = parse_expression("a^x b^y [a^-1]^z [b^-1]^w", F2)
G = grid_nfa(E, 199)
res = acyclic_membership(F2, G)
print(len(G.states), "states, accepts 1:", res.accepted, "witness length", len(res.witness))

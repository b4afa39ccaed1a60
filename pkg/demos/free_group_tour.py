"""A first look: solving knapsack equations in the free group on a, b."""
from hypersack import decide, enumerate_box, parse_expression, parse_group, solve, brute_solve

F2 = parse_group("F2")

# a^x b^y a^-z b^-w is trivial only when x = z, y = w and one of the pairs is 0.
# Sets print as "offset | periods", one linear set per line.
E = parse_expression("a^x b^y [a^-1]^z [b^-1]^w", F2)
S = solve(F2, E)
print(S)
print("points with exponents <= 3:", sorted(enumerate_box(S, 3)))
print("brute force agrees:",
      enumerate_box(S, 3) == {tuple(nu[v] for v in S.variables) for nu in brute_solve(F2, E, 3)})

# conjugated powers: (a b a^-1)^x equals a b^x a^-1
E = parse_expression("[a b a^-1]^x a b^-5 a^-1", F2)
print(solve(F2, E))

# no solutions at all
d = decide(F2, parse_expression("a^x b^y a^-1 b^-1", F2))
print("a^x b^y a^-1 b^-1 solvable:", d.answer)

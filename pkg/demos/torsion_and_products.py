"""Groups with torsion, free products and a direct factor Z."""
from hypersack import decide, enumerate_box, parse_expression, parse_group, solve
from hypersack.corpus import shipped_corpus_dir

data = shipped_corpus_dir()          # holds z2.tbl, the table of Z/2
Dinf = parse_group("(finite:z2.tbl) * (finite:z2.tbl)", data)

# left.a and right.a are involutions; their product has infinite order.
# Here x must be 1 and y odd.
E = parse_expression("[left.a right.a]^x right.a left.a^y", Dinf)
S = solve(Dinf, E)
print(S)
print(sorted(enumerate_box(S, 6)))

# the torsion power contributes only its parity
E = parse_expression("left.a^x [left.a right.a]^y [left.a right.a]^-2 left.a", Dinf)
print(solve(Dinf, E))

FxZ = parse_group("(F2) x Z")
E = parse_expression("[a t]^x [b t]^y b^-2 a^-3 t^-5", FxZ)
d = decide(FxZ, E)
print(d.answer, d.witness)

"""Deciding solvability two ways and comparing.

Route a computes the whole semilinear solution set and reads off a witness.
Route b bounds every exponent by p, builds the grid automaton whose accepted
words are exactly the instantiations with exponents <= p, and asks whether it
accepts a word equal to 1.
"""
import time

from hypersack import decide, parse_expression
from hypersack.corpus import read_corpus, shipped_corpus_dir

rows = []
for inst in read_corpus(shipped_corpus_dir())[:20]:
    spec = inst.group()
    E = inst.expression(spec)
    t0 = time.perf_counter()
    a = decide(spec, E, route="a")
    t1 = time.perf_counter()
    b = decide(spec, E, route="b", bound=(a.magnitude or 0) + 1)
    t2 = time.perf_counter()
    rows.append((inst.name, a.answer, b.answer, t1 - t0, t2 - t1))

for name, ra, rb, ta, tb in rows:
    print(f"{name:16} a={ra!s:5} b={rb!s:5} {ta:7.3f}s {tb:7.3f}s")
print("all agree:", all(ra == rb for _, ra, rb, _, _ in rows))

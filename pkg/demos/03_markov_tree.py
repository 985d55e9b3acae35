"""
Markov-type equations
=====================

Block sizes (1,2,6) and K^2 = 3 give r1^2 + 2 r2^2 + 6 r3^2 = 6 r1 r2 r3,
solved by the ranks (2,5,9).  Vieta mutations walk the solution tree.
"""

from orthocoll.markov import MarkovTriple, enumerate_solutions, make_equation, path

eq = make_equation(1, 2, 6, 3)
tree = enumerate_solutions(eq, MarkovTriple((2, 1, 1)), 100)
print("solutions with entries <= 100:", [t.r for t in tree])
for t, i in path(tree, MarkovTriple((2, 1, 1)), MarkovTriple((2, 5, 9))):
    print(f"  {t.r} --mutate r{i}-->")
print("  (2, 5, 9)")

classical = make_equation(1, 1, 1, 9)
print("classical Markov triples up to 100:",
      sorted({tuple(sorted(t.r)) for t in enumerate_solutions(classical, MarkovTriple((1, 1, 1)), 100)}))

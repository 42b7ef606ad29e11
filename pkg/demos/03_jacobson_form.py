# From a diagonal form to the Jacobson form Diag(1, ..., 1, m).
# Only works over a simple ring, here the rational Weyl algebra in t.

from orediag import (NotSimpleDomain, OreMatrix, cyclic_vector_probe, diagonalize, parse_matrix,
                     preset_algebra, strengthen_diagonal)

W = preset_algebra("weyl", variables=["t"])
M = parse_matrix("[[d^2, d+1, 0], [d+1, 0, d^3-t^2*d], [2*d+1, d^3+d^2, d^2]]", W)

r = diagonalize(M)
print("degrees:", r.degrees())
g = r.D.diagonal()[0]
print(len(g.terms), "terms:", g)

D = OreMatrix.diag(r.D.diagonal(), W)
jac = strengthen_diagonal(D, certify=True)
print("Jacobson diagonal degrees:", [e.degree() for e in jac.diagonal()])
print("rounds:", len(jac.trace))

# cheap alternative: annihilator of a random vector
two = OreMatrix.diag([W.d(), W.d()], W)
for seed in range(3):
    p = cyclic_vector_probe(two, seed=seed)
    print(seed, p.c.to_string(), "passed" if p.passed else "retry")

# the shift algebra is not simple, so Diag(S, S) stays as it is
S = preset_algebra("shift")
try:
    strengthen_diagonal(parse_matrix("[[S, 0], [0, S]]", S))
except NotSimpleDomain as exc:
    print("refused:", exc)

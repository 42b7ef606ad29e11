# Physical parameters as polynomial variables, and a prime field.

from orediag import PrimeField, diagonalize, normalize_diagonal, parse_matrix, preset_algebra

# linearized double pendulum: lengths l1, l2 and gravity g are constants, delta = 0
P = preset_algebra("commutative", variables=["l1", "l2", "g"], op="d")
M = parse_matrix("[[l1*d^2+g, 0, -g], [0, l2*d^2+g, -g]]", P)
r = diagonalize(M)
print(r.D)
# the entry vanishes when l1 = l2, so the generic answer hides a special case
for e in r.D.diagonal():
    print(e, "->", e.coefficient(0).evaluate([1, 1, 9]))

# two base variables, derivative in x only
A = preset_algebra("weyl", variables=["y", "x"], active="x")
M = parse_matrix("[[y^2*d^2+d+1, 1], [x*d, x^2*d^2+d+y]]", A)
print(diagonalize(M).D)

# same matrix over GF(2), with the leading coefficient divided out
F = preset_algebra("weyl", variables=["y", "x"], active="x", field=PrimeField(2))
r = diagonalize(parse_matrix("[[y^2*d^2+d+1, 1], [x*d, x^2*d^2+d+y]]", F))
for e in normalize_diagonal(r.D):
    print(e)

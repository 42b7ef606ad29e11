# Diagonalizing a 2x2 matrix of differential operators.
# Everything here is exact, no floats anywhere.

from orediag import diagonalize, is_unimodular_over_rstar, parse_matrix, preset_algebra

W = preset_algebra("weyl")      # K[x][d] with d*x = x*d + 1
print(W.relations())

M = parse_matrix("[[d^2-1, d+1], [d^2+1, d-x]]", W)
print(M)

r = diagonalize(M)
print("iterations:", r.iterations)   # one left step, one right step
print("D =")
print(r.D)
print("U =")
print(r.U)
print("V =")
print(r.V)

# the identity is checked exactly
assert r.U * M * r.V == r.D

# V has an inverse with polynomial entries, U does not
ok, Vinv = is_unimodular_over_rstar(r.V)
print("V invertible over K[x][d]:", ok)
print(Vinv)
print("U invertible over K[x][d]:", is_unimodular_over_rstar(r.U)[0])

# the d-degrees of the diagonal add up to the d-degree of the "determinant"
print("degrees:", r.degrees())

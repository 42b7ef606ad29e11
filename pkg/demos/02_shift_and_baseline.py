# The same matrix over the shift algebra, plus the rational baseline.

from orediag import diagonalize, diagonalize_rational, parse_matrix, preset_algebra
from orediag.rational import rational_degrees

S = preset_algebra("shift")     # S*t = (t+1)*S
print(S.relations())

M = parse_matrix("[[S^2-1, S+1], [S^2+1, S-t]]", S)
poly = diagonalize(M)
print(poly.D)

# Euclidean elimination over K(t)[S]; entries get denominators
rat = diagonalize_rational(M)
for row in rat.D:
    print([e.to_string() for e in row])

# degree sums agree, as they must
print(sum(poly.degrees()), sum(rational_degrees(rat)))

# coefficient sizes per iteration, for both strategies
for name, res in (("polynomial", poly), ("rational", rat)):
    print(name, [it["max_coeff_bits"] for it in res.stats.iterations])

# a side swap with no involution available goes through the opposite algebra
Q = preset_algebra("qweyl", q=2)
r = diagonalize(parse_matrix("[[d^2+x, d], [x*d, d+1]]", Q))
print(r.sideswap, r.degrees())

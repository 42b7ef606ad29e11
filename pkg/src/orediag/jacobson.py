"""Jacobson normal form ``Diag(1, ..., 1, m)`` over the rational Weyl algebra.

A diagonal matrix is strengthened pairwise.  For ``Diag(m1, m2)`` with
``deg m2 <= deg m1`` and ``m2`` not a unit, pick the smallest ``i`` with
``m1 * x^i = a*m2 + b`` and ``b != 0``; then

    [[1, -a], [0, 1]] * Diag(m1, m2) * [[1, x^i], [0, 1]] = [[m1, b], [0, m2]]

and diagonalizing the right-hand side lowers the smaller degree.  Repeating
ends with a unit, which is normalized to 1.  Over non-simple domains such as
the shift algebra this can stall (``Diag(s, s)`` has no form ``Diag(1, p)``),
so those presets are refused unless ``best_effort`` is set.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from .diagonalize import diagonalize
from .errors import NoExponentFound, NotSimpleDomain, OreError, SpecError, VerificationError
from .matrix import OreMatrix
from .rational import (RatFunc, RatOrePoly, gcd_lclm, lclm, rat_identity, rat_is_unimodular, rat_matmul,
                       rat_matrix, rat_to_ore, right_divide)


def _check_simple(spec, best_effort=False):
    if spec.nvars != 1:
        raise SpecError("Jacobson strengthening works over K(x)[d] with one base variable")
    if not (spec.simple and spec.preset == "weyl") and not best_effort:
        raise NotSimpleDomain(spec.preset)


# ---------------------------------------------------------------------------
# the exponent step


def find_shift_exponent(m1: RatOrePoly, m2: RatOrePoly, require_weyl: bool = True):
    """Smallest ``i`` with a nonzero remainder ``b`` in ``m1 * x^i = a*m2 + b``.

    Returns ``(i, a, b)``.  Over the Weyl algebra some
    ``i <= deg m1 - deg m2 + 1`` always works.
    """
    spec = m1.spec
    if require_weyl:
        _check_simple(spec)
    if not m2 or m2.degree() == 0:
        raise ValueError("the second entry must not be a unit")
    if not m1 or m1.degree() < m2.degree():
        raise ValueError("need deg m2 <= deg m1")
    x = RatOrePoly.x_power(1, spec)
    lhs = m1
    for i in range(m1.degree() - m2.degree() + 2):
        if i:
            lhs = lhs * x
        a, b = right_divide(lhs, m2)
        if b:
            return i, a, b
    raise NoExponentFound(f"every m1*x^i with i <= {m1.degree() - m2.degree() + 1} is right divisible by m2")


# ---------------------------------------------------------------------------
# results


@dataclass
class TFRound:
    """One exponent step followed by re-diagonalization of a 2x2 block."""

    pair: Tuple[int, int]
    exponent: int
    remainder_degree: int
    before: Tuple[int, int]
    after: Tuple[int, int]

    def to_dict(self):
        return {"pair": list(self.pair), "exponent": self.exponent,
                "remainder_degree": self.remainder_degree,
                "before": list(self.before), "after": list(self.after)}


@dataclass
class JacobsonResult:
    """``U * D * V = Diag(1, ..., 1, m)`` over K(x)[d].

    ``pre_U`` and ``pre_D`` are the transformation and diagonal before the
    units are scaled to 1 (and ``m`` made monic): ``pre_U * D * V = pre_D``.
    """

    U: list
    V: list
    D: list
    pre_U: list
    pre_D: list
    input_degrees: List[int]
    trace: List[TFRound] = field(default_factory=list)
    complete: bool = True
    notes: List[str] = field(default_factory=list)

    def diagonal(self):
        return [self.D[k][k] for k in range(len(self.D))]

    @property
    def m(self) -> RatOrePoly:
        return self.D[-1][-1]

    @property
    def degree_certificate(self) -> bool:
        """Degree of ``m`` equals the input degree sum."""
        return self.complete and self.m.degree() == sum(self.input_degrees)

    def to_dict(self):
        return {"diagonal": [e.to_string() for e in self.diagonal()],
                "degrees": [e.degree() for e in self.diagonal()],
                "input_degrees": list(self.input_degrees),
                "degree_certificate": self.degree_certificate,
                "complete": self.complete, "notes": list(self.notes),
                "trace": [t.to_dict() for t in self.trace]}


# ---------------------------------------------------------------------------
# helpers on rational matrices


def _diag_entries(D):
    """Spec and diagonal entries (as RatOrePoly) of a square diagonal matrix."""
    rows = rat_matrix(D) if isinstance(D, OreMatrix) else [list(r) for r in D]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise SpecError("Jacobson strengthening needs a square diagonal matrix")
    if any(e for i, r in enumerate(rows) for j, e in enumerate(r) if i != j):
        raise SpecError("input matrix is not diagonal")
    entries = [rows[k][k] for k in range(n)]
    if any(not e for e in entries):
        raise SpecError("zero diagonal entry")
    return entries[0].spec, entries


def _left_block(U, i, j, B):
    """Rows ``i, j`` of ``U`` replaced by ``B * [U_i; U_j]``."""
    ri, rj = U[i], U[j]
    U[i] = [B[0][0] * a + B[0][1] * b for a, b in zip(ri, rj)]
    U[j] = [B[1][0] * a + B[1][1] * b for a, b in zip(ri, rj)]


def _right_block(V, i, j, B):
    """Columns ``i, j`` of ``V`` replaced by ``[V_i, V_j] * B``."""
    for r in V:
        a, b = r[i], r[j]
        r[i] = a * B[0][0] + b * B[1][0]
        r[j] = a * B[0][1] + b * B[1][1]


def _diag_rows(entries, spec):
    n = len(entries)
    out = rat_identity(n, spec)
    for k, e in enumerate(entries):
        out[k][k] = e
    return out


def _rediagonalize(block, spec):
    """Polynomial diagonalization of a 2x2 rational block.

    Returns ``(L, R, (d1, d2))`` with ``L * block * R = Diag(d1, d2)``.
    """
    res = diagonalize(rat_to_ore(block, spec))
    L = rat_matmul(rat_matrix(res.U), rat_matrix(res.T))
    R = rat_matrix(res.V)
    d = [RatOrePoly.from_ore(e) for e in res.diagonal()]
    return L, R, (d[0], d[1])


# ---------------------------------------------------------------------------
# strengthening


def strengthen_diagonal(D, best_effort: bool = False, verify: bool = True, max_rounds: int = 200,
                        certify: bool = False) -> JacobsonResult:
    """Jacobson form ``Diag(1, ..., 1, m)`` of a diagonal matrix over the rational Weyl algebra.

    ``D`` is a square :class:`OreMatrix` or list of rows of :class:`RatOrePoly`
    with nonzero diagonal.  With ``best_effort`` other algebras are accepted;
    pairs that make no progress are left as they are and reported in
    ``notes``.  ``certify`` also checks that ``U`` and ``V`` are invertible
    over K(x)[d].
    """
    spec, entries = _diag_entries(D)
    _check_simple(spec, best_effort)
    n = len(entries)
    degs = [e.degree() for e in entries]
    U, V = rat_identity(n, spec), rat_identity(n, spec)
    one, zero = RatOrePoly.one(spec), RatOrePoly.zero(spec)
    swap = [[zero, one], [one, zero]]
    x = RatOrePoly.x_power(1, spec)
    m = list(entries)
    trace: List[TFRound] = []
    notes: List[str] = []
    rounds = 0

    for j in range(1, n):
        i = j - 1
        while True:
            if m[i].degree() < m[j].degree():
                _left_block(U, i, j, swap)
                _right_block(V, i, j, swap)
                m[i], m[j] = m[j], m[i]
            if m[j].degree() == 0:
                # unit in position j: move it left so the big entry travels on
                _left_block(U, i, j, swap)
                _right_block(V, i, j, swap)
                m[i], m[j] = m[j], m[i]
                break
            rounds += 1
            if rounds > max_rounds:
                raise OreError(f"Jacobson strengthening did not finish in {max_rounds} rounds")
            before = (m[i].degree(), m[j].degree())
            try:
                k, a, b = find_shift_exponent(m[i], m[j], require_weyl=not best_effort)
            except NoExponentFound:
                if not best_effort:
                    raise
                notes.append(f"pair {(i, j)}: m{j + 1} right divides m{i + 1}*x^k for every k; no progress")
                break
            _left_block(U, i, j, [[one, -a], [zero, one]])
            _right_block(V, i, j, [[one, _x_pow(x, k)], [zero, one]])
            L, R, (d1, d2) = _rediagonalize([[m[i], b], [zero, m[j]]], spec)
            _left_block(U, i, j, L)
            _right_block(V, i, j, R)
            after = (d1.degree(), d2.degree())
            trace.append(TFRound((i, j), k, b.degree(), before, after))
            if min(after) >= before[1]:
                if not best_effort:
                    raise OreError(f"no degree progress on pair {(i, j)}: {before} -> {after}")
                m[i], m[j] = d1, d2
                notes.append(f"pair {(i, j)}: degrees {before} -> {after}; no progress")
                break
            m[i], m[j] = d1, d2

    pre_U = [list(r) for r in U]
    pre_D = _diag_rows(m, spec)
    # scale units to 1 and make the last entry monic
    scale = [e.lc().inverse() for e in m]
    final = [e.left_scale(s) for e, s in zip(m, scale)]
    U = [[e.left_scale(s) for e in r] for r, s in zip(U, scale)]
    Dn = _diag_rows(final, spec)
    complete = all(e.degree() == 0 for e in final[:-1])
    if not complete and not notes:
        notes.append("some entries besides the last are not units")
    res = JacobsonResult(U, V, Dn, pre_U, pre_D, degs, trace, complete, notes)
    if verify:
        D0 = _diag_rows(entries, spec)
        if rat_matmul(rat_matmul(U, D0), V) != Dn:
            raise VerificationError("U'*D*V' = Diag(1, ..., 1, m)")
        if rat_matmul(rat_matmul(pre_U, D0), V) != pre_D:
            raise VerificationError("U*D*V before unit normalization")
        if complete and not res.degree_certificate:
            raise VerificationError("degree sum", f"deg m = {res.m.degree()}, input sum {sum(degs)}")
    if certify and not (rat_is_unimodular(U) and rat_is_unimodular(V)):
        raise VerificationError("U', V' invertible over K(x)[d]")
    return res


def _x_pow(x, k):
    out = RatOrePoly.one(x.spec)
    for _ in range(k):
        out = out * x
    return out


# ---------------------------------------------------------------------------
# cyclic vector probe


@dataclass
class ProbeResult:
    """Annihilator generator ``c`` of the probe vector and its degree certificate."""

    c: RatOrePoly
    probe: List[RatOrePoly]
    target_degree: int
    seed: Optional[int] = None

    @property
    def passed(self) -> bool:
        return self.c.degree() == self.target_degree

    @property
    def retry(self) -> bool:
        return not self.passed

    def to_dict(self):
        return {"c": self.c.to_string(), "degree": self.c.degree(), "target_degree": self.target_degree,
                "passed": self.passed, "probe": [p.to_string() for p in self.probe], "seed": self.seed}


def random_probe(entries: Sequence[RatOrePoly], rng: random.Random, bound: int = 10, xdeg: int = 1):
    """Probe vector with ``deg p_i < deg m_i`` and integer polynomial coefficients in ``[-bound, bound]``."""
    spec = entries[0].spec
    f = spec.field
    out = []
    for m in entries:
        coeffs = []
        for _ in range(max(m.degree(), 0)):
            dense = [f(rng.randint(-bound, bound)) for _ in range(xdeg + 1)]
            coeffs.append(RatFunc(dense, None, f))
        out.append(RatOrePoly(coeffs, spec))
    return out


def annihilator(p: RatOrePoly, m: RatOrePoly) -> RatOrePoly:
    """Monic generator of ``{u : u*p in R*m}``."""
    if not p:
        return RatOrePoly.one(m.spec)
    _, r = right_divide(p, m)
    if not r:
        return RatOrePoly.one(m.spec)
    u = gcd_lclm(p, m)[4]
    return u.monic()


def cyclic_vector_probe(D, probe: Optional[Sequence[RatOrePoly]] = None, seed: Optional[int] = None,
                        bound: int = 10) -> ProbeResult:
    """Left annihilator generator ``c`` of ``probe`` in ``R^r / R^r D``.

    ``c = lclm(u_1, ..., u_r)`` with ``u_i`` the annihilator of ``p_i``
    modulo ``m_i``.  The certificate passes when ``deg c`` equals the sum
    of the degrees of the diagonal; on failure another probe is needed.
    """
    spec, entries = _diag_entries(D)
    _check_simple(spec)
    if probe is None:
        probe = random_probe(entries, random.Random(seed), bound)
    probe = list(probe)
    if len(probe) != len(entries):
        raise ValueError("probe length differs from the matrix size")
    us = [annihilator(p, m) for p, m in zip(probe, entries)]
    c = lclm(us)
    return ProbeResult(c, probe, sum(e.degree() for e in entries), seed)


def probe_annihilates(res: ProbeResult, D) -> bool:
    """``c * p_i`` is right divisible by ``m_i`` for every ``i``."""
    _, entries = _diag_entries(D)
    return all(not right_divide(res.c * p, m)[1] for p, m in zip(res.probe, entries))

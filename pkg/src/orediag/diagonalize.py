"""Fraction-free diagonalization over R* with transformation tracking.

Each round computes a Groebner basis of the rows of the current matrix,
keeps the minimal basis element per leading position, and swaps sides
(involution or opposite algebra, followed by transposition).  Odd rounds act
on rows and update ``U``; even rounds act on columns and update ``V``.  The
loop stops after an even round that produced a diagonal matrix.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import List, Optional

from .coeff import common_denominator, divide_exact
from .errors import IterationCapExceeded, OreError, VerificationError
from .gb import ModuleOrder, groebner_extended, select_gstar, vec_lm
from .matrix import OreFraction, OreMatrix
from .ore import AlgebraSpec, apply_involution, opposite_transport


@dataclass
class RunStats:
    """Per-iteration size figures for coefficient-swell reports."""

    strategy: str
    iterations: List[dict] = field(default_factory=list)
    wall_time: float = 0.0

    def record(self, index, gb_size, matrices):
        deg, terms, bits = -1, 0, 0
        for rows in matrices:
            for e in (e for r in rows for e in r):
                if not e:
                    continue
                deg = max(deg, e.degree())
                terms = max(terms, len(e.terms))
                f = e.spec.field
                bits = max(bits, max(f.bits(c) for c in e.terms.values()))
        self.iterations.append({"iteration": index, "gb_size": gb_size, "max_degree": deg,
                                "max_terms": terms, "max_coeff_bits": bits})

    def bit_series(self):
        return [it["max_coeff_bits"] for it in self.iterations]

    def to_dict(self):
        return {"strategy": self.strategy, "iterations": list(self.iterations),
                "wall_time": self.wall_time}


@dataclass
class DiagResult:
    """``U * (T * M) * V = D`` with ``D`` diagonal."""

    U: object
    V: object
    D: object
    T: object
    M: object
    iterations: int
    sideswap: str
    stats: RunStats

    def diagonal(self):
        return self.D.diagonal()

    def degrees(self):
        return [e.degree() for e in self.diagonal() if e]


# ---------------------------------------------------------------------------
# denominators


def clear_denominators(M: OreMatrix):
    """Return ``(T, M*)`` with ``T`` diagonal over the base ring and ``M* = T*M`` polynomial."""
    spec = M.spec
    p, _ = M.shape
    T = OreMatrix.identity(p, spec)
    rows = []
    for i, r in enumerate(M.rows):
        dens = [e.den for e in r if isinstance(e, OreFraction)]
        if not dens:
            rows.append(list(r))
            continue
        t = common_denominator(dens)
        T.rows[i][i] = spec.from_base(t)
        new = []
        for e in r:
            if isinstance(e, OreFraction):
                f = divide_exact(t, e.den)
                if f is None:
                    raise OreError("common denominator is not divisible by an entry denominator")
                new.append(spec.from_base(f) * e.num)
            else:
                new.append(spec.from_base(t) * e)
        rows.append(new)
    return T, OreMatrix(rows, spec)


# ---------------------------------------------------------------------------
# side swapping


def side_swap(spec: AlgebraSpec, rows, mechanism: str):
    """``theta~`` of a matrix: ``(spec', rows')`` in the (possibly opposite) algebra."""
    if mechanism == "involution":
        return spec, apply_involution(spec, rows)
    return opposite_transport(spec, rows)


def _mechanism(spec: AlgebraSpec, sideswap: str) -> str:
    if sideswap == "auto":
        return "involution" if spec.involution is not None else "opposite"
    if sideswap == "involution" and spec.involution is None:
        from .errors import NoInvolution
        raise NoInvolution(f"algebra {spec!r} has no involution")
    if sideswap not in ("involution", "opposite"):
        raise ValueError(f"unknown side-swap mechanism '{sideswap}'")
    return sideswap


def _is_diagonal(rows):
    return all(not e for i, r in enumerate(rows) for j, e in enumerate(r) if i != j)


def _matmul(A, B, spec):
    return (OreMatrix(A, spec) * OreMatrix(B, spec)).rows


def diagonalize(M: OreMatrix, tiebreak: str = "grevlex", max_iter: int = 100, sideswap: str = "auto",
                verify: bool = True, max_pairs: Optional[int] = None) -> DiagResult:
    """Diagonal form ``D = U*(T*M)*V`` with polynomial ``U``, ``V``, ``D``.

    ``U`` and ``V`` are invertible over the localization at nonzero base
    polynomials; invertibility over R* itself is not guaranteed.
    """
    start = time.perf_counter()
    spec = M.spec
    mech = _mechanism(spec, sideswap)
    T, Mp = clear_denominators(M)
    p, q = Mp.shape
    U = OreMatrix.identity(p, spec).rows
    V = OreMatrix.identity(q, spec).rows
    cur_spec, cur = spec, [list(r) for r in Mp.rows]
    stats = RunStats("polynomial")
    i = 0
    while True:
        i += 1
        if i > max_iter:
            raise IterationCapExceeded(max_iter)
        order = ModuleOrder(len(cur[0]), tiebreak)
        gbr = groebner_extended(cur, order, max_pairs=max_pairs)
        rows, cofs, _ = select_gstar(gbr)
        if len(rows) != len(cur):
            raise OreError(f"selection returned {len(rows)} rows for a {len(cur)}-row matrix")
        stats.record(i, len(gbr.extended), [rows, cofs])
        if i % 2:
            U = _matmul(cofs, U, spec)
        else:
            V = _matmul(V, side_swap(cur_spec, cofs, mech)[1], spec)
        cur_spec, cur = side_swap(cur_spec, rows, mech)
        if i % 2 == 0 and _is_diagonal(cur):
            break
    stats.wall_time = time.perf_counter() - start
    res = DiagResult(OreMatrix(U, spec), OreMatrix(V, spec), OreMatrix(cur, spec), T, Mp, i, mech, stats)
    if verify and res.U * res.M * res.V != res.D:
        raise VerificationError("U*(T*M)*V = D")
    return res


# ---------------------------------------------------------------------------
# certificates


def is_unimodular_over_rstar(W: OreMatrix, tiebreak: str = "grevlex"):
    """``(True, X)`` with ``X*W = Id`` if ``W`` is invertible over R*, else ``(False, None)``."""
    g, h = W.shape
    if g != h or W.has_fractions():
        return False, None
    spec = W.spec
    gbr = groebner_extended(W.polynomial().rows, ModuleOrder(g, tiebreak))
    ident = OreMatrix.identity(g, spec).rows
    if gbr.syzygies or gbr.gb != ident:
        return False, None
    X = OreMatrix(gbr.cofactors, spec)
    if X * W != OreMatrix.identity(g, spec):
        return False, None
    return True, X


def is_unimodular_over_r(W: OreMatrix, method: str = "diagonalize", tiebreak: str = "grevlex") -> bool:
    """Invertibility over the localization at nonzero base polynomials.

    ``method="gstar"`` checks that the minimal basis elements of the row
    module occupy every position with Ore-degree 0 there (a lower triangular
    matrix with unit diagonal over the localization); ``method="diagonalize"``
    diagonalizes ``W`` and checks every diagonal entry is a nonzero element
    of Ore-degree 0.
    """
    g, h = W.shape
    if g != h:
        return False
    if method == "diagonalize":
        res = diagonalize(W, tiebreak=tiebreak)
        return all(e and e.degree() == 0 for e in res.diagonal())
    order = ModuleOrder(g, tiebreak)
    gbr = groebner_extended(W.polynomial().rows, order)
    if gbr.syzygies:
        return False
    best = {}
    for v in gbr.extended:
        lm = vec_lm(v, gbr.ext_order)
        if lm[0] >= g:
            best[lm[0]] = min(best.get(lm[0], lm[1]), lm[1])
    return len(best) == g and all(b == 0 for b in best.values())


@dataclass
class VerificationReport:
    identity: bool
    diagonal: bool
    polynomial: bool
    degrees: List[int]
    degree_sum: int
    baseline_degree_sum: Optional[int] = None
    U_unimodular_R: Optional[bool] = None
    V_unimodular_R: Optional[bool] = None

    @property
    def degree_sum_match(self):
        return self.baseline_degree_sum is None or self.baseline_degree_sum == self.degree_sum

    @property
    def passed(self):
        return (self.identity and self.diagonal and self.polynomial and self.degree_sum_match
                and self.U_unimodular_R is not False and self.V_unimodular_R is not False)

    def failures(self):
        out = []
        if not self.identity:
            out.append("U*(T*M)*V = D")
        if not self.diagonal:
            out.append("D diagonal")
        if not self.polynomial:
            out.append("polynomial entries")
        if not self.degree_sum_match:
            out.append(f"degree sum {self.degree_sum} != baseline {self.baseline_degree_sum}")
        if self.U_unimodular_R is False:
            out.append("U invertible over the localization")
        if self.V_unimodular_R is False:
            out.append("V invertible over the localization")
        return out

    def to_dict(self):
        return {"identity": self.identity, "diagonal": self.diagonal, "polynomial": self.polynomial,
                "degrees": self.degrees, "degree_sum": self.degree_sum,
                "baseline_degree_sum": self.baseline_degree_sum,
                "degree_sum_match": self.degree_sum_match,
                "U_unimodular_R": self.U_unimodular_R, "V_unimodular_R": self.V_unimodular_R,
                "passed": self.passed}


def verify_decomposition(M: OreMatrix, result: DiagResult, baseline_degree_sum: Optional[int] = None,
                         certify: bool = True, method: str = "diagonalize", strict: bool = False):
    """Check the identity, diagonality, degree sum and invertibility of ``U``, ``V`` over R."""
    T, Mp = clear_denominators(M)
    mats = (result.U, result.V, result.D)
    polynomial = all(not m.has_fractions() for m in mats)
    identity = polynomial and T == result.T and result.U * Mp * result.V == result.D
    degrees = sorted(result.degrees(), reverse=True)
    rep = VerificationReport(identity, result.D.is_diagonal(), polynomial, degrees, sum(degrees),
                             baseline_degree_sum)
    if certify:
        rep.U_unimodular_R = is_unimodular_over_r(result.U, method)
        rep.V_unimodular_R = is_unimodular_over_r(result.V, method)
    if strict and not rep.passed:
        raise VerificationError(", ".join(rep.failures()))
    return rep


def normalize_diagonal(D: OreMatrix):
    """Diagonal entries made monic in the Ore variable over the base fractions.

    Each nonzero entry ``d`` becomes ``c^-1 * d`` with ``c`` the base
    coefficient of its top Ore power; entries of degree 0 become 1.
    """
    out = []
    for e in D.diagonal():
        if not e:
            out.append(OreFraction(e.spec.base({(0,) * e.spec.nvars: e.spec.field.one}), e))
            continue
        lead = e.coefficient(e.degree())
        out.append(OreFraction(lead, e))
    return out

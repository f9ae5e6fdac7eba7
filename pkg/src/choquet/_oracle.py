"""Brute-force exact linear solves used to cross-check the inversions.

Nothing here shares code with the Möbius routines: the systems are built
straight from the defining identities and solved by Gauss-Jordan
elimination over the rationals.
"""

from __future__ import annotations

from fractions import Fraction


def solve_exact(rows: list, rhs: list):
    """Solve ``rows · w = rhs`` exactly.

    Returns ``(solution or None, rank)``.  The solution is ``None`` when
    the system is inconsistent; with rank below the number of unknowns
    the free variables are set to zero.
    """
    m = len(rows)
    n = len(rows[0]) if rows else 0
    A = [[Fraction(v) for v in r] + [Fraction(b)] for r, b in zip(rows, rhs)]
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        inv = 1 / A[r][c]
        A[r] = [v * inv for v in A[r]]
        for i in range(m):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if A[i][n] != 0:
            return None, r
    x = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        x[c] = A[i][n]
    return x, r


def mode_system(L, mode: str, carrier: list):
    """Coefficient rows (one per element of ``L``) of a representation identity.

    Carrier ids are filter generators for ``monotone``/``alternating`` and
    lattice elements (plus ``None`` for an adjoined bottom) otherwise.
    """
    rows = []
    for x in L.elements:
        if mode == "monotone":
            rows.append([int(L.leq(z, x)) for z in carrier])
        elif mode == "alternating":
            rows.append([int(not L.leq(z, x)) for z in carrier])
        elif mode == "containment":
            rows.append([int(L.leq(x, z)) for z in carrier])
        elif mode == "vee_alternating":
            rows.append([1 if z is None else int(not L.leq(x, z)) for z in carrier])
        else:
            raise ValueError(mode)
    return rows


def mobius_by_solve(L, values: dict) -> dict:
    """``r`` with ``values[x] = Σ_{z <= x} r(z)`` from the full linear system."""
    carrier = list(L.elements)
    rows = mode_system(L, "monotone", carrier)
    sol, rank = solve_exact(rows, [values[x] for x in L.elements])
    if sol is None or rank < len(carrier):
        raise ArithmeticError("the incidence system should be square and invertible")
    return dict(zip(carrier, sol))

"""Problem conversions: VI over a cone <-> CP, Lagrange elimination of
equality constraints, and reduction of polyhedral feasible sets to
separable cones via slack variables.

The polyhedral reduction composes two steps: introduce slacks s >= 0 with
Ax - s + b = 0 (x free), then eliminate that equality with multipliers
lambda. In variable order (s, x, lambda) the assembled operator is

    [[0,    0,  I ],        (0,)
     [0,    M, -A^T],  u +  (q,)
     [-I,   A,  0 ]]        (b,)

over the cone NonNeg(m) x Free(n) x Free(m). The symmetric part of the
block matrix is diag(0, (M+M^T)/2, 0), so the transform preserves
monotonicity but never strong monotonicity; downstream contraction solvers
refuse it and the interior-point path (which only needs monotonicity)
applies.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cones import SegmentKind, Segment, SeparableCone
from .operators import AffineOperator, monotone_modulus

__all__ = [
    "ComplementarityProblem",
    "PolyhedralVI",
    "ConicProgramLayout",
    "vi_to_cp",
    "eliminate_equalities",
    "polyhedron_to_cone",
]


@dataclass(frozen=True)
class ComplementarityProblem:
    """A VI over a cone read as the equivalent complementarity problem."""

    op: AffineOperator
    cone: SeparableCone


@dataclass(frozen=True)
class PolyhedralVI:
    """VI(Mx + q, {x : Ax + b >= 0})."""

    M: np.ndarray
    q: np.ndarray
    A: np.ndarray
    b: np.ndarray

    def __post_init__(self) -> None:
        M = np.asarray(self.M, dtype=float)
        q = np.asarray(self.q, dtype=float)
        A = np.asarray(self.A, dtype=float)
        b = np.asarray(self.b, dtype=float)
        if M.ndim != 2 or M.shape[0] != M.shape[1]:
            raise ValueError(f"M must be square, got shape {M.shape}")
        n = M.shape[0]
        if q.shape != (n,):
            raise ValueError(f"q has shape {q.shape}, expected ({n},)")
        if A.ndim != 2 or A.shape[1] != n:
            raise ValueError(f"A has shape {A.shape}, expected (m, {n})")
        if b.shape != (A.shape[0],):
            raise ValueError(f"b has shape {b.shape}, expected ({A.shape[0]},)")
        for name, val in (("M", M), ("q", q), ("A", A), ("b", b)):
            object.__setattr__(self, name, val)


@dataclass(frozen=True)
class ConicProgramLayout:
    """A transformed problem plus the coordinate spans of its named blocks."""

    cone: SeparableCone
    op: AffineOperator
    variable_map: dict[str, tuple[int, int]]
    strongly_monotone: bool

    def extract(self, name: str, vector: np.ndarray) -> np.ndarray:
        lo, hi = self.variable_map[name]
        return np.asarray(vector)[lo:hi]


def vi_to_cp(op: AffineOperator, cone: SeparableCone) -> ComplementarityProblem:
    """Relabel a VI over a cone as the equivalent complementarity problem.

    Same operator, same cone; only the complementarity reading is attached.
    """
    if op.dim != cone.dim:
        raise ValueError(f"operator dimension {op.dim} != cone dimension {cone.dim}")
    return ComplementarityProblem(op=op, cone=cone)


def eliminate_equalities(op: AffineOperator, A, b, cone: SeparableCone) -> ConicProgramLayout:
    """Replace the equality constraints Ax = b by Lagrange multipliers.

    The output operates on (y, lambda) with matrix [[M, -A^T], [A, 0]] and
    offset (q, -b), over cone x Free(m).
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    b = np.asarray(b, dtype=float)
    n = op.dim
    if cone.dim != n:
        raise ValueError(f"cone dimension {cone.dim} != operator dimension {n}")
    if A.size == 0:
        A = A.reshape(0, n)
    m = A.shape[0]
    if A.shape != (m, n):
        raise ValueError(f"A has shape {A.shape}, expected ({m}, {n})")
    if b.shape != (m,):
        raise ValueError(f"b has shape {b.shape}, expected ({m},)")

    if m == 0:
        return ConicProgramLayout(
            cone=cone,
            op=op,
            variable_map={"y": (0, n), "lambda": (n, n)},
            strongly_monotone=monotone_modulus(op.M) > 0,
        )

    big_M = np.block([[op.M, -A.T], [A, np.zeros((m, m))]])
    big_q = np.concatenate([op.q, -b])
    big_cone = SeparableCone(cone.segments + (Segment(SegmentKind.FREE, m),))
    return ConicProgramLayout(
        cone=big_cone,
        op=AffineOperator(big_M, big_q),
        variable_map={"y": (0, n), "lambda": (n, n + m)},
        strongly_monotone=False,
    )


def polyhedron_to_cone(p: PolyhedralVI) -> ConicProgramLayout:
    """Reduce VI(Mx + q, {Ax + b >= 0}) to a VI over a separable cone.

    Variables are ordered (s, x, lambda) with sizes (m, n, m) over
    NonNeg(m) x Free(n) x Free(m). At a solution: s = Ax + b >= 0,
    Mx + q = A^T lambda with lambda >= 0, and s^T lambda = 0.
    """
    n = p.M.shape[0]
    m = p.A.shape[0]
    if m == 0:
        return ConicProgramLayout(
            cone=SeparableCone((Segment(SegmentKind.FREE, n),)),
            op=AffineOperator(p.M, p.q),
            variable_map={"s": (0, 0), "x": (0, n), "lambda": (n, n)},
            strongly_monotone=monotone_modulus(p.M) > 0,
        )

    I_m = np.eye(m)
    big_M = np.block([
        [np.zeros((m, m)), np.zeros((m, n)), I_m],
        [np.zeros((n, m)), p.M, -p.A.T],
        [-I_m, p.A, np.zeros((m, m))],
    ])
    big_q = np.concatenate([np.zeros(m), p.q, p.b])
    big_cone = SeparableCone((
        Segment(SegmentKind.NONNEGATIVE, m),
        Segment(SegmentKind.FREE, n),
        Segment(SegmentKind.FREE, m),
    ))
    return ConicProgramLayout(
        cone=big_cone,
        op=AffineOperator(big_M, big_q),
        variable_map={"s": (0, m), "x": (m, m + n), "lambda": (m + n, m + n + m)},
        strongly_monotone=False,
    )

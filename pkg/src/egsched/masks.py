"""Edge-eligibility masks for the edge-generation loop.

Four Boolean n x n masks gate candidate edges: redundancy (already
reachable), cycle (reverse reachability or diagonal), length (insertion
keeps the longest path within the deadline; exact by the finish/start
comparison), and width (both endpoints sit at the maximal lateral
width, a necessary condition for any width reduction). Their
conjunction is the action mask.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .analysis import GraphAnalysis
from .bitmatrix import BoolMatrix
from .task import DagTask


@dataclass(frozen=True)
class EdgeMask:
    m_r: BoolMatrix
    m_c: BoolMatrix
    m_l: BoolMatrix
    m_w: BoolMatrix
    combined: BoolMatrix


def redundancy_mask(tc: BoolMatrix) -> BoolMatrix:
    """Edges whose target is not already a descendant of the source node."""
    return ~tc


def cycle_mask(tc: BoolMatrix) -> BoolMatrix:
    """Edges that close no cycle: target is not an ancestor, nor the node itself."""
    return ~(tc.transpose() | BoolMatrix.identity(tc.n))


def length_mask(eft: Sequence[int], lst: Sequence[int]) -> BoolMatrix:
    """Entry (i, j) set iff eft[i] <= lst[j]."""
    n = len(eft)
    rows = []
    for i in range(n):
        row = 0
        fi = eft[i]
        for j in range(n):
            if fi <= lst[j]:
                row |= 1 << j
        rows.append(row)
    return BoolMatrix(n, tuple(rows))


def width_mask(lw: Sequence[int], width: int) -> BoolMatrix:
    """Entry (i, j) set iff both nodes have lateral width = width - 1."""
    n = len(lw)
    hot = 0
    for i, value in enumerate(lw):
        if value == width - 1:
            hot |= 1 << i
    rows = tuple(hot if (hot >> i) & 1 else 0 for i in range(n))
    return BoolMatrix(n, rows)


def combined_mask(task: DagTask, analysis: GraphAnalysis) -> EdgeMask:
    """All four masks and their conjunction for the task's current state."""
    m_r = redundancy_mask(analysis.tc)
    m_c = cycle_mask(analysis.tc)
    m_l = length_mask(analysis.eft, analysis.lst)
    m_w = width_mask(analysis.lw, analysis.width)
    return EdgeMask(m_r, m_c, m_l, m_w, m_r & m_c & m_l & m_w)


def mask_to_ascii(mask: EdgeMask) -> str:
    """Labeled 0/1 grids of every mask, for test triage dumps."""
    parts = []
    for label, matrix in (
        ("redundancy", mask.m_r),
        ("cycle", mask.m_c),
        ("length", mask.m_l),
        ("width", mask.m_w),
        ("combined", mask.combined),
    ):
        parts.append(f"[{label}]\n{matrix.to_ascii()}")
    return "\n".join(parts)

"""Overlay edge sets built from bunches, and the additive/hop bounds they meet.

One overlay serves three roles at once: a (1+eps, beta*W)-emulator, a
(3+eps, beta*W)-emulator and a (3+eps, beta)-hopset.  It does not depend on
eps; only the bound does.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import IO, Iterable

from .errors import ParameterError
from .graph import Edge, Graph, HopBoundedResult, bellman_ford_bounded, write_gr
from .hierarchy import (
    BunchMap,
    LevelHierarchy,
    PivotTable,
    Schedule,
    compute_bunches,
    compute_pivots,
    sample_levels,
)


class OverlayKind(str, enum.Enum):
    EMULATOR = "emulator"
    HOPSET = "hopset"
    SPANNER = "spanner"


@dataclass(frozen=True)
class OverlayEdgeSet:
    n: int
    edges: tuple[Edge, ...]
    kind: OverlayKind
    params: dict = field(default_factory=dict, compare=False)

    def __len__(self) -> int:
        return len(self.edges)

    def to_graph(self) -> Graph:
        return Graph(self.n, self.edges)

    def header(self) -> str:
        extras = " ".join(f"{key}={val}" for key, val in self.params.items())
        return f"kind={self.kind.value}" + (f" {extras}" if extras else "")

    def write_gr(self, stream: IO[str]) -> None:
        write_gr(stream, self.n, self.edges, comments=[self.header()])


def dedupe_edges(pairs: Iterable[tuple[int, int, float]]) -> tuple[Edge, ...]:
    """One entry per unordered pair, keeping the minimum weight."""
    best: dict[tuple[int, int], float] = {}
    for u, v, w in pairs:
        if u == v:
            continue
        key = (u, v) if u < v else (v, u)
        if key not in best or w < best[key]:
            best[key] = w
    return tuple((u, v, w) for (u, v), w in sorted(best.items()))


def overlay_from_bunches(n: int, bunches: BunchMap) -> tuple[Edge, ...]:
    return dedupe_edges((u, e.v, e.d) for u, row in enumerate(bunches.entries) for e in row)


@dataclass
class EmulatorBuild:
    overlay: OverlayEdgeSet
    hierarchy: LevelHierarchy
    pivots: PivotTable
    bunches: BunchMap


def build_emulator_parts(g: Graph, k: int, seed: int) -> EmulatorBuild:
    if k < 1:
        raise ParameterError(f"k must be >= 1 (got {k})")
    h = sample_levels(g.n, k, Schedule.EMULATOR, seed)
    piv = compute_pivots(g, h)
    b = compute_bunches(g, h, piv, 1)
    params = {"k": k, "seed": seed, "schedule": Schedule.EMULATOR.value}
    overlay = OverlayEdgeSet(g.n, overlay_from_bunches(g.n, b), OverlayKind.EMULATOR, params)
    return EmulatorBuild(overlay, h, piv, b)


def build_emulator(g: Graph, k: int, seed: int) -> OverlayEdgeSet:
    """Emulator H = {(u, v) : v ∈ B(u)} weighted by exact G-distances."""
    return build_emulator_parts(g, k, seed).overlay


def as_hopset(h: OverlayEdgeSet) -> OverlayEdgeSet:
    return OverlayEdgeSet(h.n, h.edges, OverlayKind.HOPSET, dict(h.params))


class BetaVariant(str, enum.Enum):
    EMU_1EPS = "Emu1Eps"
    EMU_3EPS = "Emu3Eps"
    HOPSET_3EPS = "Hopset3Eps"
    SPAN_1EPS = "Span1Eps"
    SPAN_3EPS = "Span3Eps"


@dataclass(frozen=True)
class BetaParams:
    variant: BetaVariant
    k: int
    eps: Fraction
    delta_or_Delta: Fraction
    beta_exact: Fraction

    @property
    def beta(self) -> float:
        return float(self.beta_exact)

    @property
    def mult(self) -> Fraction:
        """Multiplicative stretch that pairs with this bound."""
        if self.variant in (BetaVariant.EMU_1EPS, BetaVariant.SPAN_1EPS):
            return 1 + self.eps
        return 3 + self.eps

    @property
    def hops(self) -> int:
        if self.variant is not BetaVariant.HOPSET_3EPS:
            raise AttributeError("hop count only defined for Hopset3Eps")
        return int(self.beta_exact)


def as_fraction(x: float | int | str | Fraction) -> Fraction:
    """Exact rational for a user-facing parameter; floats read as decimals."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ParameterError(f"non-finite parameter {x}")
        return Fraction(repr(x))
    return Fraction(x)


def beta_bound(
    variant: BetaVariant | str, k: int, eps: float | Fraction, check_range: bool = True
) -> BetaParams:
    """Closed-form beta taken from the proof constants of each guarantee.

    ``check_range=False`` evaluates the formula outside the range where the
    guarantee holds (eps = 1 for the 1+eps variants); eps > 0 and k >= 1 are
    always required.
    """
    variant = BetaVariant(variant)
    e = as_fraction(eps)
    if e <= 0:
        raise ParameterError(f"{variant.value}: eps must be > 0 (got {eps})")
    if k < 1:
        raise ParameterError(f"{variant.value}: k must be >= 1 (got {k})")
    if variant in (BetaVariant.EMU_1EPS, BetaVariant.SPAN_1EPS):
        if check_range and not e < 1:
            raise ParameterError(f"{variant.value}: requires 0 < eps < 1 (got {eps})")
        if check_range and k < 2:
            raise ParameterError(f"{variant.value}: requires integer k > 1 (got {k})")
        base = 3 if variant is BetaVariant.EMU_1EPS else 5
        coef = 4 if variant is BetaVariant.EMU_1EPS else 8
        big = base + coef * (k - 1) / e
        beta = 10 * (3 * big) ** (k - 1)
        return BetaParams(variant, k, e, big, beta)
    if variant is BetaVariant.EMU_3EPS:
        big = 3 + 8 / e
        return BetaParams(variant, k, e, big, 2 * (3 + e) * big ** (k - 1))
    if variant is BetaVariant.SPAN_3EPS:
        big = 5 + 16 / e
        return BetaParams(variant, k, e, big, 2 * (3 + e) * big ** (k - 1))
    # Hopset3Eps
    if check_range and e > 12:
        raise ParameterError(f"{variant.value}: requires 0 < eps <= 12 (got {eps})")
    small = e / (12 + 3 * e)
    hops = math.ceil(2 * (3 + 12 / e) ** (k - 1))
    return BetaParams(variant, k, e, small, Fraction(hops))


def union_edges(g: Graph, h: OverlayEdgeSet) -> tuple[Edge, ...]:
    return dedupe_edges(list(g.edges) + list(h.edges))


def hopset_distance(g: Graph, h: OverlayEdgeSet, source: int, beta: int) -> HopBoundedResult:
    """``beta``-round Bellman-Ford on G ∪ H."""
    if beta < 1:
        raise ParameterError(f"beta must be >= 1 (got {beta})")
    if h.n != g.n:
        raise ParameterError("overlay and graph disagree on vertex count")
    return bellman_ford_bounded(Graph(g.n, union_edges(g, h)), source, beta)


def load_overlay(stream: IO[str], default_kind: OverlayKind = OverlayKind.EMULATOR) -> OverlayEdgeSet:
    """Read an overlay ``.gr``; the ``c kind=...`` header sets kind and params."""
    from .graph import load_graph

    lines = list(stream)
    kind, params = default_kind, {}
    for line in lines:
        s = line.strip()
        if s.startswith("c") and "kind=" in s:
            for tok in s[1:].split():
                key, _, val = tok.partition("=")
                if key == "kind":
                    kind = OverlayKind(val)
                elif val:
                    params[key] = int(val) if val.lstrip("-").isdigit() else val
            break
    g = load_graph(lines)
    return OverlayEdgeSet(g.n, g.edges, kind, params)

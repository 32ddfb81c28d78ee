"""Randomized halving chains and budgeted approximate halfplane counting.

A chain over S keeps subsets S_0 = S ⊃ S_1 ⊃ ... with |S_j| = ceil(|S_{j-1}|/2),
stopping once a level has at most ``s_min`` points.  Level j+1 keeps one
uniformly random endpoint of every matching edge of level j plus the
unmatched point when the level is odd, so for any halfplane h the scaled
count 2^j * |h ∩ S_j| is an unbiased estimate of |h ∩ S| whose error grows
like 2^(3j/4) * n^(1/4) * sqrt(ln N).

``approx_count(h, i)`` answers within additive error i: exact from S_0 when
i <= n^(1/4), otherwise counted on the coarsest level whose error bound
C * 2^(3j/4) * n^(1/4) * sqrt(ln N) fits under i (natural log; C defaults
to 1).  Every build measures per-level error certificates against a probe
set; a level whose certificate exceeds its bound is never selected, which
degrades resolution but keeps the budget contract (max usable level only
shrinks).  Certificates, bounds and the calibrated constant are reported on
the chain.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .geometry import (
    Halfplane,
    Point,
    as_coord_array,
    halfplane_arrays,
    pair_halfplane_arrays,
)
from .lowcross import EdgeSet, matching_for_points, unmatched_ids
from .ptree import PartitionTree, build_partition_tree

__all__ = [
    "BudgetError",
    "ChainLevel",
    "HalvingChain",
    "halve",
    "build_chain",
    "approx_count",
    "random_pair_halfplanes",
    "save_chain",
    "load_chain",
]

DEFAULT_S_MIN = 16
CHAIN_FORMAT_VERSION = 1


class BudgetError(ValueError):
    """The error budget i is outside [0, n]."""


def halve(matching: EdgeSet, ids: Sequence[int] | np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """One halving step: keep a uniform endpoint per matching edge and every
    unmatched id.  Returns sorted original indices."""
    u, v = matching.endpoint_arrays()
    if len(u):
        pick = rng.integers(0, 2, size=len(u))
        kept = np.where(pick == 0, u, v)
    else:
        kept = np.empty(0, dtype=np.int64)
    rest = np.asarray(unmatched_ids(matching, ids), dtype=np.int64)
    return np.sort(np.concatenate([kept, rest]))


@dataclass
class ChainLevel:
    j: int
    ids: np.ndarray
    tree: PartitionTree
    matching: EdgeSet | None
    bound: float
    certificate: float | None = None
    usable: bool = True

    @property
    def size(self) -> int:
        return len(self.ids)


@dataclass
class HalvingChain:
    points: list[Point]
    coords: np.ndarray
    n: int
    N: int
    C: float
    s_min: int
    seed: int
    levels: list[ChainLevel]
    calibrated_c: float = 0.0
    probe_kind: str = ""
    _force_level: int | None = field(default=None, repr=False)

    @property
    def max_usable_level(self) -> int:
        best = 0
        for lv in self.levels[1:]:
            if not lv.usable:
                break
            best = lv.j
        return best

    def level_for_budget(self, i: int) -> int:
        """Level the budget rule selects for error budget i.

        Level 0 is exact, hence always admissible; it is the answer both for
        i <= n^(1/4) and when no coarser level's bound fits under i.
        """
        if not 0 <= i <= self.n:
            raise BudgetError(f"error budget {i} outside [0, {self.n}]")
        if self._force_level is not None:
            # Test hook: fault injection for the negative control, which
            # disables the budget contract on purpose.
            return self._force_level
        if i <= self.n ** 0.25:
            return 0
        j = 0
        for lv in self.levels[1 : self.max_usable_level + 1]:
            if lv.bound <= i:
                j = lv.j
            else:
                break
        return j

    def approx_count(self, h: Halfplane, i: int) -> int:
        return self.approx_count_with_cost(h, i)[0]

    def approx_count_with_cost(self, h: Halfplane, i: int) -> tuple[int, int, int]:
        """(estimate, nodes visited, level used).  |estimate - |h∩S|| <= i."""
        j = self.level_for_budget(i)
        cnt, visited = self.levels[j].tree.count_with_cost(h)
        return min(self.n, cnt << j), visited, j

    def approx_count_many(
        self,
        coeffs: Sequence[Halfplane] | tuple[np.ndarray, np.ndarray, np.ndarray],
        i: int,
    ) -> tuple[np.ndarray, np.ndarray, int]:
        """Batched approx_count at one budget: (estimates, visits, level)."""
        j = self.level_for_budget(i)
        cnt, visited = self.levels[j].tree.count_many(coeffs)
        return np.minimum(self.n, cnt << j), visited, j

    def exact_count(self, h: Halfplane) -> int:
        return self.levels[0].tree.count(h)

    # -- serialization ---------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "version": CHAIN_FORMAT_VERSION,
            "seed": self.seed,
            "n": self.n,
            "N": self.N,
            "C": self.C,
            "s_min": self.s_min,
            "calibrated_c": self.calibrated_c,
            "probe_kind": self.probe_kind,
            "levels": [
                {
                    "j": lv.j,
                    "ids": [int(v) for v in lv.ids],
                    "bound": lv.bound,
                    "certificate": lv.certificate,
                    "usable": lv.usable,
                }
                for lv in self.levels
            ],
        }

    @classmethod
    def from_dict(cls, points: Sequence[Point], doc: dict) -> "HalvingChain":
        if doc.get("version") != CHAIN_FORMAT_VERSION:
            raise ValueError(f"unsupported chain format version {doc.get('version')!r}")
        if doc["n"] != len(points):
            raise ValueError(f"chain built over {doc['n']} points, got {len(points)}")
        coords = as_coord_array(points)
        levels: list[ChainLevel] = []
        for entry in doc["levels"]:
            ids = np.asarray(entry["ids"], dtype=np.int64)
            matching, tree = matching_for_points(coords, ids)
            levels.append(
                ChainLevel(
                    j=int(entry["j"]),
                    ids=ids,
                    tree=tree,
                    matching=matching,
                    bound=float(entry["bound"]),
                    certificate=entry["certificate"],
                    usable=bool(entry["usable"]),
                )
            )
        return cls(
            points=list(points),
            coords=coords,
            n=doc["n"],
            N=doc["N"],
            C=doc["C"],
            s_min=doc["s_min"],
            seed=doc["seed"],
            levels=levels,
            calibrated_c=doc.get("calibrated_c", 0.0),
            probe_kind=doc.get("probe_kind", ""),
        )


def _level_bound(C: float, j: int, n: int, N: int) -> float:
    return C * 2.0 ** (0.75 * j) * n**0.25 * math.sqrt(math.log(N))


def random_pair_halfplanes(
    points: Sequence[Point] | np.ndarray,
    k: int,
    rng: np.random.Generator,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """k closed halfplanes bounded by random point pairs, with a random side
    and a random epsilon shift (c or c-1), as coefficient arrays."""
    coords = points if isinstance(points, np.ndarray) else as_coord_array(points)
    n = len(coords)
    ii = rng.integers(0, n, size=k)
    jj = rng.integers(0, n - 1, size=k)
    jj = np.where(jj >= ii, jj + 1, jj)
    a, b, c = pair_halfplane_arrays(coords, ii, jj, shift=rng.integers(0, 2, size=k))
    flip = rng.integers(0, 2, size=k) == 1
    sgn = np.where(flip, -1, 1)
    return a * sgn, b * sgn, c * sgn


def _certificate_probes(
    coords: np.ndarray, seed: int, cert_probes: int
) -> tuple[tuple[np.ndarray, np.ndarray, np.ndarray], str]:
    n = len(coords)
    if n <= 64:
        ii, jj = np.triu_indices(n, k=1)
        pos = pair_halfplane_arrays(coords, ii, jj)
        neg = pair_halfplane_arrays(coords, ii, jj, flip=True)
        coeffs = tuple(np.concatenate([p, q]) for p, q in zip(pos, neg))
        return coeffs, "pairs-exhaustive"
    rng = np.random.default_rng([seed, 1])
    return random_pair_halfplanes(coords, cert_probes, rng), "pairs-random"


def build_chain(
    points: Sequence[Point],
    N: int | None = None,
    C: float = 1.0,
    s_min: int = DEFAULT_S_MIN,
    seed: int = 0,
    cert_probes: int = 1000,
) -> HalvingChain:
    """Build the chain, its per-level trees and matchings, and certify levels.

    N is the error-probability scale (default n^2: comfortably more than the
    count queries a majority test issues).  The halving randomness and the
    certificate probe set derive from ``seed`` deterministically.
    """
    pts = list(points)
    n = len(pts)
    if n < 1:
        raise ValueError("chain needs at least one point")
    if s_min < 1:
        raise ValueError("s_min must be positive")
    if N is None:
        N = max(2, n * n)
    if N < 2:
        raise ValueError("N must be at least 2")
    coords = as_coord_array(pts)
    rng = np.random.default_rng([seed, 0])

    levels: list[ChainLevel] = []
    ids = np.arange(n, dtype=np.int64)
    j = 0
    while True:
        matching, tree = matching_for_points(coords, ids)
        levels.append(
            ChainLevel(j=j, ids=ids, tree=tree, matching=matching, bound=_level_bound(C, j, n, N))
        )
        if len(ids) <= s_min:
            break
        ids = halve(matching, ids, rng)
        j += 1

    probes, probe_kind = _certificate_probes(coords, seed, cert_probes)
    truth, _ = levels[0].tree.count_many(probes)
    levels[0].certificate = 0.0
    calibrated = 0.0
    for lv in levels[1:]:
        est, _ = lv.tree.count_many(probes)
        cert = float(np.abs((est << lv.j) - truth).max(initial=0))
        lv.certificate = cert
        denom = _level_bound(1.0, lv.j, n, N)
        calibrated = max(calibrated, cert / denom)
        lv.usable = cert <= lv.bound
    # Conservative degradation: a level past a failed certificate is never
    # used even if its own certificate passes.
    failed = False
    for lv in levels[1:]:
        failed = failed or not lv.usable
        lv.usable = lv.usable and not failed

    return HalvingChain(
        points=pts,
        coords=coords,
        n=n,
        N=N,
        C=C,
        s_min=s_min,
        seed=seed,
        levels=levels,
        calibrated_c=calibrated,
        probe_kind=probe_kind,
    )


def approx_count(chain: HalvingChain, h: Halfplane, i: int) -> int:
    return chain.approx_count(h, i)


def save_chain(chain: HalvingChain, path: str) -> None:
    with open(path, "w", encoding="ascii") as fh:
        json.dump(chain.to_dict(), fh)
        fh.write("\n")


def load_chain(path: str, points: Sequence[Point]) -> HalvingChain:
    with open(path, "r", encoding="ascii") as fh:
        doc = json.load(fh)
    return HalvingChain.from_dict(points, doc)

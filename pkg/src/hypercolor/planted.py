"""Planted non-uniform bipartite (and k-partite) hypergraph model.

Vertices ``1..k*n`` are split into ``k`` contiguous blocks of size ``n``;
block ``c`` gets planted color ``c``. Every non-monochromatic subset of size
``m`` (``2 <= m <= M``) becomes an edge independently with probability
``p[m]``; monochromatic subsets never do.

Randomness comes from numpy's PCG64 generator. Each edge size gets its own
stream seeded with ``SeedSequence([seed, m, strategy])`` so a sample does not
depend on which other sizes were drawn or in what order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Mapping, NamedTuple, Sequence

import numpy as np

from .exceptions import ContractError, ParseError
from .hypergraph import Coloring, Hypergraph

__all__ = [
    "PlantedParams",
    "binom",
    "cross_subset_count",
    "sample",
    "planted_coloring",
    "expected_edge_count",
    "density_coefficient",
    "probs_for_density",
    "profile_weights",
    "DensityProbs",
    "ENUMERATION_CUTOFF",
]

# Above this many candidate subsets of one size, switch from per-subset
# Bernoulli draws to binomial count + rejection sampling.
ENUMERATION_CUTOFF = 10**6

_STRATEGY_CODES = {"enumerate": 0, "rejection": 1}


def binom(a: int, b: int) -> int:
    """Binomial coefficient with ``C(a, b) = 0`` when ``a < 0`` or ``b`` outside ``[0, a]``."""
    if a < 0 or b < 0 or b > a:
        return 0
    return math.comb(a, b)


@dataclass(frozen=True)
class PlantedParams:
    """Parameters of the planted model.

    ``p`` holds ``(p_2, ..., p_M)``; a mapping ``{m: p_m}`` is also accepted,
    with missing sizes treated as 0.
    """

    n: int
    M: int
    p: tuple[float, ...]
    k: int = 2
    seed: int = 0

    def __post_init__(self):
        if isinstance(self.p, Mapping):
            probs = tuple(float(self.p.get(m, 0.0)) for m in range(2, self.M + 1))
        else:
            probs = tuple(float(x) for x in self.p)
        object.__setattr__(self, "p", probs)
        if self.M < 2:
            raise ContractError(f"M must be at least 2, got {self.M}")
        if self.n < 1:
            raise ContractError(f"n must be at least 1, got {self.n}")
        if self.k < 2:
            raise ContractError(f"k must be at least 2, got {self.k}")
        if self.k * self.n < self.M:
            raise ContractError(f"k*n = {self.k * self.n} is smaller than M = {self.M}")
        if len(probs) != self.M - 1:
            raise ContractError(f"expected {self.M - 1} probabilities p_2..p_M, got {len(probs)}")
        for m, pm in zip(range(2, self.M + 1), probs):
            if not 0.0 <= pm <= 1.0:
                raise ContractError(f"p_{m} = {pm} is outside [0, 1]")
        if not 0 <= self.seed < 2**64:
            raise ContractError("seed must be a 64-bit unsigned integer")

    @property
    def num_vertices(self) -> int:
        return self.k * self.n

    def prob(self, m: int) -> float:
        if 2 <= m <= self.M:
            return self.p[m - 2]
        return 0.0

    def sizes(self):
        return range(2, self.M + 1)

    def with_seed(self, seed: int) -> "PlantedParams":
        return PlantedParams(self.n, self.M, self.p, self.k, seed)

    def to_text(self) -> str:
        """Flat ``key=value`` block: n, k, M, p2..pM, seed."""
        lines = [f"n={self.n}", f"k={self.k}", f"M={self.M}"]
        lines += [f"p{m}={self.prob(m)!r}" for m in self.sizes()]
        lines.append(f"seed={self.seed}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "PlantedParams":
        values = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ParseError(f"expected key=value, got {line!r}", lineno)
            values[key.strip()] = value.strip()
        try:
            M = int(values["M"])
            p = {m: float(values.get(f"p{m}", 0.0)) for m in range(2, M + 1)}
            return cls(
                n=int(values["n"]),
                M=M,
                p=p,
                k=int(values.get("k", 2)),
                seed=int(values.get("seed", 0)),
            )
        except KeyError as exc:
            raise ParseError(f"missing key {exc.args[0]}") from None
        except ValueError as exc:
            raise ParseError(str(exc)) from None


def cross_subset_count(n: int, k: int, m: int) -> int:
    """Number of non-monochromatic ``m``-subsets of ``k`` blocks of size ``n``."""
    return binom(k * n, m) - k * binom(n, m)


def planted_coloring(params: PlantedParams) -> Coloring:
    return Coloring(np.repeat(np.arange(params.k), params.n), k=params.k)


@lru_cache(maxsize=8)
def _cross_subsets(n: int, k: int, m: int) -> np.ndarray:
    # Lexicographic list of non-monochromatic m-subsets (0-based), read-only.
    N = k * n
    if m == 2:
        rows, cols = np.triu_indices(N, 1)
        subsets = np.stack([rows, cols], axis=1)
    else:
        flat = np.fromiter(
            (v for combo in combinations(range(N), m) for v in combo),
            dtype=np.int64,
            count=binom(N, m) * m,
        )
        subsets = flat.reshape(-1, m)
    blocks = subsets // n
    cross = subsets[(blocks != blocks[:, :1]).any(axis=1)]
    cross = np.ascontiguousarray(cross, dtype=np.int64)
    cross.setflags(write=False)
    return cross


def _rng(seed: int, m: int, strategy: str) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, m, _STRATEGY_CODES[strategy]]))


def _sample_enumerate(n, k, m, pm, rng):
    subsets = _cross_subsets(n, k, m)
    keep = rng.random(subsets.shape[0]) < pm
    return subsets[keep]


def _sample_rejection(n, k, m, pm, rng):
    N = k * n
    total = cross_subset_count(n, k, m)
    count = int(rng.binomial(total, pm))
    chosen: dict[tuple[int, ...], None] = {}
    while len(chosen) < count:
        batch = max(64, 2 * (count - len(chosen)))
        draws = rng.integers(0, N, size=(batch, m))
        draws.sort(axis=1)
        distinct = (np.diff(draws, axis=1) != 0).all(axis=1)
        blocks = draws // n
        cross = (blocks != blocks[:, :1]).any(axis=1)
        for row in draws[distinct & cross]:
            key = tuple(row.tolist())
            if key not in chosen:
                chosen[key] = None
                if len(chosen) == count:
                    break
    if not chosen:
        return np.empty((0, m), dtype=np.int64)
    out = np.array(sorted(chosen), dtype=np.int64)
    return out


def sample(params: PlantedParams, strategy: str = "auto") -> tuple[Hypergraph, Coloring]:
    """Draw a hypergraph from the planted model together with its planted coloring.

    ``strategy`` is ``"auto"`` (enumerate up to :data:`ENUMERATION_CUTOFF`
    candidates per size, rejection sampling above), ``"enumerate"`` or
    ``"rejection"``. Both strategies have the same distribution but consume
    randomness differently, so they give different samples for the same seed.
    Edges come out grouped by size, each group in lexicographic order.
    """
    if strategy not in ("auto", "enumerate", "rejection"):
        raise ContractError(f"unknown sampling strategy {strategy!r}")
    n, k = params.n, params.k
    edges: list[tuple[int, ...]] = []
    for m in params.sizes():
        pm = params.prob(m)
        if pm == 0.0:
            continue
        chosen = strategy
        if chosen == "auto":
            chosen = "enumerate" if cross_subset_count(n, k, m) <= ENUMERATION_CUTOFF else "rejection"
        rng = _rng(params.seed, m, chosen)
        if chosen == "enumerate":
            picked = _sample_enumerate(n, k, m, pm, rng)
        else:
            picked = _sample_rejection(n, k, m, pm, rng)
        edges.extend(tuple(row) for row in (picked + 1).tolist())
    h = Hypergraph._trusted(params.num_vertices, edges)
    return h, planted_coloring(params)


def expected_edge_count(params: PlantedParams) -> float:
    """Exact expected number of edges, counting only non-monochromatic subsets.

    The threshold condition is usually quoted with ``C(k n, m)`` in place of
    the exact cross-subset count; for ``k = 2`` the ratio of the two is
    between ``1 - 2**(1 - m)`` and 1.
    """
    return float(sum(params.prob(m) * cross_subset_count(params.n, params.k, m) for m in params.sizes()))


def density_coefficient(params: PlantedParams) -> float:
    """The ``d`` with ``sum_m p_m C(k n, m) = d n ln n``.

    For ``k = 2`` this is the constant of the 2-coloring threshold; for larger
    ``k`` the same form is used with ``k n`` vertices and class size ``n``.
    """
    n = params.n
    if n < 2:
        raise ContractError(f"density coefficient needs n >= 2 (ln n > 0), got n = {n}")
    total = sum(params.prob(m) * binom(params.k * n, m) for m in params.sizes())
    return float(total / (n * math.log(n)))


class DensityProbs(NamedTuple):
    p: tuple[float, ...]
    clamped: bool


def profile_weights(profile: str | Sequence[float], M: int) -> tuple[float, ...]:
    """Per-size weights ``(w_2, ..., w_M)``.

    ``"equal"`` spreads the density evenly over sizes 2..M, ``"pairs-only"``
    puts it all on ``m = 2``. A sequence is validated and used as is.
    """
    if isinstance(profile, str):
        if profile == "equal":
            return tuple([1.0 / (M - 1)] * (M - 1))
        if profile == "pairs-only":
            return (1.0,) + (0.0,) * (M - 2)
        raise ContractError(f"unknown profile {profile!r}; use 'equal' or 'pairs-only'")
    weights = tuple(float(w) for w in profile)
    if len(weights) != M - 1:
        raise ContractError(f"expected {M - 1} weights w_2..w_M, got {len(weights)}")
    if any(w < 0 for w in weights) or not math.isclose(sum(weights), 1.0, rel_tol=1e-9):
        raise ContractError("profile weights must be nonnegative and sum to 1")
    return weights


def probs_for_density(
    n: int, M: int, d: float, profile: str | Sequence[float] = "equal", k: int = 2
) -> DensityProbs:
    """Inverse of :func:`density_coefficient` for a given size profile.

    ``p_m = min(1, w_m d n ln n / C(k n, m))``. ``clamped`` is true when some
    ``p_m`` hit 1, in which case the requested density is not reachable.
    """
    if d < 0:
        raise ContractError(f"density must be nonnegative, got {d}")
    if n < 2:
        raise ContractError(f"probs_for_density needs n >= 2, got n = {n}")
    weights = profile_weights(profile, M)
    target = d * n * math.log(n)
    probs = []
    clamped = False
    for m, w in zip(range(2, M + 1), weights):
        denom = binom(k * n, m)
        raw = w * target / denom if denom else 0.0
        if raw > 1.0:
            clamped = True
            raw = 1.0
        probs.append(raw)
    return DensityProbs(tuple(probs), clamped)

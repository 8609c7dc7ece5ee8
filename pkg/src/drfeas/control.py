"""Control sequences selecting set (or operator) indices per iteration.

A control map sends step numbers n = 0, 1, ... to indices in {1, ..., m}.
Three constructors are provided, each surjective by construction:

* ``Cyclic(m)``: n -> n mod m + 1.
* ``Explicit(prefix)``: a finite surjective prefix repeated forever.
* ``RandomBlock(m, M, seed)``: every aligned block of M consecutive steps
  contains all of {1, ..., m}, with uniformly random layout otherwise.

``is_quasi_periodic`` verifies M-quasi-periodicity (every window of M
consecutive values covers the full range) over a finite horizon only; it is
a check, not a proof over all of N. The constructors above carry a
``quasi_period`` for which the property holds by construction.

Note on indexing: iterates and windows count steps from n = 0, while the
cover index scans arguments starting at 1 (the covering set is {1, ..., j});
both conventions are kept as-is, so cover_index(Cyclic(m)) == m.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from functools import lru_cache

import numpy as np


class InvalidControl(ValueError):
    """Control parameters or usage violate an invariant."""


class ControlMap(ABC):
    """Deterministic mapping from step numbers onto {1, ..., m}."""

    __slots__ = ()

    #: size of the index range {1, ..., m}
    m: int
    #: an M for which the map is M-quasi-periodic by construction
    quasi_period: int

    @abstractmethod
    def index_at(self, n: int) -> int:
        """Index selected at step n >= 0."""

    def _require_step(self, n: int) -> int:
        n = int(n)
        if n < 0:
            raise InvalidControl("step number must be nonnegative")
        return n


class Cyclic(ControlMap):
    """Round-robin control: n -> n mod m + 1."""

    __slots__ = ("m", "quasi_period")

    def __init__(self, m: int) -> None:
        if int(m) < 1:
            raise InvalidControl("range size m must be a positive integer")
        self.m = int(m)
        self.quasi_period = self.m

    def index_at(self, n: int) -> int:
        return self._require_step(n) % self.m + 1

    def __repr__(self) -> str:
        return f"Cyclic({self.m})"


class Explicit(ControlMap):
    """A finite prefix of indices repeated cyclically forever.

    The prefix must itself be surjective onto {1, ..., max(prefix)}.
    """

    __slots__ = ("prefix", "m", "quasi_period")

    def __init__(self, prefix) -> None:
        prefix = tuple(int(i) for i in prefix)
        if not prefix:
            raise InvalidControl("prefix must be nonempty")
        if min(prefix) < 1:
            raise InvalidControl("indices must be >= 1")
        m = max(prefix)
        if set(prefix) != set(range(1, m + 1)):
            raise InvalidControl(
                f"prefix must cover all of 1..{m}, got values {sorted(set(prefix))}"
            )
        self.prefix = prefix
        self.m = m
        # any len(prefix) consecutive steps cover one full period
        self.quasi_period = len(prefix)

    def index_at(self, n: int) -> int:
        return self.prefix[self._require_step(n) % len(self.prefix)]

    def __repr__(self) -> str:
        return f"Explicit({list(self.prefix)})"


@lru_cache(maxsize=1024)
def _block_pattern(m: int, M: int, seed: int, block: int) -> tuple[int, ...]:
    # Counter-based: each block's content depends only on (seed, block), so
    # lookups are order-independent and need no shared RNG state.
    rng = np.random.default_rng([seed, block])
    vals = np.concatenate(
        [rng.permutation(m) + 1, rng.integers(1, m + 1, size=M - m)]
    )
    rng.shuffle(vals)
    return tuple(int(v) for v in vals)


class RandomBlock(ControlMap):
    """Random control that is quasi-periodic by construction.

    Each aligned block of M steps holds a random permutation of {1, ..., m}
    plus M - m uniform indices, shuffled within the block. Deterministic for
    a fixed seed. Sliding windows of length 2M - 1 always contain a whole
    aligned block, so the map is (2M - 1)-quasi-periodic.
    """

    __slots__ = ("m", "M", "seed", "quasi_period")

    def __init__(self, m: int, M: int, seed: int) -> None:
        if int(m) < 1:
            raise InvalidControl("range size m must be a positive integer")
        if int(M) < int(m):
            raise InvalidControl("block length M must satisfy M >= m")
        if int(seed) < 0:
            raise InvalidControl("seed must be a nonnegative integer")
        self.m = int(m)
        self.M = int(M)
        self.seed = int(seed)
        self.quasi_period = 2 * self.M - 1

    def index_at(self, n: int) -> int:
        n = self._require_step(n)
        block, pos = divmod(n, self.M)
        return _block_pattern(self.m, self.M, self.seed, block)[pos]

    def __repr__(self) -> str:
        return f"RandomBlock(m={self.m}, M={self.M}, seed={self.seed})"


def window(f: ControlMap, r: int, n: int) -> list[int]:
    """The r indices selected at step n: f((r-1)n + j - 1) for j = 1..r.

    Consecutive windows overlap because the stride is r - 1.
    """
    r = int(r)
    if r <= 1:
        raise InvalidControl("window width r must be an integer greater than 1")
    n = int(n)
    if n < 0:
        raise InvalidControl("step number must be nonnegative")
    base = (r - 1) * n
    return [f.index_at(base + j) for j in range(r)]


def cover_index(f: ControlMap) -> int:
    """Smallest j >= 1 such that {f(1), ..., f(j)} is all of {1, ..., m}.

    The scan starts at argument 1, not 0. A cap of min(10*m*quasi_period,
    10^6) guards against maps whose early arguments never cover the range.
    """
    target = set(range(1, f.m + 1))
    seen: set[int] = set()
    cap = min(10 * f.m * f.quasi_period, 10**6)
    for j in range(1, cap + 1):
        seen.add(f.index_at(j))
        if seen == target:
            return j
    raise InvalidControl(
        f"arguments 1..{cap} never cover 1..{f.m}; control looks non-surjective"
    )


def is_quasi_periodic(f: ControlMap, M: int, horizon: int) -> bool:
    """Check whether every length-M window within the horizon covers 1..m.

    Finite-horizon verification only: a True verdict holds for windows
    starting at n = 0, ..., horizon - M, not for all of N.
    """
    M = int(M)
    if M < 1:
        raise InvalidControl("M must be a positive integer")
    if int(horizon) < M:
        raise InvalidControl("horizon must be at least M")
    target = set(range(1, f.m + 1))
    values = [f.index_at(n) for n in range(int(horizon))]
    for start in range(int(horizon) - M + 1):
        if set(values[start : start + M]) != target:
            return False
    return True


def windows_quasi_periodic(f: ControlMap, r: int, M: int, horizon: int) -> bool:
    """Quasi-periodicity of the window sequence n -> window(f, r, n).

    Windows are compared as ordered index tuples. Every length-M run of
    consecutive steps within the horizon must contain every distinct window
    tuple that occurs anywhere in the horizon.
    """
    M = int(M)
    if M < 1:
        raise InvalidControl("M must be a positive integer")
    if int(horizon) < M:
        raise InvalidControl("horizon must be at least M")
    tuples = [tuple(window(f, r, n)) for n in range(int(horizon))]
    universe = set(tuples)
    for start in range(int(horizon) - M + 1):
        if set(tuples[start : start + M]) != universe:
            return False
    return True

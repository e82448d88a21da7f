"""Two constructive attacks on commitment schemes.

1. A hiding attack on any classical commitment scheme whose parties share
   a sampling oracle: the receiver redraws oracle samples and brute-forces
   a secret consistent with opening the commitment to 0.
2. An equivocation (binding) attack on the shared-compressed-oracle
   commitment: a committer who holds the oracle database commits to 0
   honestly, then manufactures a decommitment to 1 by decompressing its
   own queries and sending the matching database value registers.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Optional

import numpy as np


# -- classical scheme & hiding attack ------------------------------------------


@dataclass
class ClassicalScheme:
    """A classical commitment with all randomness drawn from a shared sampler."""

    secret_bits: int
    sample_bits: int
    commit_fn: Callable[[int, int], int]
    reveal_fn: Callable[[int, int, int, int], bool]
    sampler: Callable[[np.random.Generator], int]
    # optional vectorized reveal over an array of candidate secrets
    reveal_vec: Optional[Callable[[np.ndarray, int, int, int], np.ndarray]] = None


def toy_classical_scheme(k: int, seed, shift: Optional[int] = None) -> ClassicalScheme:
    """Random-table commitment: commit(s, b) = G(s) XOR (b * z).

    G maps k bits to 3k bits, so openings to both bits coexist only with
    probability about 2^{2k}/2^{3k} over the table. Pass shift=0 for the
    degenerate non-hiding-yet-unattackable variant.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    out_bits = 3 * k
    table = rng.integers(0, 1 << out_bits, size=1 << k, dtype=np.int64)
    z = int(rng.integers(0, 1 << out_bits)) if shift is None else int(shift)

    def commit_fn(s: int, b: int) -> int:
        return int(table[s]) ^ (z if b else 0)

    def reveal_fn(s: int, b: int, tau: int, r: int) -> bool:
        return commit_fn(s, b) == tau

    def reveal_vec(secrets: np.ndarray, b: int, tau: int, r: int) -> np.ndarray:
        return (table[secrets] ^ (z if b else 0)) == tau

    def sampler(gen: np.random.Generator) -> int:
        return int(gen.integers(0, 1 << out_bits))

    return ClassicalScheme(
        secret_bits=k,
        sample_bits=out_bits,
        commit_fn=commit_fn,
        reveal_fn=reveal_fn,
        sampler=sampler,
        reveal_vec=reveal_vec,
    )


@dataclass
class AttackReport:
    trials: int
    seed: int
    advantage: float
    guess0_rate_b0: float
    guess0_rate_b1: float
    elapsed: float = field(compare=False, default=0.0)


def classical_hiding_attack(
    scheme: ClassicalScheme,
    trials: int,
    seed: int,
    num_samples: Optional[int] = None,
    search_cap_bits: int = 16,
) -> AttackReport:
    """Guess the committed bit by searching for a secret that opens to 0.

    Per trial: commit to a random bit, redraw sample_bits + 1 oracle
    samples, and predict 0 exactly when some secret s0 passes
    reveal(s0, 0, tau, r_i) for every redrawn sample (exhaustive search
    standing in for an NP oracle).
    """
    if scheme.secret_bits > search_cap_bits:
        raise ValueError(
            f"search space 2^{scheme.secret_bits} exceeds cap 2^{search_cap_bits}"
        )
    draws = num_samples if num_samples is not None else scheme.sample_bits + 1
    rng = np.random.default_rng(seed)
    secrets = np.arange(1 << scheme.secret_bits, dtype=np.int64)
    start = time.perf_counter()
    counts = {0: [0, 0], 1: [0, 0]}  # b -> [trials, predicted-0]
    for _ in range(trials):
        b = int(rng.integers(2))
        s = int(rng.integers(0, 1 << scheme.secret_bits))
        tau = scheme.commit_fn(s, b)
        alive = np.ones(len(secrets), dtype=bool)
        for _ in range(draws):
            r = scheme.sampler(rng)
            if not alive.any():
                break
            if scheme.reveal_vec is not None:
                alive &= scheme.reveal_vec(secrets, 0, tau, r)
            else:
                alive &= np.array(
                    [scheme.reveal_fn(int(s0), 0, tau, r) for s0 in secrets]
                )
        predict0 = bool(alive.any())
        counts[b][0] += 1
        counts[b][1] += int(predict0)
    elapsed = time.perf_counter() - start
    rate0 = counts[0][1] / counts[0][0] if counts[0][0] else 0.0
    rate1 = counts[1][1] / counts[1][0] if counts[1][0] else 0.0
    return AttackReport(
        trials=trials,
        seed=seed,
        advantage=abs(rate0 - rate1),
        guess0_rate_b0=rate0,
        guess0_rate_b1=rate1,
        elapsed=elapsed,
    )


# -- equivocation attack ---------------------------------------------------------


@dataclass(frozen=True)
class EquivocationResult:
    n_bits: int
    m_bits: int
    folds: int
    p0: float
    p1: float
    abort_prob: float
    p1_nonaborting: float


def equivocation_attack(n_bits: int, m_bits: int, folds: int, seed: int = 0) -> EquivocationResult:
    """Exact accept probabilities for the decompress-and-equivocate committer.

    Model: committer and receiver share a compressed oracle. At commit
    time the committer queries once per fold on a uniform preimage register
    and sends the image halves; the receiver mints one reference copy per
    fold the same way (needed to verify a 0-opening). p0 = 1 exactly.

    To open to 1 the committer measures its preimage registers x_1..x_t
    (aborting variant: abort unless all distinct), decompresses each
    database entry, and sends the entry's value register: that register is
    exactly maximally entangled with the sent image half unless a receiver
    reference copy collides on the same preimage, which degrades that
    fold's SWAP test to (1 + 1/M)/2. Both variants are computed by exact
    enumeration over preimage/reference collision patterns; the seed is
    recorded for report plumbing only (no sampling happens).
    """
    t = folds
    big_n = 1 << n_bits
    big_m = 1 << m_bits
    if big_n**t * (t + 1) ** t > 5_000_000:
        raise ValueError("fold count too large for exact enumeration")
    hit = (1.0 + 1.0 / big_m) / 2.0        # a reference copy shares the preimage
    dup = (1.0 + 1.0 / big_m**2) / 2.0     # duplicated fold sends |0...0| instead

    def ref_average(xs: tuple[int, ...]) -> float:
        """Average over reference-copy preimages of the per-fold product."""
        total = 0.0
        # each of the t reference copies hits a given committed preimage
        # with probability 1/N, independently; enumerate hit patterns
        distinct = sorted(set(xs))
        options = [None] + distinct  # None = no collision
        probs = {None: 1.0 - len(distinct) / big_n}
        for x in distinct:
            probs[x] = 1.0 / big_n
        for assign in product(options, repeat=t):
            p = 1.0
            for a in assign:
                p *= probs[a]
            hit_set = set(a for a in assign if a is not None)
            acc = 1.0
            seen: set[int] = set()
            for x in xs:
                if x in seen:
                    acc *= dup
                elif xs.count(x) > 1 or x in hit_set:
                    # entangled with a duplicate fold's image or a reference
                    acc *= hit
                else:
                    acc *= 1.0
                seen.add(x)
            total += p * acc
        return total

    # aborting variant: condition on distinct committed preimages
    no_collision = 1.0
    for i in range(t):
        no_collision *= (big_n - i) / big_n
    abort_prob = 1.0 - no_collision

    distinct_total = 0.0
    distinct_weight = 0.0
    all_total = 0.0
    for xs in product(range(big_n), repeat=t):
        w = 1.0 / big_n**t
        val = ref_average(xs)
        all_total += w * val
        if len(set(xs)) == t:
            distinct_total += w * val
            distinct_weight += w
    p1 = distinct_total / distinct_weight if distinct_weight else 0.0
    return EquivocationResult(
        n_bits=n_bits,
        m_bits=m_bits,
        folds=folds,
        p0=1.0,
        p1=p1,
        abort_prob=abort_prob,
        p1_nonaborting=all_total,
    )

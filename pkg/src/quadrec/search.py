"""Resumable prime-range searches with append-only JSON-line checkpoints.

A checkpoint file holds one record per flush; only the last parseable line
matters on resume (a torn final line from a crash is skipped).  Records are
serialized with sorted keys and no whitespace so that an interrupted-and-
resumed scan finishes with a final record byte-identical to a straight run.
"""
from __future__ import annotations

import hashlib
import json
import math
import os
import time
from dataclasses import dataclass
from typing import Callable, Iterator, Optional

from .errors import CheckpointError, UsageError
from .ring import prime_ideals_above, primes_below, quad_valuation, quadratic_field
from .wieferich import fermat_quotient_residue, wall_period_test, wss_divisibility_test

CHECKPOINT_VERSION = 1


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def iter_primes(lo: int, hi: int, segment: int = 1 << 16) -> Iterator[int]:
    """Primes in [lo, hi) via a segmented sieve; memory stays O(segment)."""
    lo = max(lo, 2)
    if lo >= hi:
        return
    base = primes_below(math.isqrt(hi - 1) + 1)
    for start in range(lo, hi, segment):
        end = min(start + segment, hi)
        marks = bytearray([1]) * (end - start)
        for p in base:
            if p * p >= end:
                break
            first = max(p * p, (start + p - 1) // p * p)
            marks[first - start::p] = bytearray(len(range(first, end, p)))
        for i, ok in enumerate(marks):
            if ok:
                yield start + i


@dataclass(frozen=True)
class SearchPredicate:
    """A named prime test: test(p) returns a hit record dict or None.

    name and params feed the config hash, so two scans are resumable into
    each other exactly when these match.  verify re-checks a stored hit.
    """

    name: str
    params: dict
    test: Callable[[int], Optional[dict]]
    verify: Callable[[dict], bool]


@dataclass
class SearchCheckpoint:
    lo: int
    hi: int
    cursor: int
    hits: list
    primes_scanned: int
    config_hash: str
    elapsed: float = 0.0  # informational only, never serialized

    def record(self) -> dict:
        return {
            "version": CHECKPOINT_VERSION,
            "config_hash": self.config_hash,
            "range": [self.lo, self.hi],
            "cursor": self.cursor,
            "hits": self.hits,
            "stats": {"primes_scanned": self.primes_scanned},
        }

    def line(self) -> str:
        return _dumps(self.record())

    @property
    def complete(self) -> bool:
        return self.cursor >= self.hi


def predicate_config_hash(pred: SearchPredicate, lo: int, hi: int) -> str:
    blob = {
        "schema": CHECKPOINT_VERSION,
        "predicate": pred.name,
        "params": pred.params,
        "lo": lo,
        "hi": hi,
    }
    return hashlib.sha256(_dumps(blob).encode()).hexdigest()[:16]


def _load_last_record(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise CheckpointError(f"cannot read checkpoint {path}: {exc}") from exc
    for line in reversed(lines):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError:
            continue  # torn tail line from a crash mid-write
        if isinstance(rec, dict) and rec.get("version") == CHECKPOINT_VERSION:
            return rec
    raise CheckpointError(f"no usable checkpoint record in {path}")


def search_range(pred: SearchPredicate, lo: int, hi: int,
                 checkpoint_path: Optional[str] = None, *,
                 resume: bool = False,
                 flush_every: int = 20000,
                 stop_after: Optional[int] = None,
                 log: Optional[Callable[[str], None]] = None) -> SearchCheckpoint:
    """Scan primes in [lo, hi) with pred, checkpointing along the way.

    stop_after caps how many primes this call processes (the checkpoint is
    flushed and returned incomplete; call again with resume=True).  Stored
    hits are re-verified on resume before any new work happens.
    """
    if lo > hi:
        raise UsageError(f"empty-or-backwards range [{lo}, {hi})")
    h = predicate_config_hash(pred, lo, hi)
    ck = SearchCheckpoint(lo, hi, lo, [], 0, h)
    if resume:
        if checkpoint_path is None:
            raise CheckpointError("resume requested without a checkpoint path")
        rec = _load_last_record(checkpoint_path)
        if rec.get("config_hash") != h:
            raise CheckpointError(
                "checkpoint belongs to a different configuration "
                f"({rec.get('config_hash')} != {h})"
            )
        for hit in rec["hits"]:
            if not pred.verify(hit):
                raise CheckpointError(f"stored hit fails re-verification: {hit}")
        ck = SearchCheckpoint(lo, hi, rec["cursor"], list(rec["hits"]),
                              rec["stats"]["primes_scanned"], h)
    elif checkpoint_path is not None and os.path.exists(checkpoint_path):
        os.remove(checkpoint_path)

    def flush():
        if checkpoint_path is not None:
            with open(checkpoint_path, "a", encoding="utf-8") as fh:
                fh.write(ck.line() + "\n")

    t0 = time.perf_counter()
    done = 0
    since_flush = 0
    for p in iter_primes(ck.cursor, hi):
        hit = pred.test(p)
        if hit is not None:
            ck.hits.append(hit)
            if log:
                log(f"hit at p={p}: {_dumps(hit)}")
        ck.cursor = p + 1
        ck.primes_scanned += 1
        done += 1
        since_flush += 1
        if stop_after is not None and done >= stop_after:
            ck.elapsed = time.perf_counter() - t0
            flush()
            if log:
                log(f"paused at cursor {ck.cursor} after {done} primes "
                    f"({ck.elapsed:.2f}s)")
            return ck
        if since_flush >= flush_every:
            flush()
            since_flush = 0
    ck.cursor = hi
    ck.elapsed = time.perf_counter() - t0
    flush()
    if log:
        log(f"scan [{lo},{hi}) complete: {ck.primes_scanned} primes, "
            f"{len(ck.hits)} hits, {ck.elapsed:.2f}s")
    return ck


# ---------------------------------------------------------------------------
# the two stock predicates


def wieferich_predicate(base, field_d: Optional[int] = None) -> SearchPredicate:
    """Hits are primes where base is Wieferich at some unramified ideal.

    One hit record per qualifying ideal; `aggregate` is set when every
    admissible ideal above p qualifies at once.
    """
    from .ring import as_element

    fld = quadratic_field(field_d) if field_d is not None else None
    g = as_element(base, fld)

    def admissible(P):
        return P.kind != "ramified" and quad_valuation(g, P) == 0

    def test(p: int) -> Optional[dict]:
        ideals = [P for P in prime_ideals_above(g.field, p) if admissible(P)]
        if not ideals:
            return None
        ks = {P.label(): fermat_quotient_residue(g, P) for P in ideals}
        hit_labels = sorted(lbl for lbl, k in ks.items() if k == 0)
        if not hit_labels:
            return None
        return {"p": p, "ideals": hit_labels,
                "aggregate": len(hit_labels) == len(ideals)}

    def verify(hit: dict) -> bool:
        got = test(hit["p"])
        return got == hit

    return SearchPredicate(
        "alpha-wieferich", {"base": str(g), "d": field_d}, test, verify
    )


def wall_predicate() -> SearchPredicate:
    """Hits are primes with equal Fibonacci period mod p and mod p^2."""

    def test(p: int) -> Optional[dict]:
        v = wall_period_test(p)
        if not v.equal:
            return None
        return {"p": p, "pi_p": v.pi_p, "pi_p2": v.pi_p2}

    def verify(hit: dict) -> bool:
        v = wall_period_test(hit["p"])
        ok = v.equal and v.pi_p == hit["pi_p"] and v.pi_p2 == hit["pi_p2"]
        if ok and hit["p"] not in (2, 5):
            ok = wss_divisibility_test(hit["p"])  # second, independent route
        return ok

    return SearchPredicate("wall-period", {}, test, verify)

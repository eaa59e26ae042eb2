"""Census of S(P): counts of f = 1 triples, the signed sum of h, and N_Br.

The fast path works one value of ``a`` at a time. For fixed (a, b) with
f(a, b) = 1 the obstruction sign is multiplicative in c,

    h(a, b, c) = prod_{q | c} g(q),   g(q) = prod_{p : a not in Q_p^2} (q, b)_p,

so it is enough to find, for every prime q <= P, whether g(q) = -1 and then
reduce the prime-incidence matrix of the squarefree c <= P modulo 2.
``count_reference`` evaluates ``decide`` triple by triple and is what the
fast path is tested against.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from typing import Callable, Iterator

import numpy as np

from . import __version__
from .arith import SieveTables, build_sieves, hilbert, jacobi
from .local import Triple, decide, f, f2, h2

CSV_HEADER = "P,S,N1,N2,NBr,Nglob,T,seconds"
CHECKPOINT_FORMAT = "hasse-census-checkpoint"
CHECKPOINT_VERSION = 1


class CheckpointError(ValueError):
    pass


class CensusInterrupted(RuntimeError):
    """Raised when a run stops early on request (``stop_after``)."""


# -- report ------------------------------------------------------------------


@dataclass(frozen=True)
class CountReport:
    P: int
    s_size: int
    n1: int
    n2: int
    n_br: int
    n_glob: int
    t_sum: int
    wall_time: float = 0.0
    shard_count: int = 1

    def __post_init__(self):
        if (self.n1 - self.n2) % 2 or self.n_br != (self.n1 - self.n2) // 2:
            raise ValueError("n_br must equal (n1 - n2) / 2")
        if self.n_glob != self.s_size - self.n_br:
            raise ValueError("n_glob must equal s_size - n_br")
        if not (0 <= self.n_br <= self.n1 <= self.s_size and abs(self.n2) <= self.n1):
            raise ValueError("counter bounds violated")

    def counters(self) -> tuple[int, ...]:
        return (self.P, self.s_size, self.n1, self.n2, self.n_br, self.n_glob, self.t_sum)

    def csv_row(self) -> str:
        return ",".join(map(str, self.counters())) + f",{self.wall_time:.3f}"

    def as_dict(self) -> dict:
        d = asdict(self)
        d["wall_time"] = round(d["wall_time"], 3)
        return d


# -- tables shared by every shard --------------------------------------------


@dataclass(eq=False)
class CensusTables:
    P: int
    sieves: SieveTables
    primes: np.ndarray        # primes <= P
    theta_p: np.ndarray       # theta(q), 0 for q = 2
    a_values: np.ndarray      # signed squarefree in [-P, P] \ {0}
    b_inc: np.ndarray         # prime incidence of |b| for b in a_values
    c_values: np.ndarray      # squarefree in [1, P]
    c_inc: np.ndarray         # prime incidence of c (float32 for matmul)
    leg_flat: np.ndarray      # Legendre symbols, row of prime q at leg_off[q]
    leg_off: np.ndarray
    neg_q: np.ndarray         # neg_q[i, j] = 1 iff (q_j / p_i) = -1, p_i odd, i != j


def _incidence(values: np.ndarray, primes: np.ndarray) -> np.ndarray:
    return (np.abs(values)[:, None] % primes[None, :] == 0).astype(np.int32)


@lru_cache(maxsize=4)
def census_tables(P: int) -> CensusTables:
    sv = build_sieves(max(P, 2))
    primes = sv.primes().astype(np.int64)
    primes = primes[primes <= P]
    pos = sv.squarefree_upto(P).astype(np.int64)
    a_values = np.concatenate([-pos[::-1], pos])
    theta_p = np.where(primes % 4 == 3, 1, 0).astype(np.int64)
    theta_p[primes == 2] = 0
    offs = np.zeros(len(primes), dtype=np.int64)
    chunks = []
    o = 0
    for i, q in enumerate(primes):
        q = int(q)
        offs[i] = o
        if q == 2:
            row = np.zeros(2, dtype=np.int8)
        else:
            r = np.arange(q, dtype=np.int64)
            row = np.zeros(q, dtype=np.int8)
            row[(r * r) % q] = 1
            row = np.where(row == 1, 1, -1).astype(np.int8)
            row[0] = 0
        chunks.append(row)
        o += len(row)
    leg_flat = np.concatenate(chunks) if chunks else np.zeros(0, np.int8)
    n = len(primes)
    neg_q = np.zeros((n, n), dtype=np.int32)
    for i, p in enumerate(primes):
        if p == 2:
            continue
        vals = leg_flat[offs[i] + primes % p]
        neg_q[i] = vals == -1
        neg_q[i, i] = 0
    return CensusTables(
        P=P,
        sieves=sv,
        primes=primes,
        theta_p=theta_p,
        a_values=a_values,
        b_inc=_incidence(a_values, primes),
        c_values=pos,
        c_inc=_incidence(pos, primes).astype(np.float32),
        leg_flat=leg_flat,
        leg_off=offs,
        neg_q=neg_q,
    )


def _legendre(tb: CensusTables, i: int, r):
    """Legendre symbol of residues r (already reduced) modulo primes[i]."""
    return tb.leg_flat[tb.leg_off[i] + r]


def _f_row(tb: CensusTables, a: int) -> np.ndarray:
    """f(a, b) for every b in tb.a_values, vectorised."""
    b = tb.a_values
    if a % 2:
        odd_b = (a % 8 == 1) | (b % 8 == 1) | ((a * b) % 8 == 1)
        ok = np.where(b % 2 == 1, odd_b, a % 8 == 1)
    else:
        ok = np.where(b % 2 == 1, b % 8 == 1, (a * b) % 32 == 4)
    bad_q = np.zeros(len(tb.primes), dtype=np.int32)
    for i, q in enumerate(tb.primes):
        q = int(q)
        if q == 2:
            continue
        if a % q == 0:
            r = np.where(b % q == 0, ((a // q) * (b // q)) % q, b % q)
            ok &= _legendre(tb, i, r) == 1
        elif _legendre(tb, i, a % q) == -1:
            bad_q[i] = 1
    ok &= (tb.b_inc @ bad_q) == 0
    return ok


def _sign_parity(tb: CensusTables, a: int, bs: np.ndarray, b_inc: np.ndarray) -> np.ndarray:
    """Parity matrix: entry (b, q) is 1 iff g_{a,b}(q) = -1."""
    primes = tb.primes
    n = len(primes)
    notsq = np.zeros(n, dtype=bool)
    for i, q in enumerate(primes):
        q = int(q)
        if q == 2:
            notsq[i] = a % 8 != 1
        else:
            notsq[i] = a % q == 0 or _legendre(tb, i, a % q) == -1
    odd_cols = primes != 2
    par = np.zeros((len(bs), n), dtype=np.int64)

    # p = 2 factor: (q, b)_2
    if 2 in primes and notsq[0]:
        beta = (bs % 2 == 0).astype(np.int64)
        v = np.where(beta == 1, bs // 2, bs)
        th_v = (v % 4 == 3).astype(np.int64)
        q = primes[None, :]
        e = tb.theta_p[None, :] * th_v[:, None] + beta[:, None] * ((q * q - 1) // 8)
        e[:, ~odd_cols] = ((v * v - 1) // 8)[:, None]
        par += e

    # odd p | b with a not a square at p, q != p: (q / p)
    mask = (notsq & odd_cols).astype(np.int32)
    par += (b_inc * mask[None, :]) @ tb.neg_q

    # p = q odd with a not a square at q
    for i, q in enumerate(primes):
        q = int(q)
        if q == 2 or not notsq[i]:
            continue
        div = bs % q == 0
        r = np.where(div, (bs // q) % q, bs % q)
        par[:, i] += (_legendre(tb, i, r) == -1) + div * int(tb.theta_p[i])
    return par & 1


def _a_contribution(tb: CensusTables, a: int) -> tuple[int, int]:
    """(sum_b f(a,b), sum_{b,c} f(a,b) h(a,b,c)) for one value of a."""
    frow = _f_row(tb, a)
    nf = int(frow.sum())
    if nf == 0:
        return 0, 0
    bs = tb.a_values[frow]
    par = _sign_parity(tb, a, bs, tb.b_inc[frow])
    flips = (tb.c_inc @ par.T.astype(np.float32)).astype(np.int64) & 1
    n2 = nf * len(tb.c_values) - 2 * int(flips.sum())
    return nf, n2


# -- shard state -------------------------------------------------------------


@lru_cache(maxsize=1)
def kernel_fingerprint() -> str:
    """Hash of a fixed table of symbol values; changes if the kernel changes."""
    vals = []
    for x in range(-12, 13):
        for y in range(-12, 13):
            if x and y:
                vals.extend(hilbert(x, y, p) for p in (2, 3, 5, 7))
    for a in (-7, -6, -5, -3, -2, -1, 1, 2, 3, 5, 6, 7):
        for b in (-7, -6, -5, -3, -2, -1, 1, 2, 3, 5, 6, 7):
            vals.append(f(a, b))
            if f2(a, b):
                vals.append(h2(a, b, 3))
    vals.extend(jacobi(k, n) for k in range(-20, 21) for n in range(1, 40, 2))
    return hashlib.sha256(repr(vals).encode()).hexdigest()[:16]


def config_checksum(P: int) -> str:
    cfg = {"P": P, "version": __version__, "kernel": kernel_fingerprint()}
    return hashlib.sha256(json.dumps(cfg, sort_keys=True).encode()).hexdigest()


def _normalize(ranges) -> tuple[tuple[int, int], ...]:
    out: list[list[int]] = []
    for lo, hi in sorted(ranges):
        if lo >= hi:
            continue
        if out and lo < out[-1][1]:
            raise ValueError("shard ranges overlap")
        if out and lo == out[-1][1]:
            out[-1][1] = hi
        else:
            out.append([lo, hi])
    return tuple((lo, hi) for lo, hi in out)


@dataclass(frozen=True)
class ShardState:
    """Partial counters over a set of half-open a-intervals."""

    P: int
    a_ranges: tuple[tuple[int, int], ...]
    s_size: int = 0
    n1: int = 0
    n2: int = 0
    n_br: int = 0
    n_glob: int = 0
    t_sum: int = 0
    checksum: str = field(default="")

    @classmethod
    def empty(cls, P: int) -> "ShardState":
        return cls(P, (), checksum=config_checksum(P))

    def merge(self, other: "ShardState") -> "ShardState":
        if self.P != other.P or self.checksum != other.checksum:
            raise CheckpointError("cannot merge shard states from different configurations")
        return ShardState(
            self.P,
            _normalize(self.a_ranges + other.a_ranges),
            self.s_size + other.s_size,
            self.n1 + other.n1,
            self.n2 + other.n2,
            self.n_br + other.n_br,
            self.n_glob + other.n_glob,
            self.t_sum + other.t_sum,
            self.checksum,
        )

    def to_json(self) -> dict:
        d = asdict(self)
        d["a_ranges"] = [list(r) for r in self.a_ranges]
        return d

    @classmethod
    def from_json(cls, d: dict, expect_checksum: str | None = None) -> "ShardState":
        try:
            state = cls(
                int(d["P"]),
                _normalize(tuple(tuple(r) for r in d["a_ranges"])),
                *(int(d[k]) for k in ("s_size", "n1", "n2", "n_br", "n_glob", "t_sum")),
                checksum=str(d["checksum"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise CheckpointError(f"malformed shard state: {exc}") from exc
        want = config_checksum(state.P) if expect_checksum is None else expect_checksum
        if state.checksum != want:
            raise CheckpointError("shard state checksum does not match this configuration")
        return state


def checkpoint_roundtrip(state: ShardState) -> ShardState:
    return ShardState.from_json(json.loads(json.dumps(state.to_json())))


def shard_bounds(P: int, shards: int) -> list[tuple[int, int]]:
    """Split [-P, P] into ``shards`` contiguous half-open a-intervals."""
    if shards < 1:
        raise ValueError("shard count must be positive")
    lo, hi = -P, P + 1
    edges = [lo + (hi - lo) * i // shards for i in range(shards + 1)]
    return [(edges[i], edges[i + 1]) for i in range(shards)]


def count_shard(P: int, a_lo: int, a_hi: int) -> ShardState:
    tb = census_tables(P)
    q_c = len(tb.c_values)
    avals = tb.a_values[(tb.a_values >= a_lo) & (tb.a_values < a_hi)]
    t_part = 0
    n2 = 0
    for a in avals:
        nf, s2 = _a_contribution(tb, int(a))
        t_part += nf
        n2 += s2
    n1 = t_part * q_c
    s_size = len(avals) * len(tb.a_values) * q_c
    n_br = (n1 - n2) // 2
    return ShardState(
        P, _normalize([(a_lo, a_hi)]), s_size, n1, n2, n_br, s_size - n_br, t_part,
        checksum=config_checksum(P),
    )


def _shard_task(args):
    return count_shard(*args)


# -- checkpoint file ---------------------------------------------------------


def _digest(shards: list[dict]) -> str:
    return hashlib.sha256(json.dumps(shards, sort_keys=True).encode()).hexdigest()


def write_checkpoint(path, P: int, shard_count: int,
                     done: dict[tuple[int, int], ShardState]) -> None:
    """Atomically write the finished shards, each keyed by its assigned interval."""
    shards = [{"bound": list(bd), "state": done[bd].to_json()} for bd in sorted(done)]
    doc = {
        "format": CHECKPOINT_FORMAT,
        "version": CHECKPOINT_VERSION,
        "config": {"P": P, "shards": shard_count, "code_version": __version__,
                   "kernel": kernel_fingerprint()},
        "config_checksum": config_checksum(P),
        "shards": shards,
        "digest": _digest(shards),
    }
    path = os.fspath(path)
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".ckpt-")
    with os.fdopen(fd, "w") as fh:
        json.dump(doc, fh, indent=1, sort_keys=True)
    os.replace(tmp, path)


def read_checkpoint(path, P: int, shard_count: int) -> dict[tuple[int, int], ShardState]:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise CheckpointError(f"checkpoint is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or not isinstance(doc.get("config"), dict):
        raise CheckpointError("checkpoint is not a census checkpoint document")
    if doc.get("format") != CHECKPOINT_FORMAT or doc.get("version") != CHECKPOINT_VERSION:
        raise CheckpointError("unknown checkpoint format or version")
    cfg = doc["config"]
    if cfg.get("P") != P or cfg.get("shards") != shard_count:
        raise CheckpointError(
            f"checkpoint was written for P={cfg.get('P')}, shards={cfg.get('shards')}"
        )
    want = config_checksum(P)
    if doc.get("config_checksum") != want:
        raise CheckpointError("checkpoint configuration checksum mismatch")
    shards = doc.get("shards", [])
    if doc.get("digest") != _digest(shards):
        raise CheckpointError("checkpoint payload digest mismatch")
    bounds = set(shard_bounds(P, shard_count))
    out = {}
    for item in shards:
        try:
            bd = tuple(item["bound"])
            raw = item["state"]
        except (KeyError, TypeError) as exc:
            raise CheckpointError(f"malformed checkpoint entry: {exc}") from exc
        st = ShardState.from_json(raw, want)
        if bd not in bounds or st.a_ranges not in ((), (bd,)):
            raise CheckpointError(f"checkpoint shard {bd} does not match the shard layout")
        out[bd] = st
    return out


# -- public counting API -----------------------------------------------------


def _check_headroom(P: int) -> None:
    if (2 * P) ** 2 * P >= 2**62:
        raise ValueError(f"P = {P} overflows 64-bit counters")


def count(P: int, shards: int = 1, threads: int = 1, checkpoint=None,
          stop_after: int | None = None,
          progress: Callable[[ShardState], None] | None = None) -> CountReport:
    """Census of S(P).

    Shards are contiguous a-intervals processed by up to ``threads`` worker
    processes and merged in shard order. With ``checkpoint`` each finished
    shard is recorded and a rerun resumes from the file. ``stop_after``
    raises CensusInterrupted after that many new shards (used to exercise
    resumption).
    """
    if P < 1:
        raise ValueError("P must be positive")
    _check_headroom(P)
    start = time.perf_counter()
    bounds = shard_bounds(P, shards)
    done: dict[tuple[int, int], ShardState] = {}
    if checkpoint is not None and os.path.exists(checkpoint):
        done = read_checkpoint(checkpoint, P, shards)
    todo = [bd for bd in bounds if bd not in done]
    new = 0

    def record(bd, st):
        nonlocal new
        done[bd] = st
        new += 1
        if checkpoint is not None:
            write_checkpoint(checkpoint, P, shards, done)
        if progress is not None:
            progress(st)
        if stop_after is not None and new >= stop_after and len(done) < len(bounds):
            raise CensusInterrupted(f"stopped after {new} shards")

    if threads > 1 and len(todo) > 1:
        with ProcessPoolExecutor(max_workers=threads) as ex:
            for bd, st in zip(todo, ex.map(_shard_task, [(P, lo, hi) for lo, hi in todo])):
                record(bd, st)
    else:
        for bd in todo:
            record(bd, count_shard(P, *bd))

    total = ShardState.empty(P)
    for bd in bounds:
        total = total.merge(done[bd])
    return CountReport(
        P, total.s_size, total.n1, total.n2, total.n_br, total.n_glob, total.t_sum,
        wall_time=time.perf_counter() - start, shard_count=shards,
    )


def squarefree_count(n: int) -> int:
    if n < 1:
        return 0
    return build_sieves(max(n, 2)).squarefree_count(n)


def s_size(P: int) -> int:
    """#S(P) without enumerating: (2Q)^2 Q with Q the number of squarefree c <= P."""
    q = squarefree_count(P)
    return (2 * q) ** 2 * q


def t_sum(P: int) -> int:
    """Sum of f(a, b) over squarefree a, b with |a|, |b| <= P."""
    tb = census_tables(P)
    return sum(int(_f_row(tb, int(a)).sum()) for a in tb.a_values)


def enumerate_S(P: int, sieves: SieveTables | None = None) -> Iterator[Triple]:
    """Every triple of S(P) once, ordered by a, then b, then c."""
    if P < 1:
        raise ValueError("P must be positive")
    sv = sieves if sieves is not None else build_sieves(max(P, 2))
    if sv.limit < P:
        raise ValueError(f"sieve limit {sv.limit} is below P = {P}")
    pos = [int(n) for n in sv.squarefree_upto(P)]
    signed = [-n for n in reversed(pos)] + pos
    for a in signed:
        for b in signed:
            for c in pos:
                yield Triple(a, b, c)


def count_reference(P: int, decide_fn=decide) -> CountReport:
    """Triple-by-triple census through ``decide_fn`` (slow; small P only)."""
    start = time.perf_counter()
    s = n1 = n2 = 0
    t_pairs: set[tuple[int, int]] = set()
    for t in enumerate_S(P):
        s += 1
        v = decide_fn(t)
        if v.f_value:
            n1 += 1
            n2 += v.h_value
            t_pairs.add((t.a, t.b))
    n_br = (n1 - n2) // 2
    return CountReport(P, s, n1, n2, n_br, s - n_br, len(t_pairs),
                       wall_time=time.perf_counter() - start)

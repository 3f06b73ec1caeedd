"""Exhaustive verification campaigns, characteristic-p checks and certification.

A campaign walks the affine orbits of one family of minors of F_N, checks
one representative per orbit and writes one JSON record per orbit to an
append-only checkpoint.  Reports are built from the records in canonical
orbit order and contain no timings, so they depend only on the
configuration and not on worker count or interruptions.
"""
from __future__ import annotations

import hashlib
import json
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import islice
from typing import Iterable, Iterator, Sequence

from sympy import isprime

from . import bounds, symmetry
from .cyclotomic import is_squarefree, prime_divisors
from .factor import factorize
from .minors import MinorSpec, fourier_minor, is_zero_modular, norm_modular, norm_resultant
from .symmetry import OrbitKey

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1
MAX_ORBITS = 10**7
FLUSH_RECORDS = 1000
FLUSH_SECONDS = 10.0
CHUNK = 64

STATUSES = ("nonzero", "zero-witness", "ap-certified", "skipped-by-complement")


class CampaignError(RuntimeError):
    pass


class CheckpointError(CampaignError):
    pass


class CampaignTooLarge(CampaignError):
    pass


class InternalCheckError(CampaignError):
    """The modular and symbolic backends disagreed."""


# --- configuration -----------------------------------------------------------


@dataclass
class CampaignConfig:
    order: int
    family: str = "principal"
    d: int | None = None
    max_size: int | None = None
    characteristic: int = 0
    workers: int = 1
    checkpoint: str | None = None
    factor_budget: int | None = None
    allow_nonsquarefree: bool = False

    def __post_init__(self):
        N = self.order
        if not isinstance(N, int) or N < 2:
            raise ValueError(f"order must be an integer >= 2, got {N!r}")
        if not self.allow_nonsquarefree and not is_squarefree(N):
            raise ValueError(f"{N} is not square-free (pass allow_nonsquarefree to override)")
        symmetry._check_family(N, self.family, self.d)
        if self.family in ("principal", "all"):
            self.d = None
        if self.max_size is None:
            self.max_size = N // 2
        if not 1 <= self.max_size <= N // 2:
            raise ValueError(f"max size must lie in [1, {N // 2}]")
        q = self.characteristic
        if q:
            if not isprime(q):
                raise ValueError(f"characteristic {q} is not prime")
            if N % q == 0:
                raise ValueError(f"characteristic {q} divides the order {N}")
        if self.workers < 1:
            raise ValueError("workers must be positive")

    def identity(self) -> dict:
        """The fields that determine the results (not workers or checkpoint path)."""
        return {
            "schema_version": SCHEMA_VERSION,
            "order": self.order,
            "family": self.family,
            "d": self.d,
            "max_size": self.max_size,
            "characteristic": self.characteristic,
            "factor_budget": self.factor_budget,
        }

    def digest(self) -> str:
        return hashlib.sha256(_canonical(self.identity()).encode()).hexdigest()


def _canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _hex(n: int | None) -> str | None:
    return None if n is None else hex(n)


# --- per-orbit work ----------------------------------------------------------


@lru_cache(maxsize=4096)
def _norm(spec: MinorSpec) -> int:
    return norm_modular(spec)


def _check_orbit(cfg: dict, key: OrbitKey) -> dict:
    t0 = time.perf_counter()
    spec = key.spec()
    q = cfg["characteristic"]
    norm = None
    backend = "modular"
    cert = symmetry.ap_certificate(spec)
    if cert is not None:
        status, backend = "ap-certified", "ap"
    elif q == 0:
        if is_zero_modular(spec):
            if not fourier_minor(spec).is_zero():
                raise InternalCheckError(f"modular zero not confirmed symbolically: {spec}")
            status, norm = "zero-witness", 0
        else:
            status = "nonzero"
    else:
        norm = _norm(spec)
        if norm % q == 0:
            if norm_resultant(spec) != norm:
                raise InternalCheckError(f"norm backends disagree on {spec}")
            status = "zero-witness"
        else:
            status = "nonzero"
    factors = None
    if cfg["factor_budget"] is not None:
        if norm is None:
            norm = _norm(spec)
        if norm:
            fac = factorize(norm, cfg["factor_budget"])
            factors = [[hex(p), e] for p, e in fac.primes] + [
                [hex(c), e, "composite"] for c, e in fac.composites
            ]
    return {
        "orbit_key": key.as_dict(),
        "status": status,
        "norm_hex": _hex(norm),
        "factors": factors,
        "micros": int((time.perf_counter() - t0) * 1e6),
        "backend": backend,
        "certificate": cert.as_dict() if cert else None,
    }


def _check_chunk(cfg: dict, keys: list[OrbitKey]) -> list[dict]:
    return [_check_orbit(cfg, k) for k in keys]


# --- checkpoints -----------------------------------------------------------


def _checksum(rec: dict) -> str:
    body = {k: v for k, v in rec.items() if k != "checksum"}
    return hashlib.sha256(_canonical(body).encode()).hexdigest()[:16]


def _record_id(key: dict) -> tuple:
    if "complement_of" in key:
        return ("complement", key["size"])
    return (tuple(key["rows"]), tuple(key["cols"]))


def load_checkpoint(path: str, digest: str) -> dict[tuple, dict]:
    """Read records from ``path``.

    A torn final line (crash mid-write) is discarded and cut from the
    file; any other malformed line, a checksum mismatch, or a record
    written under a different configuration raises :class:`CheckpointError`.
    """
    if not os.path.exists(path):
        return {}
    with open(path, "rb") as fh:
        data = fh.read()
    lines = data.split(b"\n")
    tail = lines.pop()  # text after the last newline: empty unless torn
    if tail:
        log.warning("dropping incomplete trailing record in %s", path)
        with open(path, "r+b") as fh:
            fh.truncate(len(data) - len(tail))
    out: dict[tuple, dict] = {}
    for i, raw in enumerate(lines, 1):
        if not raw.strip():
            continue
        try:
            rec = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise CheckpointError(f"{path}:{i}: unreadable record") from exc
        if rec.get("checksum") != _checksum(rec):
            raise CheckpointError(f"{path}:{i}: checksum mismatch")
        if rec.get("config_digest") != digest:
            raise CheckpointError(f"{path}:{i}: record belongs to a different configuration")
        out[_record_id(rec["orbit_key"])] = rec
    return out


class _Writer:
    def __init__(self, path: str | None):
        self.fh = open(path, "a", encoding="utf-8") if path else None
        self.pending = 0
        self.last = time.monotonic()

    def write(self, rec: dict) -> None:
        if not self.fh:
            return
        self.fh.write(_canonical(rec) + "\n")
        self.pending += 1
        if self.pending >= FLUSH_RECORDS or time.monotonic() - self.last >= FLUSH_SECONDS:
            self.flush()

    def flush(self) -> None:
        if self.fh and self.pending:
            self.fh.flush()
            os.fsync(self.fh.fileno())
        self.pending = 0
        self.last = time.monotonic()

    def close(self) -> None:
        if self.fh:
            self.flush()
            self.fh.close()


# --- running -----------------------------------------------------------------


def iter_orbits(cfg: CampaignConfig) -> Iterator[OrbitKey]:
    for m in range(1, cfg.max_size + 1):
        yield from symmetry.enumerate_orbits(cfg.order, m, cfg.family, cfg.d)


def _complement_records(cfg: CampaignConfig) -> list[dict]:
    """Sizes above N/2 are settled by complementarity once every smaller size is checked."""
    N = cfg.order
    if cfg.max_size != N // 2:
        return []
    return [
        {
            "orbit_key": {"size": m, "complement_of": N - m},
            "status": "skipped-by-complement",
            "norm_hex": None,
            "factors": None,
            "micros": 0,
            "backend": "complement",
            "certificate": None,
        }
        for m in range(N // 2 + 1, N + 1)
    ]


def _batches(it: Iterable, n: int) -> Iterator[list]:
    it = iter(it)
    while batch := list(islice(it, n)):
        yield batch


def _compute(cfg: CampaignConfig, todo: Iterable[OrbitKey]) -> Iterator[dict]:
    plain = cfg.identity()
    if cfg.workers == 1:
        for key in todo:
            yield _check_orbit(plain, key)
        return
    with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
        window: list = []
        for batch in _batches(todo, CHUNK):
            window.append(pool.submit(_check_chunk, plain, batch))
            if len(window) >= 4 * cfg.workers:
                yield from window.pop(0).result()
        for fut in window:
            yield from fut.result()


def run_resume(
    cfg: CampaignConfig, checkpoint: str | None = None, max_records: int | None = None
) -> dict:
    """Run (or continue) a campaign and return its report.

    Orbits already recorded in ``checkpoint`` are skipped.  ``max_records``
    stops after that many new records, leaving a partial checkpoint; it
    exists to exercise resumption.
    """
    path = checkpoint if checkpoint is not None else cfg.checkpoint
    est = symmetry.estimate_orbits(cfg.order, cfg.max_size, cfg.family, cfg.d)
    if est > MAX_ORBITS:
        raise CampaignTooLarge(f"about {est} orbits; refusing to run more than {MAX_ORBITS}")
    digest = cfg.digest()
    done = load_checkpoint(path, digest) if path else {}
    writer = _Writer(path)
    fresh: dict[tuple, dict] = {}
    written = 0

    def finish(body: dict) -> bool:
        nonlocal written
        if max_records is not None and written >= max_records:
            return False
        rec = {"schema_version": SCHEMA_VERSION, "config_digest": digest, "family": cfg.family, **body}
        rec["checksum"] = _checksum(rec)
        writer.write(rec)
        fresh[_record_id(rec["orbit_key"])] = rec
        written += 1
        return True

    try:
        todo = (k for k in iter_orbits(cfg) if (k.rows, k.cols) not in done)
        stopped = False
        for body in _compute(cfg, todo):
            if not finish(body):
                stopped = True
                break
        if not stopped:
            for body in _complement_records(cfg):
                if _record_id(body["orbit_key"]) not in done and not finish(body):
                    break
    finally:
        writer.close()
    return build_report(cfg, {**done, **fresh})


def verify_family(cfg: CampaignConfig) -> dict:
    """Exhaustive check of one family of minors of F_N (see :func:`run_resume`)."""
    return run_resume(cfg)


def build_report(cfg: CampaignConfig, records: dict[tuple, dict]) -> dict:
    counts = {s: 0 for s in STATUSES}
    witnesses = []
    covered = 0
    orbits = 0
    missing = 0
    for key in iter_orbits(cfg):
        rec = records.get((key.rows, key.cols))
        if rec is None:
            missing += 1
            continue
        orbits += 1
        covered += key.size
        counts[rec["status"]] += 1
        if rec["status"] == "zero-witness":
            witnesses.append(
                {
                    "rows": list(key.rows),
                    "cols": list(key.cols),
                    "orbit_size": key.size,
                    "norm": rec["norm_hex"],
                }
            )
    for body in _complement_records(cfg):
        if _record_id(body["orbit_key"]) in records:
            counts["skipped-by-complement"] += 1
        else:
            missing += 1
    members = sum(
        symmetry.family_size(cfg.order, m, cfg.family, cfg.d) for m in range(1, cfg.max_size + 1)
    )
    complete = missing == 0
    return {
        "config": cfg.identity(),
        "digest": cfg.digest(),
        "complete": complete,
        "orbits": orbits,
        "members_covered": covered,
        "family_members": members,
        "counts": counts,
        "witnesses": witnesses,
        "verdict": "fail" if witnesses else ("pass" if complete else "incomplete"),
    }


def char_p_verify(
    Nprime: int, p: int, family: str = "principal", d: int | None = None, **kw
) -> dict:
    """Is every minor of the family of F_N' nonzero in characteristic p, i.e. p not dividing its norm?

    Sizes above N'/2 follow by complementarity, which survives reduction
    mod p because p does not divide det F_N'.
    """
    if Nprime % p == 0:
        raise ValueError(f"{p} divides {Nprime}")
    return run_resume(CampaignConfig(order=Nprime, family=family, d=d, characteristic=p, **kw))


# --- q-Chebotarev property -----------------------------------------------------


@dataclass
class ChebotarevVerdict:
    order: int
    q: int
    holds: bool
    witnesses: list[dict]
    report: dict

    def as_dict(self) -> dict:
        return {"order": self.order, "q": self.q, "holds": self.holds, "witnesses": self.witnesses}


def chebotarev_property(M: int, q: int, max_size: int | None = None, **kw) -> ChebotarevVerdict:
    """No minor of F_M (any rows, any columns) has norm divisible by q.

    Pairs are reduced by independent affine maps on rows and columns and
    by complementarity.
    """
    if M % q == 0:
        raise ValueError(f"{q} divides {M}")
    cfg = CampaignConfig(order=M, family="all", characteristic=q, max_size=max_size, **kw)
    rep = run_resume(cfg)
    return ChebotarevVerdict(M, q, rep["verdict"] == "pass", rep["witnesses"], rep)


def norm_census(M: int, max_size: int) -> dict[int, int]:
    """Prime -> number of orbit pairs whose minor norm it divides, over all minors of size <= max_size.

    Unlike campaigns this goes past M/2 directly (no complement shortcut).
    """
    primes: dict[int, int] = {}
    for m in range(1, min(max_size, M) + 1):
        reps = [S for S, _, _ in symmetry._principal_orbits(M, m)]
        for A in reps:
            for B in reps:
                n = _norm(MinorSpec(M, A, B))
                if n == 0:
                    raise CampaignError(f"vanishing minor rows={A} cols={B} of F_{M}")
                fac = factorize(n)
                if not fac.complete:
                    raise CampaignError(f"could not fully factor norm {n}")
                for p in fac.prime_set():
                    primes[p] = primes.get(p, 0) + 1
    return dict(sorted(primes.items()))


# --- certification ---------------------------------------------------------------

RULES = ("prime-order", "char-p-lift", "threshold-chain", "hadamard-lift")


@dataclass
class Certificate:
    order: int
    claim: str
    rule: str
    tree: dict

    def as_dict(self) -> dict:
        return {"order": self.order, "claim": self.claim, "rule": self.rule, "tree": self.tree}


@dataclass
class CertificationFailure:
    order: int
    attempts: list[dict] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {"order": self.order, "certified": False, "attempts": self.attempts}


def _campaign_leaf(rep: dict) -> dict:
    return {
        "campaign": rep["digest"],
        "config": rep["config"],
        "complete": rep["complete"],
        "orbits": rep["orbits"],
        "witnesses": len(rep["witnesses"]),
    }


def _prime_leaf(p: int) -> dict:
    return {
        "rule": "prime-order",
        "statement": f"every minor of F_{p} is nonzero ({p} is prime)",
    }


def _try_prime(N, primes, **_):
    if len(primes) == 1:
        return _prime_leaf(N), None
    return None, {"rule": "prime-order", "reason": f"{N} is not prime"}


def _try_char_p(N, primes, split=None, campaign_kw=None, **_):
    near = []
    order = [split] if split else sorted(primes, reverse=True)
    for p in order:
        Np = N // p
        if Np < 2:
            continue
        rep = char_p_verify(Np, p, **(campaign_kw or {}))
        if rep["verdict"] == "pass":
            return {
                "rule": "char-p-lift",
                "statement": (
                    f"every {Np}-principal minor of F_{N} is nonzero, since every principal "
                    f"minor of F_{Np} is nonzero in characteristic {p}"
                ),
                "split": {"p": p, "n_prime": Np},
                "children": [_campaign_leaf(rep)],
            }, None
        near.append({"p": p, "n_prime": Np, "witnesses": rep["witnesses"][:5]})
    return None, {"rule": "char-p-lift", "near_misses": near}


def _try_chain(N, primes, **_):
    node = _prime_leaf(primes[0])
    for j in range(1, len(primes)):
        rep = bounds.chain_threshold_holds(primes[:j], primes[j])
        if not rep.holds:
            return None, {"rule": "threshold-chain", "failed_step": rep.as_dict()}
        P = 1
        for x in primes[: j + 1]:
            P *= x
        node = {
            "rule": "threshold-chain",
            "statement": f"every principal minor of F_{P} is nonzero",
            "children": [node, {"threshold": rep.as_dict()}],
        }
    return node, None


def _try_hadamard(N, primes, split=None, campaign_kw=None, **_):
    near = []
    order = [split] if split else sorted(primes, reverse=True)
    for p in order:
        Np = N // p
        if Np < 2:
            continue
        m = Np // 2
        bound = bounds.hadamard_char_bound(m, Np) if m else 1
        if p <= bound:
            near.append({"p": p, "n_prime": Np, "bound": bound})
            continue
        rep = run_resume(CampaignConfig(order=Np, **(campaign_kw or {})))
        if rep["verdict"] != "pass":
            near.append({"p": p, "n_prime": Np, "witnesses": rep["witnesses"][:5]})
            continue
        return {
            "rule": "hadamard-lift",
            "statement": (
                f"every {Np}-principal minor of F_{N} is nonzero: principal minors of F_{Np} "
                f"are nonzero and {p} exceeds the bound on their norms"
            ),
            "split": {"p": p, "n_prime": Np},
            "children": [
                _campaign_leaf(rep),
                {"threshold": {"description": f"{p} > {m}^({m}*phi({Np})/2)", "lhs": p, "rhs": bound, "holds": True}},
            ],
        }, None
    return None, {"rule": "hadamard-lift", "near_misses": near}


_RULE_FUNCS = {
    "prime-order": _try_prime,
    "char-p-lift": _try_char_p,
    "threshold-chain": _try_chain,
    "hadamard-lift": _try_hadamard,
}


def certify(
    N: int,
    strategy: Sequence[str] = RULES,
    split: int | None = None,
    campaign_kw: dict | None = None,
) -> Certificate | CertificationFailure:
    """Certify that all principal minors of F_N are nonzero using the rules in ``strategy`` in order.

    ``split`` pins the prime p of N = p*N' for the lift rules; by default
    primes are tried from the largest down.
    """
    if N < 2 or not is_squarefree(N):
        raise ValueError(f"{N} must be a square-free integer >= 2")
    for r in strategy:
        if r not in _RULE_FUNCS:
            raise ValueError(f"unknown rule {r!r}; expected one of {RULES}")
    primes = prime_divisors(N)
    if split is not None and split not in primes:
        raise ValueError(f"{split} does not divide {N}")
    failure = CertificationFailure(N)
    for r in strategy:
        tree, miss = _RULE_FUNCS[r](N, primes, split=split, campaign_kw=campaign_kw)
        if tree is not None:
            return Certificate(N, f"all principal minors of F_{N} are nonzero", r, tree)
        failure.attempts.append(miss)
    return failure


def tree_leaves(tree: dict) -> list[dict]:
    kids = tree.get("children")
    if not kids:
        return [tree]
    out = []
    for k in kids:
        out += tree_leaves(k)
    return out

"""Candidate search and per-member verification of conditions (ii)-(vi).

A report is a plain JSON-ready dict. Evaluation runs the cheap univariate
stages first ((iii), (iv), (v)), then smoothness (ii), then the logarithm
stage (vi); the report lists verdicts in the order (ii)..(vi) regardless.
"""

from __future__ import annotations

import hashlib
import json
import os
import random
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterator

from .errors import ParameterError, Reject, ToolkitError
from .family import PARAM_NAMES, FamilyParams, smoothness_check_Fp, specialize_family
from .jacobian.logs import LOSS_BUDGET, find_relation, independence_check, relation_residual
from .jacobian.toric import section_logs
from .kernels.padic import format_padic
from .reduction import (b2_certificate, node_fibers, reduction_pattern, regularity_check,
                        special_fiber_split)

TOOLKIT_VERSION = "0.1.0"
STAGES = ("ii", "iii", "iv", "v", "vi")
WORKERS_ENV = "NODALQUINTIC_WORKERS"


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


@dataclass
class SearchConfig:
    primes: list = field(default_factory=lambda: [7])
    N: int = 6
    max_candidates: int = 100_000
    seed: int = 1
    overrides: dict = field(default_factory=dict)
    output: str | None = None
    stop_after: int | None = None

    def __post_init__(self):
        if not self.primes or any(int(p) < 7 for p in self.primes):
            raise ParameterError("primes must be >= 7")
        for p in self.primes:
            p = int(p)
            if any(p % q == 0 for q in range(2, int(p**0.5) + 1)):
                raise ParameterError(f"{p} is not prime")
        if int(self.N) < 4:
            raise ParameterError("precision N must be >= 4")
        if int(self.max_candidates) < 0:
            raise ParameterError("max_candidates must be >= 0")
        unknown = set(self.overrides) - set(PARAM_NAMES)
        if unknown:
            raise ParameterError(f"unknown parameter overrides {sorted(unknown)}")

    @classmethod
    def from_json(cls, obj: dict) -> "SearchConfig":
        if not isinstance(obj, dict):
            raise ParameterError("config must be a JSON object")
        known = {"primes", "p", "N", "max_candidates", "max", "seed", "overrides", "output",
                 "stop_after"}
        extra = set(obj) - known
        if extra:
            raise ParameterError(f"unknown config fields {sorted(extra)}")
        primes = obj.get("primes", obj.get("p", [7]))
        if isinstance(primes, int):
            primes = [primes]
        try:
            return cls(primes=[int(p) for p in primes], N=int(obj.get("N", 6)),
                       max_candidates=int(obj.get("max_candidates", obj.get("max", 100_000))),
                       seed=int(obj.get("seed", 1)), overrides=dict(obj.get("overrides", {})),
                       output=obj.get("output"), stop_after=obj.get("stop_after"))
        except (TypeError, ValueError) as exc:
            raise ParameterError(f"malformed config: {exc}") from None

    def to_json(self) -> dict:
        return asdict(self)

    def hash(self) -> str:
        body = {k: v for k, v in self.to_json().items() if k != "output"}
        return hashlib.sha256(_dumps(body).encode()).hexdigest()[:16]


def sample_params(seed: int, p: int, N: int, index: int, overrides: dict | None = None
                  ) -> FamilyParams:
    rng = random.Random(f"{seed}:{p}:{index}")
    params = FamilyParams.random(rng, p**N, unit_a0_mod=p)
    if overrides:
        obj = params.to_json()
        for name, v in overrides.items():
            if name[0] in "abc" and name[1] == "_":
                obj[name[0]][int(name[2])] = int(v)
            else:
                obj["d"][name[2:]] = int(v)
        params = FamilyParams.from_json(obj)
    return params


# ------------------------------------------------------------- stages

def _stage_ii(params: FamilyParams, p: int) -> dict:
    res = smoothness_check_Fp(specialize_family(params, p), p)
    if not res.smooth:
        raise Reject("ii", "singular special fiber",
                     f"chart {res.chart}, witness {list(res.witness) if res.witness else None}")
    return {"pass": True, "smooth": True}


def _stage_vi(params: FamilyParams, p: int, N: int, data, indices: tuple) -> tuple[dict, dict, dict]:
    digits = N
    n = N - LOSS_BUDGET
    try:
        logs, eps, _ = section_logs(params, p, digits, indices)
    except ToolkitError as exc:
        raise Reject("vi", "log failure", f"{type(exc).__name__}: {exc}") from None
    for i, e in zip(indices, eps):
        if tuple(e) != tuple(data.eps[i - 1]):
            raise AssertionError("component signs disagree between reduction and logarithm")
    oriented = [lam * eP for lam, (eP, _) in zip(logs, eps)]
    da, db = oriented[0] - oriented[2], oriented[1] - oriented[2]
    ind = independence_check(da, db)
    vi = {
        "pass": ind.independent,
        "digits": digits,
        "logs": [lam.to_json() for lam in logs],
        "independence": ind.to_json(),
    }
    rel = find_relation(logs[0], logs[1], logs[2], n)
    residual = relation_residual(rel.r, logs, n)
    relation = dict(rel.to_json(), residual=residual, verified=not any(residual))
    cert = b2_certificate(data, rel.r, indices, p, n)
    certificate = {
        "signed_sum": format_padic(cert.signed_sum),
        "valuation": cert.valuation,
        "n2": format_padic(cert.n2),
        "meeting_number": data.meeting_number,
        "nonzero": cert.nonzero,
    }
    return vi, relation, certificate


def evaluate(params: FamilyParams, p: int, N: int) -> dict:
    """Full condition report for one member; deterministic in (params, p, N)."""
    if p < 7:
        raise ParameterError("p must be >= 7")
    if N < 4:
        raise ParameterError("N must be >= 4")
    verdicts: dict = {s: None for s in STAGES}
    report = {
        "toolkit_version": TOOLKIT_VERSION,
        "sigma": params.to_json(),
        "p": p,
        "N": N,
        "status": "rejected",
        "rejected_at": None,
        "reason": None,
        "verdicts": verdicts,
        "subset": None,
        "relation": None,
        "certificate": None,
    }
    try:
        split = special_fiber_split(params, p)
        verdicts["iii"] = {"pass": True, "h": split.h_ints(), "c": int(split.c)}
        reg = regularity_check(params, split)
        if not reg.regular:
            raise Reject("iv", "not regular at a meeting point",
                         f"common factor {[int(c) for c in reg.common_factor.coeffs]}")
        verdicts["iv"] = {"pass": True, "regular": True}
        try:
            fibers = node_fibers(params, p, N)
        except Reject as exc:
            raise Reject("v", exc.reason, exc.detail) from None
        data = reduction_pattern(params, fibers, split)
        verdicts["v"] = {"pass": data.verdict, "eps": [list(e) for e in data.eps],
                         "split_indices": list(data.split_indices),
                         "meeting_number": data.meeting_number}
        if not data.verdict:
            raise Reject("v", "fewer than three split pairs")
        indices = data.chosen()
        report["subset"] = list(indices)
        verdicts["ii"] = _stage_ii(params, p)
        vi, relation, certificate = _stage_vi(params, p, N, data, indices)
        verdicts["vi"] = vi
        report["relation"] = relation
        report["certificate"] = certificate
        if not vi["pass"]:
            raise Reject("vi", "logs not independent", vi["independence"]["verdict"])
        if not relation["verified"]:
            raise Reject("vi", "relation failed re-verification")
        if not certificate["nonzero"]:
            raise Reject("vi", "boundary certificate vanishes")
        report["status"] = "accepted"
    except Reject as exc:
        report["rejected_at"] = exc.stage
        report["reason"] = exc.reason + (f": {exc.detail}" if exc.detail else "")
        if verdicts.get(exc.stage) is None:
            verdicts[exc.stage] = {"pass": False}
        else:
            verdicts[exc.stage]["pass"] = False
    return report


def report_bytes(report: dict) -> bytes:
    return (_dumps(report) + "\n").encode("utf-8")


# ------------------------------------------------------------- search

def _evaluate_candidate(args) -> dict:
    seed, p, N, index, overrides, chash = args
    params = sample_params(seed, p, N, index, overrides)
    rep = evaluate(params, p, N)
    line = {"config_hash": chash, "p": p, "index": index, "seed": seed,
            "status": rep["status"], "rejected_at": rep["rejected_at"], "reason": rep["reason"]}
    if rep["status"] == "accepted" or rep["rejected_at"] in ("ii", "vi"):
        line["report"] = rep
    return line


def _read_log(path: Path, chash: str) -> list[dict]:
    if not path.exists():
        return []
    out = []
    with path.open("r", encoding="utf-8") as fh:
        for raw in fh:
            raw = raw.strip()
            if not raw:
                continue
            try:
                obj = json.loads(raw)
            except json.JSONDecodeError:
                break   # torn final line from an interrupted run
            if obj.get("config_hash") != chash:
                raise ParameterError("results log belongs to a different config")
            out.append(obj)
    return out


def _workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def search(config: SearchConfig) -> Iterator[dict]:
    """Yield one log line per candidate, resuming from ``config.output``."""
    chash = config.hash()
    path = Path(config.output) if config.output else None
    done: dict = {}
    if path is not None:
        for line in _read_log(path, chash):
            done[(line["p"], line["index"])] = line
        # rewrite without a possibly torn tail
        with path.open("w", encoding="utf-8") as fh:
            for line in done.values():
                fh.write(_dumps(line) + "\n")
    accepted = 0
    pool = None
    nw = _workers()
    if nw > 1:
        import multiprocessing
        pool = multiprocessing.Pool(nw)
    try:
        for p in config.primes:
            p = int(p)
            todo = [(config.seed, p, config.N, i, config.overrides, chash)
                    for i in range(config.max_candidates)]
            fresh = (pool.imap(_evaluate_candidate, [t for t in todo if (p, t[3]) not in done],
                               chunksize=16) if pool else None)
            for t in todo:
                key = (p, t[3])
                if key in done:
                    line = done[key]
                else:
                    line = next(fresh) if fresh is not None else _evaluate_candidate(t)
                    if path is not None:
                        with path.open("a", encoding="utf-8") as fh:
                            fh.write(_dumps(line) + "\n")
                yield line
                if line["status"] == "accepted":
                    accepted += 1
                    if config.stop_after and accepted >= int(config.stop_after):
                        return
    finally:
        if pool is not None:
            pool.terminate()


def statistics(lines) -> dict:
    stats = {"candidates": 0, "accepted": 0, "rejected": {s: 0 for s in STAGES}}
    for line in lines:
        stats["candidates"] += 1
        if line["status"] == "accepted":
            stats["accepted"] += 1
        else:
            stats["rejected"][line["rejected_at"]] += 1
    return stats

"""Command-line interface: ``fourier-minors <verb> [options]``.

Exit status 0 means the check passed or the query succeeded, 1 means a
counterexample or a false verdict was found, 2 means a usage or internal
error.  ``--json`` prints the same report object the human output is
rendered from.
"""
from __future__ import annotations

import argparse
import json
import math
import random
import sys
from typing import Callable

from sympy import isprime

from . import bounds, campaign, structure, symmetry
from .cyclotomic import is_squarefree
from .factor import DEFAULT_BUDGET
from .minors import InvalidSpecError, MinorSpec, classify, fourier_minor, minor_norm


class UsageError(Exception):
    pass


def _index_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip() != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _spec(args) -> MinorSpec:
    if args.rows is None:
        raise UsageError("--rows is required")
    cols = args.cols if args.cols is not None else args.rows
    return MinorSpec(args.n, args.rows, cols)


def _need_squarefree(args, n: int) -> None:
    if not is_squarefree(n) and not getattr(args, "allow_nonsquarefree", False):
        raise UsageError(f"{n} is not square-free; pass --allow-nonsquarefree to run anyway")


# --- handlers: each returns (report, exit code) ----------------------------------


def cmd_minor(args):
    spec = _spec(args)
    val = fourier_minor(spec)
    return {"spec": spec.as_dict(), "coeffs": list(val.coeffs), "value": repr(val), "zero": val.is_zero()}, 0


def cmd_norm(args):
    spec = _spec(args)
    budget = args.factor_budget if args.factor_budget is not None else DEFAULT_BUDGET
    rep = minor_norm(spec, backend=args.backend, factor_budget=budget)
    fac = rep.factorization
    return {
        "spec": spec.as_dict(),
        "norm": str(rep.norm),
        "factors": [[str(p), e] for p, e in fac.primes] if fac else [],
        "composite_cofactors": [[str(c), e] for c, e in fac.composites] if fac else [],
        "text": rep.format(),
        "backend": rep.backend,
    }, (0 if rep.nonzero else 1)


def cmd_classify(args):
    spec = _spec(args)
    return {"spec": spec.as_dict(), **classify(spec).as_dict()}, 0


def _campaign_kw(args) -> dict:
    return {
        "workers": args.workers,
        "checkpoint": args.checkpoint,
        "factor_budget": args.factor_budget,
        "allow_nonsquarefree": args.allow_nonsquarefree,
        "max_size": args.max_size,
    }


def _exit_for(rep: dict) -> int:
    return {"pass": 0, "fail": 1}.get(rep["verdict"], 2)


def cmd_verify(args):
    _need_squarefree(args, args.n)
    cfg = campaign.CampaignConfig(
        order=args.n, family=args.family, d=args.d, characteristic=args.char or 0, **_campaign_kw(args)
    )
    rep = campaign.verify_family(cfg)
    return rep, _exit_for(rep)


def cmd_charp(args):
    _need_squarefree(args, args.n)
    p = args.char or args.q
    if not p:
        raise UsageError("charp needs --char (or --q)")
    rep = campaign.char_p_verify(args.n, p, args.family, args.d, **_campaign_kw(args))
    return rep, _exit_for(rep)


def cmd_chebprop(args):
    if not args.q:
        raise UsageError("chebprop needs --q")
    kw = _campaign_kw(args)
    kw.pop("allow_nonsquarefree")
    v = campaign.chebotarev_property(args.n, args.q, **kw)
    return {**v.as_dict(), "digest": v.report["digest"], "counts": v.report["counts"]}, (0 if v.holds else 1)


def cmd_certify(args):
    if not is_squarefree(args.n):
        raise UsageError(f"{args.n} is not square-free")
    strategy = args.strategy.split(",") if args.strategy else campaign.RULES
    kw = {"workers": args.workers}
    res = campaign.certify(args.n, strategy, split=args.split, campaign_kw=kw)
    if isinstance(res, campaign.Certificate):
        return {"certified": True, **res.as_dict()}, 0
    return res.as_dict(), 1


def cmd_gamma(args):
    p = args.n
    if not isprime(p) or p < 3:
        raise UsageError("gamma needs a prime --n >= 3")
    sizes = {str(n): str(bounds.gamma_n(p, n)) for n in range(2, p)}
    return {"p": p, "gamma_n": sizes, "Gamma": str(bounds.Gamma(p))}, 0


def cmd_threshold(args):
    if args.prefix is not None:
        if args.next is None:
            raise UsageError("--prefix needs --next")
        rep = bounds.chain_threshold_holds(args.prefix, args.next)
    elif args.n and args.q:
        rep = bounds.zhang_threshold_holds(args.n, args.q)
    else:
        raise UsageError("give --prefix and --next, or --n p and --q q")
    d = {k: (str(v) if isinstance(v, int) and not isinstance(v, bool) else v) for k, v in rep.as_dict().items()}
    return d, (0 if rep.holds else 1)


def cmd_kron_check(args):
    N = args.n
    splits = [(m, N // m) for m in range(2, N) if N % m == 0 and N // m >= 2 and math.gcd(m, N // m) == 1]
    if not splits:
        raise UsageError(f"{N} has no coprime factorization m*n with m, n >= 2")
    results = [{"m": m, "n": n, "holds": structure.verify_kron_equivalence(m, n)} for m, n in splits]
    return {"order": N, "splits": results}, (0 if all(r["holds"] for r in results) else 1)


def cmd_block_check(args):
    rng = random.Random(args.seed)
    done = skipped = 0
    mismatches = []
    while done < args.trials:
        bs = _random_block(rng)
        try:
            v = structure.block_determinant(bs)
        except structure.ZeroPivotError:
            skipped += 1
            continue
        direct = structure.det(bs.assemble())
        if v != direct:
            mismatches.append({"widths": bs.widths, "a": bs.a, "formula": str(v), "direct": str(direct)})
        done += 1
    return {"trials": done, "skipped_zero_pivot": skipped, "seed": args.seed, "mismatches": mismatches}, (
        1 if mismatches else 0
    )


def _random_block(rng: random.Random) -> structure.BlockSpec:
    n = rng.randint(1, 4)
    widths = sorted((rng.randint(0, 4) for _ in range(n)), reverse=True)
    a = [[rng.randint(-5, 5) for _ in range(n)] for _ in range(n)]
    base = [[[rng.randint(-5, 5) for _ in range(widths[0])] for _ in range(widths[i])] for i in range(n)]
    return structure.BlockSpec(a, widths, base)


# --- human rendering -----------------------------------------------------------


def _render_campaign(rep: dict) -> list[str]:
    cfg = rep["config"]
    head = f"F_{cfg['order']} {cfg['family']}"
    if cfg.get("d"):
        head += f" (d={cfg['d']})"
    if cfg["characteristic"]:
        head += f" in characteristic {cfg['characteristic']}"
    lines = [
        f"{head}: {rep['verdict'].upper()}",
        f"sizes 1..{cfg['max_size']}, {rep['orbits']} orbits covering {rep['members_covered']}/{rep['family_members']} members",
        "counts: " + ", ".join(f"{k}={v}" for k, v in rep["counts"].items()),
        f"digest {rep['digest']}",
    ]
    for w in rep["witnesses"]:
        lines.append(f"witness rows={w['rows']} cols={w['cols']} orbit size {w['orbit_size']} norm {w['norm']}")
    return lines


def _render_tree(node: dict, depth: int = 0) -> list[str]:
    pad = "  " * depth
    if "threshold" in node:
        t = node["threshold"]
        return [f"{pad}- bound {t['description']}: {'holds' if t['holds'] else 'fails'}"]
    if "campaign" in node:
        return [f"{pad}- campaign {node['campaign'][:16]} complete={node['complete']} orbits={node['orbits']}"]
    out = [f"{pad}- [{node['rule']}] {node['statement']}"]
    for k in node.get("children", []):
        out += _render_tree(k, depth + 1)
    return out


def render(verb: str, rep: dict) -> str:
    if verb in ("verify", "charp"):
        lines = _render_campaign(rep)
    elif verb == "minor":
        lines = [f"D = {rep['value']}"]
    elif verb == "norm":
        lines = [rep["text"]]
    elif verb == "classify":
        lines = [f"principal: {rep['principal']}"]
        for d, v in rep["d_principal"].items():
            s = rep["d_galois"][d]
            lines.append(f"d={d}: d-principal={v} galois-multiplier={s}")
    elif verb == "chebprop":
        lines = [f"F_{rep['order']} {'has' if rep['holds'] else 'lacks'} the {rep['q']}-Chebotarev property"]
        lines += [f"witness rows={w['rows']} cols={w['cols']} norm {w['norm']}" for w in rep["witnesses"]]
    elif verb == "certify":
        if rep.get("certified"):
            lines = [f"certified: {rep['claim']} (rule {rep['rule']})"] + _render_tree(rep["tree"])
        else:
            lines = [f"no certificate for N={rep['order']}"] + [json.dumps(a) for a in rep["attempts"]]
    elif verb == "gamma":
        lines = [f"gamma_{n} = {v}" for n, v in rep["gamma_n"].items()] + [f"Gamma_{rep['p']} = {rep['Gamma']}"]
    elif verb == "threshold":
        lines = [f"{rep['description']}: {'holds' if rep['holds'] else 'fails'}", f"lhs = {rep['lhs']}", f"rhs = {rep['rhs']}"]
        if "threshold_floor" in rep:
            exact = "exactly" if rep["threshold_exact"] else "floor"
            lines.append(f"threshold = {rep['threshold_floor']} ({exact})")
    elif verb == "kron-check":
        lines = [f"{r['m']} x {r['n']}: {'ok' if r['holds'] else 'MISMATCH'}" for r in rep["splits"]]
    elif verb == "block-check":
        lines = [
            f"{rep['trials']} block matrices checked, {len(rep['mismatches'])} mismatches "
            f"({rep['skipped_zero_pivot']} skipped for a zero pivot)"
        ]
    else:
        lines = [json.dumps(rep)]
    return "\n".join(lines)


# --- parser --------------------------------------------------------------------

VERBS: dict[str, tuple[Callable, str]] = {
    "minor": (cmd_minor, "Exact value in Z[w] of the minor of F_N with the given rows and columns."),
    "norm": (cmd_norm, "Integer norm of a minor of F_N and its factorization; the minor is nonzero iff the norm is."),
    "classify": (cmd_classify, "Principal, d-principal and d-Galois-principal flags of a minor for every divisor d of N."),
    "verify": (
        cmd_verify,
        "Check that every minor of a family (principal by default) of F_N is nonzero, "
        "one affine orbit at a time, up to size N/2; larger sizes follow by complementarity.",
    ),
    "charp": (
        cmd_charp,
        "Check that every principal (or family) minor of F_N' stays nonzero in characteristic p, "
        "i.e. p divides none of their norms.  This is the hypothesis that lifts to F_{pN'}.",
    ),
    "chebprop": (
        cmd_chebprop,
        "Decide whether F_M has the q-Chebotarev property: no minor norm of F_M is divisible by q.",
    ),
    "certify": (
        cmd_certify,
        "Certify that all principal minors of F_N are nonzero, trying in order: N prime, "
        "a characteristic-p check on F_{N/p}, the prime threshold chain, and the Hadamard bound lift.",
    ),
    "gamma": (cmd_gamma, "gamma_n and Gamma_p: largest values at (1,...,1) of Schur polynomials with exponents below p."),
    "threshold": (
        cmd_threshold,
        "Exact threshold comparisons: --prefix/--next decides p_next > (P/2)^(P*phi(P)/4); "
        "--n p --q q decides q^r > Gamma_p^(p-1) with r the order of q mod p.",
    ),
    "kron-check": (
        cmd_kron_check,
        "Check entrywise that F_N with CRT-permuted rows and columns equals F_m (x) F_n for every coprime split N = mn.",
    ),
    "block-check": (
        cmd_block_check,
        "Compare the product formula for block matrices with nested column prefixes against direct determinants.",
    ),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fourier-minors", description="Exact checks on minors of Fourier matrices.")
    sub = parser.add_subparsers(dest="verb", required=True, metavar="VERB")
    for verb, (_, helptext) in VERBS.items():
        p = sub.add_parser(verb, help=helptext.split(".")[0], description=helptext)
        p.add_argument("--n", type=int, required=verb not in ("threshold", "block-check"), help="order N (or p, M)")
        p.add_argument("--json", action="store_true", help="print the report as one JSON document")
        if verb in ("minor", "norm", "classify"):
            p.add_argument("--rows", type=_index_list, help="row indices, e.g. 0,1,3")
            p.add_argument("--cols", type=_index_list, help="column indices (default: same as rows)")
        if verb == "norm":
            p.add_argument("--backend", choices=["modular", "resultant"], default="modular")
            p.add_argument("--factor-budget", type=int, default=None, help="Pollard rho step budget")
        if verb in ("verify", "charp", "chebprop"):
            p.add_argument("--family", choices=symmetry.FAMILIES, default="principal")
            p.add_argument("--d", type=int, help="divisor for d-principal families")
            p.add_argument("--char", type=int, default=0, help="characteristic (0 or a prime not dividing N)")
            p.add_argument("--q", type=int, help="prime q")
            p.add_argument("--max-size", type=int, help="largest minor size (default N/2)")
            p.add_argument("--workers", type=int, default=1)
            p.add_argument("--checkpoint", help="JSONL checkpoint to append to / resume from")
            p.add_argument("--factor-budget", type=int, default=None, help="factor norms with this rho budget")
            p.add_argument("--allow-nonsquarefree", action="store_true", help="permit N with a square factor")
        if verb == "certify":
            p.add_argument("--strategy", help=f"comma-separated rules from {','.join(campaign.RULES)}")
            p.add_argument("--split", type=int, help="prime p to split off for the lift rules")
            p.add_argument("--workers", type=int, default=1)
        if verb == "threshold":
            p.add_argument("--prefix", type=_index_list, help="increasing primes, e.g. 2,3")
            p.add_argument("--next", type=int, help="next prime")
            p.add_argument("--q", type=int, help="prime q for the Gamma_p threshold")
        if verb == "block-check":
            p.add_argument("--trials", type=int, default=200)
            p.add_argument("--seed", type=int, default=0)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    handler = VERBS[args.verb][0]
    try:
        rep, code = handler(args)
    except (UsageError, InvalidSpecError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # internal failure, reported rather than traced
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    if args.json:
        print(json.dumps({"command": args.verb, "exit_code": code, "report": rep}, sort_keys=True, indent=2))
    else:
        print(render(args.verb, rep))
    return code


if __name__ == "__main__":
    sys.exit(main())

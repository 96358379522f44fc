"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 input error, 3 resource limit.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from . import bundles, eclass, manifold, verify
from .core import PreconditionError, ResourceLimitError

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_RESOURCE = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="emit JSON")
    p.add_argument("--threads", type=int, default=argparse.SUPPRESS,
                   help="worker threads for residue search (default: $SU2B_THREADS or 1)")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    p = _Parser(prog="su2bundles", parents=[common],
                description="SU(2)-bundles over 3-connected 8-dimensional Poincare duality complexes")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("invariants", parents=[common], help="k, parity, sigma, stable vector")
    s.add_argument("file")

    s = sub.add_parser("bundles", parents=[common], help="existence or enumeration of admissible classes")
    s.add_argument("file")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--exists", action="store_true")
    g.add_argument("--enumerate", action="store_true")

    s = sub.add_parser("lambda", parents=[common], help="lambda of one class")
    s.add_argument("file")
    s.add_argument("--psi", required=True, help="comma-separated integers")

    s = sub.add_parser("achievable", parents=[common], help="all achievable lambda values")
    s.add_argument("file")
    s.add_argument("--lift-radius", type=int, default=24)
    s.add_argument("--budget", type=int, default=None)

    s = sub.add_parser("classify-e", parents=[common], help="normal form of an 11-complex")
    s.add_argument("efile")

    s = sub.add_parser("equal-e", parents=[common], help="decide homotopy equivalence of two 11-complexes")
    s.add_argument("efile1")
    s.add_argument("efile2")

    sub.add_parser("table1", parents=[common], help="rank-one homotopy classes")

    s = sub.add_parser("verify", parents=[common], help="run a verification suite")
    s.add_argument("--suite", required=True, choices=verify.SUITES)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--samples", type=int, default=None)
    s.add_argument("--budget", type=int, default=None)
    s.add_argument("--timings", action="store_true", help="include wall-clock seconds in JSON")
    return p


def _emit(args, payload: dict, text: str):
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False))
    else:
        print(text)


def _parse_psi(raw: str, k: int) -> tuple[int, ...]:
    try:
        psi = tuple(int(x) for x in raw.split(","))
    except ValueError:
        raise manifold.InputError(f"--psi: expected comma-separated integers, got {raw!r}") from None
    if len(psi) != k:
        raise manifold.InputError(f"--psi: expected {k} entries, got {len(psi)}")
    return psi


def _total_space(rank: int) -> str:
    return "S⁴×S⁷" if rank == 1 else f"#^{rank}(S⁴×S⁷)"


def cmd_invariants(args) -> int:
    M = manifold.load_presentation(args.file)
    v = list(manifold.stable_vector(M.L))
    out = {"k": M.k, "parity": manifold.parity(M).value, "sigma": manifold.sigma(M),
           "stable_vector": v, "stably_trivial": manifold.is_stably_trivial(M)}
    _emit(args, out, "\n".join(f"{k}: {val}" for k, val in out.items()))
    return EXIT_OK


def cmd_bundles(args) -> int:
    M = manifold.load_presentation(args.file)
    sols = bundles.enumerate_admissible_residues(M, threads=args.threads)
    if args.enumerate:
        residues = sorted(sols)
        out = {"exists": bool(residues), "count": len(residues), "residues": [list(r) for r in residues]}
        text = "\n".join([f"{len(residues)} admissible residue classes mod 24"]
                         + [",".join(map(str, r)) for r in residues])
    else:
        out = {"exists": bool(sols)}
        text = "admissible class exists" if sols else "no admissible class"
    _emit(args, out, text)
    return EXIT_OK


def cmd_lambda(args) -> int:
    M = manifold.load_presentation(args.file)
    psi = _parse_psi(args.psi, M.k)
    adm = bundles.admissibility(M, psi)
    if not adm.ok:
        raise manifold.InputError(f"--psi: class {psi} is not admissible ({adm.reason})")
    inv = bundles.bundle_invariants(M, psi)
    nf = verify.total_space_normal_form(M, inv.lam)
    out = {"psi": list(psi), "lambda": inv.lam, "epsilon_s": inv.epsilon_s,
           "total_space": _total_space(M.k - 1) if nf else None}
    text = f"lambda = {inv.lam}"
    if nf:
        text += f"; E ≃ {_total_space(M.k - 1)}"
    else:
        text += f"; eps_s = {inv.epsilon_s}"
    _emit(args, out, text)
    return EXIT_OK


def cmd_achievable(args) -> int:
    M = manifold.load_presentation(args.file)
    res = bundles.achievable_lambdas(M, lift_radius=args.lift_radius, budget=args.budget,
                                     threads=args.threads)
    out = {"sigma": manifold.sigma(M), "values": list(res.values),
           "witnesses": {str(l): list(x) for l, x in res.witnesses.items()},
           "box_misses": [list(x) for x in res.box_misses],
           "mod24_dependence": res.mod24_dependence, "states_visited": res.states_visited}
    lines = [f"sigma = {out['sigma']}", "lambda values: " + (", ".join(map(str, res.values)) or "none")]
    lines += [f"  lambda = {l}: psi = {','.join(map(str, x))}" for l, x in res.witnesses.items()]
    if res.box_misses:
        lines.append(f"warning: {len(res.box_misses)} residue groups had no primitive lift "
                     f"within radius {args.lift_radius}; the value set may be incomplete")
    _emit(args, out, "\n".join(lines))
    return EXIT_OK


def _nf_payload(E: eclass.EPresentation) -> dict:
    nf = eclass.normal_form(E)
    lam_s, eps_s = eclass.stable_invariants(E)
    return {"rank": nf.rank, "lambda_s": nf.lambda_s, "eps_hat": nf.eps_hat,
            "tail": list(nf.tail.as_tuple()), "normal_form": nf.describe(),
            "stable": {"lambda_s": lam_s, "eps_s": eps_s}}


def cmd_classify_e(args) -> int:
    E = eclass.load_epresentation(args.efile)
    out = _nf_payload(E)
    text = (f"normal form: {out['normal_form']}\n"
            f"lambda_s = {out['stable']['lambda_s']}, eps_s = {out['stable']['eps_s']}")
    _emit(args, out, text)
    return EXIT_OK


def cmd_equal_e(args) -> int:
    E1 = eclass.load_epresentation(args.efile1)
    E2 = eclass.load_epresentation(args.efile2)
    verdict = eclass.homotopy_equal(E1, E2).value
    out = {"result": verdict, "left": _nf_payload(E1), "right": _nf_payload(E2)}
    _emit(args, out, verdict)
    return EXIT_OK


def cmd_table1(args) -> int:
    rows = eclass.table1_display()
    out = {"rows": [{"lambda": lam, "count": len(cs), "classes": [list(c.as_tuple()) for c in cs]}
                    for lam, cs in rows.items()]}
    lines = [f"{lam:>2}  {len(cs):>2}  " + ", ".join(str(c) for c in cs) for lam, cs in rows.items()]
    _emit(args, out, "\n".join(lines))
    return EXIT_OK


def cmd_verify(args) -> int:
    reports = verify.run_suite(args.suite, seed=args.seed, samples=args.samples, budget=args.budget)
    if args.json:
        docs = [r.to_dict() for r in reports]
        if not args.timings:
            for d in docs:
                d.pop("seconds")
        print(json.dumps({"suite": args.suite, "seed": args.seed, "reports": docs},
                         indent=2, sort_keys=True, ensure_ascii=False))
    else:
        print(verify.render_table(reports))
    return EXIT_FAIL if any(r.status == verify.FAIL for r in reports) else EXIT_OK


COMMANDS = {"invariants": cmd_invariants, "bundles": cmd_bundles, "lambda": cmd_lambda,
            "achievable": cmd_achievable, "classify-e": cmd_classify_e, "equal-e": cmd_equal_e,
            "table1": cmd_table1, "verify": cmd_verify}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    args.json = getattr(args, "json", False)
    args.threads = getattr(args, "threads", None)
    if args.threads is not None:
        if args.threads < 1:
            print("su2bundles: error: --threads must be positive", file=sys.stderr)
            return EXIT_INPUT
        os.environ["SU2B_THREADS"] = str(args.threads)
    try:
        return COMMANDS[args.command](args)
    except ResourceLimitError as exc:
        print(f"su2bundles: resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (manifold.InputError, PreconditionError) as exc:
        print(f"su2bundles: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())

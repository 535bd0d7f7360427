"""Command-line front door: a thin client of the twinprep service.

By default every subcommand talks to the FastAPI app in-process (no
server needed); pass --server URL to use a running instance instead.
File I/O stays on the client side so exit codes reflect local failures:
0 ok, 1 verify failure, 2 usage, 3 I/O, 4 input validation.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import os
import sys
from typing import Optional

import httpx

EXIT_OK = 0
EXIT_VERIFY_FAILURE = 1
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_INVALID_INPUT = 4

API_PREFIX = "/api/v1"


class ServiceClient:
    """POSTs to a remote server when given one, else to the in-process app."""

    def __init__(self, server: Optional[str] = None):
        self.server = server

    def post(self, path: str, payload: dict) -> httpx.Response:
        if self.server:
            with httpx.Client(base_url=self.server, timeout=600.0) as client:
                return client.post(API_PREFIX + path, json=payload)
        from .service.app import create_app

        async def _call() -> httpx.Response:
            transport = httpx.ASGITransport(app=create_app())
            async with httpx.AsyncClient(
                transport=transport, base_url="http://twinprep.local", timeout=None
            ) as client:
                return await client.post(API_PREFIX + path, json=payload)

        return asyncio.run(_call())


def _detail_message(response: httpx.Response) -> str:
    try:
        detail = response.json().get("detail")
    except ValueError:
        return response.text
    if isinstance(detail, dict):
        invariant = detail.get("invariant")
        message = detail.get("message", "")
        return f"{invariant}: {message}" if invariant else message
    return str(detail)


def _spec_payload(args: argparse.Namespace) -> dict:
    return {
        "mode": args.mode,
        "phi": args.phi,
        "theta": args.theta,
        "alpha": args.alpha,
    }


def cmd_run(args: argparse.Namespace) -> int:
    response = ServiceClient(args.server).post("/protocol/run", _spec_payload(args))
    if response.status_code == 422:
        print(f"error: {_detail_message(response)}", file=sys.stderr)
        return EXIT_USAGE
    response.raise_for_status()
    body = response.json()
    if args.json:
        print(json.dumps(body))
        return EXIT_OK
    print(f"mode: {body['mode']}")
    for key in ("phi", "theta", "alpha"):
        if body[key] is not None:
            print(f"{key}: {body[key]!r}")
    for o in body["outcomes"]:
        print(f"outcome {o['outcome_bit']}: probability={o['probability']!r} "
              f"fidelity_B={o['fidelity_B']!r} fidelity_C={o['fidelity_C']!r}")
    if body["pole_fidelity"] is not None:
        print(f"pole formula (1+alpha^2)/2: {body['pole_fidelity']!r}")
        if body["pole_mismatch"]:
            print("note: pole formula DISAGREES with the simulated fidelity at this "
                  "theta (expected away from theta=0 unless alpha^2 = 2/3)")
    return EXIT_OK


def cmd_tradeoff(args: argparse.Namespace) -> int:
    payload = {"alpha_steps": args.alpha_steps, "gap_tol": args.gap_tol,
               "max_iters": args.max_iters}
    response = ServiceClient(args.server).post("/tradeoff", payload)
    if response.status_code == 422:
        print(f"error: {_detail_message(response)}", file=sys.stderr)
        return EXIT_USAGE
    response.raise_for_status()
    body = response.json()
    try:
        with open(args.out, "w", encoding="ascii") as fh:
            fh.write(body["csv_text"])
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_IO
    print(f"wrote {args.out}")
    print(f"note: {body['note']}")
    return EXIT_OK


def cmd_ere(args: argparse.Namespace) -> int:
    try:
        with open(args.input, "r", encoding="ascii") as fh:
            matrix_text = fh.read()
    except OSError as exc:
        print(f"error: cannot read {args.input}: {exc}", file=sys.stderr)
        return EXIT_IO
    payload = {"matrix_text": matrix_text, "gap_tol": args.gap_tol,
               "max_iters": args.max_iters}
    response = ServiceClient(args.server).post("/ree", payload)
    if response.status_code == 422:
        print(f"error: {_detail_message(response)}", file=sys.stderr)
        return EXIT_INVALID_INPUT
    response.raise_for_status()
    body = response.json()
    sigma_path = args.input + ".sigma"
    try:
        with open(sigma_path, "w", encoding="ascii") as fh:
            fh.write(body["sigma_text"])
    except OSError as exc:
        print(f"error: cannot write {sigma_path}: {exc}", file=sys.stderr)
        return EXIT_IO
    if args.json:
        print(json.dumps(body))
        return EXIT_OK
    print(f"value_bits: {body['value_bits']!r}")
    print(f"gap_bits: {body['gap_bits']!r}")
    print(f"certified lower bound: {body['lower_bound_bits']!r}")
    print(f"iterations: {body['iterations']}  converged: {body['converged']}")
    print(f"concurrence: {body['concurrence']!r}  eof_bits: {body['eof_bits']!r}")
    claims = body["reference_claims"]
    print(f"reference claims (a:B cut): equatorial {claims['equatorial']}, "
          f"polar {claims['polar']}")
    print(f"note: {body['note']}")
    print(f"closest separable state written to {sigma_path}")
    return EXIT_OK


def cmd_locc(args: argparse.Namespace) -> int:
    client = ServiceClient(args.server)
    if args.replay:
        try:
            with open(args.replay, "r", encoding="ascii") as fh:
                transcript_text = fh.read()
        except OSError as exc:
            print(f"error: cannot read {args.replay}: {exc}", file=sys.stderr)
            return EXIT_IO
        response = client.post("/locc/replay", {"transcript_text": transcript_text})
        if response.status_code == 422:
            print(f"error: {_detail_message(response)}", file=sys.stderr)
            return EXIT_INVALID_INPUT
        response.raise_for_status()
        body = response.json()
        print(f"replay matches: {body['matches']}")
        print(f"final report: B={body['fidelity_B']!r} C={body['fidelity_C']!r}")
        return EXIT_OK if body["matches"] else EXIT_INVALID_INPUT

    if args.mode is None:
        print("error: locc needs either --mode or --replay", file=sys.stderr)
        return EXIT_USAGE
    payload = _spec_payload(args)
    payload["topology"] = args.topology
    payload["seed"] = args.seed
    response = client.post("/locc/session", payload)
    if response.status_code == 422:
        print(f"error: {_detail_message(response)}", file=sys.stderr)
        return EXIT_USAGE
    response.raise_for_status()
    body = response.json()
    out_path = args.out or f"rsp-transcript-seed{args.seed}.txt"
    try:
        with open(out_path, "w", encoding="ascii") as fh:
            fh.write(body["transcript_text"])
    except OSError as exc:
        print(f"error: cannot write {out_path}: {exc}", file=sys.stderr)
        return EXIT_IO
    print(f"wrote {out_path}")
    print(f"classical cost: {body['classical_cost_bits']} bit")
    print(f"outcome bit: {body['outcome_bit']}")
    print(f"final report: B={body['fidelity_B']!r} C={body['fidelity_C']!r}")
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    payload = {"criteria": args.criterion or None}
    response = ServiceClient(args.server).post("/verify", payload)
    response.raise_for_status()
    body = response.json()
    if args.json:
        for record in body["results"]:
            print(json.dumps(record))
    else:
        for r in body["results"]:
            status = "PASS" if r["passed"] else "FAIL"
            print(f"[{status}] criterion {r['cid']:2d} ({r['seconds']:6.2f}s): "
                  f"{r['label']}\n         {r['detail']}")
        verdict = "all criteria passed" if body["all_passed"] else "FAILURES PRESENT"
        print(verdict)
    return EXIT_OK if body["all_passed"] else EXIT_VERIFY_FAILURE


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def _add_spec_flags(parser: argparse.ArgumentParser, required: bool = True) -> None:
    parser.add_argument("--mode", required=required,
                        choices=["equatorial", "polar", "general-alpha"])
    parser.add_argument("--phi", type=float, help="equatorial angle in radians")
    parser.add_argument("--theta", type=float, help="polar angle in radians")
    parser.add_argument("--alpha", type=float, help="clone weight in [0, 1]")


def _add_server_flag(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--server", default=os.environ.get("TWINPREP_SERVER"),
                        help="URL of a running twinprep service (default: in-process)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twinprep",
        description="Remote preparation of two qubit-state instances: protocol runs, "
                    "entanglement-fidelity sweeps, REE solving, LOCC sessions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="resolve both protocol branches for one spec")
    _add_spec_flags(p_run)
    p_run.add_argument("--json", action="store_true")
    _add_server_flag(p_run)
    p_run.set_defaults(func=cmd_run)

    p_trade = sub.add_parser("tradeoff", help="write the entanglement-fidelity sweep CSV")
    p_trade.add_argument("--alpha-steps", type=int, default=9)
    p_trade.add_argument("--out", required=True)
    p_trade.add_argument("--gap-tol", type=float, default=1e-4)
    p_trade.add_argument("--max-iters", type=int, default=2000)
    _add_server_flag(p_trade)
    p_trade.set_defaults(func=cmd_tradeoff)

    p_ere = sub.add_parser("ere", help="minimize relative entropy over separable states")
    p_ere.add_argument("input", help="complex-matrix v1 file holding a two-qubit state")
    p_ere.add_argument("--gap-tol", type=float, default=1e-4)
    p_ere.add_argument("--max-iters", type=int, default=2000)
    p_ere.add_argument("--json", action="store_true")
    _add_server_flag(p_ere)
    p_ere.set_defaults(func=cmd_ere)

    p_locc = sub.add_parser("locc", help="run or replay a sampled LOCC session")
    _add_spec_flags(p_locc, required=False)
    p_locc.add_argument("--seed", type=int,
                        default=int(os.environ.get("RSP_SEED", "0")))
    p_locc.add_argument("--topology", choices=["standard", "same-location"],
                        default="standard")
    p_locc.add_argument("--out", help="transcript path (default rsp-transcript-seed<N>.txt)")
    p_locc.add_argument("--replay", help="replay a transcript file instead of sampling")
    _add_server_flag(p_locc)
    p_locc.set_defaults(func=cmd_locc)

    p_verify = sub.add_parser("verify", help="run the acceptance criteria")
    p_verify.add_argument("--json", action="store_true",
                          help="emit one JSON record per criterion")
    p_verify.add_argument("--criterion", type=int, action="append",
                          help="restrict to the given criterion id (repeatable)")
    _add_server_flag(p_verify)
    p_verify.set_defaults(func=cmd_verify)

    p_serve = sub.add_parser("serve", help="host the service with uvicorn")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.set_defaults(func=cmd_serve)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except httpx.HTTPError as exc:
        print(f"error: service request failed: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())

"""Command-line client for the solver service.

Every subcommand speaks the HTTP API.  By default the requests run against
an in-process application instance, so no server is needed and results are
deterministic functions of (input bytes, flags, seed); ``--server URL``
points the same client at a running deployment instead.

Exit codes: 0 success, 2 invalid input, 3 resource cap exceeded,
4 precondition violated.
"""

from __future__ import annotations

import argparse
import asyncio
import hashlib
import sys
import time
from pathlib import Path
from typing import Any, Callable, Optional

import httpx

from .acyclic import EXACT_SOLVER_CAP, exact_memory_estimate
from .service.models import RunReport

_KIND_EXIT = {"invalid-input": 2, "cap-exceeded": 3, "precondition": 4}


class ClientTransportError(Exception):
    pass


class ServiceClient:
    """Thin HTTP client; in-process unless a server URL is given."""

    def __init__(self, server: Optional[str] = None):
        self._server = server
        self._app = None

    def _application(self):
        if self._app is None:
            from .service.app import create_app

            self._app = create_app()
        return self._app

    def post(self, path: str, payload: dict) -> tuple[int, Any]:
        return self._request("POST", path, payload)

    def get(self, path: str) -> tuple[int, Any]:
        return self._request("GET", path, None)

    def _request(self, method: str, path: str, payload: Optional[dict]) -> tuple[int, Any]:
        if self._server:
            try:
                with httpx.Client(base_url=self._server, timeout=600.0) as client:
                    response = client.request(method, path, json=payload)
            except httpx.HTTPError as exc:
                raise ClientTransportError(f"cannot reach {self._server}: {exc}") from None
        else:

            async def go() -> httpx.Response:
                transport = httpx.ASGITransport(app=self._application())
                async with httpx.AsyncClient(
                    transport=transport, base_url="http://arcfire.internal", timeout=600.0
                ) as client:
                    return await client.request(method, path, json=payload)

            response = asyncio.run(go())
        try:
            body = response.json()
        except ValueError:
            raise ClientTransportError(
                f"non-JSON response (HTTP {response.status_code})"
            ) from None
        return response.status_code, body


def _fail(status: int, body: Any) -> int:
    if isinstance(body, dict):
        error = body.get("error")
        if isinstance(error, dict) and "message" in error:
            print(f"error: {error['message']}", file=sys.stderr)
            return _KIND_EXIT.get(error.get("kind"), 2)
        if "detail" in body:
            print(f"error: {body['detail']}", file=sys.stderr)
            return 2
    print(f"error: unexpected response (HTTP {status})", file=sys.stderr)
    return 2


def _digest(*parts: bytes) -> str:
    h = hashlib.sha256()
    for part in parts:
        h.update(part)
        h.update(b"\x00")
    return f"sha256:{h.hexdigest()}"


def _read_file(path: str) -> Optional[bytes]:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        print(f"error: cannot read {path}: {exc}", file=sys.stderr)
        return None


def _decode(raw: bytes, path: str) -> Optional[str]:
    try:
        return raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        print(f"error: {path} is not UTF-8 text: {exc}", file=sys.stderr)
        return None


def _announce_cap(max_exact_n: Optional[int]) -> None:
    if max_exact_n is not None and max_exact_n > EXACT_SOLVER_CAP:
        estimate = exact_memory_estimate(max_exact_n)
        print(
            f"raising the exact-solver cap to n={max_exact_n}: the subset table "
            f"may need about {estimate:,} bytes",
            file=sys.stderr,
        )


def _emit(
    args: argparse.Namespace,
    command: str,
    argv: list[str],
    digest: str,
    result: dict,
    ms: float,
    caps_hit: list[str],
    render: Callable[[dict], str],
) -> int:
    if args.format == "json":
        report = RunReport(
            command=command,
            argv=argv,
            input_digest=digest,
            result=result,
            ms=round(ms, 3),
            caps_hit=caps_hit,
        )
        print(report.model_dump_json(indent=2))
    else:
        text = render(result)
        if text:
            print(text)
    return 0


# -- subcommands ---------------------------------------------------------------


def _cmd_minfas(args: argparse.Namespace, client: ServiceClient, argv: list[str]) -> int:
    raw = _read_file(args.graph_file)
    if raw is None:
        return 2
    text = _decode(raw, args.graph_file)
    if text is None:
        return 2
    _announce_cap(args.max_exact_n)
    payload: dict[str, Any] = {
        "graph": text,
        "mode": "heuristic" if args.heuristic else "exact",
        "emit_witness": bool(args.emit_witness),
    }
    if args.max_exact_n is not None:
        payload["max_exact_n"] = args.max_exact_n
    started = time.perf_counter()
    status, body = client.post("/minfas", payload)
    ms = (time.perf_counter() - started) * 1000.0
    if status >= 400:
        return _fail(status, body)

    def render(result: dict) -> str:
        label = "size" if result["optimal"] else "upper bound"
        lines = [
            f"n: {result['n']}",
            f"m: {result['m']}",
            f"mode: {result['mode']}",
            f"{label}: {result['size']}",
        ]
        if result.get("witness") is not None:
            arcs = " ".join(f"{u}->{v}" for u, v in result["witness"])
            lines.append(f"witness: {arcs}" if arcs else "witness: (empty)")
        return "\n".join(lines)

    return _emit(args, "minfas", argv, _digest(raw), body, ms, [], render)


def _cmd_eulerianize(args: argparse.Namespace, client: ServiceClient, argv: list[str]) -> int:
    raw = _read_file(args.graph_file)
    if raw is None:
        return 2
    text = _decode(raw, args.graph_file)
    if text is None:
        return 2
    started = time.perf_counter()
    status, body = client.post("/eulerianize", {"graph": text})
    ms = (time.perf_counter() - started) * 1000.0
    if status >= 400:
        return _fail(status, body)
    if args.out:
        Path(args.out).write_text(body["lifted"])

    def render(result: dict) -> str:
        if args.out:
            return ""
        return result["lifted"].rstrip("\n")

    return _emit(args, "eulerianize", argv, _digest(raw), body, ms, [], render)


def _cmd_minrec(args: argparse.Namespace, client: ServiceClient, argv: list[str]) -> int:
    raw = _read_file(args.graph_file)
    if raw is None:
        return 2
    text = _decode(raw, args.graph_file)
    if text is None:
        return 2
    _announce_cap(args.max_exact_n)
    payload: dict[str, Any] = {
        "graph": text,
        "sink": args.sink,
        "brute": bool(args.brute),
        "emit_config": bool(args.emit_config),
    }
    if args.max_exact_n is not None:
        payload["max_exact_n"] = args.max_exact_n
    started = time.perf_counter()
    status, body = client.post("/minrec", payload)
    ms = (time.perf_counter() - started) * 1000.0
    if status >= 400:
        return _fail(status, body)

    def render(result: dict) -> str:
        lines = [
            f"sink: {result['sink']}",
            f"route: {result['route']}",
            f"min chips: {result['min_chips']}",
        ]
        if result.get("config") is not None:
            lines.append("config:")
            lines.extend(
                f"{v} {count}" for v, count in sorted(result["config"].items(), key=lambda kv: int(kv[0]))
            )
        return "\n".join(lines)

    return _emit(args, "minrec", argv, _digest(raw), body, ms, [], render)


def _cmd_check(args: argparse.Namespace, client: ServiceClient, argv: list[str]) -> int:
    graph_raw = _read_file(args.graph_file)
    if graph_raw is None:
        return 2
    config_raw = _read_file(args.config_file)
    if config_raw is None:
        return 2
    graph_text = _decode(graph_raw, args.graph_file)
    config_text = _decode(config_raw, args.config_file)
    if graph_text is None or config_text is None:
        return 2
    payload: dict[str, Any] = {"graph": graph_text, "config": config_text}
    if args.sink is not None:
        payload["sink"] = args.sink
    started = time.perf_counter()
    status, body = client.post("/check", payload)
    ms = (time.perf_counter() - started) * 1000.0
    if status >= 400:
        return _fail(status, body)

    def render(result: dict) -> str:
        lines = [
            f"sink: {result['sink']}",
            f"total chips: {result['total_chips']}",
            f"recurrent: {str(result['recurrent']).lower()}",
        ]
        if result.get("minimal") is not None:
            lines.append(f"minimal: {str(result['minimal']).lower()}")
        if result.get("burning_order") is not None:
            lines.append("burning order: " + " ".join(map(str, result["burning_order"])))
        if result.get("unburnt") is not None:
            lines.append("unburnt: " + " ".join(map(str, result["unburnt"])))
        return "\n".join(lines)

    return _emit(args, "check", argv, _digest(graph_raw, config_raw), body, ms, [], render)


def _cmd_gen(args: argparse.Namespace, client: ServiceClient, argv: list[str]) -> int:
    payload: dict[str, Any] = {
        "n": args.n,
        "eulerian": bool(args.eulerian),
        "seed": args.seed,
    }
    if args.arcs is not None:
        payload["arcs"] = args.arcs
    digest = _digest(
        f"gen n={args.n} arcs={args.arcs} eulerian={args.eulerian} seed={args.seed}".encode()
    )
    started = time.perf_counter()
    status, body = client.post("/generate", payload)
    ms = (time.perf_counter() - started) * 1000.0
    if status >= 400:
        return _fail(status, body)
    if args.out:
        Path(args.out).write_text(body["graph"])

    def render(result: dict) -> str:
        if args.out:
            return ""
        return result["graph"].rstrip("\n")

    return _emit(args, "gen", argv, digest, body, ms, [], render)


def _cmd_bench(args: argparse.Namespace, client: ServiceClient, argv: list[str]) -> int:
    suite = Path(args.suite_dir)
    if not suite.is_dir():
        print(f"error: {args.suite_dir} is not a directory", file=sys.stderr)
        return 2
    files = sorted(
        (p for p in suite.iterdir() if p.is_file() and not p.name.startswith(".")),
        key=lambda p: p.name,
    )
    if not files:
        print(f"error: no instances in {args.suite_dir}", file=sys.stderr)
        return 2
    _announce_cap(args.max_exact_n)

    rows: list[dict[str, Any]] = []
    caps_hit: list[str] = []
    digests: list[bytes] = []
    total_started = time.perf_counter()
    for path in files:
        row: dict[str, Any] = {
            "instance": path.name,
            "n": "",
            "m": "",
            "exact": "error",
            "heuristic": "",
            "gap": "",
            "ms": 0.0,
        }
        started = time.perf_counter()
        try:
            raw = path.read_bytes()
            text = raw.decode("utf-8")
        except (OSError, UnicodeDecodeError):
            row["ms"] = round((time.perf_counter() - started) * 1000.0, 1)
            rows.append(row)
            continue
        digests.append(raw)
        status, info = client.post("/inspect", {"graph": text})
        if status >= 400:
            row["ms"] = round((time.perf_counter() - started) * 1000.0, 1)
            rows.append(row)
            continue
        row["n"], row["m"] = info["n"], info["m"]

        payload: dict[str, Any] = {"graph": text, "mode": "exact"}
        if args.max_exact_n is not None:
            payload["max_exact_n"] = args.max_exact_n
        status, body = client.post("/minfas", payload)
        if status < 400:
            row["exact"] = body["size"]
        elif isinstance(body, dict) and body.get("error", {}).get("kind") == "cap-exceeded":
            row["exact"] = "cap"
            caps_hit.append(f"exact:{path.name}")

        if info["eulerian"] and info["strongly_connected"]:
            status, body = client.post("/minfas", {"graph": text, "mode": "heuristic"})
            if status < 400:
                row["heuristic"] = body["size"]

        if isinstance(row["exact"], int) and isinstance(row["heuristic"], int):
            row["gap"] = row["heuristic"] - row["exact"]
        row["ms"] = round((time.perf_counter() - started) * 1000.0, 1)
        rows.append(row)

    total_ms = (time.perf_counter() - total_started) * 1000.0

    def render(result: dict) -> str:
        header = "instance,n,m,exact,heuristic,gap,ms"
        lines = [header]
        for row in result["rows"]:
            lines.append(
                ",".join(
                    str(row[key]) for key in ("instance", "n", "m", "exact", "heuristic", "gap", "ms")
                )
            )
        return "\n".join(lines)

    return _emit(
        args, "bench", argv, _digest(*digests), {"rows": rows}, total_ms, caps_hit, render
    )


def _cmd_serve(args: argparse.Namespace, client: ServiceClient, argv: list[str]) -> int:
    import uvicorn

    from .service.app import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port)
    return 0


# -- argument parsing ------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="arcfire",
        description="Feedback arc sets, Eulerian lifts, and chip-firing recurrence.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp: argparse.ArgumentParser) -> None:
        sp.add_argument("--format", choices=("text", "json"), default="text")
        sp.add_argument(
            "--server",
            default=None,
            help="base URL of a running service (default: run in-process)",
        )

    sp = sub.add_parser("minfas", help="minimum feedback arc set of a graph file")
    sp.add_argument("graph_file")
    mode = sp.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true", help="exact solve (default)")
    mode.add_argument("--heuristic", action="store_true", help="re-rooting upper bound")
    sp.add_argument("--emit-witness", action="store_true")
    sp.add_argument("--max-exact-n", type=int, default=None)
    common(sp)

    sp = sub.add_parser("eulerianize", help="lift a graph to an Eulerian one")
    sp.add_argument("graph_file")
    sp.add_argument("--out", default=None, help="write the lifted graph here")
    common(sp)

    sp = sub.add_parser("minrec", help="minimum chips over recurrent configurations")
    sp.add_argument("graph_file")
    sp.add_argument("--sink", type=int, default=0)
    sp.add_argument("--brute", action="store_true", help="enumerate instead of the Eulerian route")
    sp.add_argument("--emit-config", action="store_true")
    sp.add_argument("--max-exact-n", type=int, default=None)
    common(sp)

    sp = sub.add_parser("check", help="recurrence verdict for a configuration")
    sp.add_argument("graph_file")
    sp.add_argument("config_file")
    sp.add_argument("--sink", type=int, default=None)
    common(sp)

    sp = sub.add_parser("gen", help="generate a seeded random instance")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--arcs", type=int, default=None)
    sp.add_argument("--eulerian", action="store_true")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", default=None, help="write the graph here")
    common(sp)

    sp = sub.add_parser("bench", help="exact vs heuristic over a directory of graphs")
    sp.add_argument("suite_dir")
    sp.add_argument("--max-exact-n", type=int, default=None)
    common(sp)

    sp = sub.add_parser("serve", help="run the HTTP service")
    sp.add_argument("--host", default="127.0.0.1")
    sp.add_argument("--port", type=int, default=8000)

    return parser


_DISPATCH = {
    "minfas": _cmd_minfas,
    "eulerianize": _cmd_eulerianize,
    "minrec": _cmd_minrec,
    "check": _cmd_check,
    "gen": _cmd_gen,
    "bench": _cmd_bench,
    "serve": _cmd_serve,
}


def main(argv: Optional[list[str]] = None) -> int:
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else 2
    client = ServiceClient(getattr(args, "server", None))
    try:
        return _DISPATCH[args.command](args, client, argv)
    except ClientTransportError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()

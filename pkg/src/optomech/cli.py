"""Command-line client for the optomech service.

Every data command is a thin HTTP client: it reads the plain-text config
file, posts it to the service, and renders the JSON reply as CSV.  Without
``--server`` the requests run against an in-process instance of the app, so
no daemon is needed for one-off runs; pointing ``--server`` at a running
``optomech serve`` instance shares that process's eigensystem cache instead.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import httpx

from . import __version__
from .errors import DomainError
from .harness import render_csv
from .params import parse_config_file

SPECTRUM_COLUMNS = ("n", "m", "energy", "x_mean", "x_std", "n_bar", "confidence")
DYNAMICS_COLUMNS = ("t", "x_mean", "a_re", "a_im", "a_abs", "norm_drift")
COMPARE_SPECTRUM_COLUMNS = ("model", "n", "err_E", "err_x", "err_dx")
COMPARE_DYNAMICS_COLUMNS = ("model", "t", "err_x", "err_a")
CONVERGE_COLUMNS = ("model", "quantity", "n_max_from", "m_max_from",
                    "n_max_to", "m_max_to", "max_change", "tol", "converged")


class ServiceClient:
    """Minimal JSON-over-HTTP client; in-process ASGI transport by default."""

    def __init__(self, server: str | None = None, timeout: float = 600.0):
        if server:
            self._client = httpx.Client(base_url=server, timeout=timeout)
        else:
            # Drive the ASGI app directly; no daemon needed for one-off runs.
            import warnings

            with warnings.catch_warnings():
                warnings.filterwarnings("ignore", message="Using `httpx` with `starlette")
                from fastapi.testclient import TestClient

            from .service.app import create_app

            self._client = TestClient(create_app(), raise_server_exceptions=False)

    def post(self, path: str, payload: dict) -> dict:
        response = self._client.post(path, json=payload)
        if response.status_code != 200:
            try:
                detail = response.json().get("detail", response.text)
            except ValueError:
                detail = response.text
            raise SystemExit(f"error: service returned {response.status_code}: {detail}")
        return response.json()

    def close(self) -> None:
        self._client.close()


def _load_config(path: str) -> dict:
    try:
        return parse_config_file(path)
    except FileNotFoundError:
        raise SystemExit(f"error: config file not found: {path}")
    except DomainError as exc:
        raise SystemExit(f"error: {exc}")


def _config_payload(settings: dict) -> dict:
    return {key: value for key, value in settings.items()}


def _write_csv(out: str, meta: dict, columns: tuple[str, ...], rows: list[dict]) -> None:
    text = render_csv(meta, columns, [[row[column] for column in columns] for row in rows])
    Path(out).write_text(text, encoding="utf-8", newline="\n")


def _parse_ladder_arg(text: str) -> list[tuple[int, int]]:
    rungs = []
    for token in text.split(","):
        token = token.strip().lower()
        if not token:
            continue
        parts = token.split("x")
        if len(parts) != 2:
            raise SystemExit(f"error: bad ladder rung {token!r}; expected NxM")
        try:
            rungs.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise SystemExit(f"error: bad ladder rung {token!r}")
    if len(rungs) < 2:
        raise SystemExit("error: ladder needs at least two rungs, e.g. '20x30,30x45'")
    return rungs


def cmd_spectrum(args: argparse.Namespace) -> None:
    client = ServiceClient(args.server)
    payload = {"config": _config_payload(_load_config(args.config)), "model": args.model}
    reply = client.post("/api/spectrum", payload)
    _write_csv(args.out, reply["meta"], SPECTRUM_COLUMNS, reply["rows"])


def cmd_dynamics(args: argparse.Namespace) -> None:
    client = ServiceClient(args.server)
    payload = {"config": _config_payload(_load_config(args.config)), "model": args.model}
    reply = client.post("/api/dynamics", payload)
    _write_csv(args.out, reply["meta"], DYNAMICS_COLUMNS, reply["rows"])


def cmd_compare_spectrum(args: argparse.Namespace) -> None:
    client = ServiceClient(args.server)
    payload = {"config": _config_payload(_load_config(args.config))}
    reply = client.post("/api/compare/spectrum", payload)
    _write_csv(args.out, reply["meta"], COMPARE_SPECTRUM_COLUMNS, reply["rows"])


def cmd_compare_dynamics(args: argparse.Namespace) -> None:
    client = ServiceClient(args.server)
    payload = {"config": _config_payload(_load_config(args.config))}
    reply = client.post("/api/compare/dynamics", payload)
    _write_csv(args.out, reply["meta"], COMPARE_DYNAMICS_COLUMNS, reply["rows"])


def cmd_converge(args: argparse.Namespace) -> None:
    client = ServiceClient(args.server)
    payload = {
        "config": _config_payload(_load_config(args.config)),
        "model": args.model,
        "ladder": _parse_ladder_arg(args.ladder),
    }
    reply = client.post("/api/converge", payload)
    _write_csv(args.out, reply["meta"], CONVERGE_COLUMNS, reply["rows"])
    for failure in reply["failures"]:
        print(f"warning: unusable rung {failure}", file=sys.stderr)


def cmd_pathology(args: argparse.Namespace) -> None:
    client = ServiceClient(args.server)
    payload = {"config": _config_payload(_load_config(args.config))}
    reply = client.post("/api/pathology", payload)
    print(f"n_star = {reply['n_star']}")
    if reply["saturated"]:
        print("saturated: threshold exceeds the integer cap; energies not evaluated")
        return
    if reply["energy_before"] is not None:
        print(f"E(n_star - 1, 0) = {reply['energy_before']:.17g}")
    print(f"E(n_star, 0) = {reply['energy_at']:.17g}")
    print(f"leading-order estimate = {reply['estimate']:.17g}")


def cmd_serve(args: argparse.Namespace) -> None:
    import uvicorn

    uvicorn.run("optomech.service.app:app", host=args.host, port=args.port)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="optomech",
        description="Eigensystems, dynamics, and benchmark error tables for "
        "radiation-pressure Hamiltonians.",
    )
    parser.add_argument("--version", action="version", version=f"optomech {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)

    def add_common(sub, model_arg: bool, out_arg: bool = True):
        sub.add_argument("--config", required=True, help="plain-text config file")
        if model_arg:
            sub.add_argument("--model", required=True,
                             help="lin | quad | nhat | phen | mic1 | mic2 | mic")
        if out_arg:
            sub.add_argument("--out", required=True, help="output CSV path")
        sub.add_argument("--server", default=None,
                         help="base URL of a running service (default: in-process)")

    sub = subparsers.add_parser("spectrum", help="per-sector eigensystem table of one model")
    add_common(sub, model_arg=True)
    sub.set_defaults(func=cmd_spectrum)

    sub = subparsers.add_parser("dynamics", help="time series of <x(t)> and <a(t)> for one model")
    add_common(sub, model_arg=True)
    sub.set_defaults(func=cmd_dynamics)

    sub = subparsers.add_parser("compare-spectrum",
                                help="absolute spectrum errors against the benchmark")
    add_common(sub, model_arg=False)
    sub.set_defaults(func=cmd_compare_spectrum)

    sub = subparsers.add_parser("compare-dynamics",
                                help="absolute dynamics errors against the benchmark")
    add_common(sub, model_arg=False)
    sub.set_defaults(func=cmd_compare_dynamics)

    sub = subparsers.add_parser("converge", help="stability scan over a truncation ladder")
    add_common(sub, model_arg=True)
    sub.add_argument("--ladder", required=True, help="e.g. '20x30,30x45,40x60'")
    sub.set_defaults(func=cmd_converge)

    sub = subparsers.add_parser("pathology",
                                help="photon number where the linear model turns negative")
    add_common(sub, model_arg=False, out_arg=False)
    sub.set_defaults(func=cmd_pathology)

    sub = subparsers.add_parser("serve", help="run the HTTP service")
    sub.add_argument("--host", default="127.0.0.1")
    sub.add_argument("--port", type=int, default=8723)
    sub.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> None:
    args = build_parser().parse_args(argv)
    args.func(args)


if __name__ == "__main__":
    main()

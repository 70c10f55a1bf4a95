"""Command-line client for the Hilbert-transform service.

Each subcommand sends one request to the HTTP service and writes the returned
arrays to CSV/PGM artifacts plus a JSON report. Without --server (or the
QHT_SERVER env var) the requests run against an in-process instance of the
app, so no daemon is needed for local use; `qht serve` starts a real one.

Exit codes: 0 success, 2 input error, 3 postselection failure,
4 qubit/resource limit, 1 anything unexpected.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from pathlib import Path

import httpx
import numpy as np

from . import __version__, fileio, signals
from .errors import (
    EXIT_CODES,
    EmptyInput,
    NonPowerOfTwoSide,
    NonSquareImage,
    QhtError,
    error_code,
)


class _InProcessClient:
    """One-shot requests against the ASGI app; no network server involved."""

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        return False

    def _request(self, method: str, path: str, **kwargs):
        import asyncio

        from .service import app

        async def go():
            transport = httpx.ASGITransport(app=app)
            async with httpx.AsyncClient(
                transport=transport, base_url="http://qht.internal"
            ) as client:
                return await client.request(method, path, **kwargs)

        return asyncio.run(go())

    def get(self, path: str, **kwargs):
        return self._request("GET", path, **kwargs)

    def post(self, path: str, **kwargs):
        return self._request("POST", path, **kwargs)


def _make_client(server: str | None):
    if server:
        return httpx.Client(base_url=server, timeout=600.0)
    return _InProcessClient()


def _fail_from_response(resp) -> int:
    code, message = None, resp.text
    try:
        detail = resp.json()["detail"]
        if isinstance(detail, dict):
            code = detail.get("code")
            message = detail.get("message", message)
        else:
            message = str(detail)
    except Exception:
        pass
    if resp.status_code == 422 and code is None:
        code = "bad_input"
    print(f"error [{code or resp.status_code}]: {message}", file=sys.stderr)
    if code == "postselection_impossible":
        print(
            "hint: the input's spectral energy is entirely in the DC bins "
            "(e.g. a constant signal); its Hilbert transform is zero and the "
            "postselection cannot succeed.",
            file=sys.stderr,
        )
    return EXIT_CODES.get(code, 1)


def _report_skeleton(command: str, args, input_info: dict, params: dict) -> dict:
    params = dict(params)
    params.setdefault("mode", args.mode)
    params.setdefault("seed", args.seed)
    params.setdefault("tolerance", args.tolerance)
    return {
        "schema_version": fileio.REPORT_SCHEMA_VERSION,
        "command": command,
        "input": input_info,
        "params": params,
    }


def _finish_report(report: dict, args, data: dict, artifacts: dict, wall: float) -> Path:
    fidelity = data.get("fidelity")
    results = {
        "fidelity": fidelity,
        "success_probability": data.get("success_probability"),
        "dc_fraction": data.get("dc_fraction"),
    }
    if fidelity is not None:
        results["fidelity_ok"] = bool(fidelity >= 1.0 - args.tolerance)
        if not results["fidelity_ok"]:
            print(
                f"warning: fidelity {fidelity!r} below 1 - {args.tolerance!r}",
                file=sys.stderr,
            )
    report["results"] = {**results, **report.get("results", {})}
    report["resources"] = data.get("resources")
    report["artifacts"] = {k: str(v) for k, v in artifacts.items()}
    report["wall_time_s"] = wall
    path = args.out / f"{report['command']}_report.json"
    fileio.write_report(path, report)
    return path


def _print_summary(report: dict, report_path: Path) -> None:
    res = report["results"]
    bits = [f"{report['command']}: ok"]
    if res.get("fidelity") is not None:
        bits.append(f"fidelity={res['fidelity']:.12f}")
    if res.get("success_probability") is not None:
        bits.append(f"success_probability={res['success_probability']:.6f}")
    bits.append(f"report={report_path}")
    print("  ".join(bits))


def _post(args, path: str, payload: dict):
    with _make_client(args.server) as client:
        return client.post(path, json=payload)


def cmd_analytic(args) -> int:
    args.out.mkdir(parents=True, exist_ok=True)
    start = time.perf_counter()
    resp = _post(args, "/v1/analytic", {"n": args.n, "step": args.step, "mode": args.mode})
    if resp.status_code != 200:
        return _fail_from_response(resp)
    data = resp.json()
    wall = time.perf_counter() - start
    csv_path = args.out / "analytic.csv"
    fileio.write_csv_columns(
        csv_path,
        ["x", "f", "hf_quantum", "hf_classical", "hf_analytic"],
        [np.asarray(data[k]) for k in ("x", "f", "hf_quantum", "hf_classical", "hf_analytic")],
    )
    report = _report_skeleton(
        "analytic",
        args,
        {"path": None, "generated": f"sin(x)/(1+x^4) on {1 << args.n} points, step {args.step}"},
        {"n": args.n, "d": 1, "step": args.step},
    )
    report["results"] = {"max_row_error": data["max_row_error"]}
    report_path = _finish_report(report, args, data, {"csv": csv_path}, wall)
    _print_summary(report, report_path)
    return 0


def _load_signal(args) -> tuple[np.ndarray, np.ndarray | None, dict]:
    if args.synthetic:
        f = signals.make_two_fault_signal(seed=args.seed)
        info = {
            "path": None,
            "generated": "two-fault synthetic signal, bursts at samples 300 and 700",
            "sha256": fileio.sha256_of_bytes(f.tobytes()),
        }
        return f, None, info
    if not args.input:
        raise EmptyInput("no input CSV given (pass a file or --synthetic)")
    t, values = fileio.read_csv_signal(args.input)
    values, warning = signals.fit_length(values, args.n)
    if warning:
        print(f"warning: {warning}", file=sys.stderr)
        t = None
    info = {"path": str(args.input), "sha256": fileio.sha256_of_file(args.input)}
    if warning:
        info["length_adjustment"] = warning
    return values, t, info


def cmd_envelope(args) -> int:
    args.out.mkdir(parents=True, exist_ok=True)
    f, t, info = _load_signal(args)
    start = time.perf_counter()
    resp = _post(
        args,
        "/v1/envelope",
        {"signal": f.tolist(), "mode": args.mode, "fault_count": args.faults},
    )
    if resp.status_code != 200:
        return _fail_from_response(resp)
    data = resp.json()
    wall = time.perf_counter() - start
    if t is None or len(t) != len(f):
        t = np.arange(len(f), dtype=np.float64)
    csv_path = args.out / "envelope.csv"
    fileio.write_csv_columns(
        csv_path,
        ["t", "f", "ia_quantum", "ia_classical", "hf_quantum", "hf_classical"],
        [t, f] + [np.asarray(data[k]) for k in ("ia_quantum", "ia_classical", "hf_quantum", "hf_classical")],
    )
    report = _report_skeleton("envelope", args, info, {"n": int(np.log2(len(f))), "d": 1})
    report["results"] = {
        "ia_max_abs_diff": data["ia_max_abs_diff"],
        "fault_windows": data["fault_windows"],
    }
    report_path = _finish_report(report, args, data, {"csv": csv_path}, wall)
    _print_summary(report, report_path)
    if data["fault_windows"]:
        windows = ", ".join(f"[{a}..{b}]" for a, b in data["fault_windows"])
        print(f"detected deviation windows: {windows}")
    return 0


def _load_image(path, chessboard=None, squares=8) -> tuple[np.ndarray, dict]:
    if chessboard:
        img = signals.make_chessboard(chessboard, squares)
        info = {
            "path": None,
            "generated": f"chessboard side={chessboard} squares={squares}",
            "sha256": fileio.sha256_of_bytes(fileio.pgm_bytes(img)),
        }
        return img, info
    if not path:
        raise EmptyInput("no input PGM given (pass a file or --chessboard SIDE)")
    img = fileio.read_pgm(path)
    h, w = img.shape
    if h != w:
        raise NonSquareImage(f"image is {w}x{h}")
    if w & (w - 1) or w < 2:
        raise NonPowerOfTwoSide(f"side {w} is not a power of two >= 2")
    return img, {"path": str(path), "sha256": fileio.sha256_of_file(path)}


def cmd_corners(args) -> int:
    args.out.mkdir(parents=True, exist_ok=True)
    img, info = _load_image(args.input, args.chessboard, args.squares)
    side = img.shape[0]
    start = time.perf_counter()
    resp = _post(
        args,
        "/v1/corners",
        {
            "pixels": [int(v) for v in img.ravel()],
            "side": side,
            "tau": args.tau,
            "mode": args.mode,
        },
    )
    if resp.status_code != 200:
        return _fail_from_response(resp)
    data = resp.json()
    wall = time.perf_counter() - start
    magnitude = np.asarray(data["magnitude"]).reshape(side, side)
    peak = magnitude.max()
    scaled = np.zeros((side, side), dtype=np.uint8)
    if peak > 0:
        scaled = np.rint(255.0 * magnitude / peak).astype(np.uint8)
    pgm_path = args.out / "magnitude.pgm"
    fileio.write_pgm(pgm_path, scaled)
    corners_path = args.out / "corners.csv"
    lines = ["# row,col"] + [f"{r},{c}" for r, c in data["corners_quantum"]]
    fileio.write_text_atomic(corners_path, "\n".join(lines) + "\n")
    report = _report_skeleton(
        "corners", args, info, {"n": int(np.log2(side)), "d": 2, "tau": args.tau}
    )
    report["results"] = {
        "corners_detected": len(data["corners_quantum"]),
        "corner_cluster_count": data["corner_cluster_count"],
        "corners_equal_classical": data["corners_equal"],
    }
    report_path = _finish_report(
        report, args, data, {"magnitude_pgm": pgm_path, "corners_csv": corners_path}, wall
    )
    _print_summary(report, report_path)
    print(
        f"corners: {len(data['corners_quantum'])} pixels in "
        f"{data['corner_cluster_count']} clusters, "
        f"matches classical: {data['corners_equal']}"
    )
    return 0


def cmd_transform(args) -> int:
    args.out.mkdir(parents=True, exist_ok=True)
    suffix = Path(args.input).suffix.lower()
    if suffix == ".csv":
        d = 1
        _, values = fileio.read_csv_signal(args.input)
        values, warning = signals.fit_length(values, args.n)
        if warning:
            print(f"warning: {warning}", file=sys.stderr)
        shape = [len(values)]
        flat = values
    elif suffix == ".pgm":
        d = 2
        img, _info = _load_image(args.input)
        shape = list(img.shape)
        flat = img.ravel() / 255.0
    else:
        print(f"error [bad_input]: unsupported input type {suffix!r}", file=sys.stderr)
        return EXIT_CODES["bad_input"]
    if args.d is not None and args.d != d:
        print(f"error [bad_input]: --d {args.d} conflicts with {suffix} input (d={d})", file=sys.stderr)
        return EXIT_CODES["bad_input"]
    info = {"path": str(args.input), "sha256": fileio.sha256_of_file(args.input)}
    start = time.perf_counter()
    resp = _post(
        args,
        "/v1/transform",
        {"values": flat.tolist(), "shape": shape, "mode": args.mode},
    )
    if resp.status_code != 200:
        return _fail_from_response(resp)
    data = resp.json()
    wall = time.perf_counter() - start
    csv_path = args.out / "transform.csv"
    fileio.write_csv_columns(
        csv_path,
        ["quantum_re", "quantum_im", "classical_re", "classical_im"],
        [np.asarray(data[k]) for k in ("denormalized_re", "denormalized_im", "classical_re", "classical_im")],
    )
    artifacts = {"csv": csv_path}
    if d == 2:
        side = shape[0]
        mag = np.hypot(
            np.asarray(data["denormalized_re"]), np.asarray(data["denormalized_im"])
        ).reshape(side, side)
        peak = mag.max()
        scaled = np.rint(255.0 * mag / peak).astype(np.uint8) if peak > 0 else np.zeros((side, side), np.uint8)
        pgm_path = args.out / "transform_magnitude.pgm"
        fileio.write_pgm(pgm_path, scaled)
        artifacts["magnitude_pgm"] = pgm_path
    report = _report_skeleton(
        "transform", args, info, {"n": int(np.log2(shape[0])), "d": d}
    )
    report["results"] = {
        "input_scale": data["input_scale"],
        "denormalization_factor": "input_scale * sqrt(success_probability)",
        "max_row_error": float(
            np.abs(
                np.asarray(data["denormalized_re"])
                + 1j * np.asarray(data["denormalized_im"])
                - np.asarray(data["classical_re"])
                - 1j * np.asarray(data["classical_im"])
            ).max()
        ),
    }
    report_path = _finish_report(report, args, data, artifacts, wall)
    _print_summary(report, report_path)
    return 0


def _parse_int_list(text: str) -> list[int]:
    if ".." in text:
        lo, hi = text.split("..", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(v) for v in text.split(",") if v]


def cmd_resources(args) -> int:
    args.out.mkdir(parents=True, exist_ok=True)
    payload = {
        "n_values": _parse_int_list(args.n),
        "d_values": _parse_int_list(args.d),
        "k": args.k,
        "mode": args.mode,
    }
    start = time.perf_counter()
    resp = _post(args, "/v1/resources", payload)
    if resp.status_code != 200:
        return _fail_from_response(resp)
    rows = resp.json()["rows"]
    wall = time.perf_counter() - start
    header = ["n", "d", "qubits_used", "quantum_1q", "quantum_2q", "quantum_total",
              "quantum_depth", "classical_fft_flops", "classical_direct_flops"]
    widths = [max(len(h), 12) for h in header]
    print("  ".join(h.rjust(w) for h, w in zip(header, widths)))
    for row in rows:
        print("  ".join(str(row[h]).rjust(w) for h, w in zip(header, widths)))
    json_path = args.out / "resources.json"
    fileio.write_report(
        json_path,
        {
            "schema_version": fileio.REPORT_SCHEMA_VERSION,
            "command": "resources",
            "params": payload,
            "rows": rows,
            "wall_time_s": wall,
        },
    )
    print(f"resources: {len(rows)} rows  report={json_path}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import app

    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qht",
        description="d-dimensional quantum Hilbert transform: demos, transforms, resource tables.",
    )
    parser.add_argument("--version", action="version", version=f"qht {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mode", choices=["dynamic", "static"], default="dynamic",
                        help="ancilla handling: mid-circuit reuse or one per register")
    common.add_argument("--seed", type=int, default=0, help="rng seed recorded in the report")
    common.add_argument("--out", type=Path, default=Path("."), help="output directory")
    common.add_argument("--server", default=os.environ.get("QHT_SERVER"),
                        help="service base URL; default runs the app in-process")
    common.add_argument("--tolerance", type=float, default=1e-9,
                        help="fidelity acceptance threshold recorded as fidelity_ok")

    p = sub.add_parser("analytic", parents=[common],
                       help="benchmark sin(x)/(1+x^4) against its closed-form transform")
    p.add_argument("--n", type=int, default=7, help="qubits; samples N = 2**n")
    p.add_argument("--step", type=float, default=0.01, help="grid spacing h")
    p.set_defaults(func=cmd_analytic)

    p = sub.add_parser("envelope", parents=[common],
                       help="instantaneous amplitude of a CSV signal")
    p.add_argument("input", nargs="?", help="signal CSV (one value per line, or t,value)")
    p.add_argument("--synthetic", action="store_true",
                   help="use the bundled two-fault demo signal instead of a file")
    p.add_argument("--n", type=int, default=None, help="pad/truncate input to 2**n samples")
    p.add_argument("--faults", type=int, default=2, help="deviation windows to report (0 = off)")
    p.set_defaults(func=cmd_envelope)

    p = sub.add_parser("corners", parents=[common], help="2-D corner detection on a PGM image")
    p.add_argument("input", nargs="?", help="square PGM, side a power of two")
    p.add_argument("--chessboard", type=int, default=None, metavar="SIDE",
                   help="generate a chessboard input of this side instead of reading a file")
    p.add_argument("--squares", type=int, default=8, help="chessboard squares per side")
    p.add_argument("--tau", type=float, default=0.5, help="relative peak threshold in (0,1]")
    p.set_defaults(func=cmd_corners)

    p = sub.add_parser("transform", parents=[common],
                       help="generic d-dimensional transform of a CSV (d=1) or PGM (d=2)")
    p.add_argument("input", help="input file; extension selects the dimension")
    p.add_argument("--n", type=int, default=None, help="pad/truncate CSV input to 2**n samples")
    p.add_argument("--d", type=int, default=None, help="expected dimension (checked against input)")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("resources", parents=[common], help="gate counts vs classical FLOP model")
    p.add_argument("--n", default="4..12", help="register sizes, e.g. 4..12 or 4,8,16")
    p.add_argument("--d", default="1", help="dimensions, e.g. 1..3 or 1,2")
    p.add_argument("--k", type=int, default=1, help="output components for the direct model")
    p.set_defaults(func=cmd_resources)

    p = sub.add_parser("serve", help="run the HTTP service under uvicorn")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except QhtError as exc:
        print(f"error [{error_code(exc)}]: {exc}", file=sys.stderr)
        return EXIT_CODES[error_code(exc)]
    except httpx.HTTPError as exc:
        print(f"error [server_unreachable]: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as exc:
        print(f"error [bad_input]: {exc}", file=sys.stderr)
        return EXIT_CODES["bad_input"]


if __name__ == "__main__":
    sys.exit(main())

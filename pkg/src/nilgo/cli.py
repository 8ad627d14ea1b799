"""Command line front end.

Subcommands: classify, table, certify-n34, geodesic, verify.  Certificates
are versioned JSON with all rationals as "p/q" strings; identical seeds and
flags give byte-identical output.  Exit codes: 0 definitive verdict, 2
undecided, 64 usage error, 1 internal/verification failure.  HGO_THREADS
caps the probe worker pool (default 1, sequential)."""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import geod, goprop
from .clifford import Signature, dim_minimal, ell, volume_element, build_minimal_module
from .htype import bracket_table_text, build_algebra
from .linalg import parse_rat

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_UNDECIDED = 2
EXIT_USAGE = 64


@dataclass
class RunConfig:
    subcommand: str
    r: int = 0
    s: int = 1
    multiplicity: int = 1
    height: int = 5
    probes: int = 10_000
    seed: int = 0
    out: str | None = None
    format: str = "json"
    threads: int = 1


def _threads_from_env() -> int:
    raw = os.environ.get("HGO_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _write(out: str | None, text: str) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def cmd_classify(cfg: RunConfig) -> int:
    cert = goprop.classify(
        cfg.r,
        cfg.s,
        multiplicity=cfg.multiplicity,
        height=cfg.height,
        probes=cfg.probes,
        seed=cfg.seed,
        threads=cfg.threads,
    )
    if cfg.format == "text":
        _write(cfg.out, f"N_({cfg.r},{cfg.s}): {cert.verdict} [{cert.evidence.get('kind', '-')}]\n")
    else:
        _write(cfg.out, cert.to_json())
    return EXIT_UNDECIDED if cert.verdict == "Undecided" else EXIT_OK


def _ell_table_text(rmax: int, smax: int, what: str) -> str:
    lines = []
    for s in range(smax, -1, -1):
        cells = []
        for r in range(rmax + 1):
            if r + s == 0:
                cells.append("-")
            elif what == "ell":
                cells.append(str(ell(r, s)))
            else:
                cells.append(str(dim_minimal(r, s)))
        lines.append(f"{s} | " + " ".join(c.rjust(4) for c in cells))
    lines.append("s/r " + " ".join(str(r).rjust(4) for r in range(rmax + 1)))
    return "\n".join(lines) + "\n"


def cmd_table(cfg: RunConfig, what: str, rmax: int, smax: int) -> int:
    if what in ("ell", "dim"):
        _write(cfg.out, _ell_table_text(rmax, smax, what))
        return EXIT_OK
    if what == "bracket":
        _write(cfg.out, bracket_table_text(build_algebra(cfg.r, cfg.s, cfg.multiplicity)))
        return EXIT_OK
    if what == "omega":
        lines = []
        for n in range(2, 9):
            for r in range(n + 1):
                s = n - r
                sign = (-1) ** (n * (n + 1) // 2 + s)
                lines.append(f"omega^2({r},{s}) = {sign:+d}")
        _write(cfg.out, "\n".join(lines) + "\n")
        return EXIT_OK
    print(f"unknown table {what!r}", file=sys.stderr)
    return EXIT_USAGE


def cmd_certify_n34(cfg: RunConfig) -> int:
    import json

    cert = goprop.strong_condition_n34(seed=cfg.seed, probes_per_class=cfg.probes, threads=cfg.threads)
    # advisory numeric cross-check on the stored sample witnesses
    alg = build_algebra(3, 4)
    from .isometry import build_normalizer

    nd = build_normalizer(alg)
    max_dev = 0.0
    checked = 0
    for cls in cert.evidence["classes"]:
        z = [parse_rat(c) for c in cls["z"]]
        for sample in cls["sample_witnesses"]:
            x = [parse_rat(c) for c in sample["x"]]
            b = goprop.witness_matrix_from_coeffs(alg, nd, sample["coeffs"])
            max_dev = max(max_dev, geod.compare(alg, z, x, b, t_end=1.0, steps=2000))
            checked += 1
    bundle = json.loads(cert.to_json())
    bundle["numeric_cross_check"] = {
        "witnesses": checked,
        "max_deviation_below": "1e-8",
        "passed": bool(max_dev < 1e-8),
    }
    text = json.dumps(bundle, sort_keys=True, indent=2) + "\n"
    _write(cfg.out, text)
    if max_dev >= 1e-8:
        print(f"numeric cross-check deviation {max_dev:g} exceeds 1e-8", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


def _parse_vector(raw: str, dim: int, name: str) -> list:
    parts = [p for p in raw.replace(",", " ").split() if p]
    if len(parts) != dim:
        raise ValueError(f"{name} needs {dim} entries, got {len(parts)}")
    return [parse_rat(p) for p in parts]


def cmd_geodesic(cfg: RunConfig, zdot: str, xdot: str, t_end: float, steps: int, samples: int) -> int:
    alg = build_algebra(cfg.r, cfg.s, cfg.multiplicity)
    try:
        z0 = _parse_vector(zdot, alg.z_dim, "--zdot")
        x0 = _parse_vector(xdot, alg.v_dim, "--xdot")
    except ValueError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    states = geod.trace(alg, z0, x0, t_end, steps, samples=samples)
    _write(cfg.out, geod.csv_trace(states))
    return EXIT_OK


def cmd_verify(path: str) -> int:
    with open(path) as fh:
        text = fh.read()
    cert = goprop.GOCertificate.from_json(text)
    ok = goprop.replay(cert)
    print(f"{path}: verdict {cert.verdict} replay {'OK' if ok else 'FAILED'}")
    return EXIT_OK if ok else EXIT_INTERNAL


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nilgo", description=__doc__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    def common(p):
        p.add_argument("--r", type=int, default=0)
        p.add_argument("--s", type=int, default=1)
        p.add_argument("--mult", type=int, default=1)
        p.add_argument("--height", type=int, default=5)
        p.add_argument("--probes", type=int, default=10_000)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default=None)
        p.add_argument("--format", choices=["json", "text"], default="json")

    pc = sub.add_parser("classify", help="decide the geodesic orbit property")
    common(pc)

    pt = sub.add_parser("table", help="ell / dim / bracket / omega tables")
    common(pt)
    pt.add_argument("what", choices=["ell", "dim", "bracket", "omega"])
    pt.add_argument("--rmax", type=int, default=7)
    pt.add_argument("--smax", type=int, default=7)

    pn = sub.add_parser("certify-n34", help="full strong-condition certificate for (3,4)")
    common(pn)

    pg = sub.add_parser("geodesic", help="CSV trace of a geodesic")
    common(pg)
    pg.add_argument("--zdot", required=True, help="initial center velocity, comma separated rationals")
    pg.add_argument("--xdot", required=True, help="initial module velocity")
    pg.add_argument("--t", type=float, default=1.0)
    pg.add_argument("--steps", type=int, default=1000)
    pg.add_argument("--samples", type=int, default=32)

    pv = sub.add_parser("verify", help="replay a stored certificate")
    pv.add_argument("certificate")
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.cmd == "verify":
        try:
            return cmd_verify(args.certificate)
        except Exception as exc:  # noqa: BLE001 - CLI boundary
            print(f"verification error: {exc}", file=sys.stderr)
            return EXIT_INTERNAL
    cfg = RunConfig(
        subcommand=args.cmd,
        r=args.r,
        s=args.s,
        multiplicity=args.mult,
        height=args.height,
        probes=args.probes,
        seed=args.seed,
        out=args.out,
        format=args.format,
        threads=_threads_from_env(),
    )
    try:
        if args.cmd == "classify":
            if cfg.r < 0 or cfg.s < 0 or cfg.r + cfg.s < 1:
                print("invalid signature", file=sys.stderr)
                return EXIT_USAGE
            return cmd_classify(cfg)
        if args.cmd == "table":
            if args.rmax > 9 or args.smax > 9:
                print("table ranges are bounded by 9", file=sys.stderr)
                return EXIT_USAGE
            return cmd_table(cfg, args.what, args.rmax, args.smax)
        if args.cmd == "certify-n34":
            return cmd_certify_n34(cfg)
        if args.cmd == "geodesic":
            return cmd_geodesic(cfg, args.zdot, args.xdot, args.t, args.steps, args.samples)
    except ValueError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Subcommands: ``codebook``, ``cull``, ``bound``, ``simulate``, ``compare``.
Exit codes: 0 success, 2 usage error, 3 runtime or budget error. Every
failure prints exactly one ``error: ...`` line to stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from typing import Optional, Sequence

from . import __version__
from .analysis import bound_crossing_snr, snr_db_to_n0, union_bound_ber
from .channel_sim import BerCurve, BerPoint, SimConfig, run_ber
from .codebook import table_rows
from .schemes import SchemeSpec, build, parse_scheme
from .selection import min_rank_pair_stats, rank_matrix

__all__ = ["UsageError", "RunSpec", "parse_and_validate", "run", "main", "parse_snr_sweep", "CSV_HEADER"]

CSV_HEADER = ["snr_db", "trials", "bits_sent", "bit_errors", "ber", "union_bound"]
COMMANDS = ("codebook", "cull", "bound", "simulate", "compare")


class UsageError(Exception):
    """Bad command line; maps to exit code 2."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class RunSpec:
    command: str
    schemes: list[SchemeSpec]
    snr_db: list[float] = field(default_factory=list)
    seed: int = 0
    max_trials: int = 1_000_000
    target_errors: Optional[int] = 200
    workers: int = 1
    out: Optional[str] = None
    manifest: bool = False
    bound_only: bool = False
    with_bound: bool = False
    exact_pep: bool = False
    target_ber: float = 1e-5
    reference: int = -1
    per_codeword: bool = False

    def as_dict(self) -> dict:
        d = {k: v for k, v in self.__dict__.items() if k != "schemes"}
        d["schemes"] = ";".join(s.tag for s in self.schemes)
        d["version"] = __version__
        return d


def parse_snr_sweep(text: str) -> list[float]:
    """``start:step:stop`` in dB, inclusive of ``stop``; a bare number is one point."""
    parts = text.split(":")
    try:
        vals = [float(p) for p in parts]
    except ValueError:
        raise UsageError(f"--snr: cannot parse {text!r}; expected start:step:stop in dB") from None
    if len(vals) == 1:
        return vals
    if len(vals) != 3:
        raise UsageError(f"--snr: expected start:step:stop, got {text!r}")
    start, step, stop = vals
    if step <= 0 or stop < start:
        raise UsageError(f"--snr: need step > 0 and stop >= start, got {text!r}")
    n = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [round(start + k * step, 10) for k in range(n)]


def _add_scheme_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--scheme", choices=["wcm", "cm", "im", "ofdm"])
    p.add_argument("--i", dest="I", type=int)
    p.add_argument("--n", dest="N", type=int)
    p.add_argument("--lambda", dest="lam", type=int)
    p.add_argument("--m", dest="M", type=int)
    p.add_argument("--k", dest="K", type=int)
    p.add_argument("--cull-bits", "--target-bits", dest="cull_bits", type=int)


def _add_sim_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--snr", required=True, help="start:step:stop in dB")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-trials", type=int, default=1_000_000)
    p.add_argument("--target-errors", type=int, default=200,
                   help="stop a point after this many bit errors (0 = never)")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", help="CSV output path (default: stdout)")
    p.add_argument("--manifest", action="store_true", help="write <out>.json with the resolved run")
    p.add_argument("--exact-pep", action="store_true")


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="compmod", description="Composition modulation link-level toolkit")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("codebook", help="print the lookup table of a codebook")
    _add_scheme_flags(p)
    p.add_argument("--per-codeword", action="store_true")

    p = sub.add_parser("cull", help="run the codebook culling pass and report rank statistics")
    _add_scheme_flags(p)

    p = sub.add_parser("bound", help="union-bound BER curve as CSV")
    _add_scheme_flags(p)
    _add_sim_flags(p)

    p = sub.add_parser("simulate", help="Monte Carlo BER curve as CSV")
    _add_scheme_flags(p)
    _add_sim_flags(p)
    p.add_argument("--with-bound", action="store_true")
    p.add_argument("--bound-only", action="store_true")

    p = sub.add_parser("compare", help="several schemes on one sweep plus SNR gaps")
    p.add_argument("--spec", action="append", default=[], metavar="SCHEME",
                   help='e.g. "wcm,i=6,n=4,lambda=1,cull=11"; repeat per scheme')
    _add_sim_flags(p)
    p.add_argument("--bound-only", action="store_true")
    p.add_argument("--target-ber", type=float, default=1e-5)
    p.add_argument("--reference", type=int, default=-1,
                   help="index of the --spec that gaps are measured against (default: last)")
    return parser


def _scheme_from_flags(ns) -> SchemeSpec:
    if ns.scheme is None:
        raise UsageError("--scheme is required")
    if ns.N is None:
        raise UsageError("--n is required")
    try:
        return SchemeSpec(ns.scheme, N=ns.N, I=ns.I, lam=ns.lam, M=ns.M, K=ns.K, cull_bits=ns.cull_bits)
    except ValueError as exc:
        raise UsageError(_flag_hint(str(exc))) from None


_FLAG_OF = {"I": "--i", "N": "--n", "lam": "--lambda", "M": "--m", "K": "--k", "cull": "--cull-bits"}


def _flag_hint(msg: str) -> str:
    flag = _FLAG_OF.get(msg.split(" ", 1)[0])
    return f"{flag}: {msg}" if flag else msg


def parse_and_validate(argv: Sequence[str]) -> RunSpec:
    """Turn ``argv`` into a fully checked :class:`RunSpec` or raise :class:`UsageError`."""
    ns = _build_parser().parse_args(list(argv))
    if ns.command is None:
        raise UsageError(f"a command is required: {', '.join(COMMANDS)}")
    if ns.command == "compare":
        if len(ns.spec) < 2:
            raise UsageError("--spec: compare needs at least two schemes")
        try:
            schemes = [parse_scheme(s) for s in ns.spec]
        except ValueError as exc:
            raise UsageError(f"--spec: {exc}") from None
        if not -len(schemes) <= ns.reference < len(schemes):
            raise UsageError(f"--reference: index {ns.reference} out of range for {len(schemes)} schemes")
    else:
        schemes = [_scheme_from_flags(ns)]
    spec = RunSpec(ns.command, schemes)
    if ns.command == "codebook":
        spec.per_codeword = ns.per_codeword
        return spec
    if ns.command == "cull":
        if schemes[0].cull_bits is None:
            raise UsageError("--target-bits is required for cull")
        return spec
    spec.snr_db = parse_snr_sweep(ns.snr)
    spec.seed = ns.seed
    if ns.max_trials < 1:
        raise UsageError("--max-trials: must be >= 1")
    if ns.target_errors < 0:
        raise UsageError("--target-errors: must be >= 0")
    if ns.workers < 1:
        raise UsageError("--workers: must be >= 1")
    spec.max_trials = ns.max_trials
    spec.target_errors = ns.target_errors or None
    spec.workers = ns.workers
    spec.out = ns.out
    spec.manifest = ns.manifest
    spec.exact_pep = ns.exact_pep
    if spec.manifest and not spec.out:
        raise UsageError("--manifest: requires --out")
    if ns.command == "bound":
        spec.bound_only = True
    elif ns.command == "simulate":
        spec.bound_only = ns.bound_only
        spec.with_bound = ns.with_bound or ns.bound_only
    else:
        spec.bound_only = ns.bound_only
        spec.with_bound = True
        if not 0 < ns.target_ber < 0.5:
            raise UsageError("--target-ber: must lie in (0, 0.5)")
        spec.target_ber = ns.target_ber
        spec.reference = ns.reference
    return spec


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return "" if math.isnan(v) else repr(v)
    return str(v)


def _curve(spec: RunSpec, scheme: SchemeSpec) -> BerCurve:
    cb = build(scheme)
    if spec.bound_only:
        curve = BerCurve(scheme)
        for snr in spec.snr_db:
            N0 = float(snr_db_to_n0(snr, cb.E_T, cb.N))
            curve.points.append(BerPoint(float(snr), 0, 0, 0, union_bound_ber(cb, N0, spec.exact_pep)))
        return curve
    cfg = SimConfig(scheme, spec.snr_db, seed=spec.seed, max_trials=spec.max_trials,
                    target_bit_errors=spec.target_errors, workers=spec.workers,
                    with_bound=False)
    curve = run_ber(cfg, cb)
    if spec.with_bound:
        for p in curve.points:
            p.union_bound = union_bound_ber(cb, float(snr_db_to_n0(p.snr_db, cb.E_T, cb.N)), spec.exact_pep)
    return curve


def _csv_text(curves: list[BerCurve], with_scheme: bool) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow((["scheme"] if with_scheme else []) + CSV_HEADER)
    for c in curves:
        for p in c.points:
            ber = p.ber if p.bits_sent else None
            row = [_fmt(p.snr_db), p.trials, p.bits_sent, p.bit_errors, _fmt(ber), _fmt(p.union_bound)]
            w.writerow(([c.scheme.tag] if with_scheme else []) + row)
    return buf.getvalue()


def _emit(spec: RunSpec, text: str, out) -> None:
    if spec.out:
        with open(spec.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        if spec.manifest:
            with open(spec.out + ".json", "w", encoding="utf-8") as fh:
                json.dump(spec.as_dict(), fh, indent=1, sort_keys=True)
                fh.write("\n")
    else:
        out.write(text)


def _print_codebook(spec: RunSpec, out) -> None:
    scheme = spec.schemes[0]
    cb = build(scheme)
    f1 = "-" if cb.f1 is None else cb.f1
    f2 = "-" if cb.f2 is None else cb.f2
    out.write(f"# {scheme.name}: f1={f1} f2={f2} f={cb.f} L={cb.L} "
              f"SE={float(cb.spectral_efficiency):g} bps E_T={cb.E_T:g}\n")
    rows = table_rows(cb, spec.per_codeword)
    cols = [
        [r["pattern"] for r in rows],
        ["{" + ", ".join(r["energies"]) + "}" for r in rows],
        ["(" + ", ".join(r["modulations"]) + ")" for r in rows],
        ["[" + " ".join(r["bits"]) + "]" if r["bits"] not in ("", "unused") else r["bits"] for r in rows],
    ]
    head = ["pattern", "energies", "codeword", "bits"]
    widths = [max(len(h), *(len(v) for v in col)) for h, col in zip(head, cols)]
    out.write("  ".join(h.ljust(wd) for h, wd in zip(head, widths)).rstrip() + "\n")
    for k in range(len(rows)):
        out.write("  ".join(col[k].ljust(wd) for col, wd in zip(cols, widths)).rstrip() + "\n")


def _print_cull(spec: RunSpec, out) -> None:
    scheme = spec.schemes[0]
    base = build(SchemeSpec(scheme.scheme, N=scheme.N, I=scheme.I, lam=scheme.lam, M=scheme.M, K=scheme.K))
    culled = build(scheme)
    z0, n0 = min_rank_pair_stats(rank_matrix(base))
    z1, n1 = min_rank_pair_stats(rank_matrix(culled))
    out.write(f"# {scheme.name}\n")
    out.write(f"before: codewords={base.L} bits={base.f} min_rank={z0} min_rank_pairs={n0}\n")
    out.write(f"after: codewords={culled.L} bits={culled.f} min_rank={z1} min_rank_pairs={n1} "
              f"SE={float(culled.spectral_efficiency):g} bps\n")


def _sim_crossing(curve: BerCurve, target: float) -> Optional[float]:
    """SNR where the measured curve crosses ``target`` (log-linear interpolation)."""
    pts = [(p.snr_db, p.ber) for p in curve.points if p.bits_sent and p.bit_errors > 0]
    for (s0, b0), (s1, b1) in zip(pts, pts[1:]):
        if b0 >= target > b1:
            t = (math.log10(b0) - math.log10(target)) / (math.log10(b0) - math.log10(b1))
            return s0 + t * (s1 - s0)
    return None


def _compare(spec: RunSpec, out, err) -> None:
    curves = [_curve(spec, s) for s in spec.schemes]
    _emit(spec, _csv_text(curves, with_scheme=True), out)
    ref = spec.reference % len(spec.schemes)
    bound_x = []
    for s in spec.schemes:
        try:
            bound_x.append(bound_crossing_snr(build(s), spec.target_ber, spec.exact_pep))
        except ValueError:
            bound_x.append(None)
    sim_x = [None if spec.bound_only else _sim_crossing(c, spec.target_ber) for c in curves]
    # with CSV on stdout the gap summary goes to stderr
    summary = out if spec.out else err
    summary.write(f"# reference: {spec.schemes[ref].tag}, target BER {spec.target_ber:g}\n")
    summary.write("scheme,se_bps,bound_snr_db,bound_gain_db,sim_snr_db,sim_gain_db\n")
    for k, s in enumerate(spec.schemes):
        se = build(s).spectral_efficiency
        bg = None if bound_x[k] is None or bound_x[ref] is None else bound_x[ref] - bound_x[k]
        sg = None if sim_x[k] is None or sim_x[ref] is None else sim_x[ref] - sim_x[k]
        vals = [bound_x[k], bg, sim_x[k], sg]
        summary.write(f"{s.tag},{float(se):g}," + ",".join("" if v is None else f"{v:.2f}" for v in vals) + "\n")


def run(spec: RunSpec, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    if spec.command == "codebook":
        _print_codebook(spec, out)
    elif spec.command == "cull":
        _print_cull(spec, out)
    elif spec.command in ("bound", "simulate"):
        _emit(spec, _csv_text([_curve(spec, spec.schemes[0])], with_scheme=False), out)
    elif spec.command == "compare":
        _compare(spec, out, err)
    return 0


def main(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    err = sys.stderr if err is None else err
    argv = sys.argv[1:] if argv is None else argv
    try:
        spec = parse_and_validate(argv)
    except UsageError as exc:
        err.write(f"error: usage: {' '.join(str(exc).split())}\n")
        return 2
    try:
        return run(spec, out, err)
    except (MemoryError, RuntimeError, OSError, ValueError) as exc:
        err.write(f"error: runtime: {' '.join(str(exc).split())}\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())

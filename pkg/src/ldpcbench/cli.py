"""Command-line entry point: ``ldpcbench <subcommand> ...``.

Every failure ends in a single ``PREFIX/ message`` line on stderr and a
nonzero exit status: PARSE for unreadable inputs, DOMAIN for bad arguments,
BUDGET for searches that ran out of room.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import analysis, codes, io, sim, spectra
from .errors import DomainError, LdpcBenchError, ParseError
from .field import GfField
from .fixtures import BUILTIN

EXIT_ERROR = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise DomainError(message)


def parse_grid(text: str) -> list[float]:
    """``a,b,c`` or ``start:stop:step`` (stop inclusive)."""
    try:
        if ":" in text:
            start, stop, step = (float(x) for x in text.split(":"))
            if step <= 0:
                raise DomainError("grid step must be positive")
            count = int(np.floor((stop - start) / step + 1e-9)) + 1
            return [round(start + i * step, 12) for i in range(max(count, 0))]
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise DomainError(f"cannot parse grid {text!r}") from None


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise DomainError(f"expected comma-separated integers, got {text!r}") from None


def _load(spec: str) -> codes.LinearCode:
    """Alist path, or the name of a bundled code when no such file exists."""
    if not Path(spec).exists() and spec in BUILTIN:
        return BUILTIN[spec]()
    return io.load_code(spec)


def _emit(text: str, out: str | None) -> None:
    if out:
        try:
            Path(out).write_text(text)
        except OSError as exc:
            raise DomainError(f"cannot write {out}: {exc.strerror}") from None
    else:
        sys.stdout.write(text)


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None


def cmd_gen(a) -> None:
    fam = a.family
    if fam == "gallager":
        code = codes.build_gallager(a.j, a.k, a.n, a.seed)
    elif fam == "ru":
        code, regular = codes.build_ru(a.j, a.k, a.n, a.seed)
        print(f"regular={str(regular).lower()}", file=sys.stderr)
    elif fam == "qc":
        if not a.exponents:
            raise DomainError("--family qc needs --exponents FILE")
        Q = io.read_qc(a.exponents)
        expand = codes.qc_expand_tailbiting if a.form == "tailbiting" else codes.qc_expand_circulant
        code = expand(Q)
    else:
        try:
            poly = int(a.poly, 16) if a.poly else None
        except ValueError:
            raise DomainError(f"--poly expects hex, got {a.poly!r}") from None
        F = GfField(a.m, poly)
        if a.base:
            base = _load(a.base).H
        else:
            base = codes.build_gallager(a.j, a.k, a.n, a.seed).H
        L = codes.random_labeling(base, F, a.seed)
        if a.labels_out:
            io.write_labels(a.labels_out, L)
        code = codes.binary_image(L)
    _emit(io.format_alist(code.H), a.out)


def cmd_analyze(a) -> None:
    code = _load(a.code)
    report = analysis.analyze(
        code, stop_cap=a.stop_cap, distance_cap=a.distance_cap,
        rho_levels=_int_list(a.rho_levels) if a.rho_levels else (), rho_mode=a.rho_mode,
        rho_weight_budget=a.rho_weight_budget, rho_r=a.rho_r, samples=a.samples,
        rng_seed=a.seed, code_type=a.type, time_budget=a.time_budget)
    text = report.to_csv() if a.csv else report.to_kv() + "\n"
    _emit(text, a.out)
    for note in report.notes:
        print(f"note: {note}", file=sys.stderr)


def cmd_extend(a) -> None:
    code = _load(a.code)
    ext = analysis.extend_rpc(code, a.rows, a.weight_budget, time_budget=a.time_budget)
    _emit(io.format_alist(ext.H), a.out)


def cmd_spectrum(a) -> None:
    table = spectra.ensemble_avg_spectrum(a.j, a.k, a.q, a.n, a.kind)
    _emit(table.to_csv(), a.out)


def cmd_bound(a) -> None:
    if not (a.weight or a.stopping):
        raise DomainError("bound needs --weight and/or --stopping spectrum CSV")
    eps = parse_grid(a.eps)
    ml = bp = None
    if a.weight:
        ml = spectra.union_bound_bec(spectra.SpectrumTable.from_csv(_read(a.weight)), eps)
    if a.stopping:
        bp = spectra.union_bound_bec(
            spectra.SpectrumTable.from_csv(_read(a.stopping), spectra.STOPPING), eps)
    lines = ["eps,bound_ml,bound_bp,raw_ml,raw_bp"]
    for i, e in enumerate(eps):
        cells = [repr(e)]
        cells += [repr(ml[i].bound) if ml else "", repr(bp[i].bound) if bp else ""]
        cells += [repr(ml[i].raw) if ml else "", repr(bp[i].raw) if bp else ""]
        lines.append(",".join(cells))
    _emit("\n".join(lines) + "\n", a.out)


def cmd_simulate(a) -> None:
    code = _load(a.code)
    channel = a.channel.upper()
    if channel == "BEC":
        if a.eps is None:
            raise DomainError("--channel bec needs --eps")
        grid = parse_grid(a.eps)
    else:
        if a.ebno_db is None:
            raise DomainError("--channel awgn needs --ebno-db")
        grid = parse_grid(a.ebno_db)
    spec = sim.SweepSpec(channel, tuple(grid), a.decoder, a.rpc_rows, a.max_frames,
                         a.target_errors, a.seed, a.random_codewords, a.max_iter, a.llr_clip,
                         a.weight_budget)
    records = sim.run_sweep(code, spec)
    text = sim.plot_data(records) if a.plot_data else sim.records_to_csv(records)
    _emit(text, a.out)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ldpcbench", description="Short LDPC code workbench.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="construct a code and write its alist")
    g.add_argument("--family", required=True, choices=["gallager", "ru", "qc", "nonbinary"])
    g.add_argument("--j", type=int, default=3)
    g.add_argument("--k", type=int, default=6)
    g.add_argument("--n", type=int, default=48)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--exponents", help="QC exponent file")
    g.add_argument("--form", choices=["circulant", "tailbiting"], default="circulant")
    g.add_argument("--m", type=int, default=2, help="nonbinary: field GF(2^m)")
    g.add_argument("--poly", help="nonbinary: primitive polynomial in hex")
    g.add_argument("--base", help="nonbinary: base alist (default: Gallager J,K,n draw)")
    g.add_argument("--labels-out", help="nonbinary: also write the label file")
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    an = sub.add_parser("analyze", help="structural parameters of a code")
    an.add_argument("code", help="alist file or bundled code name")
    an.add_argument("--stop-cap", type=int, default=12)
    an.add_argument("--distance-cap", type=int)
    an.add_argument("--rho-levels", help="comma-separated stopping-set sizes")
    an.add_argument("--rho-mode", choices=["greedy", "estimate"], default="greedy")
    an.add_argument("--rho-weight-budget", type=int)
    an.add_argument("--rho-r", action="store_true")
    an.add_argument("--samples", type=int, default=10_000)
    an.add_argument("--seed", type=int, default=0)
    an.add_argument("--type", default="")
    an.add_argument("--time-budget", type=float, default=analysis.DEFAULT_TIME_BUDGET)
    an.add_argument("--csv", action="store_true")
    an.add_argument("--out")
    an.set_defaults(func=cmd_analyze)

    ex = sub.add_parser("extend", help="append redundant dual codewords")
    ex.add_argument("code")
    ex.add_argument("--rows", type=int, required=True)
    ex.add_argument("--weight-budget", type=int)
    ex.add_argument("--time-budget", type=float, default=analysis.DEFAULT_TIME_BUDGET)
    ex.add_argument("--out")
    ex.set_defaults(func=cmd_extend)

    sp = sub.add_parser("spectrum", help="ensemble-average spectrum as CSV")
    sp.add_argument("--j", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--q", type=int, default=2)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--kind", type=str.upper, choices=[spectra.WEIGHT, spectra.STOPPING],
                    default=spectra.WEIGHT)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_spectrum)

    b = sub.add_parser("bound", help="BEC union bound from spectrum CSVs")
    b.add_argument("--weight", help="weight spectrum CSV (ML bound)")
    b.add_argument("--stopping", help="stopping-set spectrum CSV (BP bound)")
    b.add_argument("--eps", required=True, help="a,b,c or start:stop:step")
    b.add_argument("--out")
    b.set_defaults(func=cmd_bound)

    s = sub.add_parser("simulate", help="Monte Carlo FER sweep")
    s.add_argument("code")
    s.add_argument("--channel", type=str.lower, choices=["bec", "awgn"], required=True)
    s.add_argument("--eps")
    s.add_argument("--ebno-db")
    s.add_argument("--decoder", type=str.lower, choices=["bp", "ml", "rpc"], default="bp")
    s.add_argument("--rpc-rows", type=int, default=0)
    s.add_argument("--weight-budget", type=int)
    s.add_argument("--max-frames", type=int, default=10_000_000)
    s.add_argument("--target-errors", type=int, default=100)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--random-codewords", action="store_true")
    s.add_argument("--max-iter", type=int, default=50)
    s.add_argument("--llr-clip", type=float, default=25.0)
    s.add_argument("--plot-data", action="store_true")
    s.add_argument("--out")
    s.set_defaults(func=cmd_simulate)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        args.func(args)
    except LdpcBenchError as exc:
        msg = " ".join(str(exc).split())
        print(f"{exc.prefix}/ {msg}", file=sys.stderr)
        return EXIT_ERROR
    return 0


if __name__ == "__main__":
    sys.exit(main())

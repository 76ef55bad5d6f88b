"""Command line entry point.

Examples::

    golombmat gen-poly --m 5 --count 3 --emit-sequence
    golombmat gen-matrix --m 3 --format dense-csv
    golombmat moments --m-range 7..13 --r 2,3,4,6 --out moments.csv
    golombmat independence --m-range 7..13 --ts 1,1 2,2 --out indep.csv
    golombmat fit --in indep.csv --kind mixed-shift --t 1 --s 1
    golombmat spectrum-hist --m 11 --bins 40
"""

from __future__ import annotations

import argparse
import contextlib
import json
import logging
import sys


from ..errors import GolombMatError, OracleTooLargeError, PreconditionError
from ..gf2poly import BinaryPolynomial, enumerate_primitive, is_primitive
from ..matrixgen import DENSE_CAP, build_row, dense_matrix
from ..msequence import generate
from ..spectral import EXHAUSTIVE_PAIR_CAP
from .records import fit_decay, fmt_float, read_csv, records_to_json, write_csv
from .sweeps import polynomial_for, run_independence, run_moments, spectrum_histogram

log = logging.getLogger("golombmat")


def parse_m_range(text: str) -> list[int]:
    """``7..13``, ``7:13`` (inclusive) or ``7,9,11``."""
    text = text.strip()
    for sep in ("..", ":"):
        if sep in text:
            lo, hi = text.split(sep)
            return list(range(int(lo), int(hi) + 1))
    return [int(x) for x in text.split(",") if x]


def parse_int_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x]


def parse_ts(items: list[str]) -> list[tuple[int, int]]:
    out = []
    for item in items:
        t, s = item.split(",")
        out.append((int(t), int(s)))
    return out


def _common(parser: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--seed", type=int, default=d(1))
    parser.add_argument("--sampling", choices=["exhaustive", "sampled"], default=d("exhaustive"))
    parser.add_argument("--samples", type=int, default=d(4096))
    parser.add_argument("--out", default=d(None), help="CSV output file (stdout when omitted)")
    parser.add_argument("--json", action="store_true", default=d(False), help="print machine-readable records")
    parser.add_argument("--workers", type=int, default=d(1))
    parser.add_argument("--timing", action="store_true", default=d(False),
                        help="write measured wall_time into the CSV (breaks byte reproducibility)")
    parser.add_argument("-v", "--verbose", action="store_true", default=d(False))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="golombmat", description=__doc__.split("\n")[0], allow_abbrev=False)
    _common(p, suppress=False)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, **kw):
        sp = sub.add_parser(name, allow_abbrev=False, **kw)
        _common(sp, suppress=True)
        return sp

    gp = add("gen-poly", help="list primitive polynomials of degree m")
    gp.add_argument("--m", type=int, required=True)
    gp.add_argument("--count", type=int, default=1)
    gp.add_argument("--emit-sequence", action="store_true")

    gm = add("gen-matrix", help="emit one ensemble member")
    gm.add_argument("--m", type=int, required=True)
    gm.add_argument("--poly-index", type=int, default=0)
    gm.add_argument("--poly", default=None, help="polynomial hex overriding --poly-index")
    gm.add_argument("--a", type=int, default=0)
    gm.add_argument("--negated", action="store_true")
    gm.add_argument("--format", choices=["dense-csv", "row"], default="row")

    mo = add("moments", help="pure-moment convergence sweep")
    mo.add_argument("--m-range", type=parse_m_range, default=parse_m_range("7..15"))
    mo.add_argument("--r", type=parse_int_list, default=[2, 3, 4, 6])
    mo.add_argument("--poly-index", type=int, default=0)

    ind = add("independence", help="mixed-moment sweep over companion pairs")
    ind.add_argument("--m-range", type=parse_m_range, default=parse_m_range("7..15"))
    ind.add_argument("--ts", nargs="+", default=["1,1"], help="t,s pairs, e.g. 1,1 2,2")
    ind.add_argument("--poly-index", type=int, default=0)
    ind.add_argument("--max-decimation", type=int, default=None)
    ind.add_argument("--exhaustive-cap", type=int, default=EXHAUSTIVE_PAIR_CAP)

    sh = add("spectrum-hist", help="normalized eigenvalue histogram of A_n(0)")
    sh.add_argument("--m", type=int, required=True)
    sh.add_argument("--poly-index", type=int, default=0)
    sh.add_argument("--bins", type=int, default=50)

    ft = add("fit", help="fit log(abs_error) against log(n) from a sweep CSV")
    ft.add_argument("--in", dest="infile", required=True)
    ft.add_argument("--kind", default=None)
    ft.add_argument("--t", type=int, default=None)
    ft.add_argument("--s", type=int, default=None)
    return p


@contextlib.contextmanager
def _output(path):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _emit_records(args, records, meta=None) -> None:
    if args.json:
        print(records_to_json(records, meta))
        if args.out:
            with _output(args.out) as fh:
                write_csv(records, fh, args.timing)
        return
    with _output(args.out) as fh:
        write_csv(records, fh, args.timing)


def cmd_gen_poly(args) -> None:
    polys = enumerate_primitive(args.m, args.count)
    lines = []
    for f in polys:
        lines.append(generate(f).to_text() if args.emit_sequence else f.format_line())
    with _output(args.out) as fh:
        fh.write("\n".join(lines) + "\n")


def cmd_gen_matrix(args) -> None:
    if args.poly is not None:
        f = BinaryPolynomial.parse(args.poly)
        if f.degree != args.m or not is_primitive(f):
            raise PreconditionError(f"{f} is not a primitive polynomial of degree {args.m}")
    else:
        f = polynomial_for(args.m, args.poly_index)
    seq = generate(f)
    mat = build_row(seq, args.a % seq.n, args.negated)
    with _output(args.out) as fh:
        if args.format == "dense-csv":
            if mat.n > DENSE_CAP:
                raise OracleTooLargeError(f"dense output capped at n = {DENSE_CAP}")
            for row in dense_matrix(mat):
                fh.write(",".join(fmt_float(x) for x in row) + "\n")
        else:
            header = {"n": mat.n, "a": mat.a, "negated": mat.negated, "poly": f.hex, "scale": fmt_float(mat.scale)}
            fh.write(json.dumps(header, sort_keys=True) + "\n")
            fh.write("".join("+" if u > 0 else "-" for u in mat.signed_units.tolist()) + "\n")


def cmd_moments(args) -> None:
    recs = run_moments(args.m_range, args.r, args.sampling, args.samples, args.seed, args.workers, args.poly_index)
    _emit_records(args, recs)


def cmd_independence(args) -> None:
    recs, pairs = run_independence(args.m_range, parse_ts(args.ts), args.sampling, args.samples, args.seed,
                                   args.workers, args.exhaustive_cap, args.poly_index, args.max_decimation)
    for info in pairs:
        print(f"# m={info.m} f={info.f.hex} g={info.g.hex} decimation={info.decimation}", file=sys.stderr)
    _emit_records(args, recs, {"pairs": [p.as_dict() for p in pairs]})


def cmd_spectrum_hist(args) -> None:
    edges, mass, _ = spectrum_histogram(args.m, args.poly_index, args.bins)
    with _output(args.out) as fh:
        fh.write("bin_lo,bin_hi,mass\n")
        for lo, hi, w in zip(edges[:-1], edges[1:], mass):
            fh.write(f"{fmt_float(lo)},{fmt_float(hi)},{fmt_float(w)}\n")


def cmd_fit(args) -> None:
    with open(args.infile, newline="") as fh:
        recs = read_csv(fh)
    sel = [r for r in recs
           if (args.kind is None or r.kind == args.kind)
           and (args.t is None or r.t == args.t)
           and (args.s is None or r.s == args.s)]
    fit = fit_decay(sel)
    if args.json:
        print(json.dumps(fit.__dict__, sort_keys=True))
    else:
        print(f"slope={fmt_float(fit.slope)} intercept={fmt_float(fit.intercept)} "
              f"r_squared={fmt_float(fit.r_squared)} points={fit.points}")


COMMANDS = {
    "gen-poly": cmd_gen_poly,
    "gen-matrix": cmd_gen_matrix,
    "moments": cmd_moments,
    "independence": cmd_independence,
    "spectrum-hist": cmd_spectrum_hist,
    "fit": cmd_fit,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        COMMANDS[args.command](args)
    except GolombMatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())

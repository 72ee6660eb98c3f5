"""Command-line interface: faces, rank, scan, isom."""
from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from itertools import product
from typing import Optional, Sequence

from .cone import face_volume
from .errors import GKZError, InvariantViolation, NotFullLattice, NotPointed, RecursionDepthExceeded
from .isom import distinguishing_face, isom_signature
from .rankjump import rank_jump
from .ranking import ranking_lattices
from .semigroup import MonoidModule

SCHEMA_VERSION = 1

EXIT_OK, EXIT_PARSE, EXIT_PRECONDITION, EXIT_INTERNAL = 0, 2, 3, 4


class ParseError(ValueError):
    pass


# ---------------------------------------------------------------------------
# strict parsers and their inverses


def _int(tok: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"not an integer: {tok!r}") from None


def parse_matrix(text: str) -> tuple[tuple[int, ...], ...]:
    lines = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not lines or len(lines[0]) != 2:
        raise ParseError('first line must be "d n"')
    d, n = (_int(t) for t in lines[0])
    if d <= 0 or n <= 0:
        raise ParseError("dimensions must be positive")
    rows = lines[1:]
    if len(rows) != d:
        raise ParseError(f"expected {d} rows, got {len(rows)}")
    out = []
    for r in rows:
        if len(r) != n:
            raise ParseError(f"expected {n} entries per row, got {len(r)}")
        out.append(tuple(_int(t) for t in r))
    return tuple(out)


def format_matrix(a: Sequence[Sequence[int]]) -> str:
    lines = [f"{len(a)} {len(a[0])}"] + [" ".join(str(x) for x in r) for r in a]
    return "\n".join(lines) + "\n"


_RATIONAL = re.compile(r"[+-]?\d+(/\d+)?")


def _frac(tok: str) -> Fraction:
    tok = tok.strip()
    if not _RATIONAL.fullmatch(tok):
        raise ParseError(f"not a rational p/q: {tok!r}")
    try:
        return Fraction(tok)
    except ZeroDivisionError:
        raise ParseError(f"zero denominator: {tok!r}") from None


def parse_beta(text: str, d: Optional[int] = None) -> tuple[Fraction, ...]:
    if not text.strip():
        raise ParseError("empty parameter")
    beta = tuple(_frac(t) for t in text.split(","))
    if d is not None and len(beta) != d:
        raise ParseError(f"parameter has {len(beta)} entries, matrix has {d} rows")
    return beta


def format_rational(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def format_beta(beta: Sequence[Fraction]) -> str:
    return ",".join(format_rational(Fraction(x)) for x in beta)


def parse_generators(text: str, d: int) -> tuple[tuple[int, ...], ...]:
    gens = []
    for ln in text.splitlines():
        if not ln.strip():
            continue
        toks = ln.replace(",", " ").split()
        if len(toks) != d:
            raise ParseError(f"generator {ln.strip()!r} does not have {d} entries")
        gens.append(tuple(_int(t) for t in toks))
    if not gens:
        raise ParseError("no generators given")
    return tuple(gens)


def parse_box(text: str, d: int) -> tuple[tuple[int, int], ...]:
    """Per-coordinate inclusive ranges "lo:hi,lo:hi,..."."""
    parts = text.split(",")
    if len(parts) != d:
        raise ParseError(f"box has {len(parts)} ranges, matrix has {d} rows")
    box = []
    for p in parts:
        ends = p.split(":")
        if len(ends) != 2:
            raise ParseError(f"range must be lo:hi, got {p!r}")
        lo, hi = _int(ends[0].strip()), _int(ends[1].strip())
        if lo > hi:
            raise ParseError(f"empty range {p!r}")
        box.append((lo, hi))
    return tuple(box)


def format_box(box: Sequence[tuple[int, int]]) -> str:
    return ",".join(f"{lo}:{hi}" for lo, hi in box)


# ---------------------------------------------------------------------------
# commands


def _read(path: str) -> str:
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e}") from None


def _module(args) -> MonoidModule:
    a = parse_matrix(_read(args.matrix))
    gens = parse_generators(_read(args.generators), len(a)) if args.generators else ()
    try:
        return MonoidModule(a, gens)
    except ValueError as e:
        raise ParseError(str(e)) from None


def cmd_faces(m: MonoidModule) -> dict:
    lat = m.faces
    facets = {p.facet.columns: p.coefficients for p in lat.facet_list}
    faces = []
    for f in lat.faces:
        entry = {"columns": list(f.columns), "dim": f.dim, "codim": f.codim,
                 "vol": face_volume(f, lat)}
        if f.columns in facets:
            entry["support_function"] = list(facets[f.columns])
        faces.append(entry)
    return {"schema_version": SCHEMA_VERSION, "d": lat.d, "n": lat.n,
            "vol_A": face_volume(lat.full, lat), "faces": faces}


def cmd_rank(m: MonoidModule, beta: Sequence[Fraction]) -> dict:
    out = {"schema_version": SCHEMA_VERSION}
    out.update(rank_jump(m, beta).to_json())
    return out


def _scan_one(args: tuple) -> tuple:
    m, beta = args
    rl = ranking_lattices(m, beta)
    return beta, rl.signature_hash(), rank_jump(m, beta).j


def scan_rows(m: MonoidModule, box: Sequence[tuple[int, int]], jobs: int = 1) -> list[tuple]:
    points = [tuple(Fraction(x) for x in p) for p in product(*(range(lo, hi + 1) for lo, hi in box))]
    work = [(m, p) for p in points]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            rows = list(ex.map(_scan_one, work, chunksize=8))
    else:
        rows = [_scan_one(w) for w in work]
    rows.sort(key=lambda r: r[0])
    return rows


def cmd_scan(m: MonoidModule, box, jobs: int = 1) -> dict:
    rows = scan_rows(m, box, jobs)
    groups: dict[str, dict] = {}
    for beta, sig, j in rows:
        g = groups.setdefault(sig, {"signature": sig, "count": 0, "j": set(), "first": beta})
        g["count"] += 1
        g["j"].add(j)
    strata = [{"signature": g["signature"], "count": g["count"], "j": sorted(g["j"]),
               "first_beta": [format_rational(x) for x in g["first"]]}
              for g in sorted(groups.values(), key=lambda g: g["first"])]
    return {"schema_version": SCHEMA_VERSION, "box": format_box(box),
            "rows": [{"beta": [format_rational(x) for x in b], "signature": s, "j": j}
                     for b, s, j in rows],
            "strata": strata}


def scan_csv(report: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["beta", "signature", "j"])
    for r in report["rows"]:
        w.writerow([",".join(r["beta"]), r["signature"], r["j"]])
    return buf.getvalue()


def cmd_isom(m: MonoidModule, beta, beta2) -> dict:
    if not m.is_semigroup:
        raise ParseError("isom is defined only for M = NA; drop --generators")
    f = distinguishing_face(m, beta, beta2)
    out = {"schema_version": SCHEMA_VERSION, "beta": [format_rational(x) for x in beta],
           "beta_prime": [format_rational(x) for x in beta2], "isomorphic": f is None,
           "witness_face": None if f is None else list(f.columns)}
    if f is not None and f != m.faces.full:
        out["signatures"] = [isom_signature(m, beta).to_json()["per_face"].get(_key(f)),
                             isom_signature(m, beta2).to_json()["per_face"].get(_key(f))]
    return out


def _key(f) -> str:
    return ",".join(map(str, f.columns))


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gkzrank", description="Combinatorial rank jumps of A-hypergeometric systems.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--matrix", required=True, help='file with "d n" then d rows of integers')
        sp.add_argument("--generators", help="file with one generator of M per line (default: M = NA)")
        sp.add_argument("--format", choices=["json", "csv"], default="json")

    common(sub.add_parser("faces", help="faces, volumes and support functions"))
    sp = sub.add_parser("rank", help="rank jump and holonomic rank at beta")
    common(sp)
    sp.add_argument("--beta", required=True, help="comma-separated rationals p/q")
    sp = sub.add_parser("scan", help="rank jumps over an integer box, grouped by ranking slab")
    common(sp)
    sp.add_argument("--box", required=True, help="per-coordinate ranges lo:hi,lo:hi,...")
    sp.add_argument("--jobs", type=int, default=1)
    sp = sub.add_parser("isom", help="decide isomorphism of the systems at beta and beta'")
    common(sp)
    sp.add_argument("--beta", required=True)
    sp.add_argument("--beta-prime", required=True)
    return p


def _emit(obj: dict, fmt: str, command: str) -> str:
    if fmt == "csv":
        if command != "scan":
            raise ParseError("csv output is only available for scan")
        return scan_csv(obj)
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def run(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_PARSE if e.code else EXIT_OK
    try:
        m = _module(args)
        if args.command == "faces":
            res = cmd_faces(m)
        elif args.command == "rank":
            res = cmd_rank(m, parse_beta(args.beta, m.d))
        elif args.command == "scan":
            if args.jobs < 1:
                raise ParseError("--jobs must be positive")
            res = cmd_scan(m, parse_box(args.box, m.d), args.jobs)
        else:
            res = cmd_isom(m, parse_beta(args.beta, m.d), parse_beta(args.beta_prime, m.d))
        out.write(_emit(res, args.format, args.command))
        return EXIT_OK
    except ParseError as e:
        err.write(f"parse error: {e}\n")
        return EXIT_PARSE
    except (NotPointed, NotFullLattice) as e:
        err.write(f"precondition failed: {type(e).__name__}: {e}\n")
        return EXIT_PRECONDITION
    except (InvariantViolation, RecursionDepthExceeded, GKZError) as e:
        err.write(f"internal error: {type(e).__name__}: {e}\n")
        return EXIT_INTERNAL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

"""Command line front end.

Exit codes: 0 success, 1 I/O or parse error, 2 validation error,
3 caps exceeded, 4 empty intersection suspected.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import balanced, fractal, spectral, words
from .words import Substitution, ValidationError

EXIT_OK = 0
EXIT_IO = 1
EXIT_VALIDATION = 2
EXIT_CAP = 3
EXIT_EMPTY = 4


class SubstitutionFormatError(ValidationError):
    pass


def parse_substitution(text: str) -> Substitution:
    """Parse ``<letter> -> <word>`` lines; ``#`` starts a comment."""
    rules: dict[str, str] = {}
    lines: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        lhs, arrow, rhs = line.partition("->")
        lhs, rhs = lhs.strip(), rhs.strip()
        if not arrow:
            raise SubstitutionFormatError(f"line {lineno}: expected '<letter> -> <word>'")
        if len(lhs) != 1:
            raise SubstitutionFormatError(f"line {lineno}: left side {lhs!r} must be one letter")
        if lhs in rules:
            raise SubstitutionFormatError(
                f"line {lineno}: duplicate rule for {lhs!r} (first at line {lines[lhs]})")
        if not rhs:
            raise SubstitutionFormatError(f"line {lineno}: empty image for {lhs!r}")
        if any(c.isspace() for c in rhs):
            raise SubstitutionFormatError(f"line {lineno}: image {rhs!r} contains whitespace")
        rules[lhs] = rhs
        lines[lhs] = lineno
    if not rules:
        raise SubstitutionFormatError("no rules found")
    for a, img in rules.items():
        for c in img:
            if c not in rules:
                raise SubstitutionFormatError(f"line {lines[a]}: letter {c!r} has no rule")
    return Substitution.from_rules(rules)


def format_substitution(sigma: Substitution) -> str:
    return str(sigma) + "\n"


def load_substitution(path) -> Substitution:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc.strerror}") from exc
    return parse_substitution(text)


def _require_ok(sigma: Substitution) -> spectral.Classification:
    cls = spectral.classify(sigma.matrix)
    if not words.is_primitive(sigma.matrix):
        raise ValidationError("substitution is not primitive")
    if not cls.ok:
        raise ValidationError(f"not an irreducible unimodular Pisot substitution: {cls.reasons}")
    return cls


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_info(args, out) -> int:
    sigma = load_substitution(args.file)
    M = sigma.matrix
    coeffs = spectral.char_poly(M)
    cls = spectral.classify(M)
    primitive = words.is_primitive(M)
    print(f"alphabet: {' '.join(sigma.letters)}", file=out)
    print("matrix:", file=out)
    for row in M.tolist():
        print("  " + " ".join(str(x) for x in row), file=out)
    print(f"char poly: {spectral.format_poly(coeffs)}", file=out)
    if primitive:
        pd = spectral.perron_data(M, tol=args.tol)
        print(f"beta: {pd.beta:.10f}", file=out)
        print("right eigenvector: " + " ".join(f"{x:.10f}" for x in pd.right), file=out)
    print(f"primitive: {str(primitive).lower()}", file=out)
    print(f"irreducible: {str(cls.irreducible).lower()}", file=out)
    print(f"unimodular: {str(cls.unimodular).lower()}", file=out)
    print(f"pisot: {str(cls.pisot).lower()}", file=out)
    print(f"notes: {cls.reasons}", file=out)
    if primitive:
        stream = words.periodic_point(sigma)
        print(f"periodic point: k={stream.k} seed={stream.seed} prefix={stream.prefix(20)}", file=out)
    return EXIT_OK


def cmd_render(args, out) -> int:
    sigma = load_substitution(args.file)
    _require_ok(sigma)
    pd = spectral.perron_data(sigma.matrix, tol=args.tol)
    cloud = fractal.rauzy_cloud(sigma, args.points, pd)
    if not args.subtiles:
        cloud.labels = np.zeros(len(cloud), dtype=np.int64)
        cloud.label_names = ["tile"]
    fractal.render_ppm(cloud, args.width, args.height).save(args.out)
    print(f"points: {len(cloud)}", file=out)
    print(f"max norm: {cloud.max_norm():.10f}", file=out)
    print(f"wrote: {args.out}", file=out)
    return EXIT_OK


def cmd_intersect(args, out) -> int:
    s1 = load_substitution(args.file1)
    s2 = load_substitution(args.file2)
    balanced.common_alphabet(s1, s2)
    _require_ok(s1)
    report = balanced.intersection_morphism(
        s1, s2, seed_cap=args.seed_cap, blocklen_cap=args.blocklen_cap,
        blockcount_cap=args.blockcount_cap)
    print(f"status: {report.status.value}", file=out)
    print(f"power: {report.power}", file=out)
    print(f"caps: seed={args.seed_cap} blocklen={args.blocklen_cap} blockcount={args.blockcount_cap}",
          file=out)
    if report.status is not balanced.Status.SUCCESS:
        print(f"message: {report.message}", file=out)
        return EXIT_EMPTY if report.status is balanced.Status.EMPTY_INTERSECTION_SUSPECTED else EXIT_CAP
    m = report.morphism
    print(f"blocks: {report.block_count}", file=out)
    print(f"longest block: {report.max_block_length}", file=out)
    text = m.to_text()
    if args.out_morphism:
        Path(args.out_morphism).write_text(text, encoding="utf-8", newline="\n")
        print(f"wrote: {args.out_morphism}", file=out)
    else:
        out.write(text)
    if args.render:
        pd = spectral.perron_data(s1.matrix, tol=args.tol)
        cloud = balanced.common_points(s1, s2, args.points, pd, m)
        fractal.render_ppm(cloud, args.width, args.height).save(args.render)
        print(f"common points: {len(cloud)}", file=out)
        print(f"wrote: {args.render}", file=out)
    return EXIT_OK


def cmd_check_coincidence(args, out) -> int:
    sigma = load_substitution(args.file)
    rep = words.strong_coincidence(sigma, kcap=args.max_k)
    verdict = "holds" if rep.holds else "inconclusive"
    print(f"strong coincidence: {verdict}", file=out)
    for (b1, b2), w in sorted(rep.witness.items()):
        if b1 != b2:
            print(f"  {b1} {b2}: k={w.k} letter={w.letter} {w.variant} positions={w.positions[0]},{w.positions[1]}",
                  file=out)
    for b1, b2 in rep.missing:
        print(f"  {b1} {b2}: no witness for k <= {args.max_k}", file=out)
    return EXIT_OK


def cmd_aligned(args, out) -> int:
    s1 = load_substitution(args.file1)
    s2 = load_substitution(args.file2)
    positions = balanced.aligned_letter_check(s1, s2, args.letter, args.length)
    print(f"letter {args.letter}: {len(positions)} aligned positions below {args.length}", file=out)
    shown = positions[:args.show]
    if shown:
        print("positions: " + " ".join(map(str, shown)) + (" ..." if len(positions) > len(shown) else ""),
              file=out)
    return EXIT_OK


# ---------------------------------------------------------------------------

def _positive_int(text):
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _positive_float(text):
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pisot", description=__doc__.splitlines()[0])
    parser.add_argument("--tol", type=_positive_float, default=1e-10, help="numeric tolerance")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("info", help="matrix, characteristic polynomial and classification")
    p.add_argument("file")
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("render", help="render the Rauzy fractal as PPM")
    p.add_argument("file")
    p.add_argument("--points", type=_positive_int, default=100_000)
    p.add_argument("--out", required=True)
    p.add_argument("--width", type=_positive_int, default=800)
    p.add_argument("--height", type=_positive_int, default=800)
    p.add_argument("--subtiles", action="store_true", help="color points by subtile")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("intersect", help="morphism over minimal balanced blocks")
    p.add_argument("file1")
    p.add_argument("file2")
    p.add_argument("--out-morphism")
    p.add_argument("--render")
    p.add_argument("--points", type=_positive_int, default=100_000)
    p.add_argument("--width", type=_positive_int, default=800)
    p.add_argument("--height", type=_positive_int, default=800)
    p.add_argument("--seed-cap", type=_positive_int, default=balanced.DEFAULT_SEED_CAP)
    p.add_argument("--blocklen-cap", type=_positive_int, default=balanced.DEFAULT_BLOCKLEN_CAP)
    p.add_argument("--blockcount-cap", type=_positive_int, default=balanced.DEFAULT_BLOCKCOUNT_CAP)
    p.set_defaults(func=cmd_intersect)

    p = sub.add_parser("check-coincidence", help="search for strong coincidence witnesses")
    p.add_argument("file")
    p.add_argument("--max-k", type=_positive_int, default=20)
    p.set_defaults(func=cmd_check_coincidence)

    p = sub.add_parser("aligned", help="positions where both fixed points carry a letter")
    p.add_argument("file1")
    p.add_argument("file2")
    p.add_argument("--letter", required=True)
    p.add_argument("--length", type=_positive_int, default=100_000)
    p.add_argument("--show", type=int, default=20, help="how many positions to print")
    p.set_defaults(func=cmd_aligned)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # usage errors are parse errors here, not validation failures
        return EXIT_OK if exc.code == 0 else EXIT_IO
    try:
        return args.func(args, out)
    except SubstitutionFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())

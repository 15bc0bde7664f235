"""Command-line front end.

Exit status: 0 computation completed (verdict on stdout), 2 usage error,
3 input format error, 4 precondition violation.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

from . import amalgamation as am
from .arrow import ArrowInstance, check_arrow, search_witness, transfer_check
from .classes import membership, enumerate_members, parse_class_spec
from .errors import ParseError, PreconditionError, StructureFormatError
from .formula import parse_formula
from .product import diagonal_check, full_product, index_pair
from .structures import Structure, embedding_maps, parse_structure, render_structure

EXIT_OK, EXIT_USAGE, EXIT_FORMAT, EXIT_PRECONDITION = 0, 2, 3, 4

TSV_HEADER = "kind\tkey\tvalue"


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


def read_structure(path: str, flag: str) -> Structure:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{flag} {path}: cannot read file ({exc.strerror})") from None
    try:
        return parse_structure(text, source=path)
    except StructureFormatError as exc:
        raise InputError(f"{flag}: {exc}") from None


def parse_map(text: str, source_size: int, target_size: int, source: str = "<map>") -> tuple[int, ...]:
    """Parse "i -> j" lines; every source element must appear exactly once."""
    image: dict[int, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        left, sep, right = line.partition("->")
        try:
            if not sep:
                raise ValueError
            i, j = int(left), int(right)
        except ValueError:
            raise StructureFormatError(f"{source}:{lineno}: expected 'i -> j', got {line!r}") from None
        if not 0 <= i < source_size or not 0 <= j < target_size:
            raise StructureFormatError(f"{source}:{lineno}: {i} -> {j} leaves the domains")
        if i in image:
            raise StructureFormatError(f"{source}:{lineno}: element {i} mapped twice")
        image[i] = j
    missing = [i for i in range(source_size) if i not in image]
    if missing:
        raise StructureFormatError(f"{source}: no line for source elements {missing}")
    return tuple(image[i] for i in range(source_size))


def render_map(m: Sequence[int]) -> str:
    return "".join(f"{i} -> {j}\n" for i, j in enumerate(m))


def read_map(path: str, flag: str, source_size: int, target_size: int) -> tuple[int, ...]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{flag} {path}: cannot read file ({exc.strerror})") from None
    try:
        return parse_map(text, source_size, target_size, source=path)
    except StructureFormatError as exc:
        raise InputError(f"{flag}: {exc}") from None


def split_sections(text: str) -> list[tuple[str, str]]:
    """Split command output into (title, body) pairs at lines starting with '--- '."""
    sections: list[tuple[str, list[str]]] = [("", [])]
    for line in text.splitlines():
        if line.startswith("--- "):
            sections.append((line[4:].strip(), []))
        else:
            sections[-1][1].append(line)
    return [(title, "\n".join(body) + "\n") for title, body in sections]


class Out:
    def __init__(self, fmt: str):
        self.fmt = fmt
        self.lines: list[str] = []
        if fmt == "tsv":
            self.lines.append(TSV_HEADER)

    def text(self, s: str):
        if self.fmt == "text":
            self.lines.extend(s.rstrip("\n").split("\n"))

    def row(self, kind: str, key: str, value):
        if self.fmt == "tsv":
            self.lines.append(f"{kind}\t{key}\t{value}")

    def section(self, title: str, body: str):
        self.text(f"--- {title}")
        self.text(body)

    def render(self) -> str:
        return "\n".join(self.lines) + "\n"


def _class(args):
    if args.cls is None:
        raise UsageError("--class is required for this command")
    try:
        return parse_class_spec(args.cls)
    except ParseError as exc:
        raise UsageError(f"--class: {exc}") from None


def cmd_arrow(args, out: Out):
    A, B, C = (read_structure(getattr(args, k), f"--{k}") for k in ("A", "B", "C"))
    cert = check_arrow(ArrowInstance(A, B, C, args.r), canonical_certificate=args.canonical_certificate)
    out.text(cert.verdict)
    out.row("verdict", "arrow", cert.verdict)
    if not cert.holds:
        for i, c in enumerate(cert.coloring):
            out.text(f"emb#{i} -> {c}")
            out.row("color", f"emb#{i}", c)


def cmd_witness(args, out: Out):
    C = _class(args)
    A, B = read_structure(args.A, "--A"), read_structure(args.B, "--B")
    W = search_witness(C, A, B, args.r, args.max_size)
    if W is None:
        out.text(f"NO-WITNESS up to size {args.max_size}")
        out.row("verdict", "witness", "NO-WITNESS")
        out.row("bound", "max-size", args.max_size)
    else:
        out.text(f"WITNESS size {W.size}")
        out.section("witness", render_structure(W))
        out.row("verdict", "witness", "WITNESS")
        out.row("size", "witness", W.size)


def _diagram_sections(out: Out, d: am.AmalgamationDiagram):
    out.section("A", render_structure(d.A))
    out.section("B1", render_structure(d.B1))
    out.section("B2", render_structure(d.B2))
    out.section("e1", render_map(d.e1.map))
    out.section("e2", render_map(d.e2.map))


def _amalgam_sections(out: Out, a: am.Amalgam, title: str):
    out.section(title, render_structure(a.C))
    out.section("f1", render_map(a.f1.map))
    out.section("f2", render_map(a.f2.map))


def cmd_amalgam(args, out: Out):
    if args.mode in ("check-ap", "check-sap", "check-jep"):
        C = _class(args)
        if args.max_size is None:
            raise UsageError("--max-size is required for check modes")
        if args.max_size < 1:
            raise UsageError("--max-size must be >= 1")
        fn = {"check-ap": am.check_ap, "check-sap": am.check_sap, "check-jep": am.check_jep}[args.mode]
        res = fn(C, args.max_size, workers=args.threads)
        out.text(res.report())
        out.row("verdict", res.prop, "ok" if res.ok else "counterexample")
        out.row("bound", "max-size", res.bound)
        out.row("count", "diagrams", res.diagrams_checked)
        if not res.ok:
            _diagram_sections(out, res.counterexample)
        return
    missing = [f for f in ("A", "B1", "B2", "e1", "e2") if getattr(args, f) is None]
    if missing:
        raise UsageError(f"mode {args.mode} needs " + ", ".join(f"--{m}" for m in missing))
    C = _class(args) if args.mode == "strong" else None
    A, B1, B2 = (read_structure(getattr(args, k), f"--{k}") for k in ("A", "B1", "B2"))
    m1 = read_map(args.e1, "--e1", A.size, B1.size)
    m2 = read_map(args.e2, "--e2", A.size, B2.size)
    d = am.AmalgamationDiagram.from_maps(A, B1, B2, m1, m2)
    if args.mode == "free":
        a = am.free_amalgam(d)
        out.text("FREE-AMALGAM")
        out.row("verdict", "free", "FREE-AMALGAM")
        _amalgam_sections(out, a, "amalgam")
        return
    found = am.find_strong_amalgams(d, C)
    out.text(f"STRONG-AMALGAMS {len(found)}")
    out.row("count", "strong-amalgams", len(found))
    for i, a in enumerate(found, 1):
        _amalgam_sections(out, a, f"amalgam {i}")


def cmd_check_class(args, out: Out):
    C = _class(args)
    S = read_structure(args.infile, "--in")
    verdict = "MEMBER" if membership(C, S) else "NOT-MEMBER"
    out.text(verdict)
    out.row("verdict", "membership", verdict)


def cmd_enumerate(args, out: Out):
    C = _class(args)
    if args.size < 0:
        raise UsageError("--size must be >= 0")
    members = enumerate_members(C, args.size)
    out.text(f"MEMBERS {len(members)}")
    out.row("count", "members", len(members))
    for i, S in enumerate(members, 1):
        out.section(f"member {i}", render_structure(S))


def _symbols(text: str | None, flag: str) -> set[str]:
    if text is None:
        raise UsageError(f"{flag} is required with --diagonal-check")
    return {s.strip() for s in text.split(",") if s.strip()}


def cmd_product(args, out: Out):
    left = read_structure(args.left, "--left")
    if args.diagonal_check:
        sigma, tau = _symbols(args.sigma, "--sigma"), _symbols(args.tau, "--tau")
        ok = diagonal_check(left, sigma, tau)
        verdict = "DIAGONAL-ISOMORPHIC" if ok else "DIAGONAL-NOT-ISOMORPHIC"
        out.text(verdict)
        out.row("verdict", "diagonal", verdict)
        return
    if args.right is None:
        raise UsageError("--right is required unless --diagonal-check is given")
    right = read_structure(args.right, "--right")
    P = full_product(left, right)
    out.text(f"PRODUCT size {P.size}")
    out.row("size", "product", P.size)
    out.section("product", render_structure(P))
    out.section("pairs", "".join(f"{i} = ({a},{b})\n" for i in range(P.size)
                                 for a, b in [index_pair(i, right.size)]))
    for i in range(P.size):
        a, b = index_pair(i, right.size)
        out.row("pair", i, f"({a},{b})")


def cmd_injectivize(args, out: Out):
    C = _class(args)
    F, M = read_structure(args.F, "--F"), read_structure(args.M, "--M")
    h = read_map(args.hom, "--hom", F.size, M.size)
    M2, h2 = am.injectivize(h, F, M, C)
    out.text("INJECTIVE-HOMOMORPHISM")
    out.row("verdict", "injectivize", "INJECTIVE-HOMOMORPHISM")
    out.row("size", "target", M2.size)
    out.section("target", render_structure(M2))
    out.section("hom", render_map(h2))
    for i, j in enumerate(h2):
        out.row("hom", i, j)


def cmd_transfer(args, out: Out):
    A, B, C = (read_structure(getattr(args, k), f"--{k}") for k in ("A", "B", "C"))
    try:
        phi = parse_formula(args.phi, A.sig)
    except ParseError as exc:
        raise UsageError(f"--phi: {exc}") from None
    rep = transfer_check(A, B, C, phi, args.name, args.r)
    eq = "yes" if rep.a_embeddings_equal and rep.b_embeddings_equal else "no"
    out.text(f"plain: {rep.plain.verdict}")
    out.text(f"expanded: {rep.expanded.verdict}")
    out.text(f"embeddings-equal: {eq}")
    out.text("AGREE" if rep.agree else "DISAGREE")
    out.row("verdict", "plain", rep.plain.verdict)
    out.row("verdict", "expanded", rep.expanded.verdict)
    out.row("check", "embeddings-equal", eq)
    out.row("verdict", "transfer", "AGREE" if rep.agree else "DISAGREE")


def cmd_embeddings(args, out: Out):
    A, C = read_structure(args.A, "--A"), read_structure(args.C, "--C")
    maps = embedding_maps(A, C)
    out.text(f"EMBEDDINGS {len(maps)}")
    out.row("count", "embeddings", len(maps))
    for i, m in enumerate(maps):
        out.text(f"emb#{i}: " + " ".join(map(str, m)))
        out.row("embedding", f"emb#{i}", " ".join(map(str, m)))


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "tsv"), default="text")
    common.add_argument("--threads", type=int, default=1, help="worker processes (default 1)")

    p = _Parser(prog="ramseykit", description="Finite structural Ramsey theory toolkit.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("arrow", parents=[common], help="decide C -> (B)^A_r")
    s.add_argument("--A", required=True)
    s.add_argument("--B", required=True)
    s.add_argument("--C", required=True)
    s.add_argument("-r", type=int, required=True)
    s.add_argument("--canonical-certificate", action="store_true")
    s.set_defaults(func=cmd_arrow)

    s = sub.add_parser("witness", parents=[common], help="search a class for an arrowing structure")
    s.add_argument("--class", dest="cls", required=True)
    s.add_argument("--A", required=True)
    s.add_argument("--B", required=True)
    s.add_argument("-r", type=int, required=True)
    s.add_argument("--max-size", type=int, required=True)
    s.set_defaults(func=cmd_witness)

    s = sub.add_parser("amalgam", parents=[common], help="amalgams and bounded AP/SAP/JEP checks")
    s.add_argument("--class", dest="cls")
    s.add_argument("--mode", required=True, choices=("free", "strong", "check-ap", "check-sap", "check-jep"))
    s.add_argument("--max-size", type=int)
    for flag in ("A", "B1", "B2", "e1", "e2"):
        s.add_argument(f"--{flag}")
    s.set_defaults(func=cmd_amalgam)

    s = sub.add_parser("check-class", parents=[common], help="membership test")
    s.add_argument("--class", dest="cls", required=True)
    s.add_argument("--in", dest="infile", required=True)
    s.set_defaults(func=cmd_check_class)

    s = sub.add_parser("enumerate", parents=[common], help="members of a given size up to isomorphism")
    s.add_argument("--class", dest="cls", required=True)
    s.add_argument("--size", type=int, required=True)
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("product", parents=[common], help="full product, or the diagonal check")
    s.add_argument("--left", required=True)
    s.add_argument("--right")
    s.add_argument("--diagonal-check", action="store_true")
    s.add_argument("--sigma")
    s.add_argument("--tau")
    s.set_defaults(func=cmd_product)

    s = sub.add_parser("injectivize", parents=[common], help="make a homomorphism injective")
    s.add_argument("--class", dest="cls", required=True)
    s.add_argument("--F", required=True)
    s.add_argument("--M", required=True)
    s.add_argument("--hom", required=True)
    s.set_defaults(func=cmd_injectivize)

    s = sub.add_parser("transfer", parents=[common], help="arrow before/after a definable-order expansion")
    s.add_argument("--A", required=True)
    s.add_argument("--B", required=True)
    s.add_argument("--C", required=True)
    s.add_argument("--phi", required=True)
    s.add_argument("--name", required=True)
    s.add_argument("-r", type=int, required=True)
    s.set_defaults(func=cmd_transfer)

    s = sub.add_parser("embeddings", parents=[common], help="list embeddings of A into C")
    s.add_argument("--A", required=True)
    s.add_argument("--C", required=True)
    s.set_defaults(func=cmd_embeddings)
    return p


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if args.threads < 1:
            raise UsageError("--threads must be >= 1")
        if getattr(args, "r", 1) < 1:
            raise UsageError("-r must be >= 1")
        out = Out(args.format)
        args.func(args, out)
    except UsageError as exc:
        print(f"ramseykit: usage error: {exc}", file=stderr)
        return EXIT_USAGE
    except InputError as exc:
        print(f"ramseykit: input error: {exc}", file=stderr)
        return EXIT_FORMAT
    except (PreconditionError, ValueError) as exc:
        # SignatureMismatchError and invalid diagrams/embeddings are ValueErrors too
        print(f"ramseykit: precondition violated: {exc}", file=stderr)
        return EXIT_PRECONDITION
    stdout.write(out.render())
    return EXIT_OK


def main() -> None:
    sys.exit(run())

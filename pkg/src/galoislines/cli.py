"""Command line front end: sweep, classify, corollary, autgroup, field-info.

Exit codes are a stable contract: 0 success, 1 mathematical mismatch,
2 configuration or budget refusal (including parse errors).  Reports are
written atomically and are byte-identical across reruns with the same
configuration and seed; wall-clock timing goes into the report only with
--timing, and to stderr otherwise.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile

from . import __version__
from .curve import EmbeddedCurve
from .field import FieldError, factorize, is_prime, make_tower
from .projspace import BudgetError, GeometryError, LineP3
from .sweep import SweepError, run_sweep

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_CONFIG = 2


class ParseError(ValueError):
    def __init__(self, msg, pos):
        super().__init__(f"{msg} (at position {pos})")
        self.pos = pos


# ---------------------------------------------------------------------------
# linear form parsing
# ---------------------------------------------------------------------------

_VARS = {"X": 0, "Y": 1, "Z": 2, "W": 3}


def _tokenize(s):
    toks = []
    i = 0
    while i < len(s):
        c = s[i]
        if c.isspace():
            i += 1
            continue
        if c in "+-*^();":
            toks.append((c, i))
            i += 1
            continue
        if c.isdigit():
            j = i
            while j < len(s) and s[j].isdigit():
                j += 1
            toks.append((("int", int(s[i:j])), i))
            i = j
            continue
        if c.isalpha():
            j = i
            while j < len(s) and (s[j].isalnum()):
                j += 1
            toks.append((("sym", s[i:j]), i))
            i = j
            continue
        raise ParseError(f"unexpected character {c!r}", i)
    toks.append((("end", None), len(s)))
    return toks


class _FormValue:
    """A field constant plus a linear part in X, Y, Z, W."""

    __slots__ = ("const", "vec")

    def __init__(self, const, vec=None):
        self.const = const
        self.vec = vec

    def add(self, other, sign, tower):
        c = self.const + other.const if sign > 0 else self.const - other.const
        if self.vec is None and other.vec is None:
            return _FormValue(c)
        z = tower.zero()
        a = self.vec or [z] * 4
        b = other.vec or [z] * 4
        vec = [(x + y) if sign > 0 else (x - y) for x, y in zip(a, b)]
        return _FormValue(c, vec)

    def mul(self, other, tower, pos):
        if self.vec is not None and other.vec is not None:
            raise ParseError("forms must stay linear in X, Y, Z, W", pos)
        if other.vec is not None:
            self, other = other, self
        if self.vec is None:
            return _FormValue(self.const * other.const)
        if other.const != tower.zero() or True:
            pass
        return _FormValue(self.const * other.const,
                          [v * other.const for v in self.vec])


class _Parser:
    def __init__(self, s, tower):
        self.toks = _tokenize(s)
        self.i = 0
        self.tower = tower

    def peek(self):
        return self.toks[self.i][0]

    def pos(self):
        return self.toks[self.i][1]

    def next(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def parse_expr(self):
        sign = 1
        if self.peek() in ("+", "-"):
            sign = -1 if self.next()[0] == "-" else 1
        val = self.parse_term()
        if sign < 0:
            val = _FormValue(self.tower.zero()).add(val, -1, self.tower)
        while self.peek() in ("+", "-"):
            op, _ = self.next()
            rhs = self.parse_term()
            val = val.add(rhs, 1 if op == "+" else -1, self.tower)
        return val

    def parse_term(self):
        val = self.parse_factor()
        while self.peek() == "*" or self._starts_factor():
            if self.peek() == "*":
                self.next()
            pos = self.pos()
            rhs = self.parse_factor()
            val = val.mul(rhs, self.tower, pos)
        return val

    def _starts_factor(self):
        t = self.peek()
        return isinstance(t, tuple) and t[0] in ("int", "sym") or t == "("

    def parse_factor(self):
        base = self.parse_atom()
        if self.peek() == "^":
            pos = self.pos()
            self.next()
            t, _ = self.next()
            if not (isinstance(t, tuple) and t[0] == "int"):
                raise ParseError("exponent must be an integer", pos)
            if base.vec is not None and t[1] != 1:
                raise ParseError("cannot raise a variable to a power in a linear form", pos)
            out = _FormValue(self.tower.one())
            for _ in range(t[1]):
                out = out.mul(base, self.tower, pos)
            return out
        return base

    def parse_atom(self):
        t, pos = self.next()
        tower = self.tower
        if t == "(":
            val = self.parse_expr()
            t2, pos2 = self.next()
            if t2 != ")":
                raise ParseError("expected ')'", pos2)
            return val
        if isinstance(t, tuple) and t[0] == "int":
            return _FormValue(tower.e(t[1] % tower.p))
        if isinstance(t, tuple) and t[0] == "sym":
            name = t[1]
            if name in _VARS:
                vec = [tower.zero()] * 4
                vec[_VARS[name]] = tower.one()
                return _FormValue(tower.zero(), vec)
            gen = _gen_by_symbol(tower, name)
            if gen is not None:
                return _FormValue(gen)
            raise ParseError(f"unknown symbol {name!r}", pos)
        raise ParseError(f"unexpected token {t!r}", pos)


def _gen_by_symbol(tower, name):
    for exp in tower.chain:
        lvl = tower.levels[exp]
        if lvl.gen_symbol == name and lvl.deg > 1:
            return tower.gen(exp)
    return None


def parse_form(s, tower):
    parser = _Parser(s, tower)
    val = parser.parse_expr()
    t, pos = parser.next()
    if not (isinstance(t, tuple) and t[0] == "end"):
        raise ParseError("trailing input", pos)
    if val.vec is None or not any(val.vec):
        raise ParseError("expected a nonzero linear form in X, Y, Z, W", 0)
    if val.const:
        raise ParseError("forms must be homogeneous (no constant term)", 0)
    return val.vec


def parse_line(s, tower):
    if ";" not in s:
        raise ParseError("expected two forms separated by ';'", len(s))
    left, right = s.split(";", 1)
    f0 = parse_form(left, tower)
    f1 = parse_form(right, tower)
    return LineP3.from_forms(tower, f0, f1)


# ---------------------------------------------------------------------------
# report output
# ---------------------------------------------------------------------------

def _atomic_write(path, data):
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".report-")
    try:
        with os.fdopen(fd, "w") as f:
            f.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _sweep_csv(report):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["line", "case", "degree", "stabilizer_order", "group"])
    for row in sorted(report.get("galois_lines", [])):
        w.writerow(row)
    return buf.getvalue()


def _emit(report, args, default_name):
    if not args.timing:
        report = dict(report)
        report["wall_seconds"] = None
    if args.format == "json":
        data = json.dumps(report, sort_keys=True, indent=2) + "\n"
    else:
        data = _sweep_csv(report)
    out = args.out or default_name
    if out == "-":
        sys.stdout.write(data)
    else:
        _atomic_write(out, data)
        print(f"report written to {out}")


def _tower_for(q):
    fac = factorize(q)
    if len(fac) != 1 or q % 2 == 0 or q < 5:
        raise FieldError(f"q must be an odd prime power >= 5 (got {q})")
    p = next(iter(fac))
    return make_tower(p, fac[p], 4)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_sweep(args):
    report = run_sweep(args.q, mode=args.mode, sample_budget=args.samples,
                       seed=args.seed, workers=args.workers, force=args.force,
                       transitivity_fibers=args.transitivity)
    report["version"] = __version__
    mismatches = report["mismatches"]
    _emit(report, args, f"sweep-q{args.q}-{args.mode}.{args.format}")
    if args.timing:
        print(f"wall: {report['wall_seconds']}s", file=sys.stderr)
    if mismatches:
        print(f"{len(mismatches)} mismatches", file=sys.stderr)
        return EXIT_MISMATCH
    print(f"q={args.q} {args.mode}: {report['galois_total']} Galois lines, "
          f"counts {report['counts']}, zero mismatches")
    return EXIT_OK


def cmd_classify(args):
    tower = _tower_for(args.q)
    curve = EmbeddedCurve(tower)
    line = parse_line(args.line, tower)
    from .lines import is_galois

    v = is_galois(curve, line)
    print(f"line: {line}")
    print(f"case: {v.case}")
    print(f"galois: {v.galois}")
    print(f"degree: {v.degree if v.degree is not None else '(not computed; stabilizer trivial)'}")
    print(f"stabilizer order: {v.stabilizer_order}")
    if v.group is not None:
        print(f"group: {v.group.label()}")
    for k, val in sorted(v.witnesses.items()):
        if isinstance(val, list):
            val = ", ".join(str(x) for x in val)
        print(f"witness {k}: {val}")
    return EXIT_OK


def cmd_corollary(args):
    tower = _tower_for(args.q)
    curve = EmbeddedCurve(tower)
    from .planemodels import verify_corollary

    which = args.which if args.which == "prop" else int(args.which)
    report = verify_corollary(curve, which, seed=args.seed)
    report["version"] = __version__
    report["wall_seconds"] = None
    _emit(report, args, f"corollary-{args.which}-q{args.q}.json")
    n = len(report["galois_points"])
    if report["pass"]:
        print(f"arrangement {args.which} at q={args.q}: {n} Galois points, pass")
        return EXIT_OK
    print(f"arrangement {args.which} at q={args.q}: FAILED", file=sys.stderr)
    return EXIT_MISMATCH


def cmd_autgroup(args):
    tower = _tower_for(args.q)
    from .autgroup import build_full_group

    grp = build_full_group(tower, verify=True)
    q = tower.q
    print(f"automorphism group order: {grp.order} "
          f"(= q(q-1)(q+1)^2/2 at q={q})")
    print(f"kernel of the conic restriction: {len(grp.kernel_maps())} "
          f"(= (q+1)/2)")
    print(f"image on the conic: {grp.image_order_on_conic()} (= |PGL(2,{q})|)")
    census = grp.element_order_census()
    print("element order census:", " ".join(f"{o}:{c}" for o, c in census.items()))
    print("every element passes the symbolic curve-preservation check")
    return EXIT_OK


def cmd_field_info(args):
    tower = _tower_for(args.q)
    print(f"q = {tower.q} = {tower.p}^{tower.n}")
    print(f"tower: {tower.descriptor()}")
    for exp in tower.chain:
        lvl = tower.levels[exp]
        print(f"  level {exp}: GF({tower.q}^{exp}) = GF({tower.p}^{tower.n * exp}), "
              f"{lvl.size} elements, modulus {lvl.modulus_str()}")
    return EXIT_OK


def build_parser():
    ap = argparse.ArgumentParser(
        prog="galois-lines",
        description="Exact verification of the Galois-line and Galois-point "
                    "arrangements of the degree-(q+1) space model of "
                    "y^((q+1)/2) = x^q - x.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, with_format=True):
        p.add_argument("--q", type=int, required=True,
                       help="odd prime power >= 5")
        p.add_argument("--seed", type=int, default=0)
        if with_format:
            p.add_argument("--format", choices=("json", "csv"), default="json")
            p.add_argument("--out", default=None,
                           help="output path ('-' for stdout)")
            p.add_argument("--timing", action="store_true",
                           help="embed wall time in the report "
                                "(breaks byte-reproducibility)")

    ps = sub.add_parser("sweep", help="classify every line and verify")
    common(ps)
    ps.add_argument("--mode", choices=("full", "stratified"), default="full")
    ps.add_argument("--samples", type=int, default=20,
                    help="level-4 / random sampling budget")
    ps.add_argument("--workers", type=int, default=None)
    ps.add_argument("--force", action="store_true",
                    help="override the full-sweep budget guard")
    ps.add_argument("--transitivity", type=int, default=0,
                    help="verify this many fibers per case representative")
    ps.set_defaults(fn=cmd_sweep)

    pc = sub.add_parser("classify", help="classify one line")
    common(pc, with_format=False)
    pc.add_argument("line", help="two forms separated by ';', e.g. 'X; Z'")
    pc.set_defaults(fn=cmd_classify)

    pr = sub.add_parser("corollary", help="verify a plane-model arrangement")
    common(pr)
    pr.add_argument("--which", choices=("1", "2", "3", "prop"), required=True)
    pr.set_defaults(fn=cmd_corollary)

    pa = sub.add_parser("autgroup", help="automorphism group census")
    common(pa, with_format=False)
    pa.set_defaults(fn=cmd_autgroup)

    pf = sub.add_parser("field-info", help="print the tower data")
    common(pf, with_format=False)
    pf.set_defaults(fn=cmd_field_info)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except (FieldError, SweepError, BudgetError, GeometryError, ParseError) as ex:
        print(f"error: {ex}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())

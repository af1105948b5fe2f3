"""Command-line front end.

Input files are line oriented and split into sections::

    [field] p=7 d=6 c=3
    [quiver] weights=1,2,1,3
    arrow delta 1 2
    [potential]
    1 alpha beta gamma delta
    [matrix] D=1,2,1,3
    0 -1 0 1
    [rep] dims=1,0,0,0 deco=0,0,0,0
    map alpha 1;0;0
    [unfolding] e=2,1
    0 0 -1

Blank lines and text after ``#`` are ignored.  Results are printed as
``key: value`` lines.  Exit codes: 0 success, 1 mathematical obstruction,
2 bad input, 3 internal failure (including a failed ``verify`` suite).
"""

from __future__ import annotations

import argparse
import random
import sys
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path as FilePath
from typing import Callable

import numpy as np

from .dreps import (
    DecoratedRep,
    _is_sink,
    _is_source,
    mutate_decorated,
    reflect_sink,
    reflect_source,
    validate_rep,
)
from .errors import InputError, InternalError, MathError, ParseError, SpforgeError, ValidationError
from .fields import FieldTower, extend_base, make_tower
from .nondeg import SequenceQuery, search_sequence_nondegenerate
from .pathalg import Elem, PathAlgebra, format_path
from .potentials import jacobian_data
from .quivers import Arrow, ExchangeMatrix, WeightedQuiver, mutate_matrix, mutate_wq, wq_to_matrix
from .spmut import SpeciesWithPotential, mutate_sequence, restrict, split
from .suites import SUITES, run_suite
from .unfold import (
    Unfolding,
    check_unfolding,
    exhaustive_obstruction_search,
    obstruction_witness,
    structured_candidate,
)

RUNNING_EXAMPLE = "@running"


@dataclass(eq=False)
class Workspace:
    tower: FieldTower | None = None
    m: int = 1
    trunc: int | None = None
    quiver: WeightedQuiver | None = None
    potential: list[tuple[object, str]] = field(default_factory=list)
    matrix: ExchangeMatrix | None = None
    rep: DecoratedRep | None = None
    unfolding: Unfolding | None = None

    def __eq__(self, other):
        if not isinstance(other, Workspace):
            return NotImplemented
        return format_workspace(self) == format_workspace(other)

    @property
    def base_tower(self) -> FieldTower:
        if self.tower is None:
            raise ValidationError("a [field] section is required")
        return extend_base(self.tower, self.m)

    def sp(self) -> SpeciesWithPotential:
        if self.quiver is None:
            raise ValidationError("a [quiver] section is required")
        alg = PathAlgebra(self.quiver, self.base_tower, self.trunc)
        return SpeciesWithPotential(alg, potential_elem(alg, self.potential))

    def exchange_matrix(self) -> ExchangeMatrix:
        if self.matrix is not None:
            return self.matrix
        if self.quiver is None:
            raise ValidationError("a [matrix] or [quiver] section is required")
        return wq_to_matrix(self.quiver)


# parsing ---------------------------------------------------------------------------


def _ints(text: str, line: int) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.replace(",", " ").split())
    except ValueError:
        raise ParseError(f"expected integers, got {text!r}", line) from None


def _keyvals(tokens: list[str], line: int) -> dict[str, str]:
    out = {}
    for tok in tokens:
        if "=" not in tok:
            raise ParseError(f"expected key=value, got {tok!r}", line)
        k, v = tok.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def parse_coeff(text: str, F, line: int | None = None):
    """An integer, a fraction ``a/b`` or a tuple ``(c0,c1,...)`` over the base field."""
    try:
        if text.startswith("("):
            parts = tuple(int(x) % F.p for x in text.strip("()").split(","))
            if len(parts) != getattr(F, "degree", 1):
                raise ParseError(f"coefficient {text} has the wrong length", line)
            return parts if F.degree > 1 else parts[0]
        if "/" in text:
            a, b = text.split("/")
            den = F.from_int(int(b))
            if F.is_zero(den):
                raise ValidationError(f"zero denominator in {text}", line)
            return F.mul(F.from_int(int(a)), F.inv(den))
        return F.from_int(int(text))
    except ValueError:
        raise ParseError(f"bad coefficient {text!r}", line) from None


def potential_elem(alg: PathAlgebra, terms: list[tuple[object, str]]) -> Elem:
    """Sum of coefficient * term over the algebra's base field."""
    S = alg.zero()
    for coeff, text in terms:
        S = S + alg.parse_term(text, coeff)
    return S


def _matrix_rows(text: str, rows: int, cols: int, p: int, line: int) -> np.ndarray:
    if not text.strip():
        return np.zeros((rows, cols), dtype=np.int64)
    vals = [_ints(r, line) for r in text.split(";")]
    if len(vals) != rows or any(len(r) != cols for r in vals):
        raise ValidationError(f"expected a {rows}x{cols} matrix", line)
    return np.array(vals, dtype=np.int64).reshape(rows, cols) % p


def parse_text(text: str) -> Workspace:
    ws = Workspace()
    sections: list[tuple[str, int, list[str], list[tuple[int, str]]]] = []
    for no, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        if body.startswith("["):
            if "]" not in body:
                raise ParseError("unterminated section header", no)
            name, rest = body[1:].split("]", 1)
            sections.append((name.strip(), no, rest.split(), []))
        elif not sections:
            raise ParseError("content before the first section", no)
        else:
            sections[-1][3].append((no, body))
    known = {"field", "quiver", "potential", "matrix", "rep", "unfolding"}
    seen = set()
    for name, no, _, _ in sections:
        if name not in known:
            raise ParseError(f"unknown section [{name}]", no)
        if name in seen:
            raise ParseError(f"duplicate section [{name}]", no)
        seen.add(name)
    order = sorted(sections, key=lambda s: ["field", "quiver", "matrix", "potential", "rep", "unfolding"].index(s[0]))
    for name, no, head, body in order:
        # key=value lines may follow the header
        kv_lines = [(n, b) for n, b in body if "=" in b.split()[0]]
        rest = [(n, b) for n, b in body if "=" not in b.split()[0]]
        kv = _keyvals(head, no)
        for n, b in kv_lines:
            kv.update(_keyvals(b.split(), n))
        _SECTION_PARSERS[name](ws, kv, rest, no)
    return ws


def _parse_field(ws: Workspace, kv, rest, no):
    if rest:
        raise ParseError("unexpected content in [field]", rest[0][0])
    try:
        p = int(kv["p"])
        d = int(kv["d"])
    except (KeyError, ValueError):
        raise ValidationError("[field] needs integer p and d", no) from None
    c = int(kv["c"]) if "c" in kv else None
    try:
        ws.tower = make_tower(p, d, c)
        ws.m = int(kv.get("m", 1))
        extend_base(ws.tower, ws.m)
    except SpforgeError as exc:
        raise ValidationError(str(exc), no) from None
    if "trunc" in kv:
        ws.trunc = int(kv["trunc"])


def _parse_quiver(ws: Workspace, kv, rest, no):
    if "weights" not in kv:
        raise ValidationError("[quiver] needs weights=", no)
    weights = _ints(kv["weights"], no)
    arrows = []
    for n, b in rest:
        toks = b.split()
        if len(toks) != 4 or toks[0] != "arrow":
            raise ParseError("expected 'arrow NAME TAIL HEAD'", n)
        try:
            arrows.append(Arrow(toks[1], int(toks[2]), int(toks[3])))
        except ValueError:
            raise ParseError("arrow endpoints must be integers", n) from None
    try:
        ws.quiver = WeightedQuiver(weights, tuple(arrows))
        if ws.tower is not None:
            for w in weights:
                ws.tower.step(w)
    except SpforgeError as exc:
        raise ValidationError(str(exc), no) from None
    if not ws.quiver.strongly_primitive:
        raise ValidationError("vertex weights must be pairwise coprime", no)


def _parse_potential(ws: Workspace, kv, rest, no):
    if ws.quiver is None or ws.tower is None:
        raise ValidationError("[potential] needs [field] and [quiver]", no)
    alg = PathAlgebra(ws.quiver, ws.base_tower, ws.trunc)
    S = alg.zero()
    for n, b in rest:
        toks = b.split(None, 1)
        if len(toks) != 2:
            raise ParseError("expected 'COEFF TERM'", n)
        coeff = parse_coeff(toks[0], alg.F, n)
        try:
            S = S + alg.parse_term(toks[1], coeff)
        except InputError as exc:
            raise ValidationError(str(exc), n) from None
    ws.potential = [(c, format_path(p)) for p, c in S.sorted_terms()]


def _parse_matrix(ws: Workspace, kv, rest, no):
    if "D" not in kv:
        raise ValidationError("[matrix] needs D=", no)
    D = _ints(kv["D"], no)
    rows = [_ints(b, n) for n, b in rest]
    try:
        ws.matrix = ExchangeMatrix(tuple(rows), D)
    except SpforgeError as exc:
        raise ValidationError(str(exc), no) from None


def _parse_rep(ws: Workspace, kv, rest, no):
    if ws.quiver is None or ws.tower is None:
        raise ValidationError("[rep] needs [field] and [quiver]", no)
    q = ws.quiver
    dims = _ints(kv.get("dims", ""), no)
    deco = _ints(kv["deco"], no) if "deco" in kv else (0,) * q.n
    if len(dims) != q.n or len(deco) != q.n:
        raise ValidationError("dims and deco need one entry per vertex", no)
    maps = {}
    for n, b in rest:
        toks = b.split(None, 2)
        if len(toks) < 2 or toks[0] != "map":
            raise ParseError("expected 'map NAME ROW;ROW;...'", n)
        name = toks[1]
        if name not in q.arrow_map:
            raise ValidationError(f"unknown arrow {name}", n)
        a = q.arrow(name)
        shape = (dims[a.head - 1] * q.weight(a.head), dims[a.tail - 1] * q.weight(a.tail))
        maps[name] = _matrix_rows(toks[2] if len(toks) > 2 else "", shape[0], shape[1], ws.tower.p, n)
    try:
        ws.rep = DecoratedRep(q, ws.tower, dims, maps, deco)
    except SpforgeError as exc:
        raise ValidationError(str(exc), no) from None


def _parse_unfolding(ws: Workspace, kv, rest, no):
    if "e" not in kv:
        raise ValidationError("[unfolding] needs e=", no)
    e = _ints(kv["e"], no)
    rows = [_ints(b, n) for n, b in rest]
    size = sum(e)
    if len(rows) != size or any(len(r) != size for r in rows):
        raise ValidationError(f"C must be {size}x{size}", no)
    ws.unfolding = Unfolding(ws.exchange_matrix(), e, np.array(rows, dtype=np.int64).reshape(size, size))


_SECTION_PARSERS: dict[str, Callable] = {
    "field": _parse_field,
    "quiver": _parse_quiver,
    "matrix": _parse_matrix,
    "potential": _parse_potential,
    "rep": _parse_rep,
    "unfolding": _parse_unfolding,
}


def running_example_text() -> str:
    return resources.files("spforge").joinpath("data/running_example.sp").read_text()


def parse_input(path: str | None) -> Workspace:
    if path is None:
        return Workspace()
    if path == RUNNING_EXAMPLE:
        return parse_text(running_example_text())
    fp = FilePath(path)
    if not fp.exists():
        raise InputError(f"no such file: {path}")
    return parse_text(fp.read_text())


# printing -------------------------------------------------------------------------


def _join(xs) -> str:
    return ",".join(str(int(x)) for x in xs)


def format_quiver(q: WeightedQuiver) -> list[str]:
    out = [f"[quiver] weights={_join(q.weights)}"]
    out += [f"arrow {a.name} {a.tail} {a.head}" for a in q.arrows]
    return out


def format_potential(S: Elem) -> list[str]:
    F = S.alg.F
    return ["[potential]"] + [f"{F.fmt(c)} {format_path(p)}" for p, c in S.sorted_terms()]


def format_workspace(ws: Workspace) -> str:
    out: list[str] = []
    if ws.tower is not None:
        line = f"[field] p={ws.tower.p} d={ws.tower.d} c={ws.tower.c}"
        if ws.m != 1:
            line += f" m={ws.m}"
        if ws.trunc is not None:
            line += f" trunc={ws.trunc}"
        out.append(line)
    if ws.quiver is not None:
        out += format_quiver(ws.quiver)
    if ws.matrix is not None:
        out.append(f"[matrix] D={_join(ws.matrix.D)}")
        out += [" ".join(str(x) for x in row) for row in ws.matrix.B]
    if ws.potential:
        F = ws.base_tower.base
        out.append("[potential]")
        out += [f"{F.fmt(c)} {t}" for c, t in ws.potential]
    if ws.rep is not None:
        r = ws.rep
        out.append(f"[rep] dims={_join(r.dims)} deco={_join(r.deco)}")
        for a in r.quiver.arrows:
            m = r.maps[a.name]
            if m.size and m.any():
                out.append(f"map {a.name} " + ";".join(",".join(str(int(x)) for x in row) for row in m))
    if ws.unfolding is not None:
        out.append(f"[unfolding] e={_join(ws.unfolding.e)}")
        out += [" ".join(str(int(x)) for x in row) for row in ws.unfolding.C]
    return "\n".join(out) + "\n"


def sp_workspace(ws: Workspace, sp: SpeciesWithPotential) -> Workspace:
    return Workspace(
        tower=ws.tower,
        m=ws.m,
        trunc=ws.trunc,
        quiver=sp.quiver,
        potential=[(c, format_path(p)) for p, c in sp.S.sorted_terms()],
    )


class Report:
    def __init__(self):
        self.lines: list[tuple[str, str]] = []

    def add(self, key: str, value) -> None:
        self.lines.append((key, str(value)))

    def matrix(self, key: str, B: ExchangeMatrix) -> None:
        self.add("D", _join(B.D))
        for row in B.B:
            self.add(key, " ".join(str(x) for x in row))

    def quiver(self, q: WeightedQuiver) -> None:
        self.add("weights", _join(q.weights))
        self.add("arrow_count", len(q.arrows))
        for a in q.arrows:
            self.add("arrow", f"{a.name} {a.tail} {a.head}")

    def potential(self, S: Elem, key: str = "term") -> None:
        F = S.alg.F
        self.add(f"{key}_count", len(S.terms))
        for p, c in S.sorted_terms():
            self.add(key, f"{F.fmt(c)} {format_path(p)}")

    def rep(self, r: DecoratedRep) -> None:
        self.add("dims", _join(r.dims))
        self.add("deco", _join(r.deco))
        for a in r.quiver.arrows:
            m = r.maps[a.name]
            self.add("map", f"{a.name} " + ";".join(",".join(str(int(x)) for x in row) for row in m))

    def render(self, mode: str = "structured") -> str:
        if mode == "text":
            width = max((len(k) for k, _ in self.lines), default=0)
            return "\n".join(f"{k.ljust(width)}  {v}" for k, v in self.lines) + "\n"
        return "\n".join(f"{k}: {v}" for k, v in self.lines) + "\n"


# commands ---------------------------------------------------------------------------


def _seq(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise InputError(f"bad sequence {text!r}") from None


def _write_out(args, ws: Workspace) -> None:
    if getattr(args, "out", None):
        FilePath(args.out).write_text(format_workspace(ws))


def cmd_mutate_matrix(ws, args, rep: Report):
    B = ws.exchange_matrix()
    for k in _seq(args.k):
        B = mutate_matrix(B, k)
    rep.add("k", args.k)
    rep.matrix("row", B)


def cmd_mutate_quiver(ws, args, rep: Report):
    if ws.quiver is None:
        raise ValidationError("a [quiver] section is required")
    q = ws.quiver
    for k in _seq(args.k):
        q = mutate_wq(q, k)
    rep.add("k", args.k)
    rep.quiver(q)


def cmd_sp_mutate(ws, args, rep: Report):
    seq = _seq(args.seq)
    out = mutate_sequence(ws.sp(), seq)
    rep.add("seq", _join(seq))
    rep.add("two_acyclic", str(out.is_2acyclic()).lower())
    rep.quiver(out.quiver)
    rep.potential(out.S)
    _write_out(args, sp_workspace(ws, out))


def cmd_split(ws, args, rep: Report):
    res = split(ws.sp())
    rep.add("pairing", " ".join(f"{a}~{b}" for a, b in res.pairing) or "none")
    rep.quiver(res.reduced.quiver)
    rep.potential(res.reduced.S, "reduced")
    rep.potential(res.trivial.S, "trivial")
    alg = res.witness.source
    for name, img in res.witness.images.items():
        if img != alg.arrow(name):
            rep.add("witness", f"{name} -> {img!r}")
    _write_out(args, sp_workspace(ws, res.reduced))


def cmd_jdim(ws, args, rep: Report):
    sp = ws.sp()
    N = args.N if args.N is not None else sp.trunc
    data = jacobian_data(sp.S, N)
    rep.add("N", N)
    rep.add("dim", data.dim)
    rep.add("stabilized", str(data.stabilized).lower())
    rep.add("by_length", _join(data.quotient_by_length))
    if args.exclude:
        rep.add("restricted_dim", data.restricted_dim(set(_seq(args.exclude))))


def _need_rep(ws):
    if ws.rep is None:
        raise ValidationError("a [rep] section is required")
    return ws.rep


def cmd_rep_mutate(ws, args, rep: Report):
    sp = ws.sp()
    r = _need_rep(ws)
    bad = validate_rep(r, sp)
    if bad:
        raise ValidationError("; ".join(bad))
    rng = random.Random(args.seed)
    for k in _seq(args.k):
        sp, r = mutate_decorated(r, sp, k, splitting=args.splitting, rng=rng)
    rep.add("k", args.k)
    rep.quiver(sp.quiver)
    rep.rep(r)
    if args.out:
        out = sp_workspace(ws, sp)
        out.rep = r
        _write_out(args, out)


def cmd_reflect(ws, args, rep: Report):
    sp = ws.sp()
    r = _need_rep(ws)
    k = args.k
    if _is_sink(sp.quiver, k):
        kind, out = "sink", reflect_sink(r, sp, k)
    elif _is_source(sp.quiver, k):
        kind, out = "source", reflect_source(r, sp, k)
    else:
        reflect_sink(r, sp, k)  # raises NotSinkOrSource
        raise InternalError("unreachable")
    rep.add("k", k)
    rep.add("kind", kind)
    rep.quiver(out.quiver)
    rep.rep(out)


def cmd_restrict(ws, args, rep: Report):
    out = restrict(ws.sp(), _seq(args.vertices))
    rep.add("vertices", args.vertices)
    rep.quiver(out.quiver)
    rep.potential(out.S)
    _write_out(args, sp_workspace(ws, out))


def cmd_unfold_check(ws, args, rep: Report):
    if ws.unfolding is None:
        raise ValidationError("an [unfolding] section is required")
    bad = check_unfolding(ws.unfolding)
    rep.add("is_unfolding", str(not bad).lower())
    for msg in bad:
        rep.add("violation", msg)


def cmd_unfold_obstruct(ws, args, rep: Report):
    a, b, N = args.a, args.b, args.N
    w = obstruction_witness(a, b, N, structured_candidate(a, b, N))
    rep.add("a", a)
    rep.add("b", b)
    rep.add("N", N)
    rep.add("positive_entry", f"{w.positive[0]},{w.positive[1]}")
    rep.add("negative_entry", f"{w.negative[0]},{w.negative[1]}")
    for row in w.block:
        rep.add("block_13", " ".join(str(int(x)) for x in row))
    if args.exhaustive:
        res = exhaustive_obstruction_search(a, b, N)
        rep.add("candidates", res.examined)
        rep.add("counterexamples", len(res.counterexamples))
        if res.counterexamples:
            raise InternalError("a structured candidate escaped the obstruction")


def cmd_nondeg_search(ws, args, rep: Report):
    if ws.quiver is None or ws.tower is None:
        raise ValidationError("[field] and [quiver] sections are required")
    q = SequenceQuery(
        ws.quiver, ws.tower, _seq(args.seq), max_len=args.L, budget=args.budget,
        seed=args.seed, max_m=args.max_m, trunc=ws.trunc,
    )
    res = search_sequence_nondegenerate(q)
    rep.add("seq", args.seq)
    rep.add("m", res.m)
    rep.add("attempts", res.attempts)
    rep.add("verified", str(res.check.ok).lower())
    rep.potential(res.sp.S)
    for step in res.check.trace:
        rep.add("trace", f"{step.step} {step.k if step.k is not None else '-'} {len(step.quiver.arrows)} {step.potential_hash[:16]}")


def cmd_verify(ws, args, rep: Report):
    names = sorted(SUITES) if args.suite == "all" else [args.suite]
    failed = False
    for name in names:
        if name not in SUITES:
            raise InputError(f"unknown suite {name}; choose from {', '.join(sorted(SUITES))} or all")
        res = run_suite(name, args.trials, args.seed)
        rep.add("suite", f"{name} trials={res.trials} failures={len(res.failures)}")
        for f in res.failures:
            rep.add("failure", f)
        failed = failed or not res.ok
    rep.add("result", "fail" if failed else "pass")
    return 3 if failed else 0


COMMANDS = {
    "mutate-matrix": cmd_mutate_matrix,
    "mutate-quiver": cmd_mutate_quiver,
    "sp-mutate": cmd_sp_mutate,
    "split": cmd_split,
    "jdim": cmd_jdim,
    "rep-mutate": cmd_rep_mutate,
    "reflect": cmd_reflect,
    "restrict": cmd_restrict,
    "unfold-check": cmd_unfold_check,
    "unfold-obstruct": cmd_unfold_obstruct,
    "nondeg-search": cmd_nondeg_search,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="spforge", description="Mutations of species with potentials over finite fields.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", "-i", help=f"input file, or {RUNNING_EXAMPLE} for the bundled example")
    common.add_argument("--format", choices=("structured", "text"), default="structured")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, help_):
        return sub.add_parser(name, parents=[common], help=help_)

    p = add("mutate-matrix", "mutate the exchange matrix")
    p.add_argument("--k", required=True, help="vertex or comma-separated sequence")
    p = add("mutate-quiver", "mutate the weighted quiver")
    p.add_argument("--k", required=True)
    p = add("sp-mutate", "mutate the species with potential along a sequence")
    p.add_argument("--seq", required=True)
    p.add_argument("--out")
    p = add("split", "split off the trivial part")
    p.add_argument("--out")
    p = add("jdim", "dimension of the truncated Jacobian algebra")
    p.add_argument("--N", type=int)
    p.add_argument("--exclude", help="vertices whose idempotents are removed")
    p = add("rep-mutate", "mutate the decorated representation")
    p.add_argument("--k", required=True)
    p.add_argument("--splitting", choices=("pivot", "random"), default="pivot")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--out")
    p = add("reflect", "reflection functor at a sink or source")
    p.add_argument("--k", type=int, required=True)
    p = add("restrict", "restrict to a vertex subset")
    p.add_argument("--vertices", required=True)
    p.add_argument("--out")
    add("unfold-check", "check the unfolding conditions")
    p = add("unfold-obstruct", "sign clash for the non-unfoldable family")
    p.add_argument("--a", type=int, default=2)
    p.add_argument("--b", type=int, default=3)
    p.add_argument("--N", type=int, default=6)
    p.add_argument("--exhaustive", action="store_true")
    p = add("nondeg-search", "random search for a nondegenerate potential")
    p.add_argument("--seq", required=True)
    p.add_argument("--L", type=int, default=6)
    p.add_argument("--budget", type=int, default=50)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--max-m", dest="max_m", type=int, default=25)
    p = add("verify", "run a randomized self-check suite")
    p.add_argument("--suite", default="all")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=1)
    return ap


def run_command(ws: Workspace, command: str, args) -> tuple[Report, int]:
    """Run one command; returns the report and the exit status."""
    rep = Report()
    rep.add("command", command)
    status = COMMANDS[command](ws, args, rep)
    return rep, status or 0


def exit_code(exc: BaseException) -> int:
    if isinstance(exc, InputError):
        return 2
    if isinstance(exc, InternalError):
        return 3
    if isinstance(exc, MathError):
        return 1
    return 3


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        ws = parse_input(args.input)
        rep, status = run_command(ws, args.command, args)
    except SpforgeError as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return exit_code(exc)
    sys.stdout.write(rep.render(args.format))
    return status

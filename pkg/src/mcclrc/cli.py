"""Command-line interface.

Descriptor grammar (one descriptor per file, UTF-8):

* family form: ``family=NAME p=P l=L h=H axis=A key=value ...``; tuple
  values are comma separated and ``-`` is the empty tuple.
* explicit form: ``p=P l=L h=H sizes=n1,n2,... J=j1,j2|- delta=e;e;...``
  where each exponent ``e`` is comma separated.  ``h`` defaults to ``l``
  and ``J`` defaults to the axes whose size divides q-1.
* JSON: an object with the same keys; ``sizes``, ``J``, ``S1`` as lists and
  ``delta`` as a list of lists.

Field elements are decimal integers in the package encoding.  Erasures in
received words are the token ``?``.
"""
from __future__ import annotations

import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import click
import numpy as np

from . import linalg
from .code import CodeError, LinearCode, build_domain, code_from_construction, encode, mcc, subfield_subcode
from .families import FamilyDescriptor, FamilyError, PARAM_ORDER, build
from .galois import FieldError, field_new
from .grid import DeltaSet, GridError, GridSpec, d0, default_J, is_closed, is_decreasing
from .locality import LocalityError, certify_locality, qualifying_axes, recover_word
from .tables import TABLES, format_table
from .verify import (
    DEFAULT_BUDGET_EXACT,
    DEFAULT_BUDGET_MINORS,
    BudgetExceeded,
    Report,
    exhaustive_decreasing_search,
    is_mds,
    min_distance_exact,
    recovery_trials,
    sampled_min_weight,
    singleton_defect,
)

INPUT_ERRORS = (FamilyError, GridError, CodeError, FieldError, LocalityError, ValueError, KeyError)


class InputError(click.ClickException):
    exit_code = 2


@dataclass(frozen=True)
class CodeDescriptor:
    p: int
    l: int
    h: int
    sizes: tuple[int, ...] = ()
    J: frozenset[int] | None = None
    delta: tuple[tuple[int, ...], ...] = ()
    family: FamilyDescriptor | None = None

    @property
    def q(self) -> int:
        return self.p ** self.l

    def to_text(self) -> str:
        if self.family is not None:
            return self.family.to_text() + "\n"
        J = "-" if not self.J else ",".join(str(j) for j in sorted(self.J))
        exps = ";".join(",".join(str(x) for x in e) for e in self.delta)
        sizes = ",".join(str(n) for n in self.sizes)
        return f"p={self.p} l={self.l} h={self.h} sizes={sizes} J={J} delta={exps}\n"

    @classmethod
    def parse(cls, text: str) -> CodeDescriptor:
        text = text.strip()
        if not text:
            raise InputError("empty descriptor")
        if text.startswith("{"):
            return cls._from_json(json.loads(text))
        if "family=" in text:
            return cls._from_family(FamilyDescriptor.from_text(text))
        kv: dict[str, str] = {}
        for tok in text.split():
            if "=" not in tok:
                raise InputError(f"token {tok!r} is not key=value")
            k, v = tok.split("=", 1)
            if k in kv:
                raise InputError(f"key {k!r} given twice")
            kv[k] = v
        unknown = set(kv) - {"p", "l", "h", "sizes", "J", "delta"}
        if unknown:
            raise InputError(f"unknown key(s) {sorted(unknown)}")
        try:
            p, l = int(kv["p"]), int(kv["l"])
            sizes = tuple(int(x) for x in kv["sizes"].split(","))
            delta = tuple(tuple(int(x) for x in e.split(",")) for e in kv["delta"].split(";") if e)
        except KeyError as exc:
            raise InputError(f"descriptor is missing {exc.args[0]!r}") from None
        J = None
        if "J" in kv:
            J = frozenset() if kv["J"] in ("-", "") else frozenset(int(x) for x in kv["J"].split(","))
        return cls._explicit(p, l, int(kv.get("h", l)), sizes, J, delta)

    @classmethod
    def _from_json(cls, obj: dict[str, Any]) -> CodeDescriptor:
        if "family" in obj:
            fam = obj["family"]
            params = {k: (tuple(v) if isinstance(v, list) else v) for k, v in obj.items()
                      if k in PARAM_ORDER.get(fam, ())}
            extra = set(obj) - set(params) - {"family", "p", "l", "h", "axis"}
            if extra:
                raise InputError(f"unknown key(s) {sorted(extra)}")
            desc = FamilyDescriptor.make(fam, int(obj["p"]), int(obj["l"]), obj.get("h"), int(obj.get("axis", 1)),
                                         **params)
            return cls._from_family(desc)
        J = obj.get("J")
        return cls._explicit(int(obj["p"]), int(obj["l"]), int(obj.get("h", obj["l"])), tuple(obj["sizes"]),
                             None if J is None else frozenset(J), tuple(tuple(e) for e in obj["delta"]))

    @classmethod
    def _from_family(cls, desc: FamilyDescriptor) -> CodeDescriptor:
        return cls(desc.p, desc.l, desc.h, family=desc)

    @classmethod
    def _explicit(cls, p, l, h, sizes, J, delta) -> CodeDescriptor:
        field_new(p, l)
        if J is None:
            J = default_J(sizes, p ** l)
        if not delta:
            raise InputError("the exponent list is empty")
        return cls(p, l, h, tuple(sizes), frozenset(J), tuple(sorted(set(tuple(e) for e in delta))))

    def build(self) -> tuple[LinearCode, Any]:
        """The code and, for family descriptors, its predicted profile."""
        if self.family is not None:
            con = build(self.family)
            return code_from_construction(con), con.profile
        F = field_new(self.p, self.l)
        if self.l % self.h:
            raise InputError(f"h = {self.h} does not divide l = {self.l}")
        grid = GridSpec(self.sizes, self.J, self.p ** self.h if self.h < self.l else None)
        dom = build_domain(F, grid)
        D = DeltaSet(grid, self.delta)
        code = mcc(F, delta=D, domain=dom)
        if self.h < self.l:
            code = subfield_subcode(code, self.h, "trace" if is_closed(D) else "intersection")
        return code, None


def _read_descriptor(path: str) -> CodeDescriptor:
    try:
        return CodeDescriptor.parse(Path(path).read_text(encoding="utf-8"))
    except InputError:
        raise
    except (*INPUT_ERRORS, json.JSONDecodeError) as exc:
        raise InputError(f"descriptor: {exc}") from None


def _build(desc: CodeDescriptor):
    try:
        return desc.build()
    except InputError:
        raise
    except INPUT_ERRORS as exc:
        raise InputError(f"descriptor: {exc}") from None


def dump_matrix(M: np.ndarray) -> str:
    return "".join(" ".join(str(int(x)) for x in row) + "\n" for row in M)


def _read_symbols(path: str, allow_erasures: bool) -> list:
    toks = Path(path).read_text(encoding="utf-8").split()
    out: list = []
    for t in toks:
        if t == "?":
            if not allow_erasures:
                raise InputError("erasure marks are not allowed here")
            out.append(None)
        else:
            try:
                out.append(int(t))
            except ValueError:
                raise InputError(f"symbol {t!r} is not an integer") from None
    return out


def _word_text(word) -> str:
    return " ".join("?" if x is None or x < 0 else str(int(x)) for x in word) + "\n"


def _load_bundle(bundle: str) -> tuple[CodeDescriptor, LinearCode, Any]:
    root = Path(bundle)
    if not (root / "descriptor.txt").is_file():
        raise InputError(f"{bundle} is not a code bundle (descriptor.txt missing)")
    desc = _read_descriptor(str(root / "descriptor.txt"))
    code, prof = _build(desc)
    gen = root / "generator.txt"
    if gen.is_file() and gen.read_text(encoding="utf-8") != dump_matrix(code.generator):
        raise InputError("generator.txt does not match the descriptor")
    return desc, code, prof


def _axes(code: LinearCode, axis: int | None) -> list[int]:
    axes = qualifying_axes(code)
    if axis is not None:
        if axis not in axes:
            raise InputError(f"axis {axis} does not qualify for locality (K_l = n_l or out of range)")
        return [axis]
    return axes


@click.group()
def main() -> None:
    """Monomial-Cartesian locally recoverable codes."""


@main.command()
@click.argument("descriptor", type=click.Path(exists=True, dir_okay=False))
@click.option("-o", "--out", "out", required=True, type=click.Path(file_okay=False), help="bundle directory")
@click.option("--axis", type=int, default=None, help="certify only this axis")
@click.option("--budget-exact", type=int, default=DEFAULT_BUDGET_EXACT, show_default=True)
def construct(descriptor: str, out: str, axis: int | None, budget_exact: int) -> None:
    """Build a code and write its bundle."""
    desc = _read_descriptor(descriptor)
    code, prof = _build(desc)
    root = Path(out)
    root.mkdir(parents=True, exist_ok=True)
    (root / "descriptor.txt").write_text(desc.to_text(), encoding="utf-8")
    (root / "generator.txt").write_text(dump_matrix(code.generator), encoding="utf-8")
    dom = code.meta.domain
    (root / "domain.txt").write_text(
        "".join(" ".join(str(x) for x in P) + "\n" for P in dom.axis_points), encoding="utf-8")
    certs = {}
    for l in _axes(code, axis):
        certs[str(l)] = certify_locality(code, l, budget_exact).as_dict()
    info = {"n": code.n, "k": code.k, "q": code.field.q, "alphabet": code.alphabet,
            "predicted": None if prof is None else prof.as_dict(), "locality": certs}
    (root / "bundle.json").write_text(json.dumps(info, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    click.echo(f"n={code.n} k={code.k} alphabet={code.alphabet}")
    for l, c in certs.items():
        click.echo(f"axis {l}: (r,delta)=({c['r']},{c['delta']})")


@main.command("encode")
@click.argument("bundle", type=click.Path(exists=True, file_okay=False))
@click.argument("message", type=click.Path(exists=True, dir_okay=False))
@click.option("-o", "--out", "out", type=click.Path(dir_okay=False), default=None)
def encode_cmd(bundle: str, message: str, out: str | None) -> None:
    """Encode a message file of k symbols."""
    _, code, _ = _load_bundle(bundle)
    msg = _read_symbols(message, allow_erasures=False)
    try:
        word = encode(code, msg)
    except CodeError as exc:
        raise InputError(str(exc)) from None
    _emit(_word_text(word), out)


@main.command()
@click.argument("bundle", type=click.Path(exists=True, file_okay=False))
@click.argument("received", type=click.Path(exists=True, dir_okay=False))
@click.option("-o", "--out", "out", type=click.Path(dir_okay=False), default=None)
@click.option("--axis", type=int, default=None, help="use only the lines of this axis")
def recover(bundle: str, received: str, out: str | None, axis: int | None) -> None:
    """Fill erasures (?) line by line; exit 1 with a report on failure."""
    _, code, _ = _load_bundle(bundle)
    word = _read_symbols(received, allow_erasures=True)
    try:
        res = recover_word(code, word, _axes(code, axis))
    except LocalityError as exc:
        raise InputError(str(exc)) from None
    if not res.ok:
        click.echo(res.report(), err=True)
        _emit(_word_text(res.word), out)
        sys.exit(1)
    _emit(_word_text(res.word), out)


@main.command()
@click.argument("bundle", type=click.Path(exists=True, file_okay=False))
@click.option("--budget-exact", type=int, default=DEFAULT_BUDGET_EXACT, show_default=True)
@click.option("--budget-minors", type=int, default=DEFAULT_BUDGET_MINORS, show_default=True)
@click.option("--trials", type=int, default=1000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--axis", type=int, default=None)
def verify(bundle: str, budget_exact: int, budget_minors: int, trials: int, seed: int, axis: int | None) -> None:
    """Run the checks that apply to a bundle."""
    desc, code, prof = _load_bundle(bundle)
    rep = run_checks(desc, code, prof, budget_exact, budget_minors, trials, seed, axis)
    click.echo(rep.render())
    sys.exit(0 if rep.failed == 0 else 1)


def run_checks(desc: CodeDescriptor, code: LinearCode, prof, budget_exact: int, budget_minors: int,
               trials: int, seed: int, axis: int | None = None) -> Report:
    rep = Report()
    inst = f"[{code.n},{code.k}]_{code.alphabet}"
    delta = code.meta.delta
    rep.check("rank", inst, linalg.rank(code.field, code.generator) == code.k, f"k={code.k}")
    if prof is not None:
        rep.check("dimension", inst, (code.n, code.k) == (prof.n, prof.k), f"predicted=({prof.n},{prof.k})")
    d_val = None
    try:
        res = min_distance_exact(code, budget_exact, d_hint=prof.d if prof is not None else None)
        d_val = res.value
        ok = prof is None or res.value == prof.d
        rep.check("distance", inst, ok, f"d={res.value} method={res.method} route={res.route}"
                  + ("" if prof is None else f" predicted={prof.d}"))
    except BudgetExceeded as exc:
        rep.skip("distance", inst, f"budget: {exc}")
        s = sampled_min_weight(code, trials, seed)
        ok = prof is None or s.value >= prof.d
        rep.check("sampled_upper_bound", inst, ok, f"best={s.value} method={s.method}"
                  + ("" if prof is None else f" predicted={prof.d}"))
    if delta is not None and code.h == code.field.l and is_decreasing(delta):
        rep.check("footprint", inst, d_val is None or d_val == d0(delta), f"d0={d0(delta)}")
    try:
        axes = _axes(code, axis)
    except InputError as exc:
        rep.skip("locality", inst, str(exc))
        axes = []
    for l in axes:
        cert = certify_locality(code, l, budget_exact)
        n_l = code.meta.domain.grid.sizes[l - 1]
        rep.check("locality_bounds", f"{inst}/axis{l}",
                  cert.r >= cert.projected_dim and cert.delta <= n_l - cert.projected_dim + 1,
                  f"(r,delta)=({cert.r},{cert.delta}) K={cert.projected_dim} mds={cert.all_mds}")
        if prof is not None and l == prof.interpolation_axis:
            rep.check("locality", f"{inst}/axis{l}", (cert.r, cert.delta) == (prof.r, prof.delta),
                      f"certified=({cert.r},{cert.delta}) predicted=({prof.r},{prof.delta})")
            d_use = prof.d if d_val is None else d_val
            D = singleton_defect(code.n, code.k, d_use, cert.r, cert.delta)
            rep.check("optimal", inst, D == 0, f"defect={D} with d={d_use}")
        st = recovery_trials(code, l, trials, seed)
        rep.check("recovery", f"{inst}/axis{l}", st.failures == 0,
                  f"recovered={st.recovered}/{st.trials} refused={st.capacity_declared} "
                  f"detected={st.detected}/{st.detection_trials}")
    from math import comb
    if comb(code.n, code.k) <= budget_minors and d_val is not None:
        mds = is_mds(code, budget_minors)
        rep.check("mds_consistency", inst, mds == (d_val == code.n - code.k + 1), f"mds={mds}")
    return rep


@main.command()
@click.argument("name", type=click.Choice(["table1", "table2", "examples", "search"]))
@click.argument("args", nargs=-1, type=int)
@click.option("--budget-exact", type=int, default=DEFAULT_BUDGET_EXACT, show_default=True)
def table(name: str, args: tuple[int, ...], budget_exact: int) -> None:
    """Print a parameter table, or run the exhaustive search: search P Q N1 N2."""
    if name != "search":
        if args:
            raise InputError(f"{name} takes no arguments")
        click.echo(format_table(name), nl=False)
        return
    if len(args) != 4:
        raise InputError("search needs P Q N1 N2")
    p, q, n1, n2 = args
    try:
        F = field_new(p, _log(q, p))
        res = exhaustive_decreasing_search(F, n1, n2, budget_exact)
    except INPUT_ERRORS as exc:
        raise InputError(str(exc)) from None
    for tup in sorted(res.found):
        click.echo("found [{},{},{}] (r,delta)=({},{})".format(*tup))
    verdict = "MATCH" if res.matches else "MISMATCH"
    click.echo(f"search q={q} grid={n1}x{n2} sets={res.sets_checked} optimal={len(res.found)} "
               f"predicted={len(res.predicted)} {verdict}")
    if not res.matches:
        sys.exit(1)


def _log(q: int, p: int) -> int:
    l, x = 0, 1
    while x < q:
        x *= p
        l += 1
    if x != q:
        raise InputError(f"q = {q} is not a power of p = {p}")
    return l


def _emit(text: str, out: str | None) -> None:
    if out is None:
        click.echo(text, nl=False)
    else:
        Path(out).write_text(text, encoding="utf-8")


if __name__ == "__main__":
    main()

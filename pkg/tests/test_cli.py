from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pytest
from click.testing import CliRunner
from hypothesis import given, settings
from hypothesis import strategies as st

from mcclrc.cli import CodeDescriptor, InputError, main
from mcclrc.families import iter_catalog
from mcclrc.locality import recovery_structure
from mcclrc.tables import EXAMPLES, TABLE1

GOLDEN = Path(__file__).parent / "golden"


def run(*args):
    return CliRunner().invoke(main, [str(a) for a in args], catch_exceptions=False)


@pytest.fixture(scope="module")
def ex1_bundle(tmp_path_factory):
    root = tmp_path_factory.mktemp("ex1")
    desc = root / "ex1.txt"
    desc.write_text(EXAMPLES[0].descriptor.to_text() + "\n")
    res = run("construct", desc, "-o", root / "bundle")
    assert res.exit_code == 0, res.output
    return root / "bundle"


def test_construct_writes_bundle(ex1_bundle):
    info = json.loads((ex1_bundle / "bundle.json").read_text())
    assert (info["n"], info["k"], info["alphabet"]) == (54, 25, 5)
    assert info["locality"]["2"]["r"] == 3 and info["locality"]["2"]["delta"] == 4
    assert info["predicted"]["optimal"]
    gen = (ex1_bundle / "generator.txt").read_text().splitlines()
    assert len(gen) == 25 and all(len(r.split()) == 54 for r in gen)
    assert len((ex1_bundle / "domain.txt").read_text().splitlines()) == 2


def test_construct_table1_row1(tmp_path):
    desc = tmp_path / "d.txt"
    desc.write_text(TABLE1[0].descriptor.to_text())
    res = run("construct", desc, "-o", tmp_path / "b")
    assert res.exit_code == 0
    assert "n=150 k=73 alphabet=5" in res.output
    assert "axis 1: (r,delta)=(3,4)" in res.output


def test_construct_repetition_from_explicit_set(tmp_path):
    desc = tmp_path / "d.txt"
    desc.write_text("p=5 l=1 sizes=4,3 delta=0,0\n")
    res = run("construct", desc, "-o", tmp_path / "b")
    assert res.exit_code == 0
    assert "n=12 k=1" in res.output
    assert (tmp_path / "b" / "descriptor.txt").read_text() == "p=5 l=1 h=1 sizes=4,3 J=1 delta=0,0\n"
    assert (tmp_path / "b" / "generator.txt").read_text() == " ".join(["1"] * 12) + "\n"
    ver = run("verify", tmp_path / "b", "--trials", 50)
    assert ver.exit_code == 0, ver.output


@pytest.mark.parametrize("text,clause", [
    ("family=RECT1 p=5 l=1 n1=3 n2=3 i=2 j=2", "whole space"),
    ("family=SF_BIV_Q1 p=5 l=2 h=1 axis=1 case=3 nprime=7 z=1 t=0", "gcd"),
    ("p=5 l=1 sizes=4,3", "missing 'delta'"),
    ("p=5 l=1 sizes=4 delta=0 colour=red", "unknown key"),
    ("p=6 l=1 sizes=4 delta=0", "not prime"),
])
def test_bad_descriptors_exit_2(tmp_path, text, clause):
    desc = tmp_path / "d.txt"
    desc.write_text(text)
    res = run("construct", desc, "-o", tmp_path / "b")
    assert res.exit_code == 2
    assert clause in res.output


def test_encode_erase_recover_round_trip(ex1_bundle, tmp_path):
    rng = np.random.default_rng(7)
    msg = tmp_path / "msg.txt"
    # GF(5) sits inside GF(25) as 0 and the fourth roots of unity
    from mcclrc.cli import _load_bundle
    _, code, _ = _load_bundle(str(ex1_bundle))
    scal = code.scalars()
    msg.write_text(" ".join(str(scal[x]) for x in rng.integers(0, 5, 25)))
    enc = run("encode", ex1_bundle, msg, "-o", tmp_path / "cw.txt")
    assert enc.exit_code == 0
    word = (tmp_path / "cw.txt").read_text().split()
    line = recovery_structure(code.meta.domain.grid.sizes, 2).lines[3]
    erased = list(word)
    for t in line[:3]:
        erased[t] = "?"
    (tmp_path / "rx.txt").write_text(" ".join(erased))
    rec = run("recover", ex1_bundle, tmp_path / "rx.txt")
    assert rec.exit_code == 0
    assert rec.output.split() == word
    erased[line[3]] = "?"
    (tmp_path / "rx4.txt").write_text(" ".join(erased))
    rec = run("recover", ex1_bundle, tmp_path / "rx4.txt", "-o", tmp_path / "out.txt")
    assert rec.exit_code == 1
    assert "recovery failed" in rec.output
    assert (tmp_path / "out.txt").read_text().split().count("?") == 4


def test_zero_message_round_trip(ex1_bundle, tmp_path):
    (tmp_path / "z.txt").write_text(" ".join(["0"] * 25))
    enc = run("encode", ex1_bundle, tmp_path / "z.txt")
    assert enc.output.split() == ["0"] * 54
    (tmp_path / "rx.txt").write_text(" ".join(["?"] + ["0"] * 53))
    rec = run("recover", ex1_bundle, tmp_path / "rx.txt")
    assert rec.exit_code == 0 and rec.output.split() == ["0"] * 54


def test_encode_rejects_bad_input(ex1_bundle, tmp_path):
    (tmp_path / "m.txt").write_text("1 2 3")
    assert run("encode", ex1_bundle, tmp_path / "m.txt").exit_code == 2
    (tmp_path / "m.txt").write_text(" ".join(["?"] * 25))
    assert run("encode", ex1_bundle, tmp_path / "m.txt").exit_code == 2


def test_tampered_bundle_is_rejected(ex1_bundle, tmp_path):
    import shutil
    copy = tmp_path / "copy"
    shutil.copytree(ex1_bundle, copy)
    gen = (copy / "generator.txt").read_text()
    (copy / "generator.txt").write_text("0" + gen[1:])
    (tmp_path / "z.txt").write_text(" ".join(["0"] * 25))
    res = run("encode", copy, tmp_path / "z.txt")
    assert res.exit_code == 2 and "does not match" in res.output


def test_verify_bundle(ex1_bundle):
    res = run("verify", ex1_bundle, "--trials", 200)
    assert res.exit_code == 0, res.output
    lines = res.output.splitlines()
    assert any(l.startswith("CHECK distance [54,25]_5 PASS d=6") for l in lines)
    assert any(l.startswith("CHECK optimal [54,25]_5 PASS defect=0") for l in lines)
    assert lines[-1].startswith("SUMMARY ")
    # deterministic for fixed flags
    assert run("verify", ex1_bundle, "--trials", 200).output == res.output


@pytest.mark.parametrize("name", ["table1", "table2", "examples"])
def test_table_output_matches_golden(name):
    res = run("table", name)
    assert res.exit_code == 0
    assert res.output == (GOLDEN / f"{name}.txt").read_text()
    assert len(res.output.splitlines()) == 6


def test_table_search():
    res = run("table", "search", 5, 5, 4, 4)
    assert res.exit_code == 0
    assert res.output.splitlines()[-1] == "search q=5 grid=4x4 sets=69 optimal=11 predicted=11 MATCH"
    assert run("table", "search", 5, 6, 4, 4).exit_code == 2
    assert run("table", "table1", 3).exit_code == 2


def test_descriptor_parse_forms_agree():
    text = CodeDescriptor.parse("p=5 l=1 sizes=4,3 delta=1,0;0,0")
    js = CodeDescriptor.parse('{"p": 5, "l": 1, "sizes": [4, 3], "delta": [[0, 0], [1, 0]]}')
    assert text == js
    fam = CodeDescriptor.parse('{"family": "RECT1", "p": 5, "l": 1, "n1": 4, "n2": 3, "i": 1, "j": 2}')
    assert fam.to_text() == "family=RECT1 p=5 l=1 h=1 axis=1 n1=4 n2=3 i=1 j=2\n"
    with pytest.raises(InputError):
        CodeDescriptor.parse("")
    with pytest.raises(InputError):
        CodeDescriptor.parse("p=5 l=1 sizes=4 delta=")


CATALOG = [d for d, _ in iter_catalog([4, 5, 7, 9, 16], 60, 3)]


@settings(max_examples=100)
@given(st.sampled_from(CATALOG))
def test_family_descriptor_serialization_round_trip(desc):
    cd = CodeDescriptor(desc.p, desc.l, desc.h, family=desc)
    text = cd.to_text()
    again = CodeDescriptor.parse(text)
    assert again == cd and again.to_text() == text


@given(st.sampled_from([(5, 1, (4, 3)), (2, 4, (5, 3, 2)), (7, 1, (6, 7))]), st.data())
def test_explicit_descriptor_serialization_round_trip(cfg, data):
    p, l, sizes = cfg
    exps = data.draw(st.lists(st.tuples(*(st.integers(0, n - 1) for n in sizes)), min_size=1, max_size=6))
    cd = CodeDescriptor.parse(f"p={p} l={l} sizes={','.join(map(str, sizes))} "
                              f"delta={';'.join(','.join(map(str, e)) for e in exps)}")
    text = cd.to_text()
    assert CodeDescriptor.parse(text) == cd
    assert CodeDescriptor.parse(text).to_text() == text

from pathlib import Path

import pytest

from houin.cli import BENCH_HEADER, main
from houin.miner import mine_houin
from houin.measures import MiningConfig
from houin.temporal_db import apply_modifications

from conftest import DATA

PDB = ["--db", str(DATA / "pdb.txt"), "--profits", str(DATA / "pdb.prof"), "--period-length", "3"]


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_mine_golden(capsys):
    code, out, err = run(["mine", *PDB, "--min-util", "30%"], capsys)
    assert code == 0
    assert out == (DATA / "pdb_30.tsv").read_text()
    assert "min_util = 3/10" in err


@pytest.mark.parametrize("value", ["3/10", "0.3", "30%"])
def test_min_util_forms_agree(value, capsys):
    assert run(["mine", *PDB, "--min-util", value], capsys)[1] == (DATA / "pdb_30.tsv").read_text()


def test_mine_exit_codes(tmp_path, capsys):
    assert run(["mine", *PDB, "--min-util", "0"], capsys)[0] == 3
    assert run(["mine", *PDB, "--min-util", "150%"], capsys)[0] == 3
    assert run(["mine", *PDB, "--min-util", "lots"], capsys)[0] == 2
    bad = tmp_path / "bad.txt"
    bad.write_text("9 9 A:0\n")
    assert run(["mine", "--db", str(bad), "--profits", str(DATA / "pdb.prof"),
                "--period-length", "3", "--min-util", "30%"], capsys)[0] == 2


def test_mine_full_ratio_is_header_only(capsys):
    code, out, _ = run(["mine", *PDB, "--min-util", "100%"], capsys)
    assert code == 0 and out == "items\tosp\tou\tosur\n"


def test_update_matches_remine(tmp_path, capsys):
    state = tmp_path / "pdb.state"
    mods = tmp_path / "mods.txt"
    mods.write_text("5 C:2\n")
    assert run(["mine", *PDB, "--min-util", "30%", "--out", str(tmp_path / "r.tsv"), "--state", str(state)], capsys)[0] == 0
    code, out, err = run(["update", "--state", str(state), "--mods", str(mods)], capsys)
    assert code == 0
    db, profits = __import__("conftest").load_pdb()
    expected, _ = mine_houin(apply_modifications(db, {5: {"C": 2}}), profits, MiningConfig(0.3))
    assert out == expected.to_tsv()
    assert "scans=1 cases=1,0,0,0" in err


def test_update_empty_mods_reproduces_cache(tmp_path, capsys):
    state = tmp_path / "s"
    empty = tmp_path / "empty"
    empty.write_text("")
    run(["mine", *PDB, "--min-util", "30%", "--state", str(state)], capsys)
    code, out, _ = run(["update", "--state", str(state), "--mods", str(empty)], capsys)
    assert code == 0 and out == (DATA / "pdb_30.tsv").read_text()


def test_update_errors(tmp_path, capsys):
    state = tmp_path / "s"
    run(["mine", *PDB, "--min-util", "30%", "--state", str(state)], capsys)
    mods = tmp_path / "m"
    mods.write_text("99 A:1\n")
    assert run(["update", "--state", str(state), "--mods", str(mods)], capsys)[0] == 3
    mods.write_text("5 C:2\n")
    other = tmp_path / "other.txt"
    other.write_text((DATA / "pdb.txt").read_text().replace("8 8 D:2", "8 8 D:3"))
    assert run(["update", "--state", str(state), "--mods", str(mods), "--db", str(other)], capsys)[0] == 4
    tampered = tmp_path / "t"
    tampered.write_text(state.read_text().replace("5 5 C:6", "5 5 C:7"))
    assert run(["update", "--state", str(tampered), "--mods", str(mods)], capsys)[0] == 4


def test_emit_state_chains(tmp_path, capsys):
    s0, s1 = tmp_path / "s0", tmp_path / "s1"
    m1, m2 = tmp_path / "m1", tmp_path / "m2"
    m1.write_text("8 D:2 A:3\n")
    m2.write_text("3 D:1\n6 B:1\n")
    run(["mine", *PDB, "--min-util", "20%", "--state", str(s0)], capsys)
    run(["update", "--state", str(s0), "--mods", str(m1), "--emit-state", str(s1)], capsys)
    code, out, _ = run(["update", "--state", str(s1), "--mods", str(m2)], capsys)
    db, profits = __import__("conftest").load_pdb()
    db = apply_modifications(apply_modifications(db, {8: {"D": 2, "A": 3}}), {3: {"D": 1}, 6: {"B": 1}})
    assert code == 0 and out == mine_houin(db, profits, MiningConfig(0.2))[0].to_tsv()


def test_gen_is_deterministic(tmp_path, capsys):
    argv = ["gen", "--transactions", "50", "--items", "20", "--periods", "3", "--seed", "7",
            "--profit-range=-5..9", "--neg-fraction", "0.25", "--mod-batches", "2", "--mod-size", "3"]
    assert run([*argv, "--out", str(tmp_path / "a")], capsys)[0] == 0
    assert run([*argv, "--out", str(tmp_path / "b")], capsys)[0] == 0
    for ext in ("db", "prof", "mods"):
        assert (tmp_path / f"a.{ext}").read_bytes() == (tmp_path / f"b.{ext}").read_bytes()
    assert run(["gen", "--transactions", "1", "--items", "1", "--periods", "1", "--neg-fraction", "0",
                "--seed", "0", "--out", str(tmp_path / "one")], capsys)[0] == 0
    body = [l for l in (tmp_path / "one.db").read_text().splitlines() if not l.startswith("#")]
    assert len(body) == 1 and body[0].startswith("1 1 1:")
    assert run(["gen", "--transactions", "5", "--items", "2", "--periods", "1", "--profit-range", "3..1",
                "--out", str(tmp_path / "x")], capsys)[0] == 2


def test_bench_report(tmp_path, capsys):
    stream = tmp_path / "stream"
    stream.write_text("5 C:2\n---\n8 D:2 A:3\n---\n3 D:1\n")
    code, out, _ = run(["bench", *PDB, "--min-util", "30%", "--mods-stream", str(stream), "--repeat", "3"], capsys)
    lines = out.splitlines()
    assert code == 0 and lines[0] == BENCH_HEADER and len(lines) == 5
    for row in lines[1:4]:
        fields = row.split(",")
        assert int(fields[3]) <= int(fields[4])
    assert lines[4].startswith("median,")


def test_bms_format(tmp_path, capsys):
    bms = tmp_path / "pos.txt"
    bms.write_text("1 2 3\n2 3\n3 4\n1 4\n2 4 5\n1 5\n")
    argv = ["mine", "--db", str(bms), "--format", "bms", "--periods", "3", "--seed", "1", "--min-util", "10%"]
    code, out, _ = run(argv, capsys)
    assert code == 0 and out.startswith("items\t")
    assert run(argv, capsys)[1] == out

import json
from dataclasses import replace
from pathlib import Path

import voxring.cli as cli
import voxring.pipeline as pipeline

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_betti_single_voxel(capsys):
    code, out, _ = run(capsys, "betti", str(FIXTURES / "single_voxel.txt"))
    assert code == 0
    assert "betti: b0=1  b1=0  b2=0" in out
    assert "Q=27" in out


def test_betti_shell(capsys):
    code, out, _ = run(capsys, "betti", str(FIXTURES / "shell_3x3x3.txt"))
    assert code == 0
    assert "betti: b0=1  b1=0  b2=1" in out


def test_betti_ring(capsys):
    code, out, _ = run(capsys, "betti", str(FIXTURES / "ring.txt"))
    assert code == 0
    assert "betti: b0=1  b1=1  b2=0" in out


def test_parse_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("2 2 1\n11\n1\n")
    code, _, err = run(capsys, "betti", str(bad))
    assert code == 1
    assert "parse error" in err


def test_missing_file_exit_code(capsys):
    code, _, err = run(capsys, "betti", "no-such-file.txt")
    assert code == 1


def test_disconnected_foreground_exit_code(tmp_path, capsys):
    p = tmp_path / "two.txt"
    p.write_text("dims 5 1 1\n0 0 0\n4 0 0\n")
    code, _, err = run(capsys, "betti", str(p))
    assert code == 2
    assert "precondition" in err


def test_cup_table_linked(capsys):
    code, out, _ = run(capsys, "cup-table", str(FIXTURES / "rings_linked.txt"),
                       "--complement")
    assert code == 0
    assert "cup rank: 1" in out
    assert "betti: b0=1  b1=2  b2=2" in out


def test_cup_table_unlinked(capsys):
    code, out, _ = run(capsys, "cup-table",
                       str(FIXTURES / "rings_unlinked.txt"), "--complement")
    assert code == 0
    assert "cup rank: 0" in out


def test_cup_table_contractible_is_empty(capsys):
    code, out, _ = run(capsys, "cup-table", str(FIXTURES / "block_2x2x2.txt"))
    assert code == 0
    assert "cup table: empty" in out


def test_cycles_single_voxel(capsys):
    code, out, _ = run(capsys, "cycles", str(FIXTURES / "single_voxel.txt"))
    assert code == 0
    assert "cycle: generator" in out
    assert "\n  0 0 0\n" in out


def test_cycles_ring_reports_loop(capsys):
    code, out, _ = run(capsys, "cycles", str(FIXTURES / "ring.txt"))
    assert code == 0
    assert "dim 1" in out


def test_verify_fixtures_pass(capsys):
    for name in ("single_voxel.txt", "block_2x2x2.txt", "shell_3x3x3.txt",
                 "ring.txt"):
        code, out, _ = run(capsys, "verify", str(FIXTURES / name))
        assert code == 0, name
        assert "FAIL" not in out


def test_verify_complement_fixture(capsys):
    code, out, _ = run(capsys, "verify", str(FIXTURES / "rings_linked.txt"),
                       "--complement")
    assert code == 0
    assert "rank_crosscheck] pass" in out


def test_verify_rank_limit_skips_crosscheck(capsys):
    code, out, _ = run(capsys, "verify", str(FIXTURES / "rings_linked.txt"),
                       "--complement", "--rank-limit", "100")
    assert code == 0
    assert "rank_crosscheck] skipped" in out


def test_verify_detects_injected_phi_corruption(capsys, monkeypatch):
    real = pipeline.extend_atmodel

    def corrupt(model, K, verify_guard=True):
        out = real(model, K, verify_guard)
        victim = next(iter(out.homotopy))
        broken = {c: v for c, v in out.homotopy.items() if c != victim}
        return replace(out, homotopy=broken)

    monkeypatch.setattr(pipeline, "extend_atmodel", corrupt)
    code, out, _ = run(capsys, "verify", str(FIXTURES / "ring.txt"))
    assert code == 3
    assert "FAIL" in out


def test_json_output_is_deterministic(capsys):
    args = ("cup-table", str(FIXTURES / "rings_linked.txt"),
            "--complement", "--json")
    code1, out1, _ = run(capsys, *args)
    code2, out2, _ = run(capsys, *args)
    assert code1 == code2 == 0
    assert out1 == out2
    payload = json.loads(out1)
    assert payload["betti"] == [1, 2, 2]
    assert payload["cup"]["rank"] == 1
    assert payload["cells"]["K"] <= payload["cells"]["Q"]
    assert payload["cells"]["dQ"] <= payload["cells"]["Q"]


def test_json_betti_fields(capsys):
    code, out, _ = run(capsys, "betti", str(FIXTURES / "shell_3x3x3.txt"),
                       "--json")
    payload = json.loads(out)
    assert payload["command"] == "betti"
    assert payload["betti"] == [1, 0, 1]
    assert "cup" not in payload


def test_timing_flag_prints_stages(capsys):
    code, out, _ = run(capsys, "betti", str(FIXTURES / "single_voxel.txt"),
                       "--timing")
    assert code == 0
    assert "timing:" in out


def test_negative_padding_is_precondition_failure(capsys):
    code, _, err = run(capsys, "betti", str(FIXTURES / "ring.txt"),
                       "--complement", "--padding", "-1")
    assert code == 2

import pytest

from slnc.cli import main, sample_key_symbols
from conftest import FIXTURES

BUTTERFLY = str(FIXTURES / "butterfly.net")
PARALLEL3_GF2 = str(FIXTURES / "parallel3_gf2.net")
PARALLEL3_GF5 = str(FIXTURES / "parallel3_gf5.net")


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# -- mincut ------------------------------------------------------------------

def test_mincut_sink(capsys):
    code, out, _ = run(capsys, "mincut", BUTTERFLY, "--sink", "t1")
    assert (code, out) == (0, "2\n")


def test_mincut_overall(capsys):
    code, out, _ = run(capsys, "mincut", BUTTERFLY)
    assert (code, out) == (0, "2\n")


def test_mincut_edges(capsys):
    code, out, _ = run(capsys, "mincut", BUTTERFLY, "--edges", "e3,e5")
    assert (code, out) == (0, "2\n")


def test_mincut_flag_conflict(capsys):
    code, _, err = run(capsys, "mincut", BUTTERFLY, "--sink", "t1", "--edges", "e1")
    assert code == 2
    assert "usage" in err


def test_mincut_unknown_sink_is_input_error(capsys):
    code, _, err = run(capsys, "mincut", BUTTERFLY, "--sink", "nope")
    assert code == 3
    assert "error" in err


def test_missing_file_is_input_error(capsys):
    code, _, _ = run(capsys, "mincut", "/nonexistent/net")
    assert code == 3


def test_unknown_flag_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["mincut", BUTTERFLY, "--bogus"])
    assert exc.value.code == 2


# -- pipeline ------------------------------------------------------------------

def test_construct_enumerate_pipeline(tmp_path, capsys):
    code_file = tmp_path / "butterfly.lnc"
    code, _, _ = run(capsys, "construct", BUTTERFLY, "--dim", "2", "-o", str(code_file))
    assert code == 0
    assert code_file.read_text().startswith("code n=2 q=3\n")

    code, out, _ = run(capsys, "enumerate", BUTTERFLY, "--r", "1", "--code", str(code_file))
    assert code == 0
    assert out.splitlines() == [f"e{i}" for i in range(1, 10)]

    code, out, _ = run(
        capsys, "enumerate", BUTTERFLY, "--r", "1", "--code", str(code_file), "--prop1"
    )
    assert code == 0
    assert out.strip() == "subset=true code=9 cut=9 binom=9"


def test_enumerate_topology_only(capsys):
    code, out, _ = run(capsys, "enumerate", PARALLEL3_GF2, "--r", "2")
    assert code == 0
    assert out.splitlines() == ["e1,e2", "e1,e3", "e2,e3"]


def test_enumerate_prop1_needs_code(capsys):
    code, _, err = run(capsys, "enumerate", BUTTERFLY, "--r", "1", "--prop1")
    assert code == 2
    assert "--code" in err


def test_secure_verify_pipeline(tmp_path, capsys):
    bundle_file = tmp_path / "b.slnc"
    code, _, _ = run(capsys, "secure", BUTTERFLY, "--omega", "1", "--r", "1", "-o", str(bundle_file))
    assert code == 0

    code, out, _ = run(capsys, "verify", str(bundle_file))
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[-1] == "verdict pass worst=e1 maxmi=0.000000000"
    assert len(lines) == 10

    code, out, _ = run(capsys, "verify", str(bundle_file), "--fast")
    assert code == 0


def test_verify_insecure_bundle_exits_1(tmp_path, capsys):
    bundle_file = tmp_path / "b.slnc"
    run(capsys, "secure", BUTTERFLY, "--omega", "1", "--r", "1", "-o", str(bundle_file))
    # strip the mixing down to the identity: every channel then carries a
    # plain coordinate of [m k] and the message leaks
    text = bundle_file.read_text().replace("Q\n2 1\n1 0", "Q\n1 0\n0 1")
    bundle_file.write_text(text)
    code, out, _ = run(capsys, "verify", str(bundle_file))
    assert code == 1
    assert "verdict fail" in out


def test_secure_rate_error_is_input_error(tmp_path, capsys):
    code, _, err = run(
        capsys, "secure", BUTTERFLY, "--omega", "2", "--r", "1", "-o", str(tmp_path / "x")
    )
    assert code == 3
    assert "error" in err


def test_refute_exit_codes(capsys):
    code, out, _ = run(
        capsys, "refute", PARALLEL3_GF2, "--omega", "1", "--r", "1", "--keydim", "0"
    )
    assert code == 0
    assert out == "searched=8 verdict=refuted\n"


def test_refute_budget_exit(capsys):
    code, _, err = run(
        capsys,
        "refute", PARALLEL3_GF2,
        "--omega", "2", "--r", "1", "--keydim", "0", "--budget", "10",
    )
    assert code == 4
    assert "budget" in err


def test_simulate_with_explicit_key(tmp_path, capsys):
    bundle_file = tmp_path / "b.slnc"
    run(capsys, "secure", BUTTERFLY, "--omega", "1", "--r", "1", "-o", str(bundle_file))
    code, out, _ = run(capsys, "simulate", str(bundle_file), "--message", "1", "--key", "1")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "key 1"
    assert "edge e5 0" in lines
    assert "sink t1 m=1 k=1" in lines
    assert "sink t2 m=1 k=1" in lines


def test_simulate_seeded_is_deterministic(tmp_path, capsys):
    bundle_file = tmp_path / "b.slnc"
    run(capsys, "secure", PARALLEL3_GF5, "--omega", "1", "--r", "1", "-o", str(bundle_file))
    first = run(capsys, "simulate", str(bundle_file), "--message", "3", "--seed", "42")
    second = run(capsys, "simulate", str(bundle_file), "--message", "3", "--seed", "42")
    assert first == second
    assert first[0] == 0
    key_line = first[1].splitlines()[0]
    assert key_line == "key " + ",".join(str(v) for v in sample_key_symbols(42, 1, 5))


def test_simulate_needs_key_or_seed(tmp_path, capsys):
    bundle_file = tmp_path / "b.slnc"
    run(capsys, "secure", BUTTERFLY, "--omega", "1", "--r", "1", "-o", str(bundle_file))
    code, _, err = run(capsys, "simulate", str(bundle_file), "--message", "1")
    assert code == 2
    assert "seed" in err


def test_lcg_reference_values():
    # frozen from the stated recurrence: state' = state * 6364136223846793005
    # + 1442695040888963407 mod 2^64; symbol = (state' >> 32) % q
    state = (7 * 6364136223846793005 + 1442695040888963407) % (1 << 64)
    assert sample_key_symbols(7, 1, 1 << 16)[0] == (state >> 32) % (1 << 16)
    assert sample_key_symbols(0, 3, 5) == sample_key_symbols(0, 3, 5)


def test_hancheck(tmp_path, capsys):
    table = tmp_path / "table.txt"
    table.write_text("0 0 0.25\n0 1 0.25\n1 0 0.25\n1 1 0.25\n")
    code, out, _ = run(capsys, "hancheck", "--table", str(table))
    assert code == 0
    assert out.strip() == "2.000000000 2.000000000"

    code, out, _ = run(capsys, "hancheck", "--table", str(table), "--base", "4")
    assert code == 0
    assert out.strip() == "1.000000000 1.000000000"


def test_hancheck_rejects_bad_table(tmp_path, capsys):
    table = tmp_path / "table.txt"
    table.write_text("0 0 0.9\n")
    code, _, _ = run(capsys, "hancheck", "--table", str(table))
    assert code == 3


def test_emitted_files_round_trip_through_consumers(tmp_path, capsys):
    """Every file a subcommand emits is accepted unchanged by its consumers."""
    code_file = tmp_path / "c.lnc"
    bundle_file = tmp_path / "b.slnc"
    assert run(capsys, "construct", PARALLEL3_GF5, "--dim", "3", "-o", str(code_file))[0] == 0
    assert run(capsys, "enumerate", PARALLEL3_GF5, "--r", "2", "--code", str(code_file))[0] == 0
    assert run(capsys, "secure", PARALLEL3_GF5, "--omega", "2", "--r", "1", "-o", str(bundle_file))[0] == 0
    assert run(capsys, "verify", str(bundle_file))[0] == 0
    assert run(capsys, "simulate", str(bundle_file), "--message", "1,2", "--seed", "1")[0] == 0

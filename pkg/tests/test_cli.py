import pytest

from multiphonon.cli import EXIT_ERROR, EXIT_OK, EXIT_VERIFY, main
from multiphonon.sweep import COLUMNS, read_csv
from multiphonon.verify import Check

CONFIG = """\
delta = 0.09
epsilon = 0.02
g = 0.1
kappa_a = 2e-3
kappa_b = 2e-5
nbar = 1.0
n_max = 4
m_max = 10
"""


@pytest.fixture
def config(tmp_path):
    path = tmp_path / "run.conf"
    path.write_text(CONFIG)
    return path


def test_solve_prints_summary_and_row(config, capsys):
    assert main(["solve", "--config", str(config)]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    comments = [l for l in lines if l.startswith("#")]
    table = [l for l in lines if not l.startswith("#")]
    assert comments and table[0] == ",".join(COLUMNS)
    assert len(table) == 2 and table[1].endswith(",true")


def test_solve_auto_cutoffs(tmp_path, capsys):
    path = tmp_path / "auto.conf"
    path.write_text(CONFIG.replace("n_max = 4\nm_max = 10\n", "epsilon = 0\n").replace("epsilon = 0.02\n", ""))
    assert main(["solve", "--config", str(path), "--order", "2"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "auto" in out and ",2," in out


def test_bad_config_is_hard_error(tmp_path, capsys):
    path = tmp_path / "bad.conf"
    path.write_text("delta = x\n")
    assert main(["solve", "--config", str(path)]) == EXIT_ERROR
    assert "error" in capsys.readouterr().err
    assert main(["solve", "--config", str(tmp_path / "missing.conf")]) == EXIT_ERROR


def test_sweep_to_file_with_plot(config, tmp_path):
    out = tmp_path / "s.csv"
    code = main(["sweep", "--config", str(config), "--axis", "delta", "--from", "0.06", "--to", "0.1",
                 "--steps", "3", "--order", "1,2", "--out", str(out), "--plot"])
    assert code == EXIT_OK
    rows = read_csv(out)
    assert [r["order_N"] for r in rows] == [1, 1, 1, 2, 2, 2]
    assert (tmp_path / "plot_s.py").exists()


def test_sweep_to_stdout(config, capsys):
    assert main(["sweep", "--config", str(config), "--axis", "nbar", "--from", "0", "--to", "1", "--steps", "2"]) == EXIT_OK
    assert capsys.readouterr().out.splitlines()[0] == ",".join(COLUMNS)


def test_sweep_invalid_range(config):
    args = ["sweep", "--config", str(config), "--axis", "delta", "--from", "0.1", "--to", "0.0", "--steps", "3"]
    assert main(args) == EXIT_ERROR


def test_peaks_subcommand(tmp_path, capsys):
    csv_path = tmp_path / "p.csv"
    lines = [",".join(COLUMNS)]
    for i in range(40):
        x = i * 0.001
        y = 1.0 if i % 10 == 5 else 0.1
        lines.append(f"{x},{x},0.1,1.0,1,4,10,{y},1.0,1.0,2.0,6.0,24.0,0.0,0.0,true")
    csv_path.write_text("\n".join(lines) + "\n")
    assert main(["peaks", str(csv_path)]) == EXIT_OK
    out = capsys.readouterr().out
    assert "inferred_kerr: 0.01" in out
    assert "inferred_g: 0.1" in out


def test_verify_exit_codes(monkeypatch, capsys):
    import multiphonon.verify as verify

    monkeypatch.setattr(verify, "run_checks", lambda params=None: [Check("a", True, "ok")])
    assert main(["verify"]) == EXIT_OK
    monkeypatch.setattr(verify, "run_checks", lambda params=None: [Check("a", True, "ok"), Check("b", False, "bad")])
    assert main(["verify"]) == EXIT_VERIFY
    out = capsys.readouterr().out
    assert "PASS a: ok" in out and "FAIL b: bad" in out


def test_verify_suite_runs(capsys):
    code = main(["verify"])
    out = capsys.readouterr().out.splitlines()
    assert len(out) == 7
    assert all(line.startswith(("PASS", "FAIL")) for line in out)
    assert "N=2: 27" in out[0]
    assert code in (EXIT_OK, EXIT_VERIFY)

import json

import numpy as np
import pytest

from corrmimo import cli
from corrmimo.config import ScenarioConfig
from corrmimo.errors import ConfigInvalid, ParseError


def test_parse_config_defaults(tmp_path):
    p = tmp_path / "empty.json"
    p.write_text("{}")
    cfg = cli.parse_config(p)
    assert cfg == ScenarioConfig()
    assert (cfg.nt, cfg.nr, cfg.m, cfg.trials, cfg.cdf_level) == (2, 2, 1.0, 10_000, 0.8)
    assert cfg.kind.value == "gaussian-kronecker" and cfg.power_split.value == "per-stream-total"
    assert cli.parse_config() == ScenarioConfig()


def test_parse_config_errors(tmp_path):
    p = tmp_path / "c.json"
    p.write_text('{"rho_rx": 1.5}')
    with pytest.raises(ConfigInvalid, match="rho"):
        cli.parse_config(p)
    p.write_text('{"rx_corr_coff": 0.2}')
    with pytest.raises(ConfigInvalid, match="rx_corr_coff"):
        cli.parse_config(p)
    p.write_text("{not json")
    with pytest.raises(ParseError):
        cli.parse_config(p)
    with pytest.raises(ParseError):
        cli.parse_config(tmp_path / "missing.json")


def test_overrides_win(tmp_path):
    p = tmp_path / "c.json"
    p.write_text('{"nt": 4, "nr": 4, "m": 2.0}')
    cfg = cli.parse_config(p, {"m": 3.0, "seed": None})
    assert cfg.m == 3.0 and cfg.nt == 4


def test_table1_row3_config_roundtrip(tmp_path):
    cfg = ScenarioConfig(nt=4, nr=4, m=1.0, rho_rx=0.2, trials=50)
    man = cli.run_command("cdf", cfg, tmp_path, {"points": 20, "bins": 5})
    assert man["config"]["rho_rx"] == 0.2
    again = cli.parse_config(tmp_path / "cdf.manifest.json")
    assert again == cfg


def test_parse_grid():
    assert cli.parse_grid("10") == (10.0,)
    assert cli.parse_grid("0,10,20") == (0.0, 10.0, 20.0)
    assert cli.parse_grid("0:40:1") == tuple(float(i) for i in range(41))
    assert cli.parse_grid("0:1:0.25") == (0.0, 0.25, 0.5, 0.75, 1.0)
    with pytest.raises(ParseError):
        cli.parse_grid("0:10")


def test_fmt_shortest_roundtrip():
    for x in (0.1, 1 / 3, 1e-300, 2.0, 123456789.123):
        assert float(cli.fmt(x)) == x
    assert cli.fmt(np.float64(0.1)) == "0.1"
    assert cli.fmt(np.int64(3)) == "3"


def run(tmp_path, *args):
    return cli.main([*args, "--out", str(tmp_path)])


def test_sweep_snr_command(tmp_path):
    assert run(tmp_path, "sweep-snr", "--trials", "40", "--snr-db", "0,10,20") == 0
    header, rows = cli.read_csv(tmp_path / "sweep_snr.csv")
    assert header == ["snr_db", "receiver", "ergodic_capacity_bps_hz", "stderr", "quantile_p0.8"]
    assert len(rows) == 3 * 2
    man = json.loads((tmp_path / "sweep-snr.manifest.json").read_text())
    assert man["config"]["trials"] == 40 and man["seed"] == 0 and "duration_s" in man


def test_sweep_snr_default_config_row_count(tmp_path):
    assert run(tmp_path, "sweep-snr", "--trials", "10") == 0
    _, rows = cli.read_csv(tmp_path / "sweep_snr.csv")
    assert len(rows) == len(ScenarioConfig().snr_db_grid) * 2


def test_sweep_rho_command(tmp_path):
    assert run(tmp_path, "sweep-rho", "--trials", "30", "--nt", "3", "--nr", "3",
               "--rho-grid", "0,0.5,1", "--snr-db", "10") == 0
    header, rows = cli.read_csv(tmp_path / "sweep_rho.csv")
    assert header == ["rho", "receiver", "ergodic_capacity_bps_hz", "stderr"]
    assert [r[0] for r in rows] == [0, 0, 0.5, 0.5, 1, 1]
    man = json.loads((tmp_path / "sweep-rho.manifest.json").read_text())
    assert any("clamped" in w for w in man["warnings"])
    assert set(man["rejected_draws"]) == {"0", "0.5", "1"}


def test_cdf_command(tmp_path):
    assert run(tmp_path, "cdf", "--trials", "200", "--nt", "2", "--nr", "3", "--points", "50") == 0
    for rx in ("zf", "mmse"):
        header, rows = cli.read_csv(tmp_path / f"cdf_{rx}.csv")
        assert header == ["capacity_bps_hz", "F"]
        F = np.array([r[1] for r in rows], dtype=float)
        assert len(rows) == 50 and np.all(np.diff(F) >= 0) and F[-1] == 1.0
        header, rows = cli.read_csv(tmp_path / f"pdf_{rx}.csv")
        assert header == ["bin_center_bps_hz", "density"]
        c, d = np.array(rows, dtype=float).T
        assert abs(np.sum(d) * (c[1] - c[0]) - 1) < 1e-9


def test_table1_command_small(tmp_path):
    assert run(tmp_path, "table1", "--trials", "100", "--rho-rx", "0.2", "--snr-db", "0,20") == 0
    header, rows = cli.read_csv(tmp_path / "table1_search.csv")
    assert header == list(cli.TABLE1_HEADER)
    assert len(rows) == 8
    header, best = cli.read_csv(tmp_path / "table1.csv")
    assert [r[1] for r in best] == [1, 2, 3, 4]
    man = json.loads((tmp_path / "table1.manifest.json").read_text())
    assert man["best_snr_db"] == best[0][0]
    assert set(man["quantile_ratios_8x8_over_4x4"]) == {"zf", "mmse"}


@pytest.mark.parametrize("command,extra", [
    ("sweep-snr", ["--snr-db", "0,15"]),
    ("sweep-rho", ["--rho-grid", "0,0.9"]),
    ("cdf", ["--bins", "7"]),
    ("table1", ["--snr-db", "5,25"]),
])
def test_replay_byte_identical(tmp_path, command, extra):
    a, b = tmp_path / "a", tmp_path / "b"
    assert run(a, command, "--trials", "60", "--seed", "17", "--m", "2", "--kind",
               "nakagami-kronecker", *extra) == 0
    assert cli.main(["replay", str(a / f"{command}.manifest.json"), "--out", str(b)]) == 0
    csvs = sorted(p.name for p in a.glob("*.csv"))
    assert csvs and csvs == sorted(p.name for p in b.glob("*.csv"))
    for name in csvs:
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_csv_roundtrip_lossless(tmp_path):
    assert run(tmp_path, "sweep-snr", "--trials", "25") == 0
    from corrmimo import montecarlo as mc
    res = mc.sweep_snr(ScenarioConfig(trials=25))
    _, rows = cli.read_csv(tmp_path / "sweep_snr.csv")
    assert [tuple(r) for r in rows] == [tuple(r) for r in res.rows]


def test_exit_codes(tmp_path, capsys):
    assert run(tmp_path, "sweep-snr", "--rho-rx", "1.5") == 1
    assert "rho_rx" in capsys.readouterr().err
    assert run(tmp_path, "sweep-snr", "--nt", "4", "--nr", "2") == 1
    bad = tmp_path / "bad.json"
    bad.write_text('{"coff": 1}')
    assert cli.main(["cdf", "--config", str(bad), "--out", str(tmp_path)]) == 1
    assert cli.main(["replay", str(tmp_path / "nope.json")]) == 1


def test_numerical_error_exit_code(tmp_path, monkeypatch):
    from corrmimo import montecarlo as mc
    from corrmimo.errors import RankDeficient

    def boom(*a, **k):
        raise RankDeficient("singular")

    monkeypatch.setattr(mc, "sweep_snr", boom)
    assert run(tmp_path, "sweep-snr", "--trials", "5") == 2

import csv

import numpy as np
import pytest

from lowres_precoding.harness import PRESETS, ConfigError, SystemConfig, load_config, preset
from lowres_precoding.harness.cli import main
from lowres_precoding.harness.complexity import report_complexity
from lowres_precoding.harness.sweep import csv_header, emit_alpha_diagnostics, run_sweep

TINY = dict(n_tx=16, n_ue=2, t_f=16, t_c=3, n_taps=4, blocks=3)


def test_presets_dimensions():
    a = preset("system-a")
    assert (a.n_tx, a.n_ue, a.t_f, a.t_c, a.n_taps, a.n_slots) == (128, 16, 256, 14, 15, 270)
    b = preset("system-b")
    assert b.n_slots == 35 and b.constellation == "qpsk"
    assert preset("system-c-rayleigh").n_slots == 277
    for name in PRESETS:
        preset(name)


def test_prefix_too_short_rejected():
    with pytest.raises(ConfigError) as info:
        SystemConfig(n_tx=8, n_ue=2, t_f=16, t_c=2, n_taps=4)
    assert [f for f, _ in info.value.errors] == ["t_c"]


def test_multiple_errors_reported_together():
    with pytest.raises(ConfigError) as info:
        SystemConfig(n_tx=8, n_ue=2, t_f=16, t_c=3, n_taps=4, constellation="7qam", epsilon=(1.5,),
                     mode="genie")
    fields = {f for f, _ in info.value.errors}
    assert fields == {"constellation", "epsilon", "mode"}


def test_yaml_loading(tmp_path):
    p = tmp_path / "cfg.yaml"
    p.write_text("preset: system-b\nblocks: 7\nsnr_grid: [0, 10]\n")
    cfg = load_config(p)
    assert cfg.n_tx == 64 and cfg.blocks == 7 and cfg.snr_grid == (0.0, 10.0)
    p.write_text("n_tx: 8\nn_ue: 2\nt_f: 16\nt_c: 3\nn_taps: 4\nflux: 3\n")
    with pytest.raises(ConfigError) as info:
        load_config(p)
    assert info.value.errors[0][0] == "flux"
    p.write_text("preset: system-b\nnested: {a: 1}\n")
    with pytest.raises(ConfigError):
        load_config(p)


def test_digest_tracks_content():
    a = SystemConfig(**TINY)
    assert a.digest() == SystemConfig(**TINY).digest()
    assert a.digest() != a.replace(master_seed=1).digest()


def test_sweep_csv_is_byte_stable_and_rows_independent(tmp_path):
    cfg = SystemConfig(**TINY, precoders=("lp-zf", "qcm:2"), snr_grid=(0.0, 10.0), epsilon=(0.0, 0.2))
    p1, p2, p3 = tmp_path / "a.csv", tmp_path / "b.csv", tmp_path / "c.csv"
    run_sweep(cfg, p1)
    run_sweep(cfg, p2)
    assert p1.read_bytes() == p2.read_bytes()
    # dropping points leaves the remaining rows untouched (except the config hash)
    run_sweep(cfg.replace(precoders=("qcm:2",), snr_grid=(10.0,), epsilon=(0.2,)), p3)
    full = {(r["precoder"], r["snr_db"], r["epsilon"]): r for r in csv.DictReader(p1.open())}
    (only,) = list(csv.DictReader(p3.open()))
    ref = full[("qcm:2", "10", "0.2")]
    for col in ("mean_rate_bpcu", "rate_ue_0", "rate_ue_1", "alpha_mean", "mults_per_iter"):
        assert only[col] == ref[col]
    with p1.open() as fh:
        assert next(csv.reader(fh)) == csv_header(2)
    assert all(r["seconds"] == "" for r in full.values())


def test_sweep_timing_and_error_rows(tmp_path):
    from lowres_precoding.channel import draw_rayleigh, save_taps

    taps = tmp_path / "t.txt"
    save_taps(taps, [draw_rayleigh(8, 2, 4, seed=0)])
    cfg = SystemConfig(**TINY, precoders=("lp-zf",), snr_grid=(10.0,), tap_file=str(taps))
    (row,) = run_sweep(cfg, timing=True)
    assert row.error.startswith("BlockError") and np.isnan(row.mean_rate_bpcu)
    assert row.seconds is not None and row.seconds >= 0


def test_alpha_diagnostics(tmp_path):
    cfg = SystemConfig(**TINY, precoders=("lp-zf", "qcm:2"), snr_grid=(0.0,))
    out = tmp_path / "alpha.csv"
    (row,) = emit_alpha_diagnostics(cfg, out)
    assert row.alpha_precoder > 0 and row.alpha_wf > 0
    assert out.read_text().startswith("snr_db,alpha_qcm_mean,alpha_wf_mean,ratio\n")
    with pytest.raises(ValueError):
        emit_alpha_diagnostics(cfg.replace(precoders=("lp-zf",)))


def test_complexity_rows(tmp_path):
    cfg = SystemConfig(**TINY, precoders=("qcm:1", "qlp-zf"))
    rows = report_complexity(cfg, trials=1, out=tmp_path / "cx.csv")
    assert [(r.precoder, r.dimension) for r in rows] == [
        (p, d) for p in ("qcm:1", "qlp-zf") for d in ("T", "N", "K", "L")]
    for r in rows:
        if r.precoder == "qlp-zf" and r.dimension == "L":
            assert r.ratio == 1.0  # frequency-domain weights do not see the tap count
        else:
            assert r.ratio > 1
    assert (tmp_path / "cx.csv").read_text().count("\n") == 9


def test_cli_exit_codes(tmp_path, capsys):
    assert main(["validate-config", "--preset", "system-b"]) == 0
    assert "n_tx: 64" in capsys.readouterr().out
    bad = tmp_path / "bad.yaml"
    bad.write_text("n_tx: 8\nn_ue: 2\nt_f: 16\nt_c: 1\nn_taps: 4\n")
    assert main(["validate-config", "--config", str(bad)]) == 2
    assert "t_c" in capsys.readouterr().err
    assert main(["sweep", "--config", str(tmp_path / "missing.yaml")]) == 2
    assert main(["sweep"]) == 2
    good = tmp_path / "good.yaml"
    good.write_text("n_tx: 16\nn_ue: 2\nt_f: 16\nt_c: 3\nn_taps: 4\nprecoders: [lp-zf]\nsnr_grid: [20]\n")
    out = tmp_path / "o.csv"
    assert main(["sweep", "--config", str(good), "--blocks", "2", "--out", str(out)]) == 0
    assert out.read_text().splitlines()[1].split(",")[1] == "lp-zf"
    taps = tmp_path / "t.txt"
    from lowres_precoding.channel import draw_rayleigh, save_taps

    save_taps(taps, [draw_rayleigh(8, 2, 4, seed=0)])
    broken = tmp_path / "broken.yaml"
    broken.write_text(good.read_text() + f"tap_file: {taps}\n")
    assert main(["sweep", "--config", str(broken), "--blocks", "1"]) == 1

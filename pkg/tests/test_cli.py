import json

import pytest

from neumann_bessel.bessel import bessel_j
from neumann_bessel.cli import SETTINGS, _param_names, build_parser, load_settings, run
from neumann_bessel.exceptions import ConfigurationError

def test_list(capsys):
    assert run(["list"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("master\t")
    assert any(line.startswith("sq-ground\t") for line in lines)
    assert all(len(line.split("\t")) == 3 for line in lines)

def test_registry(capsys):
    assert run(["registry"]) == 0
    document = json.loads(capsys.readouterr().out)
    assert document[0]["id"] == "master"
    assert {p["name"] for p in document[0]["params"]} == {"n", "p", "z", "y"}
    assert all({"name", "min", "max", "kind"} <= set(p) for entry in document for p in entry["params"])

def test_eval(capsys):
    assert run(["eval", "--id", "jacobi-even", "--z", "4.2", "--alpha", "pi/2"]) == 0
    fields = capsys.readouterr().out.split()
    assert fields[0] == "jacobi-even"
    assert len(fields) == 6
    lhs_re, lhs_im, rhs_re, rhs_im, residual = map(float, fields[1:])
    assert lhs_re == pytest.approx(1.0, abs=1e-10)
    assert rhs_re == 1.0
    assert residual <= 1e-10

def test_eval_reading(capsys):
    assert run(["eval", "--id", "tri-ground", "--r", "0", "--theta", "0", "--reading", "literal"]) == 1
    assert run(["eval", "--id", "tri-ground", "--r", "0", "--theta", "0", "--reading", "mirror"]) == 2

def test_usage_errors(capsys):
    assert run(["eval", "--id", "nope"]) == 2
    assert run(["eval", "--id", "master", "--n", "3", "--p", "1", "--z", "50", "--y", "0"]) == 2
    assert run(["eval", "--id", "master", "--n", "3", "--p", "1", "--z", "5"]) == 2
    assert run(["list", "--eps", "-1"]) == 2
    assert run(["sweep", "--id", "master", "--grid", "z"]) == 2
    assert run([]) == 2
    err = capsys.readouterr().err
    assert "error:" in err

def test_help(capsys):
    assert run(["--help"]) == 0
    assert "verify" in capsys.readouterr().out

def test_sweep_failure_exit(capsys):
    argv = ["sweep", "--id", "master", "--grid", "n=1", "--grid", "p=0", "--grid", "z=30", "--grid", "y=0", "--max-terms", "1"]
    assert run(argv) == 1
    report = json.loads(capsys.readouterr().out)
    assert report["summary"]["failures"] == 1

def test_sweep_csv(tmp_path):
    out = tmp_path / "sweep.csv"
    argv = ["sweep", "--id", "cos4k", "--grid", "z=0:20:3", "--format", "csv", "--out", str(out)]
    assert run(argv) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "id,z,alpha,lhs_re,lhs_im,rhs_re,rhs_im,residual,pass"
    assert len(lines) == 1 + 3 * 8

def test_config_file(tmp_path):
    config = tmp_path / "settings.cfg"
    config.write_text("# shared\neps = 1e-10\nthreshold = 0.5\nmax-terms = 500\n")
    args = build_parser().parse_args(["list", "--config", str(config), "--eps", "1e-9"])
    settings = load_settings(args)
    assert settings == {"eps": 1e-9, "threshold": 0.5, "max_terms": 500}

def test_config_file_errors(tmp_path):
    config = tmp_path / "bad.cfg"
    config.write_text("colour = blue\n")
    args = build_parser().parse_args(["list", "--config", str(config)])
    with pytest.raises(ConfigurationError):
        load_settings(args)
    assert run(["list", "--config", str(config)]) == 2
    assert run(["list", "--config", str(tmp_path / "missing.cfg")]) == 2

def test_threshold_from_config(tmp_path, capsys):
    config = tmp_path / "strict.cfg"
    config.write_text("threshold = 0\n")
    argv = ["eval", "--id", "tri-ground", "--r", "0", "--theta", "0", "--reading", "literal", "--config", str(config)]
    assert run(argv) == 1
    config.write_text("threshold = 10\n")
    assert run(argv) == 0

def test_bessel(capsys):
    assert run(["bessel", "--m", "5", "--z", "3.0"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == f"bessel_j {format(bessel_j(5, 3.0), '.17g')}"
    assert [line.split()[0] for line in lines] == ["bessel_j", "series_oracle", "fourier_oracle"]
    assert run(["bessel", "--m", "2", "--z", "60"]) == 0
    assert "series_oracle unavailable" in capsys.readouterr().out

def test_contour(tmp_path):
    out = tmp_path / "f6.csv"
    argv = ["contour", "--mode", "fn", "--n", "6", "--xmin", "-1", "--xmax", "1", "--ymin", "-1", "--ymax", "1",
            "--nx", "3", "--ny", "3", "--out", str(out)]
    assert run(argv) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "x,y,value"
    assert len(lines) == 10
    assert lines[5].split(",") [:2] == ["0", "0"]
    assert float(lines[5].split(",")[2]) == pytest.approx(1.0, abs=1e-15)

def test_separatrix(capsys):
    assert run(["separatrix", "--n", "6", "--radius", "5"]) == 0
    out = capsys.readouterr().out
    first, rest = out.split("\n", 1)
    assert float(first) == pytest.approx(-1.0 / 3.0, abs=1e-10)
    assert rest.startswith("ring ")
    saddles = json.loads(rest[rest.index("["):])
    assert saddles and all(s["class"] == "saddle" for s in saddles)

def test_separatrix_without_saddles(capsys):
    assert run(["separatrix", "--n", "6", "--radius", "1"]) == 1
    assert "No saddle" in capsys.readouterr().err

def test_every_identity_parameter_is_a_setting():
    assert set(_param_names()) <= set(SETTINGS)

def test_eval_from_config(tmp_path, capsys):
    config = tmp_path / "eval.cfg"
    config.write_text("id = jacobi-even\nz = 4.2\nalpha = pi/2\n")
    assert run(["eval", "--config", str(config)]) == 0
    fields = capsys.readouterr().out.split()
    assert fields[0] == "jacobi-even"
    assert float(fields[1]) == pytest.approx(1.0, abs=1e-10)
    # the flag replaces the config value
    assert run(["eval", "--config", str(config), "--z", "50"]) == 2

def test_eval_reading_from_config(tmp_path):
    config = tmp_path / "reading.cfg"
    config.write_text("id = tri-ground\nr = 0\ntheta = 0\nreading = literal\n")
    assert run(["eval", "--config", str(config)]) == 1
    config.write_text("id = tri-ground\nr = 0\ntheta = 0\nreading = mirror\n")
    assert run(["eval", "--config", str(config)]) == 2

def test_sweep_from_config(tmp_path):
    out = tmp_path / "cos4k.csv"
    config = tmp_path / "sweep.cfg"
    config.write_text(f"id = cos4k\ngrid = z=0:20:3\nformat = csv\nout = {out}\n")
    assert run(["sweep", "--config", str(config)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "id,z,alpha,lhs_re,lhs_im,rhs_re,rhs_im,residual,pass"
    assert len(lines) == 1 + 3 * 8

def test_sweep_joins_repeated_flags():
    args = build_parser().parse_args(["sweep", "--id", "master", "--id", "cos4k", "--grid", "z=0,1", "--grid", "n=2"])
    settings = load_settings(args)
    assert settings["id"] == "master,cos4k"
    assert settings["grid"] == "z=0,1|n=2"

def test_sweep_needs_an_id(tmp_path, capsys):
    assert run(["sweep", "--grid", "z=0,1"]) == 2
    assert "sweep needs --id" in capsys.readouterr().err
    config = tmp_path / "bad-grid.cfg"
    config.write_text("id = cos4k\ngrid = z\n")
    assert run(["sweep", "--config", str(config)]) == 2

def test_verify_settings(tmp_path):
    config = tmp_path / "verify.cfg"
    config.write_text("all = yes\n")
    args = build_parser().parse_args(["verify", "--config", str(config)])
    assert load_settings(args)["all"] is True
    config.write_text("all = sometimes\n")
    with pytest.raises(ConfigurationError):
        load_settings(build_parser().parse_args(["verify", "--config", str(config)]))

def test_bessel_from_config(tmp_path, capsys):
    config = tmp_path / "bessel.cfg"
    config.write_text("m = 5\nz = 3.0\n")
    assert run(["bessel", "--config", str(config)]) == 0
    assert capsys.readouterr().out.splitlines()[0] == f"bessel_j {format(bessel_j(5, 3.0), '.17g')}"
    assert run(["bessel", "--config", str(config), "--m", "-2"]) == 0
    assert capsys.readouterr().out.splitlines()[0] == f"bessel_j {format(bessel_j(-2, 3.0), '.17g')}"
    assert run(["bessel", "--z", "3.0"]) == 2
    assert "bessel needs --m" in capsys.readouterr().err

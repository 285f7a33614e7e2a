"""
命令行测试
"""
import json
from pathlib import Path

import pytest

from main import EXIT_FAILED, EXIT_OK, EXIT_USAGE, main

ROOT = Path(__file__).resolve().parent.parent

SMALL = """
[fixtures.ring]
sigma = "circle(3)"

[fixtures.cyl]
sigma = "circle(3)"
slices = 6

[fixtures.short]
sigma = "circle(3)"
slices = 6
margin = 2
degrees = [0]

[suites]
mesh = ["ring", "cyl"]
betti = ["ring", "cyl"]
green = ["short"]
"""


@pytest.fixture
def small_config(tmp_path):
    path = tmp_path / "small.toml"
    path.write_text(SMALL, encoding='utf-8')
    return path


@pytest.fixture(autouse=True)
def repo_root(monkeypatch):
    monkeypatch.chdir(ROOT)


def test_describe_descriptor(capsys):
    assert main(['describe', 'circle(4)']) == EXIT_OK
    out = capsys.readouterr().out
    assert "circle(4)" in out
    assert "metric defaults: dt = 1/2" in out


def test_describe_fixture(capsys):
    assert main(['describe', 'einstein']) == EXIT_OK
    out = capsys.readouterr().out
    assert "sphere3" in out
    assert "metric: dt = 1/2, weights = uniform" in out


def test_describe_bad_descriptor(capsys):
    assert main(['describe', 'klein(3)']) == EXIT_USAGE
    assert "DescriptorError" in capsys.readouterr().err


def test_report_schema(capsys):
    assert main(['report-schema']) == EXIT_OK
    schema = json.loads(capsys.readouterr().out)
    assert schema['title'] == 'RunReport'


def test_broken_config_exits_with_usage_error(capsys):
    assert main(['run', 'configs/broken.toml', 'all']) == EXIT_USAGE
    assert "bad_circle" in capsys.readouterr().err


def test_unknown_selector():
    with pytest.raises(SystemExit):
        main(['run', 'configs/default.toml', 'everything'])


def test_passing_run_is_deterministic(small_config, tmp_path, capsys):
    out_dir = tmp_path / "out"
    assert main(['run', str(small_config), 'mesh', '--out', str(out_dir)]) == EXIT_OK
    first = (out_dir / "report.json").read_bytes()
    assert main(['run', str(small_config), 'mesh', '--out', str(out_dir)]) == EXIT_OK
    assert (out_dir / "report.json").read_bytes() == first
    assert "✅ mesh: 2/2" in capsys.readouterr().out


def test_failing_run(small_config, tmp_path, capsys):
    out_dir = tmp_path / "out"
    assert main(['run', str(small_config), 'green', '--out', str(out_dir)]) == EXIT_FAILED
    report = json.loads((out_dir / "report.json").read_text(encoding='utf-8'))
    assert report['passed'] is False
    assert "short/green_0" in capsys.readouterr().out


def test_csv_export(small_config, tmp_path):
    out_dir = tmp_path / "out"
    assert main(['run', str(small_config), 'betti', '--out', str(out_dir), '--csv']) == EXIT_OK
    assert (out_dir / "matrices").is_dir()

import json
import sys
from pathlib import Path
from unittest.mock import patch

import pytest  # type: ignore[import-untyped]
from click.testing import CliRunner


# Ensure src is importable
ROOT = Path(__file__).resolve().parents[1]
SRC = ROOT / 'src'
if str(SRC) not in sys.path:
    sys.path.insert(0, str(SRC))

from cli.commands import cli  # type: ignore
from core.fuzz import CaseResult, FuzzReport
from core.verify import IdentityCheck, VerifyReport

PRESENTATIONS = ROOT / 'data' / 'presentations'
LINKS = ROOT / 'data' / 'links'


def make_runner() -> CliRunner:
    # click < 8.2 mixes stderr into output unless told otherwise
    try:
        return CliRunner(mix_stderr=False)
    except TypeError:
        return CliRunner()


runner = make_runner()


def invoke(*args):
    return runner.invoke(cli, [str(a) for a in args])


def write_text(path: Path, text: str) -> Path:
    path.write_text(text, encoding='utf-8')
    return path


# ---------------------------------------------------------------- invariant

def test_invariant_both_routes_agree():
    result = invoke('invariant', PRESENTATIONS / 'cyclic3.pres', '--p', 5, '--method', 'both', '--json')
    assert result.exit_code == 0
    report = json.loads(result.stdout)
    assert report['command'] == 'invariant'
    assert report['p'] == 5
    assert report['result']['z_q'] == {'homology': 4, 'skein': 4}
    assert report['result']['agree'] is True
    assert 'timing' not in report


def test_invariant_text_output():
    result = invoke('invariant', PRESENTATIONS / 'cyclic3.pres', '--p', 5)
    assert result.exit_code == 0
    assert 'Z_Q (homology): 4' in result.stdout
    assert 'methods agree: yes' in result.stdout


def test_invariant_defaults_to_skein_below_chi_one():
    result = invoke('invariant', PRESENTATIONS / 'commutator.pres', '--p', 5, '--json')
    assert result.exit_code == 0
    report = json.loads(result.stdout)
    assert report['result']['method'] == 'skein'
    assert report['result']['z_q'] == {'homology': None, 'skein': 2}
    assert report['result']['agree'] is None


def test_invariant_timing_is_opt_in():
    result = invoke('invariant', PRESENTATIONS / 'cyclic3.pres', '--method', 'homology', '--timing', '--json')
    assert result.exit_code == 0
    assert 'seconds' in json.loads(result.stdout)['timing']


def test_homology_route_refuses_commutator():
    result = invoke('invariant', PRESENTATIONS / 'commutator.pres', '--method', 'homology')
    assert result.exit_code == 2
    assert result.stdout == ''


def test_guard_refusal():
    result = invoke('invariant', PRESENTATIONS / 'commutator.pres', '--p', 5, '--guard', 4)
    assert result.exit_code == 2


def test_bad_prime_is_usage_error():
    result = invoke('invariant', PRESENTATIONS / 'cyclic3.pres', '--p', 4)
    assert result.exit_code == 1


def test_malformed_presentation(tmp_path):
    path = write_text(tmp_path / 'bad.pres', '<x | y>\n')
    result = invoke('invariant', path, '--method', 'homology')
    assert result.exit_code == 1


def test_missing_file():
    result = invoke('invariant', 'does/not/exist.pres')
    assert result.exit_code == 1


# ------------------------------------------------------------------- verify

def test_verify_passes():
    result = invoke('verify', '--p', 5, '--json')
    assert result.exit_code == 0
    report = json.loads(result.stdout)
    assert report['result']['failed'] == 0
    assert '5' in report['result']['constants']


def test_verify_failure_exit_code():
    failing = VerifyReport(checks=[IdentityCheck('gauss_square', 5, False, 'forced')])
    with patch('cli.commands.run_identities', return_value=failing):
        result = invoke('verify', '--p', 5)
    assert result.exit_code == 3
    assert 'FAIL  p=5   gauss_square' in result.stdout


def test_verify_rejects_composite():
    result = invoke('verify', '--p', '5,9')
    assert result.exit_code == 1


def test_verify_with_no_primes_configured(tmp_path, monkeypatch):
    monkeypatch.setattr('config._config_instance', None)
    settings = write_text(tmp_path / 'config.yaml',
                          "defaults:\n  verify_primes: []\nlogging: {}\nfuzz: {}\n")
    result = invoke('--config', settings, 'verify')
    assert result.exit_code == 1
    assert 'verify_primes' in result.stderr


# ------------------------------------------------------------------ fuzz-ac

def test_fuzz_is_reproducible(tmp_path):
    args = ['fuzz-ac', '--p', 5, '--cases', 6, '--moves', 3, '--seed', 7, '--method', 'homology',
            '--failure-log', tmp_path / 'failures.jsonl', '--json']
    first = invoke(*args)
    second = invoke(*args, '--workers', 2)
    assert first.exit_code == 0
    assert first.stdout == second.stdout
    report = json.loads(first.stdout)
    assert report['result']['discrepancies'] == 0
    assert 'p' not in report['result']


def test_fuzz_discrepancy_exit_code(tmp_path):
    bad = CaseResult(index=0, seed=0, start='<x | x>', status='discrepancy', detail='step 2: forced')
    with patch('cli.commands.run_fuzz', return_value=FuzzReport(p=5, method=None, seed=0, moves=2, cases=[bad])):
        result = invoke('fuzz-ac', '--p', 5, '--failure-log', tmp_path / 'f.jsonl')
    assert result.exit_code == 3
    assert 'discrepancies: 1' in result.stdout


# ------------------------------------------------------- dual / link / rtw

def test_dual_of_circle():
    result = invoke('dual', PRESENTATIONS / 'circle.pres')
    assert result.exit_code == 0
    assert result.stdout.strip() == '< | 1>'


def test_link_info_hopf():
    result = invoke('link-info', LINKS / 'hopf.link')
    assert result.exit_code == 0
    assert 'signature: +1 -1 0x0' in result.stdout


def test_link_info_json():
    result = invoke('link-info', LINKS / 'borromean.link', '--json')
    report = json.loads(result.stdout)
    assert report['result']['components'] == 3
    assert report['result']['linking_matrix'] == [[0, 0, 0], [0, 0, 0], [0, 0, 0]]


def test_rtw_unknot():
    result = invoke('rtw', LINKS / 'unknot.link', '--p', 5)
    assert result.exit_code == 0
    assert result.stdout.strip() == 'RTW of boundary (adopted normalization): 1'


def test_rtw_leftover_x(tmp_path):
    path = write_text(tmp_path / 'zero.link', 'braid 1:\noffsets: 0\n')
    result = invoke('rtw', path, '--p', 5)
    assert result.stdout.strip().endswith(': X')


def test_rtw_fold_root(tmp_path):
    path = write_text(tmp_path / 'zero.link', 'braid 1:\noffsets: 0\n')
    result = invoke('rtw', path, '--p', 7, '--fold-root', '--json')
    assert result.exit_code == 0
    report = json.loads(result.stdout)
    assert report['result']['x_power'] == 0
    assert 'root_convention' in report['result']


# ------------------------------------------------------------------- global

def test_version():
    result = invoke('--version')
    assert result.exit_code == 0
    assert '1.0.0' in result.stdout


def test_internal_error_exit_code():
    with patch('cli.commands.dual', side_effect=RuntimeError('boom')):
        result = invoke('dual', PRESENTATIONS / 'circle.pres')
    assert result.exit_code == 4
    assert 'internal error' in result.stderr


@pytest.mark.parametrize('name', ['cyclic3', 'circle', 'sphere', 'ball', 'two_cyclic'])
def test_shipped_presentations_parse(name):
    result = invoke('dual', PRESENTATIONS / f'{name}.pres', '--json')
    assert result.exit_code == 0
    assert json.loads(result.stdout)['command'] == 'dual'

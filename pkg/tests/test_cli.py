"""
Test the command line front end
"""
import json

import pytest

from main import build_parser, exit_code_for, main
from src.errors import (ChannelParseError, ConsistencyError, NotAnAlgebraError, NumericError,
                        PreconditionError, ResourceError, ShapeError)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out)


def test_analyze_fourier(capsys):
    code, report = run_json(capsys, 'analyze', 'builtin:fourier/3')

    assert code == 0
    assert report['input']['builtin'] == 'builtin:fourier/3'
    assert report['chain']['dims'] == [3, 1]
    assert report['chain']['kappa'] == 2
    assert report['verdicts']['primitive'] is True
    assert 'error' not in report


def test_analyze_kappa3(capsys):
    code, report = run_json(capsys, 'analyze', 'builtin:kappa3')

    assert code == 0
    assert report['chain']['dims'] == [3, 2, 1]
    assert report['qec']['uns']['algebra_dim'] == 1
    assert report['qec']['witness_residual'] == pytest.approx(0.5 ** 0.5)


def test_analyze_pauli_is_normal(capsys):
    code, report = run_json(capsys, 'analyze', 'builtin:pauli/0.4,0.3,0.2,0.1')

    assert code == 0
    assert report['chain']['kappa'] == 1
    assert report['chain']['normal'] is True
    assert report['verdicts']['normal'] is True


def test_analyze_non_tp_input(capsys):
    code, report = run_json(capsys, 'analyze', 'builtin:counterexample')

    assert code == 2
    assert 'error' in report
    assert report['ucp']['mult_domain_dim'] >= 2


def test_analyze_missing_file(capsys, tmp_path):
    code, report = run_json(capsys, 'analyze', str(tmp_path / 'missing.json'))

    assert code == 2
    assert report['error_type'] == 'ChannelParseError'


def test_analyze_several_inputs_emits_list(capsys):
    code, reports = run_json(capsys, 'analyze', 'builtin:shift/3', 'builtin:projective')

    assert code == 0
    assert isinstance(reports, list)
    assert [r['input']['builtin'] for r in reports] == ['builtin:shift/3', 'builtin:projective']


def test_rank_eps_flag_is_reported(capsys):
    _, report = run_json(capsys, 'spectrum', 'builtin:projective', '--rank-eps', '1e-8')

    assert report['tolerances']['rank_eps'] == 1e-8


def test_table_format(capsys):
    code, out, _ = run(capsys, 'analyze', 'builtin:kappa3', '--format', 'table')

    assert code == 0
    assert "CHANNEL ANALYSIS" in out
    assert "[chain]" in out


def test_gen_unitary(capsys):
    code, data = run_json(capsys, 'gen', '{"family": "unitary", "params": {"u": "X"}}')

    assert code == 0
    assert data == {'dim': 2, 'kraus': [[[0.0, 0.0], [1.0, 0.0], [1.0, 0.0], [0.0, 0.0]]]}


def test_gen_path_builtin(capsys):
    code, data = run_json(capsys, 'gen', 'builtin:path/0.5')

    assert code == 0
    assert data['dim'] == 2
    assert len(data['kraus']) == 2


def test_gen_random_is_deterministic(capsys):
    spec = '{"family": "random_unitary_mixture", "params": {"dim": 3, "k": 2, "seed": 9}}'

    _, first, _ = run(capsys, 'gen', spec)
    _, second, _ = run(capsys, 'gen', spec)

    assert first == second


def test_gen_then_analyze(capsys, tmp_path):
    path = tmp_path / 'kappa3.json'

    assert main(['gen', 'builtin:kappa3', '--out', str(path)]) == 0
    capsys.readouterr()
    code, report = run_json(capsys, 'analyze', str(path))

    assert code == 0
    assert report['input'] == {'file': str(path)}
    assert report['chain']['kappa'] == 3


def test_gen_bad_spec(capsys):
    code, out, err = run(capsys, 'gen', '{"family": "nope"}')

    assert code == 2
    assert out == ''
    assert 'ChannelParseError' in err


def test_reproduce_single_row(capsys):
    code, rows = run_json(capsys, 'reproduce', '--only', 'kappa3_chain', '--format', 'json')

    assert code == 0
    assert [r['name'] for r in rows] == ['kappa3_chain']
    assert rows[0]['passed'] is True


def test_reproduce_defaults_to_table(capsys):
    code, out, _ = run(capsys, 'reproduce', '--only', 'shift')

    assert code == 0
    assert "1/1 rows passed" in out


def test_reproduce_loose_rank_eps_shows_warnings(capsys):
    code, out, _ = run(capsys, 'reproduce', '--only', 'weak_depolarizing', '--rank-eps', '1e-2')

    assert code == 0
    assert "⚠️  borderline rank" in out


def test_reproduce_unknown_row(capsys):
    code, _, err = run(capsys, 'reproduce', '--only', 'bogus')

    assert code == 2
    assert 'unknown reproduction row' in err


def test_spectrum_with_plot(capsys, tmp_path):
    path = tmp_path / 'shift.png'

    code, report = run_json(capsys, 'spectrum', 'builtin:shift/3', '--plot', str(path))

    assert code == 0
    assert path.exists()
    assert report['peripheral']['group_order'] == 3
    assert 'chain' not in report


def test_spectrum_plot_needs_one_input(capsys, tmp_path):
    code, _, _ = run(capsys, 'spectrum', 'builtin:shift/3', 'builtin:kappa3', '--plot', str(tmp_path / 'x.png'))

    assert code == 2


def test_qec_kappa3(capsys):
    code, report = run_json(capsys, 'qec', 'builtin:kappa3')

    assert code == 0
    assert report['chain'] == {'kappa': 3}
    assert report['qec']['ucc']['algebra_dim'] == 3
    assert report['qec']['kappa_one_equivalence'] is False


def test_list(capsys):
    code, out, _ = run(capsys, 'list')

    assert code == 0
    assert 'builtin:fourier/' in out
    assert 'kappa3_codes' in out


def test_parser_requires_command():
    with pytest.raises(SystemExit):
        build_parser().parse_args([])


@pytest.mark.parametrize("error,code", [
    (PreconditionError("x"), 2),
    (ChannelParseError("x"), 2),
    (ResourceError("x"), 2),
    (ShapeError("x"), 2),
    (NumericError("x"), 3),
    (ConsistencyError("x"), 3),
    (NotAnAlgebraError("x"), 3),
    (RuntimeError("x"), 1),
])
def test_exit_code_for(error, code):
    assert exit_code_for(error) == code

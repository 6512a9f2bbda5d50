"""
Test the JSON wire format and builtin names
"""
import json

import numpy as np
import pytest

from src import builders
from src.errors import ChannelParseError, ResourceError
from src.wire import (BUILTINS, ReportEncoder, decode_channel, decode_matrix, dumps, dumps_channel,
                      encode_channel, encode_matrix, loads_channel, parse_builtin, read_input, read_spec)


def test_encode_pauli_x(tol):
    data = encode_channel(builders.unitary_channel(builders.PAULI['X'], tol))

    assert data == {'dim': 2, 'kraus': [[[0.0, 0.0], [1.0, 0.0], [1.0, 0.0], [0.0, 0.0]]]}


def test_encode_matrix_is_row_major():
    m = np.array([[1, 2j], [3, 4]])

    assert encode_matrix(m) == [[1.0, 0.0], [0.0, 2.0], [3.0, 0.0], [4.0, 0.0]]


def test_dumps_channel_reads_back_exactly(tol):
    ch = builders.random_unitary_mixture(3, 2, 4, tol)

    again = loads_channel(dumps_channel(ch), tol)

    np.testing.assert_array_equal(again.kraus, ch.kraus)


def test_dumps_channel_writes_17_significant_digits(tol):
    text = dumps_channel(builders.kappa3_example(tol))

    assert format(1 / np.sqrt(2), '.17g') in text
    np.testing.assert_array_equal(loads_channel(text, tol).kraus, builders.kappa3_example(tol).kraus)


def test_dumps_pauli_x_text(tol):
    text = dumps_channel(builders.unitary_channel(builders.PAULI['X'], tol))

    assert text == '{"dim": 2, "kraus": [[[0, 0], [1, 0], [1, 0], [0, 0]]]}'


def test_decode_nested_rows():
    flat = decode_matrix([[1, 0], [0, 1], [2, 0], [3, -1]])
    nested = decode_matrix([[[1, 0], [0, 1]], [[2, 0], [3, -1]]])

    np.testing.assert_array_equal(flat, nested)
    np.testing.assert_array_equal(flat, np.array([[1, 1j], [2, 3 - 1j]]))


def test_decode_accepts_real_numbers():
    np.testing.assert_array_equal(decode_matrix([1, 0, 0, 1]), np.eye(2))


@pytest.mark.parametrize("data,field", [
    ([], 'm'),
    ([[1, 0], [0, 0], [0, 0]], 'm'),
    ([[1, 0, 0], [0, 0], [0, 0], [1, 0]], 'm[0]'),
    (['a', 0, 0, 1], 'm[0]'),
    ([[[1, 0], [0, 0]], [[0, 0]]], 'm'),
    ("1,0,0,1", 'm'),
])
def test_decode_matrix_errors(data, field):
    with pytest.raises(ChannelParseError) as info:
        decode_matrix(data, field='m')
    assert info.value.field == field


def test_decode_matrix_dimension_mismatch():
    with pytest.raises(ChannelParseError) as info:
        decode_matrix([1, 0, 0, 1], field='kraus[0]', dim=3)
    assert 'expected 3x3' in str(info.value)


@pytest.mark.parametrize("data,field", [
    ({'dim': 0, 'kraus': [[1]]}, 'dim'),
    ({'dim': 'two', 'kraus': [[1]]}, 'dim'),
    ({'dim': True, 'kraus': [[1]]}, 'dim'),
    ({'dim': 2}, 'kraus'),
    ({'dim': 2, 'kraus': []}, 'kraus'),
    ({'dim': 2, 'kraus': [[1, 0, 0, 1], [1, 0, 0]]}, 'kraus[1]'),
])
def test_decode_channel_errors(tol, data, field):
    with pytest.raises(ChannelParseError) as info:
        decode_channel(data, tol)
    assert info.value.field == field


def test_decode_channel_dimension_cap(tol):
    with pytest.raises(ResourceError):
        decode_channel({'dim': 33, 'kraus': [[1]]}, tol)


def test_loads_channel_reports_line(tol):
    with pytest.raises(ChannelParseError) as info:
        loads_channel('{\n  "dim": 2,\n  "kraus": [oops]\n}', tol)
    assert info.value.line == 3
    assert 'line 3' in str(info.value)


@pytest.mark.parametrize("name,family,params", [
    ('builtin:identity/3', 'identity', {'dim': 3}),
    ('builtin:unitary/H', 'unitary', {'u': 'H'}),
    ('builtin:unitary/haar:3:9', 'unitary', {'u': 'haar', 'dim': 3, 'seed': 9}),
    ('builtin:pauli/0.7,0.1,0.1,0.1', 'pauli', {'probs': [0.7, 0.1, 0.1, 0.1]}),
    ('builtin:weyl/3/uniform', 'weyl', {'dim': 3, 'probs': 'uniform'}),
    ('builtin:weyl/2/5', 'weyl', {'dim': 2, 'seed': 5}),
    ('builtin:fourier/4', 'fourier', {'dim': 4}),
    ('builtin:kappa3', 'kappa3', {}),
    ('builtin:projective', 'projective', {}),
    ('builtin:path/0.5', 'path_t', {'t': 0.5}),
    ('builtin:random/3/2/7', 'random_unitary_mixture', {'dim': 3, 'k': 2, 'seed': 7}),
    ('builtin:randomcp/2/3/1', 'random_unital_cp', {'dim': 2, 'k': 3, 'seed': 1}),
    ('builtin:counterexample', 'counterexample', {}),
    ('builtin:depolarizing/2/0.25', 'depolarizing', {'dim': 2, 'p': 0.25}),
    ('shift/3', 'shift', {'dim': 3}),
])
def test_parse_builtin(name, family, params):
    spec = parse_builtin(name)

    assert spec.family == family
    assert spec.params == params


def test_parse_builtin_weyl_default_seed():
    import config

    assert parse_builtin('builtin:weyl/2').params == {'dim': 2, 'seed': config.DEFAULT_SEED}


@pytest.mark.parametrize("name", [
    'builtin:nope', 'builtin:kappa3/3', 'builtin:fourier', 'builtin:fourier/x',
    'builtin:random/2/2', 'builtin:unitary/haar:3', 'builtin:path/0.1/0.2',
])
def test_parse_builtin_errors(name):
    with pytest.raises(ChannelParseError):
        parse_builtin(name)


def test_every_builtin_is_listed():
    assert set(BUILTINS) == {'identity', 'unitary', 'pauli', 'weyl', 'fourier', 'kappa3', 'projective',
                             'path', 'random', 'randomcp', 'counterexample', 'depolarizing', 'shift'}


def test_read_input_builtin(tol):
    ch, echo = read_input('builtin:fourier/3', tol)

    assert ch.dim == 3
    assert echo == {'builtin': 'builtin:fourier/3', 'spec': {'family': 'fourier', 'params': {'dim': 3}}}


def test_read_input_file(tol, tmp_path):
    path = tmp_path / 'x.json'
    path.write_text(dumps_channel(builders.unitary_channel(builders.PAULI['X'], tol)), encoding='utf-8')

    ch, echo = read_input(path, tol)

    assert echo == {'file': str(path)}
    np.testing.assert_array_equal(ch.kraus[0], builders.PAULI['X'])


def test_read_input_errors(tol, tmp_path):
    with pytest.raises(ChannelParseError):
        read_input(tmp_path / 'missing.json', tol)

    broken = tmp_path / 'broken.json'
    broken.write_text('{"dim": 2, "kraus": [[1, 0, 0, 1], [[1, 0], [0, 0], [0, 0]]]}', encoding='utf-8')
    with pytest.raises(ChannelParseError):
        read_input(broken, tol)


def test_read_spec(tmp_path):
    assert read_spec('{"family": "kappa3"}').family == 'kappa3'
    assert read_spec('builtin:path/1').params == {'t': 1.0}

    path = tmp_path / 'spec.json'
    path.write_text(json.dumps({'family': 'shift', 'params': {'dim': 4}}), encoding='utf-8')
    assert read_spec(str(path)).params == {'dim': 4}

    with pytest.raises(ChannelParseError):
        read_spec(str(tmp_path / 'none.json'))
    with pytest.raises(ChannelParseError):
        read_spec('{"family": ')


def test_report_encoder():
    data = {'a': np.int64(3), 'b': np.float64(0.5), 'c': np.bool_(True), 'd': 1 + 2j,
            'e': np.eye(2), 'f': np.arange(3)}

    decoded = json.loads(json.dumps(data, cls=ReportEncoder))

    assert decoded == {'a': 3, 'b': 0.5, 'c': True, 'd': [1.0, 2.0],
                       'e': [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [1.0, 0.0]], 'f': [0, 1, 2]}
    assert dumps({'x': 1}) == '{\n  "x": 1\n}'

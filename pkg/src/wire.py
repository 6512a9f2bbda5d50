"""
Channel input and output.

JSON wire format {"dim": d, "kraus": [...]} where each Kraus operator is a
row-major list of d^2 [re, im] pairs (nested rows are accepted on input),
plus the builtin:<family>/<params> names understood by the command line.
"""

import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np

import config
from .builders import ChannelSpec, build_channel
from .channel import KrausChannel, check_dimension_cap
from .errors import ChannelParseError, ShapeError
from .linalg import Tolerance

BUILTIN_PREFIX = 'builtin:'

# name -> (syntax, description), shown by `list`
BUILTINS = {
    'identity': ('identity/<d>', "identity channel on M_d"),
    'unitary': ('unitary/X|Y|Z|H|haar:<d>:<seed>', "x -> u x u*"),
    'pauli': ('pauli/<pI>,<pX>,<pY>,<pZ>', "qubit Pauli channel"),
    'weyl': ('weyl/<d>[/<seed>|/uniform]', "Weyl unitary mixture, Dirichlet or uniform weights"),
    'fourier': ('fourier/<d>', "rank-one Fourier example, kappa = 2"),
    'kappa3': ('kappa3', "M_3 example with chain dims [3, 2, 1]"),
    'projective': ('projective', "x -> p x p + q x q on M_2"),
    'path': ('path/<t>', "path channel, t in [0, 1]"),
    'random': ('random/<d>/<k>/<seed>', "seeded mixture of k Haar unitaries"),
    'randomcp': ('randomcp/<d>/<k>/<seed>', "seeded unital CP map, generically not TP"),
    'counterexample': ('counterexample', "unital non-TP map on M_3"),
    'depolarizing': ('depolarizing/<d>/<p>', "(1 - p) x + p tr(x) 1/d"),
    'shift': ('shift/<d>', "dephase then shift cyclically, irreducible"),
}


class ReportEncoder(json.JSONEncoder):
    """JSON encoder for numpy scalars, arrays and complex numbers."""

    def default(self, o: Any) -> Any:
        if isinstance(o, np.ndarray):
            return encode_matrix(o) if o.ndim == 2 else o.tolist()
        if isinstance(o, (np.bool_,)):
            return bool(o)
        if isinstance(o, np.integer):
            return int(o)
        if isinstance(o, np.floating):
            return float(o)
        if isinstance(o, (complex, np.complexfloating)):
            return [float(o.real), float(o.imag)]
        return super().default(o)


def dumps(data: Any) -> str:
    return json.dumps(data, cls=ReportEncoder, indent=getattr(config, 'JSON_INDENT', 2))


def encode_matrix(m: np.ndarray) -> List[List[float]]:
    """
    Row-major list of [re, im] pairs.

    :param m: Matrix
    :return: Flat list of length rows * cols
    """
    flat = np.asarray(m, dtype=complex).reshape(-1)
    return [[float(z.real), float(z.imag)] for z in flat]


def _as_pair(entry: Any, field: str) -> complex:
    if isinstance(entry, (int, float)) and not isinstance(entry, bool):
        return complex(entry, 0.0)
    if (isinstance(entry, (list, tuple)) and len(entry) == 2
            and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in entry)):
        return complex(entry[0], entry[1])
    raise ChannelParseError("entry must be a number or an [re, im] pair", field=field)


def decode_matrix(data: Any, field: str = 'matrix', dim: Optional[int] = None) -> np.ndarray:
    """
    Parse a flat row-major list of d^2 entries or a list of d rows.

    :param data: Decoded JSON value
    :param field: Field path used in error messages
    :param dim: Expected dimension (inferred when omitted)
    :return: d x d complex matrix
    """
    if not isinstance(data, list) or not data:
        raise ChannelParseError("matrix must be a non-empty list", field=field)
    nested = all(isinstance(row, list) and row and isinstance(row[0], list) for row in data)
    if nested:
        entries = [_as_pair(x, f"{field}[{i}][{j}]") for i, row in enumerate(data) for j, x in enumerate(row)]
        if any(len(row) != len(data) for row in data):
            raise ChannelParseError("rows must form a square matrix", field=field)
    else:
        entries = [_as_pair(x, f"{field}[{i}]") for i, x in enumerate(data)]
    d = int(round(np.sqrt(len(entries))))
    if d * d != len(entries):
        raise ChannelParseError(f"{len(entries)} entries do not form a square matrix", field=field)
    if dim is not None and d != dim:
        raise ChannelParseError(f"matrix is {d}x{d}, expected {dim}x{dim}", field=field)
    m = np.array(entries, dtype=complex).reshape(d, d)
    if not np.all(np.isfinite(m)):
        raise ChannelParseError("matrix contains NaN or Inf entries", field=field)
    return m


def encode_channel(ch: KrausChannel) -> Dict[str, Any]:
    return {'dim': ch.dim, 'kraus': [encode_matrix(a) for a in ch.kraus]}


def decode_channel(data: Any, tol: Optional[Tolerance] = None) -> KrausChannel:
    """
    Build a channel from a decoded wire object.

    :param data: {"dim": d, "kraus": [...]}
    :param tol: Tolerances
    :return: KrausChannel
    """
    if not isinstance(data, dict):
        raise ChannelParseError("channel must be a JSON object")
    dim = data.get('dim')
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise ChannelParseError("'dim' must be a positive integer", field='dim')
    check_dimension_cap(dim)
    kraus = data.get('kraus')
    if not isinstance(kraus, list) or not kraus:
        raise ChannelParseError("'kraus' must be a non-empty list", field='kraus')
    ops = [decode_matrix(k, field=f'kraus[{i}]', dim=dim) for i, k in enumerate(kraus)]
    return KrausChannel.from_kraus(ops, tol)


def _float17(x: float) -> str:
    return format(x, '.17g')


def dumps_channel(ch: KrausChannel) -> str:
    """
    Wire JSON with every float written to 17 significant digits.

    17 digits identify an IEEE double uniquely, so reading the text back
    gives the same matrices bit for bit.

    :param ch: Channel
    :return: JSON text
    """
    matrices = []
    for entries in encode_channel(ch)['kraus']:
        pairs = ", ".join(f"[{_float17(real)}, {_float17(imag)}]" for real, imag in entries)
        matrices.append(f"[{pairs}]")
    return f'{{"dim": {ch.dim}, "kraus": [{", ".join(matrices)}]}}'


def loads_channel(text: str, tol: Optional[Tolerance] = None) -> KrausChannel:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ChannelParseError(f"invalid JSON: {exc.msg}", line=exc.lineno) from exc
    return decode_channel(data, tol)


def _number(text: str, kind: type, field: str) -> Any:
    try:
        return kind(text)
    except ValueError as exc:
        raise ChannelParseError(f"'{text}' is not a valid {kind.__name__}", field=field) from exc


def parse_builtin(name: str) -> ChannelSpec:
    """
    Translate builtin:<family>/<params> into a ChannelSpec.

    :param name: Name with or without the builtin: prefix
    :return: ChannelSpec
    """
    if name.startswith(BUILTIN_PREFIX):
        name = name[len(BUILTIN_PREFIX):]
    family, *args = name.split('/')
    if family not in BUILTINS:
        raise ChannelParseError(f"unknown builtin '{family}'", field='builtin')
    syntax = BUILTINS[family][0]

    def need(count: int, optional: int = 0) -> None:
        if not count <= len(args) <= count + optional:
            raise ChannelParseError(f"expected builtin:{syntax}", field='builtin')

    if family in ('kappa3', 'projective', 'counterexample'):
        need(0)
        return ChannelSpec(family)
    if family in ('identity', 'fourier', 'shift'):
        need(1)
        return ChannelSpec(family, {'dim': _number(args[0], int, 'dim')})
    if family == 'unitary':
        need(1)
        if args[0].startswith('haar'):
            parts = args[0].split(':')
            if len(parts) != 3:
                raise ChannelParseError(f"expected builtin:{syntax}", field='builtin')
            return ChannelSpec('unitary', {'u': 'haar', 'dim': _number(parts[1], int, 'dim'),
                                           'seed': _number(parts[2], int, 'seed')})
        return ChannelSpec('unitary', {'u': args[0]})
    if family == 'pauli':
        need(1)
        return ChannelSpec('pauli', {'probs': [_number(p, float, 'probs') for p in args[0].split(',')]})
    if family == 'weyl':
        need(1, 1)
        params: Dict[str, Any] = {'dim': _number(args[0], int, 'dim')}
        if len(args) == 2:
            if args[1] == 'uniform':
                params['probs'] = 'uniform'
            else:
                params['seed'] = _number(args[1], int, 'seed')
        else:
            params['seed'] = getattr(config, 'DEFAULT_SEED', 1234)
        return ChannelSpec('weyl', params)
    if family == 'path':
        need(1)
        return ChannelSpec('path_t', {'t': _number(args[0], float, 't')})
    if family in ('random', 'randomcp'):
        need(3)
        target = 'random_unitary_mixture' if family == 'random' else 'random_unital_cp'
        return ChannelSpec(target, {'dim': _number(args[0], int, 'dim'), 'k': _number(args[1], int, 'k'),
                                    'seed': _number(args[2], int, 'seed')})
    # depolarizing
    need(2)
    return ChannelSpec('depolarizing', {'dim': _number(args[0], int, 'dim'), 'p': _number(args[1], float, 'p')})


def read_input(source: Union[str, Path], tol: Optional[Tolerance] = None) -> Tuple[KrausChannel, Dict[str, Any]]:
    """
    Load a channel from a builtin name or a wire JSON file.

    :param source: builtin:<name> or file path
    :param tol: Tolerances
    :return: (channel, input echo for reports)
    """
    source = str(source)
    if source.startswith(BUILTIN_PREFIX):
        spec = parse_builtin(source)
        return build_channel(spec, tol), {'builtin': source, 'spec': spec.to_dict()}
    path = Path(source)
    if not path.is_file():
        raise ChannelParseError(f"input file not found: {source}", field='input')
    try:
        channel = loads_channel(path.read_text(encoding='utf-8'), tol)
    except ShapeError as exc:
        raise ChannelParseError(str(exc), field='kraus') from exc
    return channel, {'file': source}


def read_spec(source: Union[str, Path]) -> ChannelSpec:
    """
    Load a ChannelSpec from JSON text, a JSON file or a builtin name.

    :param source: JSON object text, file path or builtin:<name>
    :return: ChannelSpec
    """
    source = str(source)
    if source.startswith(BUILTIN_PREFIX):
        return parse_builtin(source)
    text = source
    if not source.lstrip().startswith('{'):
        path = Path(source)
        if not path.is_file():
            raise ChannelParseError(f"spec file not found: {source}", field='spec')
        text = path.read_text(encoding='utf-8')
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ChannelParseError(f"invalid JSON: {exc.msg}", line=exc.lineno) from exc
    return ChannelSpec.from_dict(data)

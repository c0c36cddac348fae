# reports/configs.py
"""Simulation config files, in the shape VerificationConfig.to_json writes.

    {"mode": "nonstationary", "replications": 10000, "seed": 42,
     "family": {"c": ["1/2", "1/2"], "Lambda_W": [{"(1,2)": "1/1"}, {"(2,1)": "1/1"}]}}

Command-line flags override the values read from the file.
"""
import json
import logging

from cliques.cliques import assemble_family
from evolutions.verification import VerificationConfig
from mapevo.exceptions import InputError
from measures.measure import RationalMeasure, parse_rational
from transforms.transformation import parse_tuple

logger = logging.getLogger(__name__)

SCALAR_FIELDS = ('mode', 'replications', 'seed', 'alpha', 'k_min', 'k_max', 'k', 'window',
                 'path_steps')
KNOWN_FIELDS = SCALAR_FIELDS + ('Lambda_W', 'family', 'mixing_lengths')


def _tuple_law(data, n, field):
    if not isinstance(data, dict) or not data:
        raise InputError(f"{field}: expected an object mapping tuples to weights")
    weights = {}
    for literal, raw in data.items():
        x = parse_tuple(literal, n)
        weights[x] = weights.get(x, 0) + parse_rational(raw, field=f"{field}[{literal!r}]")
    return RationalMeasure(weights)


def parse_config(data, analysis, source='<config>'):
    """Decoded config object to VerificationConfig keyword arguments."""
    if not isinstance(data, dict):
        raise InputError(f"{source}: expected a JSON object")
    unknown = sorted(set(data) - set(KNOWN_FIELDS))
    if unknown:
        raise InputError(f"{source}: unknown field '{unknown[0]}'")
    fields = {name: data[name] for name in SCALAR_FIELDS if name in data}
    n = analysis.law.n
    if 'Lambda_W' in data:
        fields['Lambda_W'] = _tuple_law(data['Lambda_W'], n, 'Lambda_W')
    if 'family' in data:
        family = data['family']
        if not isinstance(family, dict) or set(family) != {'c', 'Lambda_W'}:
            raise InputError("family: expected an object with 'c' and 'Lambda_W'")
        if not isinstance(family['c'], list) or not isinstance(family['Lambda_W'], list):
            raise InputError("family: 'c' and 'Lambda_W' must be lists")
        coefficients = [parse_rational(c, field=f"family.c[{i}]") for i, c in enumerate(family['c'])]
        laws = [_tuple_law(lam, n, f"family.Lambda_W[{i}]")
                for i, lam in enumerate(family['Lambda_W'])]
        fields['family'] = assemble_family(analysis.cd, coefficients, laws)
    if 'mixing_lengths' in data:
        lengths = data['mixing_lengths']
        if not isinstance(lengths, list) or not lengths or not all(
                isinstance(n, int) and not isinstance(n, bool) and n >= 1 for n in lengths):
            raise InputError("mixing_lengths: expected a non-empty list of positive integers")
        fields['mixing_lengths'] = tuple(lengths)
    return fields


def load_config(path, analysis):
    try:
        with open(path, encoding='utf-8') as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read config file {path}: {exc.strerror}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return parse_config(data, analysis, source=str(path))


def simulation_config(analysis, options):
    """VerificationConfig from an optional --config file and the command-line flags."""
    fields = load_config(options['config'], analysis) if options.get('config') else {}
    for name in ('replications', 'seed', 'alpha', 'k_min', 'k_max', 'k', 'window', 'mode'):
        if options.get(name) is not None:
            fields[name] = options[name]
    if fields.get('mode') == 'stationary':
        fields.pop('family', None)
    config = VerificationConfig(**fields)
    logger.info(f"simulation config: {config.to_json()}")
    return config

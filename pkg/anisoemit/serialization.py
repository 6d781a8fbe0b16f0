# coding: utf-8

# The location of `import yaml` is not optimized!!
# pylint: disable=wrong-import-order

import codecs
import csv
import io
import json
import math
import re
from pathlib import Path
from typing import Any, Dict, Iterable, List, Sequence, Union

import yaml


class LfCsvDialect(csv.Dialect):
    delimiter = ","
    quotechar = '"'
    doublequote = True
    skipinitialspace = True
    lineterminator = "\n"
    quoting = csv.QUOTE_MINIMAL


csv.register_dialect("lf_csv", LfCsvDialect)


def to_snake(value: str) -> str:
    """For key of dictionary

    Usage:

        >>> to_snake("epsX")
        'eps_x'
        >>> to_snake("--target-rel-tol")
        'target_rel_tol'
    """
    return re.sub(r"((?<!^)[A-Z])", "_\\1", value.strip("<>-")).lower().replace("-", "_")


def replace_keys(d: dict, force_snake_case: bool) -> dict:
    return {to_snake(k) if force_snake_case else k: v for k, v in d.items()}


def format_float(value: Any) -> str:
    """17 significant digits, round-trip safe

    Usage:

        >>> format_float(0.1)
        '0.10000000000000001'
        >>> format_float(2.0)
        '2'
        >>> format_float(None)
        ''
    """
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return f"{value:.17g}"
    return str(value)


def load_json(json_str: str) -> Union[dict, list]:
    return json.loads(json_str)


def load_yaml(yaml_str: str) -> Union[dict, list]:
    return yaml.safe_load(yaml_str)


def load_configf(fpath: str, encoding: str = "utf8") -> dict:
    """Load a JSON or YAML file (chosen by suffix) as a dict

    :param fpath: File path
    :param encoding: File encoding
    :return: Dict
    """
    with codecs.open(fpath, encoding=encoding) as f:
        text = f.read()
    loaded = load_yaml(text) if Path(fpath).suffix.lower() in (".yaml", ".yml") else load_json(text)
    return loaded or {}


# private-use character, marks float placeholders in the dumped text
_FLOAT_TOKEN = "\ue000"
_FLOAT_TOKEN_PATTERN = re.compile(f'"{_FLOAT_TOKEN}(\\d+)"')


def _json_float(value: float) -> str:
    text = format_float(value)
    return text if any(c in text for c in ".e") else text + ".0"


def _tokenize_floats(data: Any, floats: List[float]) -> Any:
    if isinstance(data, dict):
        return {k: _tokenize_floats(v, floats) for k, v in data.items()}
    if isinstance(data, (list, tuple)):
        return [_tokenize_floats(v, floats) for v in data]
    if isinstance(data, float) and math.isfinite(data):
        floats.append(data)
        return f"{_FLOAT_TOKEN}{len(floats) - 1}"
    return data


def dump_json(data: Union[list, dict], indent=None) -> str:
    """Finite floats are written by ``format_float``, as in CSV, keeping a decimal point

    Usage:

        >>> dump_json({"gamma": 2.0, "method_tag": "closed-form"})
        '{"gamma": 2.0,"method_tag": "closed-form"}'
        >>> dump_json([0.1, 3])
        '[0.10000000000000001,3]'
    """
    floats: List[float] = []
    text = json.dumps(
        _tokenize_floats(data, floats),
        indent=indent,
        ensure_ascii=False,
        sort_keys=True,
        separators=(",", ": "),
    )
    return _FLOAT_TOKEN_PATTERN.sub(lambda m: _json_float(floats[int(m.group(1))]), text)



def dump_csv(
    data: Iterable[Dict[str, Any]], fieldnames: Sequence[str], *, with_header: bool = True
) -> str:
    """LF line endings, floats with 17 significant digits, ``None`` as an empty cell

    :param data: Rows
    :param fieldnames: Order of columns
    :param with_header: Add headers at the first line if True
    :return: Csv string

    Usage:

        >>> print(dump_csv([{"theta_rad": 0.0, "f_theta": 0.5}], ["theta_rad", "f_theta"]), end="")
        theta_rad,f_theta
        0,0.5
    """
    with io.StringIO() as sio:
        writer = csv.DictWriter(sio, fieldnames=fieldnames, dialect="lf_csv", extrasaction="ignore")
        if with_header:
            writer.writeheader()
        for x in data:
            writer.writerow({k: format_float(v) for k, v in x.items()})
        return sio.getvalue()


def write_text(text: str, fpath: str, encoding: str = "utf8") -> str:
    """
    :return: written path
    """
    with open(fpath, mode="w", encoding=encoding, newline="") as f:
        f.write(text)
    return fpath

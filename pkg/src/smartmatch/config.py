"""INI configuration for orderings, saturation and smart matching.

Example::

    [ordering]
    kind = lpo
    precedence = len/2 > plus/2

    [weights]
    var = 1
    f/2 = 3

    [saturation]
    age_weight = 1:4
    max_weight = 100
    timeout = 10

    [smart_match]
    narrowing = 3
"""

from __future__ import annotations

import configparser
from typing import Dict, Tuple

from .ordering import ORDERINGS, Precedence
from .term import Symbol


class ConfigError(ValueError):
    pass


def parse_symbol(text: str) -> Symbol:
    name, sep, arity = text.strip().rpartition("/")
    if not sep or not name or not arity.isdigit():
        raise ConfigError(f"bad symbol {text.strip()!r}; expected name/arity")
    if len(name) >= 2 and name[0] == name[-1] == "'":
        name = name[1:-1]
    return (name, int(arity))


def parse_precedence(text: str) -> Precedence:
    """``"f/2 > g/1 > a/0"``, greatest first."""
    items = [s for s in text.split(">") if s.strip()]
    try:
        return Precedence([parse_symbol(s) for s in items])
    except ValueError as e:
        raise ConfigError(str(e)) from None


def parse_ratio(text: str) -> Tuple[int, int]:
    a, sep, w = text.partition(":")
    if not sep or not a.strip().isdigit() or not w.strip().isdigit():
        raise ConfigError(f"bad age:weight ratio {text!r}")
    ratio = (int(a), int(w))
    if ratio == (0, 0):
        raise ConfigError("age:weight ratio 0:0 selects nothing")
    return ratio


def load_config(path: str) -> Dict[str, object]:
    """Settings from an INI file, as keyword overrides for the CLI."""
    cp = configparser.ConfigParser()
    try:
        with open(path, encoding="utf-8") as f:
            cp.read_file(f)
    except configparser.Error as e:
        raise ConfigError(f"{path}: {e}") from None
    out: Dict[str, object] = {}
    try:
        if cp.has_section("ordering"):
            sec = cp["ordering"]
            if "kind" in sec:
                kind = sec["kind"].strip().lower()
                if kind not in ORDERINGS:
                    raise ConfigError(f"unknown ordering {kind!r}")
                out["ordering"] = kind
            if "precedence" in sec:
                out["precedence"] = parse_precedence(sec["precedence"])
        if cp.has_section("weights"):
            weights = {}
            for key, value in cp["weights"].items():
                if key == "var":
                    out["var_weight"] = int(value)
                else:
                    weights[parse_symbol(key)] = int(value)
            out["weights"] = weights
        if cp.has_section("saturation"):
            sec = cp["saturation"]
            if "age_weight" in sec:
                out["age_weight"] = parse_ratio(sec["age_weight"])
            if "max_weight" in sec:
                out["max_weight"] = sec.getint("max_weight")
            if "timeout" in sec:
                out["timeout"] = sec.getfloat("timeout")
            if "max_iterations" in sec:
                out["max_iterations"] = sec.getint("max_iterations")
        if cp.has_section("smart_match") and "narrowing" in cp["smart_match"]:
            out["narrowing"] = cp["smart_match"].getint("narrowing")
    except ValueError as e:
        if isinstance(e, ConfigError):
            raise
        raise ConfigError(f"{path}: {e}") from None
    return out

"""Parameter files: INI sections ``[de]``, ``[idea]`` and ``[mbh]``.

Every key is optional; missing keys keep the built-in default.  Example::

    [de]
    F = 0.9
    CR = 0.9
    strategy = best
    index_mode = allow_i1_eq_i2

    [idea]
    tol_conv = 0.25
    delta = 0.2
    iun_max = inf

    [mbh]
    delta = 0.1
    n_samples = 30
"""

import configparser
from dataclasses import asdict, fields
from functools import partial

from .de import BASELINE, DeParams, run_de
from .idea import IdeaParams, run_idea
from .mbh import DEFAULT_DELTA, GR_SAMPLES, run_mbh

SCHEMA = {
    "de": {f.name: f.type for f in fields(DeParams)},
    "idea": {"n_pop": "int", "tol_conv": "float", "delta": "float", "delta_c": "float",
             "iun_max": "float", "local_budget": "int", "max_generations": "int"},
    "mbh": {"delta": "float", "n_samples": "float", "local_budget": "int"},
    "baseline": {"n_pop": "int"},
}
ALGORITHM_NAMES = ("idea", "de", "mbh", "mbh-gr")
RUN_SECTION = "run"  # written next to results for the record; ignored on input


class ConfigError(ValueError):
    pass


def _convert(kind, text):
    if kind in ("float", float):
        return float(text)
    if kind in ("int", int):
        return int(text)
    return text


def read_params(path):
    """Parse a parameter file into ``{section: {key: value}}`` with typed values."""
    parser = configparser.ConfigParser()
    parser.optionxform = str
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except (OSError, configparser.Error) as exc:
        raise ConfigError(f"cannot read parameter file {path}: {exc}") from exc
    out = {}
    for section in parser.sections():
        if section == RUN_SECTION:
            continue
        if section not in SCHEMA:
            raise ConfigError(f"unknown section [{section}]; expected one of {sorted(SCHEMA)}")
        out[section] = {}
        for key, text in parser[section].items():
            if key not in SCHEMA[section]:
                raise ConfigError(f"unknown key {key!r} in [{section}]")
            try:
                out[section][key] = _convert(SCHEMA[section][key], text)
            except ValueError as exc:
                raise ConfigError(f"bad value for {section}.{key}: {text!r}") from exc
    return out


def build_algorithm(name, problem, params=None):
    """Return ``(callable(problem, budget, rng), resolved parameter dict)``."""
    params = params or {}
    try:
        if name == "idea":
            de = DeParams(**params.get("de", {}))
            idea = IdeaParams.for_problem(problem, de=de, **params.get("idea", {}))
            resolved = {"de": asdict(de), "idea": {k: v for k, v in asdict(idea).items()
                                                   if k != "de"}}
            return partial(run_idea, params=idea), resolved
        if name == "de":
            de = DeParams(**{**asdict(BASELINE), **params.get("de", {})})
            n_pop = params.get("baseline", {}).get("n_pop") or 5 * problem.d
            return (partial(run_de, params=de, n_pop=n_pop),
                    {"de": asdict(de), "baseline": {"n_pop": n_pop}})
        if name in ("mbh", "mbh-gr"):
            mbh = {"delta": DEFAULT_DELTA,
                   "n_samples": GR_SAMPLES if name == "mbh-gr" else float("inf"),
                   "local_budget": 0}
            mbh.update(params.get("mbh", {}))
            return (partial(run_mbh, delta=mbh["delta"], n_samples=mbh["n_samples"],
                            local_budget=mbh["local_budget"] or None, name=name),
                    {"mbh": mbh})
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    raise ConfigError(f"unknown algorithm {name!r}; choose from {list(ALGORITHM_NAMES)}")


def write_params(path, resolved):
    parser = configparser.ConfigParser()
    parser.optionxform = str
    for section, values in resolved.items():
        parser[section] = {k: str(v) for k, v in values.items()}
    with open(path, "w") as fh:
        parser.write(fh)

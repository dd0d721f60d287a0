"""JSON encoding of distributions, games, allocations and newsvendor problems.

Coalitions are keyed by ascending 1-based player lists such as ``"1,3"``.
Every decoder raises ``InvalidParameters`` naming the offending key.
"""

from __future__ import annotations

import dataclasses
import json
from typing import Any, Mapping

import numpy as np

from .coopgame import ClassicalGame, coalition_key, parse_coalition
from .distributions import FAMILIES, DiscreteUniform, Distribution
from .errors import InvalidParameters
from .newsvendor import NewsvendorProblem
from .ssdcore import Allocation, DRSignedType, DRType, RType, StochasticGame, Unstructured


def load_json(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise InvalidParameters(f"{path}: malformed JSON ({exc})") from None
    except OSError as exc:
        raise InvalidParameters(f"{path}: {exc.strerror}") from None


def dumps(obj: Any) -> str:
    """Deterministic JSON text."""
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False)


def _field(obj: Mapping, name: str, where: str):
    if not isinstance(obj, Mapping):
        raise InvalidParameters(f"{where}: expected an object")
    if name not in obj:
        raise InvalidParameters(f"{where}: missing field {name!r}")
    return obj[name]


def _number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InvalidParameters(f"{where}: expected a number, got {value!r}")
    return float(value)


def _players(obj: Mapping) -> int:
    n = _field(obj, "players", "file")
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise InvalidParameters(f"players must be a positive integer, got {n!r}")
    return n


def _coalition_map(raw, n: int, where: str) -> dict[int, Any]:
    """Decode ``{"1,2": ...}`` requiring each nonempty coalition exactly once."""
    if not isinstance(raw, Mapping):
        raise InvalidParameters(f"{where}: expected an object keyed by coalition")
    out = {}
    for key, value in raw.items():
        try:
            mask = parse_coalition(key, n)
        except InvalidParameters:
            raise InvalidParameters(f"{where}: unknown coalition key {key!r}") from None
        if mask in out:
            raise InvalidParameters(f"{where}: coalition {key!r} listed twice")
        out[mask] = value
    for mask in range(1, 1 << n):
        if mask not in out:
            raise InvalidParameters(f"{where}: missing coalition {coalition_key(mask)!r}")
    return out


# ------------------------------------------------------------- distributions


def distribution_to_dict(d: Distribution) -> dict:
    out = {"family": d.family}
    for f in dataclasses.fields(d):
        value = getattr(d, f.name)
        out[f.name] = list(value) if isinstance(value, tuple) else value
    return out


def _params(obj: Mapping, cls, where: str) -> dict:
    out = {}
    for f in dataclasses.fields(cls):
        value = _field(obj, f.name, where)
        if cls is DiscreteUniform:
            if not isinstance(value, list):
                raise InvalidParameters(f"{where}: realizations must be a list")
            out[f.name] = tuple(_number(v, where) for v in value)
        else:
            out[f.name] = _number(value, where)
    return out


def distribution_from_dict(obj: Mapping, family: str | None = None, where: str = "distribution") -> Distribution:
    """Decode ``{"family": ..., params}``; ``family`` overrides a missing field."""
    fam = obj.get("family", family) if isinstance(obj, Mapping) else None
    if fam not in FAMILIES:
        raise InvalidParameters(f"{where}: unknown family {fam!r}")
    if family is not None and fam != family:
        raise InvalidParameters(f"{where}: family {fam!r} differs from the game family {family!r}")
    cls = FAMILIES[fam]
    try:
        return cls(**_params(obj, cls, where))
    except InvalidParameters as exc:
        raise InvalidParameters(f"{where}: {exc}") from None


# --------------------------------------------------------------------- games


def game_to_dict(g: StochasticGame) -> dict:
    coalitions = {}
    for mask in range(1, 1 << g.n):
        params = distribution_to_dict(g[mask])
        del params["family"]
        coalitions[coalition_key(mask)] = params
    return {"players": g.n, "family": g.family, "coalitions": coalitions}


def game_from_dict(obj: Mapping) -> StochasticGame:
    n = _players(obj)
    family = _field(obj, "family", "file")
    raw = _coalition_map(_field(obj, "coalitions", "file"), n, "coalitions")
    dists = {
        mask: distribution_from_dict(v, family, f"coalition {coalition_key(mask)!r}")
        for mask, v in raw.items()
    }
    return StochasticGame.from_mapping(n, dists)


def classical_to_dict(g: ClassicalGame) -> dict:
    return g.to_dict()


def _values(raw, n: int, where: str) -> ClassicalGame:
    values = _coalition_map(raw, n, where)
    return ClassicalGame.from_mapping(
        n, {m: _number(v, f"{where} {coalition_key(m)!r}") for m, v in values.items()}
    )


def classical_from_dict(obj: Mapping) -> ClassicalGame:
    n = _players(obj)
    return _values(_field(obj, "values", "file"), n, "values")


def derived_to_dict(mean: ClassicalGame, lower: ClassicalGame) -> dict:
    return {
        "players": mean.n,
        "mean": mean.to_dict()["values"],
        "lower": lower.to_dict()["values"],
    }


def derived_from_dict(obj: Mapping) -> tuple[ClassicalGame, ClassicalGame]:
    """A pair of mean and lower bound games supplied directly."""
    n = _players(obj)
    return _values(_field(obj, "mean", "file"), n, "mean"), _values(
        _field(obj, "lower", "file"), n, "lower"
    )


def is_derived_file(obj: Any) -> bool:
    return isinstance(obj, Mapping) and "mean" in obj and "lower" in obj and "coalitions" not in obj


# --------------------------------------------------------------- allocations


def allocation_to_dict(alloc: Allocation) -> dict:
    if isinstance(alloc, RType):
        return {"type": "r", "r": alloc.r.tolist()}
    if isinstance(alloc, (DRType, DRSignedType)):
        return {"type": alloc.kind, "d": alloc.d.tolist(), "r": alloc.r.tolist()}
    return {"type": "unstructured", "mean": alloc.mean.tolist(), "cov": alloc.cov.tolist()}


def _vec(obj, name: str) -> list[float]:
    raw = _field(obj, name, "allocation")
    if not isinstance(raw, list):
        raise InvalidParameters(f"allocation: {name} must be a list")
    return [_number(v, f"allocation {name}") for v in raw]


def allocation_from_dict(obj: Mapping) -> Allocation:
    kind = _field(obj, "type", "allocation")
    if kind == "r":
        return RType(_vec(obj, "r"))
    if kind == "dr":
        return DRType(_vec(obj, "d"), _vec(obj, "r"))
    if kind == "dr-signed":
        return DRSignedType(_vec(obj, "d"), _vec(obj, "r"))
    if kind == "unstructured":
        cov = _field(obj, "cov", "allocation")
        if not isinstance(cov, list) or not all(isinstance(row, list) for row in cov):
            raise InvalidParameters("allocation: cov must be a list of rows")
        rows = [[_number(v, "allocation cov") for v in row] for row in cov]
        if len({len(r) for r in rows}) > 1:
            raise InvalidParameters("allocation: cov rows differ in length")
        return Unstructured(_vec(obj, "mean"), np.array(rows, dtype=float))
    raise InvalidParameters(f"allocation: unknown type {kind!r}")


# ---------------------------------------------------------------- newsvendor


def newsvendor_to_dict(prob: NewsvendorProblem) -> dict:
    return {
        "players": prob.n,
        "p": prob.p,
        "c": prob.c,
        "demand": {
            coalition_key(m): {"a": prob.demand[m][0], "b": prob.demand[m][1]}
            for m in range(1, 1 << prob.n)
        },
    }


def newsvendor_from_dict(obj: Mapping) -> NewsvendorProblem:
    n = _players(obj)
    p = _number(_field(obj, "p", "file"), "p")
    c = _number(_field(obj, "c", "file"), "c")
    raw = _coalition_map(_field(obj, "demand", "file"), n, "demand")
    demand = {}
    for mask, v in raw.items():
        where = f"demand {coalition_key(mask)!r}"
        demand[mask] = (_number(_field(v, "a", where), where), _number(_field(v, "b", where), where))
    return NewsvendorProblem.from_mapping(n, demand, c, p)

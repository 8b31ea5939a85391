"""Reading and writing algebra files (YAML or JSON)."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import numpy as np
import yaml

from .algebra import AlgebraError, InvolutiveAlgebra, OrderedAlgebra
from .constructions import from_pointed_brouwerian, with_lattice_flag
from .order import PosetError, from_cover_pairs

FIELDS = ("name", "elements", "leq", "mul", "one", "add", "zero", "comp", "lattice")


class AlgebraFileError(ValueError):
    pass


def _name(v: Any) -> str:
    if isinstance(v, bool):
        raise AlgebraFileError(f"element names must be quoted, got {v!r}")
    return str(v)


def algebra_from_dict(doc: dict) -> OrderedAlgebra:
    if not isinstance(doc, dict):
        raise AlgebraFileError("document must be a mapping")
    unknown = sorted(set(doc) - set(FIELDS))
    if unknown:
        raise AlgebraFileError(f"unknown fields: {', '.join(map(str, unknown))}")
    if "elements" not in doc:
        raise AlgebraFileError("missing field 'elements'")
    names = [_name(e) for e in doc["elements"] or []]
    if len(set(names)) != len(names):
        raise AlgebraFileError("element names must be distinct")
    pos = {s: i for i, s in enumerate(names)}
    n = len(names)

    def elem(v, where: str) -> int:
        s = _name(v)
        if s not in pos:
            raise AlgebraFileError(f"{where}: unknown element {s!r}")
        return pos[s]

    covers = []
    for k, pair in enumerate(doc.get("leq") or []):
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise AlgebraFileError(f"leq[{k}] must be a pair")
        covers.append((elem(pair[0], f"leq[{k}]"), elem(pair[1], f"leq[{k}]")))
    try:
        poset = from_cover_pairs(n, covers, names)
    except PosetError as exc:
        raise AlgebraFileError(f"leq: {exc}") from None

    def table(v, where: str):
        if not isinstance(v, list) or len(v) != n or any(not isinstance(r, list) or len(r) != n for r in v):
            raise AlgebraFileError(f"{where} must be a {n}x{n} table")
        return np.array([[elem(x, f"{where}[{i}][{j}]") for j, x in enumerate(r)]
                         for i, r in enumerate(v)], dtype=np.int64)

    def lattice_op(kind: str, where: str):
        t = poset.meet_table if kind == "meet" else poset.join_table
        if (t < 0).any():
            raise AlgebraFileError(f"{where}: the order has no binary {kind}s")
        return t

    mul = doc.get("mul")
    if mul is None:
        mul_t = None
    elif mul == "meet":
        mul_t = lattice_op("meet", "mul")
    else:
        mul_t = table(mul, "mul")
    one = elem(doc["one"], "one") if doc.get("one") is not None else None
    zero = elem(doc["zero"], "zero") if doc.get("zero") is not None else None
    add = doc.get("add")
    name = str(doc.get("name") or "")
    if add == "pbr":
        if zero is None:
            raise AlgebraFileError("add: 'pbr' needs a zero")
        if mul != "meet":
            raise AlgebraFileError("add: 'pbr' needs mul: meet")
        base = OrderedAlgebra(poset, mul_t, poset.top, name=name)
        try:
            add_t = from_pointed_brouwerian(base, zero).add
        except AlgebraError as exc:
            raise AlgebraFileError(f"add: {exc}") from None
        if one is None:
            one = poset.top
    elif add in ("join", "meet"):
        add_t = lattice_op(add, "add")
    elif add == "mul":
        if mul_t is None:
            raise AlgebraFileError("add: 'mul' needs a multiplication")
        add_t = mul_t
    elif add is None:
        add_t = None
    else:
        add_t = table(add, "add")
    try:
        alg = OrderedAlgebra(poset, mul_t, one, add_t, zero, lattice=bool(doc.get("lattice", False)),
                             name=name)
    except AlgebraError as exc:
        raise AlgebraFileError(str(exc)) from None
    if "lattice" not in doc and alg.mul is not None and alg.add is not None:
        alg = with_lattice_flag(alg)
    if doc.get("comp") is not None:
        comp = doc["comp"]
        if not isinstance(comp, list) or len(comp) != n:
            raise AlgebraFileError(f"comp must list {n} elements")
        alg = InvolutiveAlgebra.from_base(alg, [elem(c, f"comp[{i}]") for i, c in enumerate(comp)])
    return alg


def loads(text: str) -> OrderedAlgebra:
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise AlgebraFileError(f"cannot parse: {exc}") from None
    return algebra_from_dict(doc)


def load(path: str | Path) -> OrderedAlgebra:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise AlgebraFileError(f"cannot read {path}: {exc.strerror}") from None
    alg = loads(text)
    if not alg.name:
        alg.name = p.stem
    return alg


def algebra_to_dict(alg: OrderedAlgebra) -> dict:
    lab = alg.label

    def tab(t):
        return [[lab(int(v)) for v in row] for row in t]

    doc: dict[str, Any] = {"name": alg.name, "elements": [lab(i) for i in range(alg.n)],
                           "leq": [[lab(x), lab(y)] for x, y in alg.poset.covers()]}
    if alg.mul is not None:
        doc["mul"] = tab(alg.mul)
    if alg.one is not None:
        doc["one"] = lab(alg.one)
    if alg.add is not None:
        doc["add"] = tab(alg.add)
    if alg.zero is not None:
        doc["zero"] = lab(alg.zero)
    if isinstance(alg, InvolutiveAlgebra):
        doc["comp"] = [lab(int(c)) for c in alg.comp]
    doc["lattice"] = alg.lattice
    return doc


def dumps_json(alg: OrderedAlgebra) -> str:
    return json.dumps(algebra_to_dict(alg), indent=2, ensure_ascii=False) + "\n"


def dumps_yaml(alg: OrderedAlgebra) -> str:
    return yaml.safe_dump(algebra_to_dict(alg), sort_keys=False, allow_unicode=True)

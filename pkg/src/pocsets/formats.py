"""File formats and shipped fixtures.

Two document kinds, both JSON:

* poc-set: ``{"pairs": n, "order": [["h2", "h1"], ...]}`` where ``hK`` /
  ``hK*`` name pair K and the trivial pair is implicit;
* chain family: ``{"chains": ["r", "s", "t"], "geometry": [...] | null}``
  with per-chain geometry ``{"normal": ["0", "1"], "spacing": "1",
  "offset": "0"}`` in exact literals.

Every structured output of the CLI that has a loader round-trips through
these functions.
"""

from __future__ import annotations

import json
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Union

from .chains import ChainFamily
from .core import FinitePocSet
from .errors import MalformedInput
from .euclid import WallFamily, WallModel
from .exactnum import parse_exact

FIXTURE_NAMES = (
    "FIX-LINE3",
    "FIX-SQ",
    "FIX-TRIPOD",
    "FIX-Z1",
    "FIX-Z2",
    "FIX-Z3",
    "FIX-Z4",
    "FIX-HEX",
)


def _fixture_text(name: str) -> str:
    return (
        resources.files("pocsets").joinpath(f"fixtures/{name}.json").read_text()
    )


def load_document(source: Union[str, Path]) -> dict:
    """Read a JSON document from a path or a fixture name."""
    text = None
    path = Path(source)
    if path.exists():
        text = path.read_text()
    else:
        name = str(source)
        if name in FIXTURE_NAMES:
            text = _fixture_text(name)
        elif name.startswith("fixtures/") and name[len("fixtures/"):] in FIXTURE_NAMES:
            text = _fixture_text(name[len("fixtures/"):])
    if text is None:
        raise MalformedInput(f"no such file or fixture: {source}", str(source))
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"invalid JSON in {source}: {exc}", str(source)) from exc
    if not isinstance(doc, dict):
        raise MalformedInput("document must be a JSON object", str(source))
    return doc


# ---------------------------------------------------------------------------
# poc-sets


def pocset_from_document(doc: dict) -> FinitePocSet:
    try:
        pairs = int(doc["pairs"])
        order = doc.get("order", [])
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedInput(f"bad poc-set document: {exc}", doc) from exc
    probe = FinitePocSet.from_order_generators(pairs, [])
    edges = []
    for entry in order:
        if len(entry) != 2:
            raise MalformedInput(f"order edges are pairs, got {entry!r}", entry)
        a, b = entry
        edges.append((probe.handle(str(a)), probe.handle(str(b))))
    return FinitePocSet.from_order_generators(pairs, edges)


def pocset_to_document(p: FinitePocSet) -> dict:
    edges = []
    for a in p.proper_elements():
        for b in p.proper_elements():
            if a != b and p.leq(a, b):
                edges.append([p.name(a), p.name(b)])
    return {"pairs": p.n_pairs, "order": edges}


def load_pocset(source: Union[str, Path]) -> FinitePocSet:
    return pocset_from_document(load_document(source))


# ---------------------------------------------------------------------------
# chain families and wall models


def chain_family_from_document(doc: dict) -> tuple[ChainFamily, Union[WallModel, None]]:
    try:
        names = tuple(str(n) for n in doc["chains"])
    except (KeyError, TypeError) as exc:
        raise MalformedInput(f"bad chain-family document: {exc}", doc) from exc
    if len(set(names)) != len(names):
        raise MalformedInput("chain names must be distinct", names)
    family = ChainFamily(names)
    geometry = doc.get("geometry")
    if geometry is None:
        return family, None
    if len(geometry) != len(names):
        raise MalformedInput("geometry must list one entry per chain", geometry)
    walls = []
    for entry in geometry:
        normal = entry["normal"]
        walls.append(
            WallFamily(
                (parse_exact(str(normal[0])), parse_exact(str(normal[1]))),
                Fraction(str(entry.get("spacing", "1"))),
                Fraction(str(entry.get("offset", "0"))),
            )
        )
    return family, WallModel(family, tuple(walls))


def chain_family_to_document(family: ChainFamily, model: Union[WallModel, None]) -> dict:
    doc: dict = {"chains": list(family.names)}
    if model is None:
        doc["geometry"] = None
    else:
        doc["geometry"] = [
            {
                "normal": [str(f.normal[0]), str(f.normal[1])],
                "spacing": str(f.spacing),
                "offset": str(f.offset),
            }
            for f in model.families
        ]
    return doc


def load_chain_family(source: Union[str, Path]) -> tuple[ChainFamily, Union[WallModel, None]]:
    return chain_family_from_document(load_document(source))


def load_wall_model(source: Union[str, Path]) -> WallModel:
    _, model = load_chain_family(source)
    if model is None:
        raise MalformedInput(f"{source} carries no wall geometry", str(source))
    return model


def document_kind(doc: dict) -> str:
    if "pairs" in doc:
        return "pocset"
    if "chains" in doc:
        return "chain-family"
    raise MalformedInput("unrecognized document (need 'pairs' or 'chains')", doc)


# ---------------------------------------------------------------------------
# fixture shortcuts


def fixture_pocset(name: str) -> FinitePocSet:
    return load_pocset(name)


def fixture_model(name: str) -> WallModel:
    return load_wall_model(name)

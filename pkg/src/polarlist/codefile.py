"""CodeSpec JSON files: 1-based indices, sorted keys, canonical layout."""
from __future__ import annotations

import json

import numpy as np

from .construct.codespec import DYNAMIC, FROZEN, INFO, KIND_NAMES, CodeSpec
from .errors import InvalidArgument

FORMAT_VERSION = 1
_KIND_CODES = {v: k for k, v in KIND_NAMES.items()}


def _plain(x):
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, np.generic):
        return x.item()
    return x


def to_dict(code: CodeSpec) -> dict:
    positions = []
    for p in range(code.n):
        kind = int(code.kinds[p])
        entry = {"index": p + 1, "kind": KIND_NAMES[kind]}
        if kind == DYNAMIC:
            entry["sources"] = [s + 1 for s in code.sources[p]]
        positions.append(entry)
    return {
        "version": FORMAT_VERSION,
        "n": code.n,
        "k": code.k,
        "design_snr_db": float(code.design_snr_db),
        "family": {"name": code.family, "params": _plain(dict(code.params))},
        "positions": positions,
    }


def dumps(code: CodeSpec) -> str:
    return json.dumps(to_dict(code), sort_keys=True, indent=2) + "\n"


def from_dict(doc: dict) -> CodeSpec:
    try:
        if doc.get("version") != FORMAT_VERSION:
            raise InvalidArgument(f"unsupported code file version {doc.get('version')!r}")
        n = int(doc["n"])
        kinds = np.full(n, -1, dtype=np.int8)
        sources = {}
        for e in doc["positions"]:
            p = int(e["index"]) - 1
            if not 0 <= p < n or kinds[p] != -1:
                raise InvalidArgument(f"bad or repeated position index {e['index']}")
            kind = _KIND_CODES.get(e["kind"])
            if kind is None:
                raise InvalidArgument(f"unknown position kind {e['kind']!r}")
            kinds[p] = kind
            if kind == DYNAMIC:
                sources[p] = tuple(int(s) - 1 for s in e.get("sources", ()))
            elif e.get("sources"):
                raise InvalidArgument(f"position {p + 1} is {e['kind']} but lists sources")
        if (kinds < 0).any():
            raise InvalidArgument("positions must cover every index 1..n")
        fam = doc.get("family", {})
        code = CodeSpec(
            n=n,
            kinds=kinds,
            sources=sources,
            design_snr_db=float(doc["design_snr_db"]),
            family=fam.get("name", "polar"),
            params=fam.get("params", {}),
        )
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InvalidArgument):
            raise
        raise InvalidArgument(f"malformed code file: {exc}") from exc
    if "k" in doc and int(doc["k"]) != code.k:
        raise InvalidArgument(f"file says k={doc['k']} but lists {code.k} info positions")
    return code


def loads(text: str) -> CodeSpec:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidArgument(f"code file is not valid JSON: {exc}") from exc
    return from_dict(doc)


def save(code: CodeSpec, path) -> None:
    with open(path, "w") as fh:
        fh.write(dumps(code))


def load(path) -> CodeSpec:
    with open(path) as fh:
        return loads(fh.read())


__all__ = ["FORMAT_VERSION", "to_dict", "from_dict", "dumps", "loads", "save", "load", "INFO", "FROZEN", "DYNAMIC"]

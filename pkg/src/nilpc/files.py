"""JSON files for presentations and homomorphism maps.

A presentation file holds name, rank, the period list (0 encodes an
infinite period), and the sparse power and commutator tails.  Parsing
validates the schema, rebuilds the presentation (which enforces the
support and range rules), and by default also runs the consistency
check.  Emission is deterministic: tails sorted by index, keys in
numeric order, fixed indentation.
"""

import json
from importlib import resources
from typing import List, Optional, Tuple

from . import presentation as pc
from .presentation import PcPresentation, PresentationError


class FileFormatError(ValueError):
    pass


def presentation_to_dict(p: PcPresentation) -> dict:
    powers = {
        str(i): [[k, e] for k, e in tail]
        for i, tail in sorted(p.powers)}
    commutators = {
        f"{j},{i}": [[k, e] for k, e in tail]
        for (j, i), tail in sorted(p.commutators)}
    return {
        "name": p.name,
        "rank": p.m,
        "periods": [0 if e is None else e for e in p.periods],
        "powers": powers,
        "commutators": commutators,
    }


def emit(p: PcPresentation) -> str:
    d = presentation_to_dict(p)
    lines = ["{"]
    lines.append(f'  "name": {json.dumps(d["name"])},')
    lines.append(f'  "rank": {d["rank"]},')
    lines.append(f'  "periods": {json.dumps(d["periods"])},')

    def block(key: str, mapping: dict, last: bool) -> None:
        tail = "" if last else ","
        if not mapping:
            lines.append(f'  "{key}": {{}}{tail}')
            return
        lines.append(f'  "{key}": {{')
        items = list(mapping.items())
        for pos, (k, v) in enumerate(items):
            comma = "" if pos == len(items) - 1 else ","
            lines.append(f'    {json.dumps(k)}: {json.dumps(v)}{comma}')
        lines.append(f'  }}{tail}')

    block("powers", d["powers"], last=False)
    block("commutators", d["commutators"], last=True)
    lines.append("}")
    return "\n".join(lines) + "\n"


def _tail(raw, where: str) -> Tuple[Tuple[int, int], ...]:
    if not isinstance(raw, list):
        raise FileFormatError(f"{where}: tail must be an array")
    out = []
    for pair in raw:
        if (not isinstance(pair, list) or len(pair) != 2
                or not all(isinstance(v, int) for v in pair)):
            raise FileFormatError(
                f"{where}: tail entries must be [index, exponent] pairs")
        out.append((pair[0], pair[1]))
    return tuple(out)


def presentation_from_dict(d: dict, *, check: bool = True) -> PcPresentation:
    if not isinstance(d, dict):
        raise FileFormatError("top level must be an object")
    for key in ("name", "rank", "periods", "powers", "commutators"):
        if key not in d:
            raise FileFormatError(f"missing field {key!r}")
    name, rank = d["name"], d["rank"]
    if not isinstance(name, str):
        raise FileFormatError("name must be a string")
    if not isinstance(rank, int) or rank < 0:
        raise FileFormatError("rank must be a non-negative integer")
    raw_periods = d["periods"]
    if (not isinstance(raw_periods, list) or len(raw_periods) != rank
            or not all(isinstance(e, int) for e in raw_periods)):
        raise FileFormatError(f"periods must be an array of {rank} integers")
    periods: List[Optional[int]] = [None if e == 0 else e
                                    for e in raw_periods]

    if not isinstance(d["powers"], dict):
        raise FileFormatError("powers must be an object")
    powers = []
    for key, raw in d["powers"].items():
        try:
            i = int(key)
        except ValueError:
            raise FileFormatError(f"powers key {key!r} is not an index")
        powers.append((i, _tail(raw, f"powers[{key}]")))
    powers.sort()

    if not isinstance(d["commutators"], dict):
        raise FileFormatError("commutators must be an object")
    commutators = []
    for key, raw in d["commutators"].items():
        parts = key.split(",")
        try:
            j, i = (int(v) for v in parts)
        except ValueError:
            raise FileFormatError(
                f"commutators key {key!r} is not of the form \"j,i\"")
        if not i < j:
            raise FileFormatError(
                f"commutators key {key!r} must have i < j")
        commutators.append(((j, i), _tail(raw, f"commutators[{key}]")))
    commutators.sort()

    p = PcPresentation(
        name=name, periods=tuple(periods),
        powers=tuple(powers), commutators=tuple(commutators))
    if check:
        report = pc.consistency_check(p)
        if not report.ok:
            f = report.failures[0]
            raise PresentationError(
                f"{name}: inconsistent presentation, first failing overlap "
                f"kind={f.kind} at (j={f.j}, i={f.i}, k={f.k})")
    return p


def parse(text: str, *, check: bool = True) -> PcPresentation:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FileFormatError(
            f"not valid JSON (line {exc.lineno}, column {exc.colno})")
    return presentation_from_dict(d, check=check)


def load(path: str, *, check: bool = True) -> PcPresentation:
    with open(path, "r", encoding="utf-8") as fh:
        return parse(fh.read(), check=check)


def save(p: PcPresentation, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(emit(p))


def fixture_names() -> Tuple[str, ...]:
    root = resources.files("nilpc") / "fixtures"
    return tuple(sorted(
        entry.name[:-5] for entry in root.iterdir()
        if entry.name.endswith(".json")))


def load_fixture(name: str, *, check: bool = True) -> PcPresentation:
    path = resources.files("nilpc") / "fixtures" / f"{name}.json"
    if not path.is_file():
        raise FileFormatError(f"no fixture named {name!r}")
    return parse(path.read_text(encoding="utf-8"), check=check)


def parse_hom_map(text: str, m: int) -> Tuple[pc.Word, ...]:
    """A map file is an array of m sparse image words."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FileFormatError(
            f"not valid JSON (line {exc.lineno}, column {exc.colno})")
    if not isinstance(raw, list) or len(raw) != m:
        raise FileFormatError(f"map file must hold exactly {m} image words")
    return tuple(_tail(word, f"image {i + 1}")
                 for i, word in enumerate(raw))


def emit_hom_map(words) -> str:
    return json.dumps([[list(pair) for pair in word]
                       for word in words], indent=2) + "\n"

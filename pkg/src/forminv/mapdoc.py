"""Map documents: the JSON wire format for polynomial maps.

One document describes one self-map as exact data:

    {"n": 1,
     "vars": ["z"],
     "D": 8,
     "components": [[{"exp": [1], "c": "1"}, {"exp": [2], "c": "-1"}]],
     "metadata": {}}

Coefficients are rational strings ("p/q" or "p"), never floats; exponents
are integer arrays.  The listed terms are the whole polynomial; ``D`` is
the document's default working degree for inversion commands and an upper
bound on the degree of the listed terms.  Serialization is canonical
(fixed key order, graded-lexicographic term order, compact separators), so
serialize(parse(serialize(x))) is byte-identical to serialize(x).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from .errors import MapFormatError
from .rat import rat_from_str, rat_to_str
from .series import INF, MapF, MSeries, PolyMap, default_names


@dataclass
class MapDocument:
    n: int
    degree: int
    components: list  # list (per component) of list of (exp tuple, Rat)
    names: list[str] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.names:
            self.names = default_names(self.n)

    def to_polymap(self) -> PolyMap:
        """The exact polynomial map described by the document."""
        comps = []
        for terms in self.components:
            comps.append(MSeries(self.n, INF, {e: c for e, c in terms}))
        return PolyMap(comps)

    def to_mapf(self) -> MapF:
        try:
            return MapF.from_map(self.to_polymap())
        except Exception as exc:
            raise MapFormatError(f"document is not a canonical map: {exc}") from exc


def parse_map(text: str) -> MapDocument:
    """Parse and validate a map document; raises MapFormatError with the
    offending location on bad syntax or invariant violations."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MapFormatError(
            f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(raw, dict):
        raise MapFormatError("document must be a JSON object")
    try:
        n = int(raw["n"])
        degree = int(raw["D"])
        comps_raw = raw["components"]
    except KeyError as exc:
        raise MapFormatError(f"missing required field {exc.args[0]!r}") from exc
    except (TypeError, ValueError) as exc:
        raise MapFormatError(f"bad scalar field: {exc}") from exc
    if n < 1:
        raise MapFormatError(f"n must be >= 1, got {n}")
    if degree < 1:
        raise MapFormatError(f"D must be >= 1, got {degree}")
    if not isinstance(comps_raw, list) or len(comps_raw) != n:
        raise MapFormatError(
            f"components must be a list of exactly n={n} term lists"
        )
    names = raw.get("vars") or default_names(n)
    if len(names) != n or len(set(names)) != n:
        raise MapFormatError("vars must be n distinct names")
    components = []
    for ci, terms_raw in enumerate(comps_raw):
        seen = {}
        for ti, term in enumerate(terms_raw):
            where = f"component {ci + 1}, term {ti + 1}"
            try:
                exp = tuple(int(k) for k in term["exp"])
                coeff = rat_from_str(str(term["c"]))
            except (KeyError, TypeError, ValueError) as exc:
                raise MapFormatError(f"{where}: {exc}") from exc
            if len(exp) != n:
                raise MapFormatError(
                    f"{where}: exponent has {len(exp)} entries, expected {n}"
                )
            if any(k < 0 for k in exp):
                raise MapFormatError(f"{where}: negative exponent {exp}")
            if sum(exp) > degree:
                raise MapFormatError(
                    f"{where}: degree {sum(exp)} exceeds document bound D={degree}"
                )
            prev = seen.get(exp)
            coeff = coeff if prev is None else prev + coeff
            seen[exp] = coeff
        components.append([(e, c) for e, c in seen.items() if c])
    return MapDocument(
        n=n,
        degree=degree,
        components=components,
        names=list(names),
        metadata=dict(raw.get("metadata") or {}),
    )


def document_from_polymap(
    m: PolyMap, degree: int, names: Optional[list] = None, metadata: Optional[dict] = None
) -> MapDocument:
    comps = [list(c.terms.items()) for c in m.components]
    return MapDocument(
        n=m.n,
        degree=degree,
        components=comps,
        names=list(names) if names else [],
        metadata=dict(metadata or {}),
    )


def serialize_map(doc: MapDocument) -> str:
    """Canonical single-line JSON: fixed key order, graded-lex terms."""
    payload = {
        "n": doc.n,
        "vars": list(doc.names),
        "D": doc.degree,
        "components": [
            [
                {"exp": list(e), "c": rat_to_str(c)}
                for e, c in sorted(terms, key=lambda t: (sum(t[0]), t[0]))
            ]
            for terms in doc.components
        ],
    }
    if doc.metadata:
        payload["metadata"] = doc.metadata
    return json.dumps(payload, separators=(",", ":"), sort_keys=False)


def serialize_polymap(m: PolyMap, degree: int) -> str:
    return serialize_map(document_from_polymap(m, degree))

"""JSON instance files.

A file holds a coefficient ring, named plain modules, named maps and families
(sparse entries with decimal-string coefficients) and named structures that
reference them.  ``dumps`` writes keys in sorted order and entries sorted, so
equal inputs give identical bytes.

Labels are encoded recursively: strings and integers as themselves, tuples as
lists.  A map entry is ``[source factor labels, target factor labels, coef]``
where the unit module has no factors.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path

from .barcobar import TwistingCochain
from .chcoalg import CCoalgElement, CHCMorphism, CurvedHomotopyCoalgebraData
from .curved import (
    AssociativeAlgebra,
    Coalgebra,
    CurvedAlgebraData,
    CurvedAlgMorphism,
    CurvedCoalgebraData,
    CurvedCoalgMorphism,
)
from .gradedcore import (
    BigradedModule,
    CoeffRing,
    GradedMap,
    Integers,
    PrimeField,
    StructuralError,
    as_parts,
    from_parts,
    tensor_modules,
)
from .tensorcoalg import ComponentFamily

__all__ = ["SCHEMA", "InstanceError", "Instance", "dumps", "loads", "save", "load", "KINDS", "same_structure"]

SCHEMA = "curvedcoalg-instance/1"


class InstanceError(ValueError):
    """Malformed or inconsistent instance file; ``line`` points into the text when known."""

    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")


# ---------------------------------------------------------------- structure kinds

# kind -> (class, fields that are maps, fields that are families, fields that are structures)
KINDS = {
    "curved_algebra": (CurvedAlgebraData, ("m2", "m1", "m0", "eta", "v"), (), ()),
    "curved_coalgebra": (CurvedCoalgebraData, ("delta2", "delta1", "delta0", "eps", "w"), (), ()),
    "curved_homotopy_coalgebra": (CurvedHomotopyCoalgebraData, (), ("delta1", "delta0"), ()),
    "associative_algebra": (AssociativeAlgebra, ("m2", "eta"), (), ()),
    "coalgebra": (Coalgebra, ("delta2", "eps"), (), ()),
    "curved_algebra_morphism": (CurvedAlgMorphism, ("f1", "f0"), (), ("source", "target")),
    "curved_coalgebra_morphism": (CurvedCoalgMorphism, ("g1", "g0"), (), ("source", "target")),
    "chc_morphism": (CHCMorphism, (), ("g1", "g0"), ("source", "target")),
    "ccoalg_element": (CCoalgElement, ("g1_check", "g0"), (), ("source", "target")),
    "twisting_cochain": (TwistingCochain, ("theta",), (), ("source", "target")),
}

_CARRIER_KINDS = {"curved_algebra", "curved_coalgebra", "curved_homotopy_coalgebra", "associative_algebra", "coalgebra"}


def kind_of(obj) -> str:
    # subclasses (cobar, bar) are saved as their base kind
    for kind, (cls, *_rest) in KINDS.items():
        if type(obj) is cls:
            return kind
    for kind, (cls, *_rest) in KINDS.items():
        if isinstance(obj, cls):
            return kind
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def same_structure(a, b) -> bool:
    """Equality of the serialized content (construction metadata of subclasses is ignored)."""
    kind = kind_of(a)
    if kind != kind_of(b):
        return False
    _cls, map_fields, fam_fields, ref_fields = KINDS[kind]
    if kind in _CARRIER_KINDS and not (a.carrier == b.carrier and a.ring == b.ring):
        return False
    if kind == "curved_algebra" and a.trusted_length != b.trusted_length:
        return False
    if kind == "curved_homotopy_coalgebra" and a.weight_cap != b.weight_cap:
        return False
    if any(not same_structure(getattr(a, f), getattr(b, f)) for f in ref_fields):
        return False
    return all(getattr(a, f) == getattr(b, f) for f in map_fields + fam_fields)


# ---------------------------------------------------------------- labels and rings


def _enc_label(l):
    if isinstance(l, tuple):
        return [_enc_label(x) for x in l]
    if isinstance(l, bool) or not isinstance(l, (str, int)):
        raise TypeError(f"label {l!r} is not serializable")
    return l


def _dec_label(x):
    if isinstance(x, list):
        return tuple(_dec_label(y) for y in x)
    if isinstance(x, bool) or not isinstance(x, (str, int)):
        raise InstanceError(f"bad label {x!r}")
    return x


def _enc_ring(R: CoeffRing) -> str:
    return "ZZ" if R.p is None else f"Z/{R.p}"


def _dec_ring(s) -> CoeffRing:
    if s == "ZZ":
        return Integers()
    m = re.fullmatch(r"Z/(\d+)", str(s))
    if not m:
        raise InstanceError(f"unknown ring {s!r} (expected 'ZZ' or 'Z/p')")
    try:
        return PrimeField(int(m.group(1)))
    except ValueError as exc:
        raise InstanceError(str(exc)) from None


def _dec_coef(s) -> int:
    if not isinstance(s, str) or not re.fullmatch(r"-?\d+", s):
        raise InstanceError(f"coefficient {s!r} is not a decimal string")
    return int(s)


# ---------------------------------------------------------------- writer


class _Writer:
    def __init__(self) -> None:
        self.modules: list[tuple[_ModRef, BigradedModule]] = []
        self.maps: dict = {}
        self.families: dict = {}
        self.structures: dict = {}
        self.names: dict[int, str] = {}
        self.reserved: set = set()
        self.ring: CoeffRing | None = None

    def module_name(self, M: BigradedModule) -> "_ModRef":
        for name, N in self.modules:
            if N == M and N.labels == M.labels:
                return name
        name = _ModRef(len(self.modules))
        self.modules.append((name, M))
        return name

    def space(self, M: BigradedModule) -> dict:
        return {"factors": [self.module_name(f) for f in M.factors], "cap": M.weight_cap}

    def graded_map(self, f: GradedMap) -> dict:
        if self.ring is None:
            self.ring = f.ring
        elif f.ring != self.ring:
            raise TypeError("all maps in one file must share a ring")
        ks, kt = f.source.nfactors, f.target.nfactors
        entries = []
        for s in f.source.labels:
            for t, c in f.row(s).items():
                entries.append([
                    [_enc_label(x) for x in as_parts(s, ks)],
                    [_enc_label(x) for x in as_parts(t, kt)],
                    str(c),
                ])
        entries.sort(key=lambda e: json.dumps(e[:2], sort_keys=True))
        return {
            "source": self.space(f.source),
            "target": self.space(f.target),
            "degree": f.degree,
            "entries": entries,
        }

    def family(self, F: ComponentFamily) -> dict:
        return {
            "source": self.module_name(F.source),
            "target": self.space(F.target),
            "degree": F.degree,
            "support_bound": F.K,
            "weight_cap": F.weight_cap,
            "components": {str(k): self.graded_map(F.components[k]) for k in sorted(F.components)},
        }

    def add(self, obj, name: str | None = None) -> str:
        if name is None and id(obj) in self.names:
            return self.names[id(obj)]
        kind = kind_of(obj)
        if name is None:
            i = len(self.structures)
            while f"S{i}" in self.structures or f"S{i}" in self.reserved:
                i += 1
            name = f"S{i}"
        self.names.setdefault(id(obj), name)
        _cls, map_fields, fam_fields, ref_fields = KINDS[kind]
        entry: dict = {"kind": kind}
        self.structures[name] = entry
        if self.ring is None and hasattr(obj, "ring"):
            self.ring = obj.ring
        for f in ref_fields:
            entry[f] = self.add(getattr(obj, f))
        if kind in _CARRIER_KINDS:
            entry["carrier"] = self.module_name(obj.carrier)
        for f in map_fields:
            m = getattr(obj, f)
            if m is not None:
                key = f"{name}.{f}"
                self.maps[key] = self.graded_map(m)
                entry[f] = key
        for f in fam_fields:
            key = f"{name}.{f}"
            self.families[key] = self.family(getattr(obj, f))
            entry[f] = key
        if kind == "curved_algebra" and obj.trusted_length is not None:
            entry["trusted_length"] = obj.trusted_length
        if kind == "curved_homotopy_coalgebra" and obj.weight_cap is not None:
            entry["weight_cap"] = obj.weight_cap
        return name


@dataclass(frozen=True)
class _ModRef:
    """Placeholder module name, replaced by a content-ordered name on output."""

    index: int


def _resolve(x, names: dict):
    if isinstance(x, _ModRef):
        return names[x.index]
    if isinstance(x, dict):
        return {k: _resolve(v, names) for k, v in x.items()}
    if isinstance(x, list):
        return [_resolve(v, names) for v in x]
    return x


@dataclass
class Instance:
    ring: CoeffRing
    structures: dict = field(default_factory=dict)
    weight_cap: int | None = None
    bounds: dict = field(default_factory=dict)


def dumps(items, *, weight_cap: int | None = None, bounds: dict | None = None, ring: CoeffRing | None = None) -> str:
    """Serialize ``{name: structure}`` (referenced structures are added as needed)."""
    if isinstance(items, Instance):
        weight_cap = items.weight_cap if weight_cap is None else weight_cap
        bounds = items.bounds if bounds is None else bounds
        ring = items.ring if ring is None else ring
        items = items.structures
    w = _Writer()
    w.ring = ring
    w.reserved = set(items)
    for name in sorted(items):
        w.names.setdefault(id(items[name]), name)
    for name in sorted(items):
        w.add(items[name], name)
    if w.ring is None:
        raise TypeError("cannot infer the coefficient ring of an empty instance")
    encoded = [json.dumps([[_enc_label(l), *M.degree_of(l)] for l in M.labels]) for _, M in w.modules]
    order = sorted(range(len(encoded)), key=lambda i: (len(encoded[i]), encoded[i]))
    names = {i: f"M{rank}" for rank, i in enumerate(order)}
    doc = {
        "schema": SCHEMA,
        "ring": _enc_ring(w.ring),
        "weight_cap": weight_cap,
        "bounds": dict(bounds or {}),
        "modules": {names[ref.index]: json.loads(encoded[ref.index]) for ref, _ in w.modules},
        "maps": _resolve(w.maps, names),
        "families": _resolve(w.families, names),
        "structures": _resolve(w.structures, names),
    }
    return json.dumps(doc, sort_keys=True, indent=1) + "\n"


def save(items, path, **kw) -> None:
    Path(path).write_text(dumps(items, **kw))


# ---------------------------------------------------------------- reader


def _line_of(text: str, key: str) -> int | None:
    m = re.search(r'"' + re.escape(key) + r'"\s*:', text)
    return None if m is None else text.count("\n", 0, m.start()) + 1


class _Reader:
    def __init__(self, text: str, doc: dict) -> None:
        self.text = text
        self.doc = doc
        self.ring = _dec_ring(doc.get("ring"))
        self.modules: dict = {}
        self.maps: dict = {}
        self.families: dict = {}
        self.structures: dict = {}
        self._loading: set = set()

    def fail(self, key: str, msg: str):
        raise InstanceError(f"{key}: {msg}", _line_of(self.text, key))

    def _section(self, name: str) -> dict:
        sec = self.doc.get(name, {})
        if not isinstance(sec, dict):
            self.fail(name, "must be an object")
        return sec

    def module(self, name) -> BigradedModule:
        if name in self.modules:
            return self.modules[name]
        desc = self._section("modules").get(name)
        if desc is None:
            raise InstanceError(f"unknown module {name!r}")
        try:
            M = BigradedModule((_dec_label(l), (int(z), int(w))) for l, z, w in desc)
        except (TypeError, ValueError) as exc:
            self.fail(name, f"bad module: {exc}")
        self.modules[name] = M
        return M

    def space(self, desc, where: str) -> BigradedModule:
        try:
            facs = [self.module(n) for n in desc["factors"]]
            return tensor_modules(*facs, cap=desc.get("cap"))
        except InstanceError as exc:
            self.fail(where, str(exc))
        except (KeyError, TypeError):
            self.fail(where, "a space is {'factors': [...], 'cap': n}")

    def graded_map_from(self, desc, where: str) -> GradedMap:
        if not isinstance(desc, dict):
            self.fail(where, "a map must be an object")
        S = self.space(desc.get("source"), where)
        T = self.space(desc.get("target"), where)
        ks, kt = S.nfactors, T.nfactors
        rows: dict = {}
        for e in desc.get("entries", []):
            try:
                src, tgt, c = e
                src = tuple(_dec_label(x) for x in src)
                tgt = tuple(_dec_label(x) for x in tgt)
                coef = _dec_coef(c)
            except InstanceError as exc:
                self.fail(where, str(exc))
            except (TypeError, ValueError):
                self.fail(where, f"bad entry {e!r}")
            if len(src) != ks or len(tgt) != kt:
                self.fail(where, f"entry {e!r} has the wrong number of factors")
            s, t = from_parts(src), from_parts(tgt)
            row = rows.setdefault(s, {})
            row[t] = row.get(t, 0) + coef
        try:
            return GradedMap(S, T, int(desc.get("degree", 0)), self.ring, rows)
        except StructuralError as exc:
            self.fail(where, str(exc))

    def graded_map(self, name: str) -> GradedMap:
        if name not in self.maps:
            desc = self._section("maps").get(name)
            if desc is None:
                raise InstanceError(f"unknown map {name!r}")
            self.maps[name] = self.graded_map_from(desc, name)
        return self.maps[name]

    def family(self, name: str) -> ComponentFamily:
        if name in self.families:
            return self.families[name]
        desc = self._section("families").get(name)
        if desc is None:
            raise InstanceError(f"unknown family {name!r}")
        X = self.module(desc["source"])
        Y = self.space(desc["target"], name)
        comps = {int(k): self.graded_map_from(m, name) for k, m in desc.get("components", {}).items()}
        try:
            F = ComponentFamily(X, Y, int(desc["degree"]), self.ring, comps, desc.get("support_bound"), desc.get("weight_cap"))
        except (StructuralError, ValueError) as exc:
            self.fail(name, str(exc))
        self.families[name] = F
        return F

    def structure(self, name: str):
        if name in self.structures:
            return self.structures[name]
        entries = self._section("structures")
        desc = entries.get(name)
        if desc is None:
            raise InstanceError(f"unknown structure {name!r}")
        if name in self._loading:
            self.fail(name, "structure refers to itself")
        self._loading.add(name)
        kind = desc.get("kind")
        if kind not in KINDS:
            self.fail(name, f"unknown kind {kind!r}")
        cls, map_fields, fam_fields, ref_fields = KINDS[kind]
        args: dict = {}
        try:
            for f in ref_fields:
                args[f] = self.structure(desc[f])
            if kind in _CARRIER_KINDS:
                args["carrier"] = self.module(desc["carrier"])
                args["ring"] = self.ring
            for f in map_fields:
                if f in desc:
                    args[f] = self.graded_map(desc[f])
            for f in fam_fields:
                args[f] = self.family(desc[f])
        except KeyError as exc:
            self.fail(name, f"missing field {exc.args[0]!r}")
        except InstanceError as exc:
            if exc.line is not None:
                raise
            self.fail(name, str(exc))
        if "trusted_length" in desc:
            args["trusted_length"] = desc["trusted_length"]
        if "weight_cap" in desc and kind == "curved_homotopy_coalgebra":
            args["weight_cap"] = desc["weight_cap"]
        try:
            obj = cls(**args)
        except (StructuralError, TypeError, ValueError) as exc:
            self.fail(name, str(exc))
        self.structures[name] = obj
        self._loading.discard(name)
        return obj


def loads(text: str) -> Instance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"invalid JSON: {exc.msg}", exc.lineno) from None
    if not isinstance(doc, dict):
        raise InstanceError("top level must be an object", 1)
    if doc.get("schema") != SCHEMA:
        raise InstanceError(f"unsupported schema {doc.get('schema')!r}, expected {SCHEMA!r}", _line_of(text, "schema"))
    r = _Reader(text, doc)
    names = list(r._section("structures"))
    for name in sorted(names):
        r.structure(name)
    cap = doc.get("weight_cap")
    bounds = doc.get("bounds") or {}
    if cap is not None and not isinstance(cap, int):
        raise InstanceError("weight_cap must be an integer", _line_of(text, "weight_cap"))
    return Instance(r.ring, {n: r.structures[n] for n in sorted(names)}, cap, dict(bounds))


def load(path) -> Instance:
    return loads(Path(path).read_text())

"""Single-entry mutations of structures, and second-route validity oracles.

A mutation changes one coefficient of one structure map: it flips the sign of
an existing entry or adds one to an entry at a degree-compatible position.  The oracles
decide validity without the primary checker (through the doubled algebra, the
tensor-coalgebra embedding or the cobar construction), so a curated list of
mutations can be confirmed broken independently before asserting that the
checker rejects it.
"""

from __future__ import annotations

import dataclasses
import json
import random
from dataclasses import dataclass

from .barcobar import TwistingCochain, cobar, to_alg_morphism
from .chcoalg import (
    CCoalgElement,
    CHCMorphism,
    CurvedHomotopyCoalgebraData,
    check_ccoalg_element,
    check_chc,
    check_chc_morphism,
    element_to_morphism,
    embed_plus,
    embed_plus_morphism,
)
from .curved import (
    CurvedAlgebraData,
    CurvedAlgMorphism,
    CurvedCoalgebraData,
    CurvedCoalgMorphism,
    check_algebra_hom,
    check_alg_morphism,
    check_associative_algebra,
    check_coalgebra,
    check_coalgebra_hom,
    check_coalg_morphism,
    check_curved_algebra,
    check_curved_coalgebra,
    double_algebra,
    double_alg_morphism,
    double_coalgebra,
    double_coalg_morphism,
)
from .gradedcore import GradedMap
from .serialize import _dec_label, _enc_label
from .tensorcoalg import ComponentFamily

__all__ = [
    "Mutation",
    "MUTABLE_FIELDS",
    "candidate_mutations",
    "apply_mutation",
    "random_mutation",
    "primary_check",
    "oracle_valid",
    "curate",
    "dump_mutations",
    "load_mutations",
]

# fields that carry the structure proper (splittings are left alone)
MUTABLE_FIELDS = {
    CurvedAlgebraData: ("m2", "m1", "m0", "eta"),
    CurvedCoalgebraData: ("delta2", "delta1", "delta0", "eps"),
    CurvedHomotopyCoalgebraData: ("delta1", "delta0"),
    CurvedAlgMorphism: ("f1", "f0"),
    CurvedCoalgMorphism: ("g1", "g0"),
    CHCMorphism: ("g1", "g0"),
    TwistingCochain: ("theta",),
    CCoalgElement: ("g1_check", "g0"),
}


@dataclass(frozen=True)
class Mutation:
    """Add ``delta`` to the ``(source, target)`` entry of ``field`` (component ``arity`` for families)."""

    field: str
    source: object
    target: object
    delta: int
    arity: int | None = None

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def _fields_for(obj) -> tuple:
    for cls, fields in MUTABLE_FIELDS.items():
        if isinstance(obj, cls):
            return fields
    raise TypeError(f"no mutable fields known for {type(obj).__name__}")


def _map_candidates(f: GradedMap, field: str, arity, flips_only: bool = False) -> list[Mutation]:
    out = []
    for s in f.source.labels:
        row = f.row(s)
        for t, c in row.items():
            out.append(Mutation(field, s, t, -2 * c, arity))
            if not flips_only:
                out.append(Mutation(field, s, t, 1, arity))
        if flips_only:
            continue
        z, w = f.source.degree_of(s)
        for t in f.target.labels_at((z + f.degree, w)):
            if t not in row:
                out.append(Mutation(field, s, t, 1, arity))
    return out


def candidate_mutations(obj, fields=None) -> list[Mutation]:
    """Every single-entry mutation of the given fields, in a fixed order."""
    out = []
    for name in fields or _fields_for(obj):
        val = getattr(obj, name)
        if isinstance(val, ComponentFamily):
            for k in range(val.K + 1):
                out.extend(_map_candidates(val.component(k), name, k))
        else:
            out.extend(_map_candidates(val, name, None))
    return out


def _bump(f: GradedMap, m: Mutation) -> GradedMap:
    rows = {s: dict(f.row(s)) for s in f.source.labels if f.row(s)}
    row = rows.setdefault(m.source, {})
    row[m.target] = row.get(m.target, 0) + m.delta
    return GradedMap(f.source, f.target, f.degree, f.ring, rows, validate=False)


def apply_mutation(obj, m: Mutation):
    val = getattr(obj, m.field)
    if isinstance(val, ComponentFamily):
        comps = dict(val.components)
        comps[m.arity] = _bump(val.component(m.arity), m)
        new = ComponentFamily(val.source, val.target, val.degree, val.ring, comps, val.K, val.weight_cap)
    else:
        new = _bump(val, m)
    return copy_with(obj, m.field, new)


def copy_with(obj, name: str, value):
    """Shallow copy with one field replaced, keeping the concrete class."""
    out = object.__new__(type(obj))
    out.__dict__.update(obj.__dict__)
    setattr(out, name, value)
    return out


def random_mutation(rng: random.Random, obj, fields=None):
    """A random single-entry mutation and the mutated copy (None if there is nothing to mutate)."""
    cands = candidate_mutations(obj, fields)
    if not cands:
        return None, obj
    m = rng.choice(cands)
    return m, apply_mutation(obj, m)


# ---------------------------------------------------------------- checkers and oracles


def primary_check(obj, cap: int | None = None):
    """The axiom checker responsible for ``obj``."""
    if isinstance(obj, CurvedAlgebraData):
        return check_curved_algebra(obj)
    if isinstance(obj, CurvedCoalgebraData):
        return check_curved_coalgebra(obj)
    if isinstance(obj, CurvedHomotopyCoalgebraData):
        return check_chc(obj)
    if isinstance(obj, CurvedAlgMorphism):
        return check_alg_morphism(obj)
    if isinstance(obj, CurvedCoalgMorphism):
        return check_coalg_morphism(obj)
    if isinstance(obj, CHCMorphism):
        return check_chc_morphism(obj)
    if isinstance(obj, TwistingCochain):
        from .barcobar import is_twisting_cochain

        return is_twisting_cochain(obj)
    if isinstance(obj, CCoalgElement):
        return check_ccoalg_element(obj)
    raise TypeError(type(obj).__name__)


def oracle_valid(obj, cap: int) -> bool:
    """Validity decided by a second route.

    Curved (co)algebras and their morphisms go through the doubling
    constructions; curved homotopy coalgebras, their morphisms and elements
    through the tensor-coalgebra embedding (positive weights only); twisting
    cochains through the cobar construction.
    """
    if isinstance(obj, CurvedAlgebraData):
        return check_associative_algebra(double_algebra(obj)).ok
    if isinstance(obj, CurvedCoalgebraData):
        return check_coalgebra(double_coalgebra(obj)).ok
    if isinstance(obj, CurvedAlgMorphism):
        return check_algebra_hom(double_algebra(obj.source), double_algebra(obj.target), double_alg_morphism(obj)).ok
    if isinstance(obj, CurvedCoalgMorphism):
        return check_coalgebra_hom(
            double_coalgebra(obj.source), double_coalgebra(obj.target), double_coalg_morphism(obj)
        ).ok
    if isinstance(obj, CurvedHomotopyCoalgebraData):
        return check_curved_coalgebra(embed_plus(obj, cap).coalgebra).ok
    if isinstance(obj, CHCMorphism):
        EX, EY = embed_plus(obj.source, cap), embed_plus(obj.target, cap)
        return check_coalg_morphism(embed_plus_morphism(obj, EX, EY)).ok
    if isinstance(obj, CCoalgElement):
        return check_coalg_morphism(element_to_morphism(obj, embed_plus(obj.target, cap))).ok
    if isinstance(obj, TwistingCochain):
        CC = cobar(obj.source, cap)
        return check_alg_morphism(to_alg_morphism(obj, CC)).ok
    raise TypeError(type(obj).__name__)


def curate(obj, cap: int, count: int = 10, seed: int = 0) -> list[Mutation]:
    """``count`` mutations that the oracle confirms invalid, spread over the fields.

    Candidates are shuffled with ``seed`` and then taken round-robin by field
    so that every structure map is exercised.
    """
    rng = random.Random(seed)
    by_field: dict = {}
    for m in candidate_mutations(obj):
        by_field.setdefault(m.field, []).append(m)
    for lst in by_field.values():
        rng.shuffle(lst)
    chosen: list = []
    while len(chosen) < count and any(by_field.values()):
        for name in list(by_field):
            if not by_field[name]:
                continue
            m = by_field[name].pop()
            if not oracle_valid(apply_mutation(obj, m), cap):
                chosen.append(m)
                if len(chosen) == count:
                    break
    return chosen


def dump_mutations(muts: list[Mutation]) -> str:
    rows = [
        {"field": m.field, "arity": m.arity, "source": _enc_label(m.source), "target": _enc_label(m.target), "delta": m.delta}
        for m in muts
    ]
    return json.dumps(rows, sort_keys=True, indent=1) + "\n"


def load_mutations(text: str) -> list[Mutation]:
    return [
        Mutation(r["field"], _dec_label(r["source"]), _dec_label(r["target"]), int(r["delta"]), r.get("arity"))
        for r in json.loads(text)
    ]

"""Language-neutral code model: entity tree, class relationships, call edges.

The model is loaded from a JSON file with three top-level arrays
("entities", "relationships", "calls") and validated into a single-rooted
tree of packages, classes and methods.  Everything downstream (taxonomy,
similarity, detection) consumes this structure and nothing else.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Optional

ENTITY_KINDS = ("package", "class", "method")
RELATIONSHIP_KINDS = ("inner", "generalization", "aggregation", "association", "dependency")

SYNTHETIC_ROOT_ID = "__root__"


class ModelError(Exception):
    """Base class for code-model loading failures."""


class ParseError(ModelError):
    """The model file is not well-formed JSON or violates the schema."""


class ValidationError(ModelError):
    """The model violates a structural invariant."""

    def __init__(self, diagnostics: list["Diagnostic"]):
        self.diagnostics = diagnostics
        lines = "; ".join(str(d) for d in diagnostics[:5])
        if len(diagnostics) > 5:
            lines += f"; ... ({len(diagnostics)} total)"
        super().__init__(lines)


@dataclass(frozen=True)
class Diagnostic:
    """One invariant violation, tied to the offending entity id."""

    code: str
    message: str
    entity_id: Optional[str] = None

    def __str__(self) -> str:
        if self.entity_id is not None:
            return f"{self.code}: {self.message} [{self.entity_id}]"
        return f"{self.code}: {self.message}"


@dataclass(frozen=True)
class Entity:
    id: str
    kind: str  # "package" | "class" | "method"
    name: str
    parent: Optional[str] = None
    library: bool = False


@dataclass(frozen=True)
class ClassRelationship:
    source: str
    target: str
    kind: str  # one of RELATIONSHIP_KINDS


@dataclass(frozen=True)
class CallEdge:
    caller: str
    callee: str


class CodeModel:
    """Immutable entity tree plus class relationships and method calls.

    Construction is single-threaded; after that the model is read-only and
    safe to query concurrently.
    """

    def __init__(
        self,
        entities: Iterable[Entity],
        relationships: Iterable[ClassRelationship] = (),
        calls: Iterable[CallEdge] = (),
    ):
        self.entities: dict[str, Entity] = {}
        for ent in entities:
            if ent.id in self.entities:
                raise ValidationError([Diagnostic("duplicate-id", "entity id declared twice", ent.id)])
            self.entities[ent.id] = ent
        # duplicate relationship/call edges collapse to one; order is preserved
        self.relationships: list[ClassRelationship] = list(dict.fromkeys(relationships))
        self.calls: list[CallEdge] = list(dict.fromkeys(calls))

    # -- structure queries -------------------------------------------------

    @cached_property
    def roots(self) -> list[str]:
        return [e.id for e in self.entities.values() if e.parent is None]

    @property
    def root(self) -> str:
        roots = self.roots
        if len(roots) != 1:
            raise ValidationError([Diagnostic("multiple-roots", f"expected one root, found {len(roots)}")])
        return roots[0]

    @cached_property
    def children(self) -> dict[str, list[str]]:
        out: dict[str, list[str]] = {eid: [] for eid in self.entities}
        for ent in self.entities.values():
            if ent.parent is not None and ent.parent in out:
                out[ent.parent].append(ent.id)
        return out

    @cached_property
    def method_class(self) -> dict[str, str]:
        """Map each method id to its defining class id."""
        return {
            e.id: e.parent
            for e in self.entities.values()
            if e.kind == "method" and e.parent is not None
        }

    @cached_property
    def methods_by_class(self) -> dict[str, list[str]]:
        out: dict[str, list[str]] = {c: [] for c in self.class_ids()}
        for mid, cid in self.method_class.items():
            if cid in out:
                out[cid].append(mid)
        return out

    @cached_property
    def coupling_partners(self) -> dict[str, set[str]]:
        """Per class: other classes linked by a call edge or a declared relationship."""
        partners: dict[str, set[str]] = {c: set() for c in self.class_ids()}
        for rel in self.relationships:
            if rel.source in partners and rel.target in partners:
                partners[rel.source].add(rel.target)
                partners[rel.target].add(rel.source)
        mc = self.method_class
        for call in self.calls:
            ca, cb = mc.get(call.caller), mc.get(call.callee)
            if ca is None or cb is None or ca == cb:
                continue
            if ca in partners and cb in partners:
                partners[ca].add(cb)
                partners[cb].add(ca)
        for cid in partners:
            partners[cid].discard(cid)
        return partners

    def class_ids(self) -> list[str]:
        return [e.id for e in self.entities.values() if e.kind == "class"]

    def method_ids(self) -> list[str]:
        return [e.id for e in self.entities.values() if e.kind == "method"]

    def methods_of(self, class_id: str) -> list[str]:
        ent = self.entities.get(class_id)
        if ent is None:
            raise KeyError(f"unknown entity id: {class_id!r}")
        if ent.kind != "class":
            raise ValueError(f"not a class: {class_id!r} (kind={ent.kind})")
        return list(self.methods_by_class.get(class_id, []))

    def kind_of(self, entity_id: str) -> str:
        ent = self.entities.get(entity_id)
        if ent is None:
            raise KeyError(f"unknown entity id: {entity_id!r}")
        return ent.kind

    def name_of(self, entity_id: str) -> str:
        return self.entities[entity_id].name

    def __len__(self) -> int:
        return len(self.entities)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CodeModel):
            return NotImplemented
        return (
            self.entities == other.entities
            and set(self.relationships) == set(other.relationships)
            and set(self.calls) == set(other.calls)
        )

    def __repr__(self) -> str:
        return (
            f"CodeModel(entities={len(self.entities)}, "
            f"relationships={len(self.relationships)}, calls={len(self.calls)})"
        )


# -- validation -------------------------------------------------------------

_PARENT_KINDS = {
    "method": {"class"},
    "class": {"package", "class"},
    "package": {"package"},
}


def validate_model(model: CodeModel) -> list[Diagnostic]:
    """Check every structural invariant; return one diagnostic per violation."""
    diags: list[Diagnostic] = []
    entities = model.entities

    roots = [e for e in entities.values() if e.parent is None]
    if len(roots) != 1:
        diags.append(Diagnostic("multiple-roots", f"expected exactly one root entity, found {len(roots)}"))

    for ent in entities.values():
        if ent.kind not in ENTITY_KINDS:
            diags.append(Diagnostic("kind-violation", f"unknown entity kind {ent.kind!r}", ent.id))
            continue
        if ent.parent is None:
            if ent.kind != "package":
                diags.append(Diagnostic("kind-violation", f"root entity must be a package, got {ent.kind}", ent.id))
            continue
        parent = entities.get(ent.parent)
        if parent is None:
            diags.append(Diagnostic("dangling-id", f"parent {ent.parent!r} does not exist", ent.id))
        elif parent.kind not in _PARENT_KINDS[ent.kind]:
            diags.append(
                Diagnostic(
                    "kind-violation",
                    f"{ent.kind} {ent.id!r} cannot be contained in {parent.kind} {parent.id!r}",
                    ent.id,
                )
            )

    # parent chains must reach a root without cycling
    state: dict[str, int] = {}  # 0 = visiting, 1 = ok, -1 = cyclic
    for ent in entities.values():
        chain = []
        cur: Optional[str] = ent.id
        while cur is not None and cur in entities and cur not in state:
            state[cur] = 0
            chain.append(cur)
            cur = entities[cur].parent
        cyclic = cur is not None and cur in state and state[cur] == 0
        cyclic = cyclic or (cur is not None and cur in state and state[cur] == -1)
        for eid in chain:
            state[eid] = -1 if cyclic else 1
        if cyclic:
            diags.append(Diagnostic("cycle", "parent chain never reaches a root", ent.id))

    for rel in model.relationships:
        if rel.kind not in RELATIONSHIP_KINDS:
            diags.append(Diagnostic("kind-violation", f"unknown relationship kind {rel.kind!r}", rel.source))
        if rel.source == rel.target:
            diags.append(Diagnostic("self-relationship", "relationship source equals target", rel.source))
        for end in (rel.source, rel.target):
            ent = entities.get(end)
            if ent is None:
                diags.append(Diagnostic("dangling-id", f"relationship endpoint {end!r} does not exist", end))
            elif ent.kind != "class":
                diags.append(Diagnostic("kind-violation", f"relationship endpoint {end!r} is a {ent.kind}, not a class", end))

    for call in model.calls:
        for end in (call.caller, call.callee):
            ent = entities.get(end)
            if ent is None:
                diags.append(Diagnostic("dangling-id", f"call endpoint {end!r} does not exist", end))
            elif ent.kind != "method":
                diags.append(Diagnostic("kind-violation", f"call endpoint {end!r} is a {ent.kind}, not a method", end))

    return diags


# -- loading / serialization -------------------------------------------------


def _entity_from_json(obj: dict, pos: int) -> Entity:
    if not isinstance(obj, dict):
        raise ParseError(f"entities[{pos}]: expected an object")
    try:
        eid, kind, name = obj["id"], obj["kind"], obj["name"]
    except KeyError as exc:
        raise ParseError(f"entities[{pos}]: missing field {exc.args[0]!r}") from None
    if not isinstance(eid, str) or not isinstance(name, str):
        raise ParseError(f"entities[{pos}]: 'id' and 'name' must be strings")
    if kind not in ENTITY_KINDS:
        raise ParseError(f"entities[{pos}]: unknown kind {kind!r} (id {eid!r})")
    parent = obj.get("parent")
    if parent is not None and not isinstance(parent, str):
        raise ParseError(f"entities[{pos}]: 'parent' must be a string (id {eid!r})")
    library = obj.get("library", False)
    if not isinstance(library, bool):
        raise ParseError(f"entities[{pos}]: 'library' must be a boolean (id {eid!r})")
    return Entity(id=eid, kind=kind, name=name, parent=parent, library=library)


def loads_model(text: str, include_libraries: bool = False) -> CodeModel:
    """Parse and validate a code-model JSON document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or not isinstance(doc.get("entities"), list):
        raise ParseError("document must be an object with an 'entities' array")

    entities = [_entity_from_json(o, i) for i, o in enumerate(doc["entities"])]

    relationships = []
    for i, obj in enumerate(doc.get("relationships", [])):
        try:
            rel = ClassRelationship(source=obj["source"], target=obj["target"], kind=obj["kind"])
        except (TypeError, KeyError):
            raise ParseError(f"relationships[{i}]: expected object with source/target/kind") from None
        if rel.kind not in RELATIONSHIP_KINDS:
            raise ParseError(f"relationships[{i}]: unknown kind {rel.kind!r}")
        relationships.append(rel)

    calls = []
    for i, obj in enumerate(doc.get("calls", [])):
        try:
            calls.append(CallEdge(caller=obj["caller"], callee=obj["callee"]))
        except (TypeError, KeyError):
            raise ParseError(f"calls[{i}]: expected object with caller/callee") from None

    if not include_libraries:
        entities, relationships, calls = _strip_libraries(entities, relationships, calls)

    entities = _ensure_single_root(entities)
    model = CodeModel(entities, relationships, calls)
    diags = validate_model(model)
    if diags:
        raise ValidationError(diags)
    return model


def load_model(path: str | Path, include_libraries: bool = False) -> CodeModel:
    """Load, parse and validate a code-model file."""
    text = Path(path).read_text(encoding="utf-8")
    return loads_model(text, include_libraries=include_libraries)


def _strip_libraries(
    entities: list[Entity],
    relationships: list[ClassRelationship],
    calls: list[CallEdge],
) -> tuple[list[Entity], list[ClassRelationship], list[CallEdge]]:
    """Drop library entities, their whole subtrees, and edges touching them."""
    by_id = {e.id: e for e in entities}

    def is_library(eid: str) -> bool:
        seen = set()
        cur: Optional[str] = eid
        while cur is not None and cur in by_id and cur not in seen:
            if by_id[cur].library:
                return True
            seen.add(cur)
            cur = by_id[cur].parent
        return False

    dropped = {e.id for e in entities if is_library(e.id)}
    kept = [e for e in entities if e.id not in dropped]
    rels = [r for r in relationships if r.source not in dropped and r.target not in dropped]
    kept_calls = [c for c in calls if c.caller not in dropped and c.callee not in dropped]
    return kept, rels, kept_calls


def _ensure_single_root(entities: list[Entity]) -> list[Entity]:
    """Insert a synthetic root package when the file has several top-level entities.

    The synthetic root counts as a node: total entity count N includes it.
    """
    top = [e for e in entities if e.parent is None]
    if len(top) == 1:
        return entities
    if len(top) == 0 and entities:
        return entities  # all-parented entities: cycle diagnostics will fire
    root_id = SYNTHETIC_ROOT_ID
    taken = {e.id for e in entities}
    while root_id in taken:
        root_id = "_" + root_id
    root = Entity(id=root_id, kind="package", name="<root>", parent=None)
    reparented = [
        Entity(id=e.id, kind=e.kind, name=e.name, parent=root_id, library=e.library)
        if e.parent is None
        else e
        for e in entities
    ]
    return [root] + reparented


def serialize_model(model: CodeModel) -> str:
    """Serialize back to the on-disk JSON schema (round-trips with loads_model)."""
    doc = {
        "entities": [
            {
                "id": e.id,
                "kind": e.kind,
                "name": e.name,
                **({"parent": e.parent} if e.parent is not None else {}),
                **({"library": True} if e.library else {}),
            }
            for e in model.entities.values()
        ],
        "relationships": [
            {"source": r.source, "target": r.target, "kind": r.kind} for r in model.relationships
        ],
        "calls": [{"caller": c.caller, "callee": c.callee} for c in model.calls],
    }
    return json.dumps(doc, indent=2)

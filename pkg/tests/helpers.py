"""Shared fixtures and independent oracles for the test suite."""

from __future__ import annotations

import math
import random

from godsplit.model import CallEdge, ClassRelationship, CodeModel, Entity

# 21-entity reference tree: one root package, three subpackages, six classes,
# eleven methods.  "net" holds Client{send,recv,close} and Socket{open}; the
# known similarity landmarks live there (cross-class within net = 0.54,
# across subpackages = 0.02, same class = 0.85, self = 1.32).
TREE_ENTITIES = [
    ("app", "package", None),
    ("net", "package", "app"),
    ("Client", "class", "net"),
    ("Client.send", "method", "Client"),
    ("Client.recv", "method", "Client"),
    ("Client.close", "method", "Client"),
    ("Socket", "class", "net"),
    ("Socket.open", "method", "Socket"),
    ("ui", "package", "app"),
    ("View", "class", "ui"),
    ("View.draw", "method", "View"),
    ("View.resize", "method", "View"),
    ("View.hide", "method", "View"),
    ("Panel", "class", "ui"),
    ("Panel.show", "method", "Panel"),
    ("Panel.focus", "method", "Panel"),
    ("io", "package", "app"),
    ("Reader", "class", "io"),
    ("Reader.read", "method", "Reader"),
    ("Reader.peek", "method", "Reader"),
    ("Writer", "class", "io"),
]


def tree_entities() -> list[Entity]:
    return [Entity(id=eid, kind=kind, name=eid.split(".")[-1], parent=parent) for eid, kind, parent in TREE_ENTITIES]


def tree_model(relationships=(), calls=()) -> CodeModel:
    return CodeModel(
        tree_entities(),
        [ClassRelationship(*r) for r in relationships],
        [CallEdge(*c) for c in calls],
    )


def tree_json(relationships=(), calls=(), library_ids=()) -> dict:
    """The same tree as a JSON-ready document for load/CLI tests."""
    return {
        "entities": [
            {
                "id": eid,
                "kind": kind,
                "name": eid.split(".")[-1],
                **({"parent": parent} if parent else {}),
                **({"library": True} if eid in library_ids else {}),
            }
            for eid, kind, parent in TREE_ENTITIES
        ],
        "relationships": [{"source": s, "target": t, "kind": k} for s, t, k in relationships],
        "calls": [{"caller": a, "callee": b} for a, b in calls],
    }


# Call configuration reproducing the reference fan-in/fan-out worked example:
# send and recv share the caller Socket.open; send calls {resize, hide},
# recv calls {hide}, close calls {draw}.
FAN_CALLS = [
    ("Socket.open", "Client.send"),
    ("Socket.open", "Client.recv"),
    ("Client.send", "View.resize"),
    ("Client.send", "View.hide"),
    ("Client.recv", "View.hide"),
    ("Client.close", "View.draw"),
]

# Injected refined-similarity table for the worked example (symmetric).
# The self-similarity 2.64 entries are given values, not derivable ones.
FAN_TABLE = {
    frozenset(["Socket.open"]): 2.64,
    frozenset(["View.resize", "View.hide"]): 0.02,
    frozenset(["View.hide"]): 2.64,
    frozenset(["Client.send", "Client.recv"]): 1.7,
    frozenset(["Client.send", "Client.close"]): 0.85,
    frozenset(["Client.recv", "Client.close"]): 0.85,
    frozenset(["View.draw", "View.resize"]): 0.04,
    frozenset(["View.draw", "View.hide"]): 0.74,
}


def fan_similarity(a: str, b: str) -> float:
    return FAN_TABLE[frozenset((a, b))]


class StubEngine:
    """Engine stand-in with an injected pairwise table (for exact-value tests)."""

    def __init__(self, model, table: dict):
        self.model = model
        self._table = {frozenset(k): float(v) for k, v in table.items()}

    def iss(self, a: str, b: str) -> float:
        return self._table[frozenset((a, b))]


def god_system() -> CodeModel:
    """Small system with one low-cohesion hub class wearing two hats.

    Hub.m0..m3 drive Store, Hub.m4..m7 drive Screen; the two method clusters
    never call each other, so Hub should be detected and split in two.
    """
    entities = [
        Entity("sys", "package", "sys"),
        Entity("core", "package", "core", "sys"),
        Entity("gui", "package", "gui", "sys"),
    ]

    def klass(cid: str, parent: str, methods: list[str]) -> None:
        entities.append(Entity(cid, "class", cid, parent))
        for m in methods:
            entities.append(Entity(f"{cid}.{m}", "method", m, cid))

    klass("Hub", "core", [f"m{i}" for i in range(8)])
    klass("Store", "core", ["put", "get", "drop"])
    klass("Log", "core", ["write", "flush"])
    klass("Screen", "gui", ["paint", "layout", "refresh"])
    klass("Cfg", "gui", ["load", "save"])
    klass("Util", "gui", ["fmt"])
    relationships = [
        ClassRelationship("Hub", "Store", "association"),
        ClassRelationship("Hub", "Screen", "association"),
        ClassRelationship("Hub", "Log", "dependency"),
        ClassRelationship("Hub", "Cfg", "dependency"),
        ClassRelationship("Store", "Log", "dependency"),
    ]
    calls = [
        CallEdge("Hub.m0", "Store.put"),
        CallEdge("Hub.m1", "Store.get"),
        CallEdge("Hub.m2", "Store.drop"),
        CallEdge("Hub.m3", "Store.put"),
        CallEdge("Hub.m4", "Screen.paint"),
        CallEdge("Hub.m5", "Screen.layout"),
        CallEdge("Hub.m6", "Screen.refresh"),
        CallEdge("Hub.m7", "Screen.paint"),
        CallEdge("Store.put", "Store.get"),
        CallEdge("Store.get", "Store.drop"),
        CallEdge("Screen.paint", "Screen.layout"),
        CallEdge("Screen.layout", "Screen.refresh"),
        CallEdge("Log.write", "Log.flush"),
        CallEdge("Cfg.load", "Cfg.save"),
        CallEdge("Log.write", "Store.put"),
        CallEdge("Util.fmt", "Log.write"),
    ]
    return CodeModel(entities, relationships, calls)


# -- independent oracles ------------------------------------------------------


def naive_ancestors(parent: dict[str, str | None], x: str) -> list[str]:
    out = [x]
    while parent[x] is not None:
        x = parent[x]
        out.append(x)
    return out


def naive_lca(parent: dict[str, str | None], a: str, b: str) -> str:
    chain = naive_ancestors(parent, a)
    others = set(naive_ancestors(parent, b))
    for x in chain:
        if x in others:
            return x
    raise AssertionError("no common ancestor")


def naive_descendants(parent: dict[str, str | None], x: str) -> int:
    return sum(1 for e in parent if e != x and x in naive_ancestors(parent, e)[1:])


def naive_structural_similarity(parent: dict[str, str | None], a: str, b: str) -> float:
    lca = naive_lca(parent, a, b)
    return -math.log10(max(1, naive_descendants(parent, lca)) / len(parent))


def random_tree_model(rng: random.Random, max_nodes: int = 200) -> tuple[CodeModel, dict[str, str | None]]:
    """Random package/class/method tree with at least two methods."""
    n_packages = rng.randint(1, max(1, max_nodes // 8))
    entities = [Entity(id="p0", kind="package", name="p0", parent=None)]
    parent: dict[str, str | None] = {"p0": None}
    packages = ["p0"]
    for i in range(1, n_packages):
        pid = f"p{i}"
        up = rng.choice(packages)
        entities.append(Entity(id=pid, kind="package", name=pid, parent=up))
        parent[pid] = up
        packages.append(pid)
    classes = []
    budget = max_nodes - len(entities)
    n_classes = rng.randint(1, max(1, budget // 3))
    for i in range(n_classes):
        cid = f"c{i}"
        up = rng.choice(packages + classes) if classes and rng.random() < 0.2 else rng.choice(packages)
        entities.append(Entity(id=cid, kind="class", name=cid, parent=up))
        parent[cid] = up
        classes.append(cid)
    methods = []
    budget = max_nodes - len(entities)
    n_methods = rng.randint(2, max(2, budget))
    for i in range(n_methods):
        mid = f"m{i}"
        up = rng.choice(classes)
        entities.append(Entity(id=mid, kind="method", name=mid, parent=up))
        parent[mid] = up
        methods.append(mid)
    return CodeModel(entities), parent


def synthetic_system(
    n_methods: int = 9005,
    seed: int = 7,
    min_methods: int = 4,
    max_methods: int = 30,
    classes_per_package: int = 12,
    hub_every: int = 40,
) -> CodeModel:
    """Deterministic large model: packages of classes with varied method counts,
    chained same-class calls, cross-class calls, and a few relationships.

    Every hub_every-th class is an oversized low-cohesion hub (many methods,
    each calling into a different class) so detection finds candidates."""
    rng = random.Random(seed)
    entities = [Entity(id="root", kind="package", name="root", parent=None)]
    relationships = []
    calls = []
    class_methods: list[list[str]] = []
    hubs: list[int] = []
    total = 0
    package = None
    while total < n_methods:
        ci = len(class_methods)
        if ci % classes_per_package == 0:
            package = f"pkg{ci // classes_per_package}"
            entities.append(Entity(id=package, kind="package", name=package, parent="root"))
        cid = f"C{ci}"
        entities.append(Entity(id=cid, kind="class", name=cid, parent=package))
        if ci % hub_every == hub_every - 1:
            m = max_methods + 10
            hubs.append(ci)
        else:
            m = rng.randint(min_methods, max_methods)
        m = min(m, n_methods - total)
        methods = [f"C{ci}.m{k}" for k in range(m)]
        for mid in methods:
            entities.append(Entity(id=mid, kind="method", name=mid.split(".")[-1], parent=cid))
        class_methods.append(methods)
        total += m
    n_classes = len(class_methods)
    hub_set = set(hubs)
    for ci, methods in enumerate(class_methods):
        if ci in hub_set:
            # scattered one-call-per-method fan-outs: low cohesion, wide coupling
            for k, mid in enumerate(methods):
                other = class_methods[(ci + 1 + k) % n_classes]
                calls.append(CallEdge(mid, other[k % len(other)]))
            continue
        for k, mid in enumerate(methods):
            if k + 1 < len(methods) and rng.random() < 0.5:
                calls.append(CallEdge(mid, methods[k + 1]))
            other = class_methods[(ci + 1 + rng.randrange(3)) % n_classes]
            calls.append(CallEdge(mid, other[k % len(other)]))
        if ci + 1 < n_classes and ci % 3 == 0:
            relationships.append(ClassRelationship(f"C{ci}", f"C{ci + 1}", "generalization"))
        if ci % 5 == 0:
            relationships.append(ClassRelationship(f"C{ci}", f"C{(ci + 7) % n_classes}", "association"))
    return CodeModel(entities, relationships, calls)

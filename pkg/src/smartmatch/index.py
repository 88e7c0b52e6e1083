"""Discrimination-tree term indexing.

Keys are preorder flattenings of terms in which every variable collapses to
one wildcard, so retrieval is an imperfect filter: candidates must be
post-checked with :func:`term.unify` / :func:`term.match` at the call site.
"""

from __future__ import annotations

from typing import Dict, Iterator, List, NamedTuple, Optional, Set, Tuple

from .term import Position, Term, Var, match, unify

STAR = None  # wildcard key


class IndexEntry(NamedTuple):
    clause_id: int
    side: int  # 1 = left, 2 = right
    position: Position = ()


def flatten(t: Term) -> Tuple[list, list]:
    """Preorder keys of ``t`` and, per key, the index just past its subterm."""
    keys: list = []
    ends: list = []

    def walk(u):
        i = len(keys)
        if type(u) is Var:
            keys.append(STAR)
            ends.append(i + 1)
            return
        keys.append((u.name, len(u.args)))
        ends.append(0)
        for a in u.args:
            walk(a)
        ends[i] = len(keys)

    walk(t)
    return keys, ends


def _arity(key) -> int:
    return 0 if key is STAR else key[1]


class _Node:
    __slots__ = ("children", "entries")

    def __init__(self):
        self.children: Dict[object, _Node] = {}
        self.entries: Optional[Dict[IndexEntry, int]] = None


class DiscriminationTree:
    def __init__(self):
        self.root = _Node()
        self.size = 0

    def insert(self, key: Term, entry: IndexEntry) -> None:
        node = self.root
        for k in flatten(key)[0]:
            nxt = node.children.get(k)
            if nxt is None:
                nxt = node.children[k] = _Node()
            node = nxt
        if node.entries is None:
            node.entries = {}
        node.entries[entry] = node.entries.get(entry, 0) + 1
        self.size += 1

    def remove(self, key: Term, entry: IndexEntry) -> bool:
        path = [self.root]
        keys = flatten(key)[0]
        for k in keys:
            nxt = path[-1].children.get(k)
            if nxt is None:
                return False
            path.append(nxt)
        leaf = path[-1]
        if not leaf.entries or entry not in leaf.entries:
            return False
        n = leaf.entries[entry] - 1
        if n:
            leaf.entries[entry] = n
        else:
            del leaf.entries[entry]
            if not leaf.entries:
                leaf.entries = None
        self.size -= 1
        # prune empty branches bottom-up
        for depth in range(len(keys), 0, -1):
            node = path[depth]
            if node.children or node.entries:
                break
            del path[depth - 1].children[keys[depth - 1]]
        return True

    def entries(self) -> Dict[IndexEntry, int]:
        out: Dict[IndexEntry, int] = {}
        stack = [self.root]
        while stack:
            node = stack.pop()
            if node.entries:
                for e, n in node.entries.items():
                    out[e] = out.get(e, 0) + n
            stack.extend(node.children.values())
        return out

    def __len__(self):
        return self.size

    # -- retrieval ---------------------------------------------------------

    @staticmethod
    def _skip(node: _Node, n: int) -> Iterator[_Node]:
        """Nodes reached from ``node`` by consuming ``n`` whole terms."""
        if n == 0:
            yield node
            return
        for k, child in node.children.items():
            yield from DiscriminationTree._skip(child, n - 1 + _arity(k))

    def _collect(self, query: Term, mode: str) -> Set[IndexEntry]:
        keys, ends = flatten(query)
        nkeys = len(keys)
        out: Set[IndexEntry] = set()
        skip = self._skip

        def visit(node: _Node, i: int):
            if i == nkeys:
                if node.entries:
                    out.update(node.entries)
                return
            k = keys[i]
            children = node.children
            if k is STAR:
                if mode == "generalizations":
                    star = children.get(STAR)
                    if star is not None:
                        visit(star, i + 1)
                else:
                    for end in skip(node, 1):
                        visit(end, i + 1)
                return
            child = children.get(k)
            if child is not None:
                visit(child, i + 1)
            if mode != "instances":
                star = children.get(STAR)
                if star is not None:
                    visit(star, ends[i])

        visit(self.root, 0)
        return out

    def retrieve_unifiable(self, query: Term) -> Set[IndexEntry]:
        return self._collect(query, "unifiable")

    def retrieve_generalizations(self, query: Term) -> Set[IndexEntry]:
        return self._collect(query, "generalizations")

    def retrieve_instances(self, query: Term) -> Set[IndexEntry]:
        return self._collect(query, "instances")


class NaiveIndex:
    """Linear-scan index with exact answers; the test oracle."""

    def __init__(self):
        self.items: List[Tuple[Term, IndexEntry]] = []

    def insert(self, key: Term, entry: IndexEntry) -> None:
        self.items.append((key, entry))

    def remove(self, key: Term, entry: IndexEntry) -> bool:
        try:
            self.items.remove((key, entry))
            return True
        except ValueError:
            return False

    def __len__(self):
        return len(self.items)

    def retrieve_unifiable(self, query: Term) -> Set[IndexEntry]:
        return {e for key, e in self.items if unify(key, query) is not None}

    def retrieve_generalizations(self, query: Term) -> Set[IndexEntry]:
        return {e for key, e in self.items if match(key, query) is not None}

    def retrieve_instances(self, query: Term) -> Set[IndexEntry]:
        return {e for key, e in self.items if match(query, key) is not None}


class LayeredIndex:
    """Read-only base index with a writable top layer."""

    def __init__(self, base, top=None):
        self.base = base
        self.top = top if top is not None else DiscriminationTree()

    def insert(self, key: Term, entry: IndexEntry) -> None:
        self.top.insert(key, entry)

    def remove(self, key: Term, entry: IndexEntry) -> bool:
        return self.top.remove(key, entry)

    def __len__(self):
        return len(self.base) + len(self.top)

    def retrieve_unifiable(self, query):
        return self.base.retrieve_unifiable(query) | self.top.retrieve_unifiable(query)

    def retrieve_generalizations(self, query):
        return self.base.retrieve_generalizations(query) | self.top.retrieve_generalizations(query)

    def retrieve_instances(self, query):
        return self.base.retrieve_instances(query) | self.top.retrieve_instances(query)

"""Interchangeable string-keyed map backends for the name and completion indices.

All four structures expose the same lookup semantics: exact ``get``, sorted
``items`` iteration, and sorted ``prefix_items`` scans.  ``build_store``
inserts keys in median-recursive order so the comparison-based structures
(most importantly the ternary search tree) come out balanced regardless of the
key distribution, keeping builds deterministic for a given key set.
"""

from __future__ import annotations

from enum import Enum
from typing import Any, Iterator


class BackendKind(Enum):
    HASHING = "hashing"
    BALANCED_TREE = "balanced-tree"
    TRIE = "trie"
    TERNARY_SEARCH_TREE = "ternary-search-tree"


class HashStore:
    """Plain hash map; sorted views are materialized on demand."""

    def __init__(self) -> None:
        self._data: dict[str, Any] = {}
        self._sorted_keys: list[str] | None = None

    def put(self, key: str, value: Any) -> None:
        self._data[key] = value
        self._sorted_keys = None

    def get(self, key: str) -> Any | None:
        return self._data.get(key)

    def _keys(self) -> list[str]:
        if self._sorted_keys is None:
            self._sorted_keys = sorted(self._data)
        return self._sorted_keys

    def items(self) -> Iterator[tuple[str, Any]]:
        for key in self._keys():
            yield key, self._data[key]

    def prefix_items(self, prefix: str) -> Iterator[tuple[str, Any]]:
        import bisect

        keys = self._keys()
        i = bisect.bisect_left(keys, prefix)
        while i < len(keys) and keys[i].startswith(prefix):
            yield keys[i], self._data[keys[i]]
            i += 1


class _AvlNode:
    __slots__ = ("key", "value", "left", "right", "height")

    def __init__(self, key: str, value: Any) -> None:
        self.key = key
        self.value = value
        self.left: _AvlNode | None = None
        self.right: _AvlNode | None = None
        self.height = 1


def _avl_height(node: _AvlNode | None) -> int:
    return node.height if node else 0


def _avl_fix(node: _AvlNode) -> _AvlNode:
    node.height = 1 + max(_avl_height(node.left), _avl_height(node.right))
    balance = _avl_height(node.left) - _avl_height(node.right)
    if balance > 1:
        if _avl_height(node.left.left) < _avl_height(node.left.right):
            node.left = _avl_rotate_left(node.left)
        return _avl_rotate_right(node)
    if balance < -1:
        if _avl_height(node.right.right) < _avl_height(node.right.left):
            node.right = _avl_rotate_right(node.right)
        return _avl_rotate_left(node)
    return node


def _avl_rotate_right(node: _AvlNode) -> _AvlNode:
    pivot = node.left
    node.left = pivot.right
    pivot.right = node
    node.height = 1 + max(_avl_height(node.left), _avl_height(node.right))
    pivot.height = 1 + max(_avl_height(pivot.left), _avl_height(pivot.right))
    return pivot


def _avl_rotate_left(node: _AvlNode) -> _AvlNode:
    pivot = node.right
    node.right = pivot.left
    pivot.left = node
    node.height = 1 + max(_avl_height(node.left), _avl_height(node.right))
    pivot.height = 1 + max(_avl_height(pivot.left), _avl_height(pivot.right))
    return pivot


class AvlTreeStore:
    """Height-balanced binary search tree keyed lexicographically."""

    def __init__(self) -> None:
        self._root: _AvlNode | None = None

    def put(self, key: str, value: Any) -> None:
        self._root = self._insert(self._root, key, value)

    def _insert(self, node: _AvlNode | None, key: str, value: Any) -> _AvlNode:
        if node is None:
            return _AvlNode(key, value)
        if key == node.key:
            node.value = value
            return node
        if key < node.key:
            node.left = self._insert(node.left, key, value)
        else:
            node.right = self._insert(node.right, key, value)
        return _avl_fix(node)

    def get(self, key: str) -> Any | None:
        node = self._root
        while node:
            if key == node.key:
                return node.value
            node = node.left if key < node.key else node.right
        return None

    def items(self) -> Iterator[tuple[str, Any]]:
        stack: list[_AvlNode] = []
        node = self._root
        while stack or node:
            while node:
                stack.append(node)
                node = node.left
            node = stack.pop()
            yield node.key, node.value
            node = node.right

    def prefix_items(self, prefix: str) -> Iterator[tuple[str, Any]]:
        # In-order from the first key >= prefix, stopping past the prefix range.
        stack: list[_AvlNode] = []
        node = self._root
        while node:
            if node.key >= prefix:
                stack.append(node)
                node = node.left
            else:
                node = node.right
        while stack:
            node = stack.pop()
            if not node.key.startswith(prefix):
                return
            yield node.key, node.value
            node = node.right
            while node:
                stack.append(node)
                node = node.left


class _TrieNode:
    __slots__ = ("children", "value", "terminal")

    def __init__(self) -> None:
        self.children: dict[str, _TrieNode] = {}
        self.value: Any = None
        self.terminal = False


class TrieStore:
    """Character trie with per-node child dictionaries."""

    def __init__(self) -> None:
        self._root = _TrieNode()

    def put(self, key: str, value: Any) -> None:
        node = self._root
        for ch in key:
            child = node.children.get(ch)
            if child is None:
                child = _TrieNode()
                node.children[ch] = child
            node = child
        node.value = value
        node.terminal = True

    def _walk(self, key: str) -> _TrieNode | None:
        node = self._root
        for ch in key:
            node = node.children.get(ch)
            if node is None:
                return None
        return node

    def get(self, key: str) -> Any | None:
        node = self._walk(key)
        return node.value if node and node.terminal else None

    @staticmethod
    def _iter_subtree(node: _TrieNode, prefix: str) -> Iterator[tuple[str, Any]]:
        stack: list[tuple[_TrieNode, str]] = [(node, prefix)]
        while stack:
            node, acc = stack.pop()
            if node.terminal:
                yield acc, node.value
            for ch in sorted(node.children, reverse=True):
                stack.append((node.children[ch], acc + ch))

    def items(self) -> Iterator[tuple[str, Any]]:
        return self._iter_subtree(self._root, "")

    def prefix_items(self, prefix: str) -> Iterator[tuple[str, Any]]:
        node = self._walk(prefix)
        if node is None:
            return iter(())
        return self._iter_subtree(node, prefix)


class _TstNode:
    __slots__ = ("char", "lo", "eq", "hi", "value", "terminal")

    def __init__(self, char: str) -> None:
        self.char = char
        self.lo: _TstNode | None = None
        self.eq: _TstNode | None = None
        self.hi: _TstNode | None = None
        self.value: Any = None
        self.terminal = False


class TernarySearchTreeStore:
    """Ternary search tree; balance depends on insertion order (see build_store)."""

    def __init__(self) -> None:
        self._root: _TstNode | None = None
        self._empty_key_value: Any = None
        self._has_empty_key = False

    def put(self, key: str, value: Any) -> None:
        if key == "":
            self._empty_key_value = value
            self._has_empty_key = True
            return
        self._root = self._insert(self._root, key, 0, value)

    def _insert(self, node: _TstNode | None, key: str, i: int, value: Any) -> _TstNode:
        ch = key[i]
        if node is None:
            node = _TstNode(ch)
        if ch < node.char:
            node.lo = self._insert(node.lo, key, i, value)
        elif ch > node.char:
            node.hi = self._insert(node.hi, key, i, value)
        elif i + 1 < len(key):
            node.eq = self._insert(node.eq, key, i + 1, value)
        else:
            node.value = value
            node.terminal = True
        return node

    def _find(self, key: str) -> _TstNode | None:
        node = self._root
        i = 0
        while node:
            ch = key[i]
            if ch < node.char:
                node = node.lo
            elif ch > node.char:
                node = node.hi
            elif i + 1 == len(key):
                return node
            else:
                node = node.eq
                i += 1
        return None

    def get(self, key: str) -> Any | None:
        if key == "":
            return self._empty_key_value if self._has_empty_key else None
        node = self._find(key)
        return node.value if node and node.terminal else None

    @staticmethod
    def _iter_subtree(node: _TstNode | None, prefix: str) -> Iterator[tuple[str, Any]]:
        # Explicit stack; stages: 0 visit lo, 1 emit/eq, 2 visit hi.
        if node is None:
            return
        stack: list[tuple[_TstNode, str, int]] = [(node, prefix, 0)]
        while stack:
            node, acc, stage = stack.pop()
            if stage == 0:
                stack.append((node, acc, 1))
                if node.lo:
                    stack.append((node.lo, acc, 0))
            elif stage == 1:
                stack.append((node, acc, 2))
                if node.terminal:
                    yield acc + node.char, node.value
                if node.eq:
                    stack.append((node.eq, acc + node.char, 0))
            else:
                if node.hi:
                    stack.append((node.hi, acc, 0))

    def items(self) -> Iterator[tuple[str, Any]]:
        if self._has_empty_key:
            yield "", self._empty_key_value
        yield from self._iter_subtree(self._root, "")

    def prefix_items(self, prefix: str) -> Iterator[tuple[str, Any]]:
        if prefix == "":
            yield from self.items()
            return
        node = self._find(prefix)
        if node is None:
            return
        if node.terminal:
            yield prefix, node.value
        yield from self._iter_subtree(node.eq, prefix)


_STORE_TYPES = {
    BackendKind.HASHING: HashStore,
    BackendKind.BALANCED_TREE: AvlTreeStore,
    BackendKind.TRIE: TrieStore,
    BackendKind.TERNARY_SEARCH_TREE: TernarySearchTreeStore,
}

StringStore = HashStore | AvlTreeStore | TrieStore | TernarySearchTreeStore


def make_store(kind: BackendKind) -> StringStore:
    return _STORE_TYPES[kind]()


def _median_order(keys: list[str]) -> Iterator[str]:
    spans = [(0, len(keys))]
    while spans:
        lo, hi = spans.pop()
        if lo >= hi:
            continue
        mid = (lo + hi) // 2
        yield keys[mid]
        spans.append((mid + 1, hi))
        spans.append((lo, mid))


def build_store(kind: BackendKind, mapping: dict[str, Any]) -> StringStore:
    """Build a store of `kind` from `mapping`, inserting in median order."""
    store = make_store(kind)
    for key in _median_order(sorted(mapping)):
        store.put(key, mapping[key])
    return store

"""Extended Newick serialization for rooted networks.

A reticulation appears several times in the text under a shared ``#H<n>``
tag; exactly one occurrence carries its subtree.  Names on internal nodes
and branch lengths are accepted and discarded.  Syntax problems raise
SyntaxError with a position; structurally invalid graphs that parse fine
raise StructureError from validation.

The writer emits a canonical form: children in canonical rank order, hybrid
numbers assigned in first-encounter order, so isomorphic networks produce
byte-identical text.
"""
from __future__ import annotations

from .canon import canonical_labeling
from .network import Network

_DELIMS = set("(),;:#")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.edges: list[tuple[int, int]] = []
        self.labels: dict[int, str] = {}
        self.hybrids: dict[str, int] = {}
        self.hybrid_filled: set[str] = set()
        self.next_id = 0

    def fail(self, what: str):
        raise SyntaxError(f"{what} at position {self.pos}")

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def skip_ws(self):
        while self.peek().isspace():
            self.pos += 1

    def new_node(self) -> int:
        v = self.next_id
        self.next_id += 1
        return v

    def read_name(self) -> str:
        start = self.pos
        while self.peek() and self.peek() not in _DELIMS \
                and not self.peek().isspace():
            self.pos += 1
        return self.text[start:self.pos]

    def read_hybrid_tag(self) -> str:
        assert self.peek() == "#"
        self.pos += 1
        tag = self.read_name()
        if not tag:
            self.fail("empty hybrid tag")
        return tag

    def skip_length(self):
        if self.peek() == ":":
            while self.peek() and self.peek() not in "(),;":
                self.pos += 1

    def subtree(self) -> int:
        self.skip_ws()
        children: list[int] = []
        if self.peek() == "(":
            self.pos += 1
            children.append(self.subtree())
            while True:
                self.skip_ws()
                if self.peek() == ",":
                    self.pos += 1
                    children.append(self.subtree())
                elif self.peek() == ")":
                    self.pos += 1
                    break
                else:
                    self.fail(f"expected ',' or ')', got {self.peek()!r}")
        self.skip_ws()
        name = self.read_name()
        tag = self.read_hybrid_tag() if self.peek() == "#" else None
        self.skip_length()

        if tag is not None:
            if tag in self.hybrids:
                node = self.hybrids[tag]
            else:
                node = self.new_node()
                self.hybrids[tag] = node
            if children:
                if tag in self.hybrid_filled:
                    self.fail(f"hybrid tag #{tag} carries two subtrees")
                self.hybrid_filled.add(tag)
                for child in children:
                    self.edges.append((node, child))
            return node

        node = self.new_node()
        if children:
            for child in children:
                self.edges.append((node, child))
        else:
            if not name:
                self.fail("leaf without a label")
            self.labels[node] = name
        return node

    def parse(self) -> Network:
        top = self.subtree()
        self.skip_ws()
        if self.peek() != ";":
            self.fail(f"expected ';', got {self.peek()!r}")
        self.pos += 1
        self.skip_ws()
        if self.pos != len(self.text):
            self.fail("trailing text after ';'")
        root = self.new_node()
        self.edges.append((root, top))
        return Network.checked(self.edges, self.labels)


def parse_enewick(text: str) -> Network:
    """Parse extended Newick.  The top-level clause becomes the child of a
    fresh root, so ``a;`` is the one-leaf network and ``(a,b);`` the cherry."""
    return _Parser(text).parse()


def write_enewick(net: Network) -> str:
    ranks = canonical_labeling(net)
    hybrid_no: dict[int, int] = {}
    emitted: set[int] = set()

    def assign_numbers(v: int):
        if net.is_reticulation(v):
            if v in hybrid_no:
                return
            hybrid_no[v] = len(hybrid_no) + 1
        for child in sorted(net.children(v), key=ranks.__getitem__):
            assign_numbers(child)

    def emit(v: int) -> str:
        if net.is_leaf(v):
            return net.leaf_labels[v]
        if net.is_reticulation(v):
            if v in emitted:
                return f"#H{hybrid_no[v]}"
            emitted.add(v)
            child = net.children(v)[0]
            return f"({emit(child)})#H{hybrid_no[v]}"
        parts = [emit(c) for c in
                 sorted(net.children(v), key=ranks.__getitem__)]
        return "(" + ",".join(parts) + ")"

    top = net.children(net.root)[0]
    assign_numbers(top)
    return emit(top) + ";"


def parse_edge_list(text: str):
    """Unrooted network from ``u -- v`` edge lines plus ``leaf <node>
    <label>`` lines.  Blank lines and ``#`` comments are skipped."""
    from .unrooted import UnrootedNetwork
    edges = []
    labels = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) == 3 and parts[1] == "--":
            try:
                edges.append((int(parts[0]), int(parts[2])))
            except ValueError:
                raise SyntaxError(f"bad edge on line {lineno}: {raw!r}") from None
        elif len(parts) == 3 and parts[0] == "leaf":
            try:
                labels[int(parts[1])] = parts[2]
            except ValueError:
                raise SyntaxError(f"bad leaf on line {lineno}: {raw!r}") from None
        else:
            raise SyntaxError(f"unrecognized line {lineno}: {raw!r}")
    return UnrootedNetwork.checked(edges, labels)


def write_edge_list(unrooted) -> str:
    """Render with canonical node ranks so isomorphic networks produce
    byte-identical text."""
    from .unrooted import unrooted_canonical_labeling
    ranks = unrooted_canonical_labeling(unrooted)
    lines = []
    for a, b in sorted(tuple(sorted((ranks[x], ranks[y])))
                       for x, y in unrooted.edges):
        lines.append(f"{a} -- {b}")
    for v, lab in sorted(unrooted.leaf_labels.items(),
                         key=lambda item: item[1]):
        lines.append(f"leaf {ranks[v]} {lab}")
    return "\n".join(lines) + "\n"

"""Line-oriented text format for bound quivers.

    quiver NAME
    vertex ID+
    arrow ID: SRC -> DST
    relation TERM (+|- [COEF] TERM)*
    grade ID INT
    # comment

TERM lists arrows in traversal order separated by '.', COEF is an optional
rational p/q. Vertex ids are identifiers, integers or tuples like (1,0).
"""

import re
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

from .algebra import BoundQuiver, LinearCombination
from .errors import ParseError, QuiverLabError
from .quiver import Grading, validate, vertex_label

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_@]*")
_INT = re.compile(r"-?\d+")
_COEF = re.compile(r"\d+(?:/\d+)?")


@dataclass
class QuiverDocument:
    name: str
    vertices: list = field(default_factory=list)
    arrows: list = field(default_factory=list)  # (id, source, target)
    relations: list = field(default_factory=list)  # [(coef, (arrow ids))]
    grading: dict = field(default_factory=dict)
    lines: dict = field(default_factory=dict, compare=False, repr=False)  # relation index -> line

    def bound_quiver(self):
        q = validate({"vertices": self.vertices, "arrows": self.arrows})
        rels = []
        for k, terms in enumerate(self.relations):
            try:
                rels.append(LinearCombination([(q.path(*ids), c) for c, ids in terms]))
            except (QuiverLabError, KeyError) as exc:
                line = self.lines.get(k, 0)
                detail = f"unknown arrow {exc}" if isinstance(exc, KeyError) else str(exc)
                raise ParseError(f"relation {k + 1}: {detail}", line, 1) from None
        return BoundQuiver(q, rels)

    def grading_object(self):
        if not self.grading:
            return None
        base = min((v for v in self.vertices if self.grading.get(v) == 0), key=self.vertices.index, default=None)
        return Grading(base, dict(self.grading))


class _Cursor:
    def __init__(self, text, line):
        self.text, self.pos, self.line = text, 0, line

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def done(self):
        self.skip()
        return self.pos >= len(self.text)

    def fail(self, message):
        raise ParseError(message, self.line, self.pos + 1)

    def match(self, pattern, what):
        self.skip()
        m = pattern.match(self.text, self.pos)
        if not m:
            self.fail(f"expected {what}")
        self.pos = m.end()
        return m.group()

    def literal(self, token):
        self.skip()
        if not self.text.startswith(token, self.pos):
            self.fail(f"expected '{token}'")
        self.pos += len(token)

    def peek(self, token):
        self.skip()
        return self.text.startswith(token, self.pos)

    def vertex(self):
        self.skip()
        if self.peek("("):
            self.pos += 1
            parts = [self.vertex()]
            while self.peek(","):
                self.pos += 1
                parts.append(self.vertex())
            self.literal(")")
            return tuple(parts)
        m = _INT.match(self.text, self.pos)
        if m and not _IDENT.match(self.text, m.end()):
            self.pos = m.end()
            return int(m.group())
        return self.match(_IDENT, "vertex id")

    def term(self):
        ids = [self.match(_IDENT, "arrow id")]
        while self.peek("."):
            self.pos += 1
            ids.append(self.match(_IDENT, "arrow id"))
        return tuple(ids)

    def coefficient(self):
        self.skip()
        m = _COEF.match(self.text, self.pos)
        if not m:
            return Fraction(1)
        self.pos = m.end()
        value = Fraction(m.group())
        if value == 0:
            self.fail("zero coefficient")
        return value


def parse(text):
    doc = None
    for number, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].rstrip()
        if not body.strip():
            continue
        cur = _Cursor(body, number)
        keyword = cur.match(_IDENT, "keyword")
        if keyword == "quiver":
            if doc is not None:
                cur.fail("second 'quiver' header")
            doc = QuiverDocument(cur.match(_IDENT, "quiver name"))
        elif doc is None:
            cur.fail("document must start with 'quiver NAME'")
        elif keyword == "vertex":
            if cur.done():
                cur.fail("expected vertex id")
            while not cur.done():
                doc.vertices.append(cur.vertex())
        elif keyword == "arrow":
            aid = cur.match(_IDENT, "arrow id")
            cur.literal(":")
            src = cur.vertex()
            cur.literal("->")
            if cur.done():
                cur.fail("expected target vertex")
            dst = cur.vertex()
            doc.arrows.append((aid, src, dst))
        elif keyword == "relation":
            terms = []
            sign = Fraction(1)
            if cur.peek("-"):
                cur.pos += 1
                sign = Fraction(-1)
            elif cur.peek("+"):
                cur.pos += 1
            while True:
                coef = cur.coefficient()
                terms.append((sign * coef, cur.term()))
                if cur.done():
                    break
                if cur.peek("+"):
                    sign = Fraction(1)
                elif cur.peek("-"):
                    sign = Fraction(-1)
                else:
                    cur.fail("expected '+' or '-'")
                cur.pos += 1
            doc.lines[len(doc.relations)] = number
            doc.relations.append(terms)
        elif keyword == "grade":
            v = cur.vertex()
            doc.grading[v] = int(cur.match(_INT, "integer grade"))
        else:
            raise ParseError(f"unknown keyword '{keyword}'", number, 1)
        if not cur.done():
            cur.fail("unexpected trailing text")
    if doc is None:
        raise ParseError("empty document", 1, 1)
    return doc


def _coef_text(c):
    return "" if c == 1 else f"{c} "


def serialize(doc):
    out = [f"quiver {doc.name}"]
    if doc.vertices:
        out.append("vertex " + " ".join(vertex_label(v) for v in doc.vertices))
    for aid, s, t in doc.arrows:
        out.append(f"arrow {aid}: {vertex_label(s)} -> {vertex_label(t)}")
    for terms in doc.relations:
        parts = []
        for k, (c, ids) in enumerate(terms):
            word = ".".join(ids)
            if k == 0:
                parts.append(("-" if c < 0 else "") + _coef_text(abs(c)) + word)
            else:
                parts.append(("- " if c < 0 else "+ ") + _coef_text(abs(c)) + word)
        out.append("relation " + " ".join(parts))
    for v, g in doc.grading.items():
        out.append(f"grade {vertex_label(v)} {g}")
    return "\n".join(out) + "\n"


def document_from(bq, name="quiver"):
    q = bq.quiver
    rels = [[(c, p.arrows) for p, c in r.terms.items()] for r in bq.relations]
    return QuiverDocument(name, list(q.vertices), [(a.id, a.source, a.target) for a in q.arrows], rels)


def fixture_names():
    return sorted(p.name[:-3] for p in resources.files("quiverlab.fixtures").iterdir() if p.name.endswith(".qv"))


def fixture_text(name):
    path = resources.files("quiverlab.fixtures") / f"{name}.qv"
    if not path.is_file():
        raise QuiverLabError(f"unknown fixture '{name}'; available: {', '.join(fixture_names())}")
    return path.read_text()


def load_fixture(name):
    return parse(fixture_text(name))


def parse_vertex(text):
    """Vertex id from command-line text such as "3", "v" or "(1,0,0)"."""
    cur = _Cursor(text.strip(), 1)
    v = cur.vertex()
    if not cur.done():
        cur.fail("unexpected trailing text")
    return v

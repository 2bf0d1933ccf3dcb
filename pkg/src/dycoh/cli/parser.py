"""
Parser for the line-oriented presentation format.

A file is a sequence of statements, one per line, with ``#`` comments::

    field F 2

    category vec_z2
      objects e g
      hom e e : id_e
      hom g g : id_g
      identity e = 1 id_e
      identity g = 1 id_g
      tensor e e = e
      tensor e g = g
      tensor g e = g
      tensor g g = e
      compose id_e . id_e = 1 id_e
      compose id_g . id_g = 1 id_g
      tensor id_e id_e = 1 id_e
      ...
    end

Structure constants are sparse: every omitted entry is zero.  Linear
combinations are written as ``scalar name`` pairs, optionally joined by
``+``, or as the single token ``0``.  Scalars are integers or ``p/q``.

Parsing is total.  Any input either produces a :class:`PresentationFile` or
raises :class:`ParseError` with a list of diagnostics, each carrying a span.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field as dc_field, replace
from fractions import Fraction

from ..dycomplex import SquareMorphism
from ..errors import DYError
from ..hochschild import (HochCochain, build_algebra, build_bimodule, extend_bimodule, regular_bimodule,
                          tuples as hoch_tuples, unitalize_algebra)
from ..linalg import FieldSpec, Matrix
from ..presentations import (FunctorPresentation, _check_functor_structure, build_category, compose_functors,
                             inclusion_by_names, unitalize_category)

NAME_RE = re.compile(r"[A-Za-z0-9_'^]+\Z")
SCALAR_RE = re.compile(r"-?[0-9]+(/[0-9]+)?\Z")
_TOKEN_RE = re.compile(r"\s+|->|[=:.+]|-?[A-Za-z0-9_'^/]+")

MAX_SCALAR_CHARS = 200

KEYWORDS = ("field", "category", "functor", "algebra", "bimodule", "square", "cochain")


@dataclass(frozen=True)
class Span:
    line: int
    col: int
    end_col: int

    def __str__(self):
        return f"{self.line}:{self.col}"


@dataclass(frozen=True)
class Diagnostic:
    span: Span
    kind: str  # lexical | syntax | resolution | arity | semantic
    message: str
    related: tuple = ()

    def format(self, source="<input>"):
        extra = "".join(f" (see {source}:{r})" for r in self.related)
        return f"{source}:{self.span}: {self.kind} error: {self.message}{extra}"


class ParseError(DYError):
    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        first = self.diagnostics[0].format() if self.diagnostics else "parse failed"
        super().__init__(first)


@dataclass(frozen=True)
class Token:
    text: str
    span: Span


@dataclass
class PresentationFile:
    field: FieldSpec | None = None
    categories: dict = dc_field(default_factory=dict)
    functors: dict = dc_field(default_factory=dict)
    algebras: dict = dc_field(default_factory=dict)
    bimodules: dict = dc_field(default_factory=dict)
    squares: dict = dc_field(default_factory=dict)
    cochains: dict = dc_field(default_factory=dict)
    spans: dict = dc_field(default_factory=dict)

    def kind_of(self, name):
        for kind in ("categories", "functors", "algebras", "bimodules", "squares", "cochains"):
            if name in getattr(self, kind):
                return kind
        return None

    def lookup(self, kind, name):
        return getattr(self, kind).get(name)

    def functor(self, name):
        """Named functor; ``id`` or ``id:CAT`` resolve to identity functors."""
        if name in self.functors:
            return self.functors[name]
        if name.startswith("id:") and name[3:] in self.categories:
            return self.categories[name[3:]].identity_functor
        if name == "id" and len(self.categories) == 1:
            return next(iter(self.categories.values())).identity_functor
        return None


# -- lexing -------------------------------------------------------------------


def tokenize(line, lineno, diags):
    """Tokens of one line; returns None after recording a lexical diagnostic."""
    text = line.split("#", 1)[0]
    out, pos = [], 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            diags.append(Diagnostic(Span(lineno, pos + 1, pos + 2), "lexical",
                                    f"unexpected character {text[pos]!r}"))
            return None
        if not m.group().isspace():
            out.append(Token(m.group(), Span(lineno, pos + 1, m.end() + 1)))
        pos = m.end()
    return out


class _Fail(Exception):
    """Abort the current statement; the diagnostic is already recorded."""


def _span_over(tokens, fallback):
    if not tokens:
        return fallback
    return Span(tokens[0].span.line, tokens[0].span.col, tokens[-1].span.end_col)


# -- the parser -------------------------------------------------------------------


class _Parser:
    def __init__(self, text, env=None):
        self.diags = []
        self.file = env if env is not None else PresentationFile()
        self.lines = []
        for i, raw in enumerate(text.splitlines(), start=1):
            toks = tokenize(raw, i, self.diags)
            if toks:
                self.lines.append(toks)
        self.pos = 0

    # -- helpers

    def error(self, span, kind, message, related=()):
        self.diags.append(Diagnostic(span, kind, message, tuple(related)))
        raise _Fail

    def expect_name(self, tok, what="name"):
        if tok is None:
            raise _Fail
        if not NAME_RE.match(tok.text):
            self.error(tok.span, "syntax", f"expected a {what}, found {tok.text!r}")
        return tok.text

    def want(self, toks, i, text, line_span):
        if i >= len(toks):
            self.error(line_span, "syntax", f"expected {text!r} at end of line")
        if toks[i].text != text:
            self.error(toks[i].span, "syntax", f"expected {text!r}, found {toks[i].text!r}")

    def arity(self, toks, n, line_span, form):
        if len(toks) != n:
            span = _span_over(toks[n:], line_span) if len(toks) > n else line_span
            self.error(span, "arity", f"expected the form `{form}`")

    def scalar(self, tok):
        field = self.require_field(tok.span)
        if not SCALAR_RE.match(tok.text):
            self.error(tok.span, "syntax", f"expected a scalar, found {tok.text!r}")
        if len(tok.text) > MAX_SCALAR_CHARS:
            self.error(tok.span, "semantic", f"scalar longer than {MAX_SCALAR_CHARS} characters")
        num, _, den = tok.text.partition("/")
        if den and int(den) == 0:
            self.error(tok.span, "semantic", "zero denominator")
        try:
            return field(Fraction(int(num), int(den) if den else 1))
        except ZeroDivisionError:
            self.error(tok.span, "semantic", f"{tok.text} has no value in {field}")

    def require_field(self, span):
        if self.file.field is None:
            self.error(span, "resolution", "no field declared before this line (use `field Q` or `field F p`)")
        return self.file.field

    def combo(self, toks, basis, line_span, what):
        """Coordinates of a linear combination over the named ``basis``."""
        field = self.require_field(line_span)
        out = [field.zero] * len(basis)
        if not toks:
            self.error(line_span, "syntax", f"missing right-hand side for {what}")
        if len(toks) == 1 and toks[0].text == "0":
            return tuple(out)
        i = 0
        while i < len(toks):
            if toks[i].text == "+" and i > 0:
                i += 1
                continue
            if i + 1 >= len(toks):
                self.error(toks[i].span, "syntax", "expected `scalar name` pairs")
            c = self.scalar(toks[i])
            name = self.expect_name(toks[i + 1], "basis name")
            if name not in basis:
                self.error(toks[i + 1].span, "resolution", f"{name!r} is not a basis element of {what}")
            j = basis.index(name)
            out[j] = field.norm(out[j] + c)
            i += 2
        return tuple(out)

    def declare(self, name_tok, kind, value):
        name = name_tok.text
        prev = self.file.spans.get(name)
        if prev is not None:
            self.error(name_tok.span, "resolution", f"{name!r} is already declared", [prev])
        getattr(self.file, kind)[name] = value
        self.file.spans[name] = name_tok.span

    def resolve(self, tok, kind, what):
        name = self.expect_name(tok, f"{what} name")
        if kind == "functors":
            val = self.file.functor(name)
        else:
            val = self.file.lookup(kind, name)
        if val is None:
            self.error(tok.span, "resolution", f"undeclared {what} {name!r}")
        return val

    # -- driver

    def run(self):
        while self.pos < len(self.lines):
            toks = self.lines[self.pos]
            self.pos += 1
            try:
                self.statement(toks)
            except _Fail:
                pass
            except DYError as exc:  # builder rejected the data
                self.diags.append(Diagnostic(_span_over(toks[:2], toks[0].span), "semantic", str(exc)))
        return self.file, self.diags

    def body(self, header):
        """Lines up to the matching ``end``; a missing ``end`` is a diagnostic."""
        out = []
        while self.pos < len(self.lines):
            toks = self.lines[self.pos]
            self.pos += 1
            if toks[0].text == "end":
                if len(toks) > 1:
                    self.diags.append(Diagnostic(_span_over(toks[1:], toks[0].span), "arity",
                                                 "`end` takes no arguments"))
                return out
            if toks[0].text in KEYWORDS:
                self.pos -= 1
                break
            out.append(toks)
        self.error(_span_over(header, header[0].span), "syntax", f"block `{header[0].text}` is never closed by `end`")

    def statement(self, toks):
        head = toks[0]
        line_span = _span_over(toks, head.span)
        kw = head.text
        if kw == "field":
            return self.field_stmt(toks, line_span)
        if kw == "end":
            self.error(head.span, "syntax", "`end` without an open block")
        if kw not in KEYWORDS:
            self.error(head.span, "syntax", f"unknown statement {kw!r}")
        if len(toks) < 2:
            self.error(line_span, "arity", f"`{kw}` needs a name")
        self.expect_name(toks[1])
        self.require_field(line_span)
        handler = getattr(self, f"{kw}_stmt")
        return handler(toks, line_span)

    def field_stmt(self, toks, line_span):
        if self.file.field is not None:
            self.error(toks[0].span, "semantic", "the field is declared once per file")
        if len(toks) == 2 and toks[1].text == "Q":
            self.file.field = FieldSpec.rationals()
            return
        if len(toks) == 3 and toks[1].text == "F" and toks[2].text.isdigit() and len(toks[2].text) <= 6:
            p = int(toks[2].text)
            try:
                self.file.field = FieldSpec.prime(p)
            except ValueError:
                self.error(toks[2].span, "semantic", f"{p} is not a prime")
            return
        self.error(line_span, "syntax", "expected `field Q` or `field F p`")

    # -- categories

    def category_stmt(self, toks, line_span):
        if len(toks) > 2:
            self.want(toks, 2, "=", line_span)
            self.arity(toks, 5, line_span, "category NAME = unitalize CAT")
            self.want(toks, 3, "unitalize", line_span)
            c = self.resolve(toks[4], "categories", "category")
            self.declare(toks[1], "categories", unitalize_category(c, name=toks[1].text))
            return
        body = self.body(toks)
        self.declare(toks[1], "categories", self.category_body(toks, body))

    def category_body(self, header, body):
        field = self.file.field
        name = header[1].text
        hspan = _span_over(header, header[0].span)
        objects, obj_spans = [], {}
        homs = {}  # (x, y) -> list of names
        mor = {}  # morphism name -> (x, y, i)
        mor_spans = {}
        rest = []
        objects_line = None
        failed = False
        for toks in body:
            ls = _span_over(toks, toks[0].span)
            try:
                if toks[0].text == "objects":
                    if objects_line is not None:
                        self.error(toks[0].span, "semantic", "objects are declared once", [objects_line])
                    objects_line = toks[0].span
                    for t in toks[1:]:
                        n = self.expect_name(t, "object name")
                        if n in obj_spans:
                            self.error(t.span, "resolution", f"duplicate object {n!r}", [obj_spans[n]])
                        obj_spans[n] = t.span
                        objects.append(n)
                elif toks[0].text == "hom":
                    rest.append(("hom", toks, ls))
                else:
                    rest.append((toks[0].text, toks, ls))
            except _Fail:
                failed = True
        if objects_line is None:
            self.error(hspan, "syntax", f"category {name!r} declares no objects")
        if not objects:
            self.error(objects_line, "arity", "a category needs at least one object")
        oidx = {n: i for i, n in enumerate(objects)}
        n = len(objects)

        def obj(tok):
            nm = self.expect_name(tok, "object name")
            if nm not in oidx:
                self.error(tok.span, "resolution", f"undeclared object {nm!r} in category {name!r}")
            return oidx[nm]

        def morphism(tok):
            nm = self.expect_name(tok, "morphism name")
            if nm not in mor:
                self.error(tok.span, "resolution", f"undeclared morphism {nm!r} in category {name!r}")
            return mor[nm]

        for kind, toks, ls in rest:
            if kind != "hom":
                continue
            try:
                if len(toks) < 4:
                    self.error(ls, "arity", "expected `hom X Y : f1 f2 ...`")
                x, y = obj(toks[1]), obj(toks[2])
                self.want(toks, 3, ":", ls)
                if (x, y) in homs:
                    self.error(toks[0].span, "semantic",
                               f"Hom({objects[x]}, {objects[y]}) is declared twice", [homs[(x, y)][1]])
                names = []
                for i, t in enumerate(toks[4:]):
                    nm = self.expect_name(t, "morphism name")
                    if nm in mor_spans or nm in oidx:
                        other = mor_spans.get(nm) or obj_spans[nm]
                        self.error(t.span, "resolution", f"name {nm!r} is already used", [other])
                    mor[nm] = (x, y, i)
                    mor_spans[nm] = t.span
                    names.append(nm)
                homs[(x, y)] = (names, toks[0].span)
            except _Fail:
                failed = True
        hom_dim = [[len(homs.get((x, y), ((),))[0]) for y in range(n)] for x in range(n)]
        basis = {k: v[0] for k, v in homs.items()}

        def hom_basis(x, y):
            return basis.get((x, y), [])

        tensor = [[None] * n for _ in range(n)]
        tensor_spans = {}
        identity = {}
        compose, tensor_mor, assoc = {}, {}, {}
        seen = {}
        unit = None
        for kind, toks, ls in rest:
            if kind == "hom":
                continue
            try:
                if kind == "identity":
                    self.want(toks, 2, "=", ls)
                    x = obj(toks[1])
                    key = ("identity", x)
                    self._once(seen, key, toks[0].span, f"identity of {objects[x]}")
                    identity[x] = self.combo(toks[3:], hom_basis(x, x), ls, f"End({objects[x]})")
                elif kind == "tensor":
                    if len(toks) < 4:
                        self.error(ls, "arity", "expected `tensor A B = C` or `tensor f g = ...`")
                    self.want(toks, 3, "=", ls)
                    a, b = toks[1].text, toks[2].text
                    if a not in oidx and b not in oidx and a not in mor and b not in mor:
                        self.error(toks[1].span, "resolution",
                                   f"undeclared name {a!r}: neither an object nor a morphism of {name!r}")
                    # one known object is enough to read the line as an object tensor
                    if a in oidx or b in oidx:
                        self.arity(toks, 5, ls, "tensor A B = C")
                        x, y = obj(toks[1]), obj(toks[2])
                        self._once(seen, ("otensor", x, y), toks[0].span, f"tensor {a} {b}")
                        tensor[x][y] = obj(toks[4])
                        tensor_spans[(x, y)] = ls
                    else:
                        f, g = morphism(toks[1]), morphism(toks[2])
                        if tensor[f[0]][g[0]] is None or tensor[f[1]][g[1]] is None:
                            self.error(ls, "resolution", "object tensor products must be declared before "
                                                         "tensoring morphisms between them")
                        self._once(seen, ("mtensor", a, b), toks[0].span, f"tensor {a} {b}")
                        src, tgt = tensor[f[0]][g[0]], tensor[f[1]][g[1]]
                        v = self.combo(toks[4:], hom_basis(src, tgt), ls,
                                       f"Hom({objects[src]}, {objects[tgt]})")
                        tensor_mor.setdefault((f[0], f[1], g[0], g[1]), {})[(f[2], g[2])] = v
                elif kind == "compose":
                    if len(toks) < 5:
                        self.error(ls, "arity", "expected `compose g . f = ...`")
                    self.want(toks, 2, ".", ls)
                    self.want(toks, 4, "=", ls)
                    g, f = morphism(toks[1]), morphism(toks[3])
                    if f[1] != g[0]:
                        self.error(_span_over(toks[1:4], ls), "semantic",
                                   f"{toks[1].text} . {toks[3].text} is not composable")
                    self._once(seen, ("compose", toks[1].text, toks[3].text), toks[0].span,
                               f"compose {toks[1].text} . {toks[3].text}")
                    v = self.combo(toks[5:], hom_basis(f[0], g[1]), ls,
                                   f"Hom({objects[f[0]]}, {objects[g[1]]})")
                    compose.setdefault((f[0], f[1], g[1]), {})[(f[2], g[2])] = v
                elif kind == "assoc":
                    if len(toks) < 5:
                        self.error(ls, "arity", "expected `assoc X Y Z = ...`")
                    self.want(toks, 4, "=", ls)
                    x, y, z = obj(toks[1]), obj(toks[2]), obj(toks[3])
                    self._once(seen, ("assoc", x, y, z), toks[0].span, "associator entry")
                    assoc[(x, y, z)] = (toks[5:], ls)
                elif kind == "unit":
                    self.arity(toks, 2, ls, "unit X")
                    if unit is not None:
                        self.error(toks[0].span, "semantic", "the unit is declared once")
                    unit = obj(toks[1])
                else:
                    self.error(toks[0].span, "syntax", f"unknown category entry {kind!r}")
            except _Fail:
                failed = True
        if failed:
            raise _Fail
        missing = [f"{objects[x]} {objects[y]}" for x in range(n) for y in range(n) if tensor[x][y] is None]
        if missing:
            self.error(hspan, "semantic", f"object tensor table of {name!r} is incomplete: missing {missing[0]}")
        for x in range(n):
            if x not in identity:
                if hom_dim[x][x]:
                    self.error(hspan, "semantic", f"identity of {objects[x]} is not declared")
                identity[x] = ()
        associator = None
        if assoc:
            associator = {}
            for x, y, z in itertools.product(range(n), repeat=3):
                src = tensor[x][tensor[y][z]]
                tgt = tensor[tensor[x][y]][z]
                entry = assoc.get((x, y, z))
                if entry is None:
                    associator[(x, y, z)] = (field.zero,) * hom_dim[src][tgt]
                else:
                    associator[(x, y, z)] = self.combo(entry[0], hom_basis(src, tgt), entry[1],
                                                       f"Hom({objects[src]}, {objects[tgt]})")
        hom_names = {k: tuple(v) for k, v in basis.items() if v}
        try:
            return build_category(field, objects, tensor, hom_dim, [identity[x] for x in range(n)], compose,
                                  tensor_mor, associator, unit, False, name, hom_names)
        except DYError as exc:
            self.error(hspan, "semantic", str(exc))

    def _once(self, seen, key, span, what):
        if key in seen:
            self.error(span, "semantic", f"{what} is given twice", [seen[key]])
        seen[key] = span

    # -- functors

    def functor_stmt(self, toks, line_span):
        if len(toks) > 2 and toks[2].text == "=":
            if len(toks) < 4:
                self.error(line_span, "arity", "expected a functor expression after `=`")
            form = toks[3].text
            if form == "identity":
                self.arity(toks, 5, line_span, "functor NAME = identity CAT")
                f = self.resolve(toks[4], "categories", "category").identity_functor
            elif form == "inclusion":
                self.arity(toks, 7, line_span, "functor NAME = inclusion CAT -> CAT")
                self.want(toks, 5, "->", line_span)
                s = self.resolve(toks[4], "categories", "category")
                t = self.resolve(toks[6], "categories", "category")
                f = inclusion_by_names(s, t, name=toks[1].text)
            else:
                self.arity(toks, 6, line_span, "functor NAME = G . F")
                self.want(toks, 4, ".", line_span)
                g = self.resolve(toks[3], "functors", "functor")
                f = self.resolve(toks[5], "functors", "functor")
                f = compose_functors(f, g, name=toks[1].text)
            self.declare(toks[1], "functors", f)
            return
        self.arity(toks, 6, line_span, "functor NAME : SOURCE -> TARGET")
        self.want(toks, 2, ":", line_span)
        self.want(toks, 4, "->", line_span)
        s = self.resolve(toks[3], "categories", "category")
        t = self.resolve(toks[5], "categories", "category")
        body = self.body(toks)
        self.declare(toks[1], "functors", self.functor_body(toks, body, s, t))

    def functor_body(self, header, body, s, t):
        name = header[1].text
        hspan = _span_over(header, header[0].span)
        field = self.file.field
        n = s.n_objects
        omap, hom_images, phi, seen = {}, {}, {}, {}
        mor = {}
        for (x, y), names in s.hom_names.items():
            for i, nm in enumerate(names):
                mor[nm] = (x, y, i)
        failed = False
        deferred = []
        for toks in body:
            ls = _span_over(toks, toks[0].span)
            try:
                if toks[0].text == "object":
                    self.arity(toks, 4, ls, "object X = Y")
                    self.want(toks, 2, "=", ls)
                    x = self._obj(s, toks[1])
                    self._once(seen, ("object", x), toks[0].span, f"image of {s.objects[x]}")
                    omap[x] = self._obj(t, toks[3])
                elif toks[0].text in ("hom", "phi"):
                    deferred.append((toks, ls))
                else:
                    self.error(toks[0].span, "syntax", f"unknown functor entry {toks[0].text!r}")
            except _Fail:
                failed = True
        if failed:
            raise _Fail
        if len(omap) != n:
            miss = next(s.objects[x] for x in range(n) if x not in omap)
            self.error(hspan, "semantic", f"functor {name!r} does not map object {miss!r}")
        for toks, ls in deferred:
            try:
                if toks[0].text == "hom":
                    if len(toks) < 3:
                        self.error(ls, "arity", "expected `hom f = ...`")
                    self.want(toks, 2, "=", ls)
                    nm = self.expect_name(toks[1], "morphism name")
                    if nm not in mor:
                        self.error(toks[1].span, "resolution", f"undeclared morphism {nm!r} in {s.name!r}")
                    x, y, i = mor[nm]
                    self._once(seen, ("hom", nm), toks[0].span, f"image of {nm}")
                    fx, fy = omap[x], omap[y]
                    hom_images[(x, y, i)] = self.combo(toks[3:], list(t.hom_names.get((fx, fy), ())), ls,
                                                       f"Hom({t.objects[fx]}, {t.objects[fy]})")
                else:
                    if len(toks) < 4:
                        self.error(ls, "arity", "expected `phi X Y = ...`")
                    self.want(toks, 3, "=", ls)
                    x, y = self._obj(s, toks[1]), self._obj(s, toks[2])
                    self._once(seen, ("phi", x, y), toks[0].span, f"phi {s.objects[x]} {s.objects[y]}")
                    src = t.tensor(omap[x], omap[y])
                    tgt = omap[s.tensor(x, y)]
                    phi[(x, y)] = self.combo(toks[4:], list(t.hom_names.get((src, tgt), ())), ls,
                                             f"Hom({t.objects[src]}, {t.objects[tgt]})")
            except _Fail:
                failed = True
        if failed:
            raise _Fail
        maps = {}
        for x, y in itertools.product(range(n), repeat=2):
            rows = t.dim(omap[x], omap[y])
            cols = [hom_images.get((x, y, i), (field.zero,) * rows) for i in range(s.dim(x, y))]
            maps[(x, y)] = Matrix.from_columns(field, cols, nrows=rows) if cols else Matrix.zeros(field, rows, 0)
        full_phi = None
        if phi:
            full_phi = {}
            for x, y in itertools.product(range(n), repeat=2):
                d = t.dim(t.tensor(omap[x], omap[y]), omap[s.tensor(x, y)])
                full_phi[(x, y)] = phi.get((x, y), (field.zero,) * d)
        f = FunctorPresentation(s, t, tuple(omap[x] for x in range(n)), maps, full_phi, name=name)
        try:
            _check_functor_structure(f)
        except DYError as exc:
            self.error(hspan, "semantic", str(exc))
        return f

    def _obj(self, c, tok):
        nm = self.expect_name(tok, "object name")
        if nm not in c.objects:
            self.error(tok.span, "resolution", f"undeclared object {nm!r} in category {c.name!r}")
        return c.objects.index(nm)

    # -- algebras and bimodules

    def algebra_stmt(self, toks, line_span):
        if len(toks) > 2:
            self.arity(toks, 5, line_span, "algebra NAME = unitalize ALG")
            self.want(toks, 2, "=", line_span)
            self.want(toks, 3, "unitalize", line_span)
            a = self.resolve(toks[4], "algebras", "algebra")
            self.declare(toks[1], "algebras", unitalize_algebra(a, name=toks[1].text))
            return
        body = self.body(toks)
        hspan = _span_over(toks, toks[0].span)
        names = self._basis_line(body, hspan, f"algebra {toks[1].text!r}")
        mul, unit, seen, failed = {}, None, {}, False
        for t in body:
            ls = _span_over(t, t[0].span)
            try:
                if t[0].text == "basis":
                    continue
                if t[0].text == "mul":
                    if len(t) < 4:
                        self.error(ls, "arity", "expected `mul a b = ...`")
                    self.want(t, 3, "=", ls)
                    i, j = self._member(names, t[1], "basis element"), self._member(names, t[2], "basis element")
                    self._once(seen, ("mul", i, j), t[0].span, f"mul {t[1].text} {t[2].text}")
                    mul[(i, j)] = self.combo(t[4:], names, ls, f"algebra {toks[1].text!r}")
                elif t[0].text == "unit":
                    self.want(t, 1, "=", ls)
                    self._once(seen, ("unit",), t[0].span, "unit")
                    unit = self.combo(t[2:], names, ls, f"algebra {toks[1].text!r}")
                else:
                    self.error(t[0].span, "syntax", f"unknown algebra entry {t[0].text!r}")
            except _Fail:
                failed = True
        if failed:
            raise _Fail
        try:
            a = build_algebra(self.file.field, names, mul, unit, name=toks[1].text)
        except DYError as exc:
            self.error(hspan, "semantic", str(exc))
        self.declare(toks[1], "algebras", a)

    def bimodule_stmt(self, toks, line_span):
        if len(toks) > 2 and toks[2].text == "=":
            if len(toks) >= 4 and toks[3].text == "regular":
                self.arity(toks, 5, line_span, "bimodule NAME = regular ALG")
                a = self.resolve(toks[4], "algebras", "algebra")
                m = regular_bimodule(a, name=toks[1].text)
            else:
                self.arity(toks, 7, line_span, "bimodule NAME = extend MOD to ALG")
                self.want(toks, 3, "extend", line_span)
                self.want(toks, 5, "to", line_span)
                m0 = self.resolve(toks[4], "bimodules", "bimodule")
                au = self.resolve(toks[6], "algebras", "algebra")
                if au.adjoined_from is not m0.algebra:
                    self.error(toks[6].span, "semantic",
                               f"{toks[6].text!r} is not the unitalization of {m0.algebra.name!r}")
                m = extend_bimodule(m0, au)
                m = replace(m, name=toks[1].text, _cache={})
            self.declare(toks[1], "bimodules", m)
            return
        self.arity(toks, 4, line_span, "bimodule NAME over ALG")
        self.want(toks, 2, "over", line_span)
        a = self.resolve(toks[3], "algebras", "algebra")
        body = self.body(toks)
        hspan = _span_over(toks, toks[0].span)
        names = self._basis_line(body, hspan, f"bimodule {toks[1].text!r}")
        left, right, seen, failed = {}, {}, {}, False
        for t in body:
            ls = _span_over(t, t[0].span)
            try:
                if t[0].text == "basis":
                    continue
                if t[0].text in ("left", "right"):
                    if len(t) < 4:
                        self.error(ls, "arity", f"expected `{t[0].text} x y = ...`")
                    self.want(t, 3, "=", ls)
                    if t[0].text == "left":
                        i = self._member(a.names, t[1], "algebra basis element")
                        j = self._member(names, t[2], "module basis element")
                    else:
                        i = self._member(names, t[1], "module basis element")
                        j = self._member(a.names, t[2], "algebra basis element")
                    self._once(seen, (t[0].text, i, j), t[0].span, f"{t[0].text} {t[1].text} {t[2].text}")
                    (left if t[0].text == "left" else right)[(i, j)] = self.combo(
                        t[4:], names, ls, f"bimodule {toks[1].text!r}")
                else:
                    self.error(t[0].span, "syntax", f"unknown bimodule entry {t[0].text!r}")
            except _Fail:
                failed = True
        if failed:
            raise _Fail
        try:
            m = build_bimodule(a, names, left, right, name=toks[1].text)
        except DYError as exc:
            self.error(hspan, "semantic", str(exc))
        self.declare(toks[1], "bimodules", m)

    def _basis_line(self, body, hspan, what):
        lines = [t for t in body if t[0].text == "basis"]
        if not lines:
            self.error(hspan, "syntax", f"{what} declares no basis")
        if len(lines) > 1:
            self.error(lines[1][0].span, "semantic", "the basis is declared once", [lines[0][0].span])
        names, spans = [], {}
        for t in lines[0][1:]:
            nm = self.expect_name(t, "basis name")
            if nm in spans:
                self.error(t.span, "resolution", f"duplicate basis name {nm!r}", [spans[nm]])
            spans[nm] = t.span
            names.append(nm)
        return names

    def _member(self, names, tok, what):
        nm = self.expect_name(tok, what)
        if nm not in names:
            self.error(tok.span, "resolution", f"undeclared {what} {nm!r}")
        return list(names).index(nm)

    # -- squares and cochains

    def square_stmt(self, toks, line_span):
        self.arity(toks, 7, line_span, "square NAME : TOP BOTTOM LEFT RIGHT")
        self.want(toks, 2, ":", line_span)
        fs = [self.resolve(t, "functors", "functor") for t in toks[3:7]]
        try:
            sq = SquareMorphism(*fs, name=toks[1].text)
        except DYError as exc:
            self.error(line_span, "semantic", str(exc))
        self.declare(toks[1], "squares", sq)

    def cochain_stmt(self, toks, line_span):
        self.arity(toks, 6, line_span, "cochain NAME in BIMODULE degree N")
        self.want(toks, 2, "in", line_span)
        self.want(toks, 4, "degree", line_span)
        m = self.resolve(toks[3], "bimodules", "bimodule")
        if not toks[5].text.isdigit() or len(toks[5].text) > 2:
            self.error(toks[5].span, "syntax", f"expected a small degree, found {toks[5].text!r}")
        n = int(toks[5].text)
        body = self.body(toks)
        a = m.algebra
        field = self.file.field
        values = {t: (field.zero,) * m.dim for t in hoch_tuples(a, n)}
        seen, failed = {}, False
        for t in body:
            ls = _span_over(t, t[0].span)
            try:
                if t[0].text != "value":
                    self.error(t[0].span, "syntax", f"unknown cochain entry {t[0].text!r}")
                self.want(t, n + 1, "=", ls)
                key = tuple(self._member(a.names, x, "algebra basis element") for x in t[1:n + 1])
                self._once(seen, key, t[0].span, "value at this tuple")
                values[key] = self.combo(t[n + 2:], list(m.names), ls, f"bimodule {m.name!r}")
            except _Fail:
                failed = True
        if failed:
            raise _Fail
        self.declare(toks[1], "cochains", HochCochain(m, n, values))


def try_parse(text, env=None):
    """``(file, diagnostics)``; the file is usable only when diagnostics are empty."""
    if not isinstance(text, str):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            return None, [Diagnostic(Span(1, 1, 2), "lexical", f"input is not UTF-8: {exc.reason}")]
    p = _Parser(text, env)
    f, diags = p.run()
    if not diags and f.field is None:
        diags.append(Diagnostic(Span(1, 1, 2), "syntax", "no `field` declaration"))
    return f, diags


def parse(text, env=None) -> PresentationFile:
    f, diags = try_parse(text, env)
    if diags:
        raise ParseError(diags)
    return f


def parse_path(path, env=None) -> PresentationFile:
    with open(path, "rb") as fh:
        return parse(fh.read(), env)

"""Surface syntax: tokenizer, parser and printer for terms.

Grammar, loosest binding first::

    term   ::= "fun" group+ "=>" term
             | "forall" binders "," term | "exists" binders "," term
             | iff
    group  ::= "(" IDENT+ ":" term ")"
    binders::= IDENT+ ":" term | group+
    iff    ::= arrow ["<->" arrow]
    arrow  ::= or ["->" arrow]
    or     ::= and ["\\/" or]
    and    ::= eq ["/\\" and]
    eq     ::= unary ["=[" term "]" unary]
    unary  ::= "~" unary | app
    app    ::= atom+
    atom   ::= IDENT | "Prop" | "Type" NAT | "False" | list constant | "(" term ")"

A binder may also stand as the right operand of any infix operator. The
logical connectives are expanded to their impredicative encodings while
parsing, so the resulting terms only use the core constructors.
"""
import re
from dataclasses import dataclass

from .syntax import (LIST_CONSTANTS, PROP, App, Const, Lam, Pi, Sort, Var,
                     free_indices, shift)

KEYWORDS = {"fun", "forall", "exists", "Prop", "False", "Type", *LIST_CONSTANTS}

_UNICODE = {"∀": "forall", "λ": "fun", "∃": "exists", "→": "->", "↔": "<->",
            "¬": "~", "∧": "/\\", "∨": "\\/", "⇒": "=>"}

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<type>Type[ \t]*(?P<lvl>\d+))
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<sym><->|->|=>|/\\|\\/|=\[|[()\[\]:,~])
  | (?P<uni>[∀λ∃→↔¬∧∨⇒])
""", re.VERBOSE)


class ParseError(ValueError):
    def __init__(self, msg, line, col):
        super().__init__(f"{msg} at line {line}, column {col}")
        self.msg = msg
        self.line = line
        self.col = col


class UnboundIdentifier(ParseError):
    pass


@dataclass
class Token:
    kind: str       # "ident", "kw", "sym", "type", "eof"
    text: str
    line: int
    col: int
    level: int = 0


def tokenize(text):
    out = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        col = pos - line_start + 1
        kind = m.lastgroup
        s = m.group()
        if kind == "ws":
            nl = s.count("\n")
            if nl:
                line += nl
                line_start = pos + s.rindex("\n") + 1
        elif kind == "type" or kind == "lvl":
            out.append(Token("type", s, line, col, int(m.group("lvl"))))
        elif kind == "ident":
            out.append(Token("kw" if s in KEYWORDS else "ident", s, line, col))
        elif kind == "uni":
            u = _UNICODE[s]
            out.append(Token("kw" if u in KEYWORDS else "sym", u, line, col))
        else:
            out.append(Token("sym", s, line, col))
        pos = m.end()
    out.append(Token("eof", "", line, pos - line_start + 1))
    return out


# -- encodings of the logical connectives ----------------------------------
# every helper takes its arguments in one common scope

FALSE = Pi(PROP, Var(0, "P"), "P")


def arrow(a, b):
    return Pi(a, shift(b, 1), "_")


def neg(a):
    return arrow(a, FALSE)


def conj(a, b):
    a1, b1, p = shift(a, 1), shift(b, 1), Var(0, "P")
    return Pi(PROP, arrow(arrow(a1, arrow(b1, p)), p), "P")


def disj(a, b):
    a1, b1, p = shift(a, 1), shift(b, 1), Var(0, "P")
    return Pi(PROP, arrow(arrow(a1, p), arrow(arrow(b1, p), p)), "P")


def exists(dom, body, hint="x"):
    """``body`` lives in the scope extended by the bound variable."""
    inner = Pi(shift(dom, 1), arrow(shift(body, 1, 1), Var(1, "P")), hint)
    return Pi(PROP, arrow(inner, Var(0, "P")), "P")


def iff(a, b):
    return conj(arrow(a, b), arrow(b, a))


def eq(x, dom, y):
    q = Var(0, "Q")
    return Pi(arrow(dom, PROP), iff(App(q, shift(x, 1)), App(q, shift(y, 1))), "Q")


# -- parser -----------------------------------------------------------------

class _Parser:
    def __init__(self, text, scope):
        self.toks = tokenize(text)
        self.i = 0
        # innermost last; None marks an anonymous (arrow) binder
        self.scope = list(scope)

    @property
    def tok(self):
        return self.toks[self.i]

    def error(self, msg, tok=None):
        tok = tok or self.tok
        return ParseError(msg, tok.line, tok.col)

    def eat(self, text):
        if self.tok.text == text and self.tok.kind in ("sym", "kw"):
            self.i += 1
            return True
        return False

    def expect(self, text):
        if not self.eat(text):
            got = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, got {got!r}")

    def ident(self):
        t = self.tok
        if t.kind != "ident":
            raise self.error(f"expected identifier, got {t.text or 'end of input'!r}")
        self.i += 1
        return t.text

    def lookup(self, name, tok):
        for k in range(len(self.scope) - 1, -1, -1):
            if self.scope[k] == name:
                return Var(len(self.scope) - 1 - k, name)
        raise UnboundIdentifier(f"unbound identifier {name!r}", tok.line, tok.col)

    # binders --------------------------------------------------------------

    def binder_groups(self, allow_bare):
        """``(x y : A) (z : B)`` or bare ``x y : A``; returns [(name, type)]
        with each type expressed in the scope *before* the group's names."""
        groups = []
        if self.tok.text == "(" and self.tok.kind == "sym":
            while self.eat("("):
                names = [self.ident()]
                while self.tok.kind == "ident":
                    names.append(self.ident())
                self.expect(":")
                ty = self.term()
                self.expect(")")
                groups.append((names, ty))
                self.push_group(names)
        elif allow_bare:
            names = [self.ident()]
            while self.tok.kind == "ident":
                names.append(self.ident())
            self.expect(":")
            ty = self.term()
            groups.append((names, ty))
            self.push_group(names)
        else:
            raise self.error("expected '('")
        out = []
        for names, ty in groups:
            for k, n in enumerate(names):
                out.append((n, shift(ty, k)))
        return out

    def push_group(self, names):
        self.scope.extend(names)

    def pop(self, k):
        del self.scope[len(self.scope) - k:]

    def binder(self):
        kw = self.tok.text
        self.i += 1
        if kw == "fun":
            bs = self.binder_groups(allow_bare=False)
            self.expect("=>")
        else:
            bs = self.binder_groups(allow_bare=True)
            self.expect(",")
        body = self.term()
        self.pop(len(bs))
        for name, ty in reversed(bs):
            if kw == "fun":
                body = Lam(ty, body, name)
            elif kw == "forall":
                body = Pi(ty, body, name)
            else:
                body = exists(ty, body, name)
        return body

    def is_binder(self):
        return self.tok.kind == "kw" and self.tok.text in ("fun", "forall", "exists")

    # operators ------------------------------------------------------------

    def term(self):
        if self.is_binder():
            return self.binder()
        lhs = self.arrow()
        if self.eat("<->"):
            return iff(lhs, self.operand(self.arrow))
        return lhs

    def operand(self, level):
        return self.binder() if self.is_binder() else level()

    def arrow(self):
        lhs = self.disj()
        if self.eat("->"):
            self.scope.append(None)
            rhs = self.operand(self.arrow)
            self.pop(1)
            return Pi(lhs, rhs, "_")
        return lhs

    def disj(self):
        lhs = self.conj()
        if self.eat("\\/"):
            return disj(lhs, self.operand(self.disj))
        return lhs

    def conj(self):
        lhs = self.eq()
        if self.eat("/\\"):
            return conj(lhs, self.operand(self.conj))
        return lhs

    def eq(self):
        lhs = self.unary()
        if self.eat("=["):
            dom = self.term()
            self.expect("]")
            return eq(lhs, dom, self.operand(self.unary))
        return lhs

    def unary(self):
        if self.eat("~"):
            return neg(self.operand(self.unary))
        return self.app()

    def app(self):
        head = self.atom()
        while self.starts_atom():
            head = App(head, self.atom())
        return head

    def starts_atom(self):
        t = self.tok
        if t.kind in ("ident", "type"):
            return True
        if t.kind == "kw":
            return t.text in ("Prop", "False", *LIST_CONSTANTS)
        return t.kind == "sym" and t.text == "("

    def atom(self):
        t = self.tok
        if t.kind == "ident":
            self.i += 1
            return self.lookup(t.text, t)
        if t.kind == "type":
            self.i += 1
            return Sort(t.level)
        if t.kind == "kw":
            if t.text == "Prop":
                self.i += 1
                return PROP
            if t.text == "False":
                self.i += 1
                return FALSE
            if t.text in LIST_CONSTANTS:
                self.i += 1
                return Const(t.text)
            if t.text == "Type":
                raise self.error("'Type' needs a level, e.g. Type0")
        if self.eat("("):
            inner = self.term()
            self.expect(")")
            return inner
        raise self.error(f"unexpected {t.text or 'end of input'!r}")


def parse_term(text, ctx_names=()):
    """Parse ``text`` with free identifiers resolved against ``ctx_names``
    (outermost first)."""
    p = _Parser(text, ctx_names)
    t = p.term()
    if p.tok.kind != "eof":
        raise p.error(f"unexpected {p.tok.text!r} after term")
    return t


def parse_context(text):
    """Lines of ``IDENT : term``; blank lines and ``#`` comments are skipped.

    Returns a list of ``(name, type)`` in de Bruijn form.
    """
    ctx = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        ctx.append(parse_context_line(line, [n for n, _ in ctx], lineno))
    return ctx


def parse_context_line(line, names, lineno=1):
    m = re.match(r"\s*([A-Za-z_][A-Za-z0-9_']*)\s*:(?!:)(.*)$", line)
    if m is None:
        raise ParseError("expected 'IDENT : term'", lineno, 1)
    name = m.group(1)
    if name in KEYWORDS or re.fullmatch(r"Type\d+", name):
        raise ParseError(f"{name!r} is reserved", lineno, 1)
    if name in names:
        raise ParseError(f"duplicate context name {name!r}", lineno, 1)
    try:
        ty = parse_term(m.group(2), names)
    except ParseError as e:
        raise type(e)(e.msg, lineno, e.col + m.start(2)) from None
    return name, ty


# -- printer ----------------------------------------------------------------

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_']*\Z")

# precedence levels
_BINDER, _ARROW, _APP, _ATOM = 0, 1, 2, 3


def _fresh(hint, taken):
    base = hint if hint and _IDENT.match(hint) and hint != "_" else "x"
    base = base.rstrip("0123456789") or "x"
    if base in KEYWORDS or re.fullmatch(r"Type\d*", base):
        base = "x"
    cand = hint if hint and _IDENT.match(hint) and hint != "_" else base
    k = 0
    while cand in taken or cand in KEYWORDS or re.fullmatch(r"Type\d+", cand):
        k += 1
        cand = f"{base}{k}"
    return cand


def print_term(t, ctx_names=()):
    """Render ``t``; binder names are freshened so the output re-parses to an
    alpha-equal term."""
    return _pr(t, list(ctx_names), _BINDER)


def _paren(s, level, prec):
    return f"({s})" if level < prec else s


def _pr(t, scope, prec):
    if isinstance(t, Var):
        k = len(scope) - 1 - t.index
        if k < 0 or scope[k] is None:
            raise ValueError(f"index {t.index} is not in scope")
        return scope[k]
    if isinstance(t, Sort):
        return "Prop" if t.level is None else f"Type{t.level}"
    if isinstance(t, Const):
        return t.name
    if isinstance(t, App):
        s = f"{_pr(t.fn, scope, _APP)} {_pr(t.arg, scope, _ATOM)}"
        return _paren(s, _APP, prec)
    if isinstance(t, Pi) and 0 not in free_indices(t.cod):
        dom = _pr(t.dom, scope, _APP)
        cod = _pr(t.cod, scope + [None], _ARROW)
        return _paren(f"{dom} -> {cod}", _ARROW, prec)
    if isinstance(t, (Lam, Pi)):
        taken = {n for n in scope if n is not None}
        name = _fresh(t.hint, taken)
        if isinstance(t, Lam):
            s = f"fun ({name} : {_pr(t.ann, scope, _BINDER)}) => {_pr(t.body, scope + [name], _BINDER)}"
        else:
            s = f"forall {name} : {_pr(t.dom, scope, _BINDER)}, {_pr(t.cod, scope + [name], _BINDER)}"
        return _paren(s, _BINDER, prec)
    raise TypeError(f"not a term: {t!r}")

"""Judgment files and the checked-in corpus.

A judgment file holds a context, one ``IDENT : term`` line per entry, then a
``|- term`` line and optionally a ``:: type`` line. Lines starting with ``#``
are comments and indented lines continue the previous one::

    # modus ponens
    P : Prop
    Q : Prop
    f : P -> Q
    p : P
    |- f p
    :: Q
"""
from dataclasses import dataclass
from pathlib import Path

from .parsing import ParseError, parse_context_line, parse_term
from .syntax import App, Lam, Pi
from .typecheck import Checker, extend

CORPUS_DIR = Path(__file__).parent / "data" / "corpus"
SPACES_DIR = Path(__file__).parent / "data" / "spaces"
PROPS_DIR = Path(__file__).parent / "data" / "props"


@dataclass(frozen=True)
class Entry:
    name: str
    ctx: tuple
    term: object
    ty: object = None

    @property
    def names(self):
        return [n for n, _ in self.ctx]


def _logical_lines(text):
    """Join continuation lines; yields ``(lineno, line)`` without comments."""
    cur = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        if raw[0] in " \t" and cur is not None:
            cur = (cur[0], cur[1] + " " + raw.strip())
            continue
        if cur is not None:
            yield cur
        cur = (lineno, raw.strip())
    if cur is not None:
        yield cur


def parse_judgment(text, name="<judgment>"):
    ctx, names = [], []
    term = ty = None
    for lineno, line in _logical_lines(text):
        if line.startswith("|-"):
            if term is not None:
                raise ParseError("a second '|-' line", lineno, 1)
            term = _parse_at(line[2:], names, lineno)
        elif line.startswith("::"):
            if term is None or ty is not None:
                raise ParseError("'::' must follow a single '|-' line", lineno, 1)
            ty = _parse_at(line[2:], names, lineno)
        elif term is not None:
            raise ParseError("context entries must come before '|-'", lineno, 1)
        else:
            entry = parse_context_line(line, names, lineno)
            ctx.append(entry)
            names.append(entry[0])
    if term is None:
        raise ParseError("missing '|- term' line", 1, 1)
    return Entry(name, tuple(ctx), term, ty)


def _parse_at(text, names, lineno):
    try:
        return parse_term(text, names)
    except ParseError as e:
        raise ParseError(e.msg, lineno, e.col) from None


def load_judgment(path):
    path = Path(path)
    return parse_judgment(path.read_text(encoding="utf-8"), path.stem)


def load_term_file(path):
    """A judgment file, or a file holding just a closed term."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    lines = [l for _, l in _logical_lines(text)]
    if any(l.startswith("|-") for l in lines):
        return parse_judgment(text, path.stem)
    body = "\n".join(l for l in text.splitlines() if not l.lstrip().startswith("#"))
    return Entry(path.stem, (), parse_term(body))


def load_corpus(directory=None):
    directory = Path(directory or CORPUS_DIR)
    return [load_judgment(p) for p in sorted(directory.glob("*.jdg"))]


def bundled_space(name):
    from .heyting import load_space
    return load_space(SPACES_DIR / f"{name}.space")


# -- coverage ----------------------------------------------------------------

def product_classes(checker, ctx, t):
    """Classes of every product subterm of ``t``."""
    out = set()

    def walk(ctx, t):
        if isinstance(t, Pi):
            out.add(checker.prod_class(ctx, t.dom, t.cod, t.hint))
            walk(ctx, t.dom)
            walk(extend(ctx, t.hint, t.dom), t.cod)
        elif isinstance(t, Lam):
            walk(ctx, t.ann)
            walk(extend(ctx, t.hint, t.ann), t.body)
        elif isinstance(t, App):
            walk(ctx, t.fn)
            walk(ctx, t.arg)
    walk(tuple(ctx), t)
    return out


def coverage(entry, config=None):
    """``(rules, product classes)`` exercised by checking ``entry``."""
    ck = Checker(config) if config else Checker()
    j = ck.judge(entry.ctx, entry.term, entry.ty)
    classes = set()
    for k, (_, ty) in enumerate(entry.ctx):
        classes |= product_classes(ck, entry.ctx[:k], ty)
    classes |= product_classes(ck, entry.ctx, entry.term)
    classes |= product_classes(ck, entry.ctx, j.ty)
    return ck.rules, classes

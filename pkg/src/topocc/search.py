"""Countermodel search and validation sweeps.

A closed proposition whose value in some well-behaved space is not the whole
space has no closed proof, by soundness. ``refute`` walks the enumerated
spaces in their fixed order and returns the first such space together with a
point outside the value. Only exact evaluations count: a meet over a
truncated universe may be too large, so a value below X there proves nothing.
"""
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .config import DEFAULT
from .parsing import parse_term, print_term
from .posets import MAX_POINTS, enumerate_spaces
from .semantics import Model
from .syntax import PROP, beta_eq
from .typecheck import Checker, TypeCheckError


class ApproximateProposition(ValueError):
    """The proposition quantifies over a universe, so its value is approximate."""


@dataclass(frozen=True)
class Refuted:
    space: object
    witness: int
    value: int  # mask of the open

    @property
    def value_index(self):
        return self.space.index[self.value]

    def describe(self):
        sp = self.space
        return (f"refuted on a {sp.n}-point space: value is open {self.value_index} "
                f"{_show_points(sp, self.value)}, point {sp.names[self.witness]} lies outside")


@dataclass(frozen=True)
class NotRefutedUpTo:
    max_points: int

    def describe(self):
        return f"not refuted on any well-behaved space with at most {self.max_points} points"


@dataclass
class SearchResult:
    verdict: object
    exact_only: bool = True
    spaces_tried: int = 0

    @property
    def refuted(self):
        return isinstance(self.verdict, Refuted)


@dataclass
class ValidationEntry:
    space: object
    value: int
    exact: bool

    @property
    def valid(self):
        return self.value == self.space.full


@dataclass
class ValidationReport:
    entries: list = field(default_factory=list)

    @property
    def all_valid(self):
        return all(e.valid for e in self.entries)

    def failures(self):
        return [e for e in self.entries if not e.valid]


def _show_points(space, mask):
    return "{" + ", ".join(space.names[p] for p in space.points(mask)) + "}"


def _as_term(prop):
    return parse_term(prop) if isinstance(prop, str) else prop


def closed_proposition(prop, config=DEFAULT):
    """Parse if needed and check that ``prop`` is a closed proposition."""
    prop = _as_term(prop)
    ty = Checker(config).infer((), prop)
    if not beta_eq(ty, PROP, config.fuel):
        raise TypeCheckError("Proposition", "the term is not a proposition", "Prop", print_term(ty))
    return prop


def _value(space, prop, config, exhaustive_pp=False):
    rep = Model(space, config=config, exhaustive_pp=exhaustive_pp).eval((), prop)
    return rep.value.mask, rep.exact


def _job(args):
    space, prop, config = args
    return _value(space, prop, config)


def _values(prop, max_points, config, workers):
    if not 1 <= max_points <= MAX_POINTS:
        raise ValueError(f"max_points must be between 1 and {MAX_POINTS}")
    spaces = list(enumerate_spaces(max_points))
    jobs = [(sp, prop, config) for sp in spaces]
    if workers and workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_job, jobs))
    else:
        results = [_job(j) for j in jobs]
    return spaces, results


def refute(prop, max_points, config=DEFAULT, workers=1):
    """First enumerated space where ``prop`` is not X, or ``NotRefutedUpTo``."""
    prop = closed_proposition(prop, config)
    if not 1 <= max_points <= MAX_POINTS:
        raise ValueError(f"max_points must be between 1 and {MAX_POINTS}")
    if workers and workers > 1:
        spaces, results = _values(prop, max_points, config, workers)
    else:
        # sequential: stop at the first countermodel
        spaces, results = [], []
        for sp in enumerate_spaces(max_points):
            spaces.append(sp)
            results.append(_value(sp, prop, config))
            if results[-1][0] != sp.full:
                break
    for k, (sp, (mask, exact)) in enumerate(zip(spaces, results), 1):
        if not exact:
            raise ApproximateProposition("the proposition quantifies over a Type universe; "
                                         "its values are approximate and cannot refute")
        if mask != sp.full:
            # re-verify by the exhaustive PP clause, an independent evaluation path
            again, exact2 = _value(sp, prop, config, exhaustive_pp=True)
            if again != mask or not exact2:
                raise RuntimeError(f"re-evaluation disagrees: {again:#x} against {mask:#x}")
            witness = next(p for p in range(sp.n) if not (mask >> p) & 1)
            return SearchResult(Refuted(sp, witness, mask), True, k)
    return SearchResult(NotRefutedUpTo(max_points), True, len(spaces))


def validate(prop, max_points, config=DEFAULT, workers=1, allow_approx=False):
    """Value of ``prop`` on every enumerated space; flags those that are not X."""
    prop = closed_proposition(prop, config)
    spaces, results = _values(prop, max_points, config, workers)
    rep = ValidationReport()
    for sp, (mask, exact) in zip(spaces, results):
        if not exact and not allow_approx:
            raise ApproximateProposition("the proposition quantifies over a Type universe; "
                                         "pass allow_approx to see approximate values")
        rep.entries.append(ValidationEntry(sp, mask, exact))
    return rep


def emit_exponent_table(space):
    """``rows[y][x]`` = index of ``opens[y]^opens[x]``, opens in ascending mask order."""
    return space.exponent_rows()

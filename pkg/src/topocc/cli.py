"""Command-line front end.

Exit codes: 0 success, 1 a check failed (type error, refuted law, soundness
violation, parse error), 2 the request was refused by policy (an approximate
evaluation without ``--allow-approx``, a carrier above the cap), 3 internal
error.
"""
import argparse
import json
import sys
import time

from .config import Config
from .corpus import CORPUS_DIR, coverage, load_corpus, load_term_file
from .heyting import LAW_NAMES, TopologyError, check_heyting_identities, exponent_csv, exponent_text, load_space
from .parsing import ParseError, print_term
from .posets import MAX_POINTS, enumerate_spaces
from .search import ApproximateProposition, emit_exponent_table, refute, validate
from .semantics import Model, check_soundness
from .typecheck import Checker, TypeCheckError
from .values import CarrierTooLarge, OpenVal, Point, UndefinedApplication, dump

OK, FAILED, REFUSED, INTERNAL = 0, 1, 2, 3


class Refusal(Exception):
    pass


class Out:
    """Text or JSON-lines output."""

    def __init__(self, as_json, stream=None):
        self.as_json = as_json
        self.stream = stream or sys.stdout

    def emit(self, text, **record):
        if self.as_json:
            print(json.dumps(record, ensure_ascii=False, sort_keys=True), file=self.stream)
        elif text is not None:
            print(text, file=self.stream)


def _config(args):
    return Config(fuel=args.fuel, max_level=args.max_level, list_depth=args.list_depth,
                  carrier_cap=args.carrier_cap, seed=args.seed)


def _error_line(rule, message, expected=None, actual=None, location=None):
    return json.dumps({"rule": rule, "expected": expected, "actual": actual,
                       "location": location, "message": message}, ensure_ascii=False)


def _space_label(sp):
    return f"{sp.n}pt[" + ",".join(
        f"{sp.names[a]}<{sp.names[b]}" for a in range(sp.n) for b in range(sp.n)
        if a != b and sp.le[a][b]) + "]"


# -- subcommands ----------------------------------------------------------------

def cmd_check(args, out):
    entry = load_term_file(args.file)
    ck = Checker(_config(args))
    j = ck.judge(entry.ctx, entry.term, entry.ty)
    names = entry.names
    cls, _ = ck.classify_judgment(entry.ctx, entry.term)
    out.emit(f"ok: {print_term(entry.term, names)} : {print_term(j.ty, names)}",
             status="ok", term=print_term(entry.term, names), type=print_term(j.ty, names),
             classification=cls)
    return OK


def cmd_eval(args, out):
    entry = load_term_file(args.term_file)
    space = load_space(args.space_file)
    model = Model(space, config=_config(args))
    names = entry.names
    if entry.ctx:
        rep_exact = True
        rows = []
        model.checker.judge(entry.ctx, entry.term)
        model.reset()
        start = time.perf_counter()
        for g in model.eval_context(entry.ctx):
            rows.append((g, model.value(entry.ctx, entry.term, g)))
        rep_exact = not model.approx
        elapsed = (time.perf_counter() - start) * 1000
        if not rep_exact and not args.allow_approx:
            raise Refusal("the evaluation is approximate; pass --allow-approx to print it")
        for g, v in rows:
            gv = {n: _render(space, x) for n, x in zip(names, g.values)}
            shown = ", ".join(f"{n}={_render_text(space, x)}" for n, x in zip(names, g.values))
            out.emit(f"{shown} => {_render_text(space, v)}",
                     term=print_term(entry.term, names), space=str(args.space_file), valuation=gv,
                     value=_render(space, v), exact=rep_exact, elapsed_ms=round(elapsed, 3))
        if not out.as_json:
            out.emit("exact" if rep_exact else "approximate")
        return OK
    rep = model.eval((), entry.term)
    if not rep.exact and not args.allow_approx:
        raise Refusal("the evaluation is approximate; pass --allow-approx to print it")
    out.emit(f"value: {_render_text(space, rep.value)} ({'exact' if rep.exact else 'approximate'})",
             term=print_term(entry.term), space=str(args.space_file), value=_render(space, rep.value),
             exact=rep.exact, elapsed_ms=round(rep.elapsed_ms, 3))
    return OK


def _render(space, v):
    if isinstance(v, OpenVal):
        return space.index[v.mask]
    return dump(v, space)


def _render_text(space, v):
    if isinstance(v, OpenVal):
        pts = ", ".join(space.names[p] for p in space.points(v.mask))
        return f"{space.index[v.mask]} {{{pts}}}"
    if isinstance(v, Point):
        return f"point {space.names[v.p]}"
    return json.dumps(dump(v, space), ensure_ascii=False)


def cmd_refute(args, out):
    entry = load_term_file(args.term_file)
    if entry.ctx:
        raise TypeCheckError("Proposition", "refute needs a closed proposition", location=args.term_file)
    try:
        res = refute(entry.term, args.max_points, _config(args), workers=args.workers)
    except ApproximateProposition as e:
        raise Refusal(str(e)) from None
    v = res.verdict
    if res.refuted:
        sp = v.space
        out.emit(v.describe() + "\n" + _space_file_text(sp), verdict="refuted", points=sp.n,
                 space=_space_label(sp), witness=sp.names[v.witness], value=v.value_index,
                 value_points=[sp.names[p] for p in sp.points(v.value)], spaces_tried=res.spaces_tried,
                 exact_only=res.exact_only)
        return OK
    out.emit(v.describe(), verdict="not_refuted", max_points=v.max_points, spaces_tried=res.spaces_tried,
             exact_only=res.exact_only)
    return FAILED


def _space_file_text(sp):
    from .heyting import format_space
    return format_space(sp).rstrip("\n")


def cmd_validate(args, out):
    entry = load_term_file(args.term_file)
    if entry.ctx:
        raise TypeCheckError("Proposition", "validate needs a closed proposition", location=args.term_file)
    try:
        rep = validate(entry.term, args.max_points, _config(args), workers=args.workers,
                       allow_approx=args.allow_approx)
    except ApproximateProposition as e:
        raise Refusal(str(e)) from None
    for e in rep.entries:
        sp = e.space
        tag = "X" if e.valid else "not X"
        out.emit(f"{_space_label(sp)}: value {sp.index[e.value]} ({tag}{'' if e.exact else ', approximate'})",
                 space=_space_label(sp), value=sp.index[e.value], valid=e.valid, exact=e.exact)
    if not out.as_json:
        out.emit(f"{sum(e.valid for e in rep.entries)}/{len(rep.entries)} spaces give X")
    return OK if rep.all_valid else FAILED


def cmd_tables(args, out):
    space = load_space(args.space_file)
    if out.as_json:
        out.emit(None, rows=emit_exponent_table(space))
    elif args.format == "text":
        out.stream.write(exponent_text(space))
    else:
        out.stream.write(exponent_csv(space))
    return OK


def cmd_laws(args, out):
    failed = 0
    for sp in enumerate_spaces(args.max_points):
        rep = check_heyting_identities(sp, seed=args.seed)
        failed += not rep.ok
        for law, witness in rep.failures.items():
            out.emit(f"{_space_label(sp)}: law {law} ({LAW_NAMES[law]}) fails at {witness}",
                     space=_space_label(sp), law=law, name=LAW_NAMES[law], witness=list(witness),
                     exhaustive=rep.exhaustive)
        if rep.ok:
            out.emit(f"{_space_label(sp)}: all laws hold{'' if rep.exhaustive else ' (subset laws sampled)'}",
                     space=_space_label(sp), ok=True, exhaustive=rep.exhaustive)
    return OK if not failed else FAILED


def cmd_soundness(args, out):
    entries = load_corpus(args.corpus_dir)
    if not entries:
        raise FileNotFoundError(f"no .jdg files in {args.corpus_dir}")
    cfg = _config(args)
    spaces = list(enumerate_spaces(args.max_points))
    bad = refused = 0
    rules, classes = set(), set()
    for e in entries:
        r, c = coverage(e, cfg)
        rules |= r
        classes |= c
        for sp in spaces:
            try:
                rep = check_soundness(Model(sp, config=cfg), e.ctx, e.term, e.ty)
            except CarrierTooLarge as ex:
                refused += 1
                out.emit(f"{e.name} on {_space_label(sp)}: skipped ({ex})",
                         judgment=e.name, space=_space_label(sp), skipped=str(ex))
                continue
            bad += not rep.ok
            if not rep.ok or args.verbose:
                out.emit(f"{e.name} on {_space_label(sp)}: {'ok' if rep.ok else 'VIOLATION'}"
                         f" ({rep.checked} valuations, {'exact' if rep.exact else 'approximate'})",
                         judgment=e.name, space=_space_label(sp), ok=rep.ok, exact=rep.exact,
                         valuations=rep.checked)
    out.emit(f"{len(entries)} judgments x {len(spaces)} spaces: {bad} violations, {refused} skipped; "
             f"rules {sorted(rules)}; product classes {sorted(classes)}",
             judgments=len(entries), spaces=len(spaces), violations=bad, skipped=refused,
             rules=sorted(rules), product_classes=sorted(classes))
    if bad:
        return FAILED
    return REFUSED if refused else OK


# -- argument parsing ---------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    d = Config()
    common.add_argument("--fuel", type=int, default=d.fuel, help="reduction step budget")
    common.add_argument("--max-level", type=int, default=d.max_level, help="highest universe level")
    common.add_argument("--list-depth", type=int, default=d.list_depth, help="longest list enumerated")
    common.add_argument("--carrier-cap", type=int, default=d.carrier_cap, help="largest finite carrier built")
    common.add_argument("--seed", type=int, default=d.seed, help="seed for sampled checks")
    common.add_argument("--max-points", type=int, default=4, help=f"largest space searched (at most {MAX_POINTS})")
    common.add_argument("--allow-approx", action="store_true", help="print approximate evaluations")
    common.add_argument("--json", action="store_true", help="JSON-lines output")
    common.add_argument("--workers", type=int, default=1, help="worker processes for space sweeps")

    p = argparse.ArgumentParser(prog="topocc", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True)
    s = sub.add_parser("check", parents=[common], help="type-check a judgment file")
    s.add_argument("file")
    s.set_defaults(run=cmd_check)
    s = sub.add_parser("eval", parents=[common], help="evaluate a term in a space")
    s.add_argument("term_file")
    s.add_argument("space_file")
    s.set_defaults(run=cmd_eval)
    s = sub.add_parser("refute", parents=[common], help="search for a countermodel")
    s.add_argument("term_file")
    s.set_defaults(run=cmd_refute)
    s = sub.add_parser("validate", parents=[common], help="evaluate a proposition on every space")
    s.add_argument("term_file")
    s.set_defaults(run=cmd_validate)
    s = sub.add_parser("tables", parents=[common], help="print the exponent table of a space")
    s.add_argument("space_file")
    s.add_argument("--format", choices=["csv", "text"], default="csv")
    s.set_defaults(run=cmd_tables)
    s = sub.add_parser("laws", parents=[common], help="check the Heyting identities on every space")
    s.set_defaults(run=cmd_laws)
    s = sub.add_parser("soundness", parents=[common], help="check a judgment corpus on every space")
    s.add_argument("corpus_dir", nargs="?", default=str(CORPUS_DIR))
    s.add_argument("-v", "--verbose", action="store_true", help="report every judgment and space")
    s.set_defaults(run=cmd_soundness)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    out = Out(args.json)
    err = sys.stderr if not args.json else sys.stdout
    try:
        _config(args)
        if not 1 <= args.max_points <= MAX_POINTS:
            raise Refusal(f"--max-points must be between 1 and {MAX_POINTS}")
        return args.run(args, out)
    except TypeCheckError as e:
        print(e.to_json(), file=err)
        return FAILED
    except ParseError as e:
        print(_error_line("Parse", e.msg, location=f"line {e.line}, column {e.col}"), file=err)
        return FAILED
    except (TopologyError, UndefinedApplication) as e:
        print(_error_line(type(e).__name__, str(e)), file=err)
        return FAILED
    except OSError as e:
        print(_error_line("IO", str(e), location=getattr(e, "filename", None)), file=err)
        return FAILED
    except (Refusal, CarrierTooLarge) as e:
        print(_error_line("Policy", str(e)), file=err)
        return REFUSED
    except ValueError as e:
        print(_error_line("Input", str(e)), file=err)
        return FAILED
    except Exception as e:  # pragma: no cover - last resort
        print(_error_line("Internal", f"{type(e).__name__}: {e}"), file=err)
        return INTERNAL


if __name__ == "__main__":
    sys.exit(main())

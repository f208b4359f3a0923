"""Command-line front end.

Exit codes: 0 = yes / success, 1 = no (a witness is printed), 2 = error.
With ``--report`` every command prints one JSON object per line.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import constructions as C
from . import decision as D
from .core import DOca, Oca, csorted
from .errors import OcaError, StructuralError
from .oracle import Window, enumerate_words
from .oscillation import oscillation_sets
from .strong import StrongAutomaton, oca_to_sa, sa_member, sa_to_eoca
from .textio import (_names, format_automaton, format_obs_word, format_vis_word,
                     parse_automaton, parse_obs_word, parse_vis_word)


class _Result:
    def __init__(self, command, verdict=None, witness=None, text=None, stats=None,
                 witness_kind="obs"):
        self.command = command
        self.verdict = verdict
        self.witness = witness
        self.text = text
        self.stats = stats or {}
        self.witness_kind = witness_kind

    @property
    def code(self) -> int:
        return 1 if self.verdict is False else 0

    def witness_text(self):
        if self.witness is None:
            return None
        if self.witness_kind == "obs":
            return format_obs_word(self.witness)
        return format_vis_word(self.witness)

    def report(self) -> str:
        obj = {"command": self.command, "verdict": self.verdict,
               "witness": self.witness_text(), "stats": self.stats}
        if self.text is not None:
            obj["output"] = self.text
        return json.dumps(obj, sort_keys=True, default=str)

    def human(self) -> str:
        lines = []
        if self.verdict is not None:
            lines.append("yes" if self.verdict else "no")
        if self.witness is not None:
            lines.append(f"witness: {self.witness_text() or '(empty word)'}")
        if self.text is not None:
            lines.append(self.text.rstrip("\n"))
        return "\n".join(lines)


def _load(path: str):
    return parse_automaton(Path(path).read_text())


def _oca(path: str) -> Oca:
    a = _load(path)
    if not isinstance(a, Oca):
        raise StructuralError(f"{path}: expected an oca or doca file")
    return a


def _obs_like(path: str):
    a = _load(path)
    if isinstance(a, StrongAutomaton):
        return sa_to_eoca(a)
    if isinstance(a, C.Nfa):
        raise StructuralError(f"{path}: an nfa has no observability language")
    return a


def _obs_word(tokens) -> tuple:
    return parse_obs_word(" ".join(tokens))


def _verdict(name, v: D.Verdict, polarity=True) -> _Result:
    answer = v.answer if polarity else not v.answer
    return _Result(name, answer, v.witness, stats=v.stats)


def cmd_member(args):
    a = _load(args.file)
    w = _obs_word(args.word)
    if isinstance(a, StrongAutomaton):
        return _Result("member", sa_member(a, w))
    v = D.member_obs(a, w)
    return _Result("member", v.answer)


def cmd_empty(args):
    v = D.nonempty(_obs_like(args.file))
    return _Result("empty", not v.answer, v.witness, stats=v.stats)


def cmd_universal(args):
    return _verdict("universal", D.universal_obs(_obs_like(args.file), args.mode))


def cmd_includes(args):
    return _verdict("includes", D.includes_obs(_obs_like(args.first), _obs_like(args.second),
                                               args.mode))


def cmd_equiv(args):
    return _verdict("equiv", D.equiv_obs(_obs_like(args.first), _obs_like(args.second),
                                         args.mode))


def _auto(name, x, **stats):
    return _Result(name, text=format_automaton(x), stats=stats)


def cmd_determinize(args):
    d = C.determinize_obs(_oca(args.file))
    return _auto("determinize", d, states=len(d.states), threshold=d.threshold)


def cmd_complement(args):
    a = _load(args.file)
    if args.vis:
        if not isinstance(a, DOca):
            raise StructuralError("--vis needs a doca file")
        d = C.complement_vis(a)
    else:
        d = C.complement_obs(_oca(args.file))
    return _auto("complement", d, states=len(d.states), threshold=d.threshold)


def cmd_product(args):
    d = C.product(_oca(args.first), _oca(args.second))
    return _auto("product", d, states=len(d.states), threshold=d.threshold)


def cmd_to_eoca(args):
    e = C.build_eoca(_oca(args.file))
    return _auto("to-eoca", e, states=len(e.states))


def cmd_to_doca(args):
    a = _load(args.file)
    if isinstance(a, Oca):
        a = C.build_eoca(a)
    if not isinstance(a, C.EOca):
        raise StructuralError("to-doca needs an eoca or oca file")
    d = C.eoca_to_doca(a)
    return _auto("to-doca", d, states=len(d.states), threshold=d.threshold)


def cmd_encode(args):
    return _Result("encode", text=format_vis_word(C.encode(_obs_word(args.word))))


def cmd_decode(args):
    w = C.decode(parse_vis_word(" ".join(args.word)))
    return _Result("decode", text=format_obs_word(w))


def cmd_enumerate(args):
    a = _load(args.file)
    if isinstance(a, C.Nfa):
        raise StructuralError("cannot enumerate an nfa")
    window = Window(args.letters, args.counter, args.steps, args.headroom)
    words = enumerate_words(a, args.sem, window)
    fmt = format_obs_word if args.sem == "obs" else format_vis_word
    lines = [fmt(w) if w else "(empty word)" for w in words]
    return _Result("enumerate", text="\n".join(lines) + ("\n" if lines else ""),
                   stats={"count": len(words)})


def cmd_oscillation(args):
    a = _oca(args.file)
    table = oscillation_sets(a)
    lines = []
    for p in csorted(a.states):
        for q in csorted(a.states):
            lines.append(f"{p} {q} X={table.X(p, q)} Y={table.Y(p, q)}")
    return _Result("oscillation", text="\n".join(lines) + "\n",
                   stats={"window": table.window})


def cmd_to_strong(args):
    s = oca_to_sa(_oca(args.file))
    return _auto("to-strong", s, states=len(s.states))


def cmd_from_strong(args):
    s = _load(args.file)
    if not isinstance(s, StrongAutomaton):
        raise StructuralError("from-strong needs a strong file")
    e = sa_to_eoca(s).explicit()
    return _auto("from-strong", e, states=len(e.states))


def cmd_reduce_nfa(args):
    n = _load(args.file)
    if not isinstance(n, C.Nfa):
        raise StructuralError("reduce-nfa needs an nfa file")
    a = C.reduce_nfa_universality(n)
    return _auto("reduce-nfa", a, states=len(a.states), threshold=a.threshold)


def cmd_trace(args):
    a = _oca(args.file)
    if not isinstance(a, DOca) or args.determinize:
        a = C.determinize_obs(a)
    run, ok = D.unique_run(a, _obs_word(args.word))
    names = _names(a.states, [a.initial])
    text = " -> ".join(f"({names[c.state]},{c.counter})" for c in run)
    return _Result("trace", ok, text=text + "\n", stats={"length": len(run) - 1})


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ocaobs", description=__doc__.splitlines()[0])
    p.add_argument("--report", action="store_true",
                   help="print one JSON object per result")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, *files, word=False, mode=False, help=None):
        sp = sub.add_parser(name, help=help)
        for f in files:
            sp.add_argument(f)
        if word:
            sp.add_argument("word", nargs="*")
        if mode:
            sp.add_argument("--mode", choices=("pipeline", "on_the_fly"), default="pipeline")
        sp.set_defaults(fn=fn)
        return sp

    add("member", cmd_member, "file", word=True, help="obs membership, word as a:3 b:0")
    add("empty", cmd_empty, "file", help="is the obs language empty?")
    add("universal", cmd_universal, "file", mode=True, help="obs universality")
    add("includes", cmd_includes, "first", "second", mode=True, help="obs inclusion")
    add("equiv", cmd_equiv, "first", "second", mode=True, help="obs equivalence")
    add("determinize", cmd_determinize, "file", help="normalized dOCA, same obs language")
    sp = add("complement", cmd_complement, "file", help="obs complement")
    sp.add_argument("--vis", action="store_true", help="visibly complement of a doca")
    add("product", cmd_product, "first", "second", help="synchronous product")
    add("to-eoca", cmd_to_eoca, "file", help="shortcut eOCA of an OCA")
    add("to-doca", cmd_to_doca, "file", help="powerset dOCA of an eOCA")
    add("encode", cmd_encode, word=True, help="obs word to visibly encoding")
    add("decode", cmd_decode, word=True, help="visibly encoding to obs word")
    sp = add("enumerate", cmd_enumerate, "file", help="bounded language enumeration")
    sp.add_argument("--sem", choices=("oca", "vis", "obs"), default="obs")
    sp.add_argument("--letters", type=int, default=3)
    sp.add_argument("--counter", type=int, default=4)
    sp.add_argument("--steps", type=int, default=None)
    sp.add_argument("--headroom", type=int, default=None)
    add("oscillation", cmd_oscillation, "file", help="oscillation and drift sets")
    add("to-strong", cmd_to_strong, "file", help="OCA to strong automaton")
    add("from-strong", cmd_from_strong, "file", help="strong automaton to eOCA")
    add("reduce-nfa", cmd_reduce_nfa, "file", help="NFA universality to OCA universality")
    sp = add("trace", cmd_trace, "file", word=True, help="unique run on the encoding")
    sp.add_argument("--determinize", action="store_true",
                    help="determinize a doca that is not known to be normalized")
    return p


def run_command(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        res = args.fn(args)
    except (OcaError, OSError, ValueError) as err:
        code = getattr(err, "code", "E_IO" if isinstance(err, OSError) else "E_VALUE")
        if args.report:
            print(json.dumps({"command": args.command, "error": code, "message": str(err)},
                             sort_keys=True), file=out)
        else:
            print(f"error [{code}]: {err}", file=sys.stderr)
        return 2
    print(res.report() if args.report else res.human(), file=out)
    return res.code


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()

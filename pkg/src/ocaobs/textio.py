"""Plain-text formats for automata and words.

An automaton file starts with a header line (``oca``, ``doca``, ``eoca``,
``strong`` or ``nfa``) followed by ``key: value`` directives::

    oca
    alphabet: req prod
    threshold: 1
    states: q0 q1 q2 q3
    initial: q0
    final: q3
    trans: q0 * inc q0
    trans: q0 1 req q1

A test ``*`` stands for every test ``0..threshold``.  eOCA and strong
automata put guards in braces (``trans: p { ap(0,2) } inc q``,
``trans: p { x' = x - 1 } a q``) and eOCAs list acceptance as
``accept: p -> GUARD``.  ``#`` starts a comment.
"""

from __future__ import annotations

import re

from .constructions import EOca, Nfa
from .core import OPS, DOca, Oca, csorted
from .errors import ParseError, StructuralError
from .semilinear import FALSE, Formula, parse_guard, parse_rel
from .strong import StrongAutomaton

HEADERS = ("oca", "doca", "eoca", "strong", "nfa")
_KEYS = {
    "oca": {"alphabet", "threshold", "states", "initial", "final", "trans"},
    "eoca": {"alphabet", "states", "initials", "accept", "trans"},
    "strong": {"alphabet", "states", "initial", "final", "trans"},
    "nfa": {"alphabet", "states", "initial", "final", "trans"},
}
_KEYS["doca"] = _KEYS["oca"]
_NAME = re.compile(r"[A-Za-z0-9_.$'\-]+\Z")


def _tokens(text: str, offset: int) -> list:
    return [(m.group(), offset + m.start() + 1) for m in re.finditer(r"\S+", text)]


class _Reader:
    def __init__(self, text: str):
        self.lines = []
        for no, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].rstrip()
            if line.strip():
                self.lines.append((no, line))
        if not self.lines:
            raise ParseError("empty input", 1, 1)

    def directives(self):
        no, head = self.lines[0]
        kind = head.strip()
        if kind not in HEADERS:
            raise ParseError(f"unknown header {kind!r}", no, 1 + head.index(kind))
        out = []
        for no, line in self.lines[1:]:
            if ":" not in line:
                raise ParseError("expected 'key: value'", no, 1 + len(line) - len(line.lstrip()))
            key, _, rest = line.partition(":")
            key_s = key.strip()
            col = 1 + line.index(key_s) if key_s else 1
            if key_s not in _KEYS[kind]:
                raise ParseError(f"unknown directive {key_s!r}", no, col)
            out.append((key_s, rest, no, len(key) + 1))
        return kind, out


def _once(seen: dict, key, no, col):
    if key in seen and key not in ("trans", "accept"):
        raise ParseError(f"duplicate directive {key!r}", no, col)
    seen[key] = True


def _braced(rest: str, offset: int, no: int):
    """Split ``p { formula } a q`` into tokens before, the formula and tokens after."""
    i = rest.find("{")
    j = rest.rfind("}")
    if i < 0 or j < i:
        raise ParseError("expected '{ ... }'", no, offset)
    return (_tokens(rest[:i], offset), rest[i + 1:j], offset + i + 1,
            _tokens(rest[j + 1:], offset + j + 1))


def _formula(parse, text: str, no: int, col: int) -> Formula:
    try:
        return parse(text)
    except ParseError as err:
        raise ParseError(err.message, no, col + err.col) from None


def _nat(tok, no) -> int:
    word, col = tok
    if not word.isdigit():
        raise ParseError(f"expected a natural number, got {word!r}", no, col)
    return int(word)


def parse_automaton(text: str):
    kind, directives = _Reader(text).directives()
    seen: dict = {}
    values: dict = {"trans": [], "accept": []}
    for key, rest, no, col in directives:
        _once(seen, key, no, col)
        if key == "trans" or key == "accept":
            values[key].append((rest, no, col))
        else:
            values[key] = (_tokens(rest, col), no, col)

    def need(key):
        if key not in values:
            raise ParseError(f"missing directive {key!r}", directives[-1][2] if directives else 1, 1)
        return values[key]

    alphabet = [t for t, _ in need("alphabet")[0]]
    states_toks, _, _ = need("states")
    states = [t for t, _ in states_toks]
    state_set = set(states)

    def state(tok, no):
        word, col = tok
        if word not in state_set:
            raise ParseError(f"unknown state {word!r}", no, col)
        return word

    def single(key):
        toks, no, col = need(key)
        if len(toks) != 1:
            raise ParseError(f"{key} expects exactly one state", no, col)
        return state(toks[0], no)

    def many(key):
        toks, no, _ = values.get(key, ([], 0, 0))
        return [state(t, no) for t in toks]

    def letter(tok, no, ops=True):
        word, col = tok
        if word not in alphabet and not (ops and word in OPS):
            raise ParseError(f"unknown action {word!r}", no, col)
        return word

    try:
        if kind in ("oca", "doca"):
            toks, no, col = need("threshold")
            if len(toks) != 1:
                raise ParseError("threshold expects one number", no, col)
            m = _nat(toks[0], no)
            trans = []
            for rest, no, col in values["trans"]:
                toks = _tokens(rest, col)
                if len(toks) != 4:
                    raise ParseError("expected 'trans: SOURCE TEST ACTION TARGET'", no, col)
                p = state(toks[0], no)
                act = letter(toks[2], no)
                q = state(toks[3], no)
                if toks[1][0] == "*":
                    ks = range(m + 1)
                else:
                    k = _nat(toks[1], no)
                    if k > m:
                        raise ParseError(f"test {k} exceeds threshold {m}", no, toks[1][1])
                    ks = [k]
                trans.extend((p, k, act, q) for k in ks)
            cls = DOca if kind == "doca" else Oca
            return cls(states, alphabet, single("initial"), many("final"), m, trans)
        if kind == "nfa":
            trans = []
            for rest, no, col in values["trans"]:
                toks = _tokens(rest, col)
                if len(toks) != 3:
                    raise ParseError("expected 'trans: SOURCE LETTER TARGET'", no, col)
                trans.append((state(toks[0], no), letter(toks[1], no, ops=False),
                              state(toks[2], no)))
            return Nfa(states, alphabet, single("initial"), many("final"), trans)
        parse = parse_guard if kind == "eoca" else parse_rel
        trans = []
        for rest, no, col in values["trans"]:
            before, body, fcol, after = _braced(rest, col, no)
            if len(before) != 1 or len(after) != 2:
                raise ParseError("expected 'trans: SOURCE { FORMULA } ACTION TARGET'", no, col)
            g = _formula(parse, body, no, fcol)
            trans.append((state(before[0], no), g,
                          letter(after[0], no, ops=kind == "eoca"), state(after[1], no)))
        if kind == "strong":
            return StrongAutomaton(states, alphabet, single("initial"), many("final"), trans)
        accept = {}
        for rest, no, col in values["accept"]:
            head, arrow, body = rest.partition("->")
            toks = _tokens(head, col)
            if not arrow or len(toks) != 1:
                raise ParseError("expected 'accept: STATE -> GUARD'", no, col)
            q = state(toks[0], no)
            accept[q] = _formula(parse_guard, body, no, col + len(head) + 2)
        return EOca(states, alphabet, many("initials"), accept, trans)
    except StructuralError as err:
        raise ParseError(str(err), 0, 0) from None


# -- formatting ----------------------------------------------------------------

def _is_name(s) -> bool:
    return isinstance(s, str) and bool(_NAME.match(s)) and s not in ("inc", "dec", "*")


def _names(states, initial_first=()) -> dict:
    """Keep plain string ids; otherwise rename to ``s0, s1, ...`` canonically."""
    if all(_is_name(q) for q in states):
        return {q: q for q in states}
    order = list(initial_first) + [q for q in csorted(states) if q not in initial_first]
    return {q: f"s{i}" for i, q in enumerate(order)}


def _sorted_names(names, items) -> list:
    return sorted(names[q] for q in items)


def _letters(alphabet) -> str:
    for a in alphabet:
        if not _is_name(a) or a in OPS:
            raise StructuralError(f"letter {a!r} cannot be written in the text format")
    return " ".join(sorted(alphabet))


def format_automaton(x) -> str:
    if isinstance(x, Oca):
        kind = "doca" if isinstance(x, DOca) else "oca"
        n = _names(x.states, [x.initial])
        lines = [kind, f"alphabet: {_letters(x.alphabet)}", f"threshold: {x.threshold}",
                 f"states: {' '.join(_sorted_names(n, x.states))}",
                 f"initial: {n[x.initial]}",
                 f"final: {' '.join(_sorted_names(n, x.finals))}".rstrip()]
        grouped: dict = {}
        for p, k, act, q in x.transitions:
            grouped.setdefault((n[p], act, n[q]), set()).add(k)
        rows = []
        for (p, act, q), ks in grouped.items():
            if len(ks) == x.threshold + 1 and x.threshold > 0:
                rows.append((p, "*", act, q))
            else:
                rows.extend((p, str(k), act, q) for k in ks)
        rows.sort(key=lambda r: (r[0], r[2], r[1], r[3]))
        lines += [f"trans: {p} {k} {act} {q}" for p, k, act, q in rows]
        return "\n".join(lines) + "\n"
    if isinstance(x, Nfa):
        n = _names(x.states, [x.initial])
        lines = ["nfa", f"alphabet: {' '.join(x.letters)}",
                 f"states: {' '.join(_sorted_names(n, x.states))}",
                 f"initial: {n[x.initial]}",
                 f"final: {' '.join(_sorted_names(n, x.finals))}".rstrip()]
        lines += sorted(f"trans: {n[p]} {a} {n[q]}" for p, a, q in x.transitions)
        return "\n".join(lines) + "\n"
    if isinstance(x, StrongAutomaton):
        n = _names(x.states, [x.initial])
        lines = ["strong", f"alphabet: {_letters(x.alphabet)}",
                 f"states: {' '.join(_sorted_names(n, x.states))}",
                 f"initial: {n[x.initial]}",
                 f"final: {' '.join(_sorted_names(n, x.finals))}".rstrip()]
        lines += sorted(f"trans: {n[p]} {{ {r} }} {a} {n[q]}" for p, r, a, q in x.transitions)
        return "\n".join(lines) + "\n"
    if hasattr(x, "explicit"):
        x = x.explicit()
    if isinstance(x, EOca):
        n = _names(x.states, csorted(x.initials))
        lines = ["eoca", f"alphabet: {_letters(x.alphabet)}",
                 f"states: {' '.join(_sorted_names(n, x.states))}",
                 f"initials: {' '.join(_sorted_names(n, x.initials))}"]
        lines += sorted(f"accept: {n[q]} -> {g}" for q, g in x.accept.items() if g != FALSE)
        lines += sorted(f"trans: {n[p]} {{ {g} }} {a} {n[q]}" for p, g, a, q in x.transitions)
        return "\n".join(lines) + "\n"
    raise TypeError(f"cannot format {type(x).__name__}")


# -- words -------------------------------------------------------------------

def parse_obs_word(text: str) -> tuple:
    out = []
    for tok, col in _tokens(text, 0):
        letter, sep, value = tok.rpartition(":")
        if not sep or not letter or not value.isdigit():
            raise ParseError(f"expected LETTER:VALUE, got {tok!r}", 1, col)
        out.append((letter, int(value)))
    return tuple(out)


def format_obs_word(w) -> str:
    return " ".join(f"{a}:{v}" for a, v in w)


def parse_vis_word(text: str) -> tuple:
    return tuple(t for t, _ in _tokens(text, 0))


def format_vis_word(v) -> str:
    return " ".join(v)

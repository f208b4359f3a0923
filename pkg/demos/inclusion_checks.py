"""Universality and inclusion checks with both decision modes.

Random automata are compared with ``includes_obs``.  Each counterexample is
re-checked with ``member_obs``.
"""
import random

from ocaobs import includes_obs, member_obs, universal_obs
from ocaobs.generators import random_oca
from ocaobs.samples import job, univ
from ocaobs.textio import format_obs_word


def show(label, v, note=""):
    w = "-" if v.witness is None else (format_obs_word(v.witness) or "(empty)")
    print(f"{label:32} {str(v.answer):5} witness={w}{note}")


def main():
    for mode in ("pipeline", "on_the_fly"):
        print(f"mode {mode}")
        show("  univ is universal", universal_obs(univ(), mode=mode))
        show("  job is universal", universal_obs(job(), mode=mode))
        show("  job within univ", includes_obs(job(), univ(), mode=mode))
        show("  univ within job", includes_obs(univ(), job(), mode=mode))

    rng = random.Random(4)
    print("\nrandom pairs over {a}")
    for i in range(6):
        a = random_oca(rng, rng.randint(1, 3), rng.randint(0, 1), ("a",))
        b = random_oca(rng, rng.randint(1, 3), rng.randint(0, 1), ("a",))
        v = includes_obs(a, b)
        note = ""
        if not v.answer:
            assert member_obs(a, v.witness).answer and not member_obs(b, v.witness).answer
            note = "  re-checked"
        show(f"  pair {i}", v, note)


if __name__ == "__main__":
    main()

"""Strong automata: membership, translation to an eOCA and back.

A strong automaton reads a letter with a value and checks a relation between
the previous and the current value.
"""
from ocaobs import (Window, equiv_obs, oca_to_sa, sa_member, sa_to_eoca,
                    window_equal)
from ocaobs.samples import job, job_strong
from ocaobs.textio import format_automaton


def main():
    s = job_strong()
    print(format_automaton(s))
    for w in ([("req", 2), ("prod", 1), ("prod", 0)], [("req", 2), ("prod", 0)]):
        print(w, "->", sa_member(s, w))

    e = sa_to_eoca(s)
    print("\ntranslated eOCA equivalent to job:", equiv_obs(e, job()).answer)

    back = oca_to_sa(job())
    print("\njob as a strong automaton:")
    print(format_automaton(back))
    print("window check:", window_equal(back, job(), "obs", Window(3, 4)).answer)


if __name__ == "__main__":
    main()

"""Walk through the request/produce automaton under the three semantics.

Run with ``python3 demos/job_walkthrough.py``.
"""
from ocaobs import (Window, build_eoca, determinize_obs, encode, enumerate_words,
                    member_obs, unique_run, universal_obs, window_equal)
from ocaobs.samples import job
from ocaobs.textio import format_automaton, format_obs_word, format_vis_word


def main():
    a = job()
    print(format_automaton(a))

    w = (("req", 3), ("prod", 2), ("prod", 1), ("prod", 0))
    print("word:", format_obs_word(w))
    print("encoding:", format_vis_word(encode(w)))
    print("member:", member_obs(a, w).answer)
    print("member (req,0):", member_obs(a, (("req", 0),)).answer)

    print("\nobs words with at most 3 letters and counter at most 4:")
    for x in enumerate_words(a, "obs", Window(3, 4)):
        print("  ", format_obs_word(x))

    d = determinize_obs(a)
    print(f"\ndeterminized: {len(d.states)} states, threshold {d.threshold}")
    print("same window language:", window_equal(d, a, "obs", Window(3, 5)).answer)
    configs, ok = unique_run(d, w)
    print("unique run accepts:", ok, "after", len(configs), "configurations")

    e = build_eoca(a)
    print("shortcut automaton states:", len(e.states))

    v = universal_obs(a)
    print("\nuniversal:", v.answer, "| missing word:", format_obs_word(v.witness) or "(empty)")


if __name__ == "__main__":
    main()

"""Regenerate the fixture caption corpus and benchmark test set.

    python scripts/make_corpus.py

Writes src/eblparse/data/corpus.txt and src/eblparse/data/bench.txt.  Both
are constructed from templates over the fixture lexicon with a fixed seed;
nothing here is sampled from real captions.
"""

import random
from pathlib import Path

DATA = Path(__file__).resolve().parents[1] / "src" / "eblparse" / "data"

DET_SG = ["THE", "A", "THIS"]
DET_PL = ["THE", "THESE"]
N_SG = ["DOG", "GIRL", "BOY", "HEAD", "HOUSE", "COUNTY", "BALL"]
N_PL = ["DOGS"]
PRON = ["HE", "SHE", "IT", "YOU", "THEY"]
ADJ = ["BIG", "GOOD", "SMART", "OLD"]
ADV = ["QUICKLY", "NOW", "AGAIN"]
INTERJ = ["OKAY", "YEAH", "OH", "THANKS"]
VT_FIN = ["GOT", "SEES", "LIKES"]
VT_BASE = ["SEE", "NOTIFY"]
VI_FIN = ["SLEEPS"]
VI_BASE = ["SLEEP", "PUSH"]
PARTICLE_VERBS = [("RUN", "OUT"), ("RUN", "AWAY"), ("COME", "ON")]
PREP_VERBS_FIN = [("TALKS", "ABOUT"), ("LOOKS", "AT")]
NMOD_P = ["WITH"]
VMOD_P = ["IN"]
PARTITIVE_P = ["OF"]
PASSIVE_P = ["BY"]
CASE_P = ["ABOUT", "AT", "TO"]
ALL_P = NMOD_P + VMOD_P + PARTITIVE_P + PASSIVE_P + CASE_P
HAVE = ["HAS", "'VE"]
COP = ["IS", "'S"]
MODAL = ["CAN", "SHOULD"]


def np(r):
    if r.random() < 0.8:
        return [r.choice(DET_SG), r.choice(N_SG)]
    return [r.choice(DET_PL), r.choice(N_PL)]


def subj(r):
    return [r.choice(PRON)] if r.random() < 0.7 else np(r)


def join(words):
    out = []
    for w in words:
        if w.startswith("'") and out:
            out[-1] += w
        else:
            out.append(w)
    return " ".join(out)


TEMPLATES = [
    (30, lambda r: [r.choice(INTERJ)]),
    (22, lambda r: [r.choice(PRON), r.choice(VT_FIN)] + np(r)),
    (16, lambda r: np(r)),
    (14, lambda r: [r.choice(ADJ), r.choice(N_SG)]),
    (12, lambda r: [r.choice(PRON), r.choice(HAVE), "GOT"] + np(r)),
    (12, lambda r: [r.choice(PRON), r.choice(COP)] + np(r)),
    (10, lambda r: [r.choice(VI_BASE)]),
    (10, lambda r: list(r.choice(PARTICLE_VERBS))),
    (10, lambda r: [r.choice(PRON), r.choice(VI_FIN)]),
    (9, lambda r: np(r) + [r.choice(VI_FIN)]),
    (8, lambda r: np(r) + [r.choice(VT_FIN)] + np(r)),
    (8, lambda r: [r.choice(PRON), r.choice(VT_FIN)] + np(r) + [r.choice(NMOD_P)] + np(r)),
    (8, lambda r: [r.choice(PRON), r.choice(VT_FIN)] + np(r) + [r.choice(VMOD_P)] + np(r)),
    (8, lambda r: [r.choice(ALL_P)] + np(r)),
    (6, lambda r: [r.choice(MODAL), r.choice(VT_BASE)] + np(r)),
    (6, lambda r: [r.choice(PRON), r.choice(MODAL), r.choice(VI_BASE)]),
    (6, lambda r: [r.choice(PRON)] + list(r.choice(PREP_VERBS_FIN)) + np(r)),
    (5, lambda r: np(r) + [r.choice(PARTITIVE_P)] + np(r)),
    (5, lambda r: [r.choice(PRON), r.choice(VT_FIN), r.choice(PRON)]),
    (5, lambda r: [r.choice(PRON), r.choice(VI_FIN), r.choice(ADV)]),
    (5, lambda r: [r.choice(VT_BASE)] + np(r)),
    (4, lambda r: ["CYNTHIA", r.choice(VI_FIN)]),
    (4, lambda r: [r.choice(PRON), r.choice(VT_FIN)] + np(r) + [r.choice(PASSIVE_P)] + np(r)),
    (4, lambda r: [r.choice(PRON), r.choice(VI_FIN), r.choice(VMOD_P)] + np(r)),
    (3, lambda r: np(r) + [r.choice(NMOD_P)] + np(r)),
    (3, lambda r: [r.choice(PRON), r.choice(MODAL), r.choice(VT_BASE)] + np(r)),
    (3, lambda r: [r.choice(PRON), r.choice(VT_FIN)] + np(r) + [r.choice(ADV)]),
    (2, lambda r: [r.choice(PRON), "'S", "GOT"] + np(r)),
    (2, lambda r: ["COME", "ON", "CYNTHIA"]),
    (2, lambda r: [r.choice(PRON), r.choice(HAVE), "GOT"] + np(r) + [r.choice(VMOD_P)] + np(r)),
    (2, lambda r: subj(r) + [r.choice(VT_FIN)] + np(r) + [r.choice(NMOD_P)] + np(r) + [r.choice(VMOD_P)] + np(r)),
    (5, lambda r: [r.choice(PRON)]),
    (4, lambda r: ["CYNTHIA"]),
    (4, lambda r: ["LOOK", "AT"] + np(r)),
    (4, lambda r: [r.choice(VI_BASE), r.choice(ADV)]),
    (4, lambda r: list(r.choice(PARTICLE_VERBS)) + [r.choice(ADV)]),
    (4, lambda r: [r.choice(PRON), r.choice(MODAL)] + list(r.choice(PARTICLE_VERBS))),
    (4, lambda r: [r.choice(PRON), r.choice(COP), "CYNTHIA"]),
    (3, lambda r: ["CYNTHIA", r.choice(VT_FIN)] + np(r)),
    (3, lambda r: [r.choice(PRON), r.choice(HAVE), "GOT", r.choice(PRON)]),
    (3, lambda r: [r.choice(PRON), r.choice(VI_FIN), r.choice(PASSIVE_P)] + np(r)),
    (3, lambda r: np(r) + [r.choice(VI_FIN), r.choice(VMOD_P)] + np(r)),
    (3, lambda r: [r.choice(PRON), r.choice(VT_FIN)] + np(r) + [r.choice(PARTITIVE_P)] + np(r)),
    (2, lambda r: [r.choice(PRON), r.choice(VT_FIN), r.choice(PRON), r.choice(ADV)]),
    (2, lambda r: [r.choice(PRON), r.choice(VI_FIN), r.choice(CASE_P)] + np(r)),
    (2, lambda r: [r.choice(N_SG)]),
]

# Longer segments for timing; every one is drawn from trained shapes.
BENCH_TEMPLATES = [
    lambda r: [r.choice(PRON), r.choice(VT_FIN)] + np(r) + [r.choice(NMOD_P + VMOD_P)] + np(r),
    lambda r: [r.choice(PRON), r.choice(HAVE), "GOT"] + np(r),
    lambda r: np(r) + [r.choice(VT_FIN)] + np(r),
    lambda r: [r.choice(PRON)] + list(r.choice(PREP_VERBS_FIN)) + np(r),
    lambda r: np(r) + [r.choice(PARTITIVE_P)] + np(r),
    lambda r: [r.choice(PRON), r.choice(VT_FIN)] + np(r) + [r.choice(PASSIVE_P)] + np(r),
    lambda r: [r.choice(PRON), r.choice(MODAL), r.choice(VT_BASE)] + np(r),
    lambda r: subj(r) + [r.choice(VT_FIN)] + np(r) + [r.choice(NMOD_P)] + np(r) + [r.choice(VMOD_P)] + np(r),
]

TABLE_LINES = [
    "CYNTHIA, PUSH! COME ON, CYNTHIA!",
    "GOOD GIRL.",
    "COME ON, CYNTHIA.",
    "GOOD GIRL. HE'S GOT THE HEAD.",
    "IT'S A BOY.",
    "OH! OH!",
    "OH, YOU'VE GOT A BOY!",
    "OKAY. OKAY.",
    "YEAH.",
    "SHOULD NOTIFY THE COUNTY, HUH? THANKS.",
]


def make_corpus(r, n_lines=800):
    weights = [w for w, _ in TEMPLATES]
    gens = [g for _, g in TEMPLATES]
    lines = list(TABLE_LINES)
    while len(lines) < n_lines:
        k = r.choice([1, 1, 1, 2])
        sents = []
        for _ in range(k):
            words = r.choices(gens, weights)[0](r)
            sents.append(join(words) + r.choice([".", ".", "!", "?"]))
        lines.append(" ".join(sents))
    return lines


def make_bench(r, n=240):
    seen = []
    while len(seen) < n:
        s = join(r.choice(BENCH_TEMPLATES)(r)) + "."
        if s not in seen:
            seen.append(s)
    return seen


def main():
    r = random.Random(1998)
    (DATA / "corpus.txt").write_text("\n".join(make_corpus(r)) + "\n", encoding="utf-8")
    (DATA / "bench.txt").write_text("\n".join(make_bench(r)) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
"""Generate the stemmer oracle fixtures.

Builds a large English vocabulary from text available on the local system
(python stdlib and site-packages documentation strings) together with a
curated seed list that exercises every rule branch of the Porter algorithm,
then stems every word with a reference implementation and freezes the
(vocabulary, output) pair under tests/fixtures/.

The reference stemmer below is a faithful adaptation of the widely
circulated public-domain Python port (Vivake Gupta, 2001) of Martin
Porter's own ANSI C implementation, kept deliberately separate from the
library's implementation so the fixtures are an independent oracle.

Also emits porter_restem.txt: the words whose reference stem is not a
fixed point of the reference stemmer (the algorithm is not idempotent on
e.g. stems that end in a bare 's'), with the re-stemmed form.

Run from the repository root:  python tools/gen_porter_fixtures.py
"""

from __future__ import annotations

import collections
import re
import sys
from pathlib import Path

FIXTURE_DIR = Path(__file__).resolve().parent.parent / "tests" / "fixtures"
TARGET_SIZE = 23531
WORD_RE = re.compile(r"[a-z]{3,24}")
REPEAT_RE = re.compile(r"(.)\1\1")  # aaa..., separator-comment noise

# Rule-table example words from Porter (1980), plus inflection families the
# revised step-2 rules (bli/logi) act on.
SEED_WORDS = """
caresses ponies ties caress cats feed agreed plastered bled motoring sing
conflated troubled sized hopping tanned falling hissing fizzed failing filing
happy sky relational conditional rational valenci hesitanci digitizer
conformabli radicalli differentli vileli analogousli vietnamization
predication operator feudalism decisiveness hopefulness callousness formaliti
sensitiviti sensibiliti triplicate formative formalize electriciti electrical
hopeful goodness revival allowance inference airliner gyroscopic adjustable
defensible irritant replacement adjustment dependent adoption homologou
communism activate angulariti homologous effective bowdlerize probate rate
cease controll roll connected connecting connects connect generalization
generalizations oscillators apology apologies biology technology geology
possibly sensibly terribly capably analogously abilities probabilities
university universities universe adhesion adhesive conclusion decision
television revision sky skies agreement arguments organization organizations
""".split()


class ReferenceStemmer:
    """State-machine reference port; see module docstring for provenance."""

    def __init__(self):
        self.b = ""
        self.k = 0
        self.j = 0

    def cons(self, i):
        if self.b[i] in "aeiou":
            return 0
        if self.b[i] == "y":
            return 1 if i == 0 else not self.cons(i - 1)
        return 1

    def m(self):
        n = 0
        i = 0
        while True:
            if i > self.j:
                return n
            if not self.cons(i):
                break
            i += 1
        i += 1
        while True:
            while True:
                if i > self.j:
                    return n
                if self.cons(i):
                    break
                i += 1
            i += 1
            n += 1
            while True:
                if i > self.j:
                    return n
                if not self.cons(i):
                    break
                i += 1
            i += 1

    def vowelinstem(self):
        for i in range(self.j + 1):
            if not self.cons(i):
                return 1
        return 0

    def doublec(self, j):
        if j < 1:
            return 0
        if self.b[j] != self.b[j - 1]:
            return 0
        return self.cons(j)

    def cvc(self, i):
        if i < 2 or not self.cons(i) or self.cons(i - 1) or not self.cons(i - 2):
            return 0
        if self.b[i] in "wxy":
            return 0
        return 1

    def ends(self, s):
        length = len(s)
        if length > self.k + 1:
            return 0
        if self.b[self.k - length + 1 : self.k + 1] != s:
            return 0
        self.j = self.k - length
        return 1

    def setto(self, s):
        self.b = self.b[: self.j + 1] + s + self.b[self.j + 1 + len(s) :]
        self.k = self.j + len(s)

    def r(self, s):
        if self.m() > 0:
            self.setto(s)

    def step1ab(self):
        if self.b[self.k] == "s":
            if self.ends("sses"):
                self.k -= 2
            elif self.ends("ies"):
                self.setto("i")
            elif self.b[self.k - 1] != "s":
                self.k -= 1
        if self.ends("eed"):
            if self.m() > 0:
                self.k -= 1
        elif (self.ends("ed") or self.ends("ing")) and self.vowelinstem():
            self.k = self.j
            if self.ends("at"):
                self.setto("ate")
            elif self.ends("bl"):
                self.setto("ble")
            elif self.ends("iz"):
                self.setto("ize")
            elif self.doublec(self.k):
                self.k -= 1
                if self.b[self.k] in "lsz":
                    self.k += 1
            elif self.m() == 1 and self.cvc(self.k):
                self.setto("e")

    def step1c(self):
        if self.ends("y") and self.vowelinstem():
            self.b = self.b[: self.k] + "i" + self.b[self.k + 1 :]

    def step2(self):
        ch = self.b[self.k - 1]
        if ch == "a":
            if self.ends("ational"):
                self.r("ate")
            elif self.ends("tional"):
                self.r("tion")
        elif ch == "c":
            if self.ends("enci"):
                self.r("ence")
            elif self.ends("anci"):
                self.r("ance")
        elif ch == "e":
            if self.ends("izer"):
                self.r("ize")
        elif ch == "l":
            if self.ends("bli"):
                self.r("ble")
            elif self.ends("alli"):
                self.r("al")
            elif self.ends("entli"):
                self.r("ent")
            elif self.ends("eli"):
                self.r("e")
            elif self.ends("ousli"):
                self.r("ous")
        elif ch == "o":
            if self.ends("ization"):
                self.r("ize")
            elif self.ends("ation"):
                self.r("ate")
            elif self.ends("ator"):
                self.r("ate")
        elif ch == "s":
            if self.ends("alism"):
                self.r("al")
            elif self.ends("iveness"):
                self.r("ive")
            elif self.ends("fulness"):
                self.r("ful")
            elif self.ends("ousness"):
                self.r("ous")
        elif ch == "t":
            if self.ends("aliti"):
                self.r("al")
            elif self.ends("iviti"):
                self.r("ive")
            elif self.ends("biliti"):
                self.r("ble")
        elif ch == "g":
            if self.ends("logi"):
                self.r("log")

    def step3(self):
        ch = self.b[self.k]
        if ch == "e":
            if self.ends("icate"):
                self.r("ic")
            elif self.ends("ative"):
                self.r("")
            elif self.ends("alize"):
                self.r("al")
        elif ch == "i":
            if self.ends("iciti"):
                self.r("ic")
        elif ch == "l":
            if self.ends("ical"):
                self.r("ic")
            elif self.ends("ful"):
                self.r("")
        elif ch == "s":
            if self.ends("ness"):
                self.r("")

    def step4(self):
        ch = self.b[self.k - 1]
        if ch == "a":
            if not self.ends("al"):
                return
        elif ch == "c":
            if not (self.ends("ance") or self.ends("ence")):
                return
        elif ch == "e":
            if not self.ends("er"):
                return
        elif ch == "i":
            if not self.ends("ic"):
                return
        elif ch == "l":
            if not (self.ends("able") or self.ends("ible")):
                return
        elif ch == "n":
            if not (
                self.ends("ant")
                or self.ends("ement")
                or self.ends("ment")
                or self.ends("ent")
            ):
                return
        elif ch == "o":
            if not (
                (self.ends("ion") and self.b[self.j] in "st") or self.ends("ou")
            ):
                return
        elif ch == "s":
            if not self.ends("ism"):
                return
        elif ch == "t":
            if not (self.ends("ate") or self.ends("iti")):
                return
        elif ch == "u":
            if not self.ends("ous"):
                return
        elif ch == "v":
            if not self.ends("ive"):
                return
        elif ch == "z":
            if not self.ends("ize"):
                return
        else:
            return
        if self.m() > 1:
            self.k = self.j

    def step5(self):
        self.j = self.k
        if self.b[self.k] == "e":
            a = self.m()
            if a > 1 or (a == 1 and not self.cvc(self.k - 1)):
                self.k -= 1
        if self.b[self.k] == "l" and self.doublec(self.k) and self.m() > 1:
            self.k -= 1

    def stem(self, word: str) -> str:
        self.b = word
        self.k = len(word) - 1
        self.j = 0
        if self.k <= 1:
            return self.b
        self.step1ab()
        self.step1c()
        self.step2()
        self.step3()
        self.step4()
        self.step5()
        return self.b[: self.k + 1]


def harvest_words() -> list[str]:
    """Collect english-ish words from local python sources, most common first."""
    roots = [
        Path("/usr/lib/python3.10"),
        Path("/usr/local/lib/python3.10/dist-packages/numpy"),
        Path("/usr/local/lib/python3.10/dist-packages/sklearn"),
        Path("/usr/local/lib/python3.10/dist-packages/scipy"),
        Path("/usr/local/lib/python3.10/dist-packages/pandas"),
        Path("/usr/local/lib/python3.10/dist-packages/matplotlib"),
    ]
    counts: collections.Counter[str] = collections.Counter()
    for root in roots:
        if not root.exists():
            continue
        for path in sorted(root.rglob("*.py")):
            try:
                text = path.read_text(encoding="utf-8", errors="ignore")
            except OSError:
                continue
            counts.update(
                w for w in WORD_RE.findall(text.lower()) if not REPEAT_RE.search(w)
            )
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return [w for w, _ in ranked]


def main() -> int:
    stemmer = ReferenceStemmer()
    vocab: list[str] = sorted(set(SEED_WORDS))
    seen = set(vocab)
    for word in harvest_words():
        if len(vocab) >= TARGET_SIZE:
            break
        if word not in seen:
            seen.add(word)
            vocab.append(word)
    vocab.sort()

    outputs = [stemmer.stem(w) for w in vocab]
    restems = []
    for word, out in zip(vocab, outputs):
        again = stemmer.stem(out)
        if again != out:
            restems.append((word, out, again))

    FIXTURE_DIR.mkdir(parents=True, exist_ok=True)
    (FIXTURE_DIR / "porter_voc.txt").write_text("\n".join(vocab) + "\n")
    (FIXTURE_DIR / "porter_out.txt").write_text("\n".join(outputs) + "\n")
    (FIXTURE_DIR / "porter_restem.txt").write_text(
        "".join(f"{w}\t{out}\t{again}\n" for w, out, again in restems)
    )
    print(f"vocabulary: {len(vocab)} words")
    print(f"non-fixed-point stems: {len(restems)}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

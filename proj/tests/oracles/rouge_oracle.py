"""Independent ROUGE oracle used to freeze tests/fixtures/rouge_pairs.tsv.

Brute-force LCS (memoized recursion over suffixes) and Counter-based clipped
n-gram overlap. Run: python3 rouge_oracle.py > ../fixtures/rouge_pairs.tsv
"""
from collections import Counter
from fractions import Fraction
from functools import lru_cache

PAIRS = [
    ("the cat sat", "the cat sat"),
    ("the cat sat", "the dog ran"),
    ("a c b", "a b c"),
    ("the the the", "the cat"),
    ("x y", "a b"),
    ("a b c d e", "a b x d e"),
    ("police said the man fled", "the man fled , police said"),
    ("a", "a b"),
    ("a a b b", "a b a b"),
    ("the cat", "the cat sat on the mat"),
]


def prf(overlap, c, r):
    p = Fraction(overlap, c) if c else Fraction(0)
    rec = Fraction(overlap, r) if r else Fraction(0)
    f = 2 * p * rec / (p + rec) if p + rec else Fraction(0)
    return p, rec, f


def ngrams(t, n):
    return Counter(tuple(t[i:i + n]) for i in range(len(t) - n + 1))


def rouge_n(c, r, n):
    cc, rc = ngrams(c, n), ngrams(r, n)
    overlap = sum(min(v, rc[k]) for k, v in cc.items())
    return prf(overlap, sum(cc.values()), sum(rc.values()))


def lcs(a, b):
    @lru_cache(maxsize=None)
    def go(i, j):
        if i == len(a) or j == len(b):
            return 0
        if a[i] == b[j]:
            return 1 + go(i + 1, j + 1)
        return max(go(i + 1, j), go(i, j + 1))
    return go(0, 0)


def rouge_l(c, r):
    return prf(lcs(tuple(c), tuple(r)), len(c), len(r))


print("# candidate\treference\tr1_p r1_r r1_f\tr2_p r2_r r2_f\trl_p rl_r rl_f")
for cand, ref in PAIRS:
    c, r = cand.split(), ref.split()
    cols = [cand, ref]
    for s in (rouge_n(c, r, 1), rouge_n(c, r, 2), rouge_l(c, r)):
        cols.append(" ".join(repr(float(x)) for x in s))
    print("\t".join(cols))

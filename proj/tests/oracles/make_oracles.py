"""Reference values for the metric and retrieval tests.

Each value comes from an implementation that shares no code with the C++
library: NLTK for Meteor, exhaustive subsequence search for LCS, mpmath for
great-circle distance, exact fractions (cross-checked with statsmodels) for
Fleiss' kappa, plain set arithmetic for people P/R/F1 and a numpy scan for
nearest neighbours. Output is frozen in oracles.json; rerun only to extend it.
"""

import itertools
import json
import os
import random
import re
from fractions import Fraction

import mpmath
import numpy as np
from nltk.stem.porter import PorterStemmer
from nltk.translate.meteor_score import single_meteor_score
from statsmodels.stats.inter_rater import fleiss_kappa as sm_fleiss_kappa

HERE = os.path.dirname(os.path.abspath(__file__))
FIXTURES = os.path.join(HERE, "..", "fixtures")


class NoWordnet:
    @staticmethod
    def synsets(*_args, **_kwargs):
        return []


def tokens(s):
    return re.findall(r"[a-z0-9]+", s.lower())


def lcs_brute(a, b):
    # longest subsequence of the shorter list that is also a subsequence of the other
    if len(a) > len(b):
        a, b = b, a

    def is_subseq(seq, of):
        it = iter(of)
        return all(any(x == y for y in it) for x in seq)

    for size in range(len(a), 0, -1):
        for idx in itertools.combinations(range(len(a)), size):
            if is_subseq([a[i] for i in idx], b):
                return size
    return 0


def rouge_l(pred, ref):
    p, r = tokens(pred), tokens(ref)
    if not p or not r:
        return 0.0
    l = lcs_brute(p, r)
    if l == 0:
        return 0.0
    prec, rec = l / len(p), l / len(r)
    return 2 * prec * rec / (prec + rec)


TEXT_PAIRS = [
    ("press conference", "press conference"),
    ("cat", "dog"),
    ("a b c d", "a c d e"),
    ("Protesters gather in Valletta", "Thousands protest in Valletta, Malta"),
    ("Reuters", "REUTERS photographer"),
    ("The protests demanding resignation", "Protesters demanded the resignation of the prime minister"),
    ("Documenting the floods in Jakarta", "Reporting on the Jakarta floods"),
    ("fire at the cathedral", "the cathedral fire"),
    ("running runners run", "the runner was running"),
    ("Election night rally in Chicago", "Barack Obama celebrates election night in Chicago"),
    ("the the the", "the cat sat on the mat"),
    ("on the mat sat the cat", "the cat sat on the mat"),
    ("Cherry blossoms along a canal", "Cherry blossom season in Kyoto"),
    ("A dog and a car", "A German Shepherd sniffs a white car"),
    ("2011 Tohoku tsunami", "The tsunami of 11 March 2011 in Japan"),
    ("wildfires near Athens", "A wildfire burns in Mati near Athens, Greece"),
    ("connection connected connecting", "connect connections"),
    ("generalization of relational", "general relations generalize"),
    ("Sports celebration", "Cubs fans celebrate the World Series win"),
    ("Renovation of Big Ben", "Big Ben under renovation with scaffolding in 2019"),
]


def meteor_rows():
    stemmer = PorterStemmer(mode=PorterStemmer.ORIGINAL_ALGORITHM)
    rows = []
    for pred, ref in TEXT_PAIRS:
        m = single_meteor_score(tokens(ref), tokens(pred), stemmer=stemmer, wordnet=NoWordnet())
        rows.append({"prediction": pred, "reference": ref, "meteor": float(m), "rouge_l": rouge_l(pred, ref),
                     "lcs": lcs_brute(tokens(pred), tokens(ref))})
    return rows


CITY_PAIRS = [
    (("Valletta", 35.8989, 14.5146), ("Jakarta", -6.2088, 106.8456)),
    (("Paris", 48.8534, 2.3488), ("Paris, Texas", 33.6609, -95.5555)),
    (("London", 51.5085, -0.1257), ("Sydney", -33.8679, 151.2073)),
    (("Christchurch", -43.5333, 172.6333), ("Sydney", -33.8679, 151.2073)),
    (("Kyoto", 35.0211, 135.7538), ("Rio de Janeiro", -22.9028, -43.2075)),
]


def great_circle_km(lat1, lon1, lat2, lon2):
    # spherical law of cosines in 50-digit arithmetic; no cancellation problem at this precision
    mpmath.mp.dps = 50
    p1, p2 = mpmath.radians(lat1), mpmath.radians(lat2)
    dl = mpmath.radians(lon2 - lon1)
    c = mpmath.sin(p1) * mpmath.sin(p2) + mpmath.cos(p1) * mpmath.cos(p2) * mpmath.cos(dl)
    return float(6371 * mpmath.acos(c))


def geo_rows():
    rows = []
    for a, b in CITY_PAIRS:
        d = great_circle_km(a[1], a[2], b[1], b[2])
        rows.append({"a": list(a), "b": list(b), "km": d, "codelta": 1 / (1 + d / 1000)})
    return rows


def hierarchy_rows():
    parent, name = {}, {}
    with open(os.path.join(FIXTURES, "gazetteer.tsv")) as f:
        for line in f:
            if line.startswith("#") or not line.strip():
                continue
            cols = line.rstrip("\n").split("\t")
            gid, par = int(cols[0]), int(cols[6])
            parent[gid] = par or None
            name[gid] = cols[1]

    def ancestors(g):
        out = [g]
        while parent[out[-1]] is not None:
            out.append(parent[out[-1]])
        return out

    def steps(a, b):
        # walk up from a; the first node that is also an ancestor of b is the LCA
        up_b = ancestors(b)
        for i, node in enumerate(ancestors(a)):
            if node in up_b:
                return i + up_b.index(node)
        raise ValueError("disconnected")

    pairs = [(4717560, 4887398), (2562305, 1642911), (2988507, 2996944), (2643743, 2643743), (2635167, 2643743),
             (3182997, 2524881), (2111884, 1857910), (5746545, 5128581)]
    return [{"a": a, "b": b, "a_name": name[a], "b_name": name[b], "steps": steps(a, b),
             "hldelta": 1 / (1 + steps(a, b))} for a, b in pairs]


def kappa_rows():
    def exact(m):
        n = sum(m[0])
        N = len(m)
        p_i = [Fraction(sum(x * x for x in row) - n, n * (n - 1)) for row in m]
        p_bar = sum(p_i) / N
        p_j = [Fraction(sum(row[j] for row in m), N * n) for j in range(len(m[0]))]
        p_e = sum(p * p for p in p_j)
        return (p_bar - p_e) / (1 - p_e)

    out = []
    for m in ([[2, 1], [1, 2], [3, 0]], [[3, 0], [0, 3]], [[4, 1, 0], [2, 2, 1], [0, 5, 0], [1, 1, 3]],
              [[0, 0, 0, 0, 14], [0, 2, 6, 4, 2], [0, 0, 3, 5, 6], [0, 3, 9, 2, 0], [2, 2, 8, 1, 1],
               [7, 7, 0, 0, 0], [3, 2, 6, 3, 0], [2, 5, 3, 2, 2], [6, 5, 2, 1, 0], [0, 2, 2, 3, 7]]):
        k = exact(m)
        assert abs(float(k) - sm_fleiss_kappa(np.array(m))) < 1e-12
        out.append({"ratings": m, "kappa": float(k), "kappa_fraction": str(k)})
    return out


def people_rows(rng):
    pool = ["Angela Merkel", "Barack Obama", "Emmanuel Macron", "Olaf Scholz", "Joseph Muscat", "Jacinda Ardern",
            "Boris Johnson", "Joko Widodo", "Shinzo Abe", "Alexis Tsipras"]

    def draw():
        k = rng.choice([0, 0, 1, 1, 2, 2, 3, 4])
        names = rng.sample(pool, k)
        # vary case and spacing; the metric compares normalized names
        return [rng.choice([n, n.lower(), n.upper(), n.replace(" ", "  ")]) for n in names]

    def key(n):
        return " ".join(n.lower().split())

    rows = []
    for _ in range(50):
        pred, ref = draw(), draw()
        p, r = {key(n) for n in pred}, {key(n) for n in ref}
        if not p and not r:
            prf = (1.0, 1.0, 1.0)
        elif not p or not r:
            prf = (0.0, 0.0, 0.0)
        else:
            inter = len(p & r)
            rec, prec = inter / len(r), inter / len(p)
            prf = (rec, prec, 0.0 if inter == 0 else 2 * prec * rec / (prec + rec))
        rows.append({"predicted": pred, "reference": ref, "recall": prf[0], "precision": prf[1], "f1": prf[2]})
    return rows


def knn_block(rng):
    dim, n = 16, 1000
    index = np.round(np.array([[rng.gauss(0, 1) for _ in range(dim)] for _ in range(n)]), 6)
    queries = np.round(np.array([[rng.gauss(0, 1) for _ in range(dim)] for _ in range(20)]), 6)
    unit = index / np.linalg.norm(index, axis=1, keepdims=True)
    expected = []
    for q in queries:
        sims = unit @ (q / np.linalg.norm(q))
        order = sorted(range(n), key=lambda i: (-sims[i], i))
        expected.append({str(k): [{"index": i, "similarity": float(sims[i])} for i in order[:k]] for k in (1, 5, 20)})
    return {"dimension": dim, "index": index.tolist(), "queries": queries.tolist(), "expected": expected}


def veracity_block():
    # Accurate is the positive class: TP=3, FN=1, FP=2, TN=4
    tp, fn, fp, tn = 3, 1, 2, 4
    f1_acc = Fraction(2 * tp, 2 * tp + fp + fn)
    f1_ooc = Fraction(2 * tn, 2 * tn + fn + fp)
    return {"tp": tp, "fn": fn, "fp": fp, "tn": tn, "accuracy": float(Fraction(tp + tn, 10)),
            "recall_accurate": float(Fraction(tp, tp + fn)), "recall_ooc": float(Fraction(tn, tn + fp)),
            "macro_f1": float((f1_acc + f1_ooc) / 2)}


def main():
    rng = random.Random(20240611)
    out = {
        "text_pairs": meteor_rows(),
        "geo": geo_rows(),
        "hierarchy": hierarchy_rows(),
        "kappa": kappa_rows(),
        "people": people_rows(rng),
        "veracity": veracity_block(),
        "knn": knn_block(rng),
    }
    with open(os.path.join(HERE, "oracles.json"), "w") as f:
        json.dump(out, f, indent=1)
        f.write("\n")


if __name__ == "__main__":
    main()

"""Brute-force reference implementations used only by the tests.

These re-derive counts by quadratic scans over plain whitespace tokens and
share no code with the package's token-event path.
"""

import math

ANAPHORS = {"it", "they", "them", "their", "she", "he", "her", "him", "his", "this", "that"}


def _positions(utterances):
    """Flat list of (role, token) in speaking order; text is pre-normalised."""
    flat = []
    for role, text in utterances:
        for tok in text.rstrip("?").split():
            flat.append((role, tok))
    return flat


def brute_counts(utterances):
    """utterances: list of (role_char, text) with role_char in {"A", "S"}.

    Returns dict of raw per-role counts q/i/r for A and S.
    """
    flat = _positions(utterances)
    counts = {f"{k}_{r}": 0 for k in "qir" for r in "AS"}
    for role, text in utterances:
        if text.endswith("?"):
            counts[f"q_{role}"] += 1

    seen = []
    for tok in [t for _, t in flat]:
        if tok not in seen:
            seen.append(tok)
    for tok in seen:
        if tok in ANAPHORS:
            continue
        freq = sum(1 for _, t in flat if t == tok)
        if freq < 2:
            continue
        # introducer: the occurrence with no earlier occurrence of the same token
        introducer = None
        for p, (role, t) in enumerate(flat):
            if t == tok and not any(flat[e][1] == tok for e in range(p)):
                introducer = role
        counts[f"i_{introducer}"] += 1
        other = "S" if introducer == "A" else "A"
        if any(r == other and t == tok for r, t in flat):
            counts[f"r_{other}"] += 1

    for role, t in flat:
        if t in ANAPHORS:
            counts[f"r_{role}"] += 1
    return counts


def brute_rates(utterances):
    n = len(utterances)
    c = brute_counts(utterances)
    out = {k: v / n for k, v in c.items()}

    def d(a, s):
        return 0.0 if a + s == 0 else (a - s) / (a + s)

    for k in "qir":
        out[f"avg_{k}"] = (out[f"{k}_A"] + out[f"{k}_S"]) / 2
        out[f"delta_{k}"] = d(out[f"{k}_A"], out[f"{k}_S"])
    out["flow_A"] = out["r_A"] - out["i_A"]
    out["flow_S"] = out["r_S"] - out["i_S"]
    return out


def naive_histogram(values, edges, alpha):
    """Linear-scan binning with clamping into the terminal bins."""
    n_bins = len(edges) - 1
    counts = [0] * n_bins
    for v in values:
        b = None
        for k in range(n_bins):
            last = k == n_bins - 1
            if edges[k] <= v < edges[k + 1] or (last and v == edges[k + 1]):
                b = k
                break
        if b is None:
            b = 0 if v < edges[0] else n_bins - 1
        counts[b] += 1
    total = len(values) + alpha * n_bins
    return counts, [(c + alpha) / total for c in counts]


def naive_cross_entropy(p, q):
    total = 0.0
    for i in range(len(p)):
        total -= p[i] * math.log(q[i])
    return total

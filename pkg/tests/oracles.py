"""Independent reference implementations used to check the real ones.

Everything here is written as plainly as possible (python loops, the
textbook formulas) and must stay independent of the code under test.
"""

from __future__ import annotations

import math


def anova_oracle(X, y):
    """Direct, unoptimized per-feature one-way ANOVA.

    msb = sum_i n_i (group_mean_i - grand_mean)^2 / (K - 1)
    msw = sum_i sum_j (x_ij - group_mean_i)^2 / (N - K)
    f   = msb / msw (with +inf / 0 for the degenerate denominators)
    """
    n = len(X)
    d = len(X[0])
    classes = sorted(set(y))
    k = len(classes)
    msb, msw, f = [], [], []
    for j in range(d):
        grand = sum(X[i][j] for i in range(n)) / n
        between = 0.0
        within = 0.0
        for cls in classes:
            rows = [i for i in range(n) if y[i] == cls]
            mean_c = sum(X[i][j] for i in rows) / len(rows)
            between += len(rows) * (mean_c - grand) ** 2
            within += sum((X[i][j] - mean_c) ** 2 for i in rows)
        msb_j = between / (k - 1)
        msw_j = within / (n - k)
        msb.append(msb_j)
        msw.append(msw_j)
        if msw_j > 0:
            f.append(msb_j / msw_j)
        elif msb_j > 0:
            f.append(math.inf)
        else:
            f.append(0.0)
    return msb, msw, f


def pooled_t_statistic(a, b):
    """Two-sample t with pooled variance (brute force)."""
    na, nb = len(a), len(b)
    ma = sum(a) / na
    mb = sum(b) / nb
    va = sum((x - ma) ** 2 for x in a) / (na - 1)
    vb = sum((x - mb) ** 2 for x in b) / (nb - 1)
    sp2 = ((na - 1) * va + (nb - 1) * vb) / (na + nb - 2)
    return (ma - mb) / math.sqrt(sp2 * (1.0 / na + 1.0 / nb))


def split_gain_oracle(g, h, left_rows, right_rows, reg_lambda, gamma):
    """Gain of one concrete partition, straight from the closed form."""

    def score(rows):
        G = sum(g[i] for i in rows)
        H = sum(h[i] for i in rows)
        return G * G / (H + reg_lambda)

    every = list(left_rows) + list(right_rows)
    return 0.5 * (score(left_rows) + score(right_rows) - score(every)) - gamma


def brute_force_best_split(X, g, h, reg_lambda, gamma, min_child_weight):
    """Enumerate every feature and midpoint; apply the tie rule explicitly."""
    m = len(X)
    d = len(X[0])
    best = None  # (gain, feature, threshold)
    for j in range(d):
        values = sorted(set(X[i][j] for i in range(m)))
        for lo, hi in zip(values, values[1:]):
            threshold = (lo + hi) / 2.0
            left = [i for i in range(m) if X[i][j] < threshold]
            right = [i for i in range(m) if X[i][j] >= threshold]
            if sum(h[i] for i in left) < min_child_weight:
                continue
            if sum(h[i] for i in right) < min_child_weight:
                continue
            gain = split_gain_oracle(g, h, left, right, reg_lambda, gamma)
            if gain <= 0:
                continue
            candidate = (gain, j, threshold)
            if best is None or gain > best[0]:
                best = candidate
            # ties: keep the lower feature index, then the lower threshold,
            # which is the iteration order here, so strictly-greater suffices
    return best


def logistic_loss(y, score):
    """-log likelihood of the label under p = sigmoid(score), stable form."""
    # log(1 + e^s) - y*s without overflow
    if score > 0:
        return score + math.log1p(math.exp(-score)) - y * score
    return math.log1p(math.exp(score)) - y * score


def softmax_loss(y, scores):
    m = max(scores)
    lse = m + math.log(sum(math.exp(s - m) for s in scores))
    return lse - scores[y]


def central_difference(fun, x, step=1e-5):
    return (fun(x + step) - fun(x - step)) / (2.0 * step)

"""Build small-world ring graphs and check their degree statistics.

A graph G(n, k, p) is a ring where every vertex is joined to its k nearest
neighbours on each side, plus independent Bernoulli(p) shortcuts between
non-local pairs, p = c/(n - 2k - 1). The shortcut degree of a vertex is then
Binomial(n - 2k - 1, p), so the mean total degree is 2k + c.
"""

import numpy as np

from ringrumor import GraphParams, build, degree_stats

n, k, c = 10_000, 2, 1.5
params = GraphParams(n, k, c)
print(f"G(n={n}, k={k}, c={c}):  p = {params.p:.3e}, "
      f"{params.eligible_pairs} eligible pairs")

graph = build(params, rng=42)
stats = degree_stats(graph)
print(f"mean degree      {stats.mean:.4f}   (expected {2 * k + c})")
print(f"degree variance  {stats.variance:.4f}   (expected ~c = {c})")
print(f"shortcut count   {graph.shortcut_count}   "
      f"(expected ~{params.eligible_pairs * params.p:.0f})")

print("\nshortcut-degree histogram vs Binomial pmf:")
hist = stats.shortcut_histogram / n
binom_pmf = [np.exp(
    d * np.log(params.p) + (n - 2 * k - 1 - d) * np.log1p(-params.p)
    + sum(np.log(n - 2 * k - 1 - i) - np.log(i + 1) for i in range(d))
) for d in range(len(hist))]
for d, (emp, theo) in enumerate(zip(hist, binom_pmf)):
    bar = "#" * int(200 * emp)
    print(f"  d={d:2d}  empirical {emp:.4f}  binomial {theo:.4f}  {bar}")

# the sparse sampler draws the Binomial total and then a uniform subset of
# eligible pairs: same law, O(shortcuts) work instead of O(n^2)
big = build(GraphParams(100_000, 1, 2.0), rng=7, method="sparse")
print(f"\nsparse sampler at n=100000: {big.shortcut_count} shortcuts, "
      f"mean degree {degree_stats(big).mean:.4f} (expected 4.0)")

# graphs serialize to JSON with local edges implicit
text = graph.to_json()
print(f"\nJSON form: {len(text)} bytes, starts with {text[:60]}...")

"""Labelled 2-graphs and 3-graphs from connected graphs, checked against
a brute-force sweep over edge subsets."""

from coregf import graphs as G
from coregf import oracle

N = 6
C = G.all_connected_series(N)
two = G.labelled_counts(G.two_graph_series(C, N))
three = G.labelled_counts(G.kernel_series_closed(C, N).specialize(y=1))

print(f"{'n':>3} {'2-graphs':>10} {'sweep':>10} {'3-graphs':>10} {'sweep':>10}")
for n in range(3, N + 1):
    s2 = oracle.count_graphs(n, min_degree=2) if n <= 5 else "-"
    s3 = oracle.count_graphs(n, min_degree=3) if n <= 6 else "-"
    print(f"{n:>3} {two[n]:>10} {s2:>10} {three[n]:>10} {s3:>10}")

# connected graphs on 4 vertices split by the size of their 2-core
print()
print("core sizes, n=4:", G.labelled_table(G.core_marked_graphs(C, 4), 4))
print("sweep:          ", oracle.core_histogram(4))

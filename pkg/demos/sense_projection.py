"""t-SNE projection of one word's sense clusters to 2D.

Generates three sense clusters for "bank" in 50-D, projects them with
the exact t-SNE implementation and writes the plot-ready CSV (senses
with fewer than two instances are dropped, mirroring the usual
visualization filter).
"""
import numpy as np

from wsdknn import ProjectionConfig, export_plot_data, export_trace, tsne

rng = np.random.default_rng(1)
DIM = 50

clusters = {
    "bank%1:14:00::": (0, 20),   # financial institution: 20 instances
    "bank%1:17:01::": (1, 12),   # sloping land
    "bank%1:17:02::": (2, 1),    # singleton, filtered from the CSV
}

vectors, labels, provenance = [], [], []
i = 0
for sense, (axis, count) in clusters.items():
    center = np.zeros(DIM)
    center[axis] = 9.0
    for _ in range(count):
        vectors.append(center + rng.normal(size=DIM))
        labels.append(sense)
        provenance.append(f"s{i}#0")
        i += 1

config = ProjectionConfig(perplexity=10.0, iterations=600, seed=42)
coords, trace = tsne(vectors, labels, provenance, config, return_trace=True)

print(f"projected {len(coords.labels)} points; "
      f"KL went from {trace[0]:.3f} (exaggerated) to {trace[-1]:.3f}")

csv = export_plot_data(coords, min_label_frequency=2)
with open("bank_senses.csv", "wb") as fh:
    fh.write(csv)
with open("bank_senses_trace.csv", "wb") as fh:
    fh.write(export_trace(trace))
print(f"wrote bank_senses.csv ({len(csv.splitlines()) - 1} rows; the "
      f"singleton sense is filtered) and bank_senses_trace.csv")

# per-sense 2D centroids make the cluster separation visible in text form
for sense in ("bank%1:14:00::", "bank%1:17:01::"):
    pts = np.array([(x, y) for x, y, l, _ in coords.points if l == sense])
    print(f"  {sense}: centroid ({pts[:, 0].mean():8.2f}, "
          f"{pts[:, 1].mean():8.2f}), {len(pts)} points")

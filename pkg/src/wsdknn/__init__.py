"""Localized kNN word sense disambiguation over contextualized embeddings."""

from .corpus import (Corpus, CorpusStats, InstanceKey, Keying, Sentence,
                     Token, annotated_instances, compute_stats, load_corpus,
                     parse_jsonl, parse_ufsac_xml, write_jsonl)
from .vectors import (VectorStore, cosine_distance, load_store, read_store,
                      save_store, write_store)
from .sense_index import (Backoff, IndexEntry, Method, Prediction, SenseIndex,
                          build_index, classify, effective_k, load_index,
                          mfs_predict, neighbors, save_index)
from .evaluation import (EvalResult, SweepResult, TableFormat, evaluate,
                         evaluate_mfs, render_table, score, sweep_k)
from .projection import (Coords2D, ProjectionConfig, export_plot_data,
                         export_trace, kl_gradient, pairwise_affinities, tsne)

__version__ = "0.1.0"

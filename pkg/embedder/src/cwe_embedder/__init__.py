"""Contextualized word embedding extraction to CWE1 vector stores."""

from .alignment import AlignmentError, align
from .formats import StoreWriter, read_corpus
from .pooling import LayerMode, LayerSpec, pool
from .pipeline import EmbedReport, embed_corpus

__version__ = "0.1.0"

"""End-to-end extraction: corpus in, CWE1 vector store out.

Sentences are re-tokenized from their lemmas (the classifier keys on
lemmas; a flag switches to surface forms), run through the model in
deterministic evaluation mode, and every annotated token's pooled
vector is written under its "sentenceId#tokenIndex" key.  Sentences
exceeding the model length are skipped, not windowed, and reported.
"""
from __future__ import annotations

import sys
from dataclasses import dataclass, field

import numpy as np
import torch

from .alignment import align
from .formats import StoreWriter, read_corpus
from .pooling import LayerSpec, pool


@dataclass
class EmbedReport:
    embedded: int = 0
    skipped: list[str] = field(default_factory=list)  # instance keys

    @property
    def total(self) -> int:
        return self.embedded + len(self.skipped)


def load_model(model_id: str):
    from transformers import AutoModel, AutoTokenizer

    tokenizer = AutoTokenizer.from_pretrained(model_id)
    model = AutoModel.from_pretrained(model_id, output_hidden_states=True)
    model.eval()
    return tokenizer, model


def embed_corpus(corpus_path, out_path, model_id: str | None = None,
                 spec: LayerSpec = LayerSpec(), use_surface: bool = False,
                 tokenizer=None, model=None, log=sys.stderr) -> EmbedReport:
    """Embed every annotated instance of the corpus into a CWE1 store.

    Pass either model_id or preloaded (tokenizer, model).  Returns a
    report whose embedded/skipped counts reconcile with the corpus's
    annotated instances.
    """
    if tokenizer is None or model is None:
        if model_id is None:
            raise ValueError("need model_id or preloaded tokenizer+model")
        tokenizer, model = load_model(model_id)
    model.eval()

    max_pieces = getattr(model.config, "max_position_embeddings", 512) - 2
    hidden = model.config.hidden_size
    writer = StoreWriter(dim=spec.output_dim(hidden))
    report = EmbedReport()

    sentences = read_corpus(corpus_path)
    with torch.no_grad():
        for sent in sentences:
            annotated = [i for i, t in enumerate(sent.tokens) if t.annotated]
            if not annotated:
                continue
            words = [t.surface if use_surface else t.lemma
                     for t in sent.tokens]
            pieces_per_word = [tokenizer.tokenize(w) for w in words]
            if any(not p for p in pieces_per_word):
                report.skipped.extend(f"{sent.id}#{i}" for i in annotated)
                print(f"skipping {sent.id}: untokenizable word", file=log)
                continue
            pieces = [p for ps in pieces_per_word for p in ps]
            if len(pieces) > max_pieces:
                report.skipped.extend(f"{sent.id}#{i}" for i in annotated)
                print(f"skipping {sent.id}: {len(pieces)} pieces exceed "
                      f"model length {max_pieces}", file=log)
                continue
            mapping = align(words, pieces)

            ids = tokenizer.convert_tokens_to_ids(pieces)
            input_ids = torch.tensor(
                [[tokenizer.cls_token_id] + ids + [tokenizer.sep_token_id]])
            out = model(input_ids=input_ids)
            # drop [CLS]/[SEP] so piece indices line up with the alignment
            states = [h[0, 1:-1].numpy() for h in out.hidden_states]

            for i in annotated:
                vec = pool(states, mapping, i, spec)
                writer.add(f"{sent.id}#{i}", vec)
                report.embedded += 1

    writer.write(out_path)
    print(f"wrote {report.embedded} vectors (dim {writer.dim}); "
          f"skipped {len(report.skipped)} instances", file=log)
    return report

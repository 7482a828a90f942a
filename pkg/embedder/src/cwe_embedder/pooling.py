"""Wordpiece pooling: per-layer piece averages, combined across layers.

A token's vector is the arithmetic mean of its pieces' hidden states in
each selected layer.  CONCAT_LAST_4 concatenates the four per-layer
means in order last, last-1, last-2, last-3 (output dim 4h); SUM_LAST_4
sums them (dim h); SINGLE_LAYER takes one layer (dim h).
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np


class LayerMode(str, Enum):
    CONCAT_LAST_4 = "concat4"
    SUM_LAST_4 = "sum4"
    SINGLE_LAYER = "single"


@dataclass(frozen=True)
class LayerSpec:
    mode: LayerMode = LayerMode.CONCAT_LAST_4
    layer: Optional[int] = None  # hidden-state index for SINGLE_LAYER; -1 = last

    def __post_init__(self):
        if self.mode is LayerMode.SINGLE_LAYER and self.layer is None:
            raise ValueError("SINGLE_LAYER requires a layer index")

    def layer_indices(self, n_states: int) -> list[int]:
        """Hidden-state indices to pool, in combination order."""
        if self.mode is LayerMode.SINGLE_LAYER:
            idx = self.layer if self.layer >= 0 else n_states + self.layer
            if not 0 <= idx < n_states:
                raise ValueError(f"layer {self.layer} out of range "
                                 f"for {n_states} hidden states")
            return [idx]
        if n_states < 4:
            raise ValueError(f"model exposes {n_states} hidden states, "
                             "need at least 4")
        return [n_states - 1, n_states - 2, n_states - 3, n_states - 4]

    def output_dim(self, hidden_size: int) -> int:
        return 4 * hidden_size if self.mode is LayerMode.CONCAT_LAST_4 \
            else hidden_size

    @classmethod
    def parse(cls, text: str) -> "LayerSpec":
        """Parse CLI notation: concat4 | sum4 | layer:i."""
        if text == "concat4":
            return cls(LayerMode.CONCAT_LAST_4)
        if text == "sum4":
            return cls(LayerMode.SUM_LAST_4)
        if text.startswith("layer:"):
            return cls(LayerMode.SINGLE_LAYER, layer=int(text[6:]))
        raise ValueError(f"unknown layer spec {text!r}")


def pool(hidden_states, alignment: dict[int, list[int]], token_index: int,
         spec: LayerSpec) -> np.ndarray:
    """Pooled vector for one token.

    hidden_states: sequence of per-layer (num_pieces, hidden) arrays,
    index 0 = embedding layer output, -1 = last transformer layer.
    """
    piece_idxs = alignment.get(token_index)
    if not piece_idxs:
        raise ValueError(f"token {token_index} has no aligned pieces")
    layers = spec.layer_indices(len(hidden_states))
    means = [np.asarray(hidden_states[li])[piece_idxs].mean(axis=0)
             for li in layers]
    if spec.mode is LayerMode.SUM_LAST_4:
        out = np.sum(means, axis=0)
    elif spec.mode is LayerMode.CONCAT_LAST_4:
        out = np.concatenate(means)
    else:
        out = means[0]
    return out.astype(np.float32)

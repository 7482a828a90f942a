"""Token-to-wordpiece alignment.

The corpus arrives pre-tokenized; the model tokenizer splits each word
into one or more subword pieces.  align() reconciles a flat piece
stream against the corpus tokens, producing for every token the
contiguous list of piece indices whose surface text reassembles it.
"""
from __future__ import annotations

import unicodedata

CONTINUATION = "##"
SPECIAL_PIECES = {"[CLS]", "[SEP]", "[PAD]", "[MASK]"}
UNK = "[UNK]"

AlignmentMap = dict[int, list[int]]


def _normalize(text: str) -> str:
    # mirrors uncased BERT preprocessing: casefold and strip diacritics
    out = []
    for ch in unicodedata.normalize("NFD", text.lower()):
        if unicodedata.category(ch) == "Mn":
            continue
        if ch.isspace():
            continue
        out.append(ch)
    return "".join(out)


def _piece_text(piece: str) -> str:
    if piece.startswith(CONTINUATION):
        return piece[len(CONTINUATION):]
    return piece


class AlignmentError(ValueError):
    pass


def align(corpus_tokens: list[str], pieces: list[str]) -> AlignmentMap:
    """Map each corpus token index to its piece indices.

    Pieces must derive from the corpus tokens in order under a wordpiece
    tokenizer; special sentence markers are skipped.  An [UNK] piece
    stands for one whole corpus token.  Raises AlignmentError when the
    streams cannot be reconciled.
    """
    mapping: AlignmentMap = {}
    pi = 0
    n = len(pieces)
    for ti, token in enumerate(corpus_tokens):
        target = _normalize(token)
        while pi < n and pieces[pi] in SPECIAL_PIECES:
            pi += 1
        if pi >= n:
            raise AlignmentError(
                f"piece stream exhausted at token {ti} ({token!r})")
        if pieces[pi] == UNK:
            # wordpiece emits a single [UNK] for an untokenizable word
            mapping[ti] = [pi]
            pi += 1
            continue
        idxs: list[int] = []
        consumed = ""
        while pi < n and pieces[pi] not in SPECIAL_PIECES:
            text = _normalize(_piece_text(pieces[pi]))
            if not target.startswith(consumed + text):
                break
            consumed += text
            idxs.append(pi)
            pi += 1
            if consumed == target:
                break
        if consumed != target or not idxs:
            raise AlignmentError(
                f"cannot reconcile token {ti} ({token!r}) with pieces "
                f"around index {pi}")
        mapping[ti] = idxs
    while pi < n and pieces[pi] in SPECIAL_PIECES:
        pi += 1
    if pi != n:
        raise AlignmentError(f"{n - pi} unconsumed pieces after last token")
    return mapping

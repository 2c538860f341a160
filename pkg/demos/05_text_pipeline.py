"""The Devanagari text pipeline step by step: normalization (canonical
composition, digit folding, whitespace collapse), tokenization, vocabulary
construction, and round-tripping through token ids.
"""

import unicodedata

from snmt.corpus import build_vocab, detokenize, encode_sentence, normalize_text, tokenize

raw = "  क़ो  १२३ रुपये दो। जल्दी!  "
norm = normalize_text(raw)
print(f"raw       : {raw!r}")
print(f"normalized: {norm!r}")
print("  - the qa letter is stored in canonical form "
      f"({' + '.join(unicodedata.name(c) for c in norm[:2])})")
print("  - Devanagari digits १२३ folded to ASCII 123; "
      "no-break and repeated spaces collapsed")

tokens = tokenize(norm)
print(f"tokens    : {tokens}")
print(f"rendered  : {detokenize(tokens)!r}  (punctuation re-attached)")

vocab = build_vocab([tokens, tokenize(normalize_text("रुपये दो। अभी दो।"))])
ids = encode_sentence(vocab, tokens)
print(f"ids       : {ids}  (1/2 frame the sentence; unseen words would map to 3)")
print(f"vocab size: {vocab.size} (4 reserved + corpus words)")

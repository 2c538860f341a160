"""Reserved vocabulary ids shared across corpus, model, and decoding."""

PAD_ID = 0
START_ID = 1
END_ID = 2
UNK_ID = 3

PAD_TOKEN = "<pad>"
START_TOKEN = "<start>"
END_TOKEN = "<end>"
UNK_TOKEN = "<unk>"

RESERVED = [PAD_TOKEN, START_TOKEN, END_TOKEN, UNK_TOKEN]

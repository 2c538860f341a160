"""Translation quality metrics on toy data: corpus BLEU with its n-gram
precisions and brevity penalty, plus the 4-point human-evaluation
aggregation.
"""

from snmt.evaluation import (
    HumanEvalRecord,
    corpus_bleu,
    human_eval_accuracy,
    sentence_bleu,
)

references = [
    "मैं तैर सकता हूँ".split(),
    "मैं बहुत व्यस्त हूँ".split(),
    "जापान दुनिया के सबसे ताकतशाली अर्थतंत्रों में से एक है".split(),
]
candidates = [
    "मैं तैर सकता हूँ".split(),                       # perfect
    "मैं व्यस्त हूँ".split(),                          # one word dropped
    "जापान दुनिया में सबसे ताकतशाली देश है".split(),   # paraphrase-ish
]

report = corpus_bleu(candidates, references)
print(f"corpus BLEU      : {report.score:.4f}")
for n, p in enumerate(report.precisions, start=1):
    print(f"  p_{n}           : {p:.4f}")
print(f"  brevity penalty: {report.brevity_penalty:.4f} "
      f"(candidate {report.candidate_length} vs reference {report.reference_length} tokens)")

print("\nper-sentence (add-one smoothed):")
for cand, ref in zip(candidates, references):
    print(f"  {sentence_bleu(cand, ref):.4f}  {' '.join(cand)}")

records = [HumanEvalRecord(f"s{i}", score) for i, score in
           enumerate([4, 4, 3, 3, 2, 1], start=1)]
accuracy, histogram = human_eval_accuracy(records, threshold=3)
print(f"\nhuman eval: histogram {histogram}, accuracy (>=3) {accuracy:.2f}")

# Copyright (c) 2026 ASES Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Writes tests/data/metric_pairs.jsonl and prints reference metric values.

The pairs are lowercase words separated by single spaces, so whitespace
tokenization (sacrebleu tokenize="none", rouge-score's default tokenizer) and
the library's word tokenizer agree token for token. The printed values are
frozen into the metric tests.
"""

import json
import pathlib
import random

import sacrebleu
from rouge_score import rouge_scorer

WORDS = ("the a cat dog sat ran on under mat rug big small red blue and then "
         "he she it was is apples 3 5 12 answer so has buys more left box").split()


def make_pairs(rng, n=50):
    pairs = []
    for _ in range(n):
        ref = [rng.choice(WORDS) for _ in range(rng.randint(4, 14))]
        cand = list(ref)
        for _ in range(rng.randint(0, 4)):
            op = rng.random()
            if op < 0.4 and cand:
                cand[rng.randrange(len(cand))] = rng.choice(WORDS)
            elif op < 0.7 and len(cand) > 1:
                del cand[rng.randrange(len(cand))]
            else:
                cand.insert(rng.randrange(len(cand) + 1), rng.choice(WORDS))
        pairs.append({"prediction": " ".join(cand), "reference": " ".join(ref)})
    return pairs


def main():
    out = pathlib.Path(__file__).parent.parent / "tests" / "data" / "metric_pairs.jsonl"
    pairs = make_pairs(random.Random(7))
    with open(out, "w", encoding="utf-8") as f:
        for p in pairs:
            f.write(json.dumps(p, separators=(",", ":")) + "\n")
    preds = [p["prediction"] for p in pairs]
    refs = [p["reference"] for p in pairs]
    bleu = sacrebleu.corpus_bleu(preds, [refs], smooth_method="none", tokenize="none", force=True)
    scorer = rouge_scorer.RougeScorer(["rougeL"], use_stemmer=False)
    rouge = sum(scorer.score(r, p)["rougeL"].fmeasure for p, r in zip(preds, refs)) / len(pairs)
    print(f"corpus_bleu {bleu.score:.12f}")
    print(f"mean_rouge_l {100 * rouge:.12f}")
    half = 25
    bleu_half = sacrebleu.corpus_bleu(preds[:half], [refs[:half]], smooth_method="none",
                                      tokenize="none", force=True)
    print(f"corpus_bleu_first25 {bleu_half.score:.12f}")


if __name__ == "__main__":
    main()

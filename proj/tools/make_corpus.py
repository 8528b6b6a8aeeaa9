#!/usr/bin/env python3
# Copyright 2026 The stegtok Authors.
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

"""Generates the bundled plain-text corpus (data/corpus.txt).

The output is a deterministic function of the seed. Sentences are built from
small templates over a lexicon with heavy prefix/suffix morphology (un-, re-,
-able, -ness, -ing, compounds), so BPE vocabularies trained on it contain many
pairs of tokens where one surface is a byte-prefix of another.
"""

import argparse
import random

SUBJECTS = [
    "the farmer", "my neighbour", "the old teacher", "a young engineer",
    "the committee", "our landlord", "the mediator", "a tired student",
    "the river guide", "her brother", "the city council", "a careful reader",
    "the baker", "his daughter", "the night nurse", "a local musician",
    "the gardener", "the shop owner", "every visitor", "the translator",
]

VERBS = [
    "found", "reused", "rebuilt", "unpacked", "repainted", "described",
    "remembered", "discovered", "returned", "unlocked", "reviewed", "noticed",
    "carried", "understood", "mentioned", "reopened", "replaced", "painted",
    "walked past", "talked about", "cleaned", "measured", "recorded",
]

ADJECTIVES = [
    "usable", "unusable", "reusable", "able", "unable", "readable",
    "unreadable", "comfortable", "uncomfortable", "reliable", "unreliable",
    "wet", "dry", "careful", "careless", "useful", "useless", "hopeful",
    "hopeless", "unusual", "usual", "natural", "unnatural", "remarkable",
    "quiet", "quieter", "dark", "darker", "bright", "brightest", "broken",
    "unbroken", "kind", "unkind", "known", "unknown", "certain", "uncertain",
]

NOUNS = [
    "bridge", "bridges", "garden", "gardens", "land", "lands", "wetlands",
    "mediation", "media", "medicine", "notebook", "notebooks", "window",
    "windows", "market", "markets", "station", "stations", "story",
    "stories", "letter", "letters", "kitchen", "kitchens", "harbour",
    "harbours", "machine", "machines", "readiness", "kindness", "darkness",
    "happiness", "unhappiness", "building", "buildings", "rebuilding",
    "understanding", "misunderstanding", "painting", "paintings", "school",
    "schools", "island", "islands", "mountain", "mountains", "valley",
]

PLACES = [
    "near the river", "in the old town", "behind the station",
    "at the market", "on the island", "in the mountains", "by the harbour",
    "across the valley", "in the kitchen", "at the school", "in the garden",
    "under the bridge", "in dry land environments", "in the wetlands",
]

TIMES = [
    "yesterday", "this morning", "last winter", "every evening",
    "after the rain", "before dawn", "during the festival", "once again",
    "at last", "in the end", "for the first time", "later that year",
]

CONNECTIVES = [
    "because", "although", "while", "after", "before", "until", "since",
]


def noun_phrase(rng):
    if rng.random() < 0.55:
        return "the " + rng.choice(ADJECTIVES) + " " + rng.choice(NOUNS)
    return "the " + rng.choice(NOUNS)


def clause(rng):
    parts = [rng.choice(SUBJECTS), rng.choice(VERBS), noun_phrase(rng)]
    if rng.random() < 0.5:
        parts.append(rng.choice(PLACES))
    if rng.random() < 0.3:
        parts.append(rng.choice(TIMES))
    return " ".join(parts)


def sentence(rng):
    form = rng.random()
    if form < 0.45:
        text = clause(rng)
    elif form < 0.75:
        text = clause(rng) + " " + rng.choice(CONNECTIVES) + " " + clause(rng)
    elif form < 0.9:
        text = ("it was " + rng.choice(ADJECTIVES) + " that " + clause(rng))
    else:
        text = (rng.choice(TIMES) + ", " + clause(rng) + " and "
                + rng.choice(VERBS) + " " + noun_phrase(rng))
    return text[0].upper() + text[1:] + rng.choice([".", ".", ".", "!", "?"])


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--lines", type=int, default=1500)
    parser.add_argument("--seed", type=int, default=20260101)
    parser.add_argument("--out", default="data/corpus.txt")
    args = parser.parse_args()

    rng = random.Random(args.seed)
    seen = set()
    lines = []
    while len(lines) < args.lines:
        line = sentence(rng)
        if rng.random() < 0.35:
            line += " " + sentence(rng)
        if line not in seen:
            seen.add(line)
            lines.append(line)
    with open(args.out, "w", encoding="utf-8") as f:
        f.write("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()

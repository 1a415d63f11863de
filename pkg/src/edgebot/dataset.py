"""Synthetic instruction dataset for planner fine-tuning experiments.

Fills the two prompt skeletons (navigation-only; navigate-grab-navigate-
drop manipulation) with detector class names and landmark names, then
applies seeded surface variation (verb synonyms, lead-ins, trailing
clauses) in place of external-model rewording. Every generated prompt is
guaranteed to decompose, via the template planner rules, to exactly its
expected plan; the self-consistency check in the test suite enforces it
record by record.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass

from .plan import Plan, serialize_plan
from .planner import SYSTEM_TEMPLATE, decompose


class InsufficientVocabulary(Exception):
    pass


SKELETON_NAVIGATION = "navigation"
SKELETON_MANIPULATION = "manipulation"

# Words the template patterns treat as boundaries or verbs; entities
# containing them would make a prompt ambiguous, so they are skipped.
_RESERVED = {
    "to", "and", "because", "so", "then", "if", "while", "where",
    "go", "navigate", "bring", "take", "move", "carry", "grab",
    "the", "a", "an", "it",
}

_GO_VERBS = ("go", "navigate")
_CARRY_VERBS = ("bring", "take", "move", "carry")
_GRAB_ARTICLES = ("a", "the")

_NAV_LEADS = ("", "", "please ", "hey robot ", "robot ")
_NAV_TRAILS = (
    "",
    "",
    " to check if everything is fine",
    " and wait there",
    " because i left something behind",
    " so we can tidy up",
    " then report back",
)
_CARRY_LEADS = (
    "",
    "",
    "i'm hungry, ",
    "i'm feeling lonely, ",
    "guests are here and they are thirsty, ",
    "my son forgot his toy, ",
    "we are out of supplies, ",
)
_ENDINGS = ("", "", ".", "!")


@dataclass(frozen=True)
class DatasetRecord:
    system_header: str
    prompt: str
    expected_plan: Plan
    skeleton: str

    def to_dict(self) -> dict:
        return {
            "system_header": self.system_header,
            "prompt": self.prompt,
            "expected_plan": serialize_plan(self.expected_plan),
            "skeleton": self.skeleton,
        }


def _usable(names) -> list[str]:
    out = []
    for name in names:
        words = name.lower().split()
        if words and not any(w in _RESERVED for w in words):
            out.append(" ".join(words))
    return out


def _header(rng: random.Random, headers: list[list[str]]) -> str:
    names = headers[rng.randrange(len(headers))]
    return SYSTEM_TEMPLATE + "\n" + "\n".join(names)


def _navigation_record(rng, targets, headers) -> DatasetRecord:
    target = targets[rng.randrange(len(targets))]
    verb = _GO_VERBS[rng.randrange(len(_GO_VERBS))]
    lead = _NAV_LEADS[rng.randrange(len(_NAV_LEADS))]
    trail = _NAV_TRAILS[rng.randrange(len(_NAV_TRAILS))]
    end = _ENDINGS[rng.randrange(len(_ENDINGS))]
    article = "the " if rng.random() < 0.8 else ""
    prompt = f"{lead}{verb} to {article}{target}{trail}{end}"
    if rng.random() < 0.5:
        prompt = prompt[0].upper() + prompt[1:]
    return DatasetRecord(
        _header(rng, headers), prompt, decompose(prompt), SKELETON_NAVIGATION
    )


def _manipulation_record(rng, objects, destinations, headers) -> DatasetRecord:
    obj = objects[rng.randrange(len(objects))]
    dest = destinations[rng.randrange(len(destinations))]
    end = _ENDINGS[rng.randrange(len(_ENDINGS))]
    if rng.random() < 0.35:
        # Fetch surface: explicit navigate before the grab.
        place = destinations[rng.randrange(len(destinations))]
        grab_article = _GRAB_ARTICLES[rng.randrange(len(_GRAB_ARTICLES))]
        carry = _CARRY_VERBS[rng.randrange(len(_CARRY_VERBS))]
        prompt = (
            f"go to the {place} grab {grab_article} {obj} "
            f"and {carry} it to the {dest}{end}"
        )
    else:
        verb = _CARRY_VERBS[rng.randrange(len(_CARRY_VERBS))]
        lead = _CARRY_LEADS[rng.randrange(len(_CARRY_LEADS))]
        prompt = f"{lead}{verb} the {obj} to the {dest}{end}"
    if rng.random() < 0.5:
        prompt = prompt[0].upper() + prompt[1:]
    return DatasetRecord(
        _header(rng, headers), prompt, decompose(prompt), SKELETON_MANIPULATION
    )


def generate_dataset(
    class_names: list[str],
    headers: list[list[str]],
    n_total: int,
    split_ratio: float,
    seed: int,
) -> dict[str, list[DatasetRecord]]:
    """Deterministic train/test corpus of prompt -> expected-plan pairs.

    split_ratio is the training fraction. Raises InsufficientVocabulary
    when no usable object class or destination name survives filtering.
    """
    if n_total < 2:
        raise ValueError("n_total must be >= 2")
    if not (0.0 < split_ratio < 1.0):
        raise ValueError("split_ratio must be in (0, 1)")
    objects = _usable(class_names)
    destinations = _usable({name for group in headers for name in group})
    destinations = sorted(set(destinations) | set(objects))
    if not objects or not destinations or not headers:
        raise InsufficientVocabulary(
            "need at least one usable class name and one header"
        )

    rng = random.Random(seed)
    records = []
    for _ in range(n_total):
        if rng.random() < 0.5:
            records.append(_navigation_record(rng, destinations, headers))
        else:
            records.append(_manipulation_record(rng, objects, destinations, headers))
    rng.shuffle(records)
    n_train = int(round(n_total * split_ratio))
    return {"train": records[:n_train], "test": records[n_train:]}


def write_jsonl(records: list[DatasetRecord], path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record.to_dict(), sort_keys=True) + "\n")

import json

import pytest

from subtutor.corpus import Dataset, SubstitutionExample, Vocabulary


@pytest.fixture
def tiny_vocab():
    return Vocabulary(["salt", "sea salt", "tomato", "pepper", "butter",
                       "oil", "margarine", "flour"])


def example(vocab, recipe, source, target):
    ids = frozenset(vocab.resolve(name) for name in recipe)
    return SubstitutionExample(ids, vocab.resolve(source),
                               vocab.resolve(target))


@pytest.fixture
def tiny_dataset(tiny_vocab):
    v = tiny_vocab
    train = [
        example(v, ["salt", "tomato", "pepper"], "salt", "sea_salt"),
        example(v, ["butter", "flour"], "butter", "oil"),
        example(v, ["butter", "flour", "salt"], "butter", "oil"),
        example(v, ["butter", "tomato"], "butter", "margarine"),
    ]
    validation = [example(v, ["salt", "pepper"], "salt", "sea_salt")]
    test = [example(v, ["butter", "flour"], "butter", "oil")]
    return Dataset(train, validation, test)


def write_jsonl(path, rows):
    with open(path, "w", encoding="utf-8") as handle:
        for row in rows:
            handle.write(json.dumps(row) + "\n")
    return path


def write_tsv(path, rows):
    with open(path, "w", encoding="utf-8") as handle:
        for row in rows:
            handle.write("\t".join(str(col) for col in row) + "\n")
    return path

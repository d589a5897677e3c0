"""Writes the mathematics domain for the numbers fixture.

The sum, card and div graphs cover every nonempty subset of the four
numbers, so the averaging method can be checked on all of them.
"""
import itertools
import json
import sys
from fractions import Fraction

NUMBERS = [3, 7, 11, 23]


def name(q):
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def subsets():
    for k in range(1, len(NUMBERS) + 1):
        yield from itertools.combinations(NUMBERS, k)


def main(path):
    sums, cards, divs, averages = [], [], {}, []
    for s in subsets():
        members = [str(x) for x in s]
        total, n = sum(s), len(s)
        sums.append({"args": [members], "value": str(total)})
        cards.append({"args": [members], "value": str(n)})
        divs[(str(total), str(n))] = name(Fraction(total, n))
        averages.append([members, name(Fraction(total, n))])
    doc = {
        "name": "mathematics",
        "classes": {"Number": [str(x) for x in NUMBERS]},
        "functions": [
            {"name": "sum", "arity": 1, "graph": sums},
            {"name": "card", "arity": 1, "graph": cards},
            {"name": "div", "arity": 2, "graph": [{"args": list(k), "value": v} for k, v in sorted(divs.items())]},
        ],
        "relations": [
            {
                "name": "prime",
                "arity": 1,
                "gloss": "{0} is prime",
                "failure": "closed_world",
                "extension": [[str(x)] for x in NUMBERS],
            },
            {
                "name": "average_is",
                "arity": 2,
                "gloss": "the average of {0} is equal to {1}",
                "extension": averages,
            },
        ],
        "methods": [
            {
                "name": "average",
                "given": [{"name": "xs", "domain": {"subsets_of": {"class": "Number"}}}],
                "goal": {"outputs": ["avg"], "relation": "average_is"},
                "instructions": [
                    {"function": "sum", "args": ["xs"], "result": "s"},
                    {"function": "card", "args": ["xs"], "result": "n"},
                    {"function": "div", "args": ["s", "n"], "result": "avg"},
                ],
            }
        ],
    }
    with open(path, "w") as f:
        json.dump(doc, f, indent=2)
        f.write("\n")


if __name__ == "__main__":
    main(sys.argv[1])

"""Regenerate the synthetic restaurant-domain test fixtures (deterministic).

    python scripts/make_fixtures.py
"""
from __future__ import annotations

import csv
import json
import random
from pathlib import Path

FIXTURES = Path(__file__).resolve().parents[1] / "tests" / "fixtures"

NAMES = ["The Eagle", "Blue Spice", "The Wrestlers", "Aromi", "The Punter", "Zizzi", "Cotto",
         "Fitzbillies", "The Mill", "Strada", "Giraffe", "The Phoenix", "Loch Fyne", "Clowns"]
EAT = ["coffee shop", "pub", "restaurant"]
FOOD = ["Chinese", "English", "French", "Indian", "Italian", "Japanese", "Fast food"]
PRICE = ["cheap", "moderate", "high"]
RATING = ["low", "average", "high"]
AREA = ["city centre", "riverside"]
NEAR = ["Burger King", "Café Sicilia", "Clare Hall", "The Bakers", "Crowne Plaza Hotel"]

PRICE_TXT = {"cheap": "cheap", "moderate": "moderately priced", "high": "expensive"}
RATING_TXT = {"low": "a low customer rating", "average": "an average customer rating",
              "high": "a high customer rating"}


def random_mr(rng: random.Random) -> dict[str, str]:
    mr = {"name": rng.choice(NAMES), "eatType": rng.choice(EAT)}
    for attr, values in (("food", FOOD), ("priceRange", PRICE), ("customer rating", RATING),
                         ("area", AREA), ("familyFriendly", ["yes", "no"]), ("near", NEAR)):
        if rng.random() < 0.6:
            mr[attr] = rng.choice(values)
    return mr


def mr_string(mr: dict[str, str]) -> str:
    return ", ".join(f"{a}[{v}]" for a, v in mr.items())


def realise(mr: dict[str, str], rng: random.Random, skip: float) -> str:
    name, eat = mr["name"], mr["eatType"]
    parts = [f"{name} is a {eat}"]
    if "food" in mr and rng.random() >= skip:
        food = "fast food" if mr["food"] == "Fast food" else f"{mr['food']} food"
        parts[0] = f"{name} is a {eat} serving {food}"
    extra = []
    if "priceRange" in mr and rng.random() >= skip:
        extra.append(f"it is {PRICE_TXT[mr['priceRange']]}")
    if "customer rating" in mr and rng.random() >= skip:
        extra.append(f"it has {RATING_TXT[mr['customer rating']]}")
    loc = ""
    if "area" in mr and rng.random() >= skip:
        loc = f" in the {mr['area']} area" if mr["area"] == "riverside" else " in the city centre"
    if "near" in mr and rng.random() >= skip:
        loc += f" near {mr['near']}"
    first = parts[0] + loc + "."
    rest = []
    if extra:
        rest.append(" and ".join(extra).capitalize() + ".")
    if "familyFriendly" in mr and rng.random() >= skip:
        rest.append("It is family friendly." if mr["familyFriendly"] == "yes" else "It is not family friendly.")
    return " ".join([first] + rest)


def main() -> None:
    rng = random.Random(20170101)
    FIXTURES.mkdir(parents=True, exist_ok=True)

    with open(FIXTURES / "e2e_style_100.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, quoting=csv.QUOTE_ALL)
        w.writerow(["mr", "ref"])
        for _ in range(100):
            mr = random_mr(rng)
            w.writerow([mr_string(mr), realise(mr, rng, skip=0.12)])

    # three systems of different quality with human ratings on a 1..6 scale
    lines = []
    for i in range(30):
        mr = random_mr(rng)
        refs = [realise(mr, rng, 0.0), realise(mr, rng, 0.2)]
        outputs = {
            "good": realise(mr, rng, 0.05),
            "mid": realise(mr, rng, 0.4),
            "bad": f"{mr['name']} is a place.",
        }
        ratings = {
            "good": {"informativeness": rng.choice([5.0, 6.0]), "naturalness": rng.choice([4.0, 5.0, 6.0])},
            "mid": {"informativeness": rng.choice([3.0, 4.0]), "naturalness": rng.choice([3.0, 4.0, 5.0])},
            "bad": {"informativeness": rng.choice([1.0, 2.0]), "naturalness": rng.choice([2.0, 3.0])},
        }
        lines.append(json.dumps({"id": f"item-{i:02d}", "mr": mr_string(mr), "references": refs,
                                 "outputs": outputs, "ratings": ratings}, sort_keys=True, ensure_ascii=False))
    (FIXTURES / "rated_systems.jsonl").write_text("\n".join(lines) + "\n", encoding="utf-8")

    wrestlers = "inform(name = the Wrestlers, price range = cheap, customer rating = low)"
    passing = [
        "The Wrestlers is a cheap pub with a low customer rating.",
        "The Wrestlers is cheap and has a low customer rating.",
        "With a low rating, the Wrestlers is a cheap place to eat.",
    ]
    failing = ["Nice place.", "The Wrestlers is chep and low.", "", "Cheap."]

    def rows(texts):
        return "".join(json.dumps({"id": f"v{i}", "mr": wrestlers, "references": [t]}) + "\n"
                       for i, t in enumerate(texts))
    (FIXTURES / "validate_all_pass.jsonl").write_text(rows(passing), encoding="utf-8")
    (FIXTURES / "validate_all_fail.jsonl").write_text(rows(failing), encoding="utf-8")
    mixed = passing + failing + ["The Wrestlers is a cheap pub with a low rating near the river.",
                                 "The Wrestlers is an expensive pub with a low customer rating.",
                                 "Cheap food and a low rating make the Wrestlers popular."]
    (FIXTURES / "validate_mixed.jsonl").write_text(rows(mixed), encoding="utf-8")
    print("fixtures written to", FIXTURES)


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
"""Writes the synthetic demo inputs under data/demo/. Output is a pure function of --seed."""

import argparse
import csv
import json
import random
from datetime import datetime, timedelta, timezone
from pathlib import Path

PLACES = [
    ("Oslo", "NO081", 709037),
    ("Bergen", "NO0A2", 286930),
    ("Trondheim", "NO060", 207595),
    ("Stavanger", "NO0A1", 144699),
    ("Kristiansand", "NO092", 113737),
    ("Tromsø", "NO074", 77544),
    ("Bodø", "NO071", 52803),
    ("Ålesund", "NO0A3", 67114),
    ("Lillehammer", "NO020", 28593),
    ("Drammen", "NO082", 101859),
    ("Skien", "NO091", 55513),
    ("Fræna", "NO0A3", 9800),
    ("Haugesund", "NO0A1", 37444),
    ("Frøya", "NO060", 5200),
    ("Hammerfest", "NO074", 11400),
    ("Sandnes", "NO0A1", 80450),
    ("Bærum", "NO082", 127731),
]

REGIONS = [
    ("NO020", "Innlandet", 371385),
    ("NO060", "Trøndelag", 468702),
    ("NO071", "Nordland", 241235),
    ("NO074", "Troms og Finnmark", 243311),
    ("NO081", "Oslo", 697010),
    ("NO082", "Viken", 1241165),
    ("NO091", "Vestfold og Telemark", 419396),
    ("NO092", "Agder", 307231),
    ("NO0A1", "Rogaland", 479892),
    ("NO0A2", "Vestland", 636531),
    ("NO0A3", "Møre og Romsdal", 265238),
]

KEYWORDS = ["havvind", "vindkraft", "vindmølle", "vindmøller", "vindmøllene", "vindturbiner", "vindenergi"]

STOPWORDS = """og i jeg det at en et den til er som på de med han av ikke der så var meg seg men ett har om vi min
mitt ha hadde hun nå over da ved fra du ut sin dem oss opp man kan hans hvor eller hva skal selv sjøl her alle vil
bli ble blitt kunne inn når være kom noen noe ville dere deg mot hvis etter ikkje også mer mye bare enn skulle
dette disse denne""".split()

NEGATIVE = [
    "ødelegger naturen", "stygge monstre i fjellet", "protest mot utbyggingen", "fuglene dør",
    "støy og ødelagt utsikt", "naturvernere raser", "nei takk til flere anlegg", "skandale for friluftslivet",
    "ødelagte myrer og veier", "bygdene taper alt",
]
NEUTRAL = [
    "konsesjonen behandles neste uke", "møte i kommunestyret torsdag", "rapport om produksjon publisert",
    "direktoratet sender saken på høring", "nye tall fra statistikkbyrå", "kommunen vurderer søknaden",
    "prosjektet presenteres i morgen", "debatt på biblioteket",
]
POSITIVE = [
    "fantastisk for klimaet", "grønne arbeidsplasser langs kysten", "flott satsing på fornybar",
    "billigere strøm på sikt", "stolt av ingeniørene", "gode nyheter for industrien",
    "fremtiden er fornybar", "spennende teknologi til havs",
]


def iso(t):
    return t.strftime("%Y-%m-%dT%H:%M:%SZ")


def sentence(rng, pool):
    kw = rng.choice(KEYWORDS)
    return f"{rng.choice(pool).capitalize()} {rng.choice(['med', 'og', 'når'])} {kw} {rng.choice(pool)}"


def location_text(rng, place):
    return rng.choice([place, f"{place}, Norge", f"{place}, Norway", f"{place.upper()}", f"Bor i {place}"])


def build_corpus(rng, n_records):
    authors = []
    for i in range(40):
        place = rng.choice(PLACES)[0]
        has_location = rng.random() > 0.12
        authors.append({
            "author_id": f"u{1000 + i}",
            "handle": f"vind_{i:02d}",
            "location": location_text(rng, place) if has_location else None,
        })
    authors.append({"author_id": "u9998", "handle": "jorda_rundt", "location": "Jorda rundt"})
    authors.append({"author_id": "u9999", "handle": "midgard", "location": "Middle Earth"})

    start = datetime(2009, 3, 1, tzinfo=timezone.utc)
    span = (datetime(2022, 10, 31, tzinfo=timezone.utc) - start).total_seconds()
    originals = []
    records = []
    next_id = 1

    def new_id():
        nonlocal next_id
        value = f"{100000 + next_id}"
        next_id += 1
        return value

    while len(records) < n_records:
        roll = rng.random()
        author = rng.choice(authors)
        t = start + timedelta(seconds=int(rng.random() * span))
        geo = None
        if rng.random() < 0.15:
            geo = rng.choice(PLACES)[0]
        rec = {
            "id": new_id(),
            "author_id": author["author_id"],
            "author_handle": author["handle"],
            "created_at": iso(t),
            "text": "",
            "like_count": rng.randrange(0, 40),
            "retweet_count": rng.randrange(0, 12),
            "post_geo": geo,
            "user_location": author["location"],
            "kind": "original",
        }
        if roll < 0.55 or not originals:
            pool = rng.choices([NEGATIVE, NEUTRAL, POSITIVE], weights=[3, 3, 4])[0]
            text = sentence(rng, pool)
            if rng.random() < 0.3:
                text += " https://www.nrk.no/nyheter/" + str(rng.randrange(10000))
            if rng.random() < 0.2:
                text += " \U0001F32C️"
            if rng.random() < 0.05:
                text = f"{rng.choice(KEYWORDS)} !!"
            rec["text"] = text
            originals.append(rec)
        elif roll < 0.75:
            src = rng.choice(originals)
            if src["author_id"] == author["author_id"]:
                continue
            body = src["text"]
            rec["kind"] = "retweet"
            if len(body) > 30 and rng.random() < 0.5:
                marker = f"RT : @{src['author_handle']} " if rng.random() < 0.25 else f"RT @{src['author_handle']}: "
                rec["text"] = f"{marker}{body[:30].rstrip()}..."
            else:
                rec["text"] = f"RT @{src['author_handle']}: {body}"
            rec["created_at"] = iso(datetime.strptime(src["created_at"], "%Y-%m-%dT%H:%M:%SZ").replace(
                tzinfo=timezone.utc) + timedelta(minutes=rng.randrange(1, 600)))
        elif roll < 0.82:
            target = rng.choice(authors)
            rec["kind"] = "retweet"
            rec["text"] = f"RT @{target['handle']}: Dette innlegget om {rng.choice(KEYWORDS)} finnes ikke lenger i…"
        elif roll < 0.92:
            src = rng.choice(originals)
            pool = rng.choice([NEGATIVE, NEUTRAL, POSITIVE])
            rec["kind"] = "quote"
            rec["text"] = (f"{sentence(rng, pool)} https://twitter.com/{src['author_handle']}/status/{src['id']}")
        else:
            rec["text"] = sentence(rng, NEGATIVE) + f" @{rng.choice(authors)['handle']}"
            rec["user_location"] = None
            rec["post_geo"] = None
        records.append(rec)

    rng.shuffle(records)
    return records


def build_annotations(rng, n):
    rows = []
    pools = [NEGATIVE, NEUTRAL, POSITIVE]
    for i in range(n):
        label = i % 3
        text = sentence(rng, pools[label])
        if rng.random() < 0.5:
            text += " " + rng.choice(pools[label])
        rows.append((f"a{i:04d}", text, label))
    rng.shuffle(rows)
    return rows


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--seed", type=int, default=20221001)
    parser.add_argument("--out", type=Path, default=Path(__file__).resolve().parent.parent / "data" / "demo")
    parser.add_argument("--records", type=int, default=200)
    args = parser.parse_args()
    rng = random.Random(args.seed)
    out = args.out
    out.mkdir(parents=True, exist_ok=True)

    with open(out / "corpus.jsonl", "w", encoding="utf-8", newline="\n") as f:
        for rec in build_corpus(rng, args.records):
            f.write(json.dumps(rec, ensure_ascii=False) + "\n")

    with open(out / "regions.csv", "w", encoding="utf-8", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["nuts3_code", "display_name", "population"])
        w.writerows(REGIONS)

    with open(out / "gazetteer.csv", "w", encoding="utf-8", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["place_name", "nuts3_code", "population"])
        w.writerows(PLACES)

    (out / "stopwords.txt").write_text("\n".join(STOPWORDS) + "\n", encoding="utf-8")
    (out / "keywords.txt").write_text("\n".join(KEYWORDS) + "\n", encoding="utf-8")

    with open(out / "annotated.csv", "w", encoding="utf-8", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["id", "text", "label"])
        w.writerows(build_annotations(rng, 300))

    with open(out / "survey.csv", "w", encoding="utf-8", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["region", "year", "share_negative", "source"])
        for code, _, _ in REGIONS:
            for year in (2019, 2020, 2021, 2023):
                w.writerow([code, year, round(0.15 + 0.2 * rng.random(), 3), "demo survey"])

    config = {
        "run_dir": "../../build/demo_run",
        "inputs": {
            "corpus": "corpus.jsonl",
            "gazetteer": "gazetteer.csv",
            "regions": "regions.csv",
            "stopwords": "stopwords.txt",
            "keywords": "keywords.txt",
            "annotations": "annotated.csv",
            "survey": "survey.csv",
        },
        "seed": args.seed,
        "date_window": {"start": "2008-01-01T00:00:00Z", "end": "2022-12-31T23:59:59Z"},
        "classifier": {"backend": "baseline", "hash_bits": 16, "l2": 0.001, "validation_fraction": 0.2},
        "network": {"resolution": 1.0, "min_community_size": 3, "shuffle": False},
        "sample": {"k": 25, "mode": "lowest_margin"},
    }
    (out / "config.json").write_text(json.dumps(config, indent=2) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()

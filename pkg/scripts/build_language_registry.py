#!/usr/bin/env python3
"""Regenerate data/languages.tsv, the shipped default language registry.

The registry holds 6671 rows of (ISO 639-3 code, name, L1 speaker count).
The head of the table lists major world languages with approximate published
first-language speaker figures; the long tail is synthetic but shaped like
real speaker-count distributions (power-law decay down to extinct languages),
with deterministic pseudo-random codes and names. Everything is reproducible
from the fixed seed below, so the committed file never drifts.

Run from the repo root:  python scripts/build_language_registry.py
"""

from __future__ import annotations

import random
from pathlib import Path

TOTAL_LANGUAGES = 6671
SEED = 20230517

# Approximate L1 speaker counts for major languages. These are synthesized
# round-number estimates in the range of commonly published figures, kept
# self-consistent (e.g. relative order of the head languages) rather than
# sourced from any single census year.
HEAD_LANGUAGES = [
    ("cmn", "Mandarin Chinese", 939_000_000),
    ("spa", "Spanish", 485_000_000),
    ("eng", "English", 380_000_000),
    ("ara", "Arabic", 362_000_000),
    ("hin", "Hindi", 345_000_000),
    ("ben", "Bengali", 237_000_000),
    ("por", "Portuguese", 236_000_000),
    ("rus", "Russian", 147_000_000),
    ("jpn", "Japanese", 123_000_000),
    ("pnb", "Western Punjabi", 90_000_000),
    ("yue", "Yue Chinese", 86_100_000),
    ("vie", "Vietnamese", 85_000_000),
    ("tur", "Turkish", 84_000_000),
    ("mar", "Marathi", 83_200_000),
    ("wuu", "Wu Chinese", 83_000_000),
    ("tel", "Telugu", 82_700_000),
    ("kor", "Korean", 81_700_000),
    ("tam", "Tamil", 78_600_000),
    ("deu", "German", 75_300_000),
    ("fra", "French", 74_100_000),
    ("urd", "Urdu", 70_600_000),
    ("jav", "Javanese", 68_300_000),
    ("ita", "Italian", 64_600_000),
    ("pes", "Iranian Persian", 57_200_000),
    ("guj", "Gujarati", 57_100_000),
    ("hau", "Hausa", 54_000_000),
    ("bho", "Bhojpuri", 52_300_000),
    ("yor", "Yoruba", 45_600_000),
    ("kan", "Kannada", 43_700_000),
    ("ind", "Indonesian", 43_600_000),
    ("pol", "Polish", 40_600_000),
    ("orm", "Oromo", 37_400_000),
    ("mal", "Malayalam", 37_100_000),
    ("ory", "Odia", 34_500_000),
    ("mai", "Maithili", 33_900_000),
    ("aze", "Azerbaijani", 33_800_000),
    ("pan", "Eastern Panjabi", 33_100_000),
    ("mya", "Burmese", 32_900_000),
    ("ukr", "Ukrainian", 32_600_000),
    ("sun", "Sundanese", 32_400_000),
    ("amh", "Amharic", 31_800_000),
    ("ibo", "Igbo", 31_000_000),
    ("uzn", "Northern Uzbek", 29_200_000),
    ("snd", "Sindhi", 25_200_000),
    ("ron", "Romanian", 23_900_000),
    ("tgl", "Tagalog", 23_800_000),
    ("nld", "Dutch", 21_900_000),
    ("kur", "Kurdish", 21_000_000),
    ("tha", "Thai", 20_800_000),
    ("pus", "Pashto", 20_300_000),
    ("hak", "Hakka Chinese", 20_200_000),
    ("zsm", "Standard Malay", 19_100_000),
    ("ceb", "Cebuano", 15_900_000),
    ("nep", "Nepali", 16_500_000),
    ("asm", "Assamese", 15_300_000),
    ("sin", "Sinhala", 15_200_000),
    ("som", "Somali", 16_200_000),
    ("khm", "Khmer", 16_600_000),
    ("mad", "Madurese", 13_600_000),
    ("ell", "Greek", 13_100_000),
    ("hun", "Hungarian", 12_600_000),
    ("zul", "Zulu", 12_100_000),
    ("ces", "Czech", 10_700_000),
    ("swe", "Swedish", 9_600_000),
    ("kin", "Kinyarwanda", 9_800_000),
    ("que", "Quechua", 8_900_000),
    ("xho", "Xhosa", 8_100_000),
    ("bel", "Belarusian", 7_900_000),
    ("bul", "Bulgarian", 7_800_000),
    ("afr", "Afrikaans", 7_200_000),
    ("hat", "Haitian Creole", 7_000_000),
    ("swh", "Swahili", 6_900_000),
    ("dan", "Danish", 5_600_000),
    ("fin", "Finnish", 5_400_000),
    ("slk", "Slovak", 5_200_000),
    ("wol", "Wolof", 5_200_000),
    ("heb", "Hebrew", 5_100_000),
    ("lug", "Ganda", 5_600_000),
    ("pcm", "Nigerian Pidgin", 4_700_000),
    ("nor", "Norwegian", 4_300_000),
    ("luo", "Luo", 4_200_000),
    ("kat", "Georgian", 3_800_000),
    ("hrv", "Croatian", 4_300_000),
    ("bos", "Bosnian", 2_700_000),
    ("lit", "Lithuanian", 2_800_000),
    ("slv", "Slovenian", 2_100_000),
    ("mkd", "Macedonian", 1_900_000),
    ("lav", "Latvian", 1_500_000),
    ("est", "Estonian", 1_100_000),
    ("cym", "Welsh", 600_000),
    ("isl", "Icelandic", 350_000),
    ("mlt", "Maltese", 530_000),
    ("gle", "Irish", 170_000),
]

VOWELS = "aeiou"
CONSONANTS = "bcdfghjklmnpqrstvwyz"


def synthetic_name(rng: random.Random) -> str:
    syllables = rng.randint(2, 4)
    name = ""
    for _ in range(syllables):
        name += rng.choice(CONSONANTS) + rng.choice(VOWELS)
        if rng.random() < 0.3:
            name += rng.choice(CONSONANTS)
    return name.capitalize()


def tail_population(rank: int, tail_size: int) -> int:
    # Power-law decay; the last 250 entries taper linearly to zero so the
    # registry, like the world, includes extinct and dormant languages.
    base = int(2_400_000_000 / (rank + 35) ** 1.32)
    fade_start = tail_size - 250
    if rank > fade_start:
        base = base * max(tail_size - rank, 0) // 250
    return base


def main() -> None:
    out_path = Path(__file__).resolve().parents[1] / "data" / "languages.tsv"
    out_path.parent.mkdir(parents=True, exist_ok=True)

    rng = random.Random(SEED)
    rows = list(HEAD_LANGUAGES)
    taken = {code for code, _, _ in rows}
    tail_size = TOTAL_LANGUAGES - len(rows)
    for rank in range(1, tail_size + 1):
        while True:
            code = "".join(rng.choice("abcdefghijklmnopqrstuvwxyz") for _ in range(3))
            if code not in taken:
                taken.add(code)
                break
        rows.append((code, synthetic_name(rng), tail_population(rank, tail_size)))

    rows.sort(key=lambda r: (-r[2], r[0]))
    with open(out_path, "w", encoding="utf-8") as fh:
        for code, name, population in rows:
            fh.write(f"{code}\t{name}\t{population}\n")

    total = sum(r[2] for r in rows)
    print(f"wrote {len(rows)} languages to {out_path}")
    print(f"total L1 population: {total:,}")


if __name__ == "__main__":
    main()

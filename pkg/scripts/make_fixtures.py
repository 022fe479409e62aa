#!/usr/bin/env python3
"""Regenerate the committed fixture corpora and their golden outputs.

Three fixtures are produced:

* figure2/   -- a 4-language, 2-task story: a new dataset enables a
               previously unmeasurable language, its first submission flips
               the most-under-served ranking, and the enabling dataset tops
               the dataset-credit board.
* diachronic/ -- a 3-stage corpus where a batch of small languages moves the
               linguistic average most, and a later batch of populous
               languages moves the demographic average most.
* corpus/    -- a demo corpus over the shipped 6671-language registry and
               default task list, shaped so the per-task most-under-served
               rankings land on populous uncovered languages.

Every corpus is replayed through the real ingest/fold pipeline and its
narrative properties are asserted before goldens are written, so a committed
fixture can never disagree with the engine that shipped it.

Run from the repo root:  python scripts/make_fixtures.py
"""

from __future__ import annotations

import json
import sys
import tempfile
from datetime import datetime, timedelta, timezone
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from equibench import leaderboard  # noqa: E402
from equibench.ingest import parse_dataset, parse_submission  # noqa: E402
from equibench.jsonio import dumps_canonical  # noqa: E402
from equibench.records import format_timestamp  # noqa: E402
from equibench.registry import load_language_registry, load_task_registry  # noqa: E402
from equibench.store import EventLog  # noqa: E402

FIXTURES = ROOT / "fixtures"
GOLDEN = FIXTURES / "golden"

NER = "named_entity_recognition"
MT = "machine_translation"


class Clock:
    def __init__(self, start: str, step_hours: int = 7):
        self.now = datetime.strptime(start, "%Y-%m-%dT%H:%M:%SZ").replace(tzinfo=timezone.utc)
        self.step = timedelta(hours=step_hours)

    def tick(self) -> str:
        stamp = format_timestamp(self.now)
        self.now += self.step
        return stamp


def dataset(dataset_id, task, languages, name, at, pairs=False, source_url=None):
    doc = {"dataset_id": dataset_id, "task": task, "name": name, "registered_at": at}
    if pairs:
        doc["language_pairs"] = [list(p) for p in languages]
    else:
        doc["languages"] = list(languages)
    if source_url:
        doc["source_url"] = source_url
    return doc


def submission(task, dataset_id, language, metric, value, system, at, contributor=None):
    if isinstance(language, tuple):
        lang_field = {"source": language[0], "target": language[1]}
        lang_tag = f"{language[0]}-{language[1]}"
    else:
        lang_field = language
        lang_tag = language
    doc = {
        "submission_id": f"{task}:{system}:{lang_tag}",
        "task": task,
        "dataset": dataset_id,
        "language": lang_field,
        "metric": metric,
        "value": value,
        "system": system,
        "submitted_at": at,
    }
    if contributor:
        doc["contributor"] = contributor
    return doc


def write_corpus(path: Path, items) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        for item in items:
            fh.write(json.dumps(item, separators=(",", ":"), ensure_ascii=False) + "\n")


def replay(corpus_path: Path, registry_path: Path, tasks_path: Path) -> EventLog:
    registry = load_language_registry(registry_path)
    tasks = load_task_registry(tasks_path)
    tmp = tempfile.NamedTemporaryFile(suffix=".jsonl", delete=False)
    tmp.close()
    Path(tmp.name).unlink()
    log = EventLog(tmp.name, registry, tasks)
    with open(corpus_path, encoding="utf-8") as fh:
        for line in fh:
            item = json.loads(line)
            record = parse_submission(item) if "submission_id" in item else parse_dataset(item)
            log.append(record)
    return log


def write_golden(name: str, doc) -> None:
    GOLDEN.mkdir(parents=True, exist_ok=True)
    (GOLDEN / name).write_text(dumps_canonical(doc), encoding="utf-8")


# ---------------------------------------------------------------------------
# figure2: enabling-dataset story
# ---------------------------------------------------------------------------


def build_figure2() -> None:
    fig_dir = FIXTURES / "figure2"
    fig_dir.mkdir(parents=True, exist_ok=True)
    (fig_dir / "languages.tsv").write_text(
        "laa\tLanguage One\t50000000\n"
        "lbb\tLanguage Two\t30000000\n"
        "lcc\tLanguage Three\t20000000\n"
        "ldd\tLanguage Four\t40000000\n",
        encoding="utf-8",
    )

    clock = Clock("2023-01-02T09:00:00Z", step_hours=26)
    items = [
        dataset("ner-laa-corpus", NER, ["laa"], "NER corpus for Language One", clock.tick()),
        dataset("ner-lbb-corpus", NER, ["lbb"], "NER corpus for Language Two", clock.tick()),
        dataset("ner-lcc-corpus", NER, ["lcc"], "NER corpus for Language Three", clock.tick()),
        dataset(
            "mt-parallel-corpus",
            MT,
            [("lbb", "laa"), ("lcc", "laa")],
            "Parallel corpus into Language One",
            clock.tick(),
            pairs=True,
        ),
        submission(NER, "ner-laa-corpus", "laa", "F1", 20.0, "baseline-tagger", clock.tick()),
        submission(NER, "ner-lbb-corpus", "lbb", "F1", 60.0, "baseline-tagger", clock.tick()),
        submission(NER, "ner-lcc-corpus", "lcc", "F1", 70.0, "baseline-tagger", clock.tick()),
        submission(MT, "mt-parallel-corpus", ("lbb", "laa"), "Bleu", 10.0, "baseline-mt", clock.tick()),
        submission(MT, "mt-parallel-corpus", ("lcc", "laa"), "Bleu", 8.0, "baseline-mt", clock.tick()),
        submission(MT, "mt-parallel-corpus", ("lbb", "laa"), "Bleu", 16.0, "polyglot-v2", clock.tick()),
        submission(MT, "mt-parallel-corpus", ("lcc", "laa"), "Bleu", 13.0, "polyglot-v2", clock.tick()),
        dataset("ner-ldd-corpus", NER, ["ldd"], "NER corpus for Language Four", clock.tick()),
        submission(NER, "ner-ldd-corpus", "ldd", "F1", 75.0, "polyglot-v2", clock.tick()),
    ]
    write_corpus(fig_dir / "corpus.jsonl", items)

    log = replay(fig_dir / "corpus.jsonl", fig_dir / "languages.tsv", ROOT / "data" / "tasks.json")
    before = log.fold(upto=11)
    after = log.state

    ranking_before = leaderboard.underserved_ranking(before, NER, limit=4)
    ranking_after = leaderboard.underserved_ranking(after, NER, limit=4)
    assert [e.code for e in ranking_before.entries][:2] == ["ldd", "laa"], ranking_before
    assert ranking_after.entries[0].code == "laa", ranking_after

    dataset_board = leaderboard.contribution_leaderboard(after, NER, 0.4, "dataset")
    assert dataset_board[0].beneficiary_id == "ner-ldd-corpus", dataset_board

    golden = {
        "underserved_before": ranking_before.to_dict(),
        "underserved_after": ranking_after.to_dict(),
        "dataset_contributions": [row.to_dict() for row in dataset_board],
        "system_contributions": [
            row.to_dict()
            for row in leaderboard.contribution_leaderboard(after, NER, 0.4, "system")
        ],
        "report_ner": leaderboard.task_report(after, NER).to_dict(),
        "report_mt": leaderboard.task_report(after, MT).to_dict(),
    }
    write_golden("figure2.json", golden)
    write_figure2_api_bodies(log)
    print("figure2: ranking flips ldd -> laa; enabling dataset tops the credit board")


def write_figure2_api_bodies(log) -> None:
    """Capture real API bodies over the figure2 fixture for the dashboard mock."""
    from fastapi.testclient import TestClient

    from equibench.api import create_app

    paths = ["/tasks"]
    for task_id in (NER, MT, "word_segmentation"):
        paths += [
            f"/tasks/{task_id}/report",
            f"/tasks/{task_id}/languages",
            f"/tasks/{task_id}/diachronic?tau=0",
            f"/tasks/{task_id}/diachronic?tau=1",
            f"/tasks/{task_id}/contributions?kind=system&tau=0.4",
            f"/tasks/{task_id}/contributions?kind=dataset&tau=0.4",
        ]
        for tau in ("0", "0.4", "1", "2"):
            paths.append(f"/tasks/{task_id}/underserved?tau={tau}&limit=10")
    paths += [
        f"/whatif?task={NER}&language=ldd&utility=0.75",
        f"/whatif?task={NER}&language=lcc&utility=0.2",
        f"/whatif?task={NER}&language=laa&utility=1",
    ]

    bodies = {}
    with TestClient(create_app(log)) as client:
        for path in paths:
            resp = client.get(path)
            assert resp.status_code == 200, (path, resp.status_code)
            bodies[f"GET {path}"] = resp.json()
    write_golden("figure2_api.json", bodies)


# ---------------------------------------------------------------------------
# diachronic: three-stage growth story
# ---------------------------------------------------------------------------

DIA_LOW = [f"ln{c}" for c in "abcdefghij"]
DIA_HIGH = [f"hh{c}" for c in "abcde"]


def build_diachronic() -> None:
    dia_dir = FIXTURES / "diachronic"
    dia_dir.mkdir(parents=True, exist_ok=True)
    rows = [("big", "Bigland", 400_000_000)]
    rows += [(code, f"Smalltongue {code[-1].upper()}", 1_000_000) for code in DIA_LOW]
    rows += [(code, f"Highland {code[-1].upper()}", 100_000_000) for code in DIA_HIGH]
    rows += [("zza", "Resttongue One", 5_000_000), ("zzb", "Resttongue Two", 2_000_000)]
    (dia_dir / "languages.tsv").write_text(
        "".join(f"{c}\t{n}\t{p}\n" for c, n, p in rows), encoding="utf-8"
    )

    clock = Clock("2022-01-10T12:00:00Z", step_hours=13)
    items = [
        dataset("stage1-big-corpus", NER, ["big"], "Stage 1: one populous language", clock.tick()),
        submission(NER, "stage1-big-corpus", "big", "F1", 80.0, "pioneer-tagger", clock.tick()),
    ]
    clock = Clock("2022-06-10T12:00:00Z", step_hours=13)
    items.append(
        dataset("stage2-small-corpus", NER, DIA_LOW, "Stage 2: ten small languages", clock.tick())
    )
    stage2_values = [78.0, 80.0, 82.0, 79.0, 81.0, 77.0, 83.0, 80.0, 78.0, 82.0]
    for code, value in zip(DIA_LOW, stage2_values):
        items.append(
            submission(NER, "stage2-small-corpus", code, "F1", value, "village-tagger", clock.tick())
        )
    clock = Clock("2022-11-10T12:00:00Z", step_hours=13)
    items.append(
        dataset("stage3-high-corpus", NER, DIA_HIGH, "Stage 3: five populous languages", clock.tick())
    )
    stage3_values = [81.0, 79.0, 83.0, 80.0, 82.0]
    for code, value in zip(DIA_HIGH, stage3_values):
        items.append(
            submission(NER, "stage3-high-corpus", code, "F1", value, "metropolis-tagger", clock.tick())
        )
    write_corpus(dia_dir / "corpus.jsonl", items)

    log = replay(dia_dir / "corpus.jsonl", dia_dir / "languages.tsv", ROOT / "data" / "tasks.json")
    # Stage boundaries by seq: stage1 = 1..2, stage2 = 3..13, stage3 = 14..19.
    for tau in (0.0, 1.0):
        series = leaderboard.diachronic_series(log, NER, tau)
        assert len(series) == 19
    m0 = lambda upto: leaderboard.task_report(log.fold(upto), NER).linguistic_avg  # noqa: E731
    m1 = lambda upto: leaderboard.task_report(log.fold(upto), NER).demographic_avg  # noqa: E731
    d0_stage2 = m0(13) - m0(2)
    d0_stage3 = m0(19) - m0(13)
    d1_stage2 = m1(13) - m1(2)
    d1_stage3 = m1(19) - m1(13)
    assert d0_stage2 > d0_stage3, (d0_stage2, d0_stage3)
    assert d1_stage3 > d1_stage2, (d1_stage2, d1_stage3)
    print(
        f"diachronic: dM0 stage2 {d0_stage2:.4f} > stage3 {d0_stage3:.4f}; "
        f"dM1 stage3 {d1_stage3:.4f} > stage2 {d1_stage2:.4f}"
    )


# ---------------------------------------------------------------------------
# corpus: demo corpus over the shipped registry
# ---------------------------------------------------------------------------

NER_SCORES = {
    "eng": 93.0, "spa": 88.0, "por": 84.0, "rus": 80.0, "jpn": 79.0, "deu": 82.0,
    "fra": 81.0, "ita": 78.0, "pol": 75.0, "ukr": 73.0, "nld": 77.0, "kor": 72.0,
    "ara": 71.0, "hin": 68.0, "ben": 66.0, "tam": 70.0, "yue": 62.0, "vie": 64.0,
    "tur": 70.0, "mar": 61.0,
}
NER_AFRICAN = {
    "hau": 65.0, "yor": 63.0, "ibo": 60.0, "amh": 58.0, "kin": 57.0, "lug": 55.0,
    "wol": 56.0, "swh": 67.0,
}
QA_SCORES = {
    "cmn": 74.0, "spa": 71.0, "eng": 86.0, "ara": 66.0, "hin": 64.0, "ben": 61.0,
    "rus": 70.0, "yue": 58.0, "vie": 60.0, "tur": 63.0, "mar": 55.0, "wuu": 54.0,
    "tel": 57.0, "pnb": 52.0, "kor": 65.0, "tam": 59.0, "deu": 72.0, "fra": 71.5,
}
TPC_SCORES = {
    "cmn": 78.0, "spa": 75.0, "eng": 89.0, "ara": 72.0, "hin": 73.0, "rus": 74.0,
    "jpn": 76.0, "pnb": 60.0, "yue": 62.0, "vie": 66.0, "tur": 69.0, "mar": 61.0,
    "wuu": 59.0, "tel": 63.0, "kor": 71.0, "tam": 64.0, "deu": 77.0, "fra": 76.0,
    "urd": 65.0, "jav": 58.0, "ita": 74.5, "pes": 67.0, "guj": 62.5, "hau": 57.0,
    "bho": 55.0, "yor": 56.0, "kan": 61.5,
}
MT_PAIRS = {
    ("eng", "deu"): 42.0, ("deu", "eng"): 38.0, ("fra", "eng"): 36.0, ("rus", "eng"): 30.0,
    ("jpn", "eng"): 24.0, ("hin", "eng"): 22.0, ("ben", "eng"): 18.0, ("tur", "eng"): 25.0,
    ("kor", "eng"): 21.0, ("eng", "fra"): 39.0,
}


def build_corpus() -> None:
    corpus_dir = FIXTURES / "corpus"
    corpus_dir.mkdir(parents=True, exist_ok=True)
    clock = Clock("2022-06-01T08:00:00Z", step_hours=41)
    items = []

    # NER: one English corpus, one broad multilingual corpus, one African pack.
    panx_langs = sorted(NER_SCORES)
    items.append(dataset("conll-en-news", NER, ["eng"], "English newswire NER", clock.tick(),
                         source_url="https://example.org/conll-en-news"))
    items.append(dataset("panx-wiki", NER, panx_langs, "Wikipedia NER pack", clock.tick()))
    items.append(dataset("masakha-west", NER, sorted(NER_AFRICAN), "African languages NER pack", clock.tick()))
    items.append(submission(NER, "conll-en-news", "eng", "F1", 89.5, "bilstm-crf-baseline", clock.tick()))
    for code in panx_langs:
        items.append(submission(NER, "panx-wiki", code, "F1", NER_SCORES[code], "xlmr-large-ft",
                                clock.tick(), contributor="nlp-lab-a"))
    for code in sorted(NER_SCORES.keys() - {"eng", "spa"}):
        # a weaker system that never beats the strong one
        items.append(submission(NER, "panx-wiki", code, "F1", NER_SCORES[code] - 6.0,
                                "mbert-base-ft", clock.tick()))
    for code in sorted(NER_AFRICAN):
        items.append(submission(NER, "masakha-west", code, "F1", NER_AFRICAN[code], "afro-xlmr",
                                clock.tick(), contributor="nlp-lab-b"))

    # Extractive QA: two overlapping packs.
    xquad_langs = sorted(k for k in QA_SCORES if k in
                         {"cmn", "spa", "eng", "ara", "hin", "rus", "vie", "tur", "deu"})
    mlqa_langs = sorted(QA_SCORES.keys() - set(xquad_langs))
    items.append(dataset("xquad-extended", "qa_extractive", xquad_langs, "Extractive QA pack A", clock.tick()))
    items.append(dataset("mlqa-plus", "qa_extractive", mlqa_langs, "Extractive QA pack B", clock.tick()))
    for code in xquad_langs:
        items.append(submission("qa_extractive", "xquad-extended", code, "F1", QA_SCORES[code],
                                "xlmr-qa-large", clock.tick()))
    for code in mlqa_langs:
        items.append(submission("qa_extractive", "mlqa-plus", code, "F1", QA_SCORES[code],
                                "mt5-qa-base", clock.tick()))

    # Text pair classification: one wide pack plus an English-only classic.
    items.append(dataset("xnli-wide", "text_pair_classification", sorted(TPC_SCORES),
                         "Wide NLI pack", clock.tick()))
    items.append(dataset("snli-extended", "text_pair_classification", ["eng"],
                         "English NLI", clock.tick()))
    for code in sorted(TPC_SCORES):
        items.append(submission("text_pair_classification", "xnli-wide", code, "Accuracy",
                                TPC_SCORES[code], "xlmr-nli", clock.tick()))
    items.append(submission("text_pair_classification", "snli-extended", "eng", "Accuracy",
                            87.0, "mdeberta-nli", clock.tick()))

    # Machine translation: sources keyed for statistics; empirical Bleu max.
    items.append(dataset("wmt-news-core", MT, sorted(MT_PAIRS), "News translation pack",
                         clock.tick(), pairs=True))
    for pair in sorted(MT_PAIRS):
        items.append(submission(MT, "wmt-news-core", pair, "Bleu", MT_PAIRS[pair],
                                "nllb-dense-1b", clock.tick()))
    for pair in [("deu", "eng"), ("fra", "eng")]:
        items.append(submission(MT, "wmt-news-core", pair, "Bleu", MT_PAIRS[pair] - 9.0,
                                "transformer-big-baseline", clock.tick()))

    # Text classification and KG prediction: English-only, like their real-world
    # dataset bases.
    items.append(dataset("sst-sentiment", "text_classification", ["eng"], "Sentiment treebank", clock.tick()))
    items.append(submission("text_classification", "sst-sentiment", "eng", "Accuracy", 95.2,
                            "roberta-large-cls", clock.tick()))
    items.append(submission("text_classification", "sst-sentiment", "eng", "Accuracy", 88.0,
                            "lstm-baseline", clock.tick()))
    items.append(dataset("wordnet-links", "kg_prediction", ["eng"], "Link prediction graph", clock.tick()))
    items.append(submission("kg_prediction", "wordnet-links", "eng", "Hits", 0.42,
                            "kg-transe-ext", clock.tick()))

    write_corpus(corpus_dir / "corpus.jsonl", items)

    log = replay(corpus_dir / "corpus.jsonl", ROOT / "data" / "languages.tsv",
                 ROOT / "data" / "tasks.json")
    state = log.state

    expected_top3 = {
        NER: ["cmn", "pnb", "wuu"],
        "qa_extractive": ["por", "jpn", "urd"],
        "text_pair_classification": ["ben", "por", "ind"],
        MT: ["cmn", "spa", "ara"],
        "text_classification": ["cmn", "spa", "ara"],
        "kg_prediction": ["cmn", "spa", "ara"],
    }
    top3 = {}
    for task_id, expected in expected_top3.items():
        ranking = leaderboard.underserved_ranking(state, task_id, limit=3)
        got = [e.code for e in ranking.entries]
        assert got == expected, f"{task_id}: most under-served {got}, wanted {expected}"
        top3[task_id] = got

    reports = [r.to_dict() for r in leaderboard.all_task_reports(state)]
    write_golden("reports_all.json", reports)
    write_golden(
        "underserved_top3.json",
        {task_id: leaderboard.underserved_ranking(state, task_id, limit=3).to_dict()
         for task_id in expected_top3},
    )
    print(f"corpus: {len(items)} events; per-task most under-served: {top3}")


def main() -> None:
    build_figure2()
    build_diachronic()
    build_corpus()
    print("fixtures written under", FIXTURES)


if __name__ == "__main__":
    main()

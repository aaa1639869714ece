from fractions import Fraction
from pathlib import Path

import pytest

from feynman_residue_lab.corpus import (
    BUNDLED_CORPUS,
    ZETA3,
    corpus_entries,
    load_user_corpus,
    lookup_known_period,
    verify_entry,
)
from feynman_residue_lab.errors import CorpusLoadError
from feynman_residue_lab.graph import banana, fish, triangle, wheel_with_three_spokes


def test_bundled_entries() -> None:
    names = [entry.name for entry in corpus_entries()]

    assert names == ["fish", "triangle", "wheel3"]
    assert BUNDLED_CORPUS[2].expected == pytest.approx(7.2123414189575657)
    assert BUNDLED_CORPUS[2].allowed_deviation == pytest.approx(0.01 * 6 * ZETA3)


def test_lookup_is_relabelling_invariant() -> None:
    known = lookup_known_period(wheel_with_three_spokes().relabel([3, 1, 0, 2]), 4)

    assert known is not None
    assert known.coefficient == 6
    assert known.tag == "zeta3"
    assert lookup_known_period(fish(), 4).coefficient == Fraction(1)


def test_lookup_misses() -> None:
    assert lookup_known_period(triangle(), 4) is None
    assert lookup_known_period(banana(3), 4) is None


def test_load_user_corpus(tmp_path: Path) -> None:
    path = tmp_path / "periods.jsonl"
    path.write_text(
        "# extra periods\n"
        "\n"
        '{"name": "fish6", "graph": "n=2; e=0-1,0-1", "dimension": 4, '
        '"expected": 1.0, "tolerance": 1e-6, "citation": "again"}\n',
        encoding="utf-8",
    )
    entries = load_user_corpus(path)

    assert len(entries) == 1
    assert entries[0].graph == fish()
    assert entries[0].exact is None
    assert [e.name for e in corpus_entries(path)][-1] == "fish6"


_RECORD = '{"name": "x", "dimension": 4, "expected": 1, '


@pytest.mark.parametrize(
    "line, message",
    [
        ("{not json", "invalid JSON"),
        (_RECORD + '"graph": "fish", "tolerance": 0}', "line 2"),
        (_RECORD + '"graph": "n=2; e=0-5", "tolerance": 1}', "out of range"),
        (_RECORD + '"graph": "fish", "tolerance": 1, "x": 1}', "line 2"),
    ],
)
def test_bad_corpus_lines_report_line_numbers(tmp_path: Path, line: str, message: str) -> None:
    path = tmp_path / "bad.jsonl"
    path.write_text("# header\n" + line + "\n", encoding="utf-8")

    with pytest.raises(CorpusLoadError, match=message) as info:
        load_user_corpus(path)
    assert info.value.line == 2


def test_verify_gauss_entries() -> None:
    for entry in BUNDLED_CORPUS[:2]:
        result = verify_entry(entry, samples=10_000, seed=0, workers=2)
        assert result.passed, result.to_dict()
        assert result.estimate.method == "gauss-tensor"


@pytest.mark.slow
def test_verify_wheel_with_monte_carlo() -> None:
    result = verify_entry(BUNDLED_CORPUS[2], samples=10_000_000, seed=42, workers=4)

    assert result.estimate.method == "monte-carlo"
    assert result.passed, result.to_dict()


def test_unreadable_corpus_files(tmp_path: Path) -> None:
    with pytest.raises(CorpusLoadError) as missing:
        corpus_entries(tmp_path / "absent.jsonl")
    assert missing.value.line == 0

    binary = tmp_path / "binary.jsonl"
    binary.write_bytes(b"# header\n\xff\xfe\n")
    with pytest.raises(CorpusLoadError, match="UTF-8") as undecodable:
        load_user_corpus(binary)
    assert undecodable.value.line == 2

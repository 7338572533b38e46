import json
import re
from pathlib import Path

FIXTURES = Path(__file__).parent / "fixtures"


def golden_rows():
    return json.loads((FIXTURES / "golden_rows.json").read_text(encoding="utf-8"))


def normalize(text: str) -> str:
    text = re.sub(r"\s+", " ", text).strip()
    return re.sub(r" ([,.;:])", r"\1", text)


def matches_expected(expected: str, sentence: str) -> bool:
    """``...`` in ``expected`` stands for elided text; other pieces must appear in order.

    Without a leading ``...`` the first piece must open the sentence; without
    a trailing one the last piece must close it.
    """
    pieces = [normalize(p) for p in expected.split("...")]
    s = normalize(sentence)
    if len(pieces) == 1:
        return s == pieces[0]
    pos = 0
    if pieces[0]:
        if not s.startswith(pieces[0]):
            return False
        pos = len(pieces[0])
    for piece in pieces[1:-1]:
        if not piece:
            continue
        j = s.find(piece, pos)
        if j < 0:
            return False
        pos = j + len(piece)
    last = pieces[-1]
    return not last or (s.endswith(last) and len(s) - len(last) >= pos)


def any_matches(expected: str, sentences) -> bool:
    return any(matches_expected(expected, s) for s in sentences)

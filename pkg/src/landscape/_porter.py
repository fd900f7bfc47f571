"""Porter stemmer.

Implements the Porter suffix-stripping algorithm with the NLTK-style
extensions (the ``logi`` -> ``log`` rule, the early ``alli`` rule, the
short-word plural handling, and the irregular-form pool). The extended
variant is the one whose outputs match the stemmed vocabulary this
package's preprocessing contract is pinned to ("secur", "cryptographi",
"technolog", ...).
"""

from __future__ import annotations

_VOWELS = frozenset("aeiou")

# Irregular forms short-circuited before the rule cascade.
_POOL = {
    "sky": "sky",
    "skies": "sky",
    "dying": "die",
    "lying": "lie",
    "tying": "tie",
    "news": "news",
    "innings": "inning",
    "outings": "outing",
    "cannings": "canning",
    "howe": "howe",
    "proceed": "proceed",
    "exceed": "exceed",
    "succeed": "succeed",
}


def _is_consonant(word: str, i: int) -> bool:
    ch = word[i]
    if ch in _VOWELS:
        return False
    if ch == "y":
        return True if i == 0 else not _is_consonant(word, i - 1)
    return True


def _measure(stem: str) -> int:
    # m = number of VC sequences in the C?(VC)^m V? decomposition.
    cv = "".join("c" if _is_consonant(stem, i) else "v" for i in range(len(stem)))
    m = 0
    prev = "c"
    for ch in cv:
        if prev == "v" and ch == "c":
            m += 1
        prev = ch
    return m


def _positive_measure(stem: str) -> bool:
    return _measure(stem) > 0


def _contains_vowel(stem: str) -> bool:
    return any(not _is_consonant(stem, i) for i in range(len(stem)))


def _ends_double_consonant(word: str) -> bool:
    return (
        len(word) >= 2
        and word[-1] == word[-2]
        and _is_consonant(word, len(word) - 1)
    )


def _ends_cvc(word: str) -> bool:
    if (
        len(word) >= 3
        and _is_consonant(word, len(word) - 3)
        and not _is_consonant(word, len(word) - 2)
        and _is_consonant(word, len(word) - 1)
        and word[-1] not in ("w", "x", "y")
    ):
        return True
    # Extension: two-letter words shaped vc ("ow", "on") count as short.
    return len(word) == 2 and not _is_consonant(word, 0) and _is_consonant(word, 1)


def _apply_rules(word: str, rules) -> str:
    # First rule whose suffix matches decides; a failed condition stops the scan.
    for suffix, replacement, condition in rules:
        if suffix == "*d":
            if _ends_double_consonant(word):
                stem = word[:-2]
                if condition is None or condition(stem):
                    return stem + replacement
                return word
            continue
        if word.endswith(suffix):
            stem = word[: len(word) - len(suffix)] if suffix else word
            if condition is None or condition(stem):
                return stem + replacement
            return word
    return word


def _step1a(word: str) -> str:
    if word.endswith("ies") and len(word) == 4:
        return word[:-3] + "ie"
    return _apply_rules(
        word,
        [("sses", "ss", None), ("ies", "i", None), ("ss", "ss", None), ("s", "", None)],
    )


def _step1b(word: str) -> str:
    if word.endswith("ied"):
        return word[:-3] + ("ie" if len(word) == 4 else "i")
    if word.endswith("eed"):
        stem = word[:-3]
        return stem + "ee" if _measure(stem) > 0 else word

    intermediate = None
    for suffix in ("ed", "ing"):
        if word.endswith(suffix):
            candidate = word[: len(word) - len(suffix)]
            if _contains_vowel(candidate):
                intermediate = candidate
            break
    if intermediate is None:
        return word

    return _apply_rules(
        intermediate,
        [
            ("at", "ate", None),
            ("bl", "ble", None),
            ("iz", "ize", None),
            ("*d", intermediate[-1], lambda stem: intermediate[-1] not in ("l", "s", "z")),
            ("", "e", lambda stem: _measure(stem) == 1 and _ends_cvc(stem)),
        ],
    )


def _step1c(word: str) -> str:
    # y -> i only when preceded by a consonant in a stem longer than one letter.
    def condition(stem: str) -> bool:
        return len(stem) > 1 and _is_consonant(stem, len(stem) - 1)

    return _apply_rules(word, [("y", "i", condition)])


def _step2(word: str) -> str:
    if word.endswith("alli") and _positive_measure(word[:-4]):
        return _step2(word[:-4] + "al")

    if word.endswith("logi") and _positive_measure(word[:-3]):
        return word[:-3] + "og"

    rules = [
        ("ational", "ate", _positive_measure),
        ("tional", "tion", _positive_measure),
        ("enci", "ence", _positive_measure),
        ("anci", "ance", _positive_measure),
        ("izer", "ize", _positive_measure),
        ("bli", "ble", _positive_measure),
        ("alli", "al", _positive_measure),
        ("entli", "ent", _positive_measure),
        ("eli", "e", _positive_measure),
        ("ousli", "ous", _positive_measure),
        ("ization", "ize", _positive_measure),
        ("ation", "ate", _positive_measure),
        ("ator", "ate", _positive_measure),
        ("alism", "al", _positive_measure),
        ("iveness", "ive", _positive_measure),
        ("fulness", "ful", _positive_measure),
        ("ousness", "ous", _positive_measure),
        ("aliti", "al", _positive_measure),
        ("iviti", "ive", _positive_measure),
        ("biliti", "ble", _positive_measure),
        ("fulli", "ful", _positive_measure),
    ]
    return _apply_rules(word, rules)


def _step3(word: str) -> str:
    rules = [
        ("icate", "ic", _positive_measure),
        ("ative", "", _positive_measure),
        ("alize", "al", _positive_measure),
        ("iciti", "ic", _positive_measure),
        ("ical", "ic", _positive_measure),
        ("ful", "", _positive_measure),
        ("ness", "", _positive_measure),
    ]
    return _apply_rules(word, rules)


def _step4(word: str) -> str:
    def gt1(stem: str) -> bool:
        return _measure(stem) > 1

    rules = [
        ("al", "", gt1),
        ("ance", "", gt1),
        ("ence", "", gt1),
        ("er", "", gt1),
        ("ic", "", gt1),
        ("able", "", gt1),
        ("ible", "", gt1),
        ("ant", "", gt1),
        ("ement", "", gt1),
        ("ment", "", gt1),
        ("ent", "", gt1),
        ("ion", "", lambda stem: gt1(stem) and stem[-1] in ("s", "t")),
        ("ou", "", gt1),
        ("ism", "", gt1),
        ("ate", "", gt1),
        ("iti", "", gt1),
        ("ous", "", gt1),
        ("ive", "", gt1),
        ("ize", "", gt1),
    ]
    return _apply_rules(word, rules)


def _step5a(word: str) -> str:
    if word.endswith("e"):
        stem = word[:-1]
        if _measure(stem) > 1:
            return stem
        if _measure(stem) == 1 and not _ends_cvc(stem):
            return stem
    return word


def _step5b(word: str) -> str:
    return _apply_rules(word, [("ll", "l", lambda stem: _measure(word[:-1]) > 1)])


def stem(word: str) -> str:
    """Stem ``word`` (lowercased first). Words of length <= 2 pass through."""
    word = word.lower()
    if word in _POOL:
        return _POOL[word]
    if len(word) <= 2:
        return word
    for step in (_step1a, _step1b, _step1c, _step2, _step3, _step4, _step5a, _step5b):
        word = step(word)
    return word

"""Text normalization: tokenizing, number spelling, stopwords, lemmatization.

The pipeline turns raw article text into a list of lowercase alphabetic
terms.  The same normalization (minus stopword removal) is applied to
sentiment dictionary entries so that corpus terms and dictionary keys are
directly comparable.

Stage order in :func:`preprocess_text`:

1. tokenize on non-alphanumeric boundaries
2. lowercase
3. rewrite integer tokens as English cardinal words
4. drop mixed alphanumeric / unmappable tokens
5. remove stopwords
6. lemmatize (bundled exception table + ordered suffix rules)
7. remove stopwords again (a lemma may itself be a stopword)
"""

from __future__ import annotations

import re
from functools import lru_cache
from importlib import resources

_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)

_MAX_SPELLED_INT = 10**6  # exclusive upper bound for number-to-words

_ONES = [
    "zero", "one", "two", "three", "four", "five", "six", "seven", "eight",
    "nine", "ten", "eleven", "twelve", "thirteen", "fourteen", "fifteen",
    "sixteen", "seventeen", "eighteen", "nineteen",
]
_TENS = [
    "", "", "twenty", "thirty", "forty", "fifty", "sixty", "seventy",
    "eighty", "ninety",
]


def _data_text(name: str) -> str:
    return resources.files("zmine.data").joinpath(name).read_text(encoding="utf-8")


@lru_cache(maxsize=1)
def default_stopwords() -> frozenset[str]:
    """Bundled English stopword list (one word per line, LF endings)."""
    words = [line.strip() for line in _data_text("stopwords.txt").splitlines()]
    return frozenset(w for w in words if w)


def number_to_words(token: str) -> list[str] | None:
    """Spell a digit-only token as cardinal word tokens.

    Integers in [0, 10^6) spell out, one word per token (21 -> ["twenty",
    "one"]).  Anything larger returns None, meaning the token is dropped.
    Non-digit input is a contract violation.
    """
    if not token or not (token.isascii() and token.isdigit()):
        raise ValueError(f"number_to_words expects a digit string, got {token!r}")
    value = int(token)
    if value >= _MAX_SPELLED_INT:
        return None
    return _spell(value)


def _spell(n: int) -> list[str]:
    if n < 20:
        return [_ONES[n]]
    if n < 100:
        words = [_TENS[n // 10]]
        if n % 10:
            words.append(_ONES[n % 10])
        return words
    if n < 1000:
        words = [_ONES[n // 100], "hundred"]
        if n % 100:
            words.extend(_spell(n % 100))
        return words
    words = _spell(n // 1000) + ["thousand"]
    if n % 1000:
        words.extend(_spell(n % 1000))
    return words


class Lemmatizer:
    """Exception table plus ordered suffix rules, applied to a fixed point.

    Every rule strictly shortens its input, so iteration terminates; the
    fixed point makes the lemmatizer idempotent by construction.  The rule
    and exception files ship with the package so tests can pin them.
    """

    _MIN_RESULT = 3
    _MAX_PASSES = 10

    def __init__(self, rules: list[tuple[re.Pattern, str]], exceptions: dict[str, str]):
        self._rules = rules
        self._exceptions = exceptions

    @classmethod
    def bundled(cls) -> "Lemmatizer":
        return cls(_parse_rules(_data_text("lemma_rules.txt")),
                   _parse_exceptions(_data_text("lemma_exceptions.txt")))

    def lemmatize(self, token: str) -> str:
        current = token
        for _ in range(self._MAX_PASSES):
            replaced = self._exceptions.get(current)
            if replaced is not None:
                if replaced == current:
                    return current  # pinned form
                current = replaced
                continue
            replaced = self._apply_rules(current)
            if replaced is None:
                return current
            current = replaced
        return current

    def _apply_rules(self, token: str) -> str | None:
        for pattern, repl in self._rules:
            m = pattern.match(token)
            if m is None:
                continue
            result = m.expand(repl)
            if len(result) >= self._MIN_RESULT and result != token:
                return result
        return None


def _parse_rules(text: str) -> list[tuple[re.Pattern, str]]:
    rules = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        pattern, _, repl = line.partition("=>")
        rules.append((re.compile(pattern.strip()), repl.strip()))
    return rules


def _parse_exceptions(text: str) -> dict[str, str]:
    table = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        word, _, lemma = line.partition("->")
        table[word.strip()] = lemma.strip()
    return table


@lru_cache(maxsize=1)
def default_lemmatizer() -> Lemmatizer:
    return Lemmatizer.bundled()


def tokenize(raw: str) -> list[str]:
    """Split on non-alphanumeric boundaries (underscore counts as a boundary)."""
    return _TOKEN_RE.findall(raw)


def normalize_term(word: str, lemmatizer: Lemmatizer | None = None) -> str | None:
    """Normalize a single dictionary word: lowercase + lemmatize, no stopwording.

    Returns None for words that do not survive normalization (empty or
    non-alphabetic), mirroring how the corpus pipeline drops such tokens.
    """
    lemmatizer = lemmatizer or default_lemmatizer()
    token = word.strip().lower()
    if not token or not token.isalpha():
        return None
    return lemmatizer.lemmatize(token)


def preprocess_text(
    raw: str,
    stopwords: frozenset[str] | set[str] | None = None,
    lemmatizer: Lemmatizer | None = None,
) -> list[str]:
    """Normalize raw text into an ordered list of terms.

    Unmappable tokens (mixed alphanumerics, out-of-range numbers) are
    dropped, never raised.
    """
    if stopwords is None:
        stopwords = default_stopwords()
    lemmatizer = lemmatizer or default_lemmatizer()

    expanded: list[str] = []
    for token in tokenize(raw):
        token = token.lower()
        if token.isascii() and token.isdigit():
            words = number_to_words(token)
            if words:
                expanded.extend(words)
            continue
        if token.isalpha():
            expanded.append(token)
        # mixed alphanumeric tokens are dropped

    terms = []
    for token in expanded:
        if token in stopwords:
            continue
        lemma = lemmatizer.lemmatize(token)
        if lemma in stopwords:
            continue
        terms.append(lemma)
    return terms

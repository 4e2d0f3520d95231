"""
Porter (1980) stemming for tokens.
"""
from functools import lru_cache

from nltk.stem.porter import PorterStemmer

_stemmer = PorterStemmer(mode=PorterStemmer.ORIGINAL_ALGORITHM)


def is_stemmable(token: str) -> bool:
    """Only pure ASCII-letter tokens of three or more characters are stemmed."""
    return len(token) > 2 and token.isascii() and token.isalpha()


@lru_cache(maxsize=200_000)
def stem(token: str) -> str:
    """
    Stem one token with the original Porter algorithm.

    Tokens containing anything but ASCII letters (hashtags, numbers,
    emoticons, non-Latin words) pass through unchanged, as do words of one
    or two letters, as in the original Porter algorithm.

    Args:
        token: Token surface

    Returns:
        Stemmed token (never empty)
    """
    if not is_stemmable(token):
        return token
    stemmed = _stemmer.stem(token, to_lowercase=False)
    return stemmed or token

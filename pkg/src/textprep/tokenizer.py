"""
Twitter-aware tokenizer.

Tokens are found by one alternation of regular expressions, tried in order
at each position:

1. emoticons from EMOTICONS (must stand apart from surrounding text)
2. URLs and e-mail addresses
3. @mentions and #hashtags
4. numbers with grouping commas or decimal points ("13,000", "3.5")
5. words, with inner apostrophes or hyphens ("don't", "COVID-19")
6. any other single non-space character (punctuation, emoji codepoints)
"""
import re
from typing import List

POSITIVE_EMOTICONS = frozenset({
    ":)", ":-)", ":]", ":-]", "=)", ":D", ":-D", "xD", "XD", ";)", ";-)", ";D",
    ":P", ":-P", ":p", ":-p", "<3", "^_^", "^^", ":*", ":-*", "(:",
})
NEGATIVE_EMOTICONS = frozenset({
    ":(", ":-(", ":[", ":-[", "=(", ":'(", ":'-(", "D:", ":/", ":-/", ":\\",
    ">:(", "</3", "-_-", ":|", ":-|", "):",
})
NEUTRAL_EMOTICONS = frozenset({":o", ":O", ":-o", ":-O", "o_O", "O_o"})

# Shipped emoticon inventory
EMOTICONS = POSITIVE_EMOTICONS | NEGATIVE_EMOTICONS | NEUTRAL_EMOTICONS

POSITIVE_PLACEHOLDER = "posemoticon"
NEGATIVE_PLACEHOLDER = "negemoticon"

_emoticon_alternatives = "|".join(
    re.escape(e) for e in sorted(EMOTICONS, key=lambda e: (-len(e), e))
)

TOKEN_PATTERNS = (
    # Emoticons, only when not glued to other text
    rf"(?<!\S)(?:{_emoticon_alternatives})(?=[\s.,!?]|$)",
    # URLs
    r"(?i:https?://|www\.)\S+",
    # E-mail addresses
    r"[\w.+\-]+@[\w\-]+(?:\.[\w\-]+)+",
    # Mentions and hashtags
    r"[@#]\w+",
    # Numbers
    r"[0-9]+(?:[,.][0-9]+)*",
    # Words
    r"\w+(?:['’\-]\w+)*",
    # Anything else that is not whitespace, one character at a time
    r"[^\w\s]",
)

TOKEN_RE = re.compile("|".join(f"(?:{p})" for p in TOKEN_PATTERNS))


def tokenize(text: str) -> List[str]:
    """
    Split text into tokens.

    Emoticons, hashtags, mentions and URLs survive as single tokens;
    standalone punctuation becomes its own token; whitespace is dropped.

    Args:
        text: Text to split

    Returns:
        Non-empty tokens without whitespace, in text order

    Example:
        >>> tokenize("I <3 this")
        ['I', '<3', 'this']
    """
    return TOKEN_RE.findall(text)


def mark_emoticon_polarity(tokens: List[str]) -> List[str]:
    """Replace positive/negative emoticons with polarity placeholder tokens."""
    marked = []
    for token in tokens:
        if token in POSITIVE_EMOTICONS:
            marked.append(POSITIVE_PLACEHOLDER)
        elif token in NEGATIVE_EMOTICONS:
            marked.append(NEGATIVE_PLACEHOLDER)
        else:
            marked.append(token)
    return marked

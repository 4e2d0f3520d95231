"""
Placeholder normalization for tweets.

Rewrites URLs, e-mail addresses, phone numbers, currency symbols and numbers
into fixed placeholder words before tokenization.
"""
import re
from typing import List, Pattern, Tuple

from pydantic import BaseModel, ConfigDict

# Digits are matched as ASCII only: every ASCII digit run is consumed by the
# phone or number rule, so a second pass finds nothing new.
URL_RE = re.compile(r"(?:https?://|www\.)\S+", re.IGNORECASE)
EMAIL_RE = re.compile(r"[\w.+\-]+@[\w\-]+(?:\.[\w\-]+)+")
PHONE_RE = re.compile(r"(?<![\w</])\+?[0-9](?:[ \-()]{0,2}[0-9]){6,}(?![0-9])")
MONEY_RE = re.compile(r"[$£€]")
# "<3" and "</3" are emoticons, not numbers
NUMBER_RE = re.compile(r"(?<![0-9<])(?<!</)[0-9]+(?:,[0-9]{3}(?![0-9]))*(?:\.[0-9]+)?")

PLACEHOLDERS = {
    "url": "httpaddr",
    "email": "emailaddr",
    "phone": "phonenumbr",
    "money": "moneysymb",
    "number": "numbr",
}

# Fixed application order
RULE_ORDER: List[Tuple[str, Pattern]] = [
    ("url", URL_RE),
    ("email", EMAIL_RE),
    ("phone", PHONE_RE),
    ("money", MONEY_RE),
    ("number", NUMBER_RE),
]


class NormalizerRules(BaseModel):
    """Which placeholder rules are enabled. Order is fixed by RULE_ORDER."""
    model_config = ConfigDict(frozen=True, extra="forbid")

    url: bool = True
    email: bool = True
    phone: bool = True
    money: bool = True
    number: bool = True

    def enabled(self) -> List[Tuple[str, Pattern, str]]:
        """Enabled (name, pattern, placeholder) triples in application order."""
        return [
            (name, pattern, PLACEHOLDERS[name])
            for name, pattern in RULE_ORDER
            if getattr(self, name)
        ]


def _replace(pattern: Pattern, placeholder: str, text: str) -> str:
    def _sub(match: re.Match) -> str:
        source = match.string
        start, end = match.span()
        left = "" if start > 0 and source[start - 1].isspace() else " "
        right = "" if end == len(source) or source[end].isspace() else " "
        return f"{left}{placeholder}{right}"

    return pattern.sub(_sub, text)


def normalize(text: str, rules: NormalizerRules = NormalizerRules()) -> str:
    """
    Replace matched spans with placeholder words.

    A placeholder is separated from its neighbours by a single space, added
    on the left unless the preceding character is whitespace (so a span at
    the very start gets a leading space), and on the right unless the next
    character is whitespace or the text ends.
    Unmatched text is left untouched and normalize(normalize(x)) == normalize(x).

    Args:
        text: Raw tweet text
        rules: Enabled rules

    Returns:
        Normalized text

    Example:
        >>> normalize("pay $5 via a@b.com")
        'pay moneysymb numbr via emailaddr'
    """
    for _, pattern, placeholder in rules.enabled():
        text = _replace(pattern, placeholder, text)
    return text

"""
Tokenizer for VML source text.
"""

import bisect
import re
from dataclasses import dataclass

from core.diagnostics import Diagnostic, Span
from core.exceptions import DiagnosticError

KEYWORDS = frozenset({
    'enum', 'number', 'boolean', 'var', 'context', 'varpoint', 'property',
    'rule', 'range', 'precision', 'unit', 'priorities', 'definitions',
    'maximized', 'minimized',
})

# Longest operators first so that `<=` wins over `<`.
OPERATORS = ('=>', '<=', '>=', '!=', '<', '>', '=', '+', '-', '*', '/', '&',
             '|', '!', '(', ')', '{', '}', '[', ']', ',', ';', ':')

TOKEN_PATTERN = re.compile(
    r'(?P<ws>\s+)'
    r'|(?P<comment>/\*.*?\*/)'
    r'|(?P<open_comment>/\*)'
    r'|(?P<real>\d+\.\d*(?:[eE][-+]?\d+)?|\d+[eE][-+]?\d+'
    r'|\.\d+(?:[eE][-+]?\d+)?)'
    r'|(?P<int>\d+)'
    r'|(?P<id>[A-Za-z_][A-Za-z0-9_]*)'
    r'|(?P<string>"[^"\n]*")'
    r'|(?P<op>' + '|'.join(re.escape(op) for op in OPERATORS) + ')',
    re.DOTALL,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    span: Span

    @property
    def value(self):
        if self.kind == 'int':
            return int(self.text)
        if self.kind == 'real':
            return float(self.text)
        if self.kind == 'string':
            return self.text[1:-1]
        return self.text

    def describe(self):
        if self.kind == 'eof':
            return 'end of input'
        return repr(self.text)


class _LineIndex:
    """Maps offsets to 1-based (line, column) pairs."""

    def __init__(self, text):
        self.starts = [0] + [m.end() for m in re.finditer('\n', text)]

    def span(self, offset, length):
        line = bisect.bisect_right(self.starts, offset)
        return Span(line, offset - self.starts[line - 1] + 1, length, offset)


def scan(text):
    """Tokenize, returning (tokens, diagnostics); the last token is EOF."""
    index = _LineIndex(text)
    tokens, diagnostics = [], []
    position = 0
    while position < len(text):
        match = TOKEN_PATTERN.match(text, position)
        if match is None:
            diagnostics.append(Diagnostic.error(
                index.span(position, 1), 'UnknownCharacter',
                f'Unknown character {text[position]!r}.',
            ))
            position += 1
            continue
        kind = match.lastgroup
        span = index.span(position, match.end() - position)
        if kind == 'open_comment':
            diagnostics.append(Diagnostic.error(
                span, 'UnknownCharacter', 'Unterminated comment.'))
            position = len(text)
            break
        if kind == 'id' and match.group() in KEYWORDS:
            kind = 'keyword'
        if kind not in ('ws', 'comment'):
            tokens.append(Token(kind, match.group(), span))
        position = match.end()
    tokens.append(Token('eof', '', index.span(len(text), 0)))
    return tokens, diagnostics


def tokenize(text):
    """Return the token stream of `text` (without the EOF marker)."""
    tokens, diagnostics = scan(text)
    if diagnostics:
        raise DiagnosticError(diagnostics)
    return tokens[:-1]

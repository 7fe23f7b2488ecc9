"""A small hand-written tokenizer shared by the formula grammars.

Offsets reported in tokens are byte offsets into the UTF-8 encoding of the
input, which is what error messages and spans use.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import ParseError

IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
NUMBER_RE = re.compile(r"[0-9]+")


@dataclass(frozen=True)
class Token:
    kind: str  # "ident", "number", "op", "eof"
    text: str
    start: int
    end: int


def tokenize(text: str, operators) -> list:
    """Split ``text`` into tokens.  ``operators`` lists punctuation, longest first."""
    ops = sorted(operators, key=len, reverse=True)
    # byte offset of every character position
    offsets = [0]
    for ch in text:
        offsets.append(offsets[-1] + len(ch.encode("utf-8")))
    toks = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch == "#":  # comment to end of line
            while i < n and text[i] != "\n":
                i += 1
            continue
        m = IDENT_RE.match(text, i)
        if m:
            toks.append(Token("ident", m.group(), offsets[i], offsets[m.end()]))
            i = m.end()
            continue
        m = NUMBER_RE.match(text, i)
        if m:
            toks.append(Token("number", m.group(), offsets[i], offsets[m.end()]))
            i = m.end()
            continue
        for op in ops:
            if text.startswith(op, i):
                toks.append(Token("op", op, offsets[i], offsets[i + len(op)]))
                i += len(op)
                break
        else:
            raise ParseError(f"unexpected character {ch!r}", offsets[i], text)
    toks.append(Token("eof", "", offsets[n], offsets[n]))
    return toks


class TokenStream:
    def __init__(self, tokens, text):
        self.toks = tokens
        self.pos = 0
        self.text = text

    def peek(self, k=0) -> Token:
        return self.toks[min(self.pos + k, len(self.toks) - 1)]

    def next(self) -> Token:
        t = self.peek()
        self.pos += 1
        return t

    def at(self, text, k=0) -> bool:
        t = self.peek(k)
        return t.kind in ("op", "ident") and t.text == text

    def accept(self, text):
        if self.at(text):
            return self.next()
        return None

    def expect(self, text) -> Token:
        t = self.peek()
        if not self.at(text):
            got = t.text or "end of input"
            raise ParseError(f"expected {text!r}, found {got!r}", t.start, self.text)
        return self.next()

    def expect_ident(self, what="identifier") -> Token:
        t = self.peek()
        if t.kind != "ident":
            got = t.text or "end of input"
            raise ParseError(f"expected {what}, found {got!r}", t.start, self.text)
        return self.next()

    def error(self, msg):
        t = self.peek()
        return ParseError(msg, t.start, self.text)

#!/usr/bin/env python

from typing import Optional, Union

from rich.highlighter import ReprHighlighter
from rich.text import Text

highlighter = ReprHighlighter()


class Verdict:
    """PASS (True), FAIL (False) or SKIP (None)."""

    NAMES = {True: 'PASS', False: 'FAIL', None: 'SKIP'}

    def __init__(self, value: Optional[bool] = None) -> None:
        if value not in (True, False, None):
            raise ValueError('Value must be True, False, or None')
        self.value = value

    @classmethod
    def parse(cls, name: str) -> 'Verdict':
        lookup = {v: k for k, v in cls.NAMES.items()}
        if name not in lookup:
            raise ValueError(f'unknown verdict {name!r}')
        return cls(lookup[name])

    @classmethod
    def combine(cls, verdicts: 'list[Verdict]') -> 'Verdict':
        """FAIL if anything failed, PASS if anything passed, else SKIP."""
        values = [v.value for v in verdicts]
        if False in values:
            return cls(False)
        if True in values:
            return cls(True)
        return cls(None)

    @property
    def name(self) -> str:
        return self.NAMES[self.value]

    @property
    def failed(self) -> bool:
        return self.value is False

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Verdict):
            return self.value == other.value
        return self.value == other

    def __ne__(self, other: object) -> bool:
        return not self == other

    def __hash__(self) -> int:
        return hash(self.value)

    def __bool__(self) -> bool:
        raise TypeError('Verdict cannot be used as a bool')

    def __str__(self) -> str:
        return self.name

    def __repr__(self) -> str:
        return f'Verdict({self.value})'


def color_verdict(val: Union[Verdict, bool, None], /, align_left: int = 0, align_right: int = 0) -> Text:
    verdict = val if isinstance(val, Verdict) else Verdict(val)
    color = {True: 'green', False: 'red', None: 'yellow'}[verdict.value]
    text = Text.from_markup(f'[{color}]{verdict.name}[/]')
    if align_left:
        text.align('left', align_left)
    if align_right:
        text.align('right', align_right)
    return text


def fmt(value: float) -> str:
    return f'{value:.6e}'

#!/usr/bin/env python
"""Structured verification reports.

The text form is line oriented: every section opens with a summary line
`PASS <id> ...` / `FAIL <id> ...` / `SKIP <id> ...` at column 0, followed by
indented check, finding and note lines. Numbers use `{:.6e}`.
"""

import logging
import math
from collections.abc import Iterator
from io import TextIOBase
from json import dumps, loads
from pathlib import Path
from typing import Any, Optional, Union

from rich.console import Console
from rich.text import Text

from TimelikeTubes.util import Verdict, color_verdict, fmt

logger = logging.getLogger('report')


def _clean(metrics: dict[str, float]) -> dict[str, Optional[float]]:
    return {k: (float(v) if math.isfinite(float(v)) else None) for k, v in metrics.items()}


def _metric_text(metrics: dict[str, Optional[float]]) -> str:
    return ' '.join(f'{k}={"nan" if v is None else fmt(v)}' for k, v in metrics.items())


class Check:
    def __init__(
        self, name: str, verdict: Verdict, metrics: Optional[dict[str, float]] = None, note: str = ''
    ) -> None:
        self.name = name
        self.verdict = verdict
        self.metrics = _clean(metrics or {})
        self.note = note

    @classmethod
    def from_dict(cls, data: dict) -> 'Check':
        metrics = {k: (math.nan if v is None else v) for k, v in data.get('metrics', {}).items()}
        return cls(data['name'], Verdict.parse(data['verdict']), metrics, data.get('note', ''))

    def line(self) -> str:
        parts = [self.verdict.name, self.name]
        if self.metrics:
            parts.append(_metric_text(self.metrics))
        if self.note:
            parts.append(f'({self.note})')
        return ' '.join(parts)

    def __iter__(self) -> Iterator[tuple[str, Any]]:
        yield from {
            'name': self.name,
            'verdict': self.verdict.name,
            'metrics': self.metrics,
            'note': self.note,
        }.items()

    def __repr__(self) -> str:
        return f'Check(name={self.name!r}, verdict={self.verdict.name}, metrics={self.metrics!r})'


class Finding:
    """Something the run established that is not a pass/fail criterion."""

    def __init__(self, name: str, message: str, metrics: Optional[dict[str, float]] = None) -> None:
        self.name = name
        self.message = message
        self.metrics = _clean(metrics or {})

    @classmethod
    def from_dict(cls, data: dict) -> 'Finding':
        metrics = {k: (math.nan if v is None else v) for k, v in data.get('metrics', {}).items()}
        return cls(data['name'], data['message'], metrics)

    def line(self) -> str:
        text = f'FINDING {self.name}: {self.message}'
        if self.metrics:
            text += ' ' + _metric_text(self.metrics)
        return text

    def __iter__(self) -> Iterator[tuple[str, Any]]:
        yield from {'name': self.name, 'message': self.message, 'metrics': self.metrics}.items()

    def __repr__(self) -> str:
        return f'Finding(name={self.name!r}, message={self.message!r})'


class Section:
    def __init__(self, id_: str, title: str = '') -> None:
        self.id = id_
        self.title = title
        self.checks: list[Check] = []
        self.findings: list[Finding] = []
        self.notes: list[str] = []

    def add(self, name: str, verdict: Union[Verdict, bool, None], note: str = '', **metrics: float) -> Check:
        if not isinstance(verdict, Verdict):
            verdict = Verdict(None if verdict is None else bool(verdict))
        check = Check(name, verdict, metrics, note)
        self.checks.append(check)
        if verdict.failed:
            logger.warning('%s: %s failed', self.id, check.line())
        return check

    def find(self, name: str, message: str, **metrics: float) -> Finding:
        finding = Finding(name, message, metrics)
        self.findings.append(finding)
        logger.warning('%s', finding.line())
        return finding

    def note(self, text: str) -> None:
        self.notes.append(text)

    @property
    def verdict(self) -> Verdict:
        return Verdict.combine([c.verdict for c in self.checks])

    def counts(self) -> dict[str, int]:
        out = {'PASS': 0, 'FAIL': 0, 'SKIP': 0}
        for check in self.checks:
            out[check.verdict.name] += 1
        return out

    def summary_line(self) -> str:
        counts = self.counts()
        return (
            f'{self.verdict.name} {self.id} passed={counts["PASS"]} '
            f'failed={counts["FAIL"]} skipped={counts["SKIP"]}'
        )

    def lines(self) -> list[str]:
        out = [self.summary_line()]
        if self.title:
            out.append(f'  # {self.title}')
        out.extend(f'  {c.line()}' for c in self.checks)
        out.extend(f'  {f.line()}' for f in self.findings)
        out.extend(f'  note: {n}' for n in self.notes)
        return out

    @classmethod
    def from_dict(cls, data: dict) -> 'Section':
        section = cls(data['id'], data.get('title', ''))
        section.checks = [Check.from_dict(c) for c in data.get('checks', [])]
        section.findings = [Finding.from_dict(f) for f in data.get('findings', [])]
        section.notes = list(data.get('notes', []))
        return section

    def __iter__(self) -> Iterator[tuple[str, Any]]:
        yield from {
            'id': self.id,
            'title': self.title,
            'verdict': self.verdict.name,
            'checks': [dict(c) for c in self.checks],
            'findings': [dict(f) for f in self.findings],
            'notes': self.notes,
        }.items()

    def __repr__(self) -> str:
        return f'Section(id={self.id!r}, verdict={self.verdict.name}, checks=[...{len(self.checks)}])'


class VerificationReport:
    def __init__(self, title: str, sections: Optional[list[Section]] = None) -> None:
        self.title = title
        self.sections: list[Section] = sections if sections is not None else []

    def section(self, id_: str, title: str = '') -> Section:
        section = Section(id_, title)
        self.sections.append(section)
        return section

    def __getitem__(self, id_: str) -> Section:
        for section in self.sections:
            if section.id == id_:
                return section
        raise KeyError(id_)

    @property
    def verdict(self) -> Verdict:
        return Verdict.combine([s.verdict for s in self.sections])

    @property
    def ok(self) -> bool:
        return not self.verdict.failed

    @property
    def findings(self) -> list[Finding]:
        return [f for s in self.sections for f in s.findings]

    def to_text(self) -> str:
        lines = [f'# {self.title}']
        for section in self.sections:
            lines.extend(section.lines())
        lines.append(f'RESULT {self.verdict.name}')
        return '\n'.join(lines) + '\n'

    def render(self, console: Console) -> None:
        """Print the text form, coloring verdict words when the console allows it."""
        for line in self.to_text().splitlines():
            stripped = line.lstrip(' ')
            word, _, rest = stripped.partition(' ')
            if word in Verdict.NAMES.values():
                indent = ' ' * (len(line) - len(stripped))
                console.print(Text.assemble(indent, color_verdict(Verdict.parse(word)), ' ', rest))
            elif line.startswith('RESULT '):
                console.print(Text.assemble('RESULT ', color_verdict(self.verdict)))
            else:
                console.print(Text(line))

    def __iter__(self) -> Iterator[tuple[str, Any]]:
        yield from {
            'title': self.title,
            'verdict': self.verdict.name,
            'sections': [dict(s) for s in self.sections],
        }.items()

    def to_json(self) -> str:
        return dumps(dict(self), indent=2)

    @classmethod
    def from_dict(cls, data: dict) -> 'VerificationReport':
        return cls(data['title'], [Section.from_dict(s) for s in data.get('sections', [])])

    @classmethod
    def from_json(cls, data: Union[str, bytes, TextIOBase]) -> 'VerificationReport':
        if isinstance(data, TextIOBase):
            data = data.read()
        return cls.from_dict(loads(data))

    def save(self, file: Union[str, Path], as_json: bool = False) -> None:
        text = self.to_json() if as_json else self.to_text()
        Path(file).write_text(text, newline='\n')
        logger.info('Wrote %s report to %s', 'JSON' if as_json else 'text', file)

    def __repr__(self) -> str:
        return f'VerificationReport(title={self.title!r}, sections=[...{len(self.sections)}])'

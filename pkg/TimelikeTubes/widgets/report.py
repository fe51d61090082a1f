#!/usr/bin/env python

import logging
from pathlib import Path
from typing import Optional, Union

from rich.text import Text
from textual.binding import Binding
from textual.widgets import Label, Tree
from textual.widgets.tree import TreeNode
from textual_fspicker import FileOpen, FileSave

from TimelikeTubes.report import Check, Finding, Section, VerificationReport
from TimelikeTubes.util import Verdict, color_verdict, fmt, highlighter

logger = logging.getLogger('widgets.report')


class Entry:
    """Tree node payload: a check, a finding or a note, and how to label it."""

    def __init__(self, name: str, item: Union[Check, Finding, str]) -> None:
        self.name = name
        self.item = item

    @property
    def verdict(self) -> Optional[Verdict]:
        return self.item.verdict if isinstance(self.item, Check) else None

    def get_label(self) -> Text:
        if isinstance(self.item, Check):
            metrics = ' '.join(f'{k}={"nan" if v is None else fmt(v)}' for k, v in self.item.metrics.items())
            return Text.assemble(
                color_verdict(self.item.verdict, align_left=4),
                ' ',
                Text.from_markup(f'[b]{self.name}[/b] '),
                highlighter(metrics),
            )
        if isinstance(self.item, Finding):
            return Text.assemble(Text.from_markup('[magenta]FINDING[/] '), Text.from_markup(f'[b]{self.name}[/b]'))
        return Text.assemble(Text.from_markup('[dim]note[/] '), self.item)

    def detail(self) -> str:
        if isinstance(self.item, (Check, Finding)):
            return self.item.line()
        return self.item

    def __repr__(self) -> str:
        return f'Entry(name={self.name!r}, item={self.item!r})'


class ReportTree(Tree):
    BINDINGS = [
        ('o', 'open', 'Open'),
        ('S', 'save', 'Save'),
        ('f', 'toggle_failures', 'Failures only'),
        Binding('space', 'toggle_node', 'Toggle', show=False),
    ]

    def __init__(self, *args, **kwargs) -> None:
        super().__init__('Report', *args, **kwargs)
        logger.debug('ReportTree.__init__()')
        self.root.expand()
        self.selected: Optional[TreeNode] = None
        self.failures_only = False
        self.report: Optional[VerificationReport] = None

    def check_action(self, action: str, parameters: tuple[object, ...]) -> bool | None:
        if action in ('save', 'toggle_failures'):
            return self.report is not None
        return True

    def action_open(self) -> None:
        self.run_worker(self._open())

    async def _open(self) -> None:
        file = self.app.config.get('file')
        if not file:
            file = await self.app.push_screen_wait(FileOpen())
        if not file:
            return

        logger.info('Opening %r', file)
        with Path(file).open() as fp:
            self.set_report(VerificationReport.from_json(fp))
        self.refresh_bindings()

    def action_save(self) -> None:
        self.run_worker(self._save())

    async def _save(self) -> None:
        file = self.app.config.get('outfile')
        if not file:
            file = await self.app.push_screen_wait(FileSave())
        if not file or self.report is None:
            return
        logger.info('Saving to %r', file)
        self.report.save(file, as_json=Path(file).suffix != '.txt')

    def action_toggle_failures(self) -> None:
        self.failures_only = not self.failures_only
        if self.report is not None:
            self.set_report(self.report)

    def on_tree_node_highlighted(self, event: Tree.NodeHighlighted) -> None:
        self.selected = event.node
        data = event.node.data
        text = data.detail() if isinstance(data, Entry) else ''
        if isinstance(data, Section):
            text = data.summary_line()
        self.app.query_one('#detail', Label).update(text)
        self.app.refresh_bindings()

    def _section_label(self, section: Section) -> Text:
        counts = section.counts()
        return Text.assemble(
            color_verdict(section.verdict, align_left=4),
            ' ',
            Text.from_markup(f'[b]{section.id}[/b] '),
            Text(section.title, style='italic'),
            f'  ({counts["PASS"]}/{counts["FAIL"]}/{counts["SKIP"]})',
        )

    def set_report(self, report: VerificationReport) -> None:
        self.report = report
        self.root.remove_children()
        self.root.set_label(Text.assemble(color_verdict(report.verdict), ' ', report.title))

        for section in report.sections:
            if self.failures_only and not section.verdict.failed:
                continue
            node = self.root.add(self._section_label(section), data=section)
            for check in section.checks:
                if self.failures_only and not check.verdict.failed:
                    continue
                entry = Entry(check.name, check)
                node.add_leaf(entry.get_label(), data=entry)
            for finding in section.findings:
                entry = Entry(finding.name, finding)
                node.add_leaf(entry.get_label(), data=entry)
            if not self.failures_only:
                for note in section.notes:
                    entry = Entry('note', note)
                    node.add_leaf(entry.get_label(), data=entry)
            if self.failures_only or section.verdict.failed:
                node.expand()

        self.root.expand()
        logger.debug('set_report(%r), failures_only=%s', report, self.failures_only)

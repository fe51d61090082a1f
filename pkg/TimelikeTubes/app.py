#!/usr/bin/env python3

import logging

from textual.app import App, ComposeResult
from textual.widgets import Footer, Header, Label

from TimelikeTubes.widgets.report import ReportTree

logger = logging.getLogger('app')


class ReportExplorerApp(App):
    TITLE = 'Timelike tube reports'

    def __init__(self, config: dict) -> None:
        self.config = config
        super().__init__()

    def on_mount(self) -> None:
        if self.config.get('file'):
            self.query_one('#tree', ReportTree).action_open()

    def compose(self) -> ComposeResult:
        yield Header()
        yield Label(id='detail', markup=False)
        yield ReportTree(id='tree')
        yield Footer()

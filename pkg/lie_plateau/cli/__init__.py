"""
Command-line orchestration: setups, commands and reports
"""

from .commands import (
    COMMANDS,
    CommandResult,
    cmd_dla,
    cmd_purity,
    cmd_variance,
    cmd_montecarlo,
    cmd_depth,
    cmd_reproduce_si,
)
from .reports import RunReport, load_reports, write_report, write_reports, write_table, print_summary
from .setups import SETUPS, setup_problem

__all__ = [
    'COMMANDS',
    'CommandResult',
    'cmd_dla',
    'cmd_purity',
    'cmd_variance',
    'cmd_montecarlo',
    'cmd_depth',
    'cmd_reproduce_si',
    'RunReport',
    'load_reports',
    'write_report',
    'write_reports',
    'write_table',
    'print_summary',
    'SETUPS',
    'setup_problem',
]

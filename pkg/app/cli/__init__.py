"""
Command-line subcommands; each module registers its parser and handler.
"""
import argparse

from app.cli import af, correlate, florentine, generate, otfs_sim, verify

SUBCOMMANDS = (generate, verify, correlate, af, florentine, otfs_sim)


def register_all(subparsers: argparse._SubParsersAction) -> None:
    for module in SUBCOMMANDS:
        module.register(subparsers)

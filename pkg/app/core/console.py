# app/core/console.py - status lines on stderr

import sys

from app.core import config

MARKERS = {
    "ok": "✅",
    "fail": "❌",
    "warn": "⚠️ ",
    "start": "🚀",
    "stats": "📊",
    "search": "🔍",
}


def status(message: str, level: str = "ok") -> None:
    """Print an emoji-tagged status line unless CAT1_QUIET is set"""
    if config.QUIET:
        return
    marker = MARKERS.get(level, "")
    print(f"{marker} {message}", file=sys.stderr)


def detail(message: str) -> None:
    if config.QUIET:
        return
    print(f"   {message}", file=sys.stderr)

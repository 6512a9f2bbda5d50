"""
Builtin Channel Listing Tool.

Prints every builtin:<name> input with its parameter syntax, and the rows
of the reproduction suite.
"""

from typing import List

from src.reproduce import ROWS
from src.wire import BUILTIN_PREFIX, BUILTINS


def print_header() -> None:
    print("=" * 60)
    print("🔍 CHANNEL KAPPA BUILTINS")
    print("=" * 60)
    print()


def builtin_lines() -> List[str]:
    """
    One line per builtin: full syntax and description.

    :return: Lines
    """
    width = max(len(BUILTIN_PREFIX + syntax) for syntax, _ in BUILTINS.values())
    return [f"  {BUILTIN_PREFIX + syntax:{width}s}  {description}" for syntax, description in BUILTINS.values()]


def reproduction_lines() -> List[str]:
    width = max(len(name) for name in ROWS)
    return [f"  {name:{width}s}  {description}" for name, (description, _) in ROWS.items()]


def list_builtins() -> None:
    """
    Print the builtin inputs and reproduction rows.
    """
    print_header()
    print("📡 Inputs (use in place of a file path):")
    for line in builtin_lines():
        print(line)
    print()
    print("📊 Reproduction rows (reproduce --only NAME):")
    for line in reproduction_lines():
        print(line)
    print()
    print("💡 Example: python main.py analyze builtin:fourier/3 --format table")


if __name__ == "__main__":
    list_builtins()

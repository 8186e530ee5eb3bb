"""Readers and writers for the competition file formats.

Inputs are the trivial graph format (tgf) and the ASPARTIX format (apx);
outputs are the three answer shapes a solver may print on standard output
(YES/NO decisions, one extension as ``[a,b,c]``, or an extension count).
Parsers are strict about the grammar and lenient about whitespace and a
missing final newline.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from .framework import ArgumentationFramework
from .tasks import Problem

INPUT_FORMATS = ("tgf", "apx")


class ParseError(ValueError):
    """Malformed input document."""


class MissingSeparatorError(ParseError):
    """A tgf document without the ``#`` separator line."""


class DuplicateNodeError(ParseError):
    """The same argument declared twice; that signals a generator bug."""


class UnknownEndpointError(ParseError):
    """An attack mentions an argument that was never declared."""


class FormatSyntaxError(ParseError):
    """A line that matches neither grammar rule of its format."""


class AnswerFormatError(ValueError):
    """Solver output that does not match the answer grammar."""


@dataclass(frozen=True)
class Decision:
    accepted: bool


@dataclass(frozen=True)
class ExtensionAnswer:
    """One extension by argument name; ``None`` when no extension exists."""

    names: tuple[str, ...] | None


@dataclass(frozen=True)
class CountAnswer:
    count: int

    def __post_init__(self) -> None:
        if self.count < 0:
            raise ValueError("extension counts are non-negative")


Answer = Union[Decision, ExtensionAnswer, CountAnswer]


def _as_text(data: str | bytes) -> str:
    if isinstance(data, bytes):
        return data.decode("utf-8")
    return data


def parse_tgf(text: str | bytes) -> ArgumentationFramework:
    """Parse a tgf document: node lines, a ``#`` line, then edge lines.

    Anything after the first token of a node or edge line is a tgf label and
    is ignored.
    """
    names: list[str] = []
    lookup: dict[str, int] = {}
    pairs: list[tuple[int, int]] = []
    seen_separator = False
    for lineno, raw in enumerate(_as_text(text).splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if not seen_separator:
            if line == "#":
                seen_separator = True
                continue
            name = line.split()[0]
            if name in lookup:
                raise DuplicateNodeError(f"line {lineno}: duplicate node {name!r}")
            lookup[name] = len(names)
            names.append(name)
        else:
            tokens = line.split()
            if len(tokens) < 2:
                raise FormatSyntaxError(f"line {lineno}: expected 'source target' edge")
            src, dst = tokens[0], tokens[1]
            for endpoint in (src, dst):
                if endpoint not in lookup:
                    raise UnknownEndpointError(f"line {lineno}: undeclared node {endpoint!r}")
            pairs.append((lookup[src], lookup[dst]))
    if not seen_separator:
        raise MissingSeparatorError("no '#' separator line")
    return ArgumentationFramework(names, pairs)


# Restrictive name charset; avoids any quoting ambiguity in apx rules.
_APX_NAME = r"[A-Za-z0-9][A-Za-z0-9_]*"
_ARG_RULE = re.compile(rf"^arg\s*\(\s*({_APX_NAME})\s*\)\.$")
_ATT_RULE = re.compile(rf"^att\s*\(\s*({_APX_NAME})\s*,\s*({_APX_NAME})\s*\)\.$")


def parse_apx(text: str | bytes) -> ArgumentationFramework:
    """Parse an apx document made of ``arg(name).`` and ``att(a,b).`` rules."""
    names: list[str] = []
    lookup: dict[str, int] = {}
    pairs: list[tuple[int, int]] = []
    for lineno, raw in enumerate(_as_text(text).splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if m := _ARG_RULE.match(line):
            name = m.group(1)
            if name in lookup:
                raise DuplicateNodeError(f"line {lineno}: duplicate argument {name!r}")
            lookup[name] = len(names)
            names.append(name)
        elif m := _ATT_RULE.match(line):
            src, dst = m.group(1), m.group(2)
            for endpoint in (src, dst):
                if endpoint not in lookup:
                    raise UnknownEndpointError(
                        f"line {lineno}: att endpoint {endpoint!r} not declared"
                    )
            pairs.append((lookup[src], lookup[dst]))
        else:
            raise FormatSyntaxError(f"line {lineno}: not an arg(...)./att(...). rule: {line!r}")
    return ArgumentationFramework(names, pairs)


def parse_framework(text: str | bytes, fmt: str) -> ArgumentationFramework:
    if fmt == "tgf":
        return parse_tgf(text)
    if fmt == "apx":
        return parse_apx(text)
    raise ValueError(f"unknown input format {fmt!r}")


def write_answer(answer: Answer) -> str:
    """Render an answer exactly as it must appear on standard output.

    The result carries no spaces and exactly one trailing newline; an absent
    extension (stable semantics only) renders as ``NO``.
    """
    if isinstance(answer, Decision):
        return ("YES" if answer.accepted else "NO") + "\n"
    if isinstance(answer, ExtensionAnswer):
        if answer.names is None:
            return "NO\n"
        return "[" + ",".join(answer.names) + "]\n"
    if isinstance(answer, CountAnswer):
        return f"{answer.count}\n"
    raise TypeError(f"not an answer: {answer!r}")


_COUNT_RE = re.compile(r"^(0|[1-9][0-9]*)$")


def parse_answer(text: str, problem: Problem) -> Answer:
    """Parse solver output for ``problem``.

    Accepts optional spaces after the commas of an extension (solvers in the
    wild emit both shapes) but is otherwise strict about the grammar.
    """
    body = text.strip()
    if problem in (Problem.DC, Problem.DS):
        if body == "YES":
            return Decision(True)
        if body == "NO":
            return Decision(False)
        raise AnswerFormatError(f"expected YES or NO, got {body!r}")
    if problem is Problem.SE:
        if body == "NO":
            return ExtensionAnswer(None)
        if body.startswith("[") and body.endswith("]"):
            inner = body[1:-1].strip()
            if not inner:
                return ExtensionAnswer(())
            names = tuple(part.strip() for part in inner.split(","))
            if all(name and not any(c.isspace() for c in name) for name in names):
                return ExtensionAnswer(names)
        raise AnswerFormatError(f"not an extension: {body!r}")
    if problem is Problem.CE:
        if _COUNT_RE.match(body):
            return CountAnswer(int(body))
        raise AnswerFormatError(f"not a count: {body!r}")
    raise ValueError(f"unknown problem {problem!r}")


_APX_NAME_RE = re.compile(rf"^{_APX_NAME}$")


def _check_serializable(af: ArgumentationFramework, fmt: str) -> None:
    # Refuse names the grammar cannot carry instead of corrupting the file.
    for name in af.names:
        if fmt == "tgf":
            ok = name != "#" and not any(c.isspace() for c in name)
        else:
            ok = bool(_APX_NAME_RE.match(name))
        if not ok:
            raise ValueError(f"argument name {name!r} cannot be written in {fmt}")


def serialize_framework(af: ArgumentationFramework, fmt: str) -> str:
    """Serialize ``af`` so that parsing the result reproduces it exactly.

    Arguments keep their input order; attacks are written sorted by index
    pair (the attack set is unordered, so any fixed order round-trips).
    """
    if fmt not in INPUT_FORMATS:
        raise ValueError(f"unknown input format {fmt!r}")
    _check_serializable(af, fmt)
    attacks = sorted(af.attacks)
    if fmt == "tgf":
        lines = list(af.names)
        lines.append("#")
        lines.extend(f"{af.names[a]} {af.names[b]}" for a, b in attacks)
        return "\n".join(lines) + "\n"
    lines = [f"arg({name})." for name in af.names]
    lines.extend(f"att({af.names[a]},{af.names[b]})." for a, b in attacks)
    return "\n".join(lines) + "\n" if lines else ""

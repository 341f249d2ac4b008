"""Text to analysable program: parse, number constants, lower, check safety."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from pathlib import Path

from .normalize import DEFAULT_EXPANSION_LIMIT, SyntheticConstants, normalize_rules
from .syntax import (ConstantTable, IntegerConstant, SymbolicConstant, map_term,
                     normalize_constants, parse_program, parse_term)


@dataclass
class Program:
    rules: tuple
    constants: ConstantTable
    keys: dict = field(default_factory=dict)
    raw: tuple = ()
    synthetic: SyntheticConstants = field(default_factory=SyntheticConstants)
    warnings: list = field(default_factory=list)

    def decode(self, value: int) -> str:
        """Source spelling of an integer code (symbolic, synthetic or plain)."""
        if value in self.constants.inverse:
            return self.constants.inverse[value]
        if value in self.synthetic.inverse:
            term = parse_term(self.synthetic.inverse[value])
            return str(map_term(term, self._decode_constant))
        return str(value)

    def _decode_constant(self, term):
        if isinstance(term, IntegerConstant) and term.value in self.constants.inverse:
            return SymbolicConstant(self.constants.inverse[term.value])
        return term


def load_program(text: str, keys=None, expansion_limit: int = DEFAULT_EXPANSION_LIMIT) -> Program:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        raw = parse_program(text)
    messages = [str(w.message) for w in caught]
    for w in caught:
        warnings.warn(w.message, w.category, stacklevel=2)
    numbered, table = normalize_constants(raw)
    rules, synth = normalize_rules(numbered, table, expansion_limit, sources=raw)
    return Program(rules, table, dict(keys or {}), tuple(raw), synth, messages)


def load_file(path, keys=None, expansion_limit: int = DEFAULT_EXPANSION_LIMIT) -> Program:
    return load_program(Path(path).read_text(encoding="utf-8"), keys, expansion_limit)

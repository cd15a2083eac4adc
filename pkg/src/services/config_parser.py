"""
src/services/config_parser.py — Literal parsing for run configuration

Parses the command-line literals used by RunConfig:
  complex numbers   "2", "-1.5", "3i", "-i", "1+2i", "0.5-1e-3i"
  fractions         "1/3"
"""

from __future__ import annotations

import re

from src.core.errors import DomainError

_NUMBER = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"


class LiteralParser:
    """Parses complex and fraction literals; every failure is a DomainError."""

    RE_IMAGINARY = re.compile(rf"^(?P<sign>[+-]?)(?P<mag>{_NUMBER})?[ij]$")
    RE_COMPLEX = re.compile(
        rf"^(?P<re>[+-]?{_NUMBER})(?:(?P<sign>[+-])(?P<mag>{_NUMBER})?[ij])?$"
    )
    RE_FRACTION = re.compile(r"^\s*(?P<p>\d+)\s*/\s*(?P<q>\d+)\s*$")

    def parse_complex(self, text: str) -> complex:
        """Parse "re[±im i]" (also a bare imaginary part); spaces are ignored."""
        compact = re.sub(r"\s+", "", str(text))
        m = self.RE_IMAGINARY.match(compact)
        if m:
            return complex(0.0, self._signed(m.group("sign"), m.group("mag")))
        m = self.RE_COMPLEX.match(compact)
        if m:
            imag = 0.0
            if m.group("sign"):
                imag = self._signed(m.group("sign"), m.group("mag"))
            return complex(float(m.group("re")), imag)
        raise DomainError(f"cannot parse complex literal {text!r} (expected e.g. 1.5-2i)")

    def parse_fraction(self, text: str) -> tuple[int, int]:
        m = self.RE_FRACTION.match(str(text))
        if not m:
            raise DomainError(f"cannot parse placement {text!r} (expected P/Q)")
        return int(m.group("p")), int(m.group("q"))

    @staticmethod
    def _signed(sign: str, magnitude: str | None) -> float:
        value = float(magnitude) if magnitude else 1.0
        return -value if sign == "-" else value
